#pragma once

// 3-adic images along an isogeny-torsion graph.
//
// Candidates at each vertex are catalog groups whose number of stable lines,
// cyclic 9- and 27-isogenies and fixed vectors of order 3 and 9 match the
// graph and torsion. Labels agree across edges of degree other than 3 and are
// related by transform_image across 3-edges. Rational-point facts that cannot
// be derived from group theory come from a fact file and only ever exclude.
//
// Fact file lines:
//
//   below; G; feature; citation       no image conjugate into G has the feature
//   exact; G; feature; citation       an image conjugate to G lacks the feature
//   only; G H ...; feature; citation  an image with the feature is one of these
//
// Features: point-N (rational point of order N), subgroup-N (rational torsion
// subgroup of order N), torsion-T (rational torsion exactly T, as in 5 or
// 2x6), isogeny-N (rational cyclic isogeny of degree N).

#include <istream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "galimg/catalog.hpp"
#include "galimg/graph.hpp"

namespace galimg {

/// Whether some conjugate of g fixes a vector of order m; m a power of 3
/// dividing the modulus.
bool has_rational_point_of_order(const SubgroupRep& g, Modulus m);

struct Fact {
  enum class Kind { kBelow, kExact, kOnly };
  Kind kind = Kind::kBelow;
  std::vector<std::string> groups;
  std::string feature;
  std::string citation;
  int line = 0;
};

class FactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FactBase {
  std::vector<Fact> facts;
};

FactBase load_facts(std::istream& in);
FactBase load_facts_file(const std::string& path);

struct LabelProfile {
  std::string label;
  Label parsed;
  std::size_t lines = 0;
  std::size_t cyclic9 = 0, cyclic27 = 0;
  bool point3 = false, point9 = false;
  /// transform_image output label for each stable line, sorted.
  std::vector<std::string> transforms;
};

struct LabelTuple {
  std::vector<std::string> labels;
  std::vector<std::string> flags;

  std::string str() const;  // "(a, b, c)"
  friend bool operator==(const LabelTuple& a, const LabelTuple& b) { return a.labels == b.labels; }
};

struct Classification {
  GraphQuery query;
  std::vector<LabelTuple> tuples;
  /// Facts that removed at least one candidate.
  std::vector<const Fact*> facts_used;
};

struct GraphHit {
  std::string graph_type;
  std::vector<int> vertices;  // 1-based positions where the label occurs
  bool conditional = false;
};

/// Flag attached to tuples containing a group whose curve still has
/// unresolved rational points.
inline const char* kConditionalLabel = "27.243.12.1";
inline const char* kConditionalFlag = "conditional: rational points of this curve are not fully determined";

class Classifier {
 public:
  /// Throws CatalogError when a fact names a label missing from the catalog.
  Classifier(const Catalog& c, FactBase facts);

  Classification classify(const GraphQuery& q) const;
  /// Graph types (with every torsion left open) whose classification
  /// contains the label.
  std::vector<GraphHit> graphs_for_label(const std::string& label) const;

  const std::vector<LabelProfile>& profiles() const { return profiles_; }
  const LabelProfile& profile(const std::string& label) const;
  std::set<std::string> three_torsion_labels() const;
  std::set<std::string> nine_torsion_labels() const;
  const FactBase& facts() const { return facts_; }

  /// The representative of a tuple under graph automorphisms that keep the
  /// torsion; labels compared numerically, the least tuple wins.
  std::vector<std::string> canonical(const GraphQuery& q, const std::vector<std::string>& labels) const;

 private:
  bool excluded_by(const Fact& f, std::size_t cand, const std::set<std::string>& features) const;

  const Catalog* catalog_;
  FactBase facts_;
  std::vector<LabelProfile> profiles_;
  std::map<std::string, std::size_t> index_;
  /// below_[g][i]: profile i is conjugate into the group named g.
  std::map<std::string, std::vector<bool>> below_;
};

/// Printed tuples used as a regression oracle. Lines:
///
///   graph; torsion csv; label,label,...; citation [; suspect]
struct PrintedTuple {
  std::string graph_type, torsion;
  std::vector<std::string> labels;
  std::string citation;
  bool suspect = false;
  int line = 0;
};

std::vector<PrintedTuple> load_printed(std::istream& in);
std::vector<PrintedTuple> load_printed_file(const std::string& path);

struct CaseReport {
  std::string graph_type, torsion;
  std::vector<std::string> matched;
  /// printed tuple and the derived tuple replacing it (differing at one vertex)
  std::vector<std::pair<std::string, std::string>> flagged;
  std::vector<std::string> missing;     // printed, not derived
  std::vector<std::string> unexpected;  // derived, not printed
  std::string citation;

  bool ok() const { return missing.empty() && unexpected.empty(); }
};

/// Groups printed tuples by (graph, torsion) and compares each group with
/// the classifier. A derived tuple that differs from a printed suspect tuple
/// at exactly one vertex is reported as flagged, not as a failure.
std::vector<CaseReport> compare_with_printed(const Classifier& cl, const std::vector<PrintedTuple>& printed);

}  // namespace galimg
