#pragma once

// Isogeny-class records from the LMFDB elliptic-curve API or from local
// fixture files, and comparison with classifier output.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "galimg/classifier.hpp"
#include "galimg/graph.hpp"

namespace galimg {

class LmfdbError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CurveRecord {
  std::string label;  // "14.a4"
  Torsion torsion;
  /// 3-adic image label; "1.1.0.1" when the image is all of GL2(Z3).
  std::string adic3 = "1.1.0.1";
  bool cm = false;
  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

struct IsogenyClassRecord {
  std::string class_label;  // "14.a"
  std::vector<CurveRecord> curves;
  std::vector<std::vector<std::uint32_t>> isogeny_matrix;
  friend bool operator==(const IsogenyClassRecord&, const IsogenyClassRecord&) = default;
};

/// "<conductor>.<letters>", e.g. "14.a" or "14450.b".
bool valid_class_label(const std::string& label);
/// Throws LmfdbError unless the matrix is square, symmetric, has 1 on the
/// diagonal and matches the curve count, and every curve label belongs to
/// the class.
void validate_record(const IsogenyClassRecord& rec);

/// Normalized JSON text (the fixture format), stable key order, trailing
/// newline.
std::string record_to_json(const IsogenyClassRecord& rec);
IsogenyClassRecord record_from_json(const std::string& text);

struct ClientOptions {
  std::string base_url = "https://www.lmfdb.org";
  /// Root holding fixtures/<class>.json.
  std::string fixture_dir;
  int timeout_seconds = 30;
  bool offline = true;

  /// Reads LMFDB_BASE_URL, FIXTURE_DIR and LMFDB_TIMEOUT over the given
  /// defaults.
  static ClientOptions from_env(ClientOptions defaults);
};

std::string fixture_path(const ClientOptions& opts, const std::string& class_label);

/// Offline: reads the fixture. Online: queries the API, normalizes, writes
/// the fixture and returns the record; nothing is written on error.
IsogenyClassRecord fetch_class(const std::string& class_label, const ClientOptions& opts);

struct VertexCheck {
  std::string curve;
  Torsion torsion;
  std::string observed, expected;
  bool ok = false;
};

struct CrosscheckReport {
  std::string class_label, graph_type;
  /// Curve indices in the order of the shape's vertices.
  std::vector<int> placement;
  std::string torsion;
  /// Best matching classifier tuple, in curve order; empty if none.
  std::optional<LabelTuple> expected;
  std::vector<VertexCheck> vertices;  // curve order
  bool ok() const;
};

/// The shape whose pairwise isogeny degrees match the matrix, together with
/// one vertex placement. Throws LmfdbError when no shape or more than one
/// shape fits.
std::pair<std::string, std::vector<int>> graph_type_of(const IsogenyClassRecord& rec);

/// Throws LmfdbError for CM classes and for torsion outside the admissible
/// groups of the derived shape.
CrosscheckReport crosscheck(const IsogenyClassRecord& rec, const Classifier& cl);

}  // namespace galimg
