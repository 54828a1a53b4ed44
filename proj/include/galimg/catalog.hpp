#pragma once

// Labelled subgroups N.i.g.n (level, index, genus, tie-break) and the
// catalog file format:
//
//   label; modulus; [a,b,c,d] [a,b,c,d] ...
//
// One entry per line, '#' starts a comment. Labels that are not of the form
// N.i.g.n (for instance "X0(15)") are accepted as named groups; only the
// determinant is validated for those.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "galimg/subgroup.hpp"

namespace galimg {

struct Label {
  std::uint32_t level = 1, index = 1, genus = 0, tie = 1;

  static std::optional<Label> parse(const std::string& text);
  std::string str() const;
  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string& label, const std::string& what);
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

struct CatalogEntry {
  std::string label;
  Modulus n_stored = 27;
  std::vector<Mat2> gens;
  SubgroupRep group = SubgroupRep::trivial(2);

  std::optional<Label> parsed() const { return Label::parse(label); }
};

class Catalog {
 public:
  void add(CatalogEntry e);
  const std::vector<CatalogEntry>& entries() const { return entries_; }
  const CatalogEntry* find(const std::string& label) const;
  const CatalogEntry& at(const std::string& label) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<CatalogEntry> entries_;
  std::map<std::string, std::size_t> by_label_;
};

/// Parses and validates; throws CatalogError naming the offending label (or
/// the line number for syntax errors).
Catalog load_catalog(std::istream& in);
Catalog load_catalog_file(const std::string& path);

/// Group of g moved to modulus 27; nullopt when g is not determined at 27.
std::optional<SubgroupRep> at_modulus_27(const SubgroupRep& g);

/// Label of the unique entry conjugate to g (at the entry's modulus). Throws
/// CatalogError when several entries match.
std::optional<std::string> identify(const SubgroupRep& g, const Catalog& c);

struct EntryReport {
  std::string label;
  std::optional<Label> claimed;
  Modulus level = 1;
  std::uint64_t index = 1;
  std::uint64_t genus = 0;
  bool minus_identity = false;
  bool det_full = false;
  bool level_ok = true, index_ok = true, genus_ok = true;

  bool ok() const { return level_ok && index_ok && genus_ok && det_full; }
};

/// Level and index of the group itself, genus of the curve of +-G.
EntryReport verify_entry(const CatalogEntry& e);

}  // namespace galimg
