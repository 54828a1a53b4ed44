#include "galimg/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "galimg/cusp.hpp"

namespace galimg {

std::optional<Label> Label::parse(const std::string& text) {
  Label l;
  std::uint32_t* fields[4] = {&l.level, &l.index, &l.genus, &l.tie};
  std::size_t pos = 0;
  for (int k = 0; k < 4; ++k) {
    if (k > 0) {
      if (pos >= text.size() || text[pos] != '.') return std::nullopt;
      ++pos;
    }
    const std::size_t start = pos;
    std::uint64_t v = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9' && pos - start < 9) v = v * 10 + (text[pos++] - '0');
    if (pos == start) return std::nullopt;
    *fields[k] = static_cast<std::uint32_t>(v);
  }
  if (pos != text.size() || l.level == 0 || l.index == 0 || l.tie == 0) return std::nullopt;
  return l;
}

std::string Label::str() const {
  return std::to_string(level) + "." + std::to_string(index) + "." + std::to_string(genus) + "." + std::to_string(tie);
}

CatalogError::CatalogError(const std::string& label, const std::string& what)
    : std::runtime_error(label + ": " + what), label_(label) {}

void Catalog::add(CatalogEntry e) {
  if (by_label_.count(e.label)) throw CatalogError(e.label, "duplicate label");
  by_label_[e.label] = entries_.size();
  entries_.push_back(std::move(e));
}

const CatalogEntry* Catalog::find(const std::string& label) const {
  auto it = by_label_.find(label);
  return it == by_label_.end() ? nullptr : &entries_[it->second];
}

const CatalogEntry& Catalog::at(const std::string& label) const {
  const CatalogEntry* e = find(label);
  if (!e) throw CatalogError(label, "unknown label");
  return *e;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void validate(const CatalogEntry& e) {
  if (!det_full(e.group)) throw CatalogError(e.label, "determinant is not surjective");
  const auto l = e.parsed();
  if (!l) {
    if (!contains_minus_identity(e.group)) throw CatalogError(e.label, "does not contain -I");
    return;
  }
  const Modulus lv = level(e.group);
  if (lv != l->level)
    throw CatalogError(e.label, "level digit " + std::to_string(l->level) + " but computed level " + std::to_string(lv));
  const std::uint64_t idx = index_in_gl2(e.group);
  if (idx != l->index)
    throw CatalogError(e.label, "index digit " + std::to_string(l->index) + " but computed index " + std::to_string(idx));
}

}  // namespace

Catalog load_catalog(std::istream& in) {
  Catalog c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto s1 = line.find(';');
    const auto s2 = s1 == std::string::npos ? s1 : line.find(';', s1 + 1);
    if (s2 == std::string::npos) throw CatalogError("line " + std::to_string(lineno), "expected 'label; modulus; generators'");
    CatalogEntry e;
    e.label = trim(line.substr(0, s1));
    if (e.label.empty()) throw CatalogError("line " + std::to_string(lineno), "empty label");
    try {
      const std::string mod = trim(line.substr(s1 + 1, s2 - s1 - 1));
      std::size_t used = 0;
      const unsigned long n = std::stoul(mod, &used);
      if (used != mod.size() || n < 2 || n > 1000) throw std::invalid_argument("bad modulus '" + mod + "'");
      e.n_stored = static_cast<Modulus>(n);
      e.gens = parse_mat_list(line.substr(s2 + 1), e.n_stored);
      e.group = SubgroupRep::closure(e.gens, e.n_stored);
    } catch (const CatalogError&) {
      throw;
    } catch (const std::exception& ex) {
      throw CatalogError(e.label, ex.what());
    }
    validate(e);
    c.add(std::move(e));
  }
  return c;
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError(path, "cannot open catalog file");
  return load_catalog(in);
}

std::optional<SubgroupRep> at_modulus_27(const SubgroupRep& g) {
  const Modulus n = g.modulus();
  if (n == 27) return g;
  if (27 % n == 0) return full_preimage(g, 27);
  if (n % 27 == 0) {
    const SubgroupRep r = reduce_group(g, 27);
    if (r.order() * (gl2_order(n) / gl2_order(27)) != g.order()) return std::nullopt;
    return r;
  }
  return std::nullopt;
}

std::optional<std::string> identify(const SubgroupRep& g, const Catalog& c) {
  std::optional<std::string> found;
  std::optional<SubgroupRep> g27;
  for (const CatalogEntry& e : c.entries()) {
    const SubgroupRep* probe = &g;
    if (e.n_stored != g.modulus()) {
      if (e.n_stored != 27) continue;
      if (!g27) {
        g27 = at_modulus_27(g);
        if (!g27) return std::nullopt;
      }
      probe = &*g27;
    }
    if (probe->order() != e.group.order() || probe->class_signature() != e.group.class_signature()) continue;
    if (!is_conjugate(*probe, e.group)) continue;
    if (found) throw CatalogError(e.label, "conjugate to " + *found + " as well");
    found = e.label;
  }
  return found;
}

EntryReport verify_entry(const CatalogEntry& e) {
  EntryReport r;
  r.label = e.label;
  r.claimed = e.parsed();
  r.level = level(e.group);
  r.index = index_in_gl2(e.group);
  r.minus_identity = contains_minus_identity(e.group);
  r.det_full = det_full(e.group);
  if (r.det_full) r.genus = genus(with_minus_identity(e.group));
  if (r.claimed) {
    r.level_ok = r.level == r.claimed->level;
    r.index_ok = r.index == r.claimed->index;
    r.genus_ok = r.det_full && r.genus == r.claimed->genus;
  }
  return r;
}

}  // namespace galimg
