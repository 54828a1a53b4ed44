#include "galimg/classifier.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

#include "galimg/isogeny.hpp"

namespace galimg {

bool has_rational_point_of_order(const SubgroupRep& g, Modulus m) {
  if (m < 3 || g.modulus() % m != 0) throw std::invalid_argument("order must be a power of 3 dividing the modulus");
  for (Modulus k = m; k > 1; k /= 3)
    if (k % 3 != 0) throw std::invalid_argument("order must be a power of 3");
  return fixes_vector_of_order(g, m);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<Label> label_key(const std::vector<std::string>& labels) {
  std::vector<Label> key;
  for (const auto& l : labels) key.push_back(Label::parse(l).value_or(Label{}));
  return key;
}

std::string join(const std::vector<std::string>& labels) {
  std::string out = "(";
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? ", " : "") + labels[i];
  return out + ")";
}

}  // namespace

std::string LabelTuple::str() const { return join(labels); }

FactBase load_facts(std::istream& in) {
  static const std::regex feature(R"((point|subgroup|isogeny)-[1-9][0-9]*|torsion-([1-9][0-9]*|2x[2468]))");
  FactBase fb;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (trim(line).empty()) continue;
    const auto parts = split(line, ';');
    const std::string where = "fact line " + std::to_string(lineno) + ": ";
    if (parts.size() != 4) throw FactError(where + "expected 'kind; groups; feature; citation'");
    Fact f;
    f.line = lineno;
    if (parts[0] == "below")
      f.kind = Fact::Kind::kBelow;
    else if (parts[0] == "exact")
      f.kind = Fact::Kind::kExact;
    else if (parts[0] == "only")
      f.kind = Fact::Kind::kOnly;
    else
      throw FactError(where + "unknown kind '" + parts[0] + "'");
    std::istringstream gs(parts[1]);
    for (std::string g; gs >> g;) f.groups.push_back(g);
    if (f.groups.empty()) throw FactError(where + "no group given");
    if (f.kind != Fact::Kind::kOnly && f.groups.size() != 1) throw FactError(where + "exactly one group expected");
    if (!std::regex_match(parts[2], feature)) throw FactError(where + "unknown feature '" + parts[2] + "'");
    f.feature = parts[2];
    if (parts[3].empty()) throw FactError(where + "citation is missing");
    f.citation = parts[3];
    fb.facts.push_back(std::move(f));
  }
  return fb;
}

FactBase load_facts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FactError("cannot open " + path);
  return load_facts(in);
}

Classifier::Classifier(const Catalog& c, FactBase facts) : catalog_(&c), facts_(std::move(facts)) {
  std::vector<SubgroupRep> groups;
  for (const CatalogEntry& e : c.entries()) {
    const auto parsed = e.parsed();
    if (!parsed) continue;
    const auto g = at_modulus_27(e.group);
    if (!g) throw CatalogError(e.label, "group is not determined modulo 27");
    LabelProfile p;
    p.label = e.label;
    p.parsed = *parsed;
    p.lines = stable_lines(*g, 3).size();
    p.cyclic9 = count_stable_cyclic_subgroups(*g, 9);
    p.cyclic27 = count_stable_cyclic_subgroups(*g, 27);
    p.point3 = has_rational_point_of_order(*g, 3);
    p.point9 = has_rational_point_of_order(*g, 9);
    for (const auto& r : transform_label(e.label, c)) {
      if (!r.output_label) throw CatalogError(e.label, "transform along " + to_string(r.line) + " is not in the catalog");
      p.transforms.push_back(*r.output_label);
    }
    std::sort(p.transforms.begin(), p.transforms.end());
    index_[p.label] = profiles_.size();
    profiles_.push_back(std::move(p));
    groups.push_back(*g);
  }
  for (const Fact& f : facts_.facts)
    for (const std::string& name : f.groups) {
      if (!index_.count(name)) throw CatalogError(name, "named in fact line " + std::to_string(f.line) + " but not in the catalog");
      if (f.kind != Fact::Kind::kBelow || below_.count(name)) continue;
      const SubgroupRep& h = groups[index_.at(name)];
      std::vector<bool> into(profiles_.size());
      for (std::size_t i = 0; i < profiles_.size(); ++i) into[i] = is_conjugate_into(groups[i], h);
      below_[name] = std::move(into);
    }
}

const LabelProfile& Classifier::profile(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw CatalogError(label, "unknown label");
  return profiles_[it->second];
}

std::set<std::string> Classifier::three_torsion_labels() const {
  std::set<std::string> out;
  for (const auto& p : profiles_)
    if (p.point3) out.insert(p.label);
  return out;
}

std::set<std::string> Classifier::nine_torsion_labels() const {
  std::set<std::string> out;
  for (const auto& p : profiles_)
    if (p.point9) out.insert(p.label);
  return out;
}

bool Classifier::excluded_by(const Fact& f, std::size_t cand, const std::set<std::string>& features) const {
  if (!features.count(f.feature)) return false;
  const std::string& label = profiles_[cand].label;
  const bool named = std::find(f.groups.begin(), f.groups.end(), label) != f.groups.end();
  switch (f.kind) {
    case Fact::Kind::kBelow:
      return below_.at(f.groups[0])[cand];
    case Fact::Kind::kExact:
      return named;
    case Fact::Kind::kOnly:
      return !named;
  }
  return false;
}

namespace {

std::set<std::string> vertex_features(const GraphShape& g, int v, const std::optional<Torsion>& t) {
  std::set<std::string> f;
  for (std::uint32_t d : g.isogeny_degrees(v)) f.insert("isogeny-" + std::to_string(d));
  if (t) {
    for (std::uint32_t n = 2; n <= t->m2; ++n)
      if (t->m2 % n == 0) f.insert("point-" + std::to_string(n));
    for (std::uint32_t n = 2; n <= t->order(); ++n)
      if (t->order() % n == 0) f.insert("subgroup-" + std::to_string(n));
    f.insert("torsion-" + t->str());
  } else {
    // Only what the edges force.
    const unsigned e2 = g.edge_count(v, 2);
    if (e2 >= 1) f.insert({"point-2", "subgroup-2"});
    if (e2 == 3) f.insert("subgroup-4");
  }
  return f;
}

struct Solver {
  const GraphShape& g;
  const std::vector<LabelProfile>& profiles;
  std::vector<int> cls;                            // vertex -> class
  std::vector<std::vector<std::size_t>> cands;     // class -> candidates
  std::vector<std::size_t> pick;                   // class -> chosen profile
  std::vector<std::vector<std::size_t>> results;   // per vertex profile index

  bool transforms_to(std::size_t a, std::size_t b) const {
    const auto& t = profiles[a].transforms;
    return std::find(t.begin(), t.end(), profiles[b].label) != t.end();
  }

  bool edges_ok(std::size_t upto) const {
    for (const Edge& e : g.edges) {
      if (e.prime != 3) continue;
      const std::size_t cu = cls[e.u], cv = cls[e.v];
      if (cu > upto || cv > upto) continue;
      if (!transforms_to(pick[cu], pick[cv]) || !transforms_to(pick[cv], pick[cu])) return false;
    }
    return true;
  }

  bool vertices_ok() const {
    for (int v = 0; v < g.vertices; ++v) {
      std::vector<std::string> around;
      for (int w : g.neighbors(v, 3)) around.push_back(profiles[pick[cls[w]]].label);
      std::sort(around.begin(), around.end());
      if (around != profiles[pick[cls[v]]].transforms) return false;
    }
    return true;
  }

  void run(std::size_t c) {
    if (c == cands.size()) {
      if (!vertices_ok()) return;
      std::vector<std::size_t> r;
      for (int v = 0; v < g.vertices; ++v) r.push_back(pick[cls[v]]);
      results.push_back(std::move(r));
      return;
    }
    for (std::size_t p : cands[c]) {
      pick[c] = p;
      if (edges_ok(c)) run(c + 1);
    }
  }
};

}  // namespace

std::vector<std::string> Classifier::canonical(const GraphQuery& q, const std::vector<std::string>& labels) const {
  const GraphShape& g = graph_shape(q.graph_type);
  std::vector<std::string> best = labels;
  auto best_key = label_key(best);
  for (const auto& perm : g.automorphisms()) {
    bool keeps = true;
    for (int v = 0; v < g.vertices && keeps; ++v) keeps = q.torsion[perm[v]] == q.torsion[v];
    if (!keeps) continue;
    std::vector<std::string> image(labels.size());
    for (int v = 0; v < g.vertices; ++v) image[v] = labels[perm[v]];
    auto key = label_key(image);
    if (key < best_key) {
      best = std::move(image);
      best_key = std::move(key);
    }
  }
  return best;
}

Classification Classifier::classify(const GraphQuery& q) const {
  validate_query(q);
  const GraphShape& g = graph_shape(q.graph_type);
  Classification out{q, {}, {}};
  std::set<const Fact*> used;

  std::vector<std::vector<std::size_t>> per_vertex(g.vertices);
  for (int v = 0; v < g.vertices; ++v) {
    const auto& t = q.torsion[v];
    const auto features = vertex_features(g, v, t);
    const std::size_t e3 = g.edge_count(v, 3);
    const std::size_t p9 = g.prime_power_paths(v, 3, 2), p27 = g.prime_power_paths(v, 3, 3);
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
      const LabelProfile& p = profiles_[i];
      if (p.lines != e3 || p.cyclic9 != p9 || p.cyclic27 != p27) continue;
      if (t && (p.point3 != (t->order() % 3 == 0) || p.point9 != (t->order() % 9 == 0))) continue;
      bool keep = true;
      for (const Fact& f : facts_.facts)
        if (excluded_by(f, i, features)) {
          used.insert(&f);
          keep = false;
        }
      if (keep) per_vertex[v].push_back(i);
    }
  }

  // Vertices joined by edges of degree other than 3 share a label.
  std::vector<int> parent(g.vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& e : g.edges)
    if (ell_neq_p_rule(e.prime) == EdgeRule::kEqualLabels) parent[find(e.u)] = find(e.v);

  Solver s{g, profiles_, std::vector<int>(g.vertices), {}, {}, {}};
  std::map<int, int> class_of_root;
  for (int v = 0; v < g.vertices; ++v) {
    const int r = find(v);
    auto [it, fresh] = class_of_root.emplace(r, static_cast<int>(s.cands.size()));
    s.cls[v] = it->second;
    if (fresh) {
      s.cands.push_back(per_vertex[v]);
    } else {
      auto& c = s.cands[it->second];
      std::vector<std::size_t> both;
      std::set_intersection(c.begin(), c.end(), per_vertex[v].begin(), per_vertex[v].end(), std::back_inserter(both));
      c = std::move(both);
    }
  }
  s.pick.assign(s.cands.size(), 0);
  s.run(0);

  std::set<std::vector<Label>> seen;
  std::vector<std::pair<std::vector<Label>, LabelTuple>> sorted;
  for (const auto& r : s.results) {
    std::vector<std::string> labels;
    for (std::size_t i : r) labels.push_back(profiles_[i].label);
    labels = canonical(q, labels);
    auto key = label_key(labels);
    if (!seen.insert(key).second) continue;
    LabelTuple t{labels, {}};
    if (std::find(labels.begin(), labels.end(), kConditionalLabel) != labels.end()) t.flags.push_back(kConditionalFlag);
    sorted.emplace_back(std::move(key), std::move(t));
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, t] : sorted) out.tuples.push_back(std::move(t));
  for (const Fact& f : facts_.facts)
    if (used.count(&f)) out.facts_used.push_back(&f);
  return out;
}

std::vector<GraphHit> Classifier::graphs_for_label(const std::string& label) const {
  profile(label);
  std::vector<GraphHit> out;
  for (const std::string& type : graph_types()) {
    const GraphShape& g = graph_shape(type);
    GraphQuery q{type, std::vector<std::optional<Torsion>>(g.vertices)};
    const Classification c = classify(q);
    std::set<int> where;
    for (const auto& t : c.tuples)
      for (const auto& perm : g.automorphisms())
        for (int v = 0; v < g.vertices; ++v)
          if (t.labels[perm[v]] == label) where.insert(v + 1);
    if (where.empty()) continue;
    out.push_back(GraphHit{type, {where.begin(), where.end()}, label == kConditionalLabel});
  }
  return out;
}

std::vector<PrintedTuple> load_printed(std::istream& in) {
  std::vector<PrintedTuple> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (trim(line).empty()) continue;
    const auto parts = split(line, ';');
    const std::string where = "printed tuple line " + std::to_string(lineno) + ": ";
    if (parts.size() != 4 && parts.size() != 5) throw std::invalid_argument(where + "expected 4 or 5 fields");
    PrintedTuple p;
    p.line = lineno;
    p.graph_type = parts[0];
    p.torsion = parts[1];
    p.labels = split(parts[2], ',');
    p.citation = parts[3];
    if (p.citation.empty()) throw std::invalid_argument(where + "citation is missing");
    if (parts.size() == 5) {
      if (parts[4] != "suspect") throw std::invalid_argument(where + "unknown marker '" + parts[4] + "'");
      p.suspect = true;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PrintedTuple> load_printed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_printed(in);
}

std::vector<CaseReport> compare_with_printed(const Classifier& cl, const std::vector<PrintedTuple>& printed) {
  std::vector<CaseReport> out;
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const PrintedTuple*>> cases;
  for (const auto& p : printed) {
    auto key = std::pair(p.graph_type, p.torsion);
    if (!cases.count(key)) order.push_back(key);
    cases[key].push_back(&p);
  }
  for (const auto& key : order) {
    const auto& rows = cases[key];
    const GraphQuery q = make_query(key.first, key.second);
    const Classification c = cl.classify(q);
    CaseReport r;
    r.graph_type = key.first;
    r.torsion = key.second;
    r.citation = rows.front()->citation;

    std::vector<std::vector<std::string>> derived;
    for (const auto& t : c.tuples) derived.push_back(t.labels);
    std::vector<std::vector<std::string>> suspects;
    for (const PrintedTuple* p : rows) {
      const auto want = cl.canonical(q, p->labels);
      auto it = std::find(derived.begin(), derived.end(), want);
      if (it != derived.end()) {
        r.matched.push_back(join(want));
        derived.erase(it);
      } else if (p->suspect) {
        suspects.push_back(want);
      } else {
        r.missing.push_back(join(want));
      }
    }
    for (const auto& s : suspects) {
      auto it = std::find_if(derived.begin(), derived.end(), [&](const auto& d) {
        std::size_t diff = 0;
        for (std::size_t i = 0; i < d.size(); ++i) diff += d[i] != s[i];
        return diff == 1;
      });
      if (it == derived.end()) {
        r.missing.push_back(join(s));
      } else {
        r.flagged.emplace_back(join(s), join(*it));
        derived.erase(it);
      }
    }
    for (const auto& d : derived) r.unexpected.push_back(join(d));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace galimg
