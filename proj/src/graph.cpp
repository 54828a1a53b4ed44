#include "galimg/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace galimg {

std::string Torsion::str() const {
  if (m1 == 1) return std::to_string(m2);
  return std::to_string(m1) + "x" + std::to_string(m2);
}

Torsion parse_torsion(const std::string& text) {
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == ' ' || ch == 'Z' || ch == '/') continue;
    s += ch == 'X' ? 'x' : ch;
  }
  Torsion t;
  try {
    std::size_t pos = 0;
    const auto x = s.find('x');
    if (x == std::string::npos) {
      t.m2 = static_cast<std::uint32_t>(std::stoul(s, &pos));
      if (pos != s.size()) throw std::invalid_argument(s);
    } else {
      t.m1 = static_cast<std::uint32_t>(std::stoul(s.substr(0, x), &pos));
      if (pos != x) throw std::invalid_argument(s);
      const std::string rest = s.substr(x + 1);
      t.m2 = static_cast<std::uint32_t>(std::stoul(rest, &pos));
      if (pos != rest.size()) throw std::invalid_argument(s);
    }
  } catch (const std::logic_error&) {
    throw QueryError("cannot parse torsion group '" + text + "'");
  }
  const bool cyclic_ok = t.m1 == 1 && t.m2 >= 1 && (t.m2 <= 10 || t.m2 == 12);
  const bool product_ok = t.m1 == 2 && (t.m2 == 2 || t.m2 == 4 || t.m2 == 6 || t.m2 == 8);
  if (!cyclic_ok && !product_ok) throw QueryError("'" + text + "' is not a torsion group of an elliptic curve over Q");
  return t;
}

std::vector<int> GraphShape::neighbors(int v, unsigned prime) const {
  std::vector<int> out;
  for (const Edge& e : edges) {
    if (e.prime != prime) continue;
    if (e.u == v) out.push_back(e.v);
    if (e.v == v) out.push_back(e.u);
  }
  return out;
}

unsigned GraphShape::edge_count(int v, unsigned prime) const {
  return static_cast<unsigned>(neighbors(v, prime).size());
}

std::set<std::uint32_t> GraphShape::isogeny_degrees(int v) const {
  std::vector<int> dist(vertices, -1);
  std::vector<std::uint32_t> degree(vertices, 1);
  std::queue<int> todo;
  dist[v] = 0;
  todo.push(v);
  while (!todo.empty()) {
    const int u = todo.front();
    todo.pop();
    for (const Edge& e : edges) {
      int w = -1;
      if (e.u == u) w = e.v;
      if (e.v == u) w = e.u;
      if (w < 0 || dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      degree[w] = degree[u] * e.prime;
      todo.push(w);
    }
  }
  std::set<std::uint32_t> out;
  for (int w = 0; w < vertices; ++w)
    if (w != v && dist[w] > 0) out.insert(degree[w]);
  return out;
}

std::size_t GraphShape::prime_power_paths(int v, unsigned prime, int k) const {
  std::size_t count = 0;
  auto walk = [&](auto&& self, int at, int from, int left) -> void {
    if (left == 0) {
      ++count;
      return;
    }
    for (int w : neighbors(at, prime))
      if (w != from) self(self, w, at, left - 1);
  };
  walk(walk, v, -1, k);
  return count;
}

const std::vector<std::vector<int>>& GraphShape::automorphisms() const {
  if (!autos_.empty()) return autos_;
  std::vector<std::vector<unsigned>> adj(vertices, std::vector<unsigned>(vertices, 0));
  for (const Edge& e : edges) adj[e.u][e.v] = adj[e.v][e.u] = e.prime;
  std::vector<int> perm(vertices);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int u = 0; u < vertices && ok; ++u)
      for (int w = 0; w < vertices && ok; ++w) ok = adj[perm[u]][perm[w]] == adj[u][w];
    if (ok) autos_.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return autos_;
}

namespace {

GraphShape rectangle(const std::string& name, unsigned p, unsigned q) {
  return GraphShape{name, 4, {{0, 1, q}, {0, 2, p}, {1, 3, p}, {2, 3, q}}};
}

const std::vector<GraphShape>& all_shapes() {
  static const std::vector<GraphShape> shapes = [] {
    std::vector<GraphShape> s;
    s.push_back({"L1", 1, {}});
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 37u})
      s.push_back({"L2(" + std::to_string(p) + ")", 2, {{0, 1, p}}});
    s.push_back({"L3(9)", 3, {{0, 1, 3}, {1, 2, 3}}});
    s.push_back({"L3(25)", 3, {{0, 1, 5}, {1, 2, 5}}});
    s.push_back(rectangle("R4(6)", 3, 2));
    s.push_back(rectangle("R4(10)", 2, 5));
    s.push_back(rectangle("R4(14)", 2, 7));
    s.push_back(rectangle("R4(15)", 3, 5));
    s.push_back(rectangle("R4(21)", 3, 7));
    s.push_back({"R6", 6, {{0, 2, 3}, {2, 4, 3}, {1, 3, 3}, {3, 5, 3}, {0, 1, 2}, {2, 3, 2}, {4, 5, 2}}});
    s.push_back({"T4", 4, {{0, 1, 2}, {0, 2, 2}, {0, 3, 2}}});
    s.push_back({"T6", 6, {{0, 1, 2}, {0, 2, 2}, {0, 3, 2}, {3, 4, 2}, {3, 5, 2}}});
    s.push_back({"T8", 8, {{0, 1, 2}, {0, 2, 2}, {0, 3, 2}, {3, 4, 2}, {5, 3, 2}, {5, 6, 2}, {5, 7, 2}}});
    s.push_back({"S", 8,
                 {{0, 1, 3}, {0, 2, 2}, {0, 4, 2}, {0, 6, 2}, {2, 3, 3}, {4, 5, 3}, {6, 7, 3}, {1, 3, 2}, {1, 5, 2},
                  {1, 7, 2}}});
    return s;
  }();
  return shapes;
}

}  // namespace

const std::vector<std::string>& graph_types() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : all_shapes()) out.push_back(s.name);
    return out;
  }();
  return names;
}

const GraphShape& graph_shape(const std::string& name) {
  for (const auto& s : all_shapes())
    if (s.name == name) return s;
  throw QueryError("unknown graph type '" + name + "'");
}

bool torsion_allowed(const Torsion& t, bool has_3_isogeny) {
  static const std::set<std::string> with3{"1", "2", "3", "4", "5", "6", "9", "12", "2x2", "2x6"};
  static const std::set<std::string> without3{"1", "2", "4", "5", "7", "8", "10", "2x2", "2x4", "2x8"};
  return (has_3_isogeny ? with3 : without3).count(t.str()) > 0;
}

void validate_query(const GraphQuery& q) {
  const GraphShape& g = graph_shape(q.graph_type);
  if (static_cast<int>(q.torsion.size()) != g.vertices)
    throw QueryError(q.graph_type + " has " + std::to_string(g.vertices) + " vertices, got " +
                     std::to_string(q.torsion.size()) + " torsion groups");
  for (int v = 0; v < g.vertices; ++v) {
    if (!q.torsion[v]) continue;
    const Torsion& t = *q.torsion[v];
    const std::string where = "E" + std::to_string(v + 1) + " torsion " + t.str() + ": ";
    if (!torsion_allowed(t, g.edge_count(v, 3) > 0))
      throw QueryError(where + (g.edge_count(v, 3) > 0 ? "not possible with a rational 3-isogeny"
                                                       : "not possible without a rational 3-isogeny"));
    const unsigned e2 = g.edge_count(v, 2);
    if (t.m1 == 2 && e2 != 3) throw QueryError(where + "full 2-torsion needs three 2-isogenies");
    if (t.m1 == 1 && t.m2 % 2 == 0 && e2 != 1) throw QueryError(where + "cyclic even torsion needs exactly one 2-isogeny");
    if (t.order() % 2 == 1 && e2 != 0) throw QueryError(where + "a 2-isogeny forces a point of order 2");
    for (unsigned p : {3u, 5u, 7u})
      if (t.order() % p == 0 && g.edge_count(v, p) == 0)
        throw QueryError(where + "a point of order " + std::to_string(p) + " needs a " + std::to_string(p) + "-isogeny");
    const auto degrees = g.isogeny_degrees(v);
    for (std::uint32_t n : {4u, 8u, 9u})
      if (t.m2 % n == 0 && !degrees.count(n))
        throw QueryError(where + "a point of order " + std::to_string(n) + " needs a cyclic " + std::to_string(n) +
                         "-isogeny");
  }
}

GraphQuery make_query(const std::string& graph_type, const std::string& csv) {
  GraphQuery q{graph_type, {}};
  graph_shape(graph_type);
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    if (item == "?")
      q.torsion.push_back(std::nullopt);
    else
      q.torsion.push_back(parse_torsion(item));
  }
  validate_query(q);
  return q;
}

std::string torsion_csv(const GraphQuery& q) {
  std::string out;
  for (std::size_t i = 0; i < q.torsion.size(); ++i) {
    if (i) out += ",";
    out += q.torsion[i] ? q.torsion[i]->str() : "?";
  }
  return out;
}

}  // namespace galimg
