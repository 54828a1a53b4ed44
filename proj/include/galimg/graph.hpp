#pragma once

// Isogeny-torsion graph shapes over Q and per-vertex torsion structures.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace galimg {

class QueryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Z/m1 x Z/m2 with m1 | m2.
struct Torsion {
  std::uint32_t m1 = 1, m2 = 1;

  std::uint32_t order() const { return m1 * m2; }
  bool has_point_of_order(std::uint32_t n) const { return m2 % n == 0; }
  /// "1", "6", "2x6".
  std::string str() const;
  friend bool operator==(const Torsion&, const Torsion&) = default;
  friend auto operator<=>(const Torsion&, const Torsion&) = default;
};

/// Accepts "1", "Z/6", "2x6", "Z/2xZ/6"; only the fifteen groups that occur
/// over Q. Throws QueryError.
Torsion parse_torsion(const std::string& text);

struct Edge {
  int u = 0, v = 0;
  unsigned prime = 2;
};

struct GraphShape {
  GraphShape(std::string n, int count, std::vector<Edge> e) : name(std::move(n)), vertices(count), edges(std::move(e)) {}

  std::string name;
  int vertices = 1;
  std::vector<Edge> edges;

  std::vector<int> neighbors(int v, unsigned prime) const;
  unsigned edge_count(int v, unsigned prime) const;
  /// Degrees of the cyclic isogenies leaving v (edge products along shortest
  /// paths to every other vertex).
  std::set<std::uint32_t> isogeny_degrees(int v) const;
  /// Non-backtracking paths from v made of k edges of the given prime.
  std::size_t prime_power_paths(int v, unsigned prime, int k) const;
  /// Vertex permutations preserving edges and their degrees.
  const std::vector<std::vector<int>>& automorphisms() const;

 private:
  mutable std::vector<std::vector<int>> autos_;
};

/// Known shape names in display order: L1, L2(2), ..., T8, S.
const std::vector<std::string>& graph_types();
/// Throws QueryError for an unknown name.
const GraphShape& graph_shape(const std::string& name);

struct GraphQuery {
  std::string graph_type;
  /// nullopt means the torsion at that vertex is left open.
  std::vector<std::optional<Torsion>> torsion;
};

/// Torsion groups allowed at a vertex with or without a rational 3-isogeny.
bool torsion_allowed(const Torsion& t, bool has_3_isogeny);

/// Parses "2,2,6,6" ('?' leaves a vertex open) and validates: vertex count,
/// admissible groups, and consistency with the edges (a point of prime order
/// p needs a p-edge, full 2-torsion needs three 2-edges, Z/4, Z/8, Z/9 need
/// cyclic 4-, 8-, 9-isogenies).
GraphQuery make_query(const std::string& graph_type, const std::string& torsion_csv);
void validate_query(const GraphQuery& q);
std::string torsion_csv(const GraphQuery& q);

}  // namespace galimg
