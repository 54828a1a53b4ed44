#include "galimg/subgroup.hpp"

#include <algorithm>
#include <unordered_set>

namespace galimg {

GroupTooLarge::GroupTooLarge(std::uint64_t cap)
    : std::runtime_error("group order exceeds the configured cap of " + std::to_string(cap)) {}

namespace {

// Visited-set for closures: a dense bitmap when n^4 is small, a hash set
// otherwise.
class CodeSet {
 public:
  explicit CodeSet(Modulus n) {
    const std::uint64_t n2 = std::uint64_t{n} * n;
    const std::uint64_t space = n2 * n2;
    if (space <= (std::uint64_t{1} << 27)) bits_.assign((space + 63) / 64, 0);
  }
  // Returns true when newly inserted.
  bool insert(std::uint64_t code) {
    if (!bits_.empty()) {
      std::uint64_t& w = bits_[code >> 6];
      const std::uint64_t mask = std::uint64_t{1} << (code & 63);
      if (w & mask) return false;
      w |= mask;
      return true;
    }
    return set_.insert(code).second;
  }

 private:
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> set_;
};

std::uint64_t signature_of(Modulus n, std::span<const std::uint64_t> codes) {
  std::vector<std::uint32_t> hist(std::size_t{n} * n, 0);
  for (std::uint64_t code : codes) {
    const Mat2 m = Mat2::from_code(n, code);
    ++hist[std::size_t{m.det()} * n + m.trace()];
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t v : hist) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return h ^ codes.size();
}

std::vector<Mat2> full_group_gens(Modulus n) {
  std::vector<Mat2> gens{Mat2(n, 1, 1, 0, 1), Mat2(n, 1, 0, 1, 1)};
  // diag(u, 1) for units u, skipping those already generated.
  std::vector<bool> reached(n, false);
  reached[1] = true;
  std::vector<std::uint32_t> group{1};
  for (std::uint32_t u = 2; u < n; ++u) {
    if (!is_unit(u, n) || reached[u]) continue;
    gens.push_back(Mat2(n, u, 0, 0, 1));
    for (std::size_t i = 0; i < group.size(); ++i) {
      const std::uint32_t y = static_cast<std::uint32_t>(std::uint64_t{group[i]} * u % n);
      if (!reached[y]) {
        reached[y] = true;
        group.push_back(y);
      }
    }
  }
  return gens;
}

}  // namespace

SubgroupRep SubgroupRep::closure(std::vector<Mat2> gens, Modulus n, std::uint64_t cap) {
  if (n < 2) throw std::invalid_argument("modulus must be at least 2");
  std::vector<Mat2> work;
  for (const Mat2& g : gens) {
    if (g.n != n) throw ModulusMismatch(g.n, n);
    if (!g.invertible()) throw NonInvertible("generator " + to_string(g) + " is not invertible mod " + std::to_string(n));
    if (!g.is_identity() && std::find(work.begin(), work.end(), g) == work.end()) work.push_back(g);
  }

  CodeSet seen(n);
  std::vector<std::uint64_t> codes;
  const Mat2 id = Mat2::identity(n);
  seen.insert(id.code());
  codes.push_back(id.code());
  if (cap == 0) throw GroupTooLarge(cap);
  for (std::size_t head = 0; head < codes.size(); ++head) {
    const Mat2 x = Mat2::from_code(n, codes[head]);
    for (const Mat2& g : work) {
      const std::uint64_t y = (x * g).code();
      if (seen.insert(y)) {
        codes.push_back(y);
        if (codes.size() > cap) throw GroupTooLarge(cap);
      }
    }
  }
  std::sort(codes.begin(), codes.end());

  auto data = std::make_shared<Data>();
  data->n = n;
  data->gens = std::move(gens);
  data->signature = signature_of(n, codes);
  data->codes = std::move(codes);
  return SubgroupRep(std::move(data));
}

SubgroupRep SubgroupRep::full(Modulus n) { return closure(full_group_gens(n), n); }

SubgroupRep SubgroupRep::trivial(Modulus n) { return closure({}, n); }

std::vector<Mat2> SubgroupRep::elements() const {
  std::vector<Mat2> out;
  out.reserve(order());
  for (std::uint64_t c : data_->codes) out.push_back(Mat2::from_code(data_->n, c));
  return out;
}

bool SubgroupRep::contains(const Mat2& x) const {
  if (x.n != data_->n) throw ModulusMismatch(x.n, data_->n);
  return std::binary_search(data_->codes.begin(), data_->codes.end(), x.code());
}

std::vector<Line> all_lines(Modulus p) {
  std::vector<Line> out;
  out.push_back(Line{p, 0, 1});
  for (std::uint32_t y = 0; y < p; ++y) out.push_back(Line{p, 1, y});
  return out;
}

Line make_line(Modulus p, std::int64_t x, std::int64_t y) {
  const std::uint32_t rx = residue(x, p), ry = residue(y, p);
  if (rx == 0 && ry == 0) throw std::invalid_argument("zero vector does not span a line");
  if (rx == 0) return Line{p, 0, 1};
  const std::uint64_t inv = inverse_mod(rx, p);
  return Line{p, 1, static_cast<std::uint32_t>(inv * ry % p)};
}

std::string to_string(const Line& line) {
  return "(" + std::to_string(line.x) + "," + std::to_string(line.y) + ")";
}

std::uint64_t index_in_gl2(const SubgroupRep& g) { return gl2_order(g.modulus()) / g.order(); }

bool contains_minus_identity(const SubgroupRep& g) {
  return g.contains(Mat2::minus_identity(g.modulus()));
}

bool det_full(const SubgroupRep& g) {
  const Modulus n = g.modulus();
  std::vector<bool> hit(n, false);
  std::size_t count = 0;
  for (std::uint64_t code : g.codes()) {
    const std::uint32_t d = Mat2::from_code(n, code).det();
    if (!hit[d]) {
      hit[d] = true;
      ++count;
    }
  }
  std::size_t units = 0;
  for (std::uint32_t u = 0; u < n; ++u)
    if (is_unit(u, n)) ++units;
  return count == units;
}

SubgroupRep reduce_group(const SubgroupRep& g, Modulus m) {
  if (m == g.modulus()) return g;
  std::vector<Mat2> gens;
  for (const Mat2& x : g.gens()) gens.push_back(reduce(x, m));
  return SubgroupRep::closure(std::move(gens), m);
}

namespace {

std::vector<Mat2> kernel_gens(Modulus m, Modulus n) {
  const std::uint64_t want = gl2_order(n) / (m == 1 ? 1 : gl2_order(m));
  if (m == 1) return full_group_gens(n);
  std::vector<Mat2> gens;
  for (int i = 0; i < 4; ++i) {
    Mat2 x(n, 1 + (i == 0 ? m : 0), i == 1 ? m : 0, i == 2 ? m : 0, 1 + (i == 3 ? m : 0));
    gens.push_back(x);
  }
  std::vector<Mat2> extra = fiber(Mat2::identity(m), n);
  std::size_t next = 0;
  while (SubgroupRep::closure(gens, n).order() != want) {
    // Only reached for moduli with primes outside the support of m.
    while (next < extra.size()) {
      const Mat2& x = extra[next++];
      if (!SubgroupRep::closure(gens, n).contains(x)) {
        gens.push_back(x);
        break;
      }
    }
  }
  return gens;
}

}  // namespace

SubgroupRep full_preimage(const SubgroupRep& g, Modulus n) {
  const Modulus m = g.modulus();
  if (n % m != 0) throw std::invalid_argument("full_preimage: " + std::to_string(n) + " is not a multiple of " + std::to_string(m));
  if (n == m) return g;
  std::vector<Mat2> gens;
  for (const Mat2& x : g.gens()) gens.push_back(lift(x, n));
  for (const Mat2& k : kernel_gens(m, n)) gens.push_back(k);
  return SubgroupRep::closure(std::move(gens), n);
}

Modulus level(const SubgroupRep& g) {
  const Modulus n = g.modulus();
  const std::uint64_t full = gl2_order(n);
  for (Modulus m : divisors(n)) {
    if (m == 1) {
      if (g.order() == full) return 1;
      continue;
    }
    const SubgroupRep img = reduce_group(g, m);
    if (img.order() * (full / gl2_order(m)) == g.order()) return m;
  }
  return n;
}

SubgroupRep change_modulus(const SubgroupRep& g, Modulus n) {
  if (n == g.modulus()) return g;
  if (g.modulus() % n == 0) return reduce_group(g, n);
  if (n % g.modulus() == 0) return full_preimage(g, n);
  throw std::invalid_argument("cannot move a group from modulus " + std::to_string(g.modulus()) + " to " +
                              std::to_string(n));
}

SubgroupRep conjugate(const SubgroupRep& g, const Mat2& t) {
  const Mat2 ti = mat_inv(t);
  std::vector<Mat2> gens;
  for (const Mat2& x : g.gens()) gens.push_back(t * x * ti);
  return SubgroupRep::closure(std::move(gens), g.modulus());
}

namespace {

// Lexicographically first t in GL_2(Z/nZ) with t x t^{-1} in h for all x in gens.
std::optional<Mat2> first_conjugator(const std::vector<Mat2>& gens, const SubgroupRep& h) {
  const Modulus n = h.modulus();
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        for (std::uint32_t d = 0; d < n; ++d) {
          Mat2 t(n, a, b, c, d);
          const std::uint32_t det = t.det();
          if (!is_unit(det, n)) continue;
          const Mat2 ti = mat_inv(t);
          bool ok = true;
          for (const Mat2& x : gens) {
            if (!h.contains(t * x * ti)) {
              ok = false;
              break;
            }
          }
          if (ok) return t;
        }
  return std::nullopt;
}

std::vector<Mat2> nontrivial_gens(const SubgroupRep& g) {
  std::vector<Mat2> out;
  for (const Mat2& x : g.gens())
    if (!x.is_identity()) out.push_back(x);
  return out;
}

}  // namespace

std::optional<Mat2> is_conjugate(const SubgroupRep& g, const SubgroupRep& h) {
  if (g.modulus() != h.modulus()) throw ModulusMismatch(g.modulus(), h.modulus());
  if (g.order() != h.order() || g.class_signature() != h.class_signature()) return std::nullopt;
  return first_conjugator(nontrivial_gens(g), h);
}

std::optional<Mat2> conjugator_into(const SubgroupRep& g, const SubgroupRep& h) {
  if (g.modulus() != h.modulus()) throw ModulusMismatch(g.modulus(), h.modulus());
  if (h.order() % g.order() != 0) return std::nullopt;
  return first_conjugator(nontrivial_gens(g), h);
}

bool is_conjugate_into(const SubgroupRep& g, const SubgroupRep& h) {
  if (g.modulus() != h.modulus()) throw ModulusMismatch(g.modulus(), h.modulus());
  // h is the preimage of its reduction at its level, so the search can run there.
  const Modulus m = level(h);
  if (m == 1) return true;
  if (m < h.modulus()) return conjugator_into(reduce_group(g, m), reduce_group(h, m)).has_value();
  return conjugator_into(g, h).has_value();
}

std::vector<Line> stable_lines(const SubgroupRep& g, Modulus p) {
  if (g.modulus() % p != 0) throw std::invalid_argument("stable_lines: p does not divide the modulus");
  std::vector<Mat2> gens;
  for (const Mat2& x : g.gens()) gens.push_back(reduce(x, p));
  std::vector<Line> out;
  for (const Line& line : all_lines(p)) {
    bool stable = true;
    for (const Mat2& m : gens) {
      const std::uint64_t wx = (std::uint64_t{m.a} * line.x + std::uint64_t{m.b} * line.y) % p;
      const std::uint64_t wy = (std::uint64_t{m.c} * line.x + std::uint64_t{m.d} * line.y) % p;
      if ((std::uint64_t{line.x} * wy + p * p - std::uint64_t{line.y} * wx % p) % p != 0) {
        stable = false;
        break;
      }
    }
    if (stable) out.push_back(line);
  }
  return out;
}

namespace {

std::vector<Mat2> gens_mod(const SubgroupRep& g, Modulus q) {
  if (g.modulus() % q != 0) throw std::invalid_argument("modulus " + std::to_string(q) + " does not divide " + std::to_string(g.modulus()));
  std::vector<Mat2> gens;
  if (q == 1) return gens;
  for (const Mat2& x : g.gens()) gens.push_back(reduce(x, q));
  return gens;
}

bool has_exact_order(std::uint32_t x, std::uint32_t y, Modulus q) {
  return gcd_u64(gcd_u64(x, y), q) == 1;
}

}  // namespace

std::size_t count_stable_cyclic_subgroups(const SubgroupRep& g, Modulus q) {
  const std::vector<Mat2> gens = gens_mod(g, q);
  std::size_t count = 0;
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y) {
      if (!has_exact_order(x, y, q)) continue;
      // Count each cyclic subgroup once, at its least generator.
      bool least = true;
      for (std::uint32_t u = 2; u < q && least; ++u) {
        if (!is_unit(u, q)) continue;
        const std::uint32_t ux = static_cast<std::uint32_t>(std::uint64_t{u} * x % q);
        const std::uint32_t uy = static_cast<std::uint32_t>(std::uint64_t{u} * y % q);
        if (std::pair(ux, uy) < std::pair(x, y)) least = false;
      }
      if (!least) continue;
      bool stable = true;
      for (const Mat2& m : gens) {
        const std::uint32_t wx = static_cast<std::uint32_t>((std::uint64_t{m.a} * x + std::uint64_t{m.b} * y) % q);
        const std::uint32_t wy = static_cast<std::uint32_t>((std::uint64_t{m.c} * x + std::uint64_t{m.d} * y) % q);
        bool multiple = false;
        for (std::uint32_t k = 0; k < q && !multiple; ++k)
          multiple = std::uint64_t{k} * x % q == wx && std::uint64_t{k} * y % q == wy;
        if (!multiple) {
          stable = false;
          break;
        }
      }
      if (stable) ++count;
    }
  return count;
}

bool fixes_vector_of_order(const SubgroupRep& g, Modulus m) {
  if (m == 1) return true;
  const std::vector<Mat2> gens = gens_mod(g, m);
  for (std::uint32_t x = 0; x < m; ++x)
    for (std::uint32_t y = 0; y < m; ++y) {
      if (!has_exact_order(x, y, m)) continue;
      bool fixed = true;
      for (const Mat2& t : gens) {
        if ((std::uint64_t{t.a} * x + std::uint64_t{t.b} * y) % m != x ||
            (std::uint64_t{t.c} * x + std::uint64_t{t.d} * y) % m != y) {
          fixed = false;
          break;
        }
      }
      if (fixed) return true;
    }
  return false;
}

bool has_complex_conjugation(const SubgroupRep& g) {
  const Modulus n = g.modulus();
  for (std::uint64_t code : g.codes()) {
    const Mat2 x = Mat2::from_code(n, code);
    if (x.trace() == 0 && x.det() == n - 1) return true;
  }
  return false;
}

}  // namespace galimg
