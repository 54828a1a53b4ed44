#include "galimg/cusp.hpp"

#include <algorithm>

namespace galimg {

SubgroupRep with_minus_identity(const SubgroupRep& g) {
  if (contains_minus_identity(g)) return g;
  std::vector<Mat2> gens = g.gens();
  gens.push_back(Mat2::minus_identity(g.modulus()));
  return SubgroupRep::closure(std::move(gens), g.modulus());
}

namespace {

void check_hypothesis(const SubgroupRep& g) {
  if (!contains_minus_identity(g)) throw HypothesisViolation("group does not contain -I");
  if (!det_full(g)) throw HypothesisViolation("determinant of the group is not surjective");
}

// Labels every element of `universe` by its right coset G x (intersecting
// with the universe), returns the number of cosets.
std::size_t label_cosets(const std::vector<Mat2>& left_group, const std::vector<Mat2>& universe,
                         std::vector<std::int32_t>& coset_of) {
  std::size_t count = 0;
  for (const Mat2& x : universe) {
    if (coset_of[x.code()] >= 0) continue;
    for (const Mat2& h : left_group) coset_of[(h * x).code()] = static_cast<std::int32_t>(count);
    ++count;
  }
  return count;
}

std::uint64_t space(Modulus n) {
  const std::uint64_t n2 = std::uint64_t{n} * n;
  return n2 * n2;
}

// Union-find over coset indices.
struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t k) : parent(k) {
    for (std::size_t i = 0; i < k; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
};

}  // namespace

CuspSet cusp_set(const SubgroupRep& g) {
  check_hypothesis(g);
  const Modulus n = g.modulus();
  const std::vector<Mat2> all = gl2_elements(n);
  const std::vector<Mat2> elems = g.elements();
  std::vector<std::int32_t> coset_of(space(n), -1);
  const std::size_t k = label_cosets(elems, all, coset_of);

  // Merge right cosets along right multiplication by the generators of U_n.
  const Mat2 t(n, 1, 1, 0, 1);
  Dsu dsu(k);
  std::vector<bool> done(k, false);
  for (const Mat2& x : all) {
    const std::size_t c = static_cast<std::size_t>(coset_of[x.code()]);
    if (done[c]) continue;
    done[c] = true;
    dsu.unite(c, static_cast<std::size_t>(coset_of[(x * t).code()]));
    dsu.unite(c, static_cast<std::size_t>(coset_of[(x * Mat2::minus_identity(n)).code()]));
  }

  CuspSet cs;
  cs.n = n;
  std::vector<std::int32_t> root_index(k, -1);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t r = dsu.find(c);
    if (root_index[r] < 0) {
      root_index[r] = static_cast<std::int32_t>(cs.cusps.size());
      cs.cusps.emplace_back();
    }
  }
  cs.cusp_of.assign(space(n), -1);
  for (const Mat2& x : all) {
    const std::int32_t idx = root_index[dsu.find(static_cast<std::size_t>(coset_of[x.code()]))];
    cs.cusp_of[x.code()] = idx;
    cs.cusps[static_cast<std::size_t>(idx)].push_back(x.code());
  }
  for (auto& c : cs.cusps) std::sort(c.begin(), c.end());

  cs.rational_mask.assign(cs.cusps.size(), true);
  for (std::size_t c = 0; c < cs.cusps.size(); ++c)
    for (std::uint32_t a = 2; a < n && cs.rational_mask[c]; ++a)
      if (is_unit(a, n) && galois_action(cs, c, a) != c) cs.rational_mask[c] = false;
  return cs;
}

std::size_t galois_action(const CuspSet& cs, std::size_t c, std::uint32_t a) {
  if (!is_unit(a, cs.n)) throw std::invalid_argument("galois_action: " + std::to_string(a) + " is not a unit");
  const Mat2 x = Mat2::from_code(cs.n, cs.cusps.at(c).front());
  return static_cast<std::size_t>(cs.cusp_of[(x * Mat2::diag(cs.n, 1, a)).code()]);
}

std::size_t rational_cusp_count(const SubgroupRep& g) {
  const CuspSet cs = cusp_set(g);
  return static_cast<std::size_t>(std::count(cs.rational_mask.begin(), cs.rational_mask.end(), true));
}

GenusData genus_data(const SubgroupRep& g) {
  check_hypothesis(g);
  const Modulus n = g.modulus();
  std::vector<Mat2> gamma;
  for (std::uint64_t code : g.codes()) {
    const Mat2 x = Mat2::from_code(n, code);
    if (x.det() == 1) gamma.push_back(x);
  }
  const std::vector<Mat2> sl2 = sl2_elements(n);
  std::vector<std::int32_t> coset_of(space(n), -1);
  const std::size_t k = label_cosets(gamma, sl2, coset_of);

  const Mat2 s(n, 0, -1, 1, 0), st(n, 0, -1, 1, 1), t(n, 1, 1, 0, 1);
  GenusData out;
  out.index = k;
  std::vector<bool> seen(k, false);
  Dsu dsu(k);
  for (const Mat2& x : sl2) {
    const std::size_t c = static_cast<std::size_t>(coset_of[x.code()]);
    if (seen[c]) continue;
    seen[c] = true;
    if (static_cast<std::size_t>(coset_of[(x * s).code()]) == c) ++out.nu2;
    if (static_cast<std::size_t>(coset_of[(x * st).code()]) == c) ++out.nu3;
    dsu.unite(c, static_cast<std::size_t>(coset_of[(x * t).code()]));
  }
  out.cusps = 0;
  for (std::size_t c = 0; c < k; ++c)
    if (dsu.find(c) == c) ++out.cusps;

  const std::int64_t twelve_g = 12 + static_cast<std::int64_t>(out.index) - 3 * static_cast<std::int64_t>(out.nu2) -
                                4 * static_cast<std::int64_t>(out.nu3) - 6 * static_cast<std::int64_t>(out.cusps);
  if (twelve_g < 0 || twelve_g % 12 != 0)
    throw std::logic_error("genus formula gave 12g = " + std::to_string(twelve_g));
  out.genus = static_cast<std::uint64_t>(twelve_g / 12);
  return out;
}

std::uint64_t genus(const SubgroupRep& g) { return genus_data(g).genus; }

}  // namespace galimg
