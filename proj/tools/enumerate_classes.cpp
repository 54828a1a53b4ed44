// Enumerates conjugacy classes of subgroups G of GL_2(Z/27Z) with surjective
// determinant, an element of determinant -1 and trace 0, and index at most a
// bound (default 243). Classes are built level by level: subgroups of
// GL_2(Z/3Z), then lifts through the abelian kernels I + 3^k M_2(F_3).
//
// Output: one line per class at modulus 27,
//   level index genus minus_I lines3 cyc9 pt3 pt9 ; [gens]

#include <algorithm>
#include <array>
#include <bitset>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "galimg/cusp.hpp"
#include "galimg/subgroup.hpp"

using namespace galimg;

namespace {

using Vec = std::vector<std::uint8_t>;  // over F_3

std::uint8_t m3(int x) { return static_cast<std::uint8_t>(((x % 3) + 3) % 3); }

std::array<std::uint8_t, 4> to_vec4(const Mat2& x) { return {m3(x.a), m3(x.b), m3(x.c), m3(x.d)}; }

// Row reduction over F_3. Returns the pivot columns; rows are reduced in place.
std::vector<std::size_t> rref(std::vector<Vec>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    if (rows[r][c] == 2)
      for (auto& v : rows[r]) v = m3(2 * v);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const int f = rows[i][c];
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] = m3(rows[i][j] - f * rows[r][j]);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// Basis of {x : rows x = 0}.
std::vector<Vec> nullspace(std::vector<Vec> rows, std::size_t cols) {
  const auto pivots = rref(rows, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = m3(-rows[i][f]);
    basis.push_back(v);
  }
  return basis;
}

// Subspaces of F_3^4, each as a list of basis vectors and a membership mask.
struct Subspace {
  std::vector<Vec> basis;
  std::bitset<81> members;
};

int encode4(const Vec& v) { return ((v[0] * 3 + v[1]) * 3 + v[2]) * 3 + v[3]; }
Vec decode4(int x) { return {std::uint8_t(x / 27), std::uint8_t(x / 9 % 3), std::uint8_t(x / 3 % 3), std::uint8_t(x % 3)}; }

std::bitset<81> span_mask(const std::vector<Vec>& basis) {
  std::bitset<81> m;
  m.set(0);
  for (const Vec& b : basis) {
    std::bitset<81> next = m;
    for (int x = 0; x < 81; ++x) {
      if (!m.test(x)) continue;
      Vec v = decode4(x);
      for (int k = 1; k < 3; ++k) {
        Vec w(4);
        for (int i = 0; i < 4; ++i) w[i] = m3(v[i] + k * b[i]);
        next.set(encode4(w));
      }
    }
    m = next;
  }
  return m;
}

std::vector<Subspace> all_subspaces() {
  std::vector<Subspace> out{Subspace{{}, span_mask({})}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int x = 1; x < 81; ++x) {
      if (out[i].members.test(x)) continue;
      std::vector<Vec> basis = out[i].basis;
      basis.push_back(decode4(x));
      const auto mask = span_mask(basis);
      bool dup = false;
      for (const auto& s : out)
        if (s.members == mask) dup = true;
      if (!dup) out.push_back(Subspace{basis, mask});
    }
  }
  return out;
}

// 4x4 matrix of X -> s^{-1} X s on M_2(F_3), coordinates (a,b,c,d).
std::array<std::array<std::uint8_t, 4>, 4> conj_matrix(const Mat2& s3) {
  std::array<std::array<std::uint8_t, 4>, 4> m{};
  const Mat2 si = mat_inv(s3);
  for (int j = 0; j < 4; ++j) {
    // the basis matrix is singular, so multiply entrywise by hand
    auto mul = [](const std::array<int, 4>& x, const std::array<int, 4>& y) {
      return std::array<int, 4>{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
                                x[2] * y[1] + x[3] * y[3]};
    };
    const std::array<int, 4> ea{j == 0, j == 1, j == 2, j == 3};
    const std::array<int, 4> sa{int(s3.a), int(s3.b), int(s3.c), int(s3.d)};
    const std::array<int, 4> sia{int(si.a), int(si.b), int(si.c), int(si.d)};
    const auto r = mul(mul(sia, ea), sa);
    for (int i = 0; i < 4; ++i) m[i][j] = m3(r[i]);
  }
  return m;
}

bool stable_subspace(const Subspace& v, const std::vector<Mat2>& gens3) {
  for (const Mat2& s : gens3) {
    const auto c = conj_matrix(s);
    for (const Vec& b : v.basis) {
      Vec w(4, 0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w[i] = m3(w[i] + c[i][j] * b[j]);
      if (!v.members.test(encode4(w))) return false;
    }
  }
  return true;
}

std::vector<Mat2> minimal_gens(const SubgroupRep& g) {
  std::vector<Mat2> gens;
  for (const Mat2& x : g.gens())
    if (!x.is_identity() && std::find(gens.begin(), gens.end(), x) == gens.end()) gens.push_back(x);
  for (std::size_t i = gens.size(); i-- > 0;) {
    std::vector<Mat2> trial = gens;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (SubgroupRep::closure(trial, g.modulus()).order() == g.order()) gens = trial;
  }
  return gens;
}

struct Options {
  std::uint64_t max_index = 243;
};

bool admissible(const SubgroupRep& g, const Options& opt) {
  return index_in_gl2(g) <= opt.max_index && det_full(g) && has_complex_conjugation(g);
}

// All lifts of the class of p (modulus m) to modulus 3m, up to conjugacy.
std::vector<SubgroupRep> lifts(const SubgroupRep& p, const Options& opt) {
  const Modulus m = p.modulus(), n = 3 * m;
  const std::vector<Mat2> gens = minimal_gens(p);
  const std::size_t k = gens.size();
  std::vector<Mat2> gens3;
  for (const Mat2& s : gens) gens3.push_back(reduce(s, 3));
  std::vector<std::array<std::array<std::uint8_t, 4>, 4>> conj;
  for (const Mat2& s : gens3) conj.push_back(conj_matrix(s));

  // Affine expressions f(h) = A u + b, u = (f(s_1), ..., f(s_k)) in F_3^{4k}.
  const std::size_t cols = 4 * k;
  const std::vector<Mat2> elems = p.elements();
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i].code()] = i;
  std::vector<std::vector<Vec>> A(elems.size());
  std::vector<Vec> b(elems.size());
  std::vector<bool> seen(elems.size(), false);
  const std::size_t id = index.at(Mat2::identity(m).code());
  A[id].assign(4, Vec(cols, 0));
  b[id].assign(4, 0);
  seen[id] = true;

  struct Edge {
    std::vector<Vec> dA;
    Vec db;
  };
  std::vector<Edge> constraints;
  std::vector<std::size_t> queue{id};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t gi = queue[head];
    const Mat2& g = elems[gi];
    for (std::size_t j = 0; j < k; ++j) {
      const Mat2 gs = g * gens[j];
      const std::size_t ti = index.at(gs.code());
      const Mat2 c = mat_inv(lift(gs, n)) * lift(g, n) * lift(gens[j], n);
      // c = I + m C
      const Vec cv{m3(int(c.a - 1) / int(m)), m3(int(c.b) / int(m)), m3(int(c.c) / int(m)), m3(int(c.d - 1) / int(m))};
      std::vector<Vec> nA(4, Vec(cols, 0));
      Vec nb(4, 0);
      for (int r = 0; r < 4; ++r) {
        for (int q = 0; q < 4; ++q) {
          if (conj[j][r][q] == 0) continue;
          for (std::size_t col = 0; col < cols; ++col) nA[r][col] = m3(nA[r][col] + conj[j][r][q] * A[gi][q][col]);
          nb[r] = m3(nb[r] + conj[j][r][q] * b[gi][q]);
        }
        nA[r][4 * j + r] = m3(nA[r][4 * j + r] + 1);
        nb[r] = m3(nb[r] + cv[r]);
      }
      if (!seen[ti]) {
        seen[ti] = true;
        A[ti] = std::move(nA);
        b[ti] = std::move(nb);
        queue.push_back(ti);
      } else {
        Edge e{std::vector<Vec>(4, Vec(cols, 0)), Vec(4, 0)};
        for (int r = 0; r < 4; ++r) {
          for (std::size_t col = 0; col < cols; ++col) e.dA[r][col] = m3(nA[r][col] - A[ti][r][col]);
          e.db[r] = m3(nb[r] - b[ti][r]);
        }
        constraints.push_back(std::move(e));
      }
    }
  }

  static const std::vector<Subspace> subspaces = all_subspaces();
  std::vector<SubgroupRep> out;
  for (const Subspace& v : subspaces) {
    std::uint64_t card = 1;
    for (std::size_t i = 0; i < v.basis.size(); ++i) card *= 3;
    if (index_in_gl2(p) * 81 / card > opt.max_index) continue;
    if (!stable_subspace(v, gens3)) continue;

    // Projection with kernel V.
    const std::vector<Vec> proj = nullspace(v.basis, 4);
    // Augmented system rows: [proj * dA | -proj * db].
    std::vector<Vec> rows;
    for (const Edge& e : constraints)
      for (const Vec& pr : proj) {
        Vec row(cols + 1, 0);
        for (int r = 0; r < 4; ++r) {
          if (pr[r] == 0) continue;
          for (std::size_t col = 0; col < cols; ++col) row[col] = m3(row[col] + pr[r] * e.dA[r][col]);
          row[cols] = m3(row[cols] - pr[r] * e.db[r]);
        }
        if (std::any_of(row.begin(), row.end(), [](std::uint8_t x) { return x != 0; })) rows.push_back(row);
      }
    std::vector<Vec> red = rows;
    const auto pivots = rref(red, cols + 1);
    if (!pivots.empty() && pivots.back() == cols) continue;  // inconsistent
    Vec particular(cols, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) particular[pivots[i]] = red[i][cols];
    std::vector<Vec> homog;
    for (const Vec& r : rows) homog.push_back(Vec(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(cols)));
    const std::vector<Vec> null = nullspace(homog, cols);

    // Quotient by V in each coordinate block and by coboundaries.
    std::vector<Vec> trivial;
    for (std::size_t j = 0; j < k; ++j)
      for (const Vec& bv : v.basis) {
        Vec t(cols, 0);
        for (int r = 0; r < 4; ++r) t[4 * j + r] = bv[r];
        trivial.push_back(t);
      }
    for (int y = 0; y < 4; ++y) {
      Vec t(cols, 0);
      for (std::size_t j = 0; j < k; ++j)
        for (int r = 0; r < 4; ++r) t[4 * j + r] = m3((r == y) - conj[j][r][y]);
      trivial.push_back(t);
    }
    std::vector<Vec> span = trivial;
    rref(span, cols);
    std::vector<Vec> complement;
    for (const Vec& nv : null) {
      std::vector<Vec> trial = span;
      trial.push_back(nv);
      rref(trial, cols);
      if (trial.size() > span.size()) {
        span = trial;
        complement.push_back(nv);
      }
    }

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < complement.size(); ++i) total *= 3;
    for (std::uint64_t combo = 0; combo < total; ++combo) {
      Vec u = particular;
      std::uint64_t c = combo;
      for (const Vec& cv : complement) {
        const int coef = static_cast<int>(c % 3);
        c /= 3;
        for (std::size_t i = 0; i < cols; ++i) u[i] = m3(u[i] + coef * cv[i]);
      }
      std::vector<Mat2> lg;
      for (std::size_t j = 0; j < k; ++j) {
        const Mat2 kick(n, 1 + std::int64_t{m} * u[4 * j], std::int64_t{m} * u[4 * j + 1], std::int64_t{m} * u[4 * j + 2],
                        1 + std::int64_t{m} * u[4 * j + 3]);
        lg.push_back(lift(gens[j], n) * kick);
      }
      for (const Vec& bv : v.basis)
        lg.push_back(Mat2(n, 1 + std::int64_t{m} * bv[0], std::int64_t{m} * bv[1], std::int64_t{m} * bv[2],
                          1 + std::int64_t{m} * bv[3]));
      const SubgroupRep g = SubgroupRep::closure(lg, n);
      if (g.order() != p.order() * card) {
        std::cerr << "lift order mismatch\n";
        std::exit(3);
      }
      if (!admissible(g, opt)) continue;
      bool dup = false;
      for (const SubgroupRep& h : out)
        if (h.order() == g.order() && h.class_signature() == g.class_signature() && is_conjugate(g, h)) {
          dup = true;
          break;
        }
      if (!dup) out.push_back(g);
    }
  }
  return out;
}

std::vector<SubgroupRep> classes_mod3(const Options& opt) {
  std::vector<SubgroupRep> all;
  auto known = [&](const SubgroupRep& g) {
    return std::any_of(all.begin(), all.end(), [&](const SubgroupRep& h) { return h == g; });
  };
  const std::vector<Mat2> elems = gl2_elements(3);
  for (const Mat2& x : elems) {
    SubgroupRep g = SubgroupRep::closure({x}, 3);
    if (!known(g)) all.push_back(g);
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (const Mat2& x : elems) {
      if (all[i].contains(x)) continue;
      std::vector<Mat2> gens = all[i].gens();
      gens.push_back(x);
      SubgroupRep g = SubgroupRep::closure(gens, 3);
      if (!known(g)) all.push_back(g);
    }
  std::vector<SubgroupRep> out;
  for (const SubgroupRep& g : all) {
    if (!admissible(g, opt)) continue;
    bool dup = false;
    for (const SubgroupRep& h : out)
      if (is_conjugate(g, h)) dup = true;
    if (!dup) out.push_back(SubgroupRep::closure(minimal_gens(g), 3));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  if (argc > 1) opt.max_index = std::stoull(argv[1]);
  std::vector<SubgroupRep> level3 = classes_mod3(opt);
  std::cerr << "mod 3: " << level3.size() << " classes\n";
  std::vector<SubgroupRep> level9;
  for (const SubgroupRep& p : level3)
    for (const SubgroupRep& g : lifts(p, opt)) level9.push_back(SubgroupRep::closure(minimal_gens(g), 9));
  std::cerr << "mod 9: " << level9.size() << " classes\n";
  std::vector<SubgroupRep> level27;
  for (const SubgroupRep& p : level9) {
    for (const SubgroupRep& g : lifts(p, opt)) level27.push_back(g);
  }
  std::cerr << "mod 27: " << level27.size() << " classes\n";

  for (const SubgroupRep& g : level27) {
    const SubgroupRep pm = with_minus_identity(g);
    std::cout << level(g) << ' ' << index_in_gl2(g) << ' ' << genus(pm) << ' ' << contains_minus_identity(g) << ' '
              << stable_lines(g, 3).size() << ' ' << count_stable_cyclic_subgroups(g, 9) << ' '
              << fixes_vector_of_order(g, 3) << ' ' << fixes_vector_of_order(g, 9) << " ;";
    for (const Mat2& x : minimal_gens(g)) std::cout << ' ' << to_string(x);
    std::cout << '\n';
  }
  return 0;
}
