#include <random>

#include "doctest.h"
#include "galimg/subgroup.hpp"

using namespace galimg;

namespace {

Mat2 random_unit_mat(std::mt19937& rng, Modulus n) {
  std::uniform_int_distribution<std::uint32_t> dist(0, n - 1);
  for (;;) {
    Mat2 m(n, dist(rng), dist(rng), dist(rng), dist(rng));
    if (m.invertible()) return m;
  }
}

SubgroupRep borel(Modulus n) {
  std::vector<Mat2> gens{Mat2(n, 1, 1, 0, 1), Mat2(n, -1, 0, 0, -1)};
  for (std::uint32_t u = 2; u < n; ++u)
    if (is_unit(u, n)) {
      gens.push_back(Mat2(n, u, 0, 0, 1));
      gens.push_back(Mat2(n, 1, 0, 0, u));
    }
  return SubgroupRep::closure(gens, n);
}

}  // namespace

TEST_CASE("closure orders") {
  CHECK(SubgroupRep::closure({Mat2::identity(27)}, 27).order() == 1);
  const SubgroupRep b = borel(3);
  CHECK(b.order() == 12);
  CHECK(index_in_gl2(b) == 4);
  CHECK(SubgroupRep::full(3).order() == 48);
  CHECK(SubgroupRep::full(27).order() == gl2_order(27));
  CHECK(SubgroupRep::full(36).order() == gl2_order(36));
  CHECK_THROWS_AS(SubgroupRep::closure({Mat2(9, 3, 0, 0, 1)}, 9), NonInvertible);
  CHECK_THROWS_AS(SubgroupRep::closure({}, 27, 0), GroupTooLarge);
  CHECK_THROWS_AS(SubgroupRep::closure(SubgroupRep::full(27).gens(), 27, 1000), GroupTooLarge);
}

TEST_CASE("minus identity and determinant") {
  CHECK(contains_minus_identity(SubgroupRep::full(3)));
  CHECK(det_full(SubgroupRep::full(3)));
  CHECK_FALSE(contains_minus_identity(SubgroupRep::trivial(3)));
  CHECK_FALSE(det_full(SubgroupRep::trivial(3)));
}

TEST_CASE("level and preimage") {
  CHECK(level(SubgroupRep::full(27)) == 1);
  const SubgroupRep b9 = full_preimage(borel(3), 9);
  CHECK(b9.order() == 12 * 81);
  CHECK(level(b9) == 3);
  CHECK(full_preimage(SubgroupRep::trivial(3), 9).order() == 81);
  CHECK(full_preimage(SubgroupRep::full(3), 27) == SubgroupRep::full(27));
  CHECK(reduce_group(b9, 3) == borel(3));
  CHECK(full_preimage(borel(2), 10).order() == gl2_order(10) / 3);
  CHECK(level(borel(9)) == 9);
  CHECK(full_preimage(reduce_group(borel(9), 9), 27) == full_preimage(borel(9), 27));
}

TEST_CASE("conjugacy") {
  std::mt19937 rng(5);
  const SubgroupRep b = full_preimage(borel(3), 9);
  for (int i = 0; i < 5; ++i) {
    const Mat2 t = random_unit_mat(rng, 9);
    const SubgroupRep c = conjugate(b, t);
    const auto s = is_conjugate(b, c);
    REQUIRE(s.has_value());
    CHECK(conjugate(b, *s) == c);
  }
  CHECK_FALSE(is_conjugate(b, SubgroupRep::full(9)).has_value());
  CHECK(is_conjugate_into(b, SubgroupRep::full(9)));
  CHECK_FALSE(is_conjugate_into(SubgroupRep::full(9), b));
  // Point stabilizer of e1 versus the stabilizer of the line modulo e1.
  const SubgroupRep p1 = SubgroupRep::closure({Mat2(3, 1, 1, 0, 1), Mat2(3, 1, 0, 0, 2)}, 3);
  const SubgroupRep p2 = SubgroupRep::closure({Mat2(3, 1, 1, 0, 1), Mat2(3, 2, 0, 0, 1)}, 3);
  CHECK_FALSE(is_conjugate(p1, p2).has_value());
  CHECK(is_conjugate(p1, SubgroupRep::closure({Mat2(3, 1, 0, 1, 1), Mat2(3, 2, 0, 0, 1)}, 3)).has_value());
}

TEST_CASE("stable lines and fixed vectors") {
  CHECK(stable_lines(SubgroupRep::full(3), 3).empty());
  const auto lines = stable_lines(borel(3), 3);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0] == Line{3, 1, 0});
  const SubgroupRep split = SubgroupRep::closure({Mat2(3, 2, 0, 0, 1), Mat2(3, 1, 0, 0, 2)}, 3);
  CHECK(stable_lines(split, 3).size() == 2);
  CHECK(stable_lines(SubgroupRep::trivial(3), 3).size() == 4);
  CHECK(all_lines(5).size() == 6);
  CHECK(make_line(3, 2, 1) == Line{3, 1, 2});

  CHECK_FALSE(fixes_vector_of_order(SubgroupRep::full(3), 3));
  const SubgroupRep p1 = SubgroupRep::closure({Mat2(3, 1, 1, 0, 1), Mat2(3, 1, 0, 0, 2)}, 3);
  CHECK(fixes_vector_of_order(p1, 3));
  CHECK(count_stable_cyclic_subgroups(borel(9), 9) == 1);
  CHECK(count_stable_cyclic_subgroups(SubgroupRep::full(9), 9) == 0);
  CHECK(count_stable_cyclic_subgroups(SubgroupRep::trivial(9), 9) == 12);
}

TEST_CASE("stable line counts over a prime field") {
  std::mt19937 rng(6);
  for (int i = 0; i < 200; ++i) {
    std::vector<Mat2> gens{random_unit_mat(rng, 5)};
    if (i % 2) gens.push_back(random_unit_mat(rng, 5));
    const std::size_t k = stable_lines(SubgroupRep::closure(gens, 5), 5).size();
    CHECK((k == 0 || k == 1 || k == 2 || k == 6));
  }
}
