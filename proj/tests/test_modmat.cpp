#include <random>

#include "doctest.h"
#include "galimg/modmat.hpp"

using namespace galimg;

namespace {

Mat2 random_mat(std::mt19937& rng, Modulus n, bool invertible) {
  std::uniform_int_distribution<std::uint32_t> dist(0, n - 1);
  for (;;) {
    Mat2 m(n, dist(rng), dist(rng), dist(rng), dist(rng));
    if (!invertible || m.invertible()) return m;
  }
}

}  // namespace

TEST_CASE("mat_mul basics") {
  std::mt19937 rng(1);
  const Mat2 id = Mat2::identity(27);
  for (int i = 0; i < 50; ++i) {
    const Mat2 m = random_mat(rng, 27, false);
    CHECK(id * m == m);
    CHECK(m * id == m);
  }
  const Mat2 x(3, 0, 2, 1, 0);
  CHECK(x * x == Mat2(3, 2, 0, 0, 2));
  CHECK_THROWS_AS(mat_mul(Mat2::identity(3), Mat2::identity(9)), ModulusMismatch);
}

TEST_CASE("inverse against brute force search mod 9") {
  std::mt19937 rng(2);
  for (int i = 0; i < 40; ++i) {
    const Mat2 m = random_mat(rng, 9, true);
    Mat2 found;
    bool ok = false;
    for (std::uint32_t a = 0; a < 9 && !ok; ++a)
      for (std::uint32_t b = 0; b < 9 && !ok; ++b)
        for (std::uint32_t c = 0; c < 9 && !ok; ++c)
          for (std::uint32_t d = 0; d < 9 && !ok; ++d) {
            Mat2 y(9, a, b, c, d);
            if (m * y == Mat2::identity(9)) {
              found = y;
              ok = true;
            }
          }
    REQUIRE(ok);
    CHECK(mat_inv(m) == found);
    CHECK(m * mat_inv(m) == Mat2::identity(9));
  }
}

TEST_CASE("mat_inv examples") {
  CHECK(mat_inv(Mat2::identity(27)) == Mat2::identity(27));
  CHECK(mat_inv(Mat2(3, 1, 1, 0, 1)) == Mat2(3, 1, 2, 0, 1));
  CHECK_THROWS_AS(mat_inv(Mat2(9, 0, 3, 1, 0)), NonInvertible);
}

TEST_CASE("reduce") {
  CHECK(reduce(Mat2(27, 1, 9, 0, 1), 9) == Mat2::identity(9));
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Mat2 x = random_mat(rng, 81, false);
    CHECK(reduce(x, 81) == x);
    CHECK(reduce(x, 27).det() == x.det() % 27);
  }
  CHECK_THROWS_AS(reduce(Mat2::identity(9), 2), std::invalid_argument);
}

TEST_CASE("fiber sizes") {
  CHECK(fiber(Mat2::identity(3), 3).size() == 1);
  const auto f = fiber(Mat2::identity(3), 9);
  CHECK(f.size() == 81);
  for (const Mat2& m : f) CHECK(m.invertible());
  std::size_t total = 0;
  for (const Mat2& g : gl2_elements(3)) total += fiber(g, 9).size();
  CHECK(total == 3888);
  CHECK(gl2_order(9) == 3888);
  CHECK(gl2_elements(9).size() == 3888);
}

TEST_CASE("ring laws on random samples") {
  std::mt19937 rng(4);
  for (Modulus n : {3u, 9u, 27u}) {
    for (int i = 0; i < 10000; ++i) {
      const Mat2 x = random_mat(rng, n, false), y = random_mat(rng, n, false), z = random_mat(rng, n, false);
      CHECK((x * y) * z == x * (y * z));
    }
    for (int i = 0; i < 200; ++i) {
      const Mat2 x = random_mat(rng, n, true);
      CHECK(mat_inv(mat_inv(x)) == x);
    }
  }
  for (int i = 0; i < 500; ++i) {
    const Mat2 x = random_mat(rng, 81, false), y = random_mat(rng, 81, false);
    CHECK(reduce(x * y, 27) == reduce(x, 27) * reduce(y, 27));
  }
}

TEST_CASE("matrix text") {
  CHECK(parse_mat("[1, -1, 0, 2]", 9) == Mat2(9, 1, 8, 0, 2));
  CHECK(to_string(Mat2(9, 1, 8, 0, 2)) == "[1,8,0,2]");
  const auto list = parse_mat_list("[1,1,0,1];[2,0,0,1] [1,0,1,1]", 3);
  CHECK(list.size() == 3);
  CHECK_THROWS(parse_mat("[1,2,3]", 3));
}
