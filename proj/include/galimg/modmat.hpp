#pragma once

// 2x2 matrices over Z/nZ.
//
// Matrices act on column vectors: the first column of M is the image of the
// first basis vector. Entries are always stored as least nonnegative residues,
// so equality and hashing are bitwise.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace galimg {

using Modulus = std::uint32_t;

class ModulusMismatch : public std::invalid_argument {
 public:
  ModulusMismatch(Modulus lhs, Modulus rhs);
};

class NonInvertible : public std::domain_error {
 public:
  explicit NonInvertible(const std::string& what) : std::domain_error(what) {}
};

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
bool is_unit(std::uint64_t x, Modulus n);
/// Inverse of x modulo n; throws NonInvertible when gcd(x, n) > 1.
std::uint32_t inverse_mod(std::uint64_t x, Modulus n);
/// Least nonnegative residue of a signed integer.
std::uint32_t residue(std::int64_t x, Modulus n);

struct Mat2 {
  Modulus n = 2;
  std::uint32_t a = 1, b = 0, c = 0, d = 1;

  Mat2() = default;
  /// Normalizing constructor: entries may be any signed integers.
  Mat2(Modulus modulus, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  static Mat2 identity(Modulus n) { return Mat2(n, 1, 0, 0, 1); }
  static Mat2 minus_identity(Modulus n) { return Mat2(n, -1, 0, 0, -1); }
  static Mat2 diag(Modulus n, std::int64_t x, std::int64_t y) { return Mat2(n, x, 0, 0, y); }

  std::uint32_t det() const;
  std::uint32_t trace() const { return static_cast<std::uint32_t>((std::uint64_t{a} + d) % n); }
  bool invertible() const { return is_unit(det(), n); }
  bool is_identity() const { return a == 1 % n && b == 0 && c == 0 && d == 1 % n; }

  /// Dense index in [0, n^4), row-major; lexicographic on (a, b, c, d).
  std::uint64_t code() const {
    return ((std::uint64_t{a} * n + b) * n + c) * n + d;
  }
  static Mat2 from_code(Modulus n, std::uint64_t code);

  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2&, const Mat2&) = default;
};

Mat2 mat_mul(const Mat2& x, const Mat2& y);
inline Mat2 operator*(const Mat2& x, const Mat2& y) { return mat_mul(x, y); }
Mat2 mat_inv(const Mat2& x);
Mat2 mat_pow(Mat2 x, std::uint64_t e);
/// Multiplicative order of an invertible matrix.
std::uint64_t mat_order(const Mat2& x);

/// Entrywise reduction to a modulus m dividing x.n.
Mat2 reduce(const Mat2& x, Modulus m);
/// All invertible matrices modulo n2 (a multiple of x.n) that reduce to x.
std::vector<Mat2> fiber(const Mat2& x, Modulus n2);
/// The canonical lift: same residues read modulo n2.
Mat2 lift(const Mat2& x, Modulus n2);

/// |GL_2(Z/nZ)|.
std::uint64_t gl2_order(Modulus n);
/// GL_2(Z/nZ) in lexicographic (a, b, c, d) order.
std::vector<Mat2> gl2_elements(Modulus n);
/// SL_2(Z/nZ) in lexicographic order.
std::vector<Mat2> sl2_elements(Modulus n);
std::vector<Modulus> divisors(Modulus n);
std::vector<Modulus> prime_factors(Modulus n);

/// "[a,b,c,d]"
std::string to_string(const Mat2& x);
/// Parses "[a,b,c,d]" (whitespace tolerant, signed entries allowed).
Mat2 parse_mat(std::string_view text, Modulus n);
/// Parses a list like "[1,2,0,1];[2,0,0,1]" or "[1,2,0,1] [2,0,0,1]".
std::vector<Mat2> parse_mat_list(std::string_view text, Modulus n);

}  // namespace galimg
