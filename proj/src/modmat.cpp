#include "galimg/modmat.hpp"

#include <cctype>
#include <numeric>

namespace galimg {

ModulusMismatch::ModulusMismatch(Modulus lhs, Modulus rhs)
    : std::invalid_argument("modulus mismatch: " + std::to_string(lhs) + " vs " +
                            std::to_string(rhs)) {}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

bool is_unit(std::uint64_t x, Modulus n) { return n == 1 || gcd_u64(x % n, n) == 1; }

std::uint32_t residue(std::int64_t x, Modulus n) {
  std::int64_t r = x % static_cast<std::int64_t>(n);
  if (r < 0) r += n;
  return static_cast<std::uint32_t>(r);
}

std::uint32_t inverse_mod(std::uint64_t x, Modulus n) {
  std::int64_t r0 = n, r1 = static_cast<std::int64_t>(x % n);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) {
    if (n == 1) return 0;
    throw NonInvertible(std::to_string(x) + " is not a unit modulo " + std::to_string(n));
  }
  return residue(s0, n);
}

Mat2::Mat2(Modulus modulus, std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
    : n(modulus) {
  if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
  a = residue(a_, n);
  b = residue(b_, n);
  c = residue(c_, n);
  d = residue(d_, n);
}

std::uint32_t Mat2::det() const {
  std::uint64_t ad = std::uint64_t{a} * d % n;
  std::uint64_t bc = std::uint64_t{b} * c % n;
  return static_cast<std::uint32_t>((ad + n - bc) % n);
}

Mat2 Mat2::from_code(Modulus n, std::uint64_t code) {
  Mat2 m;
  m.n = n;
  m.d = static_cast<std::uint32_t>(code % n);
  code /= n;
  m.c = static_cast<std::uint32_t>(code % n);
  code /= n;
  m.b = static_cast<std::uint32_t>(code % n);
  m.a = static_cast<std::uint32_t>(code / n);
  return m;
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  if (x.n != y.n) throw ModulusMismatch(x.n, y.n);
  const std::uint64_t n = x.n;
  Mat2 r;
  r.n = x.n;
  r.a = static_cast<std::uint32_t>((std::uint64_t{x.a} * y.a + std::uint64_t{x.b} * y.c) % n);
  r.b = static_cast<std::uint32_t>((std::uint64_t{x.a} * y.b + std::uint64_t{x.b} * y.d) % n);
  r.c = static_cast<std::uint32_t>((std::uint64_t{x.c} * y.a + std::uint64_t{x.d} * y.c) % n);
  r.d = static_cast<std::uint32_t>((std::uint64_t{x.c} * y.b + std::uint64_t{x.d} * y.d) % n);
  return r;
}

Mat2 mat_inv(const Mat2& x) {
  const std::uint32_t det = x.det();
  if (!is_unit(det, x.n)) {
    throw NonInvertible("matrix " + to_string(x) + " has determinant " + std::to_string(det) +
                        " sharing a factor with " + std::to_string(x.n));
  }
  const std::uint64_t inv = inverse_mod(det, x.n);
  const std::uint64_t n = x.n;
  Mat2 r;
  r.n = x.n;
  r.a = static_cast<std::uint32_t>(inv * x.d % n);
  r.b = static_cast<std::uint32_t>(inv * ((n - x.b) % n) % n);
  r.c = static_cast<std::uint32_t>(inv * ((n - x.c) % n) % n);
  r.d = static_cast<std::uint32_t>(inv * x.a % n);
  return r;
}

Mat2 mat_pow(Mat2 x, std::uint64_t e) {
  Mat2 r = Mat2::identity(x.n);
  while (e > 0) {
    if (e & 1) r = r * x;
    x = x * x;
    e >>= 1;
  }
  return r;
}

std::uint64_t mat_order(const Mat2& x) {
  if (!x.invertible()) throw NonInvertible("order of a singular matrix " + to_string(x));
  const Mat2 id = Mat2::identity(x.n);
  Mat2 y = x;
  std::uint64_t k = 1;
  while (y != id) {
    y = y * x;
    ++k;
  }
  return k;
}

Mat2 reduce(const Mat2& x, Modulus m) {
  if (m == 0 || x.n % m != 0) {
    throw std::invalid_argument("cannot reduce modulo " + std::to_string(m) + ": it does not divide " +
                                std::to_string(x.n));
  }
  if (m == 1) throw std::invalid_argument("cannot reduce to modulus 1");
  return Mat2(m, x.a, x.b, x.c, x.d);
}

Mat2 lift(const Mat2& x, Modulus n2) {
  if (n2 % x.n != 0) {
    throw std::invalid_argument("cannot lift modulo " + std::to_string(x.n) + " to " +
                                std::to_string(n2));
  }
  return Mat2(n2, x.a, x.b, x.c, x.d);
}

std::vector<Mat2> fiber(const Mat2& x, Modulus n2) {
  if (n2 % x.n != 0) {
    throw std::invalid_argument("fiber target " + std::to_string(n2) + " is not a multiple of " +
                                std::to_string(x.n));
  }
  const std::uint32_t k = n2 / x.n;
  std::vector<Mat2> out;
  out.reserve(std::size_t{k} * k * k * k);
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = 0; j < k; ++j)
      for (std::uint32_t s = 0; s < k; ++s)
        for (std::uint32_t t = 0; t < k; ++t) {
          Mat2 m(n2, x.a + std::int64_t{i} * x.n, x.b + std::int64_t{j} * x.n,
                 x.c + std::int64_t{s} * x.n, x.d + std::int64_t{t} * x.n);
          if (m.invertible()) out.push_back(m);
        }
  return out;
}

std::vector<Modulus> prime_factors(Modulus n) {
  std::vector<Modulus> ps;
  for (Modulus p = 2; std::uint64_t{p} * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

std::vector<Modulus> divisors(Modulus n) {
  std::vector<Modulus> ds;
  for (Modulus m = 1; m <= n; ++m)
    if (n % m == 0) ds.push_back(m);
  return ds;
}

std::uint64_t gl2_order(Modulus n) {
  std::uint64_t order = 1;
  Modulus rest = n;
  for (Modulus p : prime_factors(n)) {
    std::uint64_t pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    const std::uint64_t q = pk / p;  // p^(k-1)
    order *= (std::uint64_t{p} * p - 1) * (std::uint64_t{p} * p - p) * q * q * q * q;
  }
  return order;
}

std::vector<Mat2> gl2_elements(Modulus n) {
  std::vector<Mat2> out;
  out.reserve(gl2_order(n));
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        for (std::uint32_t d = 0; d < n; ++d) {
          Mat2 m(n, a, b, c, d);
          if (m.invertible()) out.push_back(m);
        }
  return out;
}

std::vector<Mat2> sl2_elements(Modulus n) {
  std::vector<Mat2> out;
  for (const Mat2& m : gl2_elements(n))
    if (m.det() == 1 % n) out.push_back(m);
  return out;
}

std::string to_string(const Mat2& x) {
  return "[" + std::to_string(x.a) + "," + std::to_string(x.b) + "," + std::to_string(x.c) + "," +
         std::to_string(x.d) + "]";
}

namespace {

void skip_space(std::string_view s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

std::int64_t parse_int(std::string_view s, std::size_t& i) {
  skip_space(s, i);
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
    throw std::invalid_argument("expected integer in matrix text: '" + std::string(s) + "'");
  std::int64_t v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + (s[i++] - '0');
    if (v > (std::int64_t{1} << 40)) throw std::invalid_argument("matrix entry out of range");
  }
  return neg ? -v : v;
}

void expect(std::string_view s, std::size_t& i, char ch) {
  skip_space(s, i);
  if (i >= s.size() || s[i] != ch)
    throw std::invalid_argument(std::string("expected '") + ch + "' in matrix text: '" +
                                std::string(s) + "'");
  ++i;
}

Mat2 parse_one(std::string_view s, std::size_t& i, Modulus n) {
  expect(s, i, '[');
  std::int64_t e[4];
  for (int k = 0; k < 4; ++k) {
    if (k > 0) expect(s, i, ',');
    e[k] = parse_int(s, i);
  }
  expect(s, i, ']');
  return Mat2(n, e[0], e[1], e[2], e[3]);
}

}  // namespace

Mat2 parse_mat(std::string_view text, Modulus n) {
  std::size_t i = 0;
  Mat2 m = parse_one(text, i, n);
  skip_space(text, i);
  if (i != text.size()) throw std::invalid_argument("trailing text after matrix: '" + std::string(text) + "'");
  return m;
}

std::vector<Mat2> parse_mat_list(std::string_view text, Modulus n) {
  std::vector<Mat2> out;
  std::size_t i = 0;
  for (;;) {
    skip_space(text, i);
    while (i < text.size() && (text[i] == ';' || text[i] == ',')) {
      ++i;
      skip_space(text, i);
    }
    if (i >= text.size()) break;
    out.push_back(parse_one(text, i, n));
  }
  return out;
}

}  // namespace galimg
