#pragma once

// Subgroups of GL_2(Z/nZ) given by generators, with the full element set
// computed at construction.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "galimg/modmat.hpp"

namespace galimg {

class GroupTooLarge : public std::runtime_error {
 public:
  explicit GroupTooLarge(std::uint64_t cap);
};

class SubgroupRep {
 public:
  static constexpr std::uint64_t kDefaultCap = 10'000'000;

  /// The group generated by `gens` (all invertible modulo n). Throws
  /// NonInvertible for a singular generator, ModulusMismatch for a generator
  /// with another modulus and GroupTooLarge when the order exceeds `cap`.
  static SubgroupRep closure(std::vector<Mat2> gens, Modulus n, std::uint64_t cap = kDefaultCap);
  static SubgroupRep full(Modulus n);
  static SubgroupRep trivial(Modulus n);

  Modulus modulus() const { return data_->n; }
  const std::vector<Mat2>& gens() const { return data_->gens; }
  /// Element codes (Mat2::code) in increasing order, i.e. lexicographic order.
  std::span<const std::uint64_t> codes() const { return data_->codes; }
  std::vector<Mat2> elements() const;
  std::uint64_t order() const { return data_->codes.size(); }
  bool contains(const Mat2& x) const;
  /// Hash of the multiset of (det, trace) over all elements; equal for
  /// conjugate subgroups.
  std::uint64_t class_signature() const { return data_->signature; }

  friend bool operator==(const SubgroupRep& g, const SubgroupRep& h) {
    return g.modulus() == h.modulus() && g.data_->codes == h.data_->codes;
  }

 private:
  struct Data {
    Modulus n = 2;
    std::vector<Mat2> gens;
    std::vector<std::uint64_t> codes;
    std::uint64_t signature = 0;
  };
  explicit SubgroupRep(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

/// A line in (Z/pZ)^2, represented by a vector whose first nonzero
/// coordinate is 1.
struct Line {
  Modulus p = 3;
  std::uint32_t x = 1, y = 0;
  friend bool operator==(const Line&, const Line&) = default;
  friend auto operator<=>(const Line&, const Line&) = default;
};

/// All p+1 lines of (Z/pZ)^2 in lexicographic order of their normalized
/// representatives.
std::vector<Line> all_lines(Modulus p);
Line make_line(Modulus p, std::int64_t x, std::int64_t y);
std::string to_string(const Line& line);

std::uint64_t index_in_gl2(const SubgroupRep& g);
bool contains_minus_identity(const SubgroupRep& g);
bool det_full(const SubgroupRep& g);
/// Image of g modulo m (m divides the modulus, m >= 2).
SubgroupRep reduce_group(const SubgroupRep& g, Modulus m);
/// pi^{-1}(g) inside GL_2(Z/nZ) for n a multiple of g's modulus.
SubgroupRep full_preimage(const SubgroupRep& g, Modulus n);
/// Smallest divisor m of the modulus with g = pi^{-1}(pi_m(g)); 1 for the
/// full group.
Modulus level(const SubgroupRep& g);
/// Brings g to modulus n: reduction when n divides the modulus, full
/// preimage when the modulus divides n.
SubgroupRep change_modulus(const SubgroupRep& g, Modulus n);

/// t * g * t^{-1}.
SubgroupRep conjugate(const SubgroupRep& g, const Mat2& t);
/// The lexicographically least t with t g t^{-1} = h, if any.
std::optional<Mat2> is_conjugate(const SubgroupRep& g, const SubgroupRep& h);
/// The lexicographically least t with t g t^{-1} contained in h, if any.
std::optional<Mat2> conjugator_into(const SubgroupRep& g, const SubgroupRep& h);
bool is_conjugate_into(const SubgroupRep& g, const SubgroupRep& h);

/// Lines L of (Z/pZ)^2 with (g mod p) L = L.
std::vector<Line> stable_lines(const SubgroupRep& g, Modulus p);
/// Number of cyclic subgroups of order q in (Z/qZ)^2 mapped to themselves by
/// every element of g mod q. Counts rational cyclic q-isogenies.
std::size_t count_stable_cyclic_subgroups(const SubgroupRep& g, Modulus q);
/// Whether some vector of exact order m in (Z/mZ)^2 is fixed by g mod m.
bool fixes_vector_of_order(const SubgroupRep& g, Modulus m);
/// Whether g has an element of determinant -1 and trace 0 (the image of
/// complex conjugation must be such an element).
bool has_complex_conjugation(const SubgroupRep& g);

}  // namespace galimg
