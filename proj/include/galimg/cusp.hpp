#pragma once

// Cusps of X_G as double cosets G \ GL_2(Z/nZ) / U_n, where U_n is generated
// by [1,1,0,1] and -I, and the genus of X_G from the action of SL_2 on cosets.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "galimg/subgroup.hpp"

namespace galimg {

class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CuspSet {
  Modulus n = 2;
  /// Each cusp is a double coset, stored as sorted element codes.
  std::vector<std::vector<std::uint64_t>> cusps;
  std::vector<bool> rational_mask;
  /// cusp_of[code] = index of the double coset containing that matrix, or -1
  /// for singular codes.
  std::vector<std::int32_t> cusp_of;

  std::size_t size() const { return cusps.size(); }
};

/// g with -I adjoined.
SubgroupRep with_minus_identity(const SubgroupRep& g);

/// Requires -I in g and full determinant (HypothesisViolation otherwise).
CuspSet cusp_set(const SubgroupRep& g);
/// Index of the cusp containing cusp c right-multiplied by diag(1, a).
std::size_t galois_action(const CuspSet& cs, std::size_t c, std::uint32_t a);
std::size_t rational_cusp_count(const SubgroupRep& g);

struct GenusData {
  std::uint64_t index = 1;  // [SL_2 : +-(G cap SL_2)]
  std::uint64_t nu2 = 0, nu3 = 0, cusps = 1;
  std::uint64_t genus = 0;
};

/// Throws HypothesisViolation like cusp_set, and std::logic_error when the
/// formula does not give a nonnegative integer.
GenusData genus_data(const SubgroupRep& g);
std::uint64_t genus(const SubgroupRep& g);

}  // namespace galimg
