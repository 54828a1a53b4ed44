#pragma once

// Group-theoretic claims about catalog labels, read from a data file and
// checked by computation.
//
//   kind; labels; target; citation
//
// kinds: three-torsion, nine-torsion (exact label sets), contained (each
// label conjugate into target), unstable (no stable line mod 3).

#include <istream>
#include <string>
#include <vector>

#include "galimg/classifier.hpp"

namespace galimg {

struct LemmaClaim {
  std::string kind;
  std::vector<std::string> labels;
  std::string target;
  std::string citation;
  int line = 0;
};

std::vector<LemmaClaim> load_lemmas(std::istream& in);
std::vector<LemmaClaim> load_lemmas_file(const std::string& path);

struct LemmaCheck {
  const LemmaClaim* claim = nullptr;
  bool ok = false;
  /// Labels violating the claim; for set claims "+x" (computed only) and
  /// "-x" (claimed only).
  std::vector<std::string> offending;
};

std::vector<LemmaCheck> check_lemmas(const std::vector<LemmaClaim>& claims, const Catalog& c, const Classifier& cl);

}  // namespace galimg
