#pragma once

// Change of 3-adic image across a rational 3-isogeny.
//
// With the stable line moved to the first basis vector, every element of the
// mod 81 preimage has lower-left entry divisible by 3, and the image of the
// isogenous curve consists of the matrices [a, 3b; c/3, d]. On the output the
// kernel of the dual isogeny is the line (0,1).

#include <optional>
#include <string>
#include <vector>

#include "galimg/catalog.hpp"
#include "galimg/subgroup.hpp"

namespace galimg {

class LineNotStable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix t with t * span(line) = span(e1) modulo p, lifted to modulus n.
Mat2 line_to_first_axis(const Line& line, Modulus n);

/// g at modulus 27; line a stable line of g mod 3.
SubgroupRep transform_image(const SubgroupRep& g, const Line& line);

/// The line carrying the dual kernel in transform_image's output coordinates.
inline Line dual_line() { return Line{3, 0, 1}; }

struct TransformResult {
  std::string input_label;
  Line line;
  SubgroupRep output_group = SubgroupRep::trivial(27);
  std::optional<std::string> output_label;
};

/// One result per stable line of the labelled group, in line order.
std::vector<TransformResult> transform_label(const std::string& label, const Catalog& c);

struct IsogenyTableRow {
  std::string left, right;
};

/// Rows "left right" with '#' comments.
std::vector<IsogenyTableRow> load_isogeny_table(std::istream& in);
std::vector<IsogenyTableRow> load_isogeny_table_file(const std::string& path);

struct IsogenyTableCheck {
  IsogenyTableRow row;
  std::vector<TransformResult> outputs;  // every stable line of the left label
  bool reproduced = false;
};

/// Throws CatalogError when a left label is missing from the catalog.
std::vector<IsogenyTableCheck> regenerate_isogeny_table(const std::vector<IsogenyTableRow>& rows, const Catalog& c);

enum class EdgeRule { kEqualLabels, kTransform };

/// Across an edge of prime degree ell: equal labels when ell != 3, otherwise
/// related by transform_image.
EdgeRule ell_neq_p_rule(unsigned edge_prime);
std::string to_string(EdgeRule rule);

}  // namespace galimg
