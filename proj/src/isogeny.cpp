#include "galimg/isogeny.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace galimg {

Mat2 line_to_first_axis(const Line& line, Modulus n) {
  if (line.x == 0) return Mat2(n, 0, 1, 1, 0);
  return Mat2(n, 1, 0, -static_cast<std::int64_t>(line.y), 1);
}

SubgroupRep transform_image(const SubgroupRep& g, const Line& line) {
  constexpr Modulus kN = 27;
  if (g.modulus() != kN) throw std::invalid_argument("transform_image expects a group at modulus 27");
  if (line.p != 3) throw std::invalid_argument("transform_image works with lines modulo 3");
  const auto lines = stable_lines(g, 3);
  if (std::find(lines.begin(), lines.end(), line) == lines.end())
    throw LineNotStable("line " + to_string(line) + " is not stable under the group");

  const Mat2 t = line_to_first_axis(line, kN);
  const Mat2 ti = mat_inv(t);
  std::vector<Mat2> gens;
  for (const Mat2& s : g.gens()) {
    const Mat2 x = t * s * ti;
    if (x.c % 3 != 0) throw std::logic_error("conjugated generator " + to_string(x) + " does not fix the first axis");
    gens.push_back(Mat2(kN, x.a, 3 * std::int64_t{x.b}, x.c / 3, x.d));
  }
  // Image of the kernel of reduction from 81 to 27.
  gens.push_back(Mat2(kN, 1, 0, 9, 1));
  return SubgroupRep::closure(std::move(gens), kN);
}

std::vector<TransformResult> transform_label(const std::string& label, const Catalog& c) {
  const CatalogEntry& e = c.at(label);
  const auto g27 = at_modulus_27(e.group);
  if (!g27) throw CatalogError(label, "group is not determined modulo 27");
  std::vector<TransformResult> out;
  for (const Line& line : stable_lines(*g27, 3)) {
    TransformResult r{label, line, transform_image(*g27, line), std::nullopt};
    r.output_label = identify(r.output_group, c);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<IsogenyTableRow> load_isogeny_table(std::istream& in) {
  std::vector<IsogenyTableRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    IsogenyTableRow r;
    if (!(ss >> r.left)) continue;
    std::string extra;
    if (!(ss >> r.right) || (ss >> extra))
      throw std::invalid_argument("table line " + std::to_string(lineno) + ": expected two labels");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<IsogenyTableRow> load_isogeny_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_isogeny_table(in);
}

std::vector<IsogenyTableCheck> regenerate_isogeny_table(const std::vector<IsogenyTableRow>& rows, const Catalog& c) {
  std::map<std::string, std::vector<TransformResult>> memo;
  std::vector<IsogenyTableCheck> out;
  for (const IsogenyTableRow& row : rows) {
    auto it = memo.find(row.left);
    if (it == memo.end()) it = memo.emplace(row.left, transform_label(row.left, c)).first;
    IsogenyTableCheck chk{row, it->second, false};
    for (const auto& r : chk.outputs)
      if (r.output_label == row.right) chk.reproduced = true;
    out.push_back(std::move(chk));
  }
  return out;
}

EdgeRule ell_neq_p_rule(unsigned edge_prime) {
  if (edge_prime < 2) throw std::invalid_argument("edge degree must be a prime");
  for (unsigned d = 2; d * d <= edge_prime; ++d)
    if (edge_prime % d == 0) throw std::invalid_argument("edge degree must be a prime");
  return edge_prime == 3 ? EdgeRule::kTransform : EdgeRule::kEqualLabels;
}

std::string to_string(EdgeRule rule) {
  return rule == EdgeRule::kEqualLabels ? "labels equal across edge" : "labels related by transform_image";
}

}  // namespace galimg
