#include <random>

#include "doctest.h"
#include "galimg/catalog.hpp"
#include "galimg/isogeny.hpp"

using namespace galimg;

namespace {

const Catalog& shipped() {
  static const Catalog c = load_catalog_file(GALIMG_DATA_DIR "/catalog_3adic.txt");
  return c;
}

std::vector<std::string> outputs(const std::string& label) {
  std::vector<std::string> out;
  for (const auto& r : transform_label(label, shipped())) out.push_back(r.output_label.value_or("?"));
  return out;
}

}  // namespace

TEST_CASE("single-line transforms") {
  CHECK(outputs("3.4.0.1") == std::vector<std::string>{"3.4.0.1"});
  CHECK(outputs("9.12.0.1") == std::vector<std::string>{"3.12.0.1"});
  CHECK(outputs("9.36.0.2").size() == 2);
  CHECK(outputs("9.36.0.2")[0] == "27.36.0.1");
  CHECK(outputs("9.24.0.2") == std::vector<std::string>{"9.24.0.4"});
  CHECK(outputs("9.24.0.4") == std::vector<std::string>{"9.24.0.2"});
  CHECK(outputs("27.72.0.1") == std::vector<std::string>{"9.72.0.3"});
  CHECK(outputs("27.72.0.2") == std::vector<std::string>{"9.72.0.3"});
  CHECK(outputs("1.1.0.1").empty());
}

TEST_CASE("groups with two stable lines report both outputs") {
  CHECK(outputs("3.12.0.1") == std::vector<std::string>{"9.12.0.1", "9.12.0.1"});
  auto o = outputs("9.36.0.1");
  std::sort(o.begin(), o.end());
  CHECK(o == std::vector<std::string>{"9.36.0.4", "9.36.0.5"});
}

TEST_CASE("unstable line is rejected") {
  const SubgroupRep g = shipped().at("3.4.0.1").group;
  const auto lines = stable_lines(g, 3);
  REQUIRE(lines.size() == 1);
  for (const Line& l : all_lines(3))
    if (l != lines[0]) CHECK_THROWS_AS(transform_image(g, l), LineNotStable);
  CHECK_THROWS_AS(transform_image(SubgroupRep::full(9), lines[0]), std::invalid_argument);
}

TEST_CASE("transform keeps -I and full determinant and the dual line is stable") {
  for (const auto& e : shipped().entries()) {
    for (const Line& l : stable_lines(e.group, 3)) {
      CAPTURE(e.label);
      const SubgroupRep h = transform_image(e.group, l);
      CHECK(contains_minus_identity(h) == contains_minus_identity(e.group));
      CHECK(det_full(h));
      const auto dl = stable_lines(h, 3);
      CHECK(std::find(dl.begin(), dl.end(), dual_line()) != dl.end());
    }
  }
}

TEST_CASE("dual round trip returns the original class") {
  for (const auto& e : shipped().entries())
    for (const Line& l : stable_lines(e.group, 3)) {
      CAPTURE(e.label);
      const SubgroupRep back = transform_image(transform_image(e.group, l), dual_line());
      CHECK(identify(back, shipped()) == e.label);
    }
}

TEST_CASE("transform commutes with conjugation") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::uint32_t> d(0, 26);
  for (const char* label : {"3.24.0.1", "9.36.0.1", "9.72.0.8", "27.36.0.1"}) {
    const SubgroupRep g = shipped().at(label).group;
    for (int k = 0; k < 3; ++k) {
      Mat2 t;
      do t = Mat2(27, d(rng), d(rng), d(rng), d(rng));
      while (!t.invertible());
      const SubgroupRep h = conjugate(g, t);
      auto a = outputs(label);
      std::vector<std::string> b;
      for (const Line& l : stable_lines(h, 3)) b.push_back(*identify(transform_image(h, l), shipped()));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
    }
  }
}

TEST_CASE("edge rules") {
  CHECK(ell_neq_p_rule(2) == EdgeRule::kEqualLabels);
  CHECK(ell_neq_p_rule(3) == EdgeRule::kTransform);
  CHECK(ell_neq_p_rule(37) == EdgeRule::kEqualLabels);
  CHECK(to_string(ell_neq_p_rule(2)) == "labels equal across edge");
  CHECK_THROWS(ell_neq_p_rule(9));
}

TEST_CASE("every isogeny table row is reproduced") {
  const auto rows = load_isogeny_table_file(GALIMG_DATA_DIR "/isogeny_table.txt");
  CHECK(rows.size() == 39);
  for (const auto& chk : regenerate_isogeny_table(rows, shipped())) {
    CAPTURE(chk.row.left);
    CAPTURE(chk.row.right);
    CHECK(chk.reproduced);
  }
}
