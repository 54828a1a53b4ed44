#include <sstream>

#include "doctest.h"
#include "galimg/classifier.hpp"

using namespace galimg;

namespace {

const Catalog& shipped() {
  static const Catalog c = load_catalog_file(GALIMG_DATA_DIR "/catalog_3adic.txt");
  return c;
}

const Classifier& classifier() {
  static const Classifier cl(shipped(), load_facts_file(GALIMG_DATA_DIR "/facts.txt"));
  return cl;
}

std::vector<std::string> tuples(const std::string& graph, const std::string& torsion) {
  std::vector<std::string> out;
  for (const auto& t : classifier().classify(make_query(graph, torsion)).tuples) out.push_back(t.str());
  return out;
}

}  // namespace

TEST_CASE("torsion parsing") {
  CHECK(parse_torsion("1").str() == "1");
  CHECK(parse_torsion("Z/6").str() == "6");
  CHECK(parse_torsion("2x6").str() == "2x6");
  CHECK(parse_torsion("Z/2xZ/8").str() == "2x8");
  CHECK_THROWS_AS(parse_torsion("11"), QueryError);
  CHECK_THROWS_AS(parse_torsion("3x3"), QueryError);
  CHECK_THROWS_AS(parse_torsion("x"), QueryError);
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(make_query("L4", "1"), QueryError);
  CHECK_THROWS_AS(make_query("L2(2)", "2"), QueryError);
  CHECK_THROWS_AS(make_query("L2(2)", "1,1"), QueryError);       // a 2-isogeny gives a point of order 2
  CHECK_THROWS_AS(make_query("L2(3)", "7,1"), QueryError);       // Z/7 with a 3-isogeny
  CHECK_THROWS_AS(make_query("L2(3)", "9,1"), QueryError);       // no cyclic 9-isogeny
  CHECK_THROWS_AS(make_query("T4", "2,2,2,2"), QueryError);      // center has full 2-torsion
  CHECK_THROWS_AS(make_query("L1", "3"), QueryError);
  CHECK_NOTHROW(make_query("L3(9)", "1,3,9"));
  CHECK_NOTHROW(make_query("T4", "2x2,4,2,?"));
}

TEST_CASE("graph shapes") {
  CHECK(graph_types().size() == 21);
  const GraphShape& s = graph_shape("S");
  CHECK(s.edge_count(0, 2) == 3);
  CHECK(s.isogeny_degrees(2).count(4));
  CHECK(s.isogeny_degrees(0) == std::set<std::uint32_t>{2, 3, 6});
  CHECK(graph_shape("L3(9)").prime_power_paths(0, 3, 2) == 1);
  CHECK(graph_shape("L3(9)").prime_power_paths(1, 3, 2) == 0);
  CHECK(graph_shape("R6").automorphisms().size() == 4);
  CHECK(graph_shape("T8").automorphisms().size() == 8);
}

TEST_CASE("rational points of order 3 and 9") {
  CHECK_FALSE(has_rational_point_of_order(SubgroupRep::full(3), 3));
  CHECK(has_rational_point_of_order(shipped().at("3.8.0.1").group, 3));
  CHECK_FALSE(has_rational_point_of_order(shipped().at("3.4.0.1").group, 3));
  CHECK_THROWS(has_rational_point_of_order(SubgroupRep::full(9), 27));
  const std::set<std::string> three{"3.8.0.1", "3.24.0.1", "9.24.0.1", "9.24.0.2", "9.72.0.1",
                                    "9.72.0.2", "9.72.0.3", "9.72.0.4", "9.72.0.5", "9.72.0.6",
                                    "9.72.0.7", "9.72.0.8", "9.72.0.9", "9.72.0.10", "27.72.0.1"};
  CHECK(classifier().three_torsion_labels() == three);
  CHECK(classifier().nine_torsion_labels() == std::set<std::string>{"9.72.0.5"});
}

TEST_CASE("fact file errors") {
  std::istringstream no_cite("below; 3.3.0.1; point-5;\n");
  CHECK_THROWS_AS(load_facts(no_cite), FactError);
  std::istringstream bad_feature("below; 3.3.0.1; point5; x\n");
  CHECK_THROWS_AS(load_facts(bad_feature), FactError);
  std::istringstream unknown("below; 5.5.0.1; point-5; x\n");
  CHECK_THROWS_AS(Classifier(shipped(), load_facts(unknown)), CatalogError);
}

TEST_CASE("selected classifications") {
  CHECK(tuples("L2(2)", "2,2") ==
        std::vector<std::string>{"(1.1.0.1, 1.1.0.1)", "(3.3.0.1, 3.3.0.1)", "(3.6.0.1, 3.6.0.1)"});
  CHECK(tuples("R6", "2,2,2,2,2,2") ==
        std::vector<std::string>{"(9.12.0.1, 9.12.0.1, 3.12.0.1, 3.12.0.1, 9.12.0.1, 9.12.0.1)"});
  CHECK(tuples("S", "2x6,2x2,6,2,6,2,6,2") ==
        std::vector<std::string>{"(3.8.0.1, 3.8.0.2, 3.8.0.1, 3.8.0.2, 3.8.0.1, 3.8.0.2, 3.8.0.1, 3.8.0.2)"});
  const auto l1 = classifier().classify(make_query("L1", "1"));
  CHECK(l1.tuples.size() == 9);
  CHECK(l1.tuples.back().labels[0] == "27.243.12.1");
  CHECK_FALSE(l1.tuples.back().flags.empty());
  CHECK(l1.tuples.front().flags.empty());
}

TEST_CASE("tuples respect the edge rules") {
  for (const std::string& type : graph_types()) {
    const GraphShape& g = graph_shape(type);
    const GraphQuery q{type, std::vector<std::optional<Torsion>>(g.vertices)};
    for (const auto& t : classifier().classify(q).tuples) {
      CAPTURE(t.str());
      for (const Edge& e : g.edges) {
        if (e.prime != 3) {
          CHECK(t.labels[e.u] == t.labels[e.v]);
        } else {
          const auto& out = classifier().profile(t.labels[e.u]).transforms;
          CHECK(std::find(out.begin(), out.end(), t.labels[e.v]) != out.end());
        }
      }
    }
  }
}

TEST_CASE("more facts never add tuples") {
  FactBase fewer = load_facts_file(GALIMG_DATA_DIR "/facts.txt");
  fewer.facts.resize(fewer.facts.size() / 2);
  const Classifier weak(shipped(), fewer);
  for (const std::string& type : graph_types()) {
    const GraphShape& g = graph_shape(type);
    const GraphQuery q{type, std::vector<std::optional<Torsion>>(g.vertices)};
    const auto strong_t = classifier().classify(q).tuples;
    const auto weak_t = weak.classify(q).tuples;
    CAPTURE(type);
    CHECK(strong_t.size() <= weak_t.size());
    for (const auto& t : strong_t) CHECK(std::find(weak_t.begin(), weak_t.end(), t) != weak_t.end());
  }
}

TEST_CASE("graphs for a label") {
  const auto hits = classifier().graphs_for_label("27.243.12.1");
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].graph_type == "L1");
  CHECK(hits[0].conditional);
  bool l39 = false;
  for (const auto& h : classifier().graphs_for_label("9.72.0.5"))
    if (h.graph_type == "L3(9)") l39 = std::find(h.vertices.begin(), h.vertices.end(), 3) != h.vertices.end();
  CHECK(l39);
  std::vector<std::string> full;
  for (const auto& h : classifier().graphs_for_label("1.1.0.1")) full.push_back(h.graph_type);
  CHECK(full == std::vector<std::string>{"L1", "L2(2)", "L2(5)", "L2(7)", "L2(11)", "L2(13)", "L2(17)", "L2(37)",
                                         "L3(25)", "R4(10)", "R4(14)", "T4", "T6", "T8"});
  CHECK_THROWS_AS(classifier().graphs_for_label("5.5.0.1"), CatalogError);
}

TEST_CASE("printed tuples agree apart from flagged rows") {
  const auto reports = compare_with_printed(classifier(), load_printed_file(GALIMG_DATA_DIR "/printed_tuples.txt"));
  std::size_t flagged = 0;
  for (const auto& r : reports) {
    CAPTURE(r.graph_type);
    CAPTURE(r.torsion);
    CHECK(r.ok());
    flagged += r.flagged.size();
  }
  CHECK(flagged == 2);
}
