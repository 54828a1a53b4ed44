#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "doctest.h"
#include "galimg/lmfdb.hpp"

using namespace galimg;
namespace fs = std::filesystem;

namespace {

ClientOptions offline() {
  ClientOptions o;
  o.fixture_dir = GALIMG_DATA_DIR;
  o.offline = true;
  return o;
}

const Classifier& classifier() {
  static const Catalog c = load_catalog_file(GALIMG_DATA_DIR "/catalog_3adic.txt");
  static const Classifier cl(c, load_facts_file(GALIMG_DATA_DIR "/facts.txt"));
  return cl;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> fixture_classes() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(fs::path(GALIMG_DATA_DIR) / "fixtures"))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("galimg_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Serves the three API tables for the classes given, built from their
/// fixture records.
class MockLmfdb {
 public:
  explicit MockLmfdb(const std::vector<IsogenyClassRecord>& recs) {
    using nlohmann::json;
    for (const auto& rec : recs) {
      json curves = json::array();
      for (std::size_t i = 0; i < rec.curves.size(); ++i) {
        const CurveRecord& c = rec.curves[i];
        json t = json::array();
        if (c.torsion.m1 > 1) t.push_back(c.torsion.m1);
        if (c.torsion.m2 > 1) t.push_back(c.torsion.m2);
        // reversed so the client has to sort by lmfdb_number
        curves.insert(curves.begin(), json{{"lmfdb_label", c.label}, {"lmfdb_number", i + 1}, {"torsion_structure", t},
                                           {"cm", c.cm ? -4 : 0}});
        galrep_[c.label] = c.adic3 == "1.1.0.1" ? json::array() : json::array({json{{"adic_label", c.adic3}}});
      }
      curvedata_[rec.class_label] = curves;
      classdata_[rec.class_label] = json::array({json{{"isogeny_matrix", rec.isogeny_matrix}}});
    }
    auto reply = [](httplib::Response& res, const nlohmann::json& data) {
      res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    };
    server_.Get("/api/ec_curvedata/", [this, reply](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      auto it = curvedata_.find(req.get_param_value("lmfdb_iso"));
      reply(res, it == curvedata_.end() ? nlohmann::json::array() : it->second);
    });
    server_.Get("/api/ec_classdata/", [this, reply](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      auto it = classdata_.find(req.get_param_value("lmfdb_iso"));
      reply(res, it == classdata_.end() ? nlohmann::json::array() : it->second);
    });
    server_.Get("/api/ec_galrep/", [this, reply](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      if (broken_galrep) {
        res.set_content("<html>oops", "text/html");
        return;
      }
      auto it = galrep_.find(req.get_param_value("lmfdb_label"));
      reply(res, it == galrep_.end() ? nlohmann::json::array() : it->second);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockLmfdb() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> hits{0};
  std::atomic<bool> broken_galrep{false};

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::map<std::string, nlohmann::json> curvedata_, classdata_, galrep_;
};

}  // namespace

TEST_CASE("class labels") {
  CHECK(valid_class_label("14.a"));
  CHECK(valid_class_label("14450.b"));
  CHECK_FALSE(valid_class_label("14.a1"));
  CHECK_FALSE(valid_class_label("014.a"));
  CHECK_FALSE(valid_class_label("../x.a"));
  CHECK_THROWS_AS(fetch_class("14a", offline()), LmfdbError);
}

TEST_CASE("offline fixtures") {
  const IsogenyClassRecord r14 = fetch_class("14.a", offline());
  REQUIRE(r14.curves.size() == 6);
  std::multiset<std::string> tors;
  for (const auto& c : r14.curves) tors.insert(c.torsion.str());
  CHECK(tors == std::multiset<std::string>{"2", "2", "6", "6", "6", "6"});
  CHECK(graph_type_of(r14).first == "R6");

  const IsogenyClassRecord r50 = fetch_class("50.a", offline());
  CHECK(r50.curves.size() == 4);
  CHECK(graph_type_of(r50).first == "R4(15)");

  CHECK(graph_type_of(fetch_class("37.a", offline())).first == "L1");
  CHECK(graph_type_of(fetch_class("30.a", offline())).first == "S");
  CHECK_THROWS_AS(fetch_class("999999.zz", offline()), LmfdbError);
}

TEST_CASE("fixtures are stored in normalized form") {
  for (const std::string& cls : fixture_classes()) {
    CAPTURE(cls);
    const std::string text = slurp(fixture_path(offline(), cls));
    CHECK(record_to_json(record_from_json(text)) == text);
  }
}

TEST_CASE("malformed records") {
  CHECK_THROWS_AS(record_from_json("{"), LmfdbError);
  CHECK_THROWS_AS(record_from_json(R"({"class":"11.a","curves":[]})"), LmfdbError);
  const std::string base = R"({"class":"11.a","curves":[
      {"label":"11.a1","torsion":[5],"adic3":null,"cm":false},
      {"label":"11.a2","torsion":[],"adic3":"1.1.0.1","cm":false}],"isogeny_matrix":)";
  CHECK_NOTHROW(record_from_json(base + "[[1,5],[5,1]]}"));
  CHECK_THROWS_AS(record_from_json(base + "[[1,5],[25,1]]}"), LmfdbError);
  CHECK_THROWS_AS(record_from_json(base + "[[5,5],[5,1]]}"), LmfdbError);
  CHECK_THROWS_AS(record_from_json(base + "[[1,5,1],[5,1,1]]}"), LmfdbError);
  CHECK_THROWS_AS(record_from_json(R"({"class":"11.a","curves":[
      {"label":"12.a1","torsion":[],"adic3":"1.1.0.1","cm":false}],"isogeny_matrix":[[1]]})"),
                  LmfdbError);
  CHECK_THROWS_AS(record_from_json(R"({"class":"11.a","curves":[
      {"label":"11.a1","torsion":[11],"adic3":"1.1.0.1","cm":false}],"isogeny_matrix":[[1]]})"),
                  LmfdbError);
}

TEST_CASE("graph type from the isogeny matrix") {
  IsogenyClassRecord rec = record_from_json(slurp(fixture_path(offline(), "14.a")));
  // relabel the curves: the shape must still be found
  std::vector<int> perm{3, 5, 0, 1, 4, 2};
  IsogenyClassRecord shuffled = rec;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.curves[i] = rec.curves[perm[i]];
    for (std::size_t j = 0; j < perm.size(); ++j) shuffled.isogeny_matrix[i][j] = rec.isogeny_matrix[perm[i]][perm[j]];
  }
  CHECK(graph_type_of(shuffled).first == "R6");
  CHECK(crosscheck(shuffled, classifier()).ok());

  IsogenyClassRecord odd;
  odd.class_label = "19.z";
  odd.curves = {{"19.z1", {}, "1.1.0.1", false}, {"19.z2", {}, "1.1.0.1", false}};
  odd.isogeny_matrix = {{1, 19}, {19, 1}};
  CHECK_THROWS_AS(graph_type_of(odd), LmfdbError);
}

TEST_CASE("crosscheck of every committed fixture") {
  for (const std::string& cls : fixture_classes()) {
    CAPTURE(cls);
    const CrosscheckReport r = crosscheck(fetch_class(cls, offline()), classifier());
    CHECK(r.ok());
  }
  const CrosscheckReport r = crosscheck(fetch_class("14.a", offline()), classifier());
  REQUIRE(r.expected);
  CHECK(r.graph_type == "R6");
  std::multiset<std::string> labels(r.expected->labels.begin(), r.expected->labels.end());
  CHECK(labels == std::multiset<std::string>{"9.24.0.3", "9.24.0.3", "3.24.0.1", "3.24.0.1", "9.24.0.1", "9.24.0.1"});
}

TEST_CASE("a perturbed label fails at exactly that vertex") {
  for (const std::string& cls : {"14.a", "54.b", "30.a", "37.a"}) {
    const IsogenyClassRecord good = fetch_class(cls, offline());
    for (std::size_t v = 0; v < good.curves.size(); ++v) {
      CAPTURE(cls);
      CAPTURE(v);
      IsogenyClassRecord bad = good;
      bad.curves[v].adic3 = bad.curves[v].adic3 == "3.4.0.1" ? "9.12.0.1" : "3.4.0.1";
      const CrosscheckReport r = crosscheck(bad, classifier());
      CHECK_FALSE(r.ok());
      for (std::size_t i = 0; i < r.vertices.size(); ++i) CHECK(r.vertices[i].ok == (i != v));
    }
  }
}

TEST_CASE("CM classes are rejected") {
  IsogenyClassRecord rec = fetch_class("37.a", offline());
  rec.curves[0].cm = true;
  CHECK_THROWS_AS(crosscheck(rec, classifier()), LmfdbError);
}

TEST_CASE("online fetch against a local server") {
  const std::vector<std::string> classes{"14.a", "44.a", "37.a", "54.b"};
  std::vector<IsogenyClassRecord> recs;
  for (const auto& cls : classes) recs.push_back(fetch_class(cls, offline()));
  MockLmfdb mock(recs);

  const fs::path dir = scratch_dir("online");
  ClientOptions online;
  online.base_url = mock.url();
  online.fixture_dir = dir.string();
  online.offline = false;
  online.timeout_seconds = 5;

  for (std::size_t i = 0; i < classes.size(); ++i) {
    CAPTURE(classes[i]);
    const IsogenyClassRecord got = fetch_class(classes[i], online);
    CHECK(got == recs[i]);
    CHECK(slurp(fixture_path(online, classes[i])) == slurp(fixture_path(offline(), classes[i])));
    ClientOptions reread = online;
    reread.offline = true;
    CHECK(fetch_class(classes[i], reread) == recs[i]);
  }

  SUBCASE("unknown class: error and no cache file") {
    CHECK_THROWS_AS(fetch_class("11.a", online), LmfdbError);
    CHECK_FALSE(fs::exists(fixture_path(online, "11.a")));
  }
  SUBCASE("malformed response: error and no cache file") {
    mock.broken_galrep = true;
    fs::remove(fixture_path(online, "44.a"));
    CHECK_THROWS_AS(fetch_class("44.a", online), LmfdbError);
    CHECK_FALSE(fs::exists(fixture_path(online, "44.a")));
  }
  fs::remove_all(dir);
}

TEST_CASE("network failure is reported") {
  ClientOptions o;
  o.base_url = "http://127.0.0.1:1";
  o.fixture_dir = scratch_dir("down").string();
  o.offline = false;
  o.timeout_seconds = 2;
  CHECK_THROWS_AS(fetch_class("14.a", o), LmfdbError);
  CHECK_FALSE(fs::exists(fixture_path(o, "14.a")));
  fs::remove_all(o.fixture_dir);
}

TEST_CASE("environment overrides") {
  ::setenv("LMFDB_BASE_URL", "http://example.invalid", 1);
  ::setenv("FIXTURE_DIR", "/tmp/fx", 1);
  ClientOptions o = ClientOptions::from_env(ClientOptions{});
  CHECK(o.base_url == "http://example.invalid");
  CHECK(fixture_path(o, "14.a") == "/tmp/fx/fixtures/14.a.json");
  ::unsetenv("LMFDB_BASE_URL");
  ::unsetenv("FIXTURE_DIR");
}
