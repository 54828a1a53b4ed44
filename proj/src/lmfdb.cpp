#include "galimg/lmfdb.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace galimg {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

bool valid_class_label(const std::string& label) {
  static const std::regex re(R"([1-9][0-9]*\.[a-z]+)");
  return std::regex_match(label, re);
}

void validate_record(const IsogenyClassRecord& rec) {
  const std::string where = "isogeny class " + rec.class_label + ": ";
  if (!valid_class_label(rec.class_label)) throw LmfdbError(where + "malformed class label");
  const std::size_t n = rec.curves.size();
  if (n == 0) throw LmfdbError(where + "no curves");
  if (rec.isogeny_matrix.size() != n) throw LmfdbError(where + "isogeny matrix size does not match curve count");
  for (std::size_t i = 0; i < n; ++i) {
    if (rec.isogeny_matrix[i].size() != n) throw LmfdbError(where + "isogeny matrix is not square");
    if (rec.isogeny_matrix[i][i] != 1) throw LmfdbError(where + "isogeny matrix diagonal must be 1");
    for (std::size_t j = 0; j < n; ++j)
      if (rec.isogeny_matrix[i][j] != rec.isogeny_matrix[j][i] || rec.isogeny_matrix[i][j] == 0)
        throw LmfdbError(where + "isogeny matrix is not symmetric with positive entries");
  }
  for (const CurveRecord& c : rec.curves) {
    if (c.label.rfind(rec.class_label, 0) != 0 || c.label.size() == rec.class_label.size())
      throw LmfdbError(where + "curve " + c.label + " is not in the class");
    if (!Label::parse(c.adic3)) throw LmfdbError(where + "curve " + c.label + " has malformed 3-adic label " + c.adic3);
  }
}

namespace {

ordered_json torsion_json(const Torsion& t) {
  ordered_json a = ordered_json::array();
  if (t.m1 > 1) a.push_back(t.m1);
  if (t.m2 > 1) a.push_back(t.m2);
  return a;
}

Torsion torsion_from_json(const json& a) {
  if (!a.is_array() || a.size() > 2) throw LmfdbError("torsion must be a list of at most two integers");
  std::string text = "1";
  if (a.size() == 1) text = std::to_string(a[0].get<std::uint32_t>());
  if (a.size() == 2) text = std::to_string(a[0].get<std::uint32_t>()) + "x" + std::to_string(a[1].get<std::uint32_t>());
  try {
    return parse_torsion(text);
  } catch (const QueryError& e) {
    throw LmfdbError(std::string("torsion: ") + e.what());
  }
}

std::string normalize_adic(const json& v) {
  if (v.is_null()) return "1.1.0.1";
  const std::string s = v.get<std::string>();
  return s.empty() ? "1.1.0.1" : s;
}

}  // namespace

std::string record_to_json(const IsogenyClassRecord& rec) {
  ordered_json j;
  j["class"] = rec.class_label;
  j["curves"] = ordered_json::array();
  for (const CurveRecord& c : rec.curves) {
    ordered_json cj;
    cj["label"] = c.label;
    cj["torsion"] = torsion_json(c.torsion);
    cj["adic3"] = c.adic3;
    cj["cm"] = c.cm;
    j["curves"].push_back(cj);
  }
  j["isogeny_matrix"] = rec.isogeny_matrix;
  return j.dump(2) + "\n";
}

IsogenyClassRecord record_from_json(const std::string& text) {
  IsogenyClassRecord rec;
  try {
    const json j = json::parse(text);
    rec.class_label = j.at("class").get<std::string>();
    for (const json& cj : j.at("curves")) {
      CurveRecord c;
      c.label = cj.at("label").get<std::string>();
      c.torsion = torsion_from_json(cj.at("torsion"));
      c.adic3 = normalize_adic(cj.value("adic3", json()));
      c.cm = cj.value("cm", false);
      rec.curves.push_back(c);
    }
    rec.isogeny_matrix = j.at("isogeny_matrix").get<std::vector<std::vector<std::uint32_t>>>();
  } catch (const json::exception& e) {
    throw LmfdbError(std::string("malformed record: ") + e.what());
  }
  validate_record(rec);
  return rec;
}

ClientOptions ClientOptions::from_env(ClientOptions o) {
  if (const char* v = std::getenv("LMFDB_BASE_URL"); v && *v) o.base_url = v;
  if (const char* v = std::getenv("FIXTURE_DIR"); v && *v) o.fixture_dir = v;
  if (const char* v = std::getenv("LMFDB_TIMEOUT"); v && *v) {
    const int t = std::atoi(v);
    if (t > 0) o.timeout_seconds = t;
  }
  return o;
}

std::string fixture_path(const ClientOptions& opts, const std::string& class_label) {
  return (fs::path(opts.fixture_dir) / "fixtures" / (class_label + ".json")).string();
}

namespace {

std::mutex cache_mutex;

json get_data(httplib::Client& cli, const std::string& path) {
  auto res = cli.Get(path);
  if (!res) throw LmfdbError("request failed: " + path + ": " + httplib::to_string(res.error()));
  if (res->status != 200) throw LmfdbError("HTTP " + std::to_string(res->status) + " for " + path);
  try {
    json j = json::parse(res->body);
    if (!j.contains("data") || !j["data"].is_array()) throw LmfdbError("response without data array: " + path);
    return j["data"];
  } catch (const json::exception& e) {
    throw LmfdbError("malformed response for " + path + ": " + e.what());
  }
}

IsogenyClassRecord fetch_online(const std::string& cls, const ClientOptions& opts) {
  httplib::Client cli(opts.base_url);
  if (!cli.is_valid()) throw LmfdbError("unusable base URL " + opts.base_url);
  cli.set_connection_timeout(opts.timeout_seconds, 0);
  cli.set_read_timeout(opts.timeout_seconds, 0);
  cli.set_follow_location(true);

  IsogenyClassRecord rec;
  rec.class_label = cls;
  const json curves = get_data(
      cli, "/api/ec_curvedata/?lmfdb_iso=" + cls + "&_format=json&_fields=lmfdb_label,lmfdb_number,torsion_structure,cm");
  if (curves.empty()) throw LmfdbError("unknown isogeny class " + cls);
  std::vector<std::pair<int, CurveRecord>> numbered;
  try {
    for (const json& cj : curves) {
      CurveRecord c;
      c.label = cj.at("lmfdb_label").get<std::string>();
      c.torsion = torsion_from_json(cj.at("torsion_structure"));
      c.cm = cj.at("cm").get<int>() != 0;
      numbered.emplace_back(cj.at("lmfdb_number").get<int>(), c);
    }
  } catch (const json::exception& e) {
    throw LmfdbError("malformed curve data for " + cls + ": " + e.what());
  }
  std::sort(numbered.begin(), numbered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [n, c] : numbered) {
    const json g = get_data(cli, "/api/ec_galrep/?lmfdb_label=" + c.label + "&prime=3&_format=json&_fields=adic_label");
    c.adic3 = g.empty() ? "1.1.0.1" : normalize_adic(g[0].value("adic_label", json()));
    rec.curves.push_back(c);
  }
  const json cls_data = get_data(cli, "/api/ec_classdata/?lmfdb_iso=" + cls + "&_format=json&_fields=isogeny_matrix");
  if (cls_data.size() != 1) throw LmfdbError("expected one class record for " + cls);
  try {
    rec.isogeny_matrix = cls_data[0].at("isogeny_matrix").get<std::vector<std::vector<std::uint32_t>>>();
  } catch (const json::exception& e) {
    throw LmfdbError("malformed isogeny matrix for " + cls + ": " + e.what());
  }
  validate_record(rec);
  return rec;
}

void write_fixture(const ClientOptions& opts, const IsogenyClassRecord& rec) {
  const fs::path target = fixture_path(opts, rec.class_label);
  std::lock_guard lock(cache_mutex);
  fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << record_to_json(rec);
    if (!out) throw LmfdbError("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace

IsogenyClassRecord fetch_class(const std::string& cls, const ClientOptions& opts) {
  if (!valid_class_label(cls)) throw LmfdbError("malformed isogeny class label '" + cls + "'");
  if (opts.offline) {
    const std::string path = fixture_path(opts, cls);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LmfdbError("no fixture for " + cls + " at " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    IsogenyClassRecord rec = record_from_json(ss.str());
    if (rec.class_label != cls) throw LmfdbError(path + " holds class " + rec.class_label);
    return rec;
  }
  IsogenyClassRecord rec = fetch_online(cls, opts);
  write_fixture(opts, rec);
  return rec;
}

namespace {

/// Cyclic isogeny degree between every pair of vertices: product of edge
/// degrees along a shortest path.
std::vector<std::vector<std::uint32_t>> degree_matrix(const GraphShape& g) {
  const int n = g.vertices;
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, 0));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    d[s][s] = 1;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const Edge& e : g.edges) {
        int w = -1;
        if (e.u == v) w = e.v;
        if (e.v == v) w = e.u;
        if (w < 0 || d[s][w] != 0) continue;
        d[s][w] = d[s][v] * e.prime;
        q.push(w);
      }
    }
  }
  return d;
}

}  // namespace

std::pair<std::string, std::vector<int>> graph_type_of(const IsogenyClassRecord& rec) {
  validate_record(rec);
  const int n = static_cast<int>(rec.curves.size());
  std::vector<std::pair<std::string, std::vector<int>>> hits;
  for (const std::string& name : graph_types()) {
    const GraphShape& g = graph_shape(name);
    if (g.vertices != n) continue;
    const auto d = degree_matrix(g);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool same = true;
      for (int s = 0; s < n && same; ++s)
        for (int t = 0; t < n && same; ++t) same = d[s][t] == rec.isogeny_matrix[perm[s]][perm[t]];
      if (same) {
        hits.emplace_back(name, perm);
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (hits.empty()) throw LmfdbError("isogeny class " + rec.class_label + ": isogeny matrix fits no known graph type");
  if (hits.size() > 1) {
    std::string names;
    for (const auto& h : hits) names += " " + h.first;
    throw LmfdbError("isogeny class " + rec.class_label + ": isogeny matrix fits several graph types:" + names);
  }
  return hits.front();
}

bool CrosscheckReport::ok() const {
  return expected.has_value() &&
         std::all_of(vertices.begin(), vertices.end(), [](const VertexCheck& v) { return v.ok; });
}

CrosscheckReport crosscheck(const IsogenyClassRecord& rec, const Classifier& cl) {
  for (const CurveRecord& c : rec.curves)
    if (c.cm) throw LmfdbError("isogeny class " + rec.class_label + " has CM; only classes without CM are classified");
  const auto [type, base] = graph_type_of(rec);
  const GraphShape& g = graph_shape(type);
  const std::size_t n = rec.curves.size();

  std::vector<std::vector<int>> placements;
  for (const auto& aut : g.automorphisms()) {
    std::vector<int> p(n);
    for (std::size_t s = 0; s < n; ++s) p[s] = base[aut[s]];
    if (std::find(placements.begin(), placements.end(), p) == placements.end()) placements.push_back(p);
  }
  std::sort(placements.begin(), placements.end());

  CrosscheckReport best;
  best.class_label = rec.class_label;
  best.graph_type = type;
  int best_score = -1;
  std::map<std::string, Classification> cache;
  for (const auto& p : placements) {
    GraphQuery q{type, {}};
    for (std::size_t s = 0; s < n; ++s) q.torsion.emplace_back(rec.curves[p[s]].torsion);
    const std::string csv = torsion_csv(q);
    auto it = cache.find(csv);
    if (it == cache.end()) {
      try {
        validate_query(q);
      } catch (const QueryError& e) {
        throw LmfdbError("isogeny class " + rec.class_label + ": torsion " + csv + " on " + type + ": " + e.what());
      }
      it = cache.emplace(csv, cl.classify(q)).first;
    }
    const std::vector<LabelTuple>& tuples = it->second.tuples;
    auto consider = [&](const LabelTuple* t) {
      int score = 0;
      if (t)
        for (std::size_t s = 0; s < n; ++s) score += t->labels[s] == rec.curves[p[s]].adic3;
      if (score <= best_score) return;
      best_score = score;
      best.placement = p;
      best.torsion = csv;
      best.expected.reset();
      if (t) {
        LabelTuple in_curve_order{std::vector<std::string>(n), t->flags};
        for (std::size_t s = 0; s < n; ++s) in_curve_order.labels[p[s]] = t->labels[s];
        best.expected = in_curve_order;
      }
    };
    if (tuples.empty()) consider(nullptr);
    for (const LabelTuple& t : tuples) consider(&t);
  }

  for (std::size_t i = 0; i < n; ++i) {
    VertexCheck v;
    v.curve = rec.curves[i].label;
    v.torsion = rec.curves[i].torsion;
    v.observed = rec.curves[i].adic3;
    v.expected = best.expected ? best.expected->labels[i] : "-";
    v.ok = best.expected && v.observed == v.expected;
    best.vertices.push_back(v);
  }
  return best;
}

}  // namespace galimg
