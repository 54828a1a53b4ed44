#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "galimg/catalog.hpp"
#include "galimg/classifier.hpp"
#include "galimg/cusp.hpp"
#include "galimg/isogeny.hpp"
#include "galimg/lemmas.hpp"
#include "galimg/lmfdb.hpp"

using namespace galimg;
using Json = nlohmann::ordered_json;

namespace {

/// Bad input from the command line; exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Env {
  std::string data_dir = GALIMG_DATA_DIR;
  bool json = false;

  std::string path(const std::string& name) const { return data_dir + "/" + name; }

  const Catalog& catalog() {
    if (!catalog_) catalog_ = std::make_unique<Catalog>(load_catalog_file(path("catalog_3adic.txt")));
    return *catalog_;
  }
  const Catalog& aux() {
    if (!aux_) aux_ = std::make_unique<Catalog>(load_catalog_file(path("catalog_aux.txt")));
    return *aux_;
  }
  const Classifier& classifier() {
    if (!classifier_) classifier_ = std::make_unique<Classifier>(catalog(), load_facts_file(path("facts.txt")));
    return *classifier_;
  }

 private:
  std::unique_ptr<Catalog> catalog_, aux_;
  std::unique_ptr<Classifier> classifier_;
};

struct GroupArgs {
  std::string label, gens;
  unsigned modulus = 0;

  void add_to(CLI::App* cmd) {
    auto* l = cmd->add_option("--label", label, "catalog label, e.g. 9.12.0.1 or X0(15)");
    auto* g = cmd->add_option("--gens", gens, "generators \"[a,b,c,d];[a,b,c,d]\"");
    auto* m = cmd->add_option("--mod", modulus, "modulus of the generators")->check(CLI::Range(2u, 1000u));
    l->excludes(g);
    g->needs(m);
  }

  SubgroupRep resolve(Env& env) const {
    if (!label.empty()) {
      if (const CatalogEntry* e = env.catalog().find(label)) return e->group;
      if (const CatalogEntry* e = env.aux().find(label)) return e->group;
      throw UsageError("unknown label " + label);
    }
    if (gens.empty()) throw UsageError("give --label or --gens with --mod");
    try {
      return SubgroupRep::closure(parse_mat_list(gens, modulus), modulus);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    } catch (const NonInvertible& e) {
      throw UsageError(e.what());
    }
  }
};

Line parse_line_arg(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != '(' && ch != ')' && ch != ' ') t += ch;
  const auto comma = t.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("");
    return make_line(3, std::stoll(t.substr(0, comma)), std::stoll(t.substr(comma + 1)));
  } catch (const std::exception&) {
    throw UsageError("line must look like 1,0 or (1,2) with a nonzero vector mod 3");
  }
}

Json fact_json(const Fact& f) {
  static const char* kinds[] = {"below", "exact", "only"};
  return Json{{"kind", kinds[static_cast<int>(f.kind)]}, {"groups", f.groups}, {"feature", f.feature},
              {"citation", f.citation}};
}

std::string fact_text(const Fact& f) {
  std::string groups;
  for (const auto& g : f.groups) groups += (groups.empty() ? "" : " ") + g;
  static const char* kinds[] = {"below", "exact", "only"};
  return std::string("fact: ") + kinds[static_cast<int>(f.kind)] + " " + groups + " excludes " + f.feature + " [" +
         f.citation + "]";
}

void emit(const Env& env, const Json& j, const std::vector<std::string>& lines) {
  if (env.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& l : lines) std::cout << l << "\n";
  }
}

int cmd_identify(Env& env, const GroupArgs& ga) {
  const SubgroupRep g = ga.resolve(env);
  const auto label = identify(g, env.catalog());
  Json j{{"label", label ? Json(*label) : Json()}, {"order", g.order()}, {"index", index_in_gl2(g)},
         {"level", level(g)}};
  emit(env, j, {label ? *label : "no catalog group is conjugate to this group"});
  return label ? 0 : 1;
}

int cmd_transform(Env& env, const std::string& label, const std::string& line_arg) {
  if (!env.catalog().find(label)) throw UsageError("unknown label " + label);
  std::optional<Line> want;
  if (!line_arg.empty()) want = parse_line_arg(line_arg);
  std::vector<TransformResult> results = transform_label(label, env.catalog());
  if (want) {
    std::erase_if(results, [&](const TransformResult& r) { return r.line != *want; });
    if (results.empty()) throw UsageError("line " + to_string(*want) + " is not stable under " + label);
  }
  Json j{{"label", label}, {"transforms", Json::array()}};
  std::vector<std::string> lines;
  for (const auto& r : results) {
    const std::string out = r.output_label.value_or("unidentified");
    j["transforms"].push_back(Json{{"line", to_string(r.line)}, {"output", out}});
    lines.push_back(label + " line " + to_string(r.line) + " -> " + out);
  }
  if (results.empty()) lines.push_back(label + " has no stable line mod 3");
  emit(env, j, lines);
  return 0;
}

SubgroupRep plus_minus(const SubgroupRep& g) {
  if (!det_full(g)) throw UsageError("determinant is not surjective");
  return contains_minus_identity(g) ? g : with_minus_identity(g);
}

int cmd_cusps(Env& env, const GroupArgs& ga) {
  const SubgroupRep g = plus_minus(ga.resolve(env));
  const CuspSet cs = cusp_set(g);
  std::size_t rational = 0;
  for (bool b : cs.rational_mask) rational += b;
  emit(env, Json{{"cusps", cs.size()}, {"rational", rational}},
       {"cusps: " + std::to_string(cs.size()), "rational: " + std::to_string(rational)});
  return 0;
}

int cmd_genus(Env& env, const GroupArgs& ga) {
  const GenusData d = genus_data(plus_minus(ga.resolve(env)));
  emit(env, Json{{"genus", d.genus}, {"index", d.index}, {"nu2", d.nu2}, {"nu3", d.nu3}, {"cusps", d.cusps}},
       {std::to_string(d.genus)});
  return 0;
}

int cmd_level(Env& env, const GroupArgs& ga) {
  const Modulus m = level(ga.resolve(env));
  emit(env, Json{{"level", m}}, {std::to_string(m)});
  return 0;
}

int cmd_classify(Env& env, const std::string& graph, const std::string& torsion) {
  GraphQuery q;
  try {
    q = make_query(graph, torsion);
  } catch (const QueryError& e) {
    throw UsageError(e.what());
  }
  const Classification c = env.classifier().classify(q);
  Json j{{"graph", graph}, {"torsion", torsion_csv(q)}, {"tuples", Json::array()}, {"facts", Json::array()}};
  std::vector<std::string> lines;
  for (const auto& t : c.tuples) {
    j["tuples"].push_back(Json{{"labels", t.labels}, {"flags", t.flags}});
    std::string line = t.str();
    for (const auto& f : t.flags) line += " [" + f + "]";
    lines.push_back(line);
  }
  if (c.tuples.empty()) lines.push_back("no admissible tuple");
  for (const Fact* f : c.facts_used) {
    j["facts"].push_back(fact_json(*f));
    lines.push_back(fact_text(*f));
  }
  emit(env, j, lines);
  return 0;
}

int cmd_graphs_for(Env& env, const std::string& label) {
  if (!env.catalog().find(label)) throw UsageError("unknown label " + label);
  Json j{{"label", label}, {"graphs", Json::array()}};
  std::vector<std::string> lines;
  for (const GraphHit& h : env.classifier().graphs_for_label(label)) {
    j["graphs"].push_back(Json{{"graph", h.graph_type}, {"vertices", h.vertices}, {"conditional", h.conditional}});
    std::string line = h.graph_type + " at";
    for (int v : h.vertices) line += " E" + std::to_string(v);
    if (h.conditional) line += std::string(" [") + kConditionalFlag + "]";
    lines.push_back(line);
  }
  if (j["graphs"].empty()) lines.push_back(label + " occurs in no isogeny-torsion graph");
  emit(env, j, lines);
  return 0;
}

int cmd_verify_catalog(Env& env) {
  Json j{{"entries", Json::array()}};
  std::vector<std::string> lines;
  std::size_t good = 0;
  for (const CatalogEntry& e : env.catalog().entries()) {
    const EntryReport r = verify_entry(e);
    good += r.ok();
    j["entries"].push_back(Json{{"label", r.label}, {"level", r.level}, {"index", r.index}, {"genus", r.genus},
                                {"ok", r.ok()}});
    lines.push_back(std::string(r.ok() ? "ok " : "FAIL ") + r.label + " level " + std::to_string(r.level) +
                    " index " + std::to_string(r.index) + " genus " + std::to_string(r.genus));
  }
  const std::size_t n = env.catalog().size();
  j["summary"] = std::to_string(good) + "/" + std::to_string(n) + " entries consistent";
  lines.push_back(j["summary"]);
  emit(env, j, lines);
  return good == n ? 0 : 1;
}

int cmd_verify_table1(Env& env) {
  const auto checks = regenerate_isogeny_table(load_isogeny_table_file(env.path("isogeny_table.txt")), env.catalog());
  Json j{{"rows", Json::array()}};
  std::vector<std::string> lines;
  std::size_t good = 0;
  for (const auto& c : checks) {
    good += c.reproduced;
    std::string outs;
    Json jo = Json::array();
    for (const auto& r : c.outputs) {
      const std::string o = r.output_label.value_or("unidentified");
      outs += (outs.empty() ? "" : ", ") + to_string(r.line) + ": " + o;
      jo.push_back(Json{{"line", to_string(r.line)}, {"output", o}});
    }
    j["rows"].push_back(Json{{"left", c.row.left}, {"right", c.row.right}, {"outputs", jo}, {"ok", c.reproduced}});
    lines.push_back(std::string(c.reproduced ? "ok " : "FAIL ") + c.row.left + " -> " + c.row.right + " (" + outs +
                    ")");
  }
  j["summary"] = std::to_string(good) + "/" + std::to_string(checks.size()) + " rows reproduced";
  lines.push_back(j["summary"]);
  emit(env, j, lines);
  return good == checks.size() ? 0 : 1;
}

int cmd_verify_lemmas(Env& env) {
  const auto claims = load_lemmas_file(env.path("lemmas.txt"));
  const auto checks = check_lemmas(claims, env.catalog(), env.classifier());
  Json j{{"claims", Json::array()}};
  std::vector<std::string> lines;
  std::size_t good = 0;
  for (const auto& c : checks) {
    good += c.ok;
    std::string what = c.claim->kind + " " + std::to_string(c.claim->labels.size()) + " labels";
    if (c.claim->kind == "contained") what += " in " + c.claim->target;
    for (const auto& o : c.offending) what += " " + o;
    j["claims"].push_back(Json{{"kind", c.claim->kind}, {"labels", c.claim->labels}, {"target", c.claim->target},
                               {"ok", c.ok}, {"offending", c.offending}, {"citation", c.claim->citation}});
    lines.push_back(std::string(c.ok ? "ok " : "FAIL ") + what + " [" + c.claim->citation + "]");
  }
  j["summary"] = std::to_string(good) + "/" + std::to_string(checks.size()) + " claims verified";
  lines.push_back(j["summary"]);
  emit(env, j, lines);
  return good == checks.size() ? 0 : 1;
}

int cmd_verify_printed(Env& env) {
  const auto reports = compare_with_printed(env.classifier(), load_printed_file(env.path("printed_tuples.txt")));
  Json j{{"cases", Json::array()}};
  std::vector<std::string> lines;
  std::size_t good = 0, flagged = 0;
  for (const auto& r : reports) {
    good += r.ok();
    flagged += r.flagged.size();
    Json jf = Json::array();
    for (const auto& [printed, derived] : r.flagged) jf.push_back(Json{{"printed", printed}, {"derived", derived}});
    j["cases"].push_back(Json{{"graph", r.graph_type}, {"torsion", r.torsion}, {"matched", r.matched.size()},
                              {"flagged", jf}, {"missing", r.missing}, {"unexpected", r.unexpected},
                              {"citation", r.citation}, {"ok", r.ok()}});
    lines.push_back(std::string(r.ok() ? "ok " : "FAIL ") + r.graph_type + " " + r.torsion + ": " +
                    std::to_string(r.matched.size()) + " matched [" + r.citation + "]");
    for (const auto& [printed, derived] : r.flagged)
      lines.push_back("  FLAGGED printed " + printed + " derived " + derived);
    for (const auto& m : r.missing) lines.push_back("  missing " + m);
    for (const auto& u : r.unexpected) lines.push_back("  unexpected " + u);
  }
  j["summary"] = std::to_string(good) + "/" + std::to_string(reports.size()) + " cases reproduced, " +
                 std::to_string(flagged) + " flagged";
  lines.push_back(j["summary"]);
  emit(env, j, lines);
  return good == reports.size() ? 0 : 1;
}

int cmd_crosscheck(Env& env, const std::string& cls, ClientOptions opts) {
  if (!valid_class_label(cls)) throw UsageError("malformed isogeny class label " + cls);
  const IsogenyClassRecord rec = fetch_class(cls, opts);
  const CrosscheckReport r = crosscheck(rec, env.classifier());
  Json j{{"class", cls}, {"graph", r.graph_type}, {"torsion", r.torsion}, {"vertices", Json::array()}};
  std::vector<std::string> lines{cls + ": graph " + r.graph_type + ", torsion " + r.torsion};
  for (const auto& v : r.vertices) {
    j["vertices"].push_back(Json{{"curve", v.curve}, {"torsion", v.torsion.str()}, {"observed", v.observed},
                                 {"expected", v.expected}, {"ok", v.ok}});
    lines.push_back(std::string(v.ok ? "ok " : "FAIL ") + v.curve + " torsion " + v.torsion.str() + " observed " +
                    v.observed + " expected " + v.expected);
  }
  j["flags"] = r.expected ? Json(r.expected->flags) : Json::array();
  if (r.expected)
    for (const auto& f : r.expected->flags) lines.push_back("note: " + f);
  j["ok"] = r.ok();
  lines.push_back(cls + ": " + (r.ok() ? "pass" : "fail"));
  emit(env, j, lines);
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3-adic images along isogeny-torsion graphs"};
  app.require_subcommand(1);
  Env env;
  app.add_flag("--json", env.json, "machine-readable output");
  app.add_option("--data-dir", env.data_dir, "directory with the catalog and fact files")->check(CLI::ExistingDirectory);

  GroupArgs identify_args, cusps_args, genus_args, level_args;
  auto* identify_cmd = app.add_subcommand("identify", "catalog label of the group generated by --gens");
  identify_args.add_to(identify_cmd);
  auto* cusps_cmd = app.add_subcommand("cusps", "cusps and rational cusps of X_G");
  cusps_args.add_to(cusps_cmd);
  auto* genus_cmd = app.add_subcommand("genus", "genus of X_G");
  genus_args.add_to(genus_cmd);
  auto* level_cmd = app.add_subcommand("level", "level of G");
  level_args.add_to(level_cmd);

  std::string transform_label_arg, transform_line;
  auto* transform_cmd = app.add_subcommand("transform", "image of the 3-isogenous curve for each stable line");
  transform_cmd->add_option("--label", transform_label_arg)->required();
  transform_cmd->add_option("--line", transform_line, "stable line mod 3, e.g. 1,0");

  std::string graph, torsion;
  auto* classify_cmd = app.add_subcommand("classify", "admissible label tuples for a graph and torsion");
  classify_cmd->add_option("--graph", graph, "L1, L2(3), L3(9), R4(6), R6, T4, T6, T8, S, ...")->required();
  classify_cmd->add_option("--torsion", torsion, "comma separated, '?' for unknown")->required();

  std::string graphs_label;
  auto* graphs_cmd = app.add_subcommand("graphs-for", "graph types and positions where a label occurs");
  graphs_cmd->add_option("--label", graphs_label)->required();

  auto* vcat_cmd = app.add_subcommand("verify-catalog", "check level, index and genus of every catalog label");
  auto* vt1_cmd = app.add_subcommand("verify-table1", "regenerate the 3-isogeny image table");
  auto* vlem_cmd = app.add_subcommand("verify-lemmas", "check torsion sets and containments");
  auto* vpr_cmd = app.add_subcommand("verify-printed", "compare the classifier with the published tuples");

  std::string cls;
  bool offline = false;
  ClientOptions copts = ClientOptions::from_env(ClientOptions{});
  auto* cross_cmd = app.add_subcommand("crosscheck", "compare an LMFDB isogeny class with the classifier");
  cross_cmd->add_option("--class", cls, "isogeny class label, e.g. 14.a")->required();
  cross_cmd->add_flag("--offline", offline, "read fixtures/<class>.json instead of querying the API");
  cross_cmd->add_option("--fixture-dir", copts.fixture_dir, "root of fixtures/ (default FIXTURE_DIR or the data dir)");
  cross_cmd->add_option("--base-url", copts.base_url, "API root (default LMFDB_BASE_URL)");
  cross_cmd->add_option("--timeout", copts.timeout_seconds, "seconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*identify_cmd) return cmd_identify(env, identify_args);
    if (*cusps_cmd) return cmd_cusps(env, cusps_args);
    if (*genus_cmd) return cmd_genus(env, genus_args);
    if (*level_cmd) return cmd_level(env, level_args);
    if (*transform_cmd) return cmd_transform(env, transform_label_arg, transform_line);
    if (*classify_cmd) return cmd_classify(env, graph, torsion);
    if (*graphs_cmd) return cmd_graphs_for(env, graphs_label);
    if (*vcat_cmd) return cmd_verify_catalog(env);
    if (*vt1_cmd) return cmd_verify_table1(env);
    if (*vlem_cmd) return cmd_verify_lemmas(env);
    if (*vpr_cmd) return cmd_verify_printed(env);
    if (*cross_cmd) {
      copts.offline = offline;
      if (copts.fixture_dir.empty()) copts.fixture_dir = env.data_dir;
      return cmd_crosscheck(env, cls, copts);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
