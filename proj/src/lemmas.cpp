#include "galimg/lemmas.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace galimg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

std::vector<LemmaClaim> load_lemmas(std::istream& in) {
  std::vector<LemmaClaim> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(text);
    for (std::string f; std::getline(ss, f, ';');) fields.push_back(trim(f));
    const std::string where = "lemma file line " + std::to_string(line) + ": ";
    if (fields.size() != 4) throw std::runtime_error(where + "expected 4 fields");
    LemmaClaim c{fields[0], {}, fields[2], fields[3], line};
    if (c.kind != "three-torsion" && c.kind != "nine-torsion" && c.kind != "contained" && c.kind != "unstable")
      throw std::runtime_error(where + "unknown kind " + c.kind);
    std::stringstream ls(fields[1]);
    for (std::string l; ls >> l;) c.labels.push_back(l);
    if (c.labels.empty()) throw std::runtime_error(where + "no labels");
    if ((c.kind == "contained") == (c.target == "-")) throw std::runtime_error(where + "target only for contained");
    if (c.citation.empty()) throw std::runtime_error(where + "missing citation");
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<LemmaClaim> load_lemmas_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_lemmas(in);
}

std::vector<LemmaCheck> check_lemmas(const std::vector<LemmaClaim>& claims, const Catalog& c, const Classifier& cl) {
  std::vector<LemmaCheck> out;
  for (const LemmaClaim& claim : claims) {
    LemmaCheck r{&claim, true, {}};
    if (claim.kind == "three-torsion" || claim.kind == "nine-torsion") {
      const std::set<std::string> computed =
          claim.kind == "three-torsion" ? cl.three_torsion_labels() : cl.nine_torsion_labels();
      const std::set<std::string> claimed(claim.labels.begin(), claim.labels.end());
      for (const auto& l : computed)
        if (!claimed.count(l)) r.offending.push_back("+" + l);
      for (const auto& l : claimed)
        if (!computed.count(l)) r.offending.push_back("-" + l);
    } else if (claim.kind == "contained") {
      const SubgroupRep& h = c.at(claim.target).group;
      for (const auto& l : claim.labels)
        if (!is_conjugate_into(c.at(l).group, h)) r.offending.push_back(l);
    } else {
      for (const auto& l : claim.labels)
        if (cl.profile(l).lines != 0) r.offending.push_back(l);
    }
    r.ok = r.offending.empty();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace galimg
