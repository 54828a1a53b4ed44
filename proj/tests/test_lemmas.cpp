#include <sstream>

#include "doctest.h"
#include "galimg/lemmas.hpp"

using namespace galimg;

namespace {

std::vector<LemmaClaim> parse(const std::string& text) {
  std::istringstream in(text);
  return load_lemmas(in);
}

}  // namespace

TEST_CASE("lemma file") {
  const auto shipped = load_lemmas_file(GALIMG_DATA_DIR "/lemmas.txt");
  CHECK(shipped.size() == 8);
  CHECK(shipped.front().kind == "three-torsion");
  CHECK(shipped.front().labels.size() == 15);

  const auto one = parse("# comment\ncontained; 3.6.0.1 9.9.0.1; 3.3.0.1; why\n");
  REQUIRE(one.size() == 1);
  CHECK(one[0].labels == std::vector<std::string>{"3.6.0.1", "9.9.0.1"});
  CHECK(one[0].target == "3.3.0.1");
  CHECK(one[0].line == 2);

  CHECK_THROWS(parse("contained; 3.6.0.1; 3.3.0.1\n"));
  CHECK_THROWS(parse("contained; 3.6.0.1; -; why\n"));
  CHECK_THROWS(parse("unstable; 1.1.0.1; 3.3.0.1; why\n"));
  CHECK_THROWS(parse("nearby; 1.1.0.1; -; why\n"));
  CHECK_THROWS(parse("unstable; ; -; why\n"));
  CHECK_THROWS(parse("unstable; 1.1.0.1; -; \n"));
}
