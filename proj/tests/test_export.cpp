#include "aftsynth/export.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

using namespace aftsynth;

namespace {

std::string slurp(const std::string& path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string exported(const std::string& model)
{
  auto tree = parse_galileo(slurp(MODELS_DIR "/" + model + ".galileo"));
  return to_imitator(build_network(tree), model + ".galileo");
}

/// Compares with the stored file; AFTSYNTH_UPDATE_GOLDEN=1 rewrites it.
void golden(const std::string& model)
{
  std::string path = GOLDEN_DIR "/" + model + ".imi";
  std::string text = exported(model);
  if (std::getenv("AFTSYNTH_UPDATE_GOLDEN"))
    std::ofstream(path) << text;
  CHECK(text == slurp(path));
}

std::size_t count(const std::string& text, const std::regex& re)
{
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), {}));
}

}  // namespace

TEST_CASE("golden files")
{
  for (const char* model : {"galileo_or", "single_leaf", "iot"}) {
    CAPTURE(model);
    golden(model);
  }
}

TEST_CASE("automaton counts")
{
  std::regex automaton(R"(^automaton \w+$)", std::regex::multiline);
  CHECK(count(exported("galileo_or"), automaton) == 4);
  CHECK(count(exported("single_leaf"), automaton) == 2);
  CHECK(count(exported("iot"), automaton) == 13);
}

TEST_CASE("iot declares its parameters")
{
  auto text = exported("iot");
  auto vars = text.substr(text.find("var"), text.find("automaton") - text.find("var"));
  for (const char* p : {"tMax_Break", "CostFindLAN_AP", "total_time", "total_cost", "total_damage"}) {
    CAPTURE(p);
    CHECK(std::regex_search(vars, std::regex(std::string(R"((^|\s))") + p + R"([,\s])")));
  }
  CHECK(text.find("property := unreachable loc[rootTA] = success;") != std::string::npos);
}

TEST_CASE("export is stable")
{
  CHECK(exported("iot") == exported("iot"));
}

TEST_CASE("urgent locations and non-integer constants")
{
  auto text = to_imitator(build_network(parse_galileo("toplevel \"G\";\n\"G\" and \"A\" \"B\";\n"
                                                      "\"A\" mintime=1/3 maxtime=0.5 cost=1;\n"
                                                      "\"B\" time=1 cost=2.25;\n")));
  CHECK(text.find("urgent loc succeeding") != std::string::npos);
  CHECK(text.find("x_A >= (1/3)") != std::string::npos);
  CHECK(text.find("(9/4)") != std::string::npos);
}
