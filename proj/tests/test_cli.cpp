#include "aftsynth/cli.hpp"
#include "aftsynth/export.hpp"
#include "aftsynth/render.hpp"
#include "aftsynth/translation.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aftsynth;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const char* name) { return std::string(MODELS_DIR "/") + name + ".galileo"; }

std::string slurp(const std::string& path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// File under the build tree, removed at scope exit.
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& text = "")
      : path((std::filesystem::temp_directory_path() / ("aftsynth_test_" + name)).string())
  {
    if (!text.empty())
      std::ofstream(path) << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

const char* kImpossible = "toplevel \"P\";\n\"P\" pand \"A\" \"B\";\n\"A\" time=5 cost=1;\n\"B\" time=1 cost=1;\n";

}  // namespace

TEST_CASE("analyze prints the constraint")
{
  auto r = run({"analyze", model("single_leaf")});
  CHECK(r.code == kExitResult);
  CHECK(r.out.find("  total_time = 5\n& total_cost = 50\n& total_damage = 0\n") != std::string::npos);
  CHECK(r.out.find("# leaves: L") != std::string::npos);
}

TEST_CASE("analyze of a file without toplevel is an input error")
{
  auto r = run({"analyze", model("empty")});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("toplevel missing") != std::string::npos);
  CHECK(r.err.find(":1:") != std::string::npos);

  auto j = run({"analyze", model("empty"), "--format", "json"});
  CHECK(j.code == kExitInput);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["error"]["kind"] == "input");
  CHECK(doc["error"]["diagnostics"][0]["message"] == "toplevel missing");
}

TEST_CASE("validation diagnostics carry their line")
{
  TempFile f("invalid.galileo", "toplevel \"X\";\n\"X\" xor \"A\" \"B\" \"C\";\n\"A\" time=1;\n\"B\" time=1;\n\"C\" time=1;\n");
  auto r = run({"analyze", f.path});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find(f.path + ":2:") != std::string::npos);
}

TEST_CASE("missing file and bad flags")
{
  CHECK(run({"analyze", "/nonexistent/model.galileo"}).code == kExitInput);
  CHECK(run({"analyze", model("single_leaf"), "--target", "somewhere"}).code == kExitInput);
  CHECK(run({"analyze", model("single_leaf"), "--jobs", "0"}).code == kExitInput);
  CHECK(run({"frobnicate"}).code == kExitInput);
  CHECK(run({}).code == kExitInput);
  auto help = run({"--help"});
  CHECK(help.code == kExitResult);
  CHECK(help.out.find("analyze") != std::string::npos);
}

TEST_CASE("an unreachable target gives the empty exit code")
{
  TempFile f("impossible.galileo", kImpossible);
  auto r = run({"analyze", f.path});
  CHECK(r.code == kExitEmpty);
  CHECK(r.out.find("\nfalse\n") != std::string::npos);
  CHECK(run({"analyze", f.path, "--target", "fail"}).code == kExitResult);
}

TEST_CASE("json output")
{
  auto r = run({"analyze", model("galileo_or"), "--format", "json"});
  REQUIRE(r.code == kExitResult);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema"] == "aftsynth-result/1");
  CHECK(doc["complete"] == true);
  CHECK(doc["disjuncts"].size() == 2);
  for (const auto& d : doc["disjuncts"]) {
    CHECK(d["bounds"]["total_damage"]["lower"]["value"] == "0");
    CHECK(d["witness"].back() == "root_success");
  }
}

TEST_CASE("engine flags do not change the result")
{
  auto strip = [](const std::string& text) {
    std::string out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
      if (!line.starts_with("#"))
        out += line + "\n";
    return out;
  };
  auto base = run({"analyze", model("galileo_or")});
  for (auto extra : std::vector<std::vector<std::string>>{{"--jobs", "3"}, {"--no-subsumption"}, {"--seed", "17"}}) {
    std::vector<std::string> args{"analyze", model("galileo_or")};
    args.insert(args.end(), extra.begin(), extra.end());
    auto r = run(args);
    CAPTURE(extra.front());
    CHECK(r.code == kExitResult);
    auto ours = parse_constraint_text(r.out, build_network(parse_galileo(slurp(model("galileo_or")))).network.universe());
    auto theirs = parse_constraint_text(base.out, build_network(parse_galileo(slurp(model("galileo_or")))).network.universe());
    // the universes differ as objects, compare the printed blocks
    std::vector<std::string> a, b;
    for (const auto& p : ours)
      a.push_back(p.to_string());
    for (const auto& p : theirs)
      b.push_back(p.to_string());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(strip(r.out).size() == strip(base.out).size());
  }
}

TEST_CASE("export")
{
  auto tree = parse_galileo(slurp(model("galileo_or")));
  auto expected = to_imitator(build_network(tree), "galileo_or.galileo");
  auto r = run({"export", model("galileo_or")});
  CHECK(r.code == kExitResult);
  CHECK(r.out == expected);

  TempFile f("or.imi");
  CHECK(run({"export", model("galileo_or"), "-o", f.path}).code == kExitResult);
  CHECK(slurp(f.path) == expected);
  CHECK(run({"export", model("galileo_or"), "-o", "/nonexistent/dir/x.imi"}).code == kExitInput);
}

TEST_CASE("check of a concrete tree")
{
  auto r = run({"check", model("galileo_or")});
  CHECK(r.code == kExitResult);
  CHECK(r.out.find("oracle:") != std::string::npos);
  CHECK(r.out.find("0 mismatches") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("check falls back to simulation for gates outside the oracle")
{
  TempFile f("pand.galileo", "toplevel \"P\";\n\"P\" pand \"A\" \"B\";\n\"A\" time=1 cost=1;\n\"B\" mintime=0 maxtime=2 cost=1;\n");
  auto r = run({"check", f.path});
  CHECK(r.code == kExitResult);
  CHECK(r.out.find("simulation only") != std::string::npos);
  CHECK(r.out.find("oracle:") == std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("check of a parametric tree needs a grid")
{
  CHECK(run({"check", model("iot")}).code == kExitInput);
  CHECK(run({"check", model("iot"), "--grid", "tMax_Break=2"}).code == kExitInput);
  CHECK(run({"check", model("iot"), "--grid", "tMax_Break=2,CostFindLAN_AP=0,nope=1"}).code == kExitInput);
  CHECK(run({"check", model("iot"), "--grid", "tMax_Break=2..1step1,CostFindLAN_AP=0"}).code == kExitInput);
  CHECK(run({"check", model("iot"), "--grid", "tMax_Break=2,CostFindLAN_AP=0,total_time=1"}).code == kExitInput);
  auto r = run({"check", model("iot"), "--grid", "tMax_Break=6,CostFindLAN_AP=20"});
  CHECK(r.code == kExitResult);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("check against an expected constraint file")
{
  auto analysis = run({"analyze", model("galileo_or")});
  TempFile good("or_expected.txt", analysis.out);
  auto r = run({"check", model("galileo_or"), "--expected", good.path});
  CHECK(r.code == kExitResult);
  CHECK(r.out.find("expected: 0 differing blocks") != std::string::npos);

  std::string mutated = analysis.out;
  auto at = mutated.find("total_cost = 30");
  REQUIRE(at != std::string::npos);
  mutated.replace(at, 15, "total_cost = 31");
  TempFile bad("or_mutated.txt", mutated);
  auto m = run({"check", model("galileo_or"), "--expected", bad.path});
  CHECK(m.code == kExitMismatch);
  CHECK(m.out.find("- total_time") != std::string::npos);
  CHECK(m.out.find("total_cost = 31") != std::string::npos);
  CHECK(m.out.find("+ total_time") != std::string::npos);
  CHECK(m.out.find("FAIL") != std::string::npos);

  TempFile broken("or_broken.txt", "total_time >=\n");
  CHECK(run({"check", model("galileo_or"), "--expected", broken.path}).code == kExitInput);
}

TEST_CASE("simulate prints a run")
{
  auto r = run({"simulate", model("single_leaf")});
  CHECK(r.code == kExitResult);
  CHECK(r.out.find("total_time=5") != std::string::npos);
  CHECK(r.out.find("--(root_success, 0)-->") != std::string::npos);

  auto j = run({"simulate", model("iot"), "--values", "tMax_Break=2,CostFindLAN_AP=20", "--format", "json"});
  REQUIRE(j.code == kExitResult);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["reached"] == true);
  CHECK(doc["valuation"]["total_time"] == "23/2");
  CHECK(doc["steps"].back()["time"] == "23/2");

  auto miss = run({"simulate", model("iot"), "--values", "tMax_Break=2,CostFindLAN_AP=20,total_time=11"});
  CHECK(miss.code == kExitEmpty);
  CHECK(run({"simulate", model("iot")}).code == kExitInput);
  CHECK(run({"simulate", model("iot"), "--values", "tMax_Break=0..2step1,CostFindLAN_AP=1"}).code == kExitInput);
}
