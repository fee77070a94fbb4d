#include "aftsynth/galileo.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
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

bool has_rule(const std::vector<Diagnostic>& ds, const std::string& rule)
{
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.rule == rule; });
}

std::string parse_error(std::string_view text)
{
  try {
    parse_galileo(text);
  }
  catch (const ParseError& e) {
    return e.detail;
  }
  return "";
}

}  // namespace

TEST_CASE("the four-line OR example")
{
  auto t = parse_galileo(slurp(MODELS_DIR "/galileo_or.galileo"));
  CHECK(t.root == "A");
  const auto* a = t.gate("A");
  REQUIRE(a);
  CHECK(a->kind == GateKind::Or);
  CHECK(a->children == std::vector<std::string>{"B", "C"});
  const auto* b = t.leaf("B");
  REQUIRE(b);
  CHECK(b->min_time == AttributeValue::constant(50));
  CHECK(b->max_time == AttributeValue::constant(100));
  CHECK(b->cost == AttributeValue::constant(50));
  CHECK(b->damage == AttributeValue::constant(0));
  CHECK(t.leaf("C")->min_time == AttributeValue::constant(30));
  CHECK(validate(t).empty());
  CHECK(t.is_concrete());
}

TEST_CASE("parameters are declared by identifier values")
{
  auto t = parse_galileo("toplevel \"L\";\n\"L\" mintime=1 maxtime=1 cost=CostFindLAN_AP;\n");
  CHECK(t.leaf("L")->cost == AttributeValue::parameter("CostFindLAN_AP"));
  CHECK(t.weight_parameters == std::set<std::string>{"CostFindLAN_AP"});
  CHECK(t.timing_parameters.empty());

  auto iot = parse_galileo(slurp(MODELS_DIR "/iot.galileo"));
  CHECK(iot.timing_parameters == std::set<std::string>{"tMax_Break"});
  CHECK(iot.weight_parameters == std::set<std::string>{"CostFindLAN_AP"});
  CHECK(iot.gates().size() == 5);
  CHECK(iot.leaves().size() == 7);
  CHECK(validate(iot).empty());
  CHECK(iot.leaf("run_malicious_script")->max_time == AttributeValue::constant(Rational(1, 2)));
}

TEST_CASE("defaults and sugar")
{
  auto t = parse_galileo("toplevel \"G\"; \"G\" 2of3 \"a\" \"b\" \"c\" cost=3/2; \"a\" time=4; \"b\" mintime=2; "
                         "\"c\" maxtime=7 damage=9 kind=BCF;");
  CHECK(t.gate("G")->kind == GateKind::Vot);
  CHECK(t.gate("G")->threshold == 2);
  CHECK(t.gate("G")->cost == AttributeValue::constant(Rational(3, 2)));
  CHECK(t.leaf("a")->min_time == t.leaf("a")->max_time);
  CHECK(t.leaf("b")->max_time == AttributeValue::constant(2));
  CHECK(t.leaf("c")->min_time == AttributeValue::constant(7));
  CHECK(t.leaf("c")->kind == LeafKind::BCF);
  CHECK(t.leaf("c")->damage == AttributeValue::constant(9));
  CHECK(parse_galileo("toplevel \"S\"; \"S\" WSP \"a\" \"b\"; \"a\"; \"b\";").gate("S")->kind == GateKind::Spare);
}

TEST_CASE("parse errors")
{
  CHECK(parse_error("") == "toplevel missing");
  CHECK(parse_error("# only a comment\n") == "toplevel missing");
  CHECK(parse_error("toplevel \"A\"; \"A\" or \"B\";") == "reference to undefined node 'B'");
  CHECK(parse_error("toplevel \"A\"; \"A\" prob=0.1;") == "probabilistic attribute 'prob' not supported");
  CHECK(parse_error("toplevel \"A\"; \"A\" colour=red;") == "unknown attribute 'colour'");
  CHECK(parse_error("toplevel \"A\"; \"A\" csp \"B\"; \"B\";") == "unknown gate kind 'csp'");
  CHECK(parse_error("toplevel \"A\"; \"A\" time=1e5;") == "invalid value '1e5' for attribute 'time'");
  CHECK(parse_error("toplevel \"A\"; \"A\" time=-1;") == "negative time value for 'time'");
  CHECK(parse_error("toplevel \"A\"; \"A\" time=1 mintime=2;") == "'time' cannot be combined with 'mintime'/'maxtime'");
  CHECK(parse_error("toplevel \"A\"") == "expected ';' before end of input");

  try {
    parse_galileo("toplevel \"A\";\n\"A\" and \"B\"\n  \"C\" cost=x y;");
    FAIL("expected a parse error");
  }
  catch (const ParseError& e) {
    CHECK(e.where.line == 3);
    CHECK(e.where.column == 15);
    CHECK(std::string(e.what()).find("line 3, column 15") == 0);
  }
}

TEST_CASE("validation diagnostics")
{
  CHECK(has_rule(validate(parse_galileo("toplevel \"V\"; \"V\" 3of2 \"a\" \"b\"; \"a\"; \"b\";")), "vot-threshold"));
  auto shared = validate(parse_galileo("toplevel \"R\"; \"R\" and \"G\" \"H\"; \"G\" or \"a\"; \"H\" or \"a\"; \"a\";"));
  REQUIRE(has_rule(shared, "shared-subtree"));
  CHECK(std::any_of(shared.begin(), shared.end(), [](const Diagnostic& d) {
    return d.message.find("shared subtree not supported") == 0 && d.node == "a";
  }));
  CHECK(has_rule(validate(parse_galileo("toplevel \"R\"; \"R\" and \"G\"; \"G\" or \"R\";")), "cycle"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"R\"; \"R\" and \"a\"; \"a\"; \"b\";")), "orphan"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"R\"; \"R\" and \"a\"; \"a\"; \"a\" time=2;")), "duplicate-definition"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"X\"; \"X\" xor \"a\"; \"a\";")), "xor-arity"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"F\"; \"F\" fdep \"a\"; \"a\";")), "fdep-arity"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"F\"; \"F\" fdep \"a\" \"G\"; \"G\" and \"b\"; \"a\"; \"b\";")),
                 "fdep-dependent"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"S\"; \"S\" wsp \"a\"; \"a\";")), "spare-arity"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"a\"; \"a\" mintime=5 maxtime=2;")), "time-window"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"a\"; \"a\" time=p cost=p;")), "parameter-sort"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"a b\"; \"a b\";")), "invalid-name"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"a\"; \"a\" time=total_time;")), "reserved-name"));
  CHECK(has_rule(validate(parse_galileo("toplevel \"a\"; \"a\" cost=w_cost_a;")), "reserved-name"));
}

TEST_CASE("printer round trip")
{
  for (const char* name : {"galileo_or", "iot", "spacex", "single_leaf"}) {
    auto t = parse_galileo(slurp(std::string(MODELS_DIR "/") + name + ".galileo"));
    auto printed = print_galileo(t);
    CHECK(parse_galileo(printed) == t);
    CHECK(print_galileo(parse_galileo(printed)) == printed);
  }
  CHECK(print_galileo(parse_galileo("toplevel \"A\"; \"A\" or \"B\" \"C\"; \"B\" mintime=50 maxtime=100 cost=50; "
                                    "\"C\" mintime=30 maxtime=70 cost=30;")) ==
        "toplevel \"A\";\n\"A\" or \"B\" \"C\";\n\"B\" mintime=50 maxtime=100 cost=50;\n"
        "\"C\" mintime=30 maxtime=70 cost=30;\n");
}

TEST_CASE("round trip on random trees")
{
  std::mt19937 rng(11);
  const char* kinds[] = {"and", "sand", "pand", "or", "sor", "xor", "fdep", "wsp"};
  for (int i = 0; i < 200; ++i) {
    std::ostringstream os;
    os << "toplevel \"g0\";\n";
    int arity = 2 + static_cast<int>(rng() % 2);
    std::string kind = kinds[rng() % 8];
    if (kind == "xor")
      arity = 2;
    os << "\"g0\" " << kind;
    for (int c = 0; c < arity; ++c)
      os << " \"l" << c << "\"";
    os << " cost=" << rng() % 5 << ";\n";
    for (int c = 0; c < arity; ++c) {
      int lo = static_cast<int>(rng() % 5);
      os << "\"l" << c << "\" mintime=" << lo << " maxtime=" << lo + static_cast<int>(rng() % 3);
      if (rng() % 3 == 0)
        os << " cost=p" << c;
      else
        os << " cost=" << rng() % 7 << "/" << 1 + rng() % 3;
      if (rng() % 2)
        os << " damage=" << rng() % 9 << " kind=bcf";
      os << ";\n";
    }
    auto t = parse_galileo(os.str());
    CHECK(validate(t).empty());
    CHECK(parse_galileo(print_galileo(t)) == t);
  }
}
