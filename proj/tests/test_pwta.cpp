#include "aftsynth/pwta.hpp"
#include "support/coffee.hpp"

#include <doctest.h>

using namespace aftsynth;

namespace {

ParameterValuation valuation(Rational p1, Rational p2) { return {{"p1", p1}, {"p2", p2}, {"q", Rational(1, 2)}}; }

Rational value(const Network& net, const ConcreteState& s, const char* name) { return s.values[net.universe()->id(name)]; }

}  // namespace

TEST_CASE("coffee machine is well formed")
{
  auto net = coffee::machine();
  CHECK_NOTHROW(net.check());
  CHECK(net.participants().at("press") == std::vector<std::size_t>{0});
}

TEST_CASE("evaluate_update reads the pre-state")
{
  auto u = std::make_shared<VariableUniverse>();
  VarId w1 = u->add("w1", VarSort::WeightVariable);
  VarId w2 = u->add("w2", VarSort::WeightVariable);
  VarId q = u->add("q", VarSort::WeightParameter);
  Valuation v{0, 7, Rational(1, 2)};
  auto swapped = evaluate_update({{w1, LinearExpr::var(w2)}, {w2, LinearExpr::value(0)}}, v);
  CHECK(swapped[w1] == 7);
  CHECK(swapped[w2] == 0);
  CHECK(evaluate_update({}, v) == v);
  Valuation two{2, 0, Rational(1, 2)};
  CHECK(evaluate_update({{w1, LinearExpr::var(w1) + LinearExpr::var(q)}}, two)[w1] == Rational(5, 2));
}

TEST_CASE("first press of the coffee run")
{
  auto net = coffee::machine();
  auto s = initial_concrete_state(net, valuation(5, 8));
  auto succ = synchronized_successors(net, s, {Rational(2)});
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].action == "press");
  CHECK(to_string(net, succ[0].target) == "(l2, (0, 0), (2))");
}

TEST_CASE("replay reports the first step that cannot be taken")
{
  auto net = coffee::machine();
  auto r = replay(net, valuation(5, 8), {{"press", 2}, {"press", Rational(3, 2)}, {"press", 1}});
  REQUIRE(r.failed_step);
  CHECK(*r.failed_step == 2);
  CHECK(r.trace.steps.size() == 2);
  CHECK(to_string(net, r.trace.steps.back().target) == "(l2, (0, 1.5), (2.5))");

  auto ok = replay(net, valuation(5, 8),
                   {{"press", 2}, {"press", Rational(3, 2)}, {"press", Rational(5, 4)}, {"prepare", Rational(9, 4)},
                    {"serve", 3}});
  CHECK_FALSE(ok.failed_step);
  CHECK(value(net, ok.trace.steps.back().target, "w") == 3);
  CHECK(to_string(net, ok.trace.steps.back().target) == "(l1, (5.25, 8), (3))");
}

TEST_CASE("serve is reachable only when p1 <= p2")
{
  auto net = coffee::machine();
  auto served = [&](const ConcreteState&, const std::string& action) { return action == "serve"; };
  auto yes = run_reaches(net, valuation(5, 8), served);
  CHECK(yes.status == RunResult::Status::Reached);
  REQUIRE(yes.trace);
  CHECK(yes.trace->steps.back().action == "serve");
  auto no = run_reaches(net, valuation(8, 5), served);
  CHECK(no.status == RunResult::Status::Unreachable);
}

TEST_CASE("a tiny budget is reported as exhaustion")
{
  auto net = coffee::machine();
  auto never = [](const ConcreteState&, const std::string&) { return false; };
  CHECK(run_reaches(net, valuation(5, 8), never, 3).status == RunResult::Status::BudgetExhausted);
  CHECK_THROWS_AS(run_reaches(net, valuation(5, 8), never, 0), std::invalid_argument);
}

TEST_CASE("handshake needs every participant")
{
  auto u = std::make_shared<VariableUniverse>();
  Pwta a("a"), b("b");
  LocId a0 = a.add_location("a0"), a1 = a.add_location("a1");
  LocId b0 = b.add_location("b0"), b1 = b.add_location("b1"), b2 = b.add_location("b2");
  a.add_edge(Edge{a0, {}, "go", {}, {}, a1});
  b.add_edge(Edge{b1, {}, "go", {}, {}, b2});
  b.add_edge(Edge{b0, {}, "step", {}, {}, b1});
  Network net(u);
  net.add(std::move(a));
  net.add(std::move(b));
  auto s = initial_concrete_state(net, {});
  auto succ = discrete_successors(net, s);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].action == "step");
  auto after = discrete_successors(net, succ[0].target);
  REQUIRE(after.size() == 1);
  CHECK(after[0].action == "go");
  CHECK(after[0].target.locations == std::vector<LocId>{a1, b2});
}

TEST_CASE("urgent locations forbid delays")
{
  auto u = std::make_shared<VariableUniverse>();
  VarId x = u->add("x", VarSort::Clock);
  Pwta a("a");
  LocId l0 = a.add_location("l0", true);
  LocId l1 = a.add_location("l1");
  a.add_edge(Edge{l0, {}, "go", {}, {}, l1});
  a.add_clock(x);
  Network net(u);
  net.add(std::move(a));
  auto s = initial_concrete_state(net, {});
  CHECK_FALSE(delay(net, s, 1));
  CHECK(delay(net, s, 0));
  CHECK(max_delay(net, s).bound == Rational(0));
}

TEST_CASE("well-formedness rejects weight atoms outside observation edges")
{
  auto u = std::make_shared<VariableUniverse>();
  VarId w = u->add("w", VarSort::WeightVariable);
  VarId q = u->add("q", VarSort::WeightParameter);
  Pwta a("a");
  LocId l0 = a.add_location("l0");
  Edge e{l0, {Atom{LinearExpr::var(w), Comparison::Equal, LinearExpr::var(q)}}, "go", {}, {}, l0};
  a.add_edge(e);
  Network bad(u);
  bad.add(a);
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);

  Pwta b("b");
  LocId m0 = b.add_location("m0");
  e.source = e.target = m0;
  e.observation = true;
  b.add_edge(e);
  Network good(u);
  good.add(b);
  CHECK_NOTHROW(good.check());
}
