#include "aftsynth/translation.hpp"

#include <functional>

namespace aftsynth {

namespace {

struct Context {
  const AttackFaultTree& tree;
  const TranslationOptions& options;
  std::shared_ptr<VariableUniverse> universe;
  std::map<std::string, NodeActions> actions;
  std::map<std::string, WeightVars> weights;
  std::map<std::string, std::string> parent;  // node -> parent automaton (root for the top node)
  std::set<std::string> dependents;           // leaves forced by an FDEP
};

LinearExpr attribute(const Context& ctx, const AttributeValue& v)
{
  if (v.is_parameter())
    return LinearExpr::var(ctx.universe->id(v.name()));
  return LinearExpr::value(v.value());
}

/// Parent accumulators += extra.
WeightUpdate forward(const Context& ctx, const std::string& node, const LinearExpr& cost, const LinearExpr& damage)
{
  const WeightVars& p = ctx.weights.at(ctx.parent.at(node));
  WeightUpdate u;
  u.emplace_back(p.cost, LinearExpr::var(p.cost) + cost);
  u.emplace_back(p.damage, LinearExpr::var(p.damage) + damage);
  return u;
}

Atom clock_atom(VarId clock, Comparison cmp, LinearExpr rhs) { return Atom{LinearExpr::var(clock), cmp, std::move(rhs)}; }

Pwta translate_leaf(const Context& ctx, const LeafNode& leaf)
{
  const NodeActions& act = ctx.actions.at(leaf.name);
  VarId x = ctx.universe->id("x_" + leaf.name);
  LinearExpr min = attribute(ctx, leaf.min_time);
  LinearExpr max = attribute(ctx, leaf.max_time);

  Pwta a(leaf.name);
  a.add_clock(x);
  LocId idle = a.add_location("idle");
  LocId running = a.add_location("running", false, {clock_atom(x, Comparison::LessEqual, max)});
  LocId success = a.add_location("success");
  LocId fail = a.add_location("fail");
  a.set_initial(idle);
  a.add_accepting(success);

  WeightUpdate gain = forward(ctx, leaf.name, attribute(ctx, leaf.cost), attribute(ctx, leaf.damage));
  a.add_edge(Edge{idle, {}, act.start, {x}, {}, running});
  a.add_edge(Edge{running, {clock_atom(x, Comparison::GreaterEqual, min)}, act.success, {}, gain, success});
  a.add_edge(Edge{running, {clock_atom(x, Comparison::GreaterEqual, min)}, act.fail, {}, {}, fail});
  if (ctx.dependents.count(leaf.name))
    a.add_edge(Edge{idle, {}, act.success, {}, gain, success});
  return a;
}

/// Shared skeleton of a gate automaton: idle, terminal and urgent deciding
/// locations, and helpers to wire child events.
class GateBuilder {
public:
  GateBuilder(const Context& ctx, const GateNode& gate) : ctx_(ctx), gate_(gate), a_(gate.name)
  {
    for (const auto& c : gate.children)
      children_.push_back(&ctx.actions.at(c));
    idle_ = a_.add_location("idle");
    a_.set_initial(idle_);
  }

  LocId location(const std::string& name, bool urgent = false) { return a_.add_location(name, urgent); }

  void edge(LocId from, const std::string& action, LocId to, WeightUpdate update = {})
  {
    a_.add_edge(Edge{from, {}, action, {}, std::move(update), to});
  }

  const NodeActions& child(std::size_t i) const { return *children_[i]; }
  std::size_t arity() const { return children_.size(); }

  const std::string& own_start_action() const { return ctx_.actions.at(gate_.name).start; }

  /// Own start, then an urgent chain starting every child, ending in `wait`.
  void activation_chain(LocId wait)
  {
    LocId cur = location("start_0", true);
    edge(idle_, own_start_action(), cur);
    for (std::size_t i = 0; i < arity(); ++i) {
      LocId next = i + 1 < arity() ? location("start_" + std::to_string(i + 1), true) : wait;
      edge(cur, child(i).start, next);
      cur = next;
    }
  }

  /// Urgent deciding locations and absorbing terminals.
  void finish(LocId succeeding, LocId failing)
  {
    const auto& act = ctx_.actions.at(gate_.name);
    LocId ls = location("success");
    LocId lf = location("fail");
    a_.add_accepting(ls);
    const WeightVars& own = ctx_.weights.at(gate_.name);
    LinearExpr cost = LinearExpr::var(own.cost) + attribute(ctx_, gate_.cost);
    LinearExpr damage = LinearExpr::var(own.damage) + attribute(ctx_, gate_.damage);
    edge(succeeding, act.success, ls, forward(ctx_, gate_.name, cost, damage));
    edge(failing, act.fail, lf);
    if (ctx_.options.absorb_late_completions)
      for (LocId t : {ls, lf})
        absorb(t);
  }

  void absorb(LocId loc)
  {
    for (const auto* c : children_) {
      edge(loc, c->success, loc);
      edge(loc, c->fail, loc);
    }
  }

  LocId idle() const { return idle_; }
  Pwta take() { return std::move(a_); }

private:
  const Context& ctx_;
  const GateNode& gate_;
  Pwta a_;
  std::vector<const NodeActions*> children_;
  LocId idle_ = 0;
};

std::string mask_name(const std::string& prefix, unsigned mask, std::size_t n)
{
  std::string s = prefix;
  for (std::size_t i = 0; i < n; ++i)
    s += (mask >> i) & 1U ? '1' : '0';
  return s;
}

/// Parallel gates decided by the subset of children that reported one
/// outcome: AND waits for all successes, OR for all fails.
Pwta subset_gate(const Context& ctx, const GateNode& gate, bool count_successes)
{
  GateBuilder b(ctx, gate);
  std::size_t n = b.arity();
  unsigned full = (1U << n) - 1;
  std::vector<LocId> wait(full);
  for (unsigned m = 0; m < full; ++m)
    wait[m] = b.location(mask_name("wait_", m, n));
  LocId succeeding = b.location("succeeding", true);
  LocId failing = b.location("failing", true);
  b.activation_chain(wait[0]);
  LocId decided = count_successes ? succeeding : failing;
  LocId other = count_successes ? failing : succeeding;
  for (unsigned m = 0; m < full; ++m)
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1U)
        continue;
      unsigned next = m | (1U << i);
      const NodeActions& c = b.child(i);
      b.edge(wait[m], count_successes ? c.success : c.fail, next == full ? decided : wait[next]);
      b.edge(wait[m], count_successes ? c.fail : c.success, other);
    }
  b.finish(succeeding, failing);
  return b.take();
}

/// SAND and SPARE run children one after the other, all must succeed; SOR
/// runs them one after the other until one succeeds.
Pwta sequential_gate(const Context& ctx, const GateNode& gate, bool until_success)
{
  GateBuilder b(ctx, gate);
  std::size_t n = b.arity();
  std::vector<LocId> start(n), wait(n);
  for (std::size_t i = 0; i < n; ++i) {
    start[i] = b.location("start_" + std::to_string(i), true);
    wait[i] = b.location("wait_" + std::to_string(i));
  }
  LocId succeeding = b.location("succeeding", true);
  LocId failing = b.location("failing", true);
  b.edge(b.idle(), b.own_start_action(), start[0]);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeActions& c = b.child(i);
    b.edge(start[i], c.start, wait[i]);
    LocId advance = i + 1 < n ? start[i + 1] : (until_success ? failing : succeeding);
    if (until_success) {
      b.edge(wait[i], c.success, succeeding);
      b.edge(wait[i], c.fail, advance);
    }
    else {
      b.edge(wait[i], c.success, advance);
      b.edge(wait[i], c.fail, failing);
    }
  }
  b.finish(succeeding, failing);
  return b.take();
}

Pwta pand_gate(const Context& ctx, const GateNode& gate)
{
  GateBuilder b(ctx, gate);
  std::size_t n = b.arity();
  std::vector<LocId> wait(n);
  for (std::size_t i = 0; i < n; ++i)
    wait[i] = b.location("wait_" + std::to_string(i));
  LocId succeeding = b.location("succeeding", true);
  LocId prefail = b.location("prefail", true);
  b.activation_chain(wait[0]);
  // wait_i: children before i succeeded in order, the others are running
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const NodeActions& c = b.child(j);
      b.edge(wait[i], c.success, j == i ? (i + 1 < n ? wait[i + 1] : succeeding) : prefail);
      b.edge(wait[i], c.fail, prefail);
    }
  b.absorb(prefail);
  b.finish(succeeding, prefail);
  return b.take();
}

Pwta xor_gate(const Context& ctx, const GateNode& gate)
{
  GateBuilder b(ctx, gate);
  // outcome per child: 0 pending, 1 success, 2 fail
  auto code = [](int o) { return std::string(1, "nsf"[o]); };
  std::map<std::pair<int, int>, LocId> wait;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      if (p == 0 || q == 0)
        wait[{p, q}] = b.location("wait_" + code(p) + code(q));
  LocId succeeding = b.location("succeeding", true);
  LocId failing = b.location("failing", true);
  b.activation_chain(wait[{0, 0}]);
  auto target = [&](int p, int q) {
    if (p && q)
      return p != q ? succeeding : failing;
    return wait[{p, q}];
  };
  for (const auto& [key, loc] : wait) {
    auto [p, q] = key;
    if (p == 0) {
      b.edge(loc, b.child(0).success, target(1, q));
      b.edge(loc, b.child(0).fail, target(2, q));
    }
    if (q == 0) {
      b.edge(loc, b.child(1).success, target(p, 1));
      b.edge(loc, b.child(1).fail, target(p, 2));
    }
  }
  b.finish(succeeding, failing);
  return b.take();
}

Pwta fdep_gate(const Context& ctx, const GateNode& gate)
{
  GateBuilder b(ctx, gate);
  std::size_t n = b.arity();
  LocId start = b.location("start_0", true);
  LocId wait = b.location("wait_0");
  std::vector<LocId> force;
  for (std::size_t i = 1; i < n; ++i)
    force.push_back(b.location("force_" + std::to_string(i), true));
  LocId succeeding = b.location("succeeding", true);
  LocId failing = b.location("failing", true);
  b.edge(b.idle(), b.own_start_action(), start);
  b.edge(start, b.child(0).start, wait);
  b.edge(wait, b.child(0).success, force[0]);
  b.edge(wait, b.child(0).fail, failing);
  for (std::size_t i = 1; i < n; ++i)
    b.edge(force[i - 1], b.child(i).success, i < force.size() ? force[i] : succeeding);
  b.finish(succeeding, failing);
  Pwta a = b.take();
  // dependents are only ever forced: keep their own start and fail silent
  for (std::size_t i = 1; i < n; ++i) {
    a.add_action(b.child(i).start);
    a.add_action(b.child(i).fail);
  }
  return a;
}

Pwta vot_gate(const Context& ctx, const GateNode& gate)
{
  GateBuilder b(ctx, gate);
  std::size_t n = b.arity();
  std::size_t k = gate.threshold;
  std::size_t max_fail = n - k + 1;
  std::map<std::pair<std::size_t, std::size_t>, LocId> wait;
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t f = 0; f < max_fail && s + f < n; ++f)
      wait[{s, f}] = b.location("wait_s" + std::to_string(s) + "_f" + std::to_string(f));
  LocId succeeding = b.location("succeeding", true);
  LocId failing = b.location("failing", true);
  b.activation_chain(wait[{0, 0}]);
  for (const auto& [key, loc] : wait) {
    auto [s, f] = key;
    LocId on_success = s + 1 == k ? succeeding : wait.at({s + 1, f});
    LocId on_fail = f + 1 == max_fail ? failing : wait.at({s, f + 1});
    for (std::size_t i = 0; i < n; ++i) {
      b.edge(loc, b.child(i).success, on_success);
      b.edge(loc, b.child(i).fail, on_fail);
    }
  }
  b.finish(succeeding, failing);
  return b.take();
}

Pwta translate_gate(const Context& ctx, const GateNode& gate)
{
  switch (gate.kind) {
  case GateKind::And:
    return subset_gate(ctx, gate, true);
  case GateKind::Or:
    return subset_gate(ctx, gate, false);
  case GateKind::Sand:
  case GateKind::Spare:
    return sequential_gate(ctx, gate, false);
  case GateKind::Sor:
    return sequential_gate(ctx, gate, true);
  case GateKind::Pand:
    return pand_gate(ctx, gate);
  case GateKind::Xor:
    return xor_gate(ctx, gate);
  case GateKind::Fdep:
    return fdep_gate(ctx, gate);
  case GateKind::Vot:
    return vot_gate(ctx, gate);
  }
  throw std::logic_error("unknown gate kind");
}

Pwta root_automaton(const Context& ctx, const TranslationOutput& out, VarId abs_time)
{
  const NodeActions& top = ctx.actions.at(ctx.tree.root);
  const WeightVars& w = ctx.weights.at(out.root_automaton);
  Pwta a(out.root_automaton);
  a.add_clock(abs_time);
  LocId idle = a.add_location("idle");
  LocId active = a.add_location("active");
  LocId succeeding = a.add_location("succeeding", true);
  LocId failing = a.add_location("failing", true);
  LocId success = a.add_location(out.success_location);
  LocId fail = a.add_location(out.fail_location);
  a.set_initial(idle);
  a.add_accepting(success);

  Guard observe{
      Atom{LinearExpr::var(abs_time), Comparison::Equal, LinearExpr::var(out.total_time)},
      Atom{LinearExpr::var(w.cost), Comparison::Equal, LinearExpr::var(out.total_cost)},
      Atom{LinearExpr::var(w.damage), Comparison::Equal, LinearExpr::var(out.total_damage)},
  };
  a.add_edge(Edge{idle, {}, top.start, {abs_time}, {}, active});
  a.add_edge(Edge{active, {}, top.success, {}, {}, succeeding});
  a.add_edge(Edge{active, {}, top.fail, {}, {}, failing});
  a.add_edge(Edge{succeeding, observe, "root_success", {}, {}, success, true});
  a.add_edge(Edge{failing, observe, "root_fail", {}, {}, fail, true});
  return a;
}

}  // namespace

TranslationOutput build_network(const AttackFaultTree& tree, const TranslationOptions& options)
{
  auto diagnostics = validate(tree);
  if (!diagnostics.empty())
    throw std::invalid_argument("invalid tree: " + diagnostics.front().message);

  Context ctx{tree, options, std::make_shared<VariableUniverse>(), {}, {}, {}, {}};
  auto& u = *ctx.universe;
  const std::string root = "rootTA";

  for (const auto* leaf : tree.leaves())
    u.add("x_" + leaf->name, VarSort::Clock);
  VarId abs_time = u.add("abs_time", VarSort::Clock);
  for (const auto& p : tree.timing_parameters)
    u.add(p, VarSort::TimingParameter);
  VarId total_time = u.add("total_time", VarSort::TimingParameter);
  for (const auto* gate : tree.gates())
    ctx.weights[gate->name] = {u.add("w_cost_" + gate->name, VarSort::WeightVariable),
                               u.add("w_dmg_" + gate->name, VarSort::WeightVariable)};
  ctx.weights[root] = {u.add("current_cost_root", VarSort::WeightVariable),
                       u.add("current_damage_root", VarSort::WeightVariable)};
  for (const auto& p : tree.weight_parameters)
    u.add(p, VarSort::WeightParameter);
  VarId total_cost = u.add("total_cost", VarSort::WeightParameter);
  VarId total_damage = u.add("total_damage", VarSort::WeightParameter);

  for (const auto& node : tree.nodes) {
    const std::string& name = node_name(node);
    ctx.actions[name] = {"start_" + name, "success_" + name, "fail_" + name};
  }
  ctx.parent[tree.root] = root;
  for (const auto* gate : tree.gates()) {
    for (const auto& c : gate->children)
      ctx.parent[c] = gate->name;
    if (gate->kind == GateKind::Fdep)
      ctx.dependents.insert(gate->children.begin() + 1, gate->children.end());
  }

  TranslationOutput out{Network(ctx.universe), total_time, total_cost, total_damage, {}, {}};
  out.root_automaton = root;
  for (const auto& node : tree.nodes) {
    if (const auto* leaf = std::get_if<LeafNode>(&node))
      out.network.add(translate_leaf(ctx, *leaf));
    else
      out.network.add(translate_gate(ctx, std::get<GateNode>(node)));
  }
  out.network.add(root_automaton(ctx, out, abs_time));
  out.network.check();
  out.actions = ctx.actions;
  out.weights = ctx.weights;
  return out;
}

}  // namespace aftsynth
