#include "aftsynth/cli.hpp"

#include "aftsynth/check.hpp"
#include "aftsynth/export.hpp"
#include "aftsynth/oracle.hpp"
#include "aftsynth/render.hpp"
#include "aftsynth/translation.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace aftsynth {

void configure_logging()
{
  auto logger = spdlog::get("aftsynth");
  if (!logger) {
    logger = spdlog::stderr_color_mt("aftsynth");
    spdlog::set_default_logger(logger);
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("AFTSYNTH_LOG")) {
    level = spdlog::level::from_str(env);
    // from_str maps unknown names to off
    if (level == spdlog::level::off && std::string_view(env) != "off")
      level = spdlog::level::warn;
  }
  logger->set_level(level);
}

namespace {

/// Input problem already reported to the user.
struct InputFailure {};

struct Flags {
  std::string path;
  std::string target = "success";
  std::string format = "text";
  unsigned jobs = 1;
  bool no_subsumption = false;
  std::uint32_t seed = 0;
  CLI::Option* seed_option = nullptr;
  std::string output;
  std::string grid;
  std::string expected;
  std::string values;
};

class Command {
public:
  Command(Flags flags, std::ostream& out, std::ostream& err) : f_(std::move(flags)), out_(out), err_(err) {}

  bool json() const { return f_.format == "json"; }

  [[noreturn]] void input_error(const std::string& message, const std::vector<Diagnostic>& diagnostics = {})
  {
    if (json()) {
      out_ << error_json("input", message, diagnostics).dump(2) << "\n";
    }
    else {
      if (diagnostics.empty())
        err_ << f_.path << ": error: " << message << "\n";
      for (const auto& d : diagnostics)
        err_ << f_.path << ":" << d.location.line << ":" << d.location.column << ": error: " << d.message << "\n";
    }
    throw InputFailure{};
  }

  AttackFaultTree load()
  {
    std::ifstream in(f_.path);
    if (!in)
      input_error("cannot read the file");
    std::stringstream ss;
    ss << in.rdbuf();
    AttackFaultTree tree;
    try {
      tree = parse_galileo(ss.str());
    }
    catch (const ParseError& e) {
      input_error(e.detail, {Diagnostic{"", "syntax", e.detail, e.where}});
    }
    auto diagnostics = validate(tree);
    if (!diagnostics.empty())
      input_error("the tree is not well formed", diagnostics);
    spdlog::info("parsed {}: {} nodes, {} timing and {} weight parameters", f_.path, tree.nodes.size(),
                 tree.timing_parameters.size(), tree.weight_parameters.size());
    return tree;
  }

  TranslationOutput translate(const AttackFaultTree& tree)
  {
    auto model = build_network(tree);
    spdlog::info("network: {} automata, {} variables", model.network.automata().size(),
                 model.network.universe()->size());
    return model;
  }

  const std::string& target_location(const TranslationOutput& model) const
  {
    return f_.target == "success" ? model.success_location : model.fail_location;
  }

  ConstraintResult synthesize(const TranslationOutput& model)
  {
    SynthesisOptions options;
    options.subsumption = !f_.no_subsumption;
    options.jobs = f_.jobs;
    if (f_.seed_option && f_.seed_option->count())
      options.shuffle_seed = f_.seed;
    auto result = ef_synth(model.network,
                           location_predicate(model.network, model.root_automaton, target_location(model)), options);
    spdlog::info("synthesis: {} states, {} transitions, {} subsumed, {} disjuncts in {:.2f} s", result.stats.states,
                 result.stats.transitions, result.stats.subsumed, result.disjuncts.size(), result.stats.seconds);
    return result;
  }

  int analyze()
  {
    auto tree = load();
    auto model = translate(tree);
    auto result = synthesize(model);
    AnalysisReport report{f_.path, f_.target, &tree, &result};
    if (json())
      out_ << render_json(report).dump(2) << "\n";
    else
      out_ << render_text(report);
    return result.disjuncts.empty() ? kExitEmpty : kExitResult;
  }

  int export_model()
  {
    auto tree = load();
    auto model = translate(tree);
    std::string text = to_imitator(model, std::filesystem::path(f_.path).filename().string());
    if (f_.output.empty() || f_.output == "-") {
      out_ << text;
      return kExitResult;
    }
    std::ofstream file(f_.output);
    file << text;
    file.close();
    if (!file)
      input_error("cannot write " + f_.output);
    spdlog::info("wrote {}", f_.output);
    return kExitResult;
  }

  std::vector<GridAxis> axes(const std::string& text)
  {
    try {
      return parse_grid(text);
    }
    catch (const std::invalid_argument& e) {
      input_error(e.what());
    }
  }

  /// Tree parameters without a value in `given`.
  static std::vector<std::string> unvalued(const AttackFaultTree& tree, const ParameterValuation& given)
  {
    std::vector<std::string> out;
    for (const auto* set : {&tree.timing_parameters, &tree.weight_parameters})
      for (const auto& p : *set)
        if (!given.contains(p))
          out.push_back(p);
    return out;
  }

  void require_tree_parameters(const AttackFaultTree& tree, const ParameterValuation& given)
  {
    for (const auto& [name, value] : given)
      if (!tree.timing_parameters.contains(name) && !tree.weight_parameters.contains(name) &&
          name != "total_time" && name != "total_cost" && name != "total_damage")
        input_error("'" + name + "' is not a parameter of the tree");
    auto missing = unvalued(tree, given);
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing)
        list += (list.empty() ? "" : ", ") + m;
      input_error("no value for " + list);
    }
  }

  int check()
  {
    auto tree = load();
    auto model = translate(tree);
    CheckReport report;
    report.source = f_.path;

    std::vector<ParameterValuation> points{{}};
    if (!f_.grid.empty()) {
      auto grid = axes(f_.grid);
      points = grid_points(grid);
      for (const auto& a : grid)
        if (a.name == "total_time" || a.name == "total_cost" || a.name == "total_damage")
          input_error("'" + a.name + "' is sampled by the check and cannot be on the grid");
    }
    else if (!tree.is_concrete()) {
      input_error("the tree has parameters; give their values with --grid");
    }
    require_tree_parameters(tree, points.front());

    auto result = synthesize(model);

    if (!f_.expected.empty()) {
      std::ifstream in(f_.expected);
      if (!in)
        input_error("cannot read " + f_.expected);
      std::stringstream ss;
      ss << in.rdbuf();
      std::vector<Polyhedron> expected;
      try {
        expected = parse_constraint_text(ss.str(), result.universe);
      }
      catch (const std::invalid_argument& e) {
        input_error(f_.expected + ": " + e.what());
      }
      auto ours = result.polyhedra();
      report.expected_only.emplace();
      report.result_only.emplace();
      for (const auto& p : expected)
        if (!covered_by(p, ours))
          report.expected_only->push_back(p.to_string());
      for (const auto& p : ours)
        if (!covered_by(p, expected))
          report.result_only->push_back(p.to_string());
    }

    bool oracle_mode = true;
    for (const auto* g : tree.gates())
      if (!oracle_supports(g->kind)) {
        oracle_mode = false;
        report.notices.push_back(std::string(to_string(g->kind)) + " gate '" + g->name +
                                 "' is outside the bottom-up oracle; checking by simulation only");
        break;
      }
    if (oracle_mode && f_.target != "success") {
      oracle_mode = false;
      report.notices.push_back("the oracle only covers success; checking by simulation only");
    }

    report.simulation.emplace();
    if (oracle_mode)
      report.oracle.emplace();
    for (const auto& point : points) {
      spdlog::debug("checking a grid point with {} values", point.size());
      *report.simulation += simulation_agreement(model, result, point, target_location(model));
      if (oracle_mode) {
        auto fixed = instantiate(tree, point);
        if (auto d = validate(fixed); !d.empty()) {
          report.notices.push_back("oracle skipped at" + describe(point) + ": " + d.front().message);
          continue;
        }
        auto c = crosscheck(fixed, result, point);
        report.oracle->scenario_samples += c.scenario_samples;
        report.oracle->disjunct_samples += c.disjunct_samples;
        report.oracle->mismatches.insert(report.oracle->mismatches.end(), c.mismatches.begin(),
                                         c.mismatches.end());
      }
    }
    if (json())
      out_ << render_json(report).dump(2) << "\n";
    else
      out_ << render_text(report);
    return report.ok() ? kExitResult : kExitMismatch;
  }

  static std::string describe(const ParameterValuation& point)
  {
    std::string out;
    for (const auto& [name, value] : point)
      out += " " + name + "=" + to_decimal_string(value);
    return out;
  }

  /// Completes the totals from the synthesized constraint at the given values.
  std::optional<ParameterValuation> complete_totals(const TranslationOutput& model, ParameterValuation v)
  {
    const auto& names = *model.network.universe();
    if (v.contains(names[model.total_time].name) && v.contains(names[model.total_cost].name) &&
        v.contains(names[model.total_damage].name))
      return v;
    auto result = synthesize(model);
    const auto& u = *result.universe;
    PointValuation fixed;
    for (const auto& [name, value] : v)
      fixed[u.id(name)] = value;
    for (const auto& d : result.disjuncts) {
      Polyhedron p = d.constraint.substitute(fixed);
      if (p.is_empty())
        continue;
      auto chosen = v;
      for (VarId total : {model.total_time, model.total_cost, model.total_damage}) {
        if (chosen.contains(u[total].name))
          continue;
        auto b = p.bounds(total);
        Rational value;
        if (b->lower && !b->lower->strict)
          value = b->lower->value;
        else if (b->lower && b->upper)
          value = (b->lower->value + b->upper->value) / 2;
        else if (b->lower)
          value = b->lower->value + 1;
        else if (b->upper)
          value = b->upper->strict ? b->upper->value - 1 : b->upper->value;
        chosen[u[total].name] = value;
        p = p.substitute({{total, value}});
      }
      return chosen;
    }
    return std::nullopt;
  }

  int simulate()
  {
    auto tree = load();
    auto model = translate(tree);
    ParameterValuation v;
    if (!f_.values.empty())
      for (const auto& a : axes(f_.values)) {
        if (a.values.size() != 1)
          input_error("--values takes a single value per parameter");
        v[a.name] = a.values.front();
      }
    require_tree_parameters(tree, v);

    auto full = complete_totals(model, v);
    nlohmann::json j{{"schema", "aftsynth-trace/1"}, {"source", f_.path}, {"target", f_.target}};
    if (!full) {
      j["reached"] = false;
      if (json())
        out_ << j.dump(2) << "\n";
      else
        out_ << "rootTA cannot reach " << f_.target << " with these values\n";
      return kExitEmpty;
    }
    for (const auto& [name, value] : *full)
      j["valuation"][name] = rational_json(value);

    auto run = run_reaches(model.network, *full,
                           location_target(model.network, model.root_automaton, target_location(model)));
    if (run.status == RunResult::Status::BudgetExhausted)
      throw std::runtime_error("the simulation ran out of its state budget");
    j["explored"] = run.explored;
    j["reached"] = run.status == RunResult::Status::Reached;
    if (run.trace) {
      j["steps"] = nlohmann::json::array();
      Rational now = 0;
      for (const auto& s : run.trace->steps) {
        now += s.delay;
        j["steps"].push_back({{"delay", rational_json(s.delay)}, {"time", rational_json(now)}, {"action", s.action}});
      }
    }
    if (json()) {
      out_ << j.dump(2) << "\n";
    }
    else {
      out_ << "# valuation:";
      for (const auto& [name, value] : *full)
        out_ << " " << name << "=" << to_decimal_string(value);
      out_ << "\n";
      if (run.trace)
        out_ << to_string(model.network, *run.trace) << "\n";
      else
        out_ << "rootTA cannot reach " << f_.target << " with these values\n";
    }
    return run.trace ? kExitResult : kExitEmpty;
  }

private:
  Flags f_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  configure_logging();
  CLI::App app{"Parametric synthesis for attack-fault trees", "aftsynth"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", flags.path, "Galileo model")->required();
    sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto engine = [&](CLI::App* sub) {
    sub->add_option("--target", flags.target, "Location of rootTA to reach")
        ->check(CLI::IsMember({"success", "fail"}));
    sub->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--no-subsumption", flags.no_subsumption, "Keep states included in a sibling");
    flags.seed_option = sub->add_option("--seed", flags.seed, "Shuffle the exploration order");
  };

  auto* analyze = app.add_subcommand("analyze", "Synthesize the parameter constraint");
  common(analyze);
  engine(analyze);
  auto* exporter = app.add_subcommand("export", "Write the network as an IMITATOR model");
  exporter->add_option("file", flags.path, "Galileo model")->required();
  exporter->add_option("-o,--output", flags.output, "Output file, stdout by default");
  auto* check = app.add_subcommand("check", "Cross-validate synthesis against the oracle and simulation");
  common(check);
  check->add_option("--target", flags.target, "Location of rootTA to reach")->check(CLI::IsMember({"success", "fail"}));
  check->add_option("--grid", flags.grid, "Parameter grid, e.g. a=0..12step3,b=0..40step20");
  check->add_option("--expected", flags.expected, "Constraint text the result must equal");
  check->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
  auto* simulate = app.add_subcommand("simulate", "Print a concrete run to the target");
  common(simulate);
  simulate->add_option("--target", flags.target, "Location of rootTA to reach")->check(CLI::IsMember({"success", "fail"}));
  simulate->add_option("--values", flags.values, "Parameter values, e.g. a=2,b=20");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  }
  catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitResult : kExitInput;
  }

  Command cmd(flags, out, err);
  try {
    if (*analyze)
      return cmd.analyze();
    if (*exporter)
      return cmd.export_model();
    if (*check)
      return cmd.check();
    return cmd.simulate();
  }
  catch (const InputFailure&) {
    return kExitInput;
  }
  catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    if (cmd.json())
      out << error_json("internal", e.what()).dump(2) << "\n";
    else
      err << "aftsynth: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace aftsynth
