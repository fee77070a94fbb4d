#include "aftsynth/check.hpp"

#include <array>
#include <regex>
#include <set>
#include <sstream>

namespace aftsynth {

namespace {

Rational parse_number(const std::string& text)
{
  auto value = parse_rational(text);
  if (!value)
    throw std::invalid_argument("'" + text + "' is not a number");
  return *value;
}

}  // namespace

std::vector<GridAxis> parse_grid(std::string_view text)
{
  static const std::regex axis(R"(\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^.\s]+(?:\.[0-9]+)?)\s*(?:\.\.\s*([^\s]+?)\s*step\s*([^\s]+))?\s*)");
  std::vector<GridAxis> out;
  std::set<std::string> seen;
  std::string s(text);
  std::stringstream parts(s);
  std::string part;
  while (std::getline(parts, part, ',')) {
    std::smatch m;
    if (!std::regex_match(part, m, axis))
      throw std::invalid_argument("bad grid axis '" + part + "', expected name=lo..hi step s or name=value");
    GridAxis a{m[1].str(), {}};
    if (!seen.insert(a.name).second)
      throw std::invalid_argument("parameter '" + a.name + "' appears twice in the grid");
    Rational lo = parse_number(m[2].str());
    if (!m[3].matched) {
      a.values.push_back(lo);
    }
    else {
      Rational hi = parse_number(m[3].str());
      Rational step = parse_number(m[4].str());
      if (step <= 0)
        throw std::invalid_argument("grid step for '" + a.name + "' must be positive");
      if (hi < lo)
        throw std::invalid_argument("empty grid range for '" + a.name + "'");
      for (Rational v = lo; v <= hi; v += step)
        a.values.push_back(v);
    }
    out.push_back(std::move(a));
  }
  if (out.empty())
    throw std::invalid_argument("empty grid");
  return out;
}

std::vector<ParameterValuation> grid_points(const std::vector<GridAxis>& axes)
{
  std::vector<ParameterValuation> out{{}};
  for (const auto& a : axes) {
    std::vector<ParameterValuation> next;
    for (const auto& p : out)
      for (const auto& v : a.values) {
        auto q = p;
        q[a.name] = v;
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

AgreementReport& AgreementReport::operator+=(const AgreementReport& other)
{
  compared += other.compared;
  reachable += other.reachable;
  exhausted += other.exhausted;
  mismatches.insert(mismatches.end(), other.mismatches.begin(), other.mismatches.end());
  return *this;
}

AgreementReport simulation_agreement(const TranslationOutput& model, const ConstraintResult& result,
                                     const ParameterValuation& fixed, std::string_view target_location,
                                     std::size_t budget)
{
  const auto& u = *result.universe;
  const VarId totals[] = {model.total_time, model.total_cost, model.total_damage};
  PointValuation point;
  for (const auto& [name, value] : fixed) {
    auto id = u.find(name);
    if (!id || !u.is_parameter(*id))
      throw std::invalid_argument("'" + name + "' is not a parameter of the model");
    if (*id == totals[0] || *id == totals[1] || *id == totals[2])
      throw std::invalid_argument("'" + name + "' is sampled by the check and cannot be fixed");
    point[*id] = value;
  }
  for (VarId v = 0; v < u.size(); ++v)
    if (u.is_parameter(v) && v != totals[0] && v != totals[1] && v != totals[2] && !point.contains(v))
      throw std::invalid_argument("no grid value for parameter '" + u[v].name + "'");

  // points inside every disjunct, and their neighbours half a unit away on each axis
  std::set<std::array<Rational, 3>> candidates{{Rational(0), Rational(0), Rational(0)}};
  auto samples = [](const Polyhedron& p, VarId v) {
    std::vector<Rational> out;
    auto b = p.bounds(v);
    if (!b)
      return out;
    if (b->lower)
      out.push_back(b->lower->value);
    if (b->upper)
      out.push_back(b->upper->value);
    if (b->lower && b->upper)
      out.push_back((b->lower->value + b->upper->value) / 2);
    if (!b->lower && !b->upper)
      out.push_back(0);
    else if (!b->lower || !b->upper)
      out.push_back(out.front() + (b->lower ? 1 : -1));
    return out;
  };
  for (const auto& d : result.disjuncts) {
    Polyhedron s = d.constraint.substitute(point);
    for (const auto& tt : samples(s, totals[0])) {
      Polyhedron at_t = s.substitute({{totals[0], tt}});
      for (const auto& tc : samples(at_t, totals[1])) {
        Polyhedron at_tc = at_t.substitute({{totals[1], tc}});
        for (const auto& td : samples(at_tc, totals[2])) {
          std::array<Rational, 3> p{tt, tc, td};
          candidates.insert(p);
          for (std::size_t k = 0; k < 3; ++k)
            for (int sign : {-1, 1}) {
              auto q = p;
              q[k] += Rational(sign, 2);
              candidates.insert(q);
            }
        }
      }
    }
  }

  AgreementReport report;
  auto target = location_target(model.network, model.root_automaton, target_location);
  for (const auto& [tt, tc, td] : candidates) {
    if (tt < 0)
      continue;
    ParameterValuation v = fixed;
    v[u[totals[0]].name] = tt;
    v[u[totals[1]].name] = tc;
    v[u[totals[2]].name] = td;
    auto run = run_reaches(model.network, v, target, budget);
    ++report.compared;
    if (run.status == RunResult::Status::BudgetExhausted) {
      ++report.exhausted;
      continue;
    }
    bool reached = run.status == RunResult::Status::Reached;
    report.reachable += reached;
    if (reached != check_valuation(result, v)) {
      std::ostringstream os;
      os << (reached ? "reachable" : "unreachable") << " by simulation but " << (reached ? "excluded" : "included")
         << " by the constraint at";
      for (const auto& [name, value] : v)
        os << " " << name << "=" << to_decimal_string(value);
      report.mismatches.push_back(os.str());
    }
  }
  return report;
}

}  // namespace aftsynth
