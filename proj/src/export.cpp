#include "aftsynth/export.hpp"

#include <sstream>

namespace aftsynth {

namespace {

std::string number(const Rational& k)
{
  Rational v = k;
  v.canonicalize();
  if (v.get_den() == 1)
    return v.get_num().get_str();
  return "(" + v.get_num().get_str() + "/" + v.get_den().get_str() + ")";
}

std::string expr(const LinearExpr& e, const VariableUniverse& u)
{
  std::string out;
  for (const auto& [v, k] : e.terms) {
    if (k == 0)
      continue;
    Rational mag = abs(k);
    if (out.empty())
      out += k < 0 ? "-" : "";
    else
      out += k < 0 ? " - " : " + ";
    if (mag != 1)
      out += number(mag) + "*";
    out += u[v].name;
  }
  if (out.empty())
    return number(e.constant);
  if (e.constant != 0)
    out += (e.constant < 0 ? " - " : " + ") + number(abs(e.constant));
  return out;
}

std::string guard(const Guard& g, const VariableUniverse& u)
{
  if (g.empty())
    return "True";
  std::string out;
  for (const auto& a : g) {
    if (!out.empty())
      out += " & ";
    out += expr(a.lhs, u) + " " + std::string(to_string(a.comparison)) + " " + expr(a.rhs, u);
  }
  return out;
}

void declare(std::ostream& os, const VariableUniverse& u, VarSort sort, const char* type)
{
  auto ids = u.of_sort(sort);
  if (ids.empty())
    return;
  os << "\t";
  for (std::size_t i = 0; i < ids.size(); ++i)
    os << (i ? ",\n\t" : "") << u[ids[i]].name;
  os << "\n\t\t: " << type << ";\n\n";
}

void automaton(std::ostream& os, const Pwta& a, const VariableUniverse& u)
{
  os << "(************************************************************)\n";
  os << "automaton " << a.name() << "\n";
  os << "(************************************************************)\n";
  os << "synclabs: ";
  bool first = true;
  for (const auto& action : a.alphabet()) {
    os << (first ? "" : ", ") << action;
    first = false;
  }
  os << ";\n";
  for (LocId l = 0; l < a.locations().size(); ++l) {
    const Location& loc = a.location(l);
    os << "\n" << (loc.urgent ? "urgent " : "") << (a.accepting().contains(l) ? "accepting " : "") << "loc "
       << loc.name << ": invariant " << guard(loc.invariant, u) << "\n";
    for (const auto& e : a.edges()) {
      if (e.source != l)
        continue;
      os << "\twhen " << guard(e.guard, u) << " sync " << e.action << " do {";
      bool first_update = true;
      for (VarId c : e.resets) {
        os << (first_update ? "" : ", ") << u[c].name << "' = 0";
        first_update = false;
      }
      for (const auto& [v, rhs] : e.update) {
        if (rhs == LinearExpr::var(v))
          continue;
        os << (first_update ? "" : ", ") << u[v].name << "' = " << expr(rhs, u);
        first_update = false;
      }
      os << "} goto " << a.location(e.target).name << ";\n";
    }
  }
  os << "end (* " << a.name() << " *)\n\n";
}

}  // namespace

std::string to_imitator(const TranslationOutput& model, const std::string& source_name)
{
  const Network& net = model.network;
  const auto& u = *net.universe();
  std::ostringstream os;
  os << "(************************************************************\n";
  os << " * Attack-fault tree translated by aftsynth\n";
  if (!source_name.empty())
    os << " * Source: " << source_name << "\n";
  os << " * Synthesis: imitator <file> -mode EF\n";
  os << " ************************************************************)\n\n";

  os << "var\n\n";
  declare(os, u, VarSort::Clock, "clock");
  declare(os, u, VarSort::WeightVariable, "discrete");
  declare(os, u, VarSort::TimingParameter, "parameter");
  declare(os, u, VarSort::WeightParameter, "parameter");

  for (const auto& a : net.automata())
    automaton(os, a, u);

  os << "(************************************************************)\n";
  os << "(* Initial state *)\n";
  os << "(************************************************************)\n\n";
  os << "init :=\n";
  for (const auto& a : net.automata())
    os << "\t& loc[" << a.name() << "] = " << a.location(a.initial()).name << "\n";
  for (VarId v = 0; v < u.size(); ++v) {
    switch (u[v].sort) {
    case VarSort::Clock:
    case VarSort::WeightVariable:
      os << "\t& " << u[v].name << " = 0\n";
      break;
    case VarSort::TimingParameter:
      os << "\t& " << u[v].name << " >= 0\n";
      break;
    case VarSort::WeightParameter:
      break;
    }
  }
  os << ";\n\n";
  os << "(************************************************************)\n";
  os << "(* Property specification *)\n";
  os << "(************************************************************)\n\n";
  os << "property := unreachable loc[" << model.root_automaton << "] = " << model.success_location << ";\n\n";
  os << "end\n";
  return os.str();
}

}  // namespace aftsynth
