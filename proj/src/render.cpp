#include "aftsynth/render.hpp"

#include <cctype>
#include <iomanip>
#include <sstream>

namespace aftsynth {

namespace {

std::vector<std::string> split_rows(const std::string& text)
{
  std::vector<std::string> out;
  std::size_t from = 0;
  while (true) {
    auto at = text.find(" & ", from);
    out.push_back(text.substr(from, at == std::string::npos ? std::string::npos : at - from));
    if (at == std::string::npos)
      return out;
    from = at + 3;
  }
}

void block(std::ostream& os, const Polyhedron& p)
{
  auto rows = split_rows(p.to_string());
  for (std::size_t i = 0; i < rows.size(); ++i)
    os << (i ? "& " : "  ") << rows[i] << "\n";
}

std::string seconds(double s)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << s;
  return os.str();
}

std::string join(const std::vector<std::string>& items)
{
  std::string out;
  for (const auto& s : items)
    out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

std::vector<std::string> fired_leaves(const AttackFaultTree& tree, const std::vector<std::string>& witness)
{
  std::vector<std::string> out;
  for (const auto& action : witness)
    if (action.starts_with("success_") && tree.leaf(action.substr(8)))
      out.push_back(action.substr(8));
  return out;
}

nlohmann::json rational_json(const Rational& value) { return to_string(value); }

std::string render_text(const AnalysisReport& report)
{
  const auto& r = *report.result;
  std::ostringstream os;
  os << "# " << report.source << ": " << r.disjuncts.size() << " constraint block"
     << (r.disjuncts.size() == 1 ? "" : "s") << " for rootTA reaching " << report.target << "\n";
  os << "# explored " << r.stats.states << " states, " << r.stats.transitions << " transitions in "
     << seconds(r.stats.seconds) << " s\n";
  if (!r.complete)
    os << "# incomplete: the state limit was reached\n";
  os << "\n";
  if (r.disjuncts.empty())
    os << "false\n";
  for (std::size_t i = 0; i < r.disjuncts.size(); ++i) {
    if (i)
      os << "\nOR\n\n";
    block(os, r.disjuncts[i].constraint);
    if (report.tree)
      os << "# leaves: " << join(fired_leaves(*report.tree, r.disjuncts[i].witness)) << "\n";
  }
  return os.str();
}

nlohmann::json render_json(const AnalysisReport& report)
{
  const auto& r = *report.result;
  const auto& u = *r.universe;
  nlohmann::json out;
  out["schema"] = "aftsynth-result/1";
  out["source"] = report.source;
  out["target"] = report.target;
  out["complete"] = r.complete;
  out["parameters"] = nlohmann::json::array();
  for (VarId v = 0; v < u.size(); ++v)
    if (u.is_parameter(v))
      out["parameters"].push_back(
          {{"name", u[v].name}, {"kind", u[v].sort == VarSort::TimingParameter ? "timing" : "weight"}});

  out["disjuncts"] = nlohmann::json::array();
  for (const auto& d : r.disjuncts) {
    nlohmann::json j;
    j["constraint"] = d.constraint.to_string();
    j["rows"] = nlohmann::json::array();
    for (const auto& row : d.constraint.constraints()) {
      auto o = orient(row);
      nlohmann::json terms = nlohmann::json::object();
      for (const auto& [v, a] : o.terms)
        terms[u[v].name] = a.get_str();
      j["rows"].push_back({{"terms", terms}, {"comparison", to_string(o.comparison)}, {"rhs", o.rhs.get_str()}});
    }
    j["bounds"] = nlohmann::json::object();
    for (VarId v : d.constraint.support()) {
      auto b = d.constraint.bounds(v);
      if (!b)
        continue;
      nlohmann::json range = nlohmann::json::object();
      if (b->lower)
        range["lower"] = {{"value", rational_json(b->lower->value)}, {"strict", b->lower->strict}};
      if (b->upper)
        range["upper"] = {{"value", rational_json(b->upper->value)}, {"strict", b->upper->strict}};
      j["bounds"][u[v].name] = range;
    }
    j["witness"] = d.witness;
    if (report.tree)
      j["leaves"] = fired_leaves(*report.tree, d.witness);
    out["disjuncts"].push_back(std::move(j));
  }
  out["stats"] = {{"states", r.stats.states},
                  {"transitions", r.stats.transitions},
                  {"subsumed", r.stats.subsumed},
                  {"target_states", r.stats.target_states},
                  {"seconds", r.stats.seconds}};
  return out;
}

namespace {

class ConstraintParser {
public:
  ConstraintParser(std::string_view text, const UniversePtr& u) : text_(text), u_(u) {}

  std::vector<Polyhedron> blocks()
  {
    std::vector<Polyhedron> out;
    std::optional<Polyhedron> current;
    bool contradiction = false;
    auto finish = [&] {
      if (current && !contradiction)
        out.push_back(*current);
      current.reset();
      contradiction = false;
    };
    while (true) {
      skip();
      if (pos_ >= text_.size())
        break;
      if (word("OR")) {
        if (!current && !contradiction)
          fail("OR without a preceding block");
        finish();
        continue;
      }
      if (current || contradiction)
        expect('&');
      else
        current.emplace(u_);
      skip();
      if (word("true"))
        continue;
      if (word("false")) {
        contradiction = true;
        continue;
      }
      LinearExpr lhs = expression();
      Comparison cmp = comparison();
      LinearExpr rhs = expression();
      current->add(lhs, cmp, rhs);
    }
    finish();
    return out;
  }

private:
  [[noreturn]] void fail(const std::string& what) const
  {
    throw std::invalid_argument("constraint text, offset " + std::to_string(pos_) + ": " + what);
  }

  void skip()
  {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      else if (text_[pos_] == '#')
        while (pos_ < text_.size() && text_[pos_] != '\n')
          ++pos_;
      else
        break;
    }
  }

  bool word(std::string_view w)
  {
    if (text_.substr(pos_, w.size()) != w)
      return false;
    std::size_t end = pos_ + w.size();
    if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  void expect(char c)
  {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier()
  {
    std::size_t from = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(from, pos_ - from));
  }

  Rational number()
  {
    std::size_t from = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == '/'))
      ++pos_;
    auto v = parse_rational(text_.substr(from, pos_ - from));
    if (!v)
      fail("bad number");
    return *v;
  }

  LinearExpr term()
  {
    skip();
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      Rational k = number();
      skip();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip();
        return LinearExpr::var(variable(), k);
      }
      return LinearExpr::value(k);
    }
    return LinearExpr::var(variable());
  }

  VarId variable()
  {
    std::string name = identifier();
    if (name.empty())
      fail("expected a variable or a number");
    auto id = u_->find(name);
    if (!id)
      fail("unknown variable '" + name + "'");
    return *id;
  }

  LinearExpr expression()
  {
    skip();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    LinearExpr e = term();
    if (negative)
      e *= -1;
    while (true) {
      skip();
      if (pos_ >= text_.size() || (text_[pos_] != '+' && text_[pos_] != '-'))
        return e;
      bool minus = text_[pos_] == '-';
      ++pos_;
      LinearExpr t = term();
      if (minus)
        e -= t;
      else
        e += t;
    }
  }

  Comparison comparison()
  {
    skip();
    auto rest = text_.substr(pos_);
    for (auto [symbol, cmp] : {std::pair{"<=", Comparison::LessEqual}, {">=", Comparison::GreaterEqual},
                               {"<", Comparison::Less}, {">", Comparison::Greater}, {"=", Comparison::Equal}}) {
      if (rest.starts_with(symbol)) {
        pos_ += std::string_view(symbol).size();
        return cmp;
      }
    }
    fail("expected a comparison");
  }

  std::string_view text_;
  UniversePtr u_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Polyhedron> parse_constraint_text(std::string_view text, const UniversePtr& universe)
{
  return ConstraintParser(text, universe).blocks();
}

bool CheckReport::ok() const
{
  return (!oracle || oracle->ok()) && (!simulation || simulation->ok()) &&
         (!expected_only || expected_only->empty()) && (!result_only || result_only->empty());
}

std::string render_text(const CheckReport& report)
{
  std::ostringstream os;
  for (const auto& n : report.notices)
    os << "note: " << n << "\n";
  if (report.oracle) {
    const auto& o = *report.oracle;
    os << "oracle: " << o.scenario_samples << " scenario samples, " << o.disjunct_samples << " disjunct samples, "
       << o.mismatches.size() << " mismatches\n";
    for (const auto& m : o.mismatches)
      os << "  " << m << "\n";
  }
  if (report.simulation) {
    const auto& s = *report.simulation;
    os << "simulation: " << s.compared << " valuations (" << s.reachable << " reachable), " << s.mismatches.size()
       << " mismatches";
    if (s.exhausted)
      os << ", " << s.exhausted << " runs out of budget";
    os << "\n";
    for (const auto& m : s.mismatches)
      os << "  " << m << "\n";
  }
  if (report.expected_only) {
    os << "expected: " << report.expected_only->size() + report.result_only->size() << " differing blocks\n";
    for (const auto& b : *report.expected_only)
      os << "- " << b << "\n";
    for (const auto& b : *report.result_only)
      os << "+ " << b << "\n";
  }
  os << (report.ok() ? "PASS" : "FAIL") << " " << report.source << "\n";
  return os.str();
}

nlohmann::json render_json(const CheckReport& report)
{
  nlohmann::json out;
  out["schema"] = "aftsynth-check/1";
  out["source"] = report.source;
  out["verdict"] = report.ok() ? "PASS" : "FAIL";
  out["notices"] = report.notices;
  if (report.oracle)
    out["oracle"] = {{"scenario_samples", report.oracle->scenario_samples},
                     {"disjunct_samples", report.oracle->disjunct_samples},
                     {"mismatches", report.oracle->mismatches}};
  if (report.simulation)
    out["simulation"] = {{"compared", report.simulation->compared},
                         {"reachable", report.simulation->reachable},
                         {"exhausted", report.simulation->exhausted},
                         {"mismatches", report.simulation->mismatches}};
  if (report.expected_only)
    out["expected"] = {{"missing", *report.expected_only}, {"unexpected", *report.result_only}};
  return out;
}

nlohmann::json error_json(std::string_view kind, std::string_view message, const std::vector<Diagnostic>& diagnostics)
{
  nlohmann::json list = nlohmann::json::array();
  for (const auto& d : diagnostics)
    list.push_back({{"line", d.location.line},
                    {"column", d.location.column},
                    {"node", d.node},
                    {"rule", d.rule},
                    {"message", d.message}});
  return {{"schema", "aftsynth-error/1"},
          {"error", {{"kind", kind}, {"message", message}, {"diagnostics", list}}}};
}

}  // namespace aftsynth
