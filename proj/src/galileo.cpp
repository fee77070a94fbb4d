#include "aftsynth/galileo.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

namespace aftsynth {

std::string AttributeValue::to_string() const
{
  return is_parameter() ? name() : to_decimal_string(value());
}

std::string_view to_string(GateKind kind)
{
  switch (kind) {
  case GateKind::And:
    return "AND";
  case GateKind::Sand:
    return "SAND";
  case GateKind::Pand:
    return "PAND";
  case GateKind::Or:
    return "OR";
  case GateKind::Sor:
    return "SOR";
  case GateKind::Xor:
    return "XOR";
  case GateKind::Fdep:
    return "FDEP";
  case GateKind::Spare:
    return "SPARE";
  case GateKind::Vot:
    return "VOT";
  }
  return "?";
}

const std::string& node_name(const Node& node)
{
  return std::visit([](const auto& n) -> const std::string& { return n.name; }, node);
}

const Node* AttackFaultTree::find(std::string_view name) const
{
  for (const auto& n : nodes)
    if (node_name(n) == name)
      return &n;
  return nullptr;
}

const LeafNode* AttackFaultTree::leaf(std::string_view name) const
{
  const Node* n = find(name);
  return n ? std::get_if<LeafNode>(n) : nullptr;
}

const GateNode* AttackFaultTree::gate(std::string_view name) const
{
  const Node* n = find(name);
  return n ? std::get_if<GateNode>(n) : nullptr;
}

std::vector<const LeafNode*> AttackFaultTree::leaves() const
{
  std::vector<const LeafNode*> out;
  for (const auto& n : nodes)
    if (auto* l = std::get_if<LeafNode>(&n))
      out.push_back(l);
  return out;
}

std::vector<const GateNode*> AttackFaultTree::gates() const
{
  std::vector<const GateNode*> out;
  for (const auto& n : nodes)
    if (auto* g = std::get_if<GateNode>(&n))
      out.push_back(g);
  return out;
}

namespace {

bool same_node(const Node& a, const Node& b)
{
  if (a.index() != b.index())
    return false;
  if (auto* la = std::get_if<LeafNode>(&a)) {
    const auto& lb = std::get<LeafNode>(b);
    return la->name == lb.name && la->kind == lb.kind && la->min_time == lb.min_time &&
           la->max_time == lb.max_time && la->cost == lb.cost && la->damage == lb.damage;
  }
  const auto& ga = std::get<GateNode>(a);
  const auto& gb = std::get<GateNode>(b);
  return ga.name == gb.name && ga.kind == gb.kind && ga.threshold == gb.threshold &&
         ga.declared_arity == gb.declared_arity && ga.children == gb.children && ga.cost == gb.cost &&
         ga.damage == gb.damage;
}

std::string located(const std::string& message, SourceLocation where)
{
  std::ostringstream os;
  os << "line " << where.line << ", column " << where.column << ": " << message;
  return os.str();
}

}  // namespace

bool operator==(const AttackFaultTree& a, const AttackFaultTree& b)
{
  if (a.root != b.root || a.timing_parameters != b.timing_parameters ||
      a.weight_parameters != b.weight_parameters || a.nodes.size() != b.nodes.size())
    return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i)
    if (!same_node(a.nodes[i], b.nodes[i]))
      return false;
  return true;
}

ParseError::ParseError(const std::string& message, SourceLocation where)
    : std::runtime_error(located(message, where)), where(where), detail(message)
{
}

AttackFaultTree instantiate(const AttackFaultTree& tree, const std::map<std::string, Rational>& values)
{
  AttackFaultTree out = tree;
  auto fix = [&](AttributeValue& v) {
    if (!v.is_parameter())
      return;
    auto it = values.find(v.name());
    if (it != values.end())
      v = AttributeValue::constant(it->second);
  };
  for (auto& node : out.nodes) {
    if (auto* leaf = std::get_if<LeafNode>(&node)) {
      for (auto* v : {&leaf->min_time, &leaf->max_time, &leaf->cost, &leaf->damage})
        fix(*v);
    }
    else {
      auto& gate = std::get<GateNode>(node);
      fix(gate.cost);
      fix(gate.damage);
    }
  }
  for (const auto& [name, value] : values) {
    out.timing_parameters.erase(name);
    out.weight_parameters.erase(name);
  }
  return out;
}

bool is_reserved_name(std::string_view name)
{
  static const std::set<std::string, std::less<>> reserved = {
      "total_time", "total_cost", "total_damage", "abs_time", "current_cost_root", "current_damage_root"};
  return reserved.contains(name);
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum class Type { Quoted, Word, Equals, Semicolon, End };
  Type type;
  std::string text;
  SourceLocation location;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next()
  {
    skip_blank();
    SourceLocation at{line_, column_};
    if (pos_ >= text_.size())
      return {Token::Type::End, "", at};
    char c = text_[pos_];
    if (c == ';') {
      advance();
      return {Token::Type::Semicolon, ";", at};
    }
    if (c == '=') {
      advance();
      return {Token::Type::Equals, "=", at};
    }
    if (c == '"') {
      advance();
      std::string body;
      while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n')
        body += advance();
      if (pos_ >= text_.size() || text_[pos_] != '"')
        throw ParseError("unterminated string", at);
      advance();
      return {Token::Type::Quoted, body, at};
    }
    std::string word;
    while (pos_ < text_.size() && !is_break(text_[pos_]))
      word += advance();
    return {Token::Type::Word, word, at};
  }

private:
  static bool is_break(char c)
  {
    return std::isspace(static_cast<unsigned char>(c)) || c == ';' || c == '=' || c == '"' || c == '#';
  }

  char advance()
  {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    }
    else {
      ++column_;
    }
    return c;
  }

  void skip_blank()
  {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          advance();
      }
      else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      }
      else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_identifier(const std::string& s)
{
  static const std::regex re("[A-Za-z_][A-Za-z0-9_]*");
  return std::regex_match(s, re);
}

struct GateSpec {
  GateKind kind;
  unsigned k = 0;
  unsigned n = 0;
};

std::optional<GateSpec> gate_kind(const std::string& word)
{
  static const std::map<std::string, GateKind> kinds = {
      {"and", GateKind::And}, {"sand", GateKind::Sand}, {"pand", GateKind::Pand}, {"or", GateKind::Or},
      {"sor", GateKind::Sor}, {"xor", GateKind::Xor},   {"fdep", GateKind::Fdep}, {"wsp", GateKind::Spare}};
  auto w = lower(word);
  if (auto it = kinds.find(w); it != kinds.end())
    return GateSpec{it->second};
  static const std::regex vot("([0-9]+)of([0-9]+)");
  std::smatch m;
  if (std::regex_match(w, m, vot))
    return GateSpec{GateKind::Vot, static_cast<unsigned>(std::stoul(m[1])), static_cast<unsigned>(std::stoul(m[2]))};
  return std::nullopt;
}

bool is_probabilistic_key(const std::string& key)
{
  static const std::set<std::string> keys = {"prob", "lambda", "rate", "dorm", "repair", "phases", "mu", "res", "cov"};
  return keys.contains(key);
}

class Parser {
public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  AttackFaultTree run()
  {
    std::optional<SourceLocation> toplevel_at;
    while (tok_.type != Token::Type::End) {
      if (tok_.type == Token::Type::Word && lower(tok_.text) == "toplevel") {
        SourceLocation at = tok_.location;
        shift();
        if (toplevel_at)
          throw ParseError("toplevel declared twice", at);
        toplevel_at = at;
        tree_.root = expect(Token::Type::Quoted, "quoted node name").text;
        tree_.root_location = at;
        expect(Token::Type::Semicolon, "';'");
        continue;
      }
      if (tok_.type == Token::Type::Quoted) {
        statement();
        continue;
      }
      throw ParseError("unexpected '" + tok_.text + "', expected a quoted node name or 'toplevel'", tok_.location);
    }
    if (!toplevel_at)
      throw ParseError("toplevel missing", tok_.location);

    if (!tree_.find(tree_.root))
      throw ParseError("reference to undefined node '" + tree_.root + "'", tree_.root_location);
    for (const auto& [child, at] : references_)
      if (!tree_.find(child))
        throw ParseError("reference to undefined node '" + child + "'", at);
    return std::move(tree_);
  }

private:
  void shift() { tok_ = lexer_.next(); }

  Token expect(Token::Type type, const char* what)
  {
    if (tok_.type != type)
      throw ParseError(std::string("expected ") + what + (tok_.type == Token::Type::End ? " before end of input" : ", got '" + tok_.text + "'"),
                       tok_.location);
    Token t = tok_;
    shift();
    return t;
  }

  void statement()
  {
    Token name = tok_;
    shift();

    if (tok_.type == Token::Type::Word) {
      // a word that is not followed by '=' names the gate kind
      Token word = tok_;
      Lexer probe = lexer_;
      Token after = probe.next();
      if (after.type != Token::Type::Equals) {
        auto spec = gate_kind(word.text);
        if (!spec)
          throw ParseError("unknown gate kind '" + word.text + "'", word.location);
        shift();
        gate(name, *spec);
        return;
      }
    }
    leaf(name);
  }

  struct Attribute {
    std::string key;
    std::string value;
    SourceLocation key_at;
    SourceLocation value_at;
  };

  std::vector<Attribute> attributes()
  {
    std::vector<Attribute> out;
    while (tok_.type == Token::Type::Word) {
      Attribute a;
      a.key = lower(tok_.text);
      a.key_at = tok_.location;
      shift();
      expect(Token::Type::Equals, "'='");
      if (tok_.type != Token::Type::Word && tok_.type != Token::Type::Quoted)
        throw ParseError("missing value for attribute '" + a.key + "'", tok_.location);
      a.value = tok_.text;
      a.value_at = tok_.location;
      shift();
      out.push_back(std::move(a));
    }
    expect(Token::Type::Semicolon, "';'");
    return out;
  }

  AttributeValue value(const Attribute& a, bool is_time)
  {
    if (auto r = parse_rational(a.value)) {
      if (is_time && *r < 0)
        throw ParseError("negative time value for '" + a.key + "'", a.value_at);
      return AttributeValue::constant(*r);
    }
    if (!is_identifier(a.value))
      throw ParseError("invalid value '" + a.value + "' for attribute '" + a.key + "'", a.value_at);
    (is_time ? tree_.timing_parameters : tree_.weight_parameters).insert(a.value);
    return AttributeValue::parameter(a.value);
  }

  [[noreturn]] void unknown(const Attribute& a)
  {
    if (is_probabilistic_key(a.key))
      throw ParseError("probabilistic attribute '" + a.key + "' not supported", a.key_at);
    throw ParseError("unknown attribute '" + a.key + "'", a.key_at);
  }

  void gate(const Token& name, GateSpec spec)
  {
    GateNode g;
    g.name = name.text;
    g.kind = spec.kind;
    g.threshold = spec.k;
    g.declared_arity = spec.n;
    g.location = name.location;
    while (tok_.type == Token::Type::Quoted) {
      g.children.push_back(tok_.text);
      references_.emplace_back(tok_.text, tok_.location);
      shift();
    }
    for (const auto& a : attributes()) {
      if (a.key == "cost")
        g.cost = value(a, false);
      else if (a.key == "damage")
        g.damage = value(a, false);
      else
        unknown(a);
    }
    tree_.nodes.emplace_back(std::move(g));
  }

  void leaf(const Token& name)
  {
    LeafNode l;
    l.name = name.text;
    l.location = name.location;
    std::optional<AttributeValue> min, max, time;
    for (const auto& a : attributes()) {
      if (a.key == "mintime")
        min = value(a, true);
      else if (a.key == "maxtime")
        max = value(a, true);
      else if (a.key == "time")
        time = value(a, true);
      else if (a.key == "cost")
        l.cost = value(a, false);
      else if (a.key == "damage")
        l.damage = value(a, false);
      else if (a.key == "kind") {
        auto k = lower(a.value);
        if (k == "bas")
          l.kind = LeafKind::BAS;
        else if (k == "bcf")
          l.kind = LeafKind::BCF;
        else
          throw ParseError("kind must be bas or bcf, got '" + a.value + "'", a.value_at);
      }
      else
        unknown(a);
    }
    if (time && (min || max))
      throw ParseError("'time' cannot be combined with 'mintime'/'maxtime'", name.location);
    if (time)
      min = max = time;
    if (min && !max)
      max = min;
    if (max && !min)
      min = max;
    if (min)
      l.min_time = *min;
    if (max)
      l.max_time = *max;
    tree_.nodes.emplace_back(std::move(l));
  }

  Lexer lexer_;
  Token tok_;
  AttackFaultTree tree_;
  std::vector<std::pair<std::string, SourceLocation>> references_;
};

}  // namespace

AttackFaultTree parse_galileo(std::string_view text)
{
  return Parser(text).run();
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate(const AttackFaultTree& tree)
{
  std::vector<Diagnostic> out;
  auto report = [&](const std::string& node, std::string rule, std::string message, SourceLocation at) {
    out.push_back(Diagnostic{node, std::move(rule), std::move(message), at});
  };

  static const std::regex valid_name("[A-Za-z0-9_]+");
  std::map<std::string, int> definitions;
  for (const auto& n : tree.nodes) {
    const auto& name = node_name(n);
    SourceLocation at = std::visit([](const auto& x) { return x.location; }, n);
    if (++definitions[name] == 2)
      report(name, "duplicate-definition", "node '" + name + "' defined more than once", at);
    if (!std::regex_match(name, valid_name))
      report(name, "invalid-name", "node name '" + name + "' must match [A-Za-z0-9_]+", at);
  }

  std::map<std::string, std::vector<std::string>> parents;
  for (const auto* g : tree.gates()) {
    for (const auto& c : g->children)
      parents[c].push_back(g->name);

    const auto n = g->children.size();
    if (n == 0)
      report(g->name, "empty-gate", "gate '" + g->name + "' has no children", g->location);
    switch (g->kind) {
    case GateKind::Xor:
      if (n != 2)
        report(g->name, "xor-arity", "XOR gate '" + g->name + "' needs exactly 2 children", g->location);
      break;
    case GateKind::Fdep:
      if (n < 2)
        report(g->name, "fdep-arity", "FDEP gate '" + g->name + "' needs a trigger and at least one dependent", g->location);
      for (std::size_t i = 1; i < n; ++i)
        if (!tree.leaf(g->children[i]))
          report(g->name, "fdep-dependent", "FDEP dependent '" + g->children[i] + "' must be a leaf", g->location);
      break;
    case GateKind::Spare:
      if (n < 2)
        report(g->name, "spare-arity", "SPARE gate '" + g->name + "' needs at least 2 children", g->location);
      break;
    case GateKind::Vot:
      if (g->threshold == 0)
        report(g->name, "vot-threshold", "VOT threshold must be positive", g->location);
      if (g->threshold > n)
        report(g->name, "vot-threshold", "VOT threshold exceeds arity", g->location);
      if (g->declared_arity != n)
        report(g->name, "vot-arity",
               "VOT gate '" + g->name + "' declares " + std::to_string(g->declared_arity) + " children but lists " +
                   std::to_string(n),
               g->location);
      break;
    default:
      break;
    }
  }

  for (const auto& [child, ps] : parents) {
    if (ps.size() > 1) {
      const Node* n = tree.find(child);
      SourceLocation at = n ? std::visit([](const auto& x) { return x.location; }, *n) : SourceLocation{};
      report(child, "shared-subtree", "shared subtree not supported: '" + child + "' has more than one parent", at);
    }
  }
  if (parents.contains(tree.root))
    report(tree.root, "cycle", "toplevel node '" + tree.root + "' is the child of a gate", tree.root_location);

  // Reachability from the root, with cycle detection along the current path.
  std::set<std::string> seen;
  std::set<std::string> on_path;
  std::set<std::string> cyclic;
  auto visit = [&](auto& self, const std::string& name) -> void {
    if (on_path.contains(name)) {
      if (cyclic.insert(name).second) {
        const Node* n = tree.find(name);
        report(name, "cycle", "cycle through node '" + name + "'",
               n ? std::visit([](const auto& x) { return x.location; }, *n) : SourceLocation{});
      }
      return;
    }
    if (!seen.insert(name).second)
      return;
    on_path.insert(name);
    if (const auto* g = tree.gate(name))
      for (const auto& c : g->children)
        self(self, c);
    on_path.erase(name);
  };
  if (tree.find(tree.root))
    visit(visit, tree.root);
  std::set<std::string> orphan_reported;
  for (const auto& n : tree.nodes) {
    const auto& name = node_name(n);
    if (!seen.contains(name) && orphan_reported.insert(name).second)
      report(name, "orphan", "node '" + name + "' is not reachable from the toplevel",
             std::visit([](const auto& x) { return x.location; }, n));
  }

  for (const auto* l : tree.leaves()) {
    if (!l->min_time.is_parameter() && !l->max_time.is_parameter() && l->min_time.value() > l->max_time.value())
      report(l->name, "time-window",
             "leaf '" + l->name + "' has mintime " + l->min_time.to_string() + " > maxtime " + l->max_time.to_string(),
             l->location);
  }

  for (const auto& p : tree.timing_parameters)
    if (tree.weight_parameters.contains(p))
      report(p, "parameter-sort", "parameter '" + p + "' is used both as a time and as a weight", {});

  std::set<std::string> generated;
  for (const auto& n : tree.nodes) {
    const auto& name = node_name(n);
    generated.insert("x_" + name);
    generated.insert("w_cost_" + name);
    generated.insert("w_dmg_" + name);
  }
  for (const auto* set : {&tree.timing_parameters, &tree.weight_parameters})
    for (const auto& p : *set)
      if (is_reserved_name(p) || generated.contains(p))
        report(p, "reserved-name", "parameter name '" + p + "' collides with a generated name", {});

  return out;
}

// ---------------------------------------------------------------------------
// Printer

std::string print_galileo(const AttackFaultTree& tree)
{
  std::ostringstream os;
  os << "toplevel \"" << tree.root << "\";\n";
  auto is_zero = [](const AttributeValue& v) { return !v.is_parameter() && v.value() == 0; };
  for (const auto& n : tree.nodes) {
    if (const auto* g = std::get_if<GateNode>(&n)) {
      os << '"' << g->name << "\" ";
      if (g->kind == GateKind::Vot)
        os << g->threshold << "of" << g->declared_arity;
      else if (g->kind == GateKind::Spare)
        os << "wsp";
      else
        os << lower(std::string(to_string(g->kind)));
      for (const auto& c : g->children)
        os << " \"" << c << '"';
      if (!is_zero(g->cost))
        os << " cost=" << g->cost.to_string();
      if (!is_zero(g->damage))
        os << " damage=" << g->damage.to_string();
      os << ";\n";
      continue;
    }
    const auto& l = std::get<LeafNode>(n);
    os << '"' << l.name << '"';
    if (l.min_time == l.max_time) {
      if (!is_zero(l.min_time))
        os << " time=" << l.min_time.to_string();
    }
    else {
      os << " mintime=" << l.min_time.to_string() << " maxtime=" << l.max_time.to_string();
    }
    if (!is_zero(l.cost))
      os << " cost=" << l.cost.to_string();
    if (!is_zero(l.damage))
      os << " damage=" << l.damage.to_string();
    if (l.kind == LeafKind::BCF)
      os << " kind=bcf";
    os << ";\n";
  }
  return os.str();
}

}  // namespace aftsynth
