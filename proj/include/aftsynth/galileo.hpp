#pragma once

#include "aftsynth/rational.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace aftsynth {

/// A constant or the name of a parameter.
class AttributeValue {
public:
  AttributeValue() : value_(Rational(0)) {}
  static AttributeValue constant(Rational v) { return AttributeValue(std::move(v)); }
  static AttributeValue parameter(std::string name) { return AttributeValue(std::move(name)); }

  bool is_parameter() const { return std::holds_alternative<std::string>(value_); }
  const Rational& value() const { return std::get<Rational>(value_); }
  const std::string& name() const { return std::get<std::string>(value_); }

  std::string to_string() const;
  bool operator==(const AttributeValue&) const = default;

private:
  explicit AttributeValue(Rational v) : value_(std::move(v)) {}
  explicit AttributeValue(std::string n) : value_(std::move(n)) {}
  std::variant<Rational, std::string> value_;
};

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

enum class LeafKind { BAS, BCF };

enum class GateKind { And, Sand, Pand, Or, Sor, Xor, Fdep, Spare, Vot };

std::string_view to_string(GateKind kind);

struct LeafNode {
  std::string name;
  LeafKind kind = LeafKind::BAS;
  AttributeValue min_time;
  AttributeValue max_time;
  AttributeValue cost;
  AttributeValue damage;
  SourceLocation location;
};

struct GateNode {
  std::string name;
  GateKind kind = GateKind::And;
  unsigned threshold = 0;  // k of VOT(k/n)
  unsigned declared_arity = 0;  // n of VOT(k/n)
  std::vector<std::string> children;
  AttributeValue cost;
  AttributeValue damage;
  SourceLocation location;
};

using Node = std::variant<LeafNode, GateNode>;

const std::string& node_name(const Node& node);

/// Parsed tree. Nodes are kept in definition order; a name defined twice
/// shows up twice here and is reported by validate().
struct AttackFaultTree {
  std::string root;
  SourceLocation root_location;
  std::vector<Node> nodes;
  std::set<std::string> timing_parameters;
  std::set<std::string> weight_parameters;

  const Node* find(std::string_view name) const;
  const LeafNode* leaf(std::string_view name) const;
  const GateNode* gate(std::string_view name) const;
  std::vector<const LeafNode*> leaves() const;
  std::vector<const GateNode*> gates() const;
  bool is_concrete() const { return timing_parameters.empty() && weight_parameters.empty(); }
};

/// Structural equality; source locations are ignored.
bool operator==(const AttackFaultTree& a, const AttackFaultTree& b);

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, SourceLocation where);
  SourceLocation where;
  std::string detail;
};

AttackFaultTree parse_galileo(std::string_view text);

struct Diagnostic {
  std::string node;
  std::string rule;
  std::string message;
  SourceLocation location;
};

std::vector<Diagnostic> validate(const AttackFaultTree& tree);

/// Canonical printer; parse_galileo(print_galileo(t)) == t.
std::string print_galileo(const AttackFaultTree& tree);

/// Replaces the parameters named in `values` by constants; others stay.
AttackFaultTree instantiate(const AttackFaultTree& tree, const std::map<std::string, Rational>& values);

/// Names the translation generates for its own use; parameters may not take them.
bool is_reserved_name(std::string_view name);

}  // namespace aftsynth
