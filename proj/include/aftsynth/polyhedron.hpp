#pragma once

#include "aftsynth/rational.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace aftsynth {

enum class VarSort { Clock, TimingParameter, WeightVariable, WeightParameter };

std::string_view to_string(VarSort sort);

using VarId = std::size_t;

struct Variable {
  std::string name;
  VarSort sort;
};

/// Ordered, sorted set of the variables of one analysis. The order is the
/// column order of every polyhedron built over it and the print order.
class VariableUniverse {
public:
  VarId add(std::string name, VarSort sort);
  std::optional<VarId> find(std::string_view name) const;
  VarId id(std::string_view name) const;

  const Variable& operator[](VarId id) const { return vars_.at(id); }
  std::size_t size() const { return vars_.size(); }
  std::vector<VarId> of_sort(VarSort sort) const;
  bool is_parameter(VarId id) const;

  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

private:
  std::vector<Variable> vars_;
  std::unordered_map<std::string, VarId> index_;
};

using UniversePtr = std::shared_ptr<const VariableUniverse>;

class UniverseMismatch : public std::logic_error {
public:
  UniverseMismatch() : std::logic_error("polyhedra built over different variable universes") {}
};

/// Affine expression with rational coefficients.
struct LinearExpr {
  std::map<VarId, Rational> terms;
  Rational constant;

  static LinearExpr var(VarId id, const Rational& coefficient = 1);
  static LinearExpr value(const Rational& constant);

  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
  LinearExpr& operator*=(const Rational& factor);

  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(LinearExpr a, const Rational& k) { return a *= k; }

  bool operator==(const LinearExpr&) const = default;
};

/// Relation of a normalized row `a.x + c REL 0`.
enum class Relation { Less, LessEqual, Equal };

/// User-facing comparison; `>=`/`>` are normalized away by negation.
enum class Comparison { Less, LessEqual, Equal, GreaterEqual, Greater };

std::string_view to_string(Comparison cmp);

/// One row `sum(coefficients[i] * x_i) + constant REL 0`, integer scaled.
struct AffineInequality {
  std::vector<Integer> coefficients;
  Integer constant;
  Relation relation = Relation::LessEqual;

  static AffineInequality make(std::size_t width, const LinearExpr& lhs, Comparison cmp,
                               const LinearExpr& rhs);

  bool is_constant() const;
  bool operator==(const AffineInequality&) const = default;
};

using PointValuation = std::map<VarId, Rational>;

struct Bound {
  Rational value;
  bool strict = false;
};

struct Interval {
  std::optional<Bound> lower;
  std::optional<Bound> upper;
};

/// Convex polyhedron in constraint form over a fixed universe, exact rational
/// arithmetic, Fourier-Motzkin based. Values are immutable once built; the
/// mutating `add` is meant for construction only.
class Polyhedron {
public:
  explicit Polyhedron(UniversePtr universe);

  static Polyhedron top(UniversePtr universe) { return Polyhedron(std::move(universe)); }
  static Polyhedron bottom(UniversePtr universe);

  Polyhedron& add(AffineInequality row);
  Polyhedron& add(const LinearExpr& lhs, Comparison cmp, const LinearExpr& rhs);

  const UniversePtr& universe() const { return universe_; }
  const std::vector<AffineInequality>& constraints() const { return rows_; }
  std::size_t width() const { return universe_->size(); }

  bool is_empty() const;
  bool is_top() const { return rows_.empty() && !known_empty_; }

  Polyhedron intersect(const Polyhedron& other) const;
  Polyhedron eliminate(std::span<const VarId> vars) const;
  Polyhedron time_elapse(const Polyhedron& invariant) const;
  Polyhedron reset(std::span<const VarId> clocks) const;
  Polyhedron affine_image(const std::vector<std::pair<VarId, LinearExpr>>& assignments) const;
  bool includes(const Polyhedron& other) const;
  bool equals(const Polyhedron& other) const { return includes(other) && other.includes(*this); }
  /// Disjoint convex pieces whose union is this minus `other`.
  std::vector<Polyhedron> difference(const Polyhedron& other) const;

  /// Replaces the given variables by constants.
  Polyhedron substitute(const PointValuation& values) const;
  /// Membership of a point; every variable with a nonzero coefficient must be valued.
  bool contains(const PointValuation& point) const;
  /// Exact range of one variable over the polyhedron; nullopt when empty.
  std::optional<Interval> bounds(VarId var) const;
  /// Drops every row entailed by the remaining ones.
  Polyhedron minimized() const;
  /// Variables with a nonzero coefficient in some row.
  std::vector<VarId> support() const;

  /// Canonical `&`-joined text form, e.g. `2*total_time = 23 & total_cost = 232`.
  std::string to_string() const;
  /// Canonical text of one row.
  std::string row_to_string(const AffineInequality& row) const;

private:
  void check_universe(const Polyhedron& other) const;
  void set_rows(std::vector<AffineInequality> rows);

  UniversePtr universe_;
  std::vector<AffineInequality> rows_;
  bool known_empty_ = false;
  mutable std::optional<bool> empty_cache_;
};

/// Exact test of p being included in the union of `pieces`.
bool covered_by(const Polyhedron& p, std::span<const Polyhedron> pieces);

/// Set equality of two finite unions.
bool same_union(std::span<const Polyhedron> a, std::span<const Polyhedron> b);

/// Canonical oriented form of a row, used by the text and JSON renderers:
/// positive leading coefficient, constant moved to the right-hand side.
struct OrientedRow {
  std::vector<std::pair<VarId, Integer>> terms;
  Comparison comparison;
  Integer rhs;
};

OrientedRow orient(const AffineInequality& row);

}  // namespace aftsynth
