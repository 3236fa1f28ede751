// Core CNF data model: literals, clauses, formulas, partial assignments,
// and the unit propagation / resolution primitives every other component
// builds on.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cnc {

using Var = std::uint32_t;

/// A DIMACS-style literal: a nonzero signed integer whose absolute value is
/// the variable index and whose sign is the polarity.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr explicit Literal(std::int32_t dimacs) : value_(dimacs) {
    if (dimacs == 0) throw std::invalid_argument("literal 0 is reserved");
  }

  static constexpr Literal positive(Var v) { return Literal(static_cast<std::int32_t>(v)); }
  static constexpr Literal negative(Var v) { return Literal(-static_cast<std::int32_t>(v)); }

  /// Inverse of code().
  static constexpr Literal from_code(std::size_t code) {
    auto v = static_cast<std::int32_t>(code >> 1);
    return Literal((code & 1) ? -v : v);
  }

  constexpr std::int32_t value() const { return value_; }
  constexpr Var var() const { return static_cast<Var>(value_ < 0 ? -value_ : value_); }
  constexpr bool is_positive() const { return value_ > 0; }
  constexpr bool valid() const { return value_ != 0; }

  /// Dense index for per-literal arrays: 2*var for x, 2*var+1 for x̄.
  constexpr std::size_t code() const {
    return (static_cast<std::size_t>(var()) << 1) | (value_ < 0 ? 1u : 0u);
  }

  constexpr Literal operator-() const { return Literal(-value_); }

  friend constexpr bool operator==(Literal, Literal) = default;
  friend constexpr auto operator<=>(Literal, Literal) = default;

 private:
  std::int32_t value_ = 0;
};

/// A clause: a duplicate-free, insertion-ordered set of literals. Clauses
/// containing a complementary pair are kept and flagged tautological; the
/// empty clause is the falsum.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::span<const Literal> lits);
  explicit Clause(const std::vector<Literal>& lits) : Clause(std::span<const Literal>(lits)) {}
  Clause(std::initializer_list<std::int32_t> dimacs);

  static Clause from_dimacs(std::span<const std::int32_t> dimacs);

  std::span<const Literal> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  bool tautological() const { return tautological_; }
  bool contains(Literal l) const;
  Var max_var() const;

  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  Literal operator[](std::size_t i) const { return lits_[i]; }

  /// Literals sorted by DIMACS value; equal for clauses that are equal as sets.
  std::vector<std::int32_t> sorted_key() const;
  bool same_set(const Clause& other) const { return sorted_key() == other.sorted_key(); }

  /// Complements every literal (flip symmetry image).
  Clause flipped() const;

  /// Sequence equality (literal order matters).
  friend bool operator==(const Clause&, const Clause&) = default;

  std::string to_string() const;

 private:
  std::vector<Literal> lits_;
  bool tautological_ = false;
};

/// An ordered clause sequence over variables 1..var_bound. Clauses may repeat.
class Formula {
 public:
  Formula() = default;
  explicit Formula(Var var_bound) : var_bound_(var_bound) {}
  Formula(Var var_bound, std::vector<Clause> clauses);

  Var var_bound() const { return var_bound_; }
  void set_var_bound(Var v);
  std::span<const Clause> clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  const Clause& operator[](std::size_t i) const { return clauses_[i]; }
  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }

  /// Throws std::out_of_range if a literal exceeds var_bound.
  void add(Clause c);
  bool contains_empty_clause() const;
  /// Number of distinct variables appearing in some clause.
  std::size_t occurring_variables() const;

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  Var var_bound_ = 0;
  std::vector<Clause> clauses_;
};

enum class Truth : std::int8_t { unassigned = 0, true_ = 1, false_ = -1 };

/// A consistent map from literals to {0,1}; stored per variable so that
/// τ(x) = v ⇔ τ(x̄) = ¬v holds by construction.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(Var var_bound) : values_(static_cast<std::size_t>(var_bound) + 1) {}

  Truth value(Literal l) const;
  std::optional<bool> operator()(Literal l) const;
  bool is_true(Literal l) const { return value(l) == Truth::true_; }
  bool is_false(Literal l) const { return value(l) == Truth::false_; }
  bool assigned(Var v) const { return v < values_.size() && values_[v] != Truth::unassigned; }

  /// Makes l true. Throws std::logic_error if l is already false.
  void assign(Literal l);
  /// Makes l true regardless of its previous value.
  void set(Literal l);
  void unassign(Var v);

  /// Assigned literals that are true, by increasing variable.
  std::vector<Literal> true_literals() const;
  std::size_t assigned_count() const;
  Var capacity() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }

  friend bool operator==(const PartialAssignment& a, const PartialAssignment& b) {
    return a.true_literals() == b.true_literals();
  }

 private:
  void grow(Var v);
  std::vector<Truth> values_;
};

struct PropagationResult {
  PartialAssignment assignment;
  bool conflict = false;
};

/// Least fixpoint of unit propagation over F plus the assumption units.
/// Contradictory assumptions yield a conflict, not an error.
PropagationResult unit_propagate(const Formula& f, std::span<const Literal> assumptions);

/// (C1 \ {pivot}) ∪ (C2 \ {pivot̄}). Throws std::invalid_argument when
/// pivot ∉ C1 or pivot̄ ∉ C2.
Clause resolve(const Clause& c1, const Clause& c2, Literal pivot);

enum class Evaluation { satisfied, falsified, undetermined };
Evaluation evaluate(const Formula& f, const PartialAssignment& tau);
Evaluation evaluate(const Clause& c, const PartialAssignment& tau);

/// True iff complementing every literal maps the clause multiset onto itself.
bool is_flip_symmetric(const Formula& f);

}  // namespace cnc
