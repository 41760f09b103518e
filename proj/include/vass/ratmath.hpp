#pragma once

#include "vass/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vass::ratmath {

using RatVec = std::vector<Rational>;
using RatMatrix = std::vector<RatVec>;

// ---------------------------------------------------------------------------
// Dense linear systems

struct LinSystem {
  RatMatrix a;
  RatVec b;
};

struct Singular {};

/// Exact Gaussian elimination; throws std::invalid_argument on dimension mismatch.
std::variant<RatVec, Singular> solve_linear(const LinSystem& sys);

RatVec multiply(const RatMatrix& a, const RatVec& x);

/// Whether a·x = b has a solution in Z^n (no sign constraints).  Rows are scaled to
/// integers first; decided exactly with unimodular column operations.
bool integer_solvable(const LinSystem& sys);

// ---------------------------------------------------------------------------
// Constraint sets

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearConstraint {
  RatVec coeffs;
  Relation rel = Relation::LessEq;
  Rational rhs;
};

/// Linear constraints over variables with finite lower bounds and optional upper bounds.
class ConstraintSet {
 public:
  int add_variable(std::string name, Rational lower = Rational(0), std::optional<Rational> upper = std::nullopt,
                   bool integral = true);
  /// Coefficients shorter than the variable count are zero-padded.
  void add(RatVec coeffs, Relation rel, Rational rhs);
  void add(LinearConstraint c) { add(std::move(c.coeffs), c.rel, std::move(c.rhs)); }

  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<LinearConstraint>& constraints() const { return rows_; }
  const RatVec& lower() const { return lower_; }
  const std::vector<std::optional<Rational>>& upper() const { return upper_; }
  const std::vector<bool>& integral() const { return integral_; }

  void set_lower(int var, Rational v) { lower_.at(var) = std::move(v); }
  void set_upper(int var, std::optional<Rational> v) { upper_.at(var) = std::move(v); }

  /// Exact check of every constraint and bound (integrality excluded).
  bool satisfied_by(const RatVec& x) const;

 private:
  std::vector<std::string> names_;
  std::vector<LinearConstraint> rows_;
  RatVec lower_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<bool> integral_;
};

/// Farkas multipliers: one per constraint row and one per finite upper bound.
/// Valid when Σ z_i·a_i =: c has c ≥ 0 and z·b + w·u < c·l (see check_farkas).
struct FarkasCertificate {
  RatVec row_multipliers;
  RatVec upper_multipliers;  // indexed by variable; zero where no upper bound
};

bool check_farkas(const ConstraintSet& cs, const FarkasCertificate& cert);

struct Feasible {
  RatVec point;
};
struct Infeasible {
  FarkasCertificate certificate;
};

/// Exact phase-1 simplex with Bland's rule.  Integrality flags are ignored.
std::variant<Feasible, Infeasible> lp_feasible(const ConstraintSet& cs);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  RatVec point;
  Rational objective;
  std::optional<FarkasCertificate> certificate;
};

/// Minimizes objective·x over the relaxation.
LpResult lp_minimize(const ConstraintSet& cs, const std::optional<RatVec>& objective, bool want_certificate = false);

// ---------------------------------------------------------------------------
// Integer programming

/// Callback verdict on an integer candidate.  Rejecting with k alternatives branches the
/// current node into k children, child j receiving the constraints alternatives[j].
/// A single alternative acts as a lazy cut.
struct CutDecision {
  bool accept = true;
  std::vector<std::vector<LinearConstraint>> alternatives;

  static CutDecision accept_point() { return {}; }
  static CutDecision cut(std::vector<LinearConstraint> c) { return {false, {std::move(c)}}; }
  static CutDecision branch(std::vector<std::vector<LinearConstraint>> alts) { return {false, std::move(alts)}; }
};

using CutCallback = std::function<CutDecision(const RatVec& point)>;

struct IntegerPoint {
  RatVec point;
  Rational objective;
};
struct IlpInfeasible {};
struct BudgetExceeded {
  std::string diagnostic;
};

using IlpResult = std::variant<IntegerPoint, IlpInfeasible, BudgetExceeded>;

struct IlpOptions {
  long node_budget = 100000;
};

/// Branch-and-bound on the exact relaxation.  Without an objective the first accepted
/// integer point is returned; nodes minimize Σx so that points stay small.
IlpResult ilp_solve(const ConstraintSet& cs, const std::optional<RatVec>& objective = std::nullopt,
                    const CutCallback& callback = nullptr, const IlpOptions& options = {});

}  // namespace vass::ratmath
