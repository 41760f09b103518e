#include "vass/ratmath.hpp"

#include <algorithm>
#include <stdexcept>

namespace vass::ratmath {

// ---------------------------------------------------------------------------
// Linear systems

std::variant<RatVec, Singular> solve_linear(const LinSystem& sys) {
  const std::size_t n = sys.a.size();
  if (sys.b.size() != n) throw std::invalid_argument("solve_linear: rhs length differs from row count");
  for (const auto& row : sys.a)
    if (row.size() != n) throw std::invalid_argument("solve_linear: matrix is not square");

  RatMatrix m = sys.a;
  RatVec b = sys.b;
  for (std::size_t col = 0; col < n; ++col) {
    // Pivot on the largest magnitude entry; exact arithmetic makes this about fill, not stability.
    std::size_t piv = n;
    Rational best(0);
    for (std::size_t r = col; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      Rational mag = abs(m[r][col]);
      if (piv == n || mag > best) {
        piv = r;
        best = mag;
      }
    }
    if (piv == n) return Singular{};
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    const Rational inv = Rational(1) / m[col][col];
    for (std::size_t j = col; j < n; ++j) m[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const Rational f = m[r][col];
      for (std::size_t j = col; j < n; ++j)
        if (!m[col][j].is_zero()) m[r][j] -= f * m[col][j];
      b[r] -= f * b[col];
    }
  }
  return b;
}

bool integer_solvable(const LinSystem& sys) {
  const std::size_t rows = sys.a.size();
  if (sys.b.size() != rows) throw std::invalid_argument("integer_solvable: dimension mismatch");
  const std::size_t cols = rows ? sys.a[0].size() : 0;
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  std::vector<mpz_class> b(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (sys.a[r].size() != cols) throw std::invalid_argument("integer_solvable: ragged matrix");
    mpz_class l = sys.b[r].denominator();
    for (const auto& v : sys.a[r]) l = lcm(l, v.denominator());
    for (std::size_t c = 0; c < cols; ++c)
      a[r][c] = sys.a[r][c].numerator() * (l / sys.a[r][c].denominator());
    b[r] = sys.b[r].numerator() * (l / sys.b[r].denominator());
  }
  // Column echelon form L = aU; y = U^{-1}x is integral iff x is.
  std::vector<mpz_class> y;
  std::size_t piv = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = piv + 1; c < cols; ++c) {
      while (a[r][c] != 0) {
        if (abs(a[r][c]) < abs(a[r][piv]) || a[r][piv] == 0) {
          for (auto& row : a) std::swap(row[c], row[piv]);
          continue;
        }
        const mpz_class q = a[r][c] / a[r][piv];
        for (auto& row : a) row[c] -= q * row[piv];
      }
    }
    mpz_class rest = b[r];
    for (std::size_t j = 0; j < piv; ++j) rest -= a[r][j] * y[j];
    if (piv < cols && a[r][piv] != 0) {
      if (rest % a[r][piv] != 0) return false;
      y.push_back(rest / a[r][piv]);
      ++piv;
    } else if (rest != 0) {
      return false;
    }
  }
  return true;
}

RatVec multiply(const RatMatrix& a, const RatVec& x) {
  RatVec y(a.size(), Rational(0));
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != x.size()) throw std::invalid_argument("multiply: dimension mismatch");
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!a[r][j].is_zero()) y[r] += a[r][j] * x[j];
  }
  return y;
}

// ---------------------------------------------------------------------------
// Constraint sets

int ConstraintSet::add_variable(std::string name, Rational lower, std::optional<Rational> upper, bool integral) {
  names_.push_back(std::move(name));
  lower_.push_back(std::move(lower));
  upper_.push_back(std::move(upper));
  integral_.push_back(integral);
  for (auto& r : rows_) r.coeffs.emplace_back(0);
  return num_vars() - 1;
}

void ConstraintSet::add(RatVec coeffs, Relation rel, Rational rhs) {
  if (static_cast<int>(coeffs.size()) > num_vars())
    throw std::invalid_argument("constraint has more coefficients than variables");
  coeffs.resize(num_vars(), Rational(0));
  rows_.push_back(LinearConstraint{std::move(coeffs), rel, std::move(rhs)});
}

namespace {

Rational dot(const RatVec& a, const RatVec& x) {
  Rational s(0);
  for (std::size_t j = 0; j < a.size(); ++j)
    if (!a[j].is_zero()) s += a[j] * x[j];
  return s;
}

bool holds(const Rational& lhs, Relation rel, const Rational& rhs) {
  switch (rel) {
    case Relation::LessEq: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::GreaterEq: return lhs >= rhs;
  }
  return false;
}

}  // namespace

bool ConstraintSet::satisfied_by(const RatVec& x) const {
  if (static_cast<int>(x.size()) != num_vars()) return false;
  for (int j = 0; j < num_vars(); ++j) {
    if (x[j] < lower_[j]) return false;
    if (upper_[j] && x[j] > *upper_[j]) return false;
  }
  for (const auto& r : rows_)
    if (!holds(dot(r.coeffs, x), r.rel, r.rhs)) return false;
  return true;
}

bool check_farkas(const ConstraintSet& cs, const FarkasCertificate& cert) {
  const int n = cs.num_vars();
  const auto& rows = cs.constraints();
  if (cert.row_multipliers.size() != rows.size()) return false;
  if (static_cast<int>(cert.upper_multipliers.size()) != n) return false;
  RatVec c(n, Rational(0));
  Rational rhs(0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational& z = cert.row_multipliers[i];
    if (rows[i].rel == Relation::LessEq && z.sign() < 0) return false;
    if (rows[i].rel == Relation::GreaterEq && z.sign() > 0) return false;
    if (z.is_zero()) continue;
    for (int j = 0; j < n; ++j)
      if (!rows[i].coeffs[j].is_zero()) c[j] += z * rows[i].coeffs[j];
    rhs += z * rows[i].rhs;
  }
  for (int j = 0; j < n; ++j) {
    const Rational& w = cert.upper_multipliers[j];
    if (w.is_zero()) continue;
    if (w.sign() < 0 || !cs.upper()[j]) return false;
    c[j] += w;
    rhs += w * *cs.upper()[j];
  }
  Rational floor_value(0);
  for (int j = 0; j < n; ++j) {
    if (c[j].sign() < 0) return false;
    floor_value += c[j] * cs.lower()[j];
  }
  // Every feasible x satisfies c·l <= c·x <= rhs, so rhs < c·l is a contradiction.
  return rhs < floor_value;
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

/// Dense tableau over x' = x - l >= 0; columns are [structural | slack | artificial | rhs].
class Tableau {
 public:
  Tableau(const ConstraintSet& cs) : n_(cs.num_vars()) {
    // Rows: the constraint list followed by one row per finite upper bound.
    struct Row {
      RatVec coeffs;
      Relation rel;
      Rational rhs;
      int source;  // >=0 constraint index, <0 upper bound of variable -source-1
    };
    std::vector<Row> rows;
    const auto& cons = cs.constraints();
    for (std::size_t i = 0; i < cons.size(); ++i) rows.push_back({cons[i].coeffs, cons[i].rel, cons[i].rhs, static_cast<int>(i)});
    for (int j = 0; j < n_; ++j) {
      if (!cs.upper()[j]) continue;
      RatVec e(n_, Rational(0));
      e[j] = Rational(1);
      rows.push_back({std::move(e), Relation::LessEq, *cs.upper()[j], -j - 1});
    }
    m_ = static_cast<int>(rows.size());
    int slacks = 0;
    for (const auto& r : rows)
      if (r.rel != Relation::Equal) ++slacks;
    slack_begin_ = n_;
    art_begin_ = n_ + slacks;
    cols_ = art_begin_ + m_;
    a_.assign(m_, RatVec(cols_ + 1, Rational(0)));
    basis_.assign(m_, 0);
    sign_.assign(m_, 1);
    source_.resize(m_);
    rel_.resize(m_);
    int s = slack_begin_;
    for (int r = 0; r < m_; ++r) {
      const Row& row = rows[r];
      source_[r] = row.source;
      rel_[r] = row.rel;
      Rational beta = row.rhs - dot(row.coeffs, cs.lower());
      int sg = beta.sign() < 0 ? -1 : 1;
      sign_[r] = sg;
      for (int j = 0; j < n_; ++j)
        a_[r][j] = sg > 0 ? row.coeffs[j] : -row.coeffs[j];
      if (row.rel == Relation::LessEq) a_[r][s++] = Rational(sg);
      else if (row.rel == Relation::GreaterEq) a_[r][s++] = Rational(-sg);
      a_[r][art_begin_ + r] = Rational(1);
      a_[r][cols_] = sg > 0 ? beta : -beta;
      basis_[r] = art_begin_ + r;
    }
    row_alive_.assign(m_, true);
  }

  /// Phase 1; returns false if infeasible.
  bool phase1() {
    z_.assign(cols_ + 1, Rational(0));
    for (int r = 0; r < m_; ++r)
      for (int j = 0; j <= cols_; ++j)
        if (j < art_begin_ || j == cols_) z_[j] -= a_[r][j];
    run(cols_);
    return z_[cols_].is_zero();
  }

  /// Multipliers in the original row orientation, valid after an infeasible phase 1.
  FarkasCertificate certificate(const ConstraintSet& cs) const {
    FarkasCertificate cert;
    cert.row_multipliers.assign(cs.constraints().size(), Rational(0));
    cert.upper_multipliers.assign(n_, Rational(0));
    for (int r = 0; r < m_; ++r) {
      // y_r = 1 - reduced cost of artificial r; z_r = -y_r * sign_r.
      Rational y = Rational(1) - z_[art_begin_ + r];
      Rational z = sign_[r] > 0 ? -y : y;
      if (source_[r] >= 0) cert.row_multipliers[source_[r]] = z;
      else cert.upper_multipliers[-source_[r] - 1] = z;
    }
    return cert;
  }

  /// Removes artificials from the basis after a feasible phase 1.
  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (!row_alive_[r] || basis_[r] < art_begin_) continue;
      int col = -1;
      for (int j = 0; j < art_begin_; ++j)
        if (!a_[r][j].is_zero()) {
          col = j;
          break;
        }
      if (col >= 0) pivot(r, col);
      else row_alive_[r] = false;  // redundant row
    }
  }

  enum class Outcome { Optimal, Unbounded };

  Outcome phase2(const RatVec& cost) {
    z_.assign(cols_ + 1, Rational(0));
    for (int j = 0; j < n_; ++j) z_[j] = cost[j];
    for (int r = 0; r < m_; ++r) {
      if (!row_alive_[r]) continue;
      int b = basis_[r];
      if (b >= n_ || cost[b].is_zero()) continue;
      const Rational cb = cost[b];
      for (int j = 0; j <= cols_; ++j)
        if (!a_[r][j].is_zero()) z_[j] -= cb * a_[r][j];
    }
    return run(art_begin_) ? Outcome::Optimal : Outcome::Unbounded;
  }

  RatVec primal(const ConstraintSet& cs) const {
    RatVec x = cs.lower();
    for (int r = 0; r < m_; ++r)
      if (row_alive_[r] && basis_[r] < n_) x[basis_[r]] += a_[r][cols_];
    return x;
  }

 private:
  /// Bland's rule over columns [0, limit); false when unbounded.
  bool run(int limit) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (z_[j].sign() < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int r = 0; r < m_; ++r) {
        if (!row_alive_[r] || a_[r][enter].sign() <= 0) continue;
        Rational ratio = a_[r][cols_] / a_[r][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    const Rational inv = Rational(1) / a_[r][c];
    for (int j = 0; j <= cols_; ++j)
      if (!a_[r][j].is_zero()) a_[r][j] *= inv;
    std::vector<int> nz;
    for (int j = 0; j <= cols_; ++j)
      if (!a_[r][j].is_zero()) nz.push_back(j);
    auto eliminate = [&](RatVec& row) {
      if (row[c].is_zero()) return;
      const Rational f = row[c];
      for (int j : nz) row[j] -= f * a_[r][j];
    };
    for (int i = 0; i < m_; ++i)
      if (i != r && row_alive_[i]) eliminate(a_[i]);
    eliminate(z_);
    basis_[r] = c;
  }

  int n_ = 0, m_ = 0, cols_ = 0, slack_begin_ = 0, art_begin_ = 0;
  RatMatrix a_;
  RatVec z_;
  std::vector<int> basis_;
  std::vector<int> sign_;
  std::vector<int> source_;
  std::vector<Relation> rel_;
  std::vector<bool> row_alive_;
};

}  // namespace

LpResult lp_minimize(const ConstraintSet& cs, const std::optional<RatVec>& objective, bool want_certificate) {
  for (int j = 0; j < cs.num_vars(); ++j)
    if (cs.upper()[j] && *cs.upper()[j] < cs.lower()[j]) {
      LpResult res;
      res.status = LpStatus::Infeasible;
      if (want_certificate) {
        FarkasCertificate cert;
        cert.row_multipliers.assign(cs.constraints().size(), Rational(0));
        cert.upper_multipliers.assign(cs.num_vars(), Rational(0));
        cert.upper_multipliers[j] = Rational(1);
        res.certificate = cert;
      }
      return res;
    }
  Tableau t(cs);
  LpResult res;
  if (!t.phase1()) {
    res.status = LpStatus::Infeasible;
    if (want_certificate) res.certificate = t.certificate(cs);
    return res;
  }
  t.drive_out_artificials();
  RatVec cost(cs.num_vars(), Rational(0));
  if (objective) {
    if (static_cast<int>(objective->size()) != cs.num_vars())
      throw std::invalid_argument("objective length differs from variable count");
    cost = *objective;
  }
  if (t.phase2(cost) == Tableau::Outcome::Unbounded) {
    res.status = LpStatus::Unbounded;
    res.point = t.primal(cs);
    return res;
  }
  res.status = LpStatus::Optimal;
  res.point = t.primal(cs);
  res.objective = dot(cost, res.point);
  return res;
}

std::variant<Feasible, Infeasible> lp_feasible(const ConstraintSet& cs) {
  LpResult r = lp_minimize(cs, std::nullopt, true);
  if (r.status == LpStatus::Infeasible) return Infeasible{*r.certificate};
  return Feasible{std::move(r.point)};
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

struct Node {
  std::vector<LinearConstraint> extra;
  RatVec lower;
  std::vector<std::optional<Rational>> upper;
};

ConstraintSet materialize(const ConstraintSet& base, const Node& node) {
  ConstraintSet cs = base;
  for (const auto& c : node.extra) cs.add(c);
  for (int j = 0; j < cs.num_vars(); ++j) {
    cs.set_lower(j, node.lower[j]);
    cs.set_upper(j, node.upper[j]);
  }
  return cs;
}

}  // namespace

IlpResult ilp_solve(const ConstraintSet& cs, const std::optional<RatVec>& objective, const CutCallback& callback,
                    const IlpOptions& options) {
  const int n = cs.num_vars();
  RatVec guide;
  if (objective) {
    guide = *objective;
  } else {
    // Σx with a slight preference for small leading variables keeps witnesses short and
    // makes the returned vertex reproducible.
    for (int j = 0; j < n; ++j) guide.push_back(Rational(1000LL * n + (n - j), 1000LL * n));
  }

  std::vector<Node> stack;
  stack.push_back(Node{{}, cs.lower(), cs.upper()});
  std::optional<IntegerPoint> incumbent;
  long nodes = 0;
  bool unbounded_seen = false;

  while (!stack.empty()) {
    if (++nodes > options.node_budget)
      return BudgetExceeded{"node budget of " + std::to_string(options.node_budget) + " exhausted"};
    Node node = std::move(stack.back());
    stack.pop_back();
    ConstraintSet local = materialize(cs, node);
    LpResult lp = lp_minimize(local, guide);
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded) {
      if (objective) {
        unbounded_seen = true;
        continue;
      }
      // Without a user objective the guide is only a preference; fall back to feasibility.
      lp = lp_minimize(local, std::nullopt);
    }
    if (objective && incumbent && lp.objective >= incumbent->objective) continue;

    // Most fractional variable, ties by smallest index.
    int branch_var = -1;
    Rational best_frac;
    for (int j = 0; j < n; ++j) {
      if (!cs.integral()[j] || lp.point[j].is_integer()) continue;
      Rational f = lp.point[j] - Rational(mpq_class(lp.point[j].floor()));
      Rational dist = abs(f - Rational(1, 2));
      if (branch_var < 0 || dist < best_frac) {
        branch_var = j;
        best_frac = dist;
      }
    }
    if (branch_var >= 0) {
      const Rational v = lp.point[branch_var];
      Node down = node, up = std::move(node);
      Rational fl(mpq_class(v.floor())), cl(mpq_class(v.ceil()));
      down.upper[branch_var] = down.upper[branch_var] ? std::min(*down.upper[branch_var], fl) : fl;
      up.lower[branch_var] = std::max(up.lower[branch_var], cl);
      // Explore the down branch first: pushed last.
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
      continue;
    }

    if (callback) {
      CutDecision d = callback(lp.point);
      if (!d.accept) {
        for (auto it = d.alternatives.rbegin(); it != d.alternatives.rend(); ++it) {
          Node child = node;
          child.extra.insert(child.extra.end(), it->begin(), it->end());
          stack.push_back(std::move(child));
        }
        continue;
      }
    }
    IntegerPoint pt{lp.point, dot(objective ? *objective : guide, lp.point)};
    if (!objective) return pt;
    incumbent = std::move(pt);
  }
  if (unbounded_seen) return BudgetExceeded{"relaxation unbounded in the objective direction"};
  if (incumbent) return *incumbent;
  return IlpInfeasible{};
}

}  // namespace vass::ratmath
