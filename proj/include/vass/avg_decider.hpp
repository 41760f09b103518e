#pragma once

#include "vass/graph.hpp"
#include "vass/model.hpp"
#include "vass/zreach.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vass {

/// Recurring configuration, B/U partition, and per-counter cycle with access paths.
struct Witness {
  StateId recurring_state = 0;
  IntVec recurring_values;  // only the bounded entries are constrained
  CounterPartition partition;
  std::vector<PathSummary> cycle;  // per counter; cycle[i] starts where in[i] ends
  std::vector<PathSummary> in;     // recurring_state -> start of cycle[i]
  std::vector<PathSummary> out;    // start of cycle[i] -> recurring_state
  std::optional<PathSummary> reach;  // initial state -> recurring configuration
};

struct VerifyResult {
  bool accepted = false;
  std::vector<std::string> reasons;  // every violated condition
};

/// Checks the witness conditions exactly. Throws ModelError if paths do not compose.
VerifyResult verify_witness(const Model& m, const AvgQuery& q, const Witness& w, const ZReachOptions& opt = {});

struct StageReport {
  std::string stage;
  bool exhaustive = true;
  std::string detail;
};

struct VerdictNo {
  bool exhaustive = true;
  std::vector<StageReport> stages;
};
struct VerdictUnknown {
  std::string diagnostic;
  std::vector<StageReport> stages;
};
struct ZYes {
  Witness witness;
};
using Verdict = std::variant<ZYes, VerdictNo, VerdictUnknown>;

struct DecideOptions {
  SearchBudget budget;
  int max_access_len = -1;            // -1: twice the encoding size
  long long dp_node_budget = 4000000;  // access-path search space
};

/// Decision procedure for the multi-dimensional average problem over Z.  Caches every
/// threshold-independent stage, so repeated queries on one model are cheap.
class ZDecider {
 public:
  explicit ZDecider(const Model& m, DecideOptions opt = {});
  ~ZDecider();
  ZDecider(const ZDecider&) = delete;
  ZDecider& operator=(const ZDecider&) = delete;

  Verdict decide(const AvgQuery& q);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Verdict decide_avg_z(const Model& m, const AvgQuery& q, const DecideOptions& opt = {});

struct OracleBounds {
  int box = 8;            // counter range [-box, box] in explicit searches
  int cycle_depth = 24;   // closed-walk search depth for unbounded counters
  int walk_len = -1;      // closed walks for bounded counters; -1: 2|Q|+2
  int access_len = -1;    // access paths; -1: 2|Q|+2
  int reach_depth = 30;
  int reach_box = 16;
};

/// Guard for brute-force oracles: |Q| <= 4, k <= 2, |transitions| <= 6.
bool oracle_guard(const Model& m, std::string* why = nullptr);

/// Independent explicit-state search for witnesses within the given bounds.
class BruteForceZ {
 public:
  explicit BruteForceZ(const Model& m, OracleBounds b = {});
  ~BruteForceZ();
  BruteForceZ(const BruteForceZ&) = delete;
  BruteForceZ& operator=(const BruteForceZ&) = delete;
  Verdict decide(const AvgQuery& q);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Verdict brute_force_avg_z(const Model& m, const AvgQuery& q, const OracleBounds& b = {});

// ---------------------------------------------------------------------------
// One counter over N

struct N1Witness {
  std::vector<Config> selecting;      // (s_1,x_1) ... (s_m,x_m)
  PathSummary stem;                   // initial configuration -> (s_1,x_1)
  std::vector<PathSummary> segments;  // (s_j,x_j) -> (s_{j+1},x_{j+1}), last one closes to (s_1,x_1)
};
struct N1Yes {
  N1Witness witness;
};
using N1Verdict = std::variant<N1Yes, VerdictNo, VerdictUnknown>;

struct N1Options {
  std::optional<long long> cap;  // intermediate counter cap; default from the selecting-value bound
};

/// Bounds on lasso witnesses for threshold lambda.
long long n1_value_bound(const Model& m, const Rational& lambda);
long long n1_count_bound(const StateSet& S, const Rational& lambda);

/// Checks a lasso witness step by step and its mean; optionally also the size bounds.
VerifyResult verify_n1_witness(const Model& m, const StateSet& S, const Rational& lambda, const N1Witness& w,
                               bool check_bounds = false);

N1Verdict decide_avg_n1(const Model& m, const StateSet& S, const Rational& lambda, const N1Options& opt = {});

struct N1OracleBounds {
  long long value_cap = -1;  // -1: derived from lambda and |Q|
};
N1Verdict brute_force_n1(const Model& m, const StateSet& S, const Rational& lambda, const N1OracleBounds& b = {});

// ---------------------------------------------------------------------------

struct DualCoverReduction {
  Model model;
  AvgQuery query;
  StateId fresh = 0;
};

/// Dual coverability of (t, <= target) from (s, 0) as an average query.
DualCoverReduction reduce_dual_coverability(const Model& m, StateId s, StateId t, const IntVec& target);

}  // namespace vass
