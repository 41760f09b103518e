#pragma once

#include "vass/model.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vass {

struct TargetConstraint {
  enum class Kind { Exactly, AtMost, Free };
  Kind kind = Kind::Free;
  Rational value;

  static TargetConstraint exactly(long long n) { return {Kind::Exactly, Rational(n)}; }
  static TargetConstraint at_most(Rational r) { return {Kind::AtMost, std::move(r)}; }
  static TargetConstraint free() { return {}; }
  bool admits(long long v) const;
};

struct ReachQuery {
  Config source;
  StateId target = 0;
  std::vector<TargetConstraint> constraint;  // one per counter
  StateSet avoid;                            // intermediate configurations only
  std::optional<long long> cap;              // domain N counter cap
};

struct ParikhCertificate {
  std::vector<long long> multiplicity;  // indexed by transition
};

struct Reachable {
  PathSummary path;
  ParikhCertificate parikh;
};
struct Unreachable {
  bool exhaustive = true;
  std::string note;
};
struct ReachUnknown {
  std::string diagnostic;
};
using ReachResult = std::variant<Reachable, Unreachable, ReachUnknown>;

struct ZReachOptions {
  long ilp_nodes = 100000;
  std::vector<StateSet> require;       // the path must visit each set (source counts)
  std::optional<StateSet> within;      // only transitions between these states
};

/// Exact reachability over Z via Parikh images.  Throws ModelError for domain N or a nonempty avoid set.
ReachResult z_reach(const Model& m, const ReachQuery& q, const ZReachOptions& opt = {});

/// Flow conservation, gain constraints, and the multiplicities of the reported path.
bool check_parikh(const Model& m, const ReachQuery& q, const ParikhCertificate& cert);

/// Breadth-first search over (state, value) with values in [0, cap] for VASS(N,1).
/// Paths have at least one transition.  Unreachable is exhaustive when no successor exceeded cap.
ReachResult n1_reach_avoid(const Model& m, const ReachQuery& q);

long long n1_default_cap(const Model& m);

}  // namespace vass
