#include "vass/avg_decider.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace vass {

namespace {

using Mask = unsigned long long;

std::string cname(int i) { return "counter " + std::to_string(i + 1); }

bool in_mask(Mask b, int j) { return (b >> j) & 1ULL; }

std::vector<int> mask_list(Mask b, int k) {
  std::vector<int> out;
  for (int j = 0; j < k; ++j)
    if (in_mask(b, j)) out.push_back(j);
  return out;
}

std::vector<int> complement_list(Mask b, int k) {
  std::vector<int> out;
  for (int j = 0; j < k; ++j)
    if (!in_mask(b, j)) out.push_back(j);
  return out;
}

void check_query(const Model& m, const AvgQuery& q) {
  const int k = m.dimension();
  if (static_cast<int>(q.selecting.size()) != k) throw ModelError("query needs one selecting set per counter");
  if (static_cast<int>(q.thresholds.size()) != k) throw ModelError("query needs one threshold per counter");
  for (const auto& S : q.selecting)
    for (StateId s : S)
      if (s < 0 || s >= m.num_states()) throw ModelError("selecting set refers to an unknown state");
}

bool is_initial(const Model& m, StateId s) {
  return std::find(m.initial().begin(), m.initial().end(), s) != m.initial().end();
}

PathSummary remake(const Model& m, const PathSummary& p) { return PathSummary::make(m, p.start, p.transitions); }

PathSummary empty_at(const Model& m, StateId s) { return PathSummary::make(m, s, {}); }

// Mean prefix gain on counter i over the cycle positions whose state lies in S (start counted, end excluded).
std::optional<Rational> cycle_offset(const Model& m, const PathSummary& c, const StateSet& S, int i) {
  mpz_class sum = 0;
  long long cnt = 0, g = 0;
  StateId s = c.start;
  for (TransId t : c.transitions) {
    if (contains(S, s)) {
      sum += mpz_class(static_cast<signed long>(g));
      ++cnt;
    }
    g += m.transition(t).update[i];
    s = m.transition(t).to;
  }
  if (cnt == 0) return std::nullopt;
  return Rational(mpq_class(sum, mpz_class(static_cast<signed long>(cnt))));
}

PathSummary rotate(const Model& m, const PathSummary& c, std::size_t p) {
  std::vector<TransId> t(c.transitions.begin() + static_cast<long>(p), c.transitions.end());
  t.insert(t.end(), c.transitions.begin(), c.transitions.begin() + static_cast<long>(p));
  const StateId start = p == 0 ? c.start : m.transition(c.transitions[p - 1]).to;
  return PathSummary::make(m, start, std::move(t));
}

bool zero_on(const IntVec& g, const std::vector<int>& idx) {
  return std::all_of(idx.begin(), idx.end(), [&](int j) { return g[j] == 0; });
}

struct StageAgg {
  explicit StageAgg(std::string n) : name(std::move(n)) {}
  std::string name;
  bool exhaustive = true;
  long long runs = 0;
  std::string note;
  void mark(bool exh, const std::string& why) {
    ++runs;
    if (!exh && exhaustive) {
      exhaustive = false;
      note = why;
    }
  }
  StageReport report() const {
    return {name, exhaustive, exhaustive ? std::to_string(runs) + " searches complete" : note};
  }
};

std::vector<StageReport> reports(const std::vector<StageAgg>& a) {
  std::vector<StageReport> out;
  for (const auto& s : a) out.push_back(s.report());
  return out;
}

// Cycle with access paths for one counter, or why none exists.
enum class St { Found, None, Unknown };
struct CounterStage {
  St st = St::None;
  bool exhaustive = true;  // for None
  std::string note;
  PathSummary cycle, in, out;
  Rational alpha;  // bounded counters: B1 average equals recurring value plus alpha
};

using StageKey = std::tuple<StateId, Mask, int, StateSet>;

}  // namespace

// ---------------------------------------------------------------------------

VerifyResult verify_witness(const Model& m, const AvgQuery& q, const Witness& w, const ZReachOptions& opt) {
  if (m.domain() != Domain::Z) throw ModelError("witness verification needs a VASS over Z");
  check_query(m, q);
  const int k = m.dimension();
  const auto K = static_cast<std::size_t>(k);
  if (w.cycle.size() != K || w.in.size() != K || w.out.size() != K)
    throw ModelError("witness needs a cycle and two access paths per counter");
  if (w.recurring_state < 0 || w.recurring_state >= m.num_states()) throw ModelError("unknown recurring state");
  if (w.recurring_values.size() != K) throw ModelError("recurring valuation has the wrong dimension");
  std::vector<int> role(k, -1);
  for (int pass = 0; pass < 2; ++pass)
    for (int j : pass == 0 ? w.partition.bounded : w.partition.unbounded) {
      if (j < 0 || j >= k || role[j] != -1) throw ModelError("witness partition is not a partition of the counters");
      role[j] = pass == 0 ? 1 : 0;
    }
  if (std::count(role.begin(), role.end(), -1) != 0) throw ModelError("witness partition misses a counter");

  const StateId s0 = w.recurring_state;
  std::vector<PathSummary> cyc(k), in(k), out(k);
  for (int i = 0; i < k; ++i) {
    in[i] = remake(m, w.in[i]);
    cyc[i] = remake(m, w.cycle[i]);
    out[i] = remake(m, w.out[i]);
    if (in[i].start != s0) throw ModelError(cname(i) + ": access path does not start at the recurring state");
    if (cyc[i].empty() || !cyc[i].is_cycle(m)) throw ModelError(cname(i) + ": witness cycle is not a nonempty cycle");
    if (cyc[i].start != in[i].end(m)) throw ModelError(cname(i) + ": access path does not end where the cycle starts");
    if (out[i].start != cyc[i].start) throw ModelError(cname(i) + ": return path does not start on the cycle");
    if (out[i].end(m) != s0) throw ModelError(cname(i) + ": return path does not end at the recurring state");
  }

  VerifyResult r;
  auto fail = [&](std::string s) { r.reasons.push_back(std::move(s)); };
  for (int i = 0; i < k; ++i) {
    if (role[i] == 0) {
      if (cyc[i].gain[i] >= 0)
        fail("U1: " + cname(i) + " cycle gain " + std::to_string(cyc[i].gain[i]) + " is not negative");
      const auto vis = cyc[i].visited_states(m);
      if (std::none_of(vis.begin(), vis.end(), [&](StateId s) { return contains(q.selecting[i], s); }))
        fail("U1: " + cname(i) + " cycle visits no selecting state");
    } else {
      Config start{in[i].end(m), add(w.recurring_values, in[i].gain)};
      auto rho = run_path(m, start, cyc[i]);
      rho.pop_back();
      const auto a = avg_over_selecting(rho, q.selecting[i], i);
      if (!a)
        fail("B1: " + cname(i) + " cycle visits no selecting state");
      else if (*a > q.thresholds[i])
        fail("B1: " + cname(i) + " average " + a->str() + " exceeds " + q.thresholds[i].str());
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (role[j] != 1) continue;
      if (cyc[i].gain[j] != 0)
        fail("BU: cycle of " + cname(i) + " has gain " + std::to_string(cyc[i].gain[j]) + " on bounded " + cname(j));
      const long long acc = in[i].gain[j] + out[i].gain[j];
      if (acc != 0)
        fail("BU: access paths of " + cname(i) + " have gain " + std::to_string(acc) + " on bounded " + cname(j));
    }

  if (w.reach) {
    const PathSummary p = remake(m, *w.reach);
    if (!is_initial(m, p.start)) {
      fail("reach: path does not start at an initial state");
    } else if (p.end(m) != s0) {
      fail("reach: path does not end at the recurring state");
    } else {
      for (int j = 0; j < k; ++j)
        if (role[j] == 1 && p.gain[j] != w.recurring_values[j])
          fail("reach: " + cname(j) + " arrives with " + std::to_string(p.gain[j]) + ", recurring value is " +
               std::to_string(w.recurring_values[j]));
    }
  } else {
    ReachQuery rq;
    rq.target = s0;
    for (int j = 0; j < k; ++j)
      rq.constraint.push_back(role[j] == 1 ? TargetConstraint::exactly(w.recurring_values[j]) : TargetConstraint::free());
    bool found = false, unknown = false;
    for (StateId q0 : m.initial()) {
      rq.source = initial_config(m, q0);
      auto res = z_reach(m, rq, opt);
      if (std::holds_alternative<Reachable>(res)) {
        found = true;
        break;
      }
      if (std::holds_alternative<ReachUnknown>(res)) unknown = true;
    }
    if (!found)
      fail(unknown ? "reach: undetermined within the ILP budget" : "reach: recurring configuration is unreachable");
  }
  r.accepted = r.reasons.empty();
  return r;
}

// ---------------------------------------------------------------------------

struct ZDecider::Impl {
  Model m;
  DecideOptions opt;
  int n = 0, k = 0;
  SccInfo info;
  std::vector<bool> live;
  int access_len = 0;
  bool access_complete = true;
  int cycle_len = 0;

  struct Comp {
    bool done = false;
    std::vector<Mask> masks;
    std::string partition_note;
    bool partition_known = true;
    std::vector<PathSummary> cycles;
    bool cycles_complete = true;
  };
  std::vector<Comp> comps;

  // Breadth-first tables over (state, gain on the bounded counters).
  struct Access {
    bool ok = false;
    long long R = 0, W = 1;
    std::vector<int> bl;
    std::vector<int> fdist, bdist;
    std::vector<std::pair<long long, TransId>> fpar, bpar;
    std::vector<long long> best_val, best_code;  // [state * |B| + t]
  };
  std::map<std::pair<StateId, Mask>, Access> access;
  std::map<StageKey, CounterStage> stages;
  std::map<std::tuple<StateId, StateId, Mask, std::vector<Rational>>, ReachResult> reach_cache;

  Impl(const Model& model, DecideOptions o) : m(model), opt(std::move(o)) {
    if (m.domain() != Domain::Z) throw ModelError("decide_avg_z needs a VASS over Z");
    n = m.num_states();
    k = m.dimension();
    if (k > 62) throw ModelError("too many counters");
    info = sccs(m);
    live = reachable_states(m, m.initial());
    const long long full = 2 * m.encoding_size();
    access_len = opt.max_access_len < 0 ? static_cast<int>(std::min<long long>(full, 1 << 20)) : opt.max_access_len;
    access_complete = access_len >= full;
    cycle_len = opt.budget.max_cycle_len < 0 ? n : opt.budget.max_cycle_len;
    comps.resize(info.components.size());
  }

  Comp& comp(int c) {
    Comp& cp = comps[c];
    if (cp.done) return cp;
    cp.done = true;
    const StateSet& C = info.components[c];
    Mask base = 0;
    auto part = bounded_partition(m, opt.budget, C);
    if (auto* p = std::get_if<CounterPartition>(&part)) {
      for (int j : p->bounded) base |= 1ULL << j;
    } else {
      cp.partition_known = false;
      cp.partition_note = std::get<PartitionUnknown>(part).diagnostic;
    }
    for (Mask b = 0; b < (1ULL << k); ++b)
      if ((b & base) == base) cp.masks.push_back(b);
    cp.cycles = simple_cycles(m, C, cycle_len);
    cp.cycles_complete = cycle_len >= static_cast<int>(C.size());
    return cp;
  }

  Access& get_access(StateId s0, Mask b) {
    auto key = std::make_pair(s0, b);
    auto it = access.find(key);
    if (it != access.end()) return it->second;
    Access& a = access[key];
    a.bl = mask_list(b, k);
    const int nb = static_cast<int>(a.bl.size());
    a.R = static_cast<long long>(access_len) * m.max_abs_update();
    a.W = 2 * a.R + 1;
    long double space = n;
    for (int t = 0; t < nb; ++t) space *= static_cast<long double>(a.W);
    if (space > static_cast<long double>(opt.dp_node_budget)) return a;
    a.ok = true;
    const long long size = static_cast<long long>(space);
    const int c = info.component_of[s0];
    auto inside = [&](const Transition& tr) {
      return info.component_of[tr.from] == c && info.component_of[tr.to] == c;
    };
    auto shift = [&](long long code, const IntVec& u, int sign) -> long long {
      long long s = code % n, rest = code / n, mul = 1, out = 0;
      for (int t = 0; t < nb; ++t) {
        long long g = rest % a.W - a.R + sign * u[a.bl[t]];
        rest /= a.W;
        if (g < -a.R || g > a.R) return -1;
        out += (g + a.R) * mul;
        mul *= a.W;
      }
      (void)s;
      return out;
    };
    long long zero = 0;
    {
      long long mul = 1;
      for (int t = 0; t < nb; ++t) {
        zero += a.R * mul;
        mul *= a.W;
      }
    }
    const long long origin = s0 + static_cast<long long>(n) * zero;

    auto bfs = [&](bool forward, std::vector<int>& dist, std::vector<std::pair<long long, TransId>>& par) {
      dist.assign(size, -1);
      par.assign(size, {-1, -1});
      std::deque<long long> queue{origin};
      dist[origin] = 0;
      while (!queue.empty()) {
        const long long cur = queue.front();
        queue.pop_front();
        if (dist[cur] >= access_len) continue;
        const StateId s = static_cast<StateId>(cur % n);
        for (TransId e : forward ? m.outgoing(s) : m.incoming(s)) {
          const auto& tr = m.transition(e);
          if (!inside(tr)) continue;
          const long long g = shift(cur / n, tr.update, 1);
          if (g < 0) continue;
          const long long nxt = (forward ? tr.to : tr.from) + static_cast<long long>(n) * g;
          if (dist[nxt] >= 0) continue;
          dist[nxt] = dist[cur] + 1;
          par[nxt] = {cur, e};
          queue.push_back(nxt);
        }
      }
    };
    bfs(true, a.fdist, a.fpar);
    bfs(false, a.bdist, a.bpar);

    a.best_val.assign(static_cast<std::size_t>(n) * std::max(nb, 1), 0);
    a.best_code.assign(a.best_val.size(), -1);
    for (long long code = 0; code < size; ++code) {
      if (a.fdist[code] < 0) continue;
      // The return path must cancel the access gain on every bounded counter.
      long long rest = code / n, mul = 1, neg = 0;
      std::vector<long long> g(nb);
      for (int t = 0; t < nb; ++t) {
        g[t] = rest % a.W - a.R;
        rest /= a.W;
        neg += (-g[t] + a.R) * mul;
        mul *= a.W;
      }
      const long long back = code % n + static_cast<long long>(n) * neg;
      if (a.bdist[back] < 0) continue;
      const StateId s = static_cast<StateId>(code % n);
      for (int t = 0; t < nb; ++t) {
        const std::size_t slot = static_cast<std::size_t>(s) * nb + t;
        if (a.best_code[slot] < 0 || g[t] < a.best_val[slot]) {
          a.best_val[slot] = g[t];
          a.best_code[slot] = code;
        }
      }
    }
    return a;
  }

  PathSummary forward_path(const Access& a, long long code) const {
    std::vector<TransId> rev;
    long long cur = code;
    while (a.fpar[cur].first >= 0) {
      rev.push_back(a.fpar[cur].second);
      cur = a.fpar[cur].first;
    }
    std::reverse(rev.begin(), rev.end());
    return PathSummary::make(m, static_cast<StateId>(cur % n), std::move(rev));
  }

  PathSummary backward_path(const Access& a, long long code) const {
    std::vector<TransId> seq;
    const StateId start = static_cast<StateId>(code % n);
    long long cur = code;
    while (a.bpar[cur].first >= 0) {
      seq.push_back(a.bpar[cur].second);
      cur = a.bpar[cur].first;
    }
    return PathSummary::make(m, start, std::move(seq));
  }

  long long negate_code(const Access& a, long long code) const {
    const int nb = static_cast<int>(a.bl.size());
    long long rest = code / n, mul = 1, neg = 0;
    for (int t = 0; t < nb; ++t) {
      neg += (-(rest % a.W - a.R) + a.R) * mul;
      rest /= a.W;
      mul *= a.W;
    }
    return code % n + static_cast<long long>(n) * neg;
  }

  const CounterStage& stage(StateId s0, Mask b, int i, const StateSet& Si) {
    StageKey key{s0, b, i, Si};
    auto it = stages.find(key);
    if (it != stages.end()) return it->second;
    CounterStage cs;
    const int c = info.component_of[s0];
    const StateSet& C = info.components[c];
    const auto bl = mask_list(b, k);
    if (!in_mask(b, i)) {
      CycleQuery cq;
      cq.zero_set = bl;
      cq.negative_index = i;
      cq.require = {Si};
      cq.anchor = s0;
      cq.within = C;
      auto r = cycle_feasibility(m, cq, opt.budget);
      if (auto* f = std::get_if<CycleFound>(&r)) {
        cs.st = St::Found;
        cs.cycle = f->cycle;
        cs.in = cs.out = empty_at(m, s0);
      } else {
        const auto& nf = std::get<CycleNotFound>(r);
        cs.st = St::None;
        cs.exhaustive = nf.exhaustive;
        cs.note = nf.note;
      }
      return stages.emplace(key, std::move(cs)).first->second;
    }
    Comp& cp = comp(c);
    Access& a = get_access(s0, b);
    if (!a.ok) {
      cs.st = St::Unknown;
      cs.note = "access-path search space exceeds the node budget";
      return stages.emplace(key, std::move(cs)).first->second;
    }
    const int nb = static_cast<int>(bl.size());
    const int t = static_cast<int>(std::find(bl.begin(), bl.end(), i) - bl.begin());
    bool have = false;
    Rational best;
    long long best_code = -1;
    const PathSummary* best_cycle = nullptr;
    std::size_t best_rot = 0;
    for (const auto& cyc : cp.cycles) {
      if (!zero_on(cyc.gain, bl)) continue;
      const auto vis = cyc.visited_states(m);
      for (std::size_t p = 0; p < cyc.length(); ++p) {
        const StateId q = vis[p];
        const std::size_t slot = static_cast<std::size_t>(q) * nb + t;
        if (a.best_code[slot] < 0) continue;
        const auto beta = cycle_offset(m, rotate(m, cyc, p), Si, i);
        if (!beta) break;  // no selecting state on this cycle at all
        const Rational alpha = Rational(a.best_val[slot]) + *beta;
        if (!have || alpha < best) {
          have = true;
          best = alpha;
          best_code = a.best_code[slot];
          best_cycle = &cyc;
          best_rot = p;
        }
      }
    }
    if (!have) {
      cs.st = St::None;
      cs.exhaustive = cp.cycles_complete && access_complete;
      cs.note = cs.exhaustive ? "no zero-gain cycle with selecting state and access paths"
                              : "cycle or access-path length bound below the complete value";
    } else {
      cs.st = St::Found;
      cs.alpha = best;
      cs.cycle = rotate(m, *best_cycle, best_rot);
      cs.in = forward_path(a, best_code);
      cs.out = backward_path(a, negate_code(a, best_code));
    }
    return stages.emplace(key, std::move(cs)).first->second;
  }

  const ReachResult& reach(StateId q0, StateId s0, Mask b, const std::vector<Rational>& bound) {
    auto key = std::make_tuple(q0, s0, b, bound);
    auto it = reach_cache.find(key);
    if (it != reach_cache.end()) return it->second;
    ReachQuery rq;
    rq.source = initial_config(m, q0);
    rq.target = s0;
    std::size_t t = 0;
    for (int j = 0; j < k; ++j)
      rq.constraint.push_back(in_mask(b, j) ? TargetConstraint::at_most(bound[t++]) : TargetConstraint::free());
    ZReachOptions zo;
    zo.ilp_nodes = opt.budget.ilp_nodes;
    return reach_cache.emplace(key, z_reach(m, rq, zo)).first->second;
  }

  Verdict decide(const AvgQuery& q) {
    check_query(m, q);
    for (int i = 0; i < k; ++i)
      if (q.selecting[i].empty())
        return VerdictNo{true, {{"selecting", true, cname(i) + " has no selecting state, so the average is undefined"}}};
    std::vector<StageAgg> agg{StageAgg("partition"), StageAgg("cycles"), StageAgg("access"), StageAgg("reach")};
    for (StateId s0 = 0; s0 < n; ++s0) {
      const int c = info.component_of[s0];
      if (!live[s0] || !info.nontrivial(m, c)) continue;
      Comp& cp = comp(c);
      agg[0].mark(cp.partition_known, "bounded partition unknown; every counter subset tried: " + cp.partition_note);
      for (Mask b : cp.masks) {
        bool dead = false, unsure = false;
        std::vector<const CounterStage*> st(k);
        for (int i = 0; i < k && !dead; ++i) {
          st[i] = &stage(s0, b, i, q.selecting[i]);
          if (st[i]->st == St::None && st[i]->exhaustive) dead = true;
          if (st[i]->st == St::Unknown || (st[i]->st == St::None && !st[i]->exhaustive)) {
            unsure = true;
            agg[in_mask(b, i) ? 2 : 1].mark(false, cname(i) + ": " + st[i]->note);
          }
        }
        if (dead) {
          agg[1].mark(true, "");
          continue;
        }
        if (unsure) continue;
        std::vector<Rational> bound;
        for (int j : mask_list(b, k)) bound.push_back(q.thresholds[j] - st[j]->alpha);
        for (StateId q0 : m.initial()) {
          const ReachResult& r = reach(q0, s0, b, bound);
          if (const auto* u = std::get_if<ReachUnknown>(&r)) {
            agg[3].mark(false, u->diagnostic);
            continue;
          }
          if (const auto* un = std::get_if<Unreachable>(&r)) {
            agg[3].mark(un->exhaustive, un->note);
            continue;
          }
          const auto& hit = std::get<Reachable>(r);
          Witness w;
          w.recurring_state = s0;
          w.recurring_values = hit.path.gain;
          w.partition.bounded = mask_list(b, k);
          w.partition.unbounded = complement_list(b, k);
          for (int i = 0; i < k; ++i) {
            w.cycle.push_back(st[i]->cycle);
            w.in.push_back(st[i]->in);
            w.out.push_back(st[i]->out);
          }
          w.reach = hit.path;
          auto v = verify_witness(m, q, w);
          if (!v.accepted) {
            std::string why;
            for (const auto& s : v.reasons) why += s + "; ";
            throw std::logic_error("assembled witness rejected: " + why);
          }
          return ZYes{std::move(w)};
        }
      }
    }
    const bool exhaustive = std::all_of(agg.begin(), agg.end(), [](const StageAgg& a) { return a.exhaustive; });
    if (exhaustive) return VerdictNo{true, reports(agg)};
    std::string why;
    for (const auto& a : agg)
      if (!a.exhaustive) why += (why.empty() ? "" : "; ") + a.name + ": " + a.note;
    return VerdictUnknown{why, reports(agg)};
  }
};

ZDecider::ZDecider(const Model& m, DecideOptions opt) : impl_(std::make_unique<Impl>(m, std::move(opt))) {}
ZDecider::~ZDecider() = default;
Verdict ZDecider::decide(const AvgQuery& q) { return impl_->decide(q); }

Verdict decide_avg_z(const Model& m, const AvgQuery& q, const DecideOptions& opt) {
  return ZDecider(m, opt).decide(q);
}

// ---------------------------------------------------------------------------

bool oracle_guard(const Model& m, std::string* why) {
  std::string r;
  if (m.num_states() > 4) r = "more than 4 states";
  else if (m.dimension() > 2) r = "more than 2 counters";
  else if (m.num_transitions() > 6) r = "more than 6 transitions";
  if (why) *why = r;
  return r.empty();
}

struct BruteForceZ::Impl {
  Model m;
  OracleBounds b;
  int n = 0, k = 0;
  std::vector<std::vector<PathSummary>> closed;      // closed walks per start state
  std::vector<std::vector<PathSummary>> paths_from;  // all paths per start state, including the empty one
  std::vector<Config> nodes;                          // explored configurations, BFS order
  std::vector<std::pair<int, TransId>> parent;
  std::map<StageKey, CounterStage> stages;

  Impl(const Model& model, OracleBounds bounds) : m(model), b(bounds) {
    if (m.domain() != Domain::Z) throw ModelError("brute_force_avg_z needs a VASS over Z");
    std::string why;
    if (!oracle_guard(m, &why)) throw ModelError("instance exceeds the brute-force guard: " + why);
    n = m.num_states();
    k = m.dimension();
    const int walk = b.walk_len < 0 ? std::min(2 * n + 2, 6) : b.walk_len;
    const int acc = b.access_len < 0 ? std::min(2 * n + 2, 6) : b.access_len;
    closed.resize(n);
    paths_from.resize(n);
    for (StateId s = 0; s < n; ++s) {
      std::vector<TransId> cur;
      std::function<void(StateId, int)> dfs = [&](StateId at, int limit) {
        if (static_cast<int>(cur.size()) >= limit) return;
        for (TransId t : m.outgoing(at)) {
          cur.push_back(t);
          dfs(m.transition(t).to, limit);
          cur.pop_back();
        }
      };
      // Walks and paths are enumerated by the same DFS with different filters.
      std::function<void(StateId, int, bool)> collect = [&](StateId at, int limit, bool cycles) {
        if (cycles) {
          if (!cur.empty() && at == s) closed[s].push_back(PathSummary::make(m, s, cur));
        } else {
          paths_from[s].push_back(PathSummary::make(m, s, cur));
        }
        if (static_cast<int>(cur.size()) >= limit) return;
        for (TransId t : m.outgoing(at)) {
          cur.push_back(t);
          collect(m.transition(t).to, limit, cycles);
          cur.pop_back();
        }
      };
      collect(s, walk, true);
      collect(s, acc, false);
      (void)dfs;
    }
    // Configuration BFS from the initial configurations.
    std::map<std::pair<StateId, IntVec>, int> seen;
    std::vector<int> depth;
    for (StateId q0 : m.initial()) {
      Config c = initial_config(m, q0);
      if (seen.emplace(std::make_pair(c.state, c.counters), static_cast<int>(nodes.size())).second) {
        nodes.push_back(c);
        parent.push_back({-1, -1});
        depth.push_back(0);
      }
    }
    for (std::size_t h = 0; h < nodes.size(); ++h) {
      if (depth[h] >= b.reach_depth) continue;
      const Config cur = nodes[h];
      for (TransId t : m.outgoing(cur.state)) {
        Config nx = *step(m, cur, t);
        if (std::any_of(nx.counters.begin(), nx.counters.end(),
                        [&](long long v) { return v < -b.reach_box || v > b.reach_box; }))
          continue;
        if (!seen.emplace(std::make_pair(nx.state, nx.counters), static_cast<int>(nodes.size())).second) continue;
        nodes.push_back(nx);
        parent.push_back({static_cast<int>(h), t});
        depth.push_back(depth[h] + 1);
      }
    }
  }

  PathSummary reach_path(int h) const {
    std::vector<TransId> rev;
    while (parent[h].first >= 0) {
      rev.push_back(parent[h].second);
      h = parent[h].first;
    }
    std::reverse(rev.begin(), rev.end());
    return PathSummary::make(m, nodes[h].state, std::move(rev));
  }

  // Closed walk at s0: zero on the bounded counters, negative on i, through S_i.
  CounterStage unbounded_stage(StateId s0, const std::vector<int>& bl, int i, const StateSet& Si) {
    CounterStage cs;
    using Key = std::tuple<StateId, IntVec, long long, bool>;
    std::map<Key, int> seen;
    std::vector<Key> keys;
    std::vector<std::pair<int, TransId>> par;
    std::vector<int> depth;
    Key start{s0, IntVec(bl.size(), 0), 0, contains(Si, s0)};
    seen[start] = 0;
    keys.push_back(start);
    par.push_back({-1, -1});
    depth.push_back(0);
    for (std::size_t h = 0; h < keys.size(); ++h) {
      if (depth[h] >= b.cycle_depth) continue;
      const auto [s, gb, gi, vis] = keys[h];
      for (TransId t : m.outgoing(s)) {
        const auto& tr = m.transition(t);
        IntVec ng = gb;
        bool out_of_box = false;
        for (std::size_t x = 0; x < bl.size(); ++x) {
          ng[x] += tr.update[bl[x]];
          out_of_box = out_of_box || ng[x] < -b.box || ng[x] > b.box;
        }
        const long long ni = gi + tr.update[i];
        if (out_of_box || ni < -b.box || ni > b.box) continue;
        const bool nvis = vis || contains(Si, tr.to);
        if (tr.to == s0 && nvis && ni < 0 && std::all_of(ng.begin(), ng.end(), [](long long v) { return v == 0; })) {
          std::vector<TransId> rev{t};
          for (int p = static_cast<int>(h); par[p].first >= 0; p = par[p].first) rev.push_back(par[p].second);
          std::reverse(rev.begin(), rev.end());
          cs.st = St::Found;
          cs.cycle = PathSummary::make(m, s0, std::move(rev));
          cs.in = cs.out = empty_at(m, s0);
          return cs;
        }
        Key nk{tr.to, ng, ni, nvis};
        if (seen.count(nk)) continue;
        seen[nk] = static_cast<int>(keys.size());
        keys.push_back(nk);
        par.push_back({static_cast<int>(h), t});
        depth.push_back(depth[h] + 1);
      }
    }
    cs.st = St::None;
    return cs;
  }

  CounterStage bounded_stage(StateId s0, const std::vector<int>& bl, int i, const StateSet& Si) {
    CounterStage cs;
    bool have = false;
    for (StateId s = 0; s < n; ++s) {
      // Best closed walk at s.
      const PathSummary* walk = nullptr;
      Rational beta;
      for (const auto& w : closed[s]) {
        if (!zero_on(w.gain, bl)) continue;
        auto o = cycle_offset(m, w, Si, i);
        if (o && (!walk || *o < beta)) {
          walk = &w;
          beta = *o;
        }
      }
      if (!walk) continue;
      for (const auto& pin : paths_from[s0]) {
        if (pin.end(m) != s) continue;
        for (const auto& pout : paths_from[s]) {
          if (pout.end(m) != s0 || !zero_on(add(pin.gain, pout.gain), bl)) continue;
          const Rational alpha = Rational(pin.gain[i]) + beta;
          if (!have || alpha < cs.alpha) {
            have = true;
            cs.alpha = alpha;
            cs.cycle = *walk;
            cs.in = pin;
            cs.out = pout;
          }
        }
      }
    }
    cs.st = have ? St::Found : St::None;
    return cs;
  }

  const CounterStage& stage(StateId s0, Mask bm, int i, const StateSet& Si) {
    StageKey key{s0, bm, i, Si};
    auto it = stages.find(key);
    if (it != stages.end()) return it->second;
    const auto bl = mask_list(bm, k);
    CounterStage cs = in_mask(bm, i) ? bounded_stage(s0, bl, i, Si) : unbounded_stage(s0, bl, i, Si);
    return stages.emplace(key, std::move(cs)).first->second;
  }

  Verdict decide(const AvgQuery& q) {
    check_query(m, q);
    for (int i = 0; i < k; ++i)
      if (q.selecting[i].empty())
        return VerdictNo{true, {{"selecting", true, cname(i) + " has no selecting state, so the average is undefined"}}};
    for (StateId s0 = 0; s0 < n; ++s0) {
      for (Mask bm = 0; bm < (1ULL << k); ++bm) {
        std::vector<const CounterStage*> st(k);
        bool dead = false;
        for (int i = 0; i < k && !dead; ++i) {
          st[i] = &stage(s0, bm, i, q.selecting[i]);
          dead = st[i]->st != St::Found;
        }
        if (dead) continue;
        for (std::size_t h = 0; h < nodes.size(); ++h) {
          if (nodes[h].state != s0) continue;
          bool fits = true;
          for (int j : mask_list(bm, k))
            fits = fits && Rational(nodes[h].counters[j]) + st[j]->alpha <= q.thresholds[j];
          if (!fits) continue;
          Witness w;
          w.recurring_state = s0;
          w.recurring_values = nodes[h].counters;
          w.partition.bounded = mask_list(bm, k);
          w.partition.unbounded = complement_list(bm, k);
          for (int i = 0; i < k; ++i) {
            w.cycle.push_back(st[i]->cycle);
            w.in.push_back(st[i]->in);
            w.out.push_back(st[i]->out);
          }
          w.reach = reach_path(static_cast<int>(h));
          auto v = verify_witness(m, q, w);
          if (!v.accepted) throw std::logic_error("oracle witness rejected: " + v.reasons.front());
          return ZYes{std::move(w)};
        }
      }
    }
    const std::string bounds = "box " + std::to_string(b.box) + ", cycle depth " + std::to_string(b.cycle_depth) +
                               ", reach depth " + std::to_string(b.reach_depth) + ", reach box " +
                               std::to_string(b.reach_box);
    return VerdictNo{true, {{"bounded search", true, "no witness within " + bounds}}};
  }
};

BruteForceZ::BruteForceZ(const Model& m, OracleBounds b) : impl_(std::make_unique<Impl>(m, b)) {}
BruteForceZ::~BruteForceZ() = default;
Verdict BruteForceZ::decide(const AvgQuery& q) { return impl_->decide(q); }

Verdict brute_force_avg_z(const Model& m, const AvgQuery& q, const OracleBounds& b) {
  return BruteForceZ(m, b).decide(q);
}

// ---------------------------------------------------------------------------

namespace {

long long ceil_nonneg(const Rational& lambda) {
  const long long c = to_int64(lambda.ceil());
  return std::max(0LL, c);
}

void check_n1(const Model& m, const StateSet& S) {
  if (m.dimension() != 1)
    throw ModelError("the average problem over N is only decidable for one counter; multi-dimensional is undecidable");
  if (m.domain() != Domain::N) throw ModelError("one-counter average needs a VASS over N");
  for (StateId s : S)
    if (s < 0 || s >= m.num_states()) throw ModelError("selecting set refers to an unknown state");
}

// Bellman-Ford over node weights; returns a cycle (in edge order) whose weight is negative.
std::optional<std::vector<int>> negative_cycle(int N, const std::vector<std::vector<int>>& adj,
                                               const std::vector<long long>& w) {
  std::vector<long long> dist(N, 0);
  std::vector<int> pred(N, -1);
  int touched = -1;
  for (int round = 0; round <= N; ++round) {
    touched = -1;
    for (int u = 0; u < N; ++u)
      for (int v : adj[u])
        if (dist[u] + w[u] < dist[v]) {
          dist[v] = dist[u] + w[u];
          pred[v] = u;
          touched = v;
        }
    if (touched < 0) return std::nullopt;
  }
  int v = touched;
  for (int i = 0; i < N; ++i) v = pred[v];
  std::vector<int> cyc{v};
  for (int u = pred[v]; u != v; u = pred[u]) cyc.push_back(u);
  std::reverse(cyc.begin(), cyc.end());
  return cyc;
}

// Shortest-hop closed walk with total weight <= 0, up to max_len edges.
std::optional<std::vector<int>> short_nonpositive_cycle(int N, const std::vector<std::vector<int>>& adj,
                                                        const std::vector<long long>& w, long long max_len) {
  constexpr long long inf = std::numeric_limits<long long>::max() / 4;
  for (int u = 0; u < N; ++u) {
    std::vector<std::vector<long long>> best{std::vector<long long>(N, inf)};
    std::vector<std::vector<int>> par{std::vector<int>(N, -1)};
    best[0][u] = 0;
    for (long long l = 1; l <= max_len; ++l) {
      std::vector<long long> nb(N, inf);
      std::vector<int> np(N, -1);
      for (int x = 0; x < N; ++x) {
        if (best.back()[x] >= inf) continue;
        for (int y : adj[x])
          if (best.back()[x] + w[x] < nb[y]) {
            nb[y] = best.back()[x] + w[x];
            np[y] = x;
          }
      }
      best.push_back(std::move(nb));
      par.push_back(std::move(np));
      if (best.back()[u] <= 0) {
        std::vector<int> cyc;
        int cur = u;
        for (long long j = l; j > 0; --j) {
          cur = par[j][cur];
          cyc.push_back(cur);
        }
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

long long n1_value_bound(const Model& m, const Rational& lambda) {
  const long long c = ceil_nonneg(lambda) + 1;
  return c * c * m.num_states();
}

long long n1_count_bound(const StateSet& S, const Rational& lambda) {
  const long long c = ceil_nonneg(lambda) + 2;
  return 2 * static_cast<long long>(S.size()) * c * c;
}

VerifyResult verify_n1_witness(const Model& m, const StateSet& S, const Rational& lambda, const N1Witness& w,
                               bool check_bounds) {
  check_n1(m, S);
  VerifyResult r;
  auto fail = [&](std::string s) { r.reasons.push_back(std::move(s)); };
  const std::size_t cnt = w.selecting.size();
  if (cnt == 0) {
    fail("no selecting configuration");
    return r;
  }
  if (w.segments.size() != cnt) throw ModelError("witness needs one segment per selecting configuration");
  mpz_class sum = 0;
  long long maxx = 0;
  for (const auto& c : w.selecting) {
    if (c.counters.size() != 1) throw ModelError("selecting configuration has the wrong dimension");
    if (!contains(S, c.state)) fail("configuration at state '" + m.state_name(c.state) + "' is not selecting");
    if (c.counters[0] < 0) fail("negative selecting value");
    sum += mpz_class(static_cast<signed long>(c.counters[0]));
    maxx = std::max(maxx, c.counters[0]);
  }
  // Runs p from `from`; reports disabled steps and, when asked, intermediate selecting states.
  auto run = [&](const std::string& what, Config from, const PathSummary& p, bool avoid) -> std::optional<Config> {
    if (p.start != from.state) throw ModelError(what + " does not start at its configuration");
    for (std::size_t j = 0; j < p.transitions.size(); ++j) {
      auto nx = step(m, from, p.transitions[j]);
      if (!nx) {
        fail(what + ": counter would go negative at step " + std::to_string(j + 1));
        return std::nullopt;
      }
      from = *nx;
      if (avoid && j + 1 < p.transitions.size() && contains(S, from.state))
        fail(what + ": visits a selecting state before its end");
    }
    return from;
  };
  if (!is_initial(m, w.stem.start)) {
    fail("stem does not start at an initial state");
  } else if (auto e = run("stem", initial_config(m, w.stem.start), w.stem, false); e && !(*e == w.selecting[0])) {
    fail("stem does not reach the first selecting configuration");
  }
  for (std::size_t j = 0; j < cnt; ++j) {
    const std::string what = "segment " + std::to_string(j + 1);
    if (w.segments[j].empty()) {
      fail(what + " is empty");
      continue;
    }
    auto e = run(what, w.selecting[j], w.segments[j], true);
    if (e && !(*e == w.selecting[(j + 1) % cnt])) fail(what + " does not reach the next selecting configuration");
  }
  const Rational mean(mpq_class(sum, mpz_class(static_cast<signed long>(cnt))));
  if (mean > lambda) fail("mean selecting value " + mean.str() + " exceeds " + lambda.str());
  if (check_bounds) {
    if (static_cast<long long>(cnt) > n1_count_bound(S, lambda)) fail("more selecting configurations than the bound");
    if (maxx > n1_value_bound(m, lambda)) fail("selecting value above the bound");
  }
  r.accepted = r.reasons.empty();
  return r;
}

N1Verdict decide_avg_n1(const Model& m, const StateSet& S, const Rational& lambda, const N1Options& opt) {
  check_n1(m, S);
  if (lambda.sign() < 0) return VerdictNo{true, {{"threshold", true, "negative threshold; counter values are nonnegative"}}};
  if (S.empty()) return VerdictNo{true, {{"selecting", true, "no selecting state"}}};
  const int n = m.num_states();
  const long long X = n1_value_bound(m, lambda);
  const long long cap = opt.cap.value_or(X + static_cast<long long>(n) * n * (1 + m.max_abs_update()));
  if (cap < X) throw ModelError("counter cap below the selecting-value bound");
  std::vector<int> sidx(n, -1);
  for (std::size_t j = 0; j < S.size(); ++j) sidx[S[j]] = static_cast<int>(j);
  const long long width = X + 1;
  const int N = static_cast<int>(static_cast<long long>(S.size()) * width);
  auto node = [&](StateId s, long long x) { return static_cast<int>(sidx[s] * width + x); };
  auto config = [&](int u) { return Config{S[u / width], {u % width}}; };

  // Compressed edges: selecting configuration to the next one, avoiding S in between.
  bool clipped = false;
  std::vector<std::vector<int>> adj(N);
  const long long cw = cap + 1;
  std::vector<int> mark(static_cast<std::size_t>(n) * cw, -1);
  for (int u = 0; u < N; ++u) {
    const Config cu = config(u);
    std::deque<std::pair<StateId, long long>> queue{{cu.state, cu.counters[0]}};
    std::set<int> targets;
    while (!queue.empty()) {
      auto [s, v] = queue.front();
      queue.pop_front();
      for (TransId t : m.outgoing(s)) {
        const auto& tr = m.transition(t);
        const long long nv = v + tr.update[0];
        if (nv < 0) continue;
        if (nv > cap) {
          clipped = true;
          continue;
        }
        if (sidx[tr.to] >= 0) {
          if (nv <= X) targets.insert(node(tr.to, nv));
          continue;
        }
        int& seen = mark[static_cast<std::size_t>(tr.to) * cw + nv];
        if (seen == u) continue;
        seen = u;
        queue.emplace_back(tr.to, nv);
      }
    }
    adj[u].assign(targets.begin(), targets.end());
  }

  // Selecting configurations reachable from an initial configuration.
  std::vector<char> live(N, 0);
  std::vector<int> live_from(N, -1);
  for (StateId q0 : m.initial()) {
    std::vector<char> seen(static_cast<std::size_t>(n) * cw, 0);
    std::deque<std::pair<StateId, long long>> queue{{q0, 0}};
    seen[static_cast<std::size_t>(q0) * cw] = 1;
    while (!queue.empty()) {
      auto [s, v] = queue.front();
      queue.pop_front();
      if (sidx[s] >= 0 && v <= X && !live[node(s, v)]) {
        live[node(s, v)] = 1;
        live_from[node(s, v)] = q0;
      }
      for (TransId t : m.outgoing(s)) {
        const long long nv = v + m.transition(t).update[0];
        if (nv < 0) continue;
        if (nv > cap) {
          clipped = true;
          continue;
        }
        char& sn = seen[static_cast<std::size_t>(m.transition(t).to) * cw + nv];
        if (sn) continue;
        sn = 1;
        queue.emplace_back(m.transition(t).to, nv);
      }
    }
  }
  std::vector<std::vector<int>> ladj(N);
  int live_count = 0;
  for (int u = 0; u < N; ++u) {
    if (!live[u]) continue;
    ++live_count;
    for (int v : adj[u])
      if (live[v]) ladj[u].push_back(v);
  }
  const std::string detail = "selecting values up to " + std::to_string(X) + ", intermediate values up to " +
                             std::to_string(cap) + (clipped ? " (cap reached)" : "");

  // A cycle of total weight <= 0 under den*x - num; scaled so it becomes strictly negative.
  const long long num = to_int64(lambda.numerator()), den = to_int64(lambda.denominator());
  std::vector<long long> w(N), ws(N);
  for (int u = 0; u < N; ++u) {
    w[u] = den * (u % width) - num;
    ws[u] = (static_cast<long long>(live_count) + 1) * w[u] - 1;
  }
  auto cyc = negative_cycle(N, ladj, ws);
  if (!cyc) return VerdictNo{true, {{"selecting-configuration graph", true, detail}}};
  const long long bound = n1_count_bound(S, lambda);
  if (static_cast<long long>(cyc->size()) > bound) {
    cyc = short_nonpositive_cycle(N, ladj, w, bound);
    if (!cyc) throw std::logic_error("no nonpositive cycle within the count bound although one exists");
  }

  N1Witness wit;
  for (int u : *cyc) wit.selecting.push_back(config(u));
  const int first = cyc->front();
  const StateId q0 = live_from[first];
  const Config start = initial_config(m, q0);
  if (start == wit.selecting[0]) {
    wit.stem = empty_at(m, q0);
  } else {
    ReachQuery rq{start, wit.selecting[0].state, {TargetConstraint::exactly(wit.selecting[0].counters[0])}, {}, cap};
    auto r = n1_reach_avoid(m, rq);
    if (!std::holds_alternative<Reachable>(r)) throw std::logic_error("stem lost between searches");
    wit.stem = std::get<Reachable>(r).path;
  }
  for (std::size_t j = 0; j < wit.selecting.size(); ++j) {
    const Config& a = wit.selecting[j];
    const Config& b = wit.selecting[(j + 1) % wit.selecting.size()];
    ReachQuery rq{a, b.state, {TargetConstraint::exactly(b.counters[0])}, S, cap};
    auto r = n1_reach_avoid(m, rq);
    if (!std::holds_alternative<Reachable>(r)) throw std::logic_error("segment lost between searches");
    wit.segments.push_back(std::get<Reachable>(r).path);
  }
  auto v = verify_n1_witness(m, S, lambda, wit, true);
  if (!v.accepted) throw std::logic_error("assembled lasso rejected: " + v.reasons.front());
  return N1Yes{std::move(wit)};
}

N1Verdict brute_force_n1(const Model& m, const StateSet& S, const Rational& lambda, const N1OracleBounds& b) {
  check_n1(m, S);
  if (m.num_states() > 4) throw ModelError("instance exceeds the brute-force guard: more than 4 states");
  if (lambda.sign() < 0) return VerdictNo{true, {{"threshold", true, "negative threshold"}}};
  if (S.empty()) return VerdictNo{true, {{"selecting", true, "no selecting state"}}};
  const int n = m.num_states();
  const long long V = b.value_cap >= 0 ? b.value_cap
                                       : n1_value_bound(m, lambda) + 2LL * n * n * std::max(1LL, m.max_abs_update()) + 2;
  const long long width = V + 1;
  const int N = static_cast<int>(n * width);
  auto id = [&](StateId s, long long x) { return static_cast<int>(s * width + x); };

  std::vector<int> par(N, -2);
  std::vector<TransId> via(N, -1);
  std::deque<int> queue;
  for (StateId q0 : m.initial())
    if (par[id(q0, 0)] == -2) {
      par[id(q0, 0)] = -1;
      queue.push_back(id(q0, 0));
    }
  std::vector<std::vector<int>> adj(N);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    const StateId s = static_cast<StateId>(u / width);
    const long long x = u % width;
    for (TransId t : m.outgoing(s)) {
      const long long nx = x + m.transition(t).update[0];
      if (nx < 0 || nx > V) continue;
      const int v = id(m.transition(t).to, nx);
      adj[u].push_back(v);
      if (par[v] != -2) continue;
      par[v] = u;
      via[v] = t;
      queue.push_back(v);
    }
  }
  int reach_count = 0;
  for (int u = 0; u < N; ++u) reach_count += par[u] != -2;
  const long long num = to_int64(lambda.numerator()), den = to_int64(lambda.denominator());
  std::vector<long long> w(N, 0);
  for (int u = 0; u < N; ++u)
    if (contains(S, static_cast<StateId>(u / width)))
      w[u] = (static_cast<long long>(reach_count) + 1) * (den * (u % width) - num) - 1;
  auto cyc = negative_cycle(N, adj, w);
  if (!cyc) return VerdictNo{true, {{"configuration graph", true, "values up to " + std::to_string(V)}}};

  // Rotate to the first selecting configuration, then cut at selecting configurations.
  auto& c = *cyc;
  auto sel = [&](int u) { return contains(S, static_cast<StateId>(u / width)); };
  std::rotate(c.begin(), std::find_if(c.begin(), c.end(), sel), c.end());
  auto trans_between = [&](int u, int v) {
    for (TransId t : m.outgoing(static_cast<StateId>(u / width)))
      if (id(m.transition(t).to, u % width + m.transition(t).update[0]) == v && m.transition(t).to == v / width)
        return t;
    throw std::logic_error("configuration edge without transition");
  };
  N1Witness wit;
  std::vector<TransId> seg;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const int u = c[j], v = c[(j + 1) % c.size()];
    if (sel(u)) {
      if (!wit.selecting.empty()) wit.segments.push_back(PathSummary::make(m, wit.selecting.back().state, seg));
      wit.selecting.push_back(Config{static_cast<StateId>(u / width), {u % width}});
      seg.clear();
    }
    seg.push_back(trans_between(u, v));
  }
  wit.segments.push_back(PathSummary::make(m, wit.selecting.back().state, seg));
  std::vector<TransId> rev;
  int u = c.front();
  for (; par[u] >= 0; u = par[u]) rev.push_back(via[u]);
  std::reverse(rev.begin(), rev.end());
  wit.stem = PathSummary::make(m, static_cast<StateId>(u / width), std::move(rev));
  auto v = verify_n1_witness(m, S, lambda, wit, false);
  if (!v.accepted) throw std::logic_error("oracle lasso rejected: " + v.reasons.front());
  return N1Yes{std::move(wit)};
}

// ---------------------------------------------------------------------------

DualCoverReduction reduce_dual_coverability(const Model& m, StateId s, StateId t, const IntVec& target) {
  if (m.domain() != Domain::Z) throw ModelError("dual coverability reduction needs a VASS over Z");
  if (s < 0 || s >= m.num_states() || t < 0 || t >= m.num_states()) throw ModelError("unknown source or target state");
  const int k = m.dimension();
  if (static_cast<int>(target.size()) != k) throw ModelError("target vector has the wrong dimension");
  std::vector<std::string> names = m.state_names();
  std::string fresh = "t*";
  while (std::find(names.begin(), names.end(), fresh) != names.end()) fresh += "_";
  names.push_back(fresh);
  const StateId ts = m.num_states();
  std::vector<Transition> trans;
  for (Transition tr : m.transitions()) {
    tr.update.push_back(0);
    trans.push_back(std::move(tr));
  }
  IntVec down(k + 1, 0), zero(k + 1, 0);
  down[k] = -1;
  trans.push_back({t, ts, down});
  trans.push_back({ts, ts, zero});
  DualCoverReduction red{Model(k + 1, Domain::Z, names, {s}, trans), {}, ts};
  red.query.selecting.assign(k + 1, StateSet{ts});
  for (long long x : target) red.query.thresholds.emplace_back(x);
  red.query.thresholds.emplace_back(-1);
  return red;
}

}  // namespace vass
