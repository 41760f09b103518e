#include "vass/sim.hpp"

#include <omp.h>

#include <cmath>
#include <random>

namespace vass {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

struct Sampler {
  std::vector<std::vector<std::pair<double, TransId>>> out;  // cumulative probabilities per state
  std::vector<std::pair<double, StateId>> init;

  explicit Sampler(const ProbModel& pm) {
    const Model& m = pm.base();
    out.resize(m.num_states());
    for (StateId s = 0; s < m.num_states(); ++s) {
      double acc = 0;
      for (TransId t : m.outgoing(s)) {
        acc += pm.prob(t).to_double();
        out[s].emplace_back(acc, t);
      }
    }
    double acc = 0;
    for (std::size_t j = 0; j < m.initial().size(); ++j) {
      acc += pm.init_dist()[j].to_double();
      init.emplace_back(acc, m.initial()[j]);
    }
  }

  template <class T>
  static T pick(const std::vector<std::pair<double, T>>& cum, double u) {
    // u in [0,1); the last entry absorbs rounding in the cumulative sums.
    for (const auto& [c, v] : cum)
      if (u * cum.back().first < c) return v;
    return cum.back().second;
  }
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct StepObserver {
  virtual ~StepObserver() = default;
  virtual void on_config(long long step, StateId s, const IntVec& c, const std::vector<double>& sum,
                         const std::vector<long long>& cnt) = 0;
};

/// One attempt of one episode; returns false if rejected (relaxed semantics).
bool run_attempt(const ProbModel& pm, const Sampler& smp, const std::vector<StateSet>& sel, const SimConfig& cfg,
                 std::mt19937_64& rng, EpisodeSummary& ep, StepObserver* obs) {
  const Model& m = pm.base();
  const int k = m.dimension();
  const long long burn = static_cast<long long>(std::floor(cfg.burn_in * static_cast<double>(cfg.horizon)));
  std::vector<std::vector<bool>> in_sel(k, std::vector<bool>(m.num_states(), false));
  for (int i = 0; i < k && i < static_cast<int>(sel.size()); ++i)
    for (StateId s : sel[i]) in_sel[i][s] = true;

  StateId s = Sampler::pick(smp.init, uniform01(rng));
  IntVec c(k, 0);
  std::vector<double> sum(k, 0.0);
  std::vector<long long> cnt(k, 0);
  for (long long n = 0; n < cfg.horizon; ++n) {
    if (n >= burn)
      for (int i = 0; i < k; ++i)
        if (in_sel[i][s]) {
          sum[i] += static_cast<double>(c[i]);
          ++cnt[i];
        }
    if (obs) obs->on_config(n, s, c, sum, cnt);
    if (n + 1 == cfg.horizon) break;
    TransId t = Sampler::pick(smp.out[s], uniform01(rng));
    const auto& tr = m.transition(t);
    for (int i = 0; i < k; ++i) c[i] += tr.update[i];
    s = tr.to;
    if (cfg.semantics != SimSemantics::Z) {
      for (int i = 0; i < k; ++i)
        if (c[i] < 0) {
          if (cfg.semantics == SimSemantics::NStrict)
            throw ModelError("strict semantics violated: counter " + std::to_string(i + 1) + " negative at step " +
                             std::to_string(n + 1));
          return false;
        }
    }
  }
  ep.final_state = s;
  ep.final_counters = c;
  ep.average.assign(k, std::nullopt);
  for (int i = 0; i < k; ++i)
    if (cnt[i] > 0) ep.average[i] = sum[i] / static_cast<double>(cnt[i]);
  return true;
}

EpisodeSummary run_episode(const ProbModel& pm, const Sampler& smp, const std::vector<StateSet>& sel,
                           const SimConfig& cfg, long long index, StepObserver* obs) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(index)));
  EpisodeSummary ep;
  ep.attempts = 0;
  ep.accepted = false;
  const long long limit = cfg.semantics == SimSemantics::NRelaxed ? cfg.max_attempts : 1;
  while (ep.attempts < limit) {
    ++ep.attempts;
    if (run_attempt(pm, smp, sel, cfg, rng, ep, obs)) {
      ep.accepted = true;
      break;
    }
  }
  return ep;
}

void check_config(const ProbModel& pm, const std::vector<StateSet>& sel, const SimConfig& cfg) {
  if (cfg.horizon < 1) throw ModelError("horizon must be at least 1");
  if (cfg.episodes < 1) throw ModelError("episodes must be at least 1");
  if (cfg.burn_in < 0 || cfg.burn_in >= 1) throw ModelError("burn-in fraction must lie in [0,1)");
  if (static_cast<int>(sel.size()) != pm.base().dimension())
    throw ModelError("simulation needs one selecting set per counter");
}

SimReport reduce(std::vector<EpisodeSummary> eps, int k) {
  SimReport r;
  r.estimate.assign(k, 0.0);
  r.std_error.assign(k, 0.0);
  r.defined.assign(k, 0);
  r.minimum.assign(k, 0.0);
  long long rejected = 0;
  for (const auto& e : eps) {
    r.attempts += e.attempts;
    rejected += e.attempts - (e.accepted ? 1 : 0);
    if (e.accepted) ++r.accepted;
  }
  if (r.accepted == 0) throw ModelError("validity probability appears zero: every sampled path went negative");
  for (int i = 0; i < k; ++i) {
    double sum = 0, sq = 0, mn = 0;
    long long n = 0;
    for (const auto& e : eps) {
      if (!e.accepted || !e.average[i]) continue;
      double v = *e.average[i];
      if (n == 0 || v < mn) mn = v;
      sum += v;
      sq += v * v;
      ++n;
    }
    r.defined[i] = n;
    if (n == 0) {
      r.estimate[i] = std::nan("");
      r.std_error[i] = std::nan("");
      continue;
    }
    double mean = sum / static_cast<double>(n);
    double var = n > 1 ? std::max(0.0, (sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1)) : 0.0;
    r.estimate[i] = mean;
    r.std_error[i] = std::sqrt(var / static_cast<double>(n));
    r.minimum[i] = mn;
  }
  r.rejection_rate = r.attempts ? static_cast<double>(rejected) / static_cast<double>(r.attempts) : 0.0;
  r.episodes = std::move(eps);
  return r;
}

}  // namespace

SimReport simulate_serial(const ProbModel& pm, const std::vector<StateSet>& selecting, const SimConfig& cfg) {
  check_config(pm, selecting, cfg);
  Sampler smp(pm);
  std::vector<EpisodeSummary> eps(cfg.episodes);
  for (long long e = 0; e < cfg.episodes; ++e) eps[e] = run_episode(pm, smp, selecting, cfg, e, nullptr);
  return reduce(std::move(eps), pm.base().dimension());
}

SimReport simulate(const ProbModel& pm, const std::vector<StateSet>& selecting, const SimConfig& cfg) {
  check_config(pm, selecting, cfg);
  Sampler smp(pm);
  std::vector<EpisodeSummary> eps(cfg.episodes);
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  // Exceptions cannot cross the parallel region; the first one (by episode) is rethrown after it.
  std::vector<std::string> errors(cfg.episodes);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long long e = 0; e < cfg.episodes; ++e) {
    try {
      eps[e] = run_episode(pm, smp, selecting, cfg, e, nullptr);
    } catch (const std::exception& ex) {
      errors[e] = ex.what();
    }
  }
  for (const auto& err : errors)
    if (!err.empty()) throw ModelError(err);
  return reduce(std::move(eps), pm.base().dimension());
}

void write_trace_csv(const ProbModel& pm, const std::vector<StateSet>& selecting, const SimConfig& cfg,
                     std::ostream& out) {
  check_config(pm, selecting, cfg);
  const int k = pm.base().dimension();
  struct CsvObserver : StepObserver {
    std::ostream* os;
    long long episode = 0;
    const Model* m;
    void on_config(long long step, StateId s, const IntVec& c, const std::vector<double>& sum,
                   const std::vector<long long>& cnt) override {
      *os << episode << ',' << step << ',' << m->state_name(s);
      for (long long v : c) *os << ',' << v;
      for (std::size_t i = 0; i < sum.size(); ++i) {
        *os << ',';
        if (cnt[i] > 0) *os << sum[i] / static_cast<double>(cnt[i]);
      }
      *os << '\n';
    }
  } obs;
  obs.os = &out;
  obs.m = &pm.base();
  out << "episode,step,state";
  for (int i = 1; i <= k; ++i) out << ",c" << i;
  for (int i = 1; i <= k; ++i) out << ",avg" << i;
  out << '\n';
  Sampler smp(pm);
  for (long long e = 0; e < cfg.episodes; ++e) {
    obs.episode = e;
    run_episode(pm, smp, selecting, cfg, e, &obs);
  }
}

ValidityEstimate estimate_validity_probability(const ProbModel& pm, long long horizon, long long episodes,
                                               std::uint64_t seed) {
  if (horizon < 1 || episodes < 1) throw ModelError("horizon and episodes must be positive");
  SimConfig cfg;
  cfg.semantics = SimSemantics::NRelaxed;
  cfg.horizon = horizon;
  cfg.episodes = episodes;
  cfg.seed = seed;
  cfg.max_attempts = 1;
  Sampler smp(pm);
  std::vector<StateSet> none(pm.base().dimension());
  ValidityEstimate v;
  v.episodes = episodes;
  for (long long e = 0; e < episodes; ++e)
    if (run_episode(pm, smp, none, cfg, e, nullptr).accepted) ++v.valid;
  const double n = static_cast<double>(episodes), p = static_cast<double>(v.valid) / n, z = 1.96;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  v.estimate = p;
  v.lower = std::max(0.0, centre - half);
  v.upper = std::min(1.0, centre + half);
  return v;
}

}  // namespace vass
