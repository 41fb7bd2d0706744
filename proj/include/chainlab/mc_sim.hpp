#pragma once

// Monte Carlo cross-checks. Every sampler seeds one generator per
// trajectory from (seed, stream, trajectory index), accumulates per-batch
// partial sums, and reduces batches in index order, so results do not
// depend on the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/distances.hpp"
#include "chainlab/hitting.hpp"
#include "chainlab/numerics.hpp"
#include "chainlab/stopping.hpp"

namespace chainlab {

struct SimConfig {
  std::uint64_t trajectories = 100000;
  Index max_steps = Index(1) << 22;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct EstimateWithCI {
  double point = 0.0;
  double se = 0.0;
  std::uint64_t count = 0;
  std::uint64_t overflow = 0;
};

// Cumulative-row lookup for one transition step.
class RowSampler {
 public:
  explicit RowSampler(const Matrix<double>& kernel) : cum_(kernel) {
    for (Index i = 0; i < cum_.rows(); ++i)
      for (Index j = 1; j < cum_.cols(); ++j) cum_(i, j) += cum_(i, j - 1);
  }

  Index sample(Index row, double u) const {
    const double* begin = cum_.data() + row * cum_.cols();
    const double* end = begin + cum_.cols();
    const double* it = std::upper_bound(begin, end, u);
    if (it == end) --it;
    return static_cast<Index>(it - begin);
  }

 private:
  // Row-major so each row's partial sums are contiguous.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cum_;
};

namespace detail {

inline constexpr std::uint64_t sim_batch = 4096;

// Runs fn(rng, traj_index) for every trajectory, collecting per-batch
// results with per_batch(batch_index, first, count, rng_factory).
template <typename Body>
void for_each_trajectory(const SimConfig& cfg, Body&& body) {
  const std::uint64_t total = cfg.trajectories;
  const std::uint64_t batches = (total + sim_batch - 1) / sim_batch;
  parallel_for(static_cast<std::size_t>(batches), [&](std::size_t b) {
    const std::uint64_t first = std::uint64_t(b) * sim_batch;
    const std::uint64_t last = std::min(first + sim_batch, total);
    for (std::uint64_t i = first; i < last; ++i) {
      std::mt19937_64 rng(mix_seed(cfg.seed, cfg.stream, i));
      body(static_cast<std::size_t>(b), rng);
    }
  });
}

struct MomentAccum {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t count = 0;
  std::uint64_t overflow = 0;
};

inline EstimateWithCI reduce_moments(const std::vector<MomentAccum>& parts) {
  double sum = 0.0, sumsq = 0.0;
  std::uint64_t count = 0, overflow = 0;
  for (const auto& p : parts) {
    sum += p.sum;
    sumsq += p.sumsq;
    count += p.count;
    overflow += p.overflow;
  }
  EstimateWithCI out;
  out.count = count;
  out.overflow = overflow;
  if (count == 0) return out;
  out.point = sum / double(count);
  if (count > 1) {
    const double var =
        std::max(0.0, (sumsq - double(count) * out.point * out.point) /
                          double(count - 1));
    out.se = std::sqrt(var / double(count));
  }
  return out;
}

}  // namespace detail

// Sampled mean time to reach the target set.
template <typename Scalar>
EstimateWithCI sample_hitting(const MarkovChain<Scalar>& mc, Index start,
                              StateSet target, const SimConfig& cfg = {}) {
  const Index n = mc.size();
  target = normalize_set(n, target);
  std::vector<char> in_target(static_cast<std::size_t>(n), 0);
  for (Index x : target) in_target[static_cast<std::size_t>(x)] = 1;
  const RowSampler rows(Matrix<double>(mc.kernel().template cast<double>()));
  std::uniform_real_distribution<double> unif{0.0, 1.0};

  const std::uint64_t batches =
      (cfg.trajectories + detail::sim_batch - 1) / detail::sim_batch;
  std::vector<detail::MomentAccum> parts(static_cast<std::size_t>(batches));
  detail::for_each_trajectory(cfg, [&](std::size_t b, std::mt19937_64& rng) {
    auto u = unif;
    Index x = start;
    Index t = 0;
    while (!in_target[static_cast<std::size_t>(x)] && t < cfg.max_steps) {
      x = rows.sample(x, u(rng));
      ++t;
    }
    auto& acc = parts[b];
    if (!in_target[static_cast<std::size_t>(x)]) {
      ++acc.overflow;
      return;
    }
    acc.sum += double(t);
    acc.sumsq += double(t) * double(t);
    ++acc.count;
  });
  return detail::reduce_moments(parts);
}

// Sampled run of the filling rule against its own transcript: stop at time t
// in state x with the conditional probability sigma_x(t) / theta_x(t).
struct FillingSample {
  EstimateWithCI time;
  Vector<double> stop_freq;    // empirical distribution of the stop state
  double overflow_fraction = 0.0;
};

template <typename Scalar>
FillingSample sample_filling_rule(const MarkovChain<Scalar>& mc,
                                  const FillingRuleTranscript<Scalar>& tr,
                                  Index start, const SimConfig& cfg = {}) {
  const Index n = mc.size();
  const RowSampler rows(Matrix<double>(mc.kernel().template cast<double>()));
  std::uniform_real_distribution<double> unif{0.0, 1.0};

  const std::uint64_t batches =
      (cfg.trajectories + detail::sim_batch - 1) / detail::sim_batch;
  std::vector<detail::MomentAccum> parts(static_cast<std::size_t>(batches));
  std::vector<std::vector<std::uint64_t>> counts(
      static_cast<std::size_t>(batches),
      std::vector<std::uint64_t>(static_cast<std::size_t>(n), 0));
  detail::for_each_trajectory(cfg, [&](std::size_t b, std::mt19937_64& rng) {
    auto u = unif;
    Index x = start;
    auto& acc = parts[b];
    for (Index t = 0; t <= tr.horizon; ++t) {
      const double p = double(tr.stop_probability(t, x));
      if (u(rng) < p) {
        acc.sum += double(t);
        acc.sumsq += double(t) * double(t);
        ++acc.count;
        ++counts[b][static_cast<std::size_t>(x)];
        return;
      }
      x = rows.sample(x, u(rng));
    }
    ++acc.overflow;
  });

  FillingSample out;
  out.time = detail::reduce_moments(parts);
  out.stop_freq = Vector<double>::Zero(n);
  for (const auto& c : counts)
    for (Index x = 0; x < n; ++x)
      out.stop_freq[x] += double(c[static_cast<std::size_t>(x)]);
  if (out.time.count > 0) out.stop_freq /= double(out.time.count);
  out.overflow_fraction =
      double(out.time.overflow) / double(std::max<std::uint64_t>(1, cfg.trajectories));
  return out;
}

// Closed-form samplers for the stock random clocks, paired with the
// truncated law used by the exact kernel route.
struct TimeSampler {
  enum class Kind { point, geometric, uniform };
  Kind kind = Kind::point;
  double param = 1.0;

  static TimeSampler point(Index k) {
    return {Kind::point, double(k)};
  }
  static TimeSampler geometric(double t) {
    if (!(t >= 1.0))
      throw ValidationError("TimeSampler::geometric: mean must be >= 1");
    return {Kind::geometric, t};
  }
  static TimeSampler uniform(Index t) {
    if (t < 1) throw ValidationError("TimeSampler::uniform: span must be >= 1");
    return {Kind::uniform, double(t)};
  }

  Index draw(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif{0.0, 1.0};
    switch (kind) {
      case Kind::point:
        return Index(param);
      case Kind::geometric: {
        if (param == 1.0) return 1;
        const double q = 1.0 - 1.0 / param;
        double u = unif(rng);
        if (u <= 0.0) u = std::numeric_limits<double>::min();
        return 1 + Index(std::floor(std::log(u) / std::log(q)));
      }
      case Kind::uniform:
        return 1 + Index(std::min(param - 1.0, std::floor(unif(rng) * param)));
    }
    return 1;
  }

  TimePmf<double> law(double tail_cap = 1e-12) const {
    switch (kind) {
      case Kind::point:
        return TimePmf<double>::point(Index(param));
      case Kind::geometric:
        return TimePmf<double>::geometric(param, tail_cap);
      case Kind::uniform:
        return TimePmf<double>::uniform_range(Index(param));
    }
    return TimePmf<double>::point(1);
  }
};

// Empirical end-state law after an independent random clock versus the
// exact randomized-time kernel row. The allowance covers the plug-in bias
// of the TV estimate plus the certified truncation tail.
struct RandomizedTimeTvReport {
  double tv = 0.0;
  double allowance = 0.0;
  Vector<double> empirical;
};

inline RandomizedTimeTvReport sample_randomized_time_tv(
    const MarkovChain<double>& mc, Index start, const TimeSampler& clock,
    const SimConfig& cfg = {}) {
  const Index n = mc.size();
  const RowSampler rows(mc.kernel());
  std::uniform_real_distribution<double> unif{0.0, 1.0};

  const std::uint64_t batches =
      (cfg.trajectories + detail::sim_batch - 1) / detail::sim_batch;
  std::vector<std::vector<std::uint64_t>> counts(
      static_cast<std::size_t>(batches),
      std::vector<std::uint64_t>(static_cast<std::size_t>(n), 0));
  detail::for_each_trajectory(cfg, [&](std::size_t b, std::mt19937_64& rng) {
    auto u = unif;
    const Index k = std::min<Index>(clock.draw(rng), cfg.max_steps);
    Index x = start;
    for (Index s = 0; s < k; ++s) x = rows.sample(x, u(rng));
    ++counts[b][static_cast<std::size_t>(x)];
  });

  RandomizedTimeTvReport out;
  out.empirical = Vector<double>::Zero(n);
  for (const auto& c : counts)
    for (Index x = 0; x < n; ++x)
      out.empirical[x] += double(c[static_cast<std::size_t>(x)]);
  out.empirical /= double(cfg.trajectories);

  const auto law = randomized_time_law(mc, clock.law());
  const Vector<double> exact = law.kernel.row(start).transpose();
  out.tv = total_variation(out.empirical, exact) + law.tail / 2.0;
  Index support = 0;
  for (Index y = 0; y < n; ++y)
    if (exact[y] > 0.0) ++support;
  out.allowance = std::sqrt(double(support) / double(cfg.trajectories)) +
                  double(law.tail);
  return out;
}

// Local-search estimate of the worst hitting time of a set at the given
// stationary-mass level, for chains too large to enumerate. Each candidate
// set is scored exactly by a linear solve, so the reported value is a
// certified lower bound of the exhaustive maximum.
struct THitEstimateOptions {
  Index restarts = 2;
  Index max_rounds = 16;
  std::uint64_t seed = 1;
};

template <typename Scalar>
HittingReport estimate_t_hit_alpha(const MarkovChain<Scalar>& mc, Scalar alpha,
                                   const THitEstimateOptions& opt = {}) {
  if (!(alpha > Scalar(0)) || alpha > Scalar(1))
    throw ValidationError("estimate_t_hit_alpha: level must lie in (0, 1]");
  const Index n = mc.size();
  const Vector<Scalar>& pi = mc.stationary();

  HittingReport rep;
  rep.alpha = double(alpha);
  rep.warning =
      "local-search estimate: certified lower bound of the exhaustive value";
  std::uint64_t solves = 0;

  auto mass_of = [&](const StateSet& a) { return set_mass(pi, a); };
  auto score = [&](const StateSet& a) {
    ++solves;
    return double(expected_hitting(mc, a).maxCoeff());
  };

  // Pairwise hitting matrix seeds the search: from each probe start, the
  // hardest-to-reach states of the right total mass form a candidate set.
  Matrix<Scalar> pair_h(n, n);
  for (Index y = 0; y < n; ++y) pair_h.col(y) = expected_hitting(mc, {y});
  solves += std::uint64_t(n);

  auto greedy_seed = [&](Index x) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (pair_h(x, a) != pair_h(x, b)) return pair_h(x, a) > pair_h(x, b);
      return a < b;
    });
    StateSet a;
    Scalar mass = Scalar(0);
    for (Index y : order) {
      a.push_back(y);
      mass += pi[y];
      if (mass >= alpha) break;
    }
    std::sort(a.begin(), a.end());
    return a;
  };

  auto climb = [&](StateSet a) {
    double best = score(a);
    for (Index round = 0; round < opt.max_rounds; ++round) {
      bool improved = false;
      // Dropping a member always helps when feasible.
      for (std::size_t i = 0; i < a.size() && a.size() > 1; ++i) {
        StateSet trial = a;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
        if (mass_of(trial) < alpha) continue;
        const double v = score(trial);
        if (v > best + 1e-12) {
          best = v;
          a = trial;
          improved = true;
          break;
        }
      }
      if (improved) continue;
      std::vector<char> member(static_cast<std::size_t>(n), 0);
      for (Index x : a) member[static_cast<std::size_t>(x)] = 1;
      for (std::size_t i = 0; i < a.size() && !improved; ++i) {
        for (Index j = 0; j < n && !improved; ++j) {
          if (member[static_cast<std::size_t>(j)]) continue;
          StateSet trial = a;
          trial[i] = j;
          std::sort(trial.begin(), trial.end());
          if (mass_of(trial) < alpha) continue;
          const double v = score(trial);
          if (v > best + 1e-12) {
            best = v;
            a = trial;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
    return std::make_pair(best, a);
  };

  detail::ArgmaxKeeper keeper;
  auto consider = [&](StateSet seed_set) {
    auto [value, a] = climb(std::move(seed_set));
    const Vector<Scalar> h = expected_hitting(mc, a);
    ++solves;
    for (Index x = 0; x < n; ++x) keeper.offer(double(h[x]), a, x);
  };

  std::vector<StateSet> seeds;
  std::vector<Index> probes;
  if (n <= 24) {
    probes.resize(static_cast<std::size_t>(n));
    std::iota(probes.begin(), probes.end(), Index(0));
  } else {
    probes = {Index(0), n / 4, n / 2, (3 * n) / 4};
  }
  for (Index x : probes) {
    StateSet s = greedy_seed(std::min(x, n - 1));
    if (std::find(seeds.begin(), seeds.end(), s) == seeds.end())
      seeds.push_back(std::move(s));
  }
  std::mt19937_64 rng(mix_seed(opt.seed, 0x746869746573ULL));
  for (Index r = 0; r < opt.restarts; ++r) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    std::shuffle(order.begin(), order.end(), rng);
    StateSet a;
    Scalar mass = Scalar(0);
    for (Index y : order) {
      a.push_back(y);
      mass += pi[y];
      if (mass >= alpha) break;
    }
    std::sort(a.begin(), a.end());
    if (std::find(seeds.begin(), seeds.end(), a) == seeds.end())
      seeds.push_back(std::move(a));
  }
  for (auto& s : seeds) consider(std::move(s));

  rep.value = keeper.value;
  rep.argmax_set = keeper.set;
  rep.argmax_state = keeper.state;
  rep.sets_examined = solves;
  if (alpha >= Scalar(0.5))
    rep.warning += "; level at or above 1/2";
  return rep;
}

}  // namespace chainlab
