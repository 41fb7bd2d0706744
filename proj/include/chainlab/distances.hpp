#pragma once

// Distance-to-stationarity profiles and kernel transforms. A profile holds
// one value per time step starting at t_begin; threshold() extracts the
// first crossing of a level. Worst-case TV, pairwise TV, separation and the
// two-step average are non-increasing in t, so early stopping at the target
// level is sound for them; the resolvent average shares this monotonicity.

#include <cmath>
#include <string>
#include <vector>

#include "chainlab/chain.hpp"

namespace chainlab {

template <typename Scalar = double>
struct MixingProfile {
  std::string kind;
  Index t_begin = 0;
  std::vector<Scalar> values;
  // True when the profile stopped early because it fell to stop_below.
  bool stopped_early = false;
  Scalar stop_below = Scalar(-1);

  Index horizon() const {
    return t_begin + static_cast<Index>(values.size()) - 1;
  }
  Scalar at(Index t) const {
    if (t < t_begin || t > horizon())
      throw DimensionError("MixingProfile::at: time outside computed range");
    return values[static_cast<std::size_t>(t - t_begin)];
  }
};

struct ThresholdResult {
  Index time = -1;
  double level = 0.0;
  bool attained = false;
  Index searched_to = -1;
};

// First time the profile is at or below the level.
template <typename Scalar>
ThresholdResult threshold(const MixingProfile<Scalar>& prof, Scalar level) {
  ThresholdResult r;
  r.level = double(level);
  r.searched_to = prof.horizon();
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    if (prof.values[i] <= level) {
      r.time = prof.t_begin + static_cast<Index>(i);
      r.attained = true;
      return r;
    }
  }
  return r;
}

// Worst-row TV distance of a kernel from a target distribution.
template <typename Scalar>
Scalar kernel_tv_to(const Matrix<Scalar>& k, const Vector<Scalar>& pi) {
  if (k.cols() != pi.size())
    throw DimensionError("kernel_tv_to: size mismatch");
  return (k.rowwise() - pi.transpose()).cwiseAbs().rowwise().sum().maxCoeff() /
         Scalar(2);
}

// Worst TV distance between two rows of a kernel.
template <typename Scalar>
Scalar kernel_pairwise_tv(const Matrix<Scalar>& k) {
  const Index n = k.rows();
  Scalar worst = Scalar(0);
  for (Index x = 0; x < n; ++x)
    for (Index y = x + 1; y < n; ++y)
      worst = std::max(worst, Scalar((k.row(x) - k.row(y)).cwiseAbs().sum() /
                                     Scalar(2)));
  return worst;
}

// Worst separation of a kernel from a target: max over entries of
// 1 - K(x, y) / pi(y).
template <typename Scalar>
Scalar kernel_separation(const Matrix<Scalar>& k, const Vector<Scalar>& pi) {
  if (k.cols() != pi.size())
    throw DimensionError("kernel_separation: size mismatch");
  const Scalar ratio_min =
      (k.array().rowwise() / pi.transpose().array()).minCoeff();
  return Scalar(1) - ratio_min;
}

namespace detail {

// Generic power-walk profile driver: calls score(P^t) for t = 0, 1, ...
template <typename Scalar, typename Score>
MixingProfile<Scalar> power_profile(const MarkovChain<Scalar>& mc,
                                    Index horizon, Scalar stop_below,
                                    std::string kind, Score&& score) {
  if (horizon < 0) throw ValidationError("profile: negative horizon");
  const Index n = mc.size();
  MixingProfile<Scalar> prof;
  prof.kind = std::move(kind);
  prof.t_begin = 0;
  prof.stop_below = stop_below;
  prof.values.reserve(static_cast<std::size_t>(horizon) + 1);
  Matrix<Scalar> pt = Matrix<Scalar>::Identity(n, n);
  for (Index t = 0; t <= horizon; ++t) {
    const Scalar v = score(pt);
    prof.values.push_back(v);
    if (stop_below >= Scalar(0) && v <= stop_below) {
      prof.stopped_early = true;
      break;
    }
    if (t < horizon) pt = pt * mc.kernel();
  }
  return prof;
}

}  // namespace detail

// d(t) = max_x TV(P^t(x, .), pi), non-increasing, from t = 0.
template <typename Scalar>
MixingProfile<Scalar> profile_tv(const MarkovChain<Scalar>& mc, Index horizon,
                                 Scalar stop_below = Scalar(-1)) {
  const Vector<Scalar>& pi = mc.stationary();
  return detail::power_profile(
      mc, horizon, stop_below, "tv",
      [&](const Matrix<Scalar>& pt) { return kernel_tv_to(pt, pi); });
}

// dbar(t) = max_{x,y} TV(P^t(x, .), P^t(y, .)), non-increasing, from t = 0.
template <typename Scalar>
MixingProfile<Scalar> profile_pairwise_tv(const MarkovChain<Scalar>& mc,
                                          Index horizon,
                                          Scalar stop_below = Scalar(-1)) {
  return detail::power_profile(
      mc, horizon, stop_below, "pairwise_tv",
      [&](const Matrix<Scalar>& pt) { return kernel_pairwise_tv(pt); });
}

// s(t) = max_{x,y} (1 - P^t(x, y) / pi(y)), non-increasing, from t = 0.
template <typename Scalar>
MixingProfile<Scalar> profile_separation(const MarkovChain<Scalar>& mc,
                                         Index horizon,
                                         Scalar stop_below = Scalar(-1)) {
  const Vector<Scalar>& pi = mc.stationary();
  auto prof = detail::power_profile(
      mc, horizon, stop_below, "separation",
      [&](const Matrix<Scalar>& pt) { return kernel_separation(pt, pi); });
  return prof;
}

// Two-step average distance max_x TV((P^t + P^{t+1})(x, .) / 2, pi),
// non-increasing, from t = 0.
template <typename Scalar>
MixingProfile<Scalar> profile_average_tv(const MarkovChain<Scalar>& mc,
                                         Index horizon,
                                         Scalar stop_below = Scalar(-1)) {
  const Vector<Scalar>& pi = mc.stationary();
  return detail::power_profile(
      mc, horizon, stop_below, "average_tv", [&](const Matrix<Scalar>& pt) {
        const Matrix<Scalar> avg = (pt + pt * mc.kernel()) / Scalar(2);
        return kernel_tv_to(avg, pi);
      });
}

// Resolvent average G_t = (1/t) P (I - (1 - 1/t) P)^{-1}: the kernel of the
// walk run for an independent geometric number of steps with mean t. Rows
// sum to one exactly in exact arithmetic; a residual check guards the solve.
template <typename Scalar>
Matrix<Scalar> geometric_law(const MarkovChain<Scalar>& mc, Scalar t) {
  if (!(t >= Scalar(1)))
    throw ValidationError("geometric_law: t must be at least 1");
  const Index n = mc.size();
  if (t == Scalar(1)) return mc.kernel();
  const Scalar q = Scalar(1) - Scalar(1) / t;
  const Matrix<Scalar> a = Matrix<Scalar>::Identity(n, n) - q * mc.kernel();
  Matrix<Scalar> g =
      Eigen::PartialPivLU<Matrix<Scalar>>(a).solve(mc.kernel()) / t;
  const double row_err =
      double((g.rowwise().sum().array() - Scalar(1)).abs().maxCoeff());
  if (row_err > config::verification_tol)
    throw NumericalError("geometric_law: resolvent rows lost mass");
  g = g.cwiseMax(Scalar(0));
  return g;
}

// d_G(t) = max_x TV(G_t(x, .), pi) for integer t >= 1; non-increasing.
template <typename Scalar>
MixingProfile<Scalar> profile_geometric_tv(const MarkovChain<Scalar>& mc,
                                           Index horizon,
                                           Scalar stop_below = Scalar(-1)) {
  if (horizon < 1) throw ValidationError("profile: horizon must be >= 1");
  const Vector<Scalar>& pi = mc.stationary();
  MixingProfile<Scalar> prof;
  prof.kind = "geometric_tv";
  prof.t_begin = 1;
  prof.stop_below = stop_below;
  for (Index t = 1; t <= horizon; ++t) {
    const Scalar v = kernel_tv_to(geometric_law(mc, Scalar(t)), pi);
    prof.values.push_back(v);
    if (stop_below >= Scalar(0) && v <= stop_below) {
      prof.stopped_early = true;
      break;
    }
  }
  return prof;
}

// Separation of the doubled resolvent kernel G_t G_t from pi; G_t G_t is the
// law after two independent geometric(1/t) runs, so it has full support for
// t > 1 and its separation always falls below any fixed level eventually.
template <typename Scalar>
MixingProfile<Scalar> profile_geometric_doubled_sep(
    const MarkovChain<Scalar>& mc, Index horizon,
    Scalar stop_below = Scalar(-1)) {
  if (horizon < 1) throw ValidationError("profile: horizon must be >= 1");
  const Vector<Scalar>& pi = mc.stationary();
  MixingProfile<Scalar> prof;
  prof.kind = "geometric_doubled_sep";
  prof.t_begin = 1;
  prof.stop_below = stop_below;
  for (Index t = 1; t <= horizon; ++t) {
    const Matrix<Scalar> g = geometric_law(mc, Scalar(t));
    const Scalar v = kernel_separation(Matrix<Scalar>(g * g), pi);
    prof.values.push_back(v);
    if (stop_below >= Scalar(0) && v <= stop_below) {
      prof.stopped_early = true;
      break;
    }
  }
  return prof;
}

// Cesaro average U_t = (P + ... + P^t) / t, from t = 1. Not monotone in
// general, but converges even for periodic chains.
template <typename Scalar>
MixingProfile<Scalar> profile_cesaro_tv(const MarkovChain<Scalar>& mc,
                                        Index horizon,
                                        Scalar stop_below = Scalar(-1)) {
  if (horizon < 1) throw ValidationError("profile: horizon must be >= 1");
  const Index n = mc.size();
  const Vector<Scalar>& pi = mc.stationary();
  MixingProfile<Scalar> prof;
  prof.kind = "cesaro_tv";
  prof.t_begin = 1;
  prof.stop_below = stop_below;
  Matrix<Scalar> pt = mc.kernel();
  Matrix<Scalar> sum = Matrix<Scalar>::Zero(n, n);
  for (Index t = 1; t <= horizon; ++t) {
    sum += pt;
    const Scalar v = kernel_tv_to(Matrix<Scalar>(sum / Scalar(t)), pi);
    prof.values.push_back(v);
    if (stop_below >= Scalar(0) && v <= stop_below) {
      prof.stopped_early = true;
      break;
    }
    if (t < horizon) pt = pt * mc.kernel();
  }
  return prof;
}

// Law of the chain run for an independent random time: sum of pmf(k) P^k
// over the truncated support. The certified tail mass of the pmf is carried
// through; kernel rows sum to 1 - tail.
template <typename Scalar = double>
struct RandomizedLaw {
  Matrix<Scalar> kernel;
  Scalar tail = Scalar(0);
};

template <typename Scalar>
RandomizedLaw<Scalar> randomized_time_law(const MarkovChain<Scalar>& mc,
                                          const TimePmf<Scalar>& pmf) {
  const Index n = mc.size();
  Matrix<Scalar> pk = Matrix<Scalar>::Identity(n, n);
  for (Index k = 0; k < pmf.offset(); ++k) pk = pk * mc.kernel();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < pmf.length(); ++i) {
    out += pmf.masses()[i] * pk;
    if (i + 1 < pmf.length()) pk = pk * mc.kernel();
  }
  return {std::move(out), pmf.tail_mass()};
}

template <typename Scalar>
Matrix<Scalar> cesaro_law(const MarkovChain<Scalar>& mc, Index t) {
  return randomized_time_law(mc, TimePmf<Scalar>::uniform_range(t)).kernel;
}

// Convenience threshold searches with sound early stopping.

template <typename Scalar>
ThresholdResult mixing_time(const MarkovChain<Scalar>& mc,
                            Scalar eps = Scalar(config::default_epsilon),
                            Index horizon = -1) {
  if (horizon < 0) horizon = config::auto_horizon(mc.size());
  return threshold(profile_tv(mc, horizon, eps), eps);
}

template <typename Scalar>
ThresholdResult average_mixing_time(const MarkovChain<Scalar>& mc,
                                    Scalar eps = Scalar(config::default_epsilon),
                                    Index horizon = -1) {
  if (horizon < 0) horizon = config::auto_horizon(mc.size());
  return threshold(profile_average_tv(mc, horizon, eps), eps);
}

template <typename Scalar>
ThresholdResult separation_time(
    const MarkovChain<Scalar>& mc,
    Scalar level = Scalar(config::separation_threshold), Index horizon = -1) {
  if (horizon < 0) horizon = config::auto_horizon(mc.size());
  return threshold(profile_separation(mc, horizon, level), level);
}

template <typename Scalar>
ThresholdResult geometric_mixing_time(
    const MarkovChain<Scalar>& mc, Scalar eps = Scalar(config::default_epsilon),
    Index horizon = -1) {
  if (horizon < 0) horizon = std::max<Index>(1, config::auto_horizon(mc.size()));
  return threshold(profile_geometric_tv(mc, horizon, eps), eps);
}

template <typename Scalar>
ThresholdResult cesaro_mixing_time(const MarkovChain<Scalar>& mc,
                                   Scalar eps = Scalar(config::default_epsilon),
                                   Index horizon = -1) {
  if (horizon < 0) horizon = std::max<Index>(1, config::auto_horizon(mc.size()));
  return threshold(profile_cesaro_tv(mc, horizon, eps), eps);
}

template <typename Scalar>
ThresholdResult geometric_doubled_sep_time(
    const MarkovChain<Scalar>& mc,
    Scalar level = Scalar(config::separation_threshold), Index horizon = -1) {
  if (horizon < 0) horizon = std::max<Index>(1, config::auto_horizon(mc.size()));
  return threshold(profile_geometric_doubled_sep(mc, horizon, level), level);
}

// Worst-start TV distance between consecutive steps, with the universal
// bound available when every state holds in place with probability at least
// delta = min_x P(x, x) in (0, 1).
template <typename Scalar = double>
struct ConsecutiveTvBound {
  Scalar lhs = Scalar(0);   // max_x TV(P^t(x, .), P^{t+1}(x, .))
  Scalar rhs = Scalar(0);   // exp(-9 t w / 16) + 12 sqrt(2) / sqrt(t w), w = delta (1 - delta)
  Scalar delta = Scalar(0);
};

template <typename Scalar>
ConsecutiveTvBound<Scalar> consecutive_tv_bound(const MarkovChain<Scalar>& mc,
                                                Index t) {
  if (t < 1) throw ValidationError("consecutive_tv_bound: t must be >= 1");
  const Scalar delta = mc.kernel().diagonal().minCoeff();
  if (!(delta > Scalar(0)) || !(delta < Scalar(1)))
    throw HoldingProbabilityError(
        "consecutive_tv_bound: requires every diagonal entry in (0, 1)");
  const Index n = mc.size();
  Matrix<Scalar> pt = Matrix<Scalar>::Identity(n, n);
  for (Index k = 0; k < t; ++k) pt = pt * mc.kernel();
  const Matrix<Scalar> pt1 = pt * mc.kernel();
  ConsecutiveTvBound<Scalar> out;
  out.delta = delta;
  out.lhs = Scalar(0);
  for (Index x = 0; x < n; ++x)
    out.lhs = std::max(out.lhs, Scalar((pt.row(x) - pt1.row(x)).cwiseAbs().sum() /
                                       Scalar(2)));
  const double w = double(t) * double(delta) * (1.0 - double(delta));
  out.rhs = Scalar(std::exp(-9.0 * w / 16.0) + 12.0 * std::sqrt(2.0) / std::sqrt(w));
  return out;
}

}  // namespace chainlab
