#pragma once

// Stationary stopping rules. The filling rule greedily stops mass against a
// per-state quota until the quota (the stationary law) is met; its transcript
// records the full history. Exit frequencies give the mean of the optimal
// rule directly from one singular linear system, providing an independent
// route to the same number.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/distances.hpp"
#include "chainlab/hitting.hpp"

namespace chainlab {

struct FillingOptions {
  double mass_tol = 1e-12;   // run until this little mass remains unstopped
  Index max_steps = Index(1) << 18;
};

template <typename Scalar = double>
struct FillingRuleTranscript {
  // theta[t] is the law of still-running mass at time t, before stopping;
  // sigma[t] is the mass stopped at time t, per state.
  std::vector<Vector<Scalar>> theta;
  std::vector<Vector<Scalar>> sigma;
  Vector<Scalar> quota_filled;      // total stopped per state; approximates the quota
  std::vector<Index> fill_time;     // first t at which the state's quota is met
  Index halting_state = -1;         // the last quota to fill; ties take the smallest
  Index horizon = -1;               // last simulated step
  Scalar unstopped_mass = Scalar(0);
  Scalar mean_lower = Scalar(0);    // truncated mean of the stopping time
  Scalar tail_bound = Scalar(0);    // certified bound on the truncation error
  Scalar mean_upper = Scalar(0);

  // Probability of stopping at time t in state x, conditional on being
  // there unstopped; the per-trajectory sampling rule.
  Scalar stop_probability(Index t, Index x) const {
    const auto& th = theta[static_cast<std::size_t>(t)];
    const auto& sg = sigma[static_cast<std::size_t>(t)];
    if (th[x] <= Scalar(0)) return Scalar(0);
    return std::min(Scalar(1), sg[x] / th[x]);
  }
};

// Runs the filling rule for the chain's stationary quota from the start law
// mu. The remaining mean beyond the computed horizon is bounded by routing
// every leftover trajectory to any still-open quota state, which costs at
// most the worst expected pair hitting time; that bound is certified in
// tail_bound.
template <typename Scalar>
FillingRuleTranscript<Scalar> filling_rule(const MarkovChain<Scalar>& mc,
                                           const Vector<Scalar>& mu,
                                           const FillingOptions& opt = {}) {
  const Index n = mc.size();
  Distribution<Scalar> check_mu(mu);  // validates mass and sign
  const Vector<Scalar>& pi = mc.stationary();
  const Scalar tol = Scalar(opt.mass_tol);

  FillingRuleTranscript<Scalar> out;
  out.fill_time.assign(static_cast<std::size_t>(n), -1);
  Vector<Scalar> quota = pi;
  Vector<Scalar> theta = mu;
  Vector<Scalar> stopped = Vector<Scalar>::Zero(n);
  Scalar mean = Scalar(0);
  Scalar u = Scalar(1);

  for (Index t = 0; t <= opt.max_steps; ++t) {
    Vector<Scalar> sg = theta.cwiseMin(quota).cwiseMax(Scalar(0));
    quota -= sg;
    stopped += sg;
    mean += Scalar(t) * sg.sum();
    for (Index x = 0; x < n; ++x)
      if (out.fill_time[static_cast<std::size_t>(x)] < 0 && quota[x] <= tol)
        out.fill_time[static_cast<std::size_t>(x)] = t;
    out.theta.push_back(theta);
    out.sigma.push_back(std::move(sg));
    u = theta.sum() - out.sigma.back().sum();
    out.horizon = t;
    if (u <= tol) break;
    if (t == opt.max_steps) {
      std::ostringstream os;
      os << "filling_rule: " << double(u) << " mass unstopped after "
         << opt.max_steps << " steps (tolerance " << opt.mass_tol << ")";
      throw ConvergenceError(os.str());
    }
    theta = mc.kernel().transpose() * (theta - out.sigma.back());
  }

  out.quota_filled = stopped;
  out.unstopped_mass = std::max(u, Scalar(0));
  out.mean_lower = mean;

  // Worst expected pair hitting time, for the truncation bound.
  Scalar worst_pair = Scalar(0);
  for (Index z = 0; z < n; ++z)
    worst_pair =
        std::max(worst_pair, Scalar(expected_hitting(mc, {z}).maxCoeff()));
  out.tail_bound =
      out.unstopped_mass * (Scalar(out.horizon) + Scalar(1) + worst_pair);
  out.mean_upper = out.mean_lower + out.tail_bound;

  Index halt = 0;
  auto key = [&](Index x) {
    const Index ft = out.fill_time[static_cast<std::size_t>(x)];
    return ft < 0 ? std::numeric_limits<Index>::max() : ft;
  };
  for (Index x = 1; x < n; ++x)
    if (key(x) > key(halt)) halt = x;
  out.halting_state = halt;
  return out;
}

// Exit frequencies of the mean-optimal stopping rule carrying mu to rho:
// nu solves (I - P^T) nu = mu - rho, pinned so that its smallest ratio to
// the stationary law is zero. The mean of the optimal rule is sum(nu), and
// any state with zero frequency is a halting state.
template <typename Scalar = double>
struct ExitFrequencies {
  Vector<Scalar> nu;
  Scalar mean = Scalar(0);
  Index halting_state = -1;
};

template <typename Scalar>
ExitFrequencies<Scalar> exit_frequencies(const MarkovChain<Scalar>& mc,
                                         const Vector<Scalar>& mu,
                                         const Vector<Scalar>& rho) {
  const Index n = mc.size();
  Distribution<Scalar> check_mu(mu);
  Distribution<Scalar> check_rho(rho);
  const Vector<Scalar>& pi = mc.stationary();
  const Matrix<Scalar> a =
      Matrix<Scalar>::Identity(n, n) - mc.kernel().transpose();

  // Pin nu[0] = 0 and solve the reduced nonsingular system.
  Vector<Scalar> nu = Vector<Scalar>::Zero(n);
  if (n > 1) {
    Matrix<Scalar> ared = a.bottomRightCorner(n - 1, n - 1);
    Vector<Scalar> rhs = (mu - rho).tail(n - 1);
    nu.tail(n - 1) = Eigen::PartialPivLU<Matrix<Scalar>>(ared).solve(rhs);
  }
  const Vector<Scalar> resid = a * nu - (mu - rho);
  const double scale = std::max(1.0, double(nu.cwiseAbs().maxCoeff()));
  if (double(resid.cwiseAbs().maxCoeff()) > 1e-9 * scale)
    throw NumericalError("exit_frequencies: residual check failed");

  // Shift along the null direction pi so the smallest ratio reaches zero.
  const Scalar c = (nu.array() / pi.array()).minCoeff();
  nu -= c * pi;
  ExitFrequencies<Scalar> out;
  for (Index x = 0; x < n; ++x)
    if (nu[x] < Scalar(0)) nu[x] = Scalar(0);
  Index halt = 0;
  for (Index x = 1; x < n; ++x)
    if (nu[x] / pi[x] < nu[halt] / pi[halt]) halt = x;
  out.halting_state = halt;
  out.mean = nu.sum();
  out.nu = std::move(nu);
  return out;
}

// Worst-start mean of the optimal stationary stopping rule, with per-start
// values. One reduced factorization serves every start.
template <typename Scalar = double>
struct StopReport {
  double value = 0.0;
  Index argmax_state = -1;
  Vector<Scalar> per_start;
};

template <typename Scalar>
StopReport<Scalar> t_stop(const MarkovChain<Scalar>& mc) {
  const Index n = mc.size();
  const Vector<Scalar>& pi = mc.stationary();
  const Matrix<Scalar> a =
      Matrix<Scalar>::Identity(n, n) - mc.kernel().transpose();
  StopReport<Scalar> out;
  out.per_start = Vector<Scalar>::Zero(n);
  if (n == 1) {
    out.argmax_state = 0;
    return out;
  }
  Eigen::PartialPivLU<Matrix<Scalar>> lu(
      Matrix<Scalar>(a.bottomRightCorner(n - 1, n - 1)));
  for (Index x = 0; x < n; ++x) {
    Vector<Scalar> mu = Vector<Scalar>::Zero(n);
    mu[x] = Scalar(1);
    Vector<Scalar> nu = Vector<Scalar>::Zero(n);
    nu.tail(n - 1) = lu.solve(Vector<Scalar>((mu - pi).tail(n - 1)));
    const Scalar c = (nu.array() / pi.array()).minCoeff();
    nu -= c * pi;
    out.per_start[x] = nu.sum();
  }
  out.argmax_state = 0;
  for (Index x = 1; x < n; ++x)
    if (out.per_start[x] > out.per_start[out.argmax_state]) out.argmax_state = x;
  out.value = double(out.per_start[out.argmax_state]);
  return out;
}

template <typename Scalar>
StopReport<Scalar> t_stop_lazy(const MarkovChain<Scalar>& mc) {
  return t_stop(lazy(mc));
}

// Stationary rule built from a separation certificate: once the separation
// at time t falls to s, every row of P^t dominates (1 - s) pi, so stopping
// with the dominated component and retrying geometrically yields a rule
// with mean at most t / (1 - s).
template <typename Scalar = double>
struct SeparationRuleBound {
  bool attained = false;
  Index time = -1;
  Scalar separation = Scalar(1);
  Scalar mean_bound = Scalar(0);
  bool certified = false;
};

template <typename Scalar>
SeparationRuleBound<Scalar> separation_stopping_bound(
    const MarkovChain<Scalar>& mc,
    Scalar level = Scalar(config::separation_threshold), Index horizon = -1) {
  if (horizon < 0) horizon = config::auto_horizon(mc.size());
  const auto prof = profile_separation(mc, horizon, level);
  const auto hit = threshold(prof, level);
  SeparationRuleBound<Scalar> out;
  if (!hit.attained) return out;
  out.attained = true;
  out.time = hit.time;
  out.separation = prof.at(hit.time);
  if (out.separation >= Scalar(1))
    throw NumericalError("separation_stopping_bound: degenerate separation");
  out.mean_bound = Scalar(hit.time) / (Scalar(1) - out.separation);

  const Index n = mc.size();
  Matrix<Scalar> pt = Matrix<Scalar>::Identity(n, n);
  for (Index k = 0; k < hit.time; ++k) pt = pt * mc.kernel();
  const Vector<Scalar>& pi = mc.stationary();
  const Matrix<Scalar> floor_mat =
      (Scalar(1) - out.separation) * Vector<Scalar>::Ones(n) * pi.transpose();
  out.certified = ((pt - floor_mat).minCoeff() >= Scalar(-1e-12));
  return out;
}

// Window average of the chi-square-like statistic of the two-step-averaged
// stopped law. m(L) aggregates the transcript's stopped mass pushed forward
// to time L and then evolves freely; the statistic compares the smoothed
// law against the stationary one in the 1/pi norm.
template <typename Scalar = double>
struct AveragingWindow {
  Index L = 0;
  Index U = 0;
  Scalar window_mean = Scalar(0);
  Scalar window_min = Scalar(0);
  Scalar bound = Scalar(0);  // 1 + L / U
};

template <typename Scalar>
AveragingWindow<Scalar> averaging_statistic(const MarkovChain<Scalar>& mc,
                                            Index start, Index big_l,
                                            Index big_u,
                                            const FillingOptions& opt = {}) {
  if (big_l < 1 || big_u < 1)
    throw ValidationError("averaging_statistic: window must be positive");
  const Index n = mc.size();
  if (start < 0 || start >= n)
    throw ValidationError("averaging_statistic: start out of range");
  const Vector<Scalar>& pi = mc.stationary();
  Vector<Scalar> mu = Vector<Scalar>::Zero(n);
  mu[start] = Scalar(1);
  const auto tr = filling_rule(mc, mu, opt);

  // m(L) = sum over s <= L of sigma(s)^T P^(L - s), as a row vector.
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> m =
      Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(n);
  for (Index s = 0; s <= big_l; ++s) {
    m = m * mc.kernel();
    if (s <= tr.horizon)
      m += tr.sigma[static_cast<std::size_t>(s)].transpose();
  }

  AveragingWindow<Scalar> out;
  out.L = big_l;
  out.U = big_u;
  out.bound = Scalar(1) + Scalar(big_l) / Scalar(big_u);
  Scalar acc = Scalar(0);
  Scalar best = Scalar(-1);
  for (Index u = 0; u < big_u; ++u) {
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> m_next = m * mc.kernel();
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> f = (m + m_next) / Scalar(2);
    const Scalar stat = (f.transpose().array().square() / pi.array()).sum();
    acc += stat;
    if (best < Scalar(0) || stat < best) best = stat;
    m = m_next;
  }
  out.window_mean = acc / Scalar(big_u);
  out.window_min = best;
  return out;
}

}  // namespace chainlab
