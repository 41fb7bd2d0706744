#pragma once

// Expected hitting times of state sets, delayed and return variants, and
// worst-case hitting parameters over families of target sets. One linear
// solve per target set yields the hitting time from every start at once.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "chainlab/chain.hpp"

namespace chainlab {

using StateSet = std::vector<Index>;

inline StateSet normalize_set(Index n, StateSet a) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  if (a.empty()) throw ValidationError("state set: empty");
  if (a.front() < 0 || a.back() >= n)
    throw ValidationError("state set: state out of range");
  return a;
}

inline StateSet complement_set(Index n, const StateSet& a) {
  StateSet c;
  c.reserve(static_cast<std::size_t>(n) - a.size());
  std::size_t j = 0;
  for (Index i = 0; i < n; ++i) {
    if (j < a.size() && a[j] == i) {
      ++j;
    } else {
      c.push_back(i);
    }
  }
  return c;
}

template <typename Scalar>
Scalar set_mass(const Vector<Scalar>& pi, const StateSet& a) {
  Scalar m = Scalar(0);
  for (Index x : a) m += pi[x];
  return m;
}

// E_x[time to first visit of A, counting time 0] for every start x; zero on
// A itself. Solves (I - P_CC) h = 1 on the complement C.
template <typename Scalar>
Vector<Scalar> expected_hitting(const MarkovChain<Scalar>& mc, StateSet a) {
  const Index n = mc.size();
  a = normalize_set(n, a);
  const StateSet c = complement_set(n, a);
  Vector<Scalar> h = Vector<Scalar>::Zero(n);
  if (c.empty()) return h;
  const Index m = static_cast<Index>(c.size());
  Matrix<Scalar> sys(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      sys(i, j) = (i == j ? Scalar(1) : Scalar(0)) - mc(c[i], c[j]);
  const Vector<Scalar> ones = Vector<Scalar>::Ones(m);
  Vector<Scalar> hc = Eigen::PartialPivLU<Matrix<Scalar>>(sys).solve(ones);
  const double scale = std::max(1.0, double(hc.cwiseAbs().maxCoeff()));
  if (double((sys * hc - ones).cwiseAbs().maxCoeff()) >
      config::verification_tol * scale)
    throw NumericalError("expected_hitting: residual check failed");
  for (Index i = 0; i < m; ++i) h[c[i]] = hc[i];
  return h;
}

// E_x[first visit of A at time >= k] for every start x. k = 0 recovers the
// plain hitting time; k = 1 from a state inside A is the return time.
template <typename Scalar>
Vector<Scalar> delayed_hitting(const MarkovChain<Scalar>& mc, const StateSet& a,
                               Index k) {
  if (k < 0) throw ValidationError("delayed_hitting: negative delay");
  const Vector<Scalar> h = expected_hitting(mc, a);
  Vector<Scalar> ph = h;
  for (Index step = 0; step < k; ++step) ph = mc.kernel() * ph;
  return Vector<Scalar>::Constant(mc.size(), Scalar(k)) + ph;
}

// Expected return times E_x[tau_A^+] for the members of A, in A's order.
template <typename Scalar>
Vector<Scalar> expected_return_times(const MarkovChain<Scalar>& mc,
                                     StateSet a) {
  a = normalize_set(mc.size(), a);
  const Vector<Scalar> d1 = delayed_hitting(mc, a, 1);
  Vector<Scalar> out(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    out[static_cast<Index>(i)] = d1[a[i]];
  return out;
}

// sum over x in A of pi(x) E_x[first visit of A at time >= k]; equals 1 at
// k = 1 and is at most k in general.
template <typename Scalar>
Scalar kac_sum(const MarkovChain<Scalar>& mc, StateSet a, Index k) {
  a = normalize_set(mc.size(), a);
  const Vector<Scalar> dk = delayed_hitting(mc, a, k);
  const Vector<Scalar>& pi = mc.stationary();
  Scalar s = Scalar(0);
  for (Index x : a) s += pi[x] * dk[x];
  return s;
}

struct HittingReport {
  double value = 0.0;
  Index argmax_state = -1;
  StateSet argmax_set;
  double alpha = 0.0;
  std::uint64_t sets_examined = 0;
  std::string warning;
};

namespace detail {

// Keeps the largest (value, set, state) seen; near-ties within tol resolve
// to the lexicographically smallest sorted set, then the smallest state.
struct ArgmaxKeeper {
  double value = -1.0;
  StateSet set;
  Index state = -1;
  double tol = 1e-9;

  void offer(double v, const StateSet& a, Index x) {
    if (state < 0 || v > value + tol) {
      value = v;
      set = a;
      state = x;
      return;
    }
    if (v >= value - tol) {
      if (a < set || (a == set && x < state)) {
        value = std::max(value, v);
        set = a;
        state = x;
      }
    }
  }
};

// Enumerates the inclusion-minimal sets whose mass reaches alpha, visiting
// states in decreasing-mass order so that every recorded set is minimal and
// every minimal set is recorded exactly once.
template <typename Scalar, typename Visit>
void for_each_minimal_set(const Vector<Scalar>& pi, Scalar alpha,
                          Visit&& visit) {
  const Index n = pi.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (pi[a] != pi[b]) return pi[a] > pi[b];
    return a < b;
  });
  StateSet current;
  auto rec = [&](auto&& self, std::size_t from, Scalar mass) -> void {
    if (mass >= alpha) {
      visit(const_cast<const StateSet&>(current));
      return;
    }
    for (std::size_t i = from; i < order.size(); ++i) {
      current.push_back(order[i]);
      self(self, i + 1, mass + pi[order[i]]);
      current.pop_back();
    }
  };
  rec(rec, 0, Scalar(0));
}

}  // namespace detail

// Worst expected hitting time of a set holding stationary mass at least
// alpha: max over starts x and over such sets A of E_x[tau_A]. Only the
// inclusion-minimal sets need examining. Exhaustive, so limited to small
// chains; see the sampling estimator for larger ones.
template <typename Scalar>
HittingReport t_hit_alpha(const MarkovChain<Scalar>& mc, Scalar alpha,
                          Index max_states = 20) {
  if (!(alpha > Scalar(0)) || alpha > Scalar(1))
    throw ValidationError("t_hit_alpha: level must lie in (0, 1]");
  const Index n = mc.size();
  if (n > max_states)
    throw ScaleError("t_hit_alpha: exhaustive set enumeration is limited to " +
                     std::to_string(max_states) + " states");
  const Vector<Scalar>& pi = mc.stationary();
  HittingReport rep;
  rep.alpha = double(alpha);
  if (alpha >= Scalar(0.5))
    rep.warning = "level at or above 1/2: large-set equivalences assume a level below 1/2";
  detail::ArgmaxKeeper best;
  std::uint64_t examined = 0;
  detail::for_each_minimal_set(pi, alpha, [&](const StateSet& a_sorted_by_pi) {
    ++examined;
    StateSet a = a_sorted_by_pi;
    std::sort(a.begin(), a.end());
    const Vector<Scalar> h = expected_hitting(mc, a);
    for (Index x = 0; x < n; ++x) best.offer(double(h[x]), a, x);
  });
  rep.sets_examined = examined;
  rep.value = best.value;
  rep.argmax_set = best.set;
  rep.argmax_state = best.state;
  return rep;
}

// Worst product pi(A) E_x[tau_A] over every nonempty target set and every
// start. Exhaustive over the full power set, so limited to small chains.
template <typename Scalar>
HittingReport t_prod(const MarkovChain<Scalar>& mc, Index max_states = 16) {
  const Index n = mc.size();
  if (n > max_states)
    throw ScaleError("t_prod: power-set enumeration is limited to " +
                     std::to_string(max_states) + " states");
  const Vector<Scalar>& pi = mc.stationary();
  HittingReport rep;
  detail::ArgmaxKeeper best;
  const std::uint64_t full = (std::uint64_t(1) << n) - 1;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    StateSet a;
    for (Index i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i)) a.push_back(i);
    const Scalar pa = set_mass(pi, a);
    const Vector<Scalar> h = expected_hitting(mc, a);
    for (Index x = 0; x < n; ++x) best.offer(double(pa * h[x]), a, x);
  }
  rep.sets_examined = full;
  rep.value = best.value;
  rep.argmax_set = best.set;
  rep.argmax_state = best.state;
  return rep;
}

}  // namespace chainlab
