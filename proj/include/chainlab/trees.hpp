#pragma once

// Weighted trees and their random walks. Hitting times along a tree follow
// from per-edge crossing costs in linear time, giving an independent check
// on the dense linear-solve route. Stationary masses come straight from the
// conductances: pi(x) = c(x) / (2 C), the normalizer counting each edge
// from both endpoints.

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/checks.hpp"
#include "chainlab/distances.hpp"
#include "chainlab/hitting.hpp"
#include "chainlab/numerics.hpp"

namespace chainlab {

template <typename Scalar = double>
struct TreeEdge {
  Index u;
  Index v;
  Scalar c;
};

template <typename Scalar = double>
class WeightedTree {
 public:
  WeightedTree(Index n, std::vector<TreeEdge<Scalar>> edges)
      : n_(n), edges_(std::move(edges)) {
    if (n_ < 2) throw ValidationError("WeightedTree: need at least 2 vertices");
    if (static_cast<Index>(edges_.size()) != n_ - 1)
      throw ValidationError("WeightedTree: a tree on n vertices has n-1 edges");
    adj_.assign(static_cast<std::size_t>(n_), {});
    for (const auto& e : edges_) {
      if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_ || e.u == e.v)
        throw ValidationError("WeightedTree: bad edge endpoints");
      if (!(e.c > Scalar(0)))
        throw ValidationError("WeightedTree: conductance must be positive");
      adj_[static_cast<std::size_t>(e.u)].push_back({e.v, e.c});
      adj_[static_cast<std::size_t>(e.v)].push_back({e.u, e.c});
    }
    // Connectivity; with n-1 edges this also rules out cycles.
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<Index> stack{0};
    seen[0] = 1;
    Index count = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (const auto& [v, c] : adj_[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++count;
          stack.push_back(v);
        }
    }
    if (count != n_) throw ValidationError("WeightedTree: not connected");
  }

  Index size() const { return n_; }
  const std::vector<TreeEdge<Scalar>>& edges() const { return edges_; }
  const std::vector<std::vector<std::pair<Index, Scalar>>>& adjacency() const {
    return adj_;
  }

  // Conductance at a vertex and the stationary law c(x) / (2 C).
  Scalar vertex_conductance(Index x) const {
    Scalar s = Scalar(0);
    for (const auto& [v, c] : adj_[static_cast<std::size_t>(x)]) s += c;
    return s;
  }

  Vector<Scalar> stationary() const {
    Vector<Scalar> pi(n_);
    for (Index x = 0; x < n_; ++x) pi[x] = vertex_conductance(x);
    pi /= pi.sum();
    return pi;
  }

  MarkovChain<Scalar> walk() const {
    Matrix<Scalar> p = Matrix<Scalar>::Zero(n_, n_);
    for (Index x = 0; x < n_; ++x) {
      const Scalar cx = vertex_conductance(x);
      for (const auto& [v, c] : adj_[static_cast<std::size_t>(x)])
        p(x, v) = c / cx;
    }
    return MarkovChain<Scalar>(std::move(p));
  }

  // E_x[time to reach y] for every x, in O(n): crossing the edge from v to
  // its parent (rooted at y) costs (2 W(v) + c) / c, where W(v) is the total
  // conductance strictly inside v's subtree; costs add along the path.
  Vector<Scalar> hitting_to(Index y) const {
    if (y < 0 || y >= n_)
      throw ValidationError("hitting_to: target out of range");
    std::vector<Index> order;
    std::vector<Index> parent(static_cast<std::size_t>(n_), -1);
    std::vector<Scalar> edge_up(static_cast<std::size_t>(n_), Scalar(0));
    order.reserve(static_cast<std::size_t>(n_));
    order.push_back(y);
    parent[static_cast<std::size_t>(y)] = y;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Index u = order[i];
      for (const auto& [v, c] : adj_[static_cast<std::size_t>(u)])
        if (parent[static_cast<std::size_t>(v)] < 0) {
          parent[static_cast<std::size_t>(v)] = u;
          edge_up[static_cast<std::size_t>(v)] = c;
          order.push_back(v);
        }
    }
    std::vector<Scalar> subtree(static_cast<std::size_t>(n_), Scalar(0));
    for (std::size_t i = order.size(); i-- > 1;) {
      const Index v = order[i];
      subtree[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])] +=
          subtree[static_cast<std::size_t>(v)] +
          edge_up[static_cast<std::size_t>(v)];
    }
    Vector<Scalar> h = Vector<Scalar>::Zero(n_);
    for (std::size_t i = 1; i < order.size(); ++i) {
      const Index v = order[i];
      const Index p = parent[static_cast<std::size_t>(v)];
      const Scalar c = edge_up[static_cast<std::size_t>(v)];
      const Scalar w = subtree[static_cast<std::size_t>(v)];
      h[v] = h[p] + (Scalar(2) * w + c) / c;
    }
    return h;
  }

 private:
  Index n_;
  std::vector<TreeEdge<Scalar>> edges_;
  std::vector<std::vector<std::pair<Index, Scalar>>> adj_;
};

// The vertex minimizing the stationary mass of its heaviest remaining
// component; such a centroid always keeps every component at mass <= 1/2.
template <typename Scalar = double>
struct CentralNode {
  Index node = -1;
  Scalar heaviest = Scalar(1);
};

template <typename Scalar>
CentralNode<Scalar> central_node(const WeightedTree<Scalar>& tree) {
  const Index n = tree.size();
  const Vector<Scalar> pi = tree.stationary();
  const auto& adj = tree.adjacency();
  CentralNode<Scalar> best;
  for (Index u = 0; u < n; ++u) {
    Scalar heaviest = Scalar(0);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[static_cast<std::size_t>(u)] = 1;
    for (const auto& [root, c0] : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(root)]) continue;
      Scalar mass = Scalar(0);
      std::vector<Index> stack{root};
      seen[static_cast<std::size_t>(root)] = 1;
      while (!stack.empty()) {
        const Index x = stack.back();
        stack.pop_back();
        mass += pi[x];
        for (const auto& [v, c] : adj[static_cast<std::size_t>(x)])
          if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = 1;
            stack.push_back(v);
          }
      }
      heaviest = std::max(heaviest, mass);
    }
    if (best.node < 0 || heaviest < best.heaviest) {
      best.node = u;
      best.heaviest = heaviest;
    }
  }
  return best;
}

// Worst expected time to reach the central node.
template <typename Scalar>
Scalar t_central(const WeightedTree<Scalar>& tree) {
  return tree.hitting_to(central_node(tree).node).maxCoeff();
}

// For every singleton target y, the worst hitting time obeys
// max_x E_x[tau_y] <= t_central (1 + 1 / pi(y)).
template <typename Scalar>
std::vector<CheckResult> central_hit_bound_checks(
    const WeightedTree<Scalar>& tree) {
  const Vector<Scalar> pi = tree.stationary();
  const Scalar tv = t_central(tree);
  std::vector<CheckResult> out;
  for (Index y = 0; y < tree.size(); ++y) {
    const double lhs = double(tree.hitting_to(y).maxCoeff());
    const double rhs = double(tv * (Scalar(1) + Scalar(1) / pi[y]));
    out.push_back(make_check("tree_hit_le_center_bound", lhs, rhs));
  }
  return out;
}

// Redraws every conductance uniformly from [c_low, c_high] and records the
// lazy-walk mixing time per trial; reports the spread as max over min.
struct RobustnessReport {
  std::vector<double> lazy_mix_times;
  double max_over_min = 1.0;
};

inline RobustnessReport robustness_experiment(
    Index n, const std::vector<std::pair<Index, Index>>& shape, Index trials,
    double c_low, double c_high, std::uint64_t seed) {
  if (!(c_low > 0.0) || !(c_high >= c_low))
    throw ValidationError("robustness_experiment: bad conductance range");
  if (trials < 1)
    throw ValidationError("robustness_experiment: need at least one trial");
  RobustnessReport rep;
  for (Index trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(mix_seed(seed, 0x74726565ULL, std::uint64_t(trial)));
    std::uniform_real_distribution<double> unif(c_low, c_high);
    std::vector<TreeEdge<double>> edges;
    edges.reserve(shape.size());
    for (const auto& [u, v] : shape) edges.push_back({u, v, unif(rng)});
    WeightedTree<double> tree(n, std::move(edges));
    const auto mt = mixing_time(lazy(tree.walk()));
    if (!mt.attained)
      throw ConvergenceError("robustness_experiment: mixing time not reached");
    rep.lazy_mix_times.push_back(double(mt.time));
  }
  const auto [lo, hi] = std::minmax_element(rep.lazy_mix_times.begin(),
                                            rep.lazy_mix_times.end());
  rep.max_over_min = (*lo > 0.0) ? (*hi / *lo) : 1.0;
  return rep;
}

// Per-state extra holding: Q = D_a + (I - D_a) P. The stationary law tilts
// to pi(x) / (1 - a(x)), renormalized.
template <typename Scalar>
MarkovChain<Scalar> loop_perturbation(const MarkovChain<Scalar>& mc,
                                      const Vector<Scalar>& hold) {
  const Index n = mc.size();
  if (hold.size() != n)
    throw DimensionError("loop_perturbation: holding vector length mismatch");
  for (Index x = 0; x < n; ++x)
    if (!(hold[x] > Scalar(0)) || !(hold[x] < Scalar(1)))
      throw HoldingProbabilityError(
          "loop_perturbation: holding probabilities must lie in (0, 1)");
  Matrix<Scalar> q = mc.kernel();
  for (Index x = 0; x < n; ++x) {
    q.row(x) *= (Scalar(1) - hold[x]);
    q(x, x) += hold[x];
  }
  return MarkovChain<Scalar>(std::move(q));
}

template <typename Scalar>
MarkovChain<Scalar> loop_perturbation(const MarkovChain<Scalar>& mc,
                                      Scalar hold) {
  return loop_perturbation(
      mc, Vector<Scalar>(Vector<Scalar>::Constant(mc.size(), hold)));
}

// Uniformly random attachment tree with unit or drawn conductances, for
// sweep and robustness fixtures.
template <typename Scalar = double>
WeightedTree<Scalar> random_weighted_tree(Index n, std::uint64_t seed,
                                          Scalar c_low = Scalar(1),
                                          Scalar c_high = Scalar(2)) {
  std::mt19937_64 rng(mix_seed(seed, 0x77747265ULL));
  std::uniform_real_distribution<double> unif{double(c_low), double(c_high)};
  std::vector<TreeEdge<Scalar>> edges;
  for (Index v = 1; v < n; ++v) {
    std::uniform_int_distribution<Index> pick(0, v - 1);
    edges.push_back({pick(rng), v, Scalar(unif(rng))});
  }
  return WeightedTree<Scalar>(n, std::move(edges));
}

}  // namespace chainlab
