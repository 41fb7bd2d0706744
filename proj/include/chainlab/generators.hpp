#pragma once

// Parameterized chain families used throughout the test corpus and the CLI.
// Every generator is deterministic given its arguments (and seed, where one
// applies) and returns a validated MarkovChain.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/numerics.hpp"

namespace chainlab {

// Two states flipping with rates p: 0 -> 1 and q: 1 -> 0.
template <typename Scalar = double>
MarkovChain<Scalar> two_state(Scalar p, Scalar q) {
  if (!(p > Scalar(0)) || !(q > Scalar(0)) || p > Scalar(1) || q > Scalar(1))
    throw ValidationError("two_state: rates must lie in (0, 1]");
  Matrix<Scalar> m(2, 2);
  m << Scalar(1) - p, p, q, Scalar(1) - q;
  return MarkovChain<Scalar>(std::move(m));
}

// Walk on a cycle of n states stepping clockwise with probability 2/3 and
// counterclockwise with probability 1/3. Stationary law is uniform; the
// chain is far from reversible for n >= 3.
template <typename Scalar = double>
MarkovChain<Scalar> biased_cycle(Index n) {
  if (n < 3) throw ValidationError("biased_cycle: need at least 3 states");
  Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, (i + 1) % n) = Scalar(2) / Scalar(3);
    m(i, (i + n - 1) % n) = Scalar(1) / Scalar(3);
  }
  return MarkovChain<Scalar>(std::move(m));
}

// Simple random walk on the cycle of n states.
template <typename Scalar = double>
MarkovChain<Scalar> cycle_walk(Index n) {
  if (n < 3) throw ValidationError("cycle_walk: need at least 3 states");
  Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, (i + 1) % n) = Scalar(1) / Scalar(2);
    m(i, (i + n - 1) % n) = Scalar(1) / Scalar(2);
  }
  return MarkovChain<Scalar>(std::move(m));
}

// Ladder of n rungs: from rung i < n, climb to i + 1 with probability 1/2
// and slip back to rung 1 otherwise; the top rung always drops to rung 1.
// Stationary mass decays geometrically up the ladder.
template <typename Scalar = double>
MarkovChain<Scalar> greasy_ladder(Index n) {
  if (n < 2) throw ValidationError("greasy_ladder: need at least 2 rungs");
  Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = Scalar(1) / Scalar(2);
    m(i, 0) += Scalar(1) / Scalar(2);
  }
  m(n - 1, 0) = Scalar(1);
  return MarkovChain<Scalar>(std::move(m));
}

// Simple random walk on the path 1 - 2 - ... - n with reflecting endpoints.
// Periodic for every n; its lazy version mixes in order n^2.
template <typename Scalar = double>
MarkovChain<Scalar> path_walk(Index n) {
  if (n < 2) throw ValidationError("path_walk: need at least 2 states");
  Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
  m(0, 1) = Scalar(1);
  m(n - 1, n - 2) = Scalar(1);
  for (Index i = 1; i + 1 < n; ++i) {
    m(i, i - 1) = Scalar(1) / Scalar(2);
    m(i, i + 1) = Scalar(1) / Scalar(2);
  }
  return MarkovChain<Scalar>(std::move(m));
}

// Random walk on two complete graphs K_{n+1} sharing no vertices, joined by
// a single bridge edge between vertex 0 (left) and vertex n + 1 (right).
// A bottleneck family: hitting the far clique takes order n^2 moves.
template <typename Scalar = double>
MarkovChain<Scalar> glued_cliques(Index n) {
  if (n < 2) throw ValidationError("glued_cliques: need clique size >= 3");
  const Index m = n + 1;        // vertices per clique
  const Index total = 2 * m;
  Matrix<Scalar> adj = Matrix<Scalar>::Zero(total, total);
  for (Index block = 0; block < 2; ++block) {
    const Index base = block * m;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        if (i != j) adj(base + i, base + j) = Scalar(1);
  }
  adj(0, m) = Scalar(1);
  adj(m, 0) = Scalar(1);
  for (Index i = 0; i < total; ++i) adj.row(i) /= adj.row(i).sum();
  return MarkovChain<Scalar>(std::move(adj));
}

// Random walk on the complete binary tree of the given depth (root plus
// depth generations; depth 1 is a three-vertex star).
template <typename Scalar = double>
MarkovChain<Scalar> binary_tree_walk(Index depth) {
  if (depth < 1) throw ValidationError("binary_tree_walk: depth must be >= 1");
  const Index n = (Index(1) << (depth + 1)) - 1;
  Matrix<Scalar> adj = Matrix<Scalar>::Zero(n, n);
  for (Index v = 1; v < n; ++v) {
    const Index parent = (v - 1) / 2;
    adj(v, parent) = Scalar(1);
    adj(parent, v) = Scalar(1);
  }
  for (Index i = 0; i < n; ++i) adj.row(i) /= adj.row(i).sum();
  return MarkovChain<Scalar>(std::move(adj));
}

// Weighted-graph walk: P(x, y) proportional to the edge conductance c(x, y).
// Edges are undirected; the walk is reversible with pi(x) proportional to
// the total conductance at x.
template <typename Scalar = double>
MarkovChain<Scalar> weighted_graph_walk(
    Index n, const std::vector<std::pair<std::pair<Index, Index>, Scalar>>& edges) {
  Matrix<Scalar> c = Matrix<Scalar>::Zero(n, n);
  for (const auto& [uv, w] : edges) {
    const auto [u, v] = uv;
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
      throw ValidationError("weighted_graph_walk: bad edge");
    if (!(w > Scalar(0)))
      throw ValidationError("weighted_graph_walk: conductance must be positive");
    c(u, v) += w;
    c(v, u) += w;
  }
  for (Index i = 0; i < n; ++i) {
    const Scalar deg = c.row(i).sum();
    if (!(deg > Scalar(0)))
      throw IrreducibilityError("weighted_graph_walk: isolated vertex");
    c.row(i) /= deg;
  }
  return MarkovChain<Scalar>(std::move(c));
}

// Uniformly attached random tree on n vertices: vertex v >= 1 picks its
// parent uniformly among 0..v-1. Deterministic given the seed.
inline std::vector<std::pair<Index, Index>> random_tree_edges(Index n,
                                                              std::uint64_t seed) {
  if (n < 2) throw ValidationError("random_tree_edges: need >= 2 vertices");
  std::mt19937_64 rng(mix_seed(seed, 0x7265657473ULL));
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (Index v = 1; v < n; ++v) {
    std::uniform_int_distribution<Index> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return edges;
}

// Walk on a random tree with unit conductances.
template <typename Scalar = double>
MarkovChain<Scalar> random_tree_walk(Index n, std::uint64_t seed) {
  std::vector<std::pair<std::pair<Index, Index>, Scalar>> edges;
  for (const auto& [u, v] : random_tree_edges(n, seed))
    edges.push_back({{u, v}, Scalar(1)});
  return weighted_graph_walk<Scalar>(n, edges);
}

// Reversible chain built as a weighted walk on a random connected graph:
// a random attachment tree plus extra random edges, conductances drawn
// uniformly from [1, 2]. Deterministic given the seed.
template <typename Scalar = double>
MarkovChain<Scalar> random_reversible(Index n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("random_reversible: need >= 2 states");
  std::mt19937_64 rng(mix_seed(seed, 0x72657665ULL));
  std::uniform_real_distribution<double> unif(1.0, 2.0);
  std::vector<std::pair<std::pair<Index, Index>, Scalar>> edges;
  std::set<std::pair<Index, Index>> used;
  for (const auto& [u, v] : random_tree_edges(n, seed)) {
    edges.push_back({{u, v}, Scalar(unif(rng))});
    used.insert({std::min(u, v), std::max(u, v)});
  }
  const Index extra = n / 2;
  std::uniform_int_distribution<Index> pick(0, n - 1);
  for (Index k = 0; k < extra; ++k) {
    const Index u = pick(rng);
    const Index v = pick(rng);
    const double w = unif(rng);
    if (u == v) continue;
    const auto key = std::make_pair(std::min(u, v), std::max(u, v));
    if (used.count(key)) continue;
    used.insert(key);
    edges.push_back({{u, v}, Scalar(w)});
  }
  return weighted_graph_walk<Scalar>(n, edges);
}

// Dense positive random kernel: rows drawn from U[0.05, 1] and normalized.
// Aperiodic, strongly mixing, and almost surely non-reversible.
template <typename Scalar = double>
MarkovChain<Scalar> random_dense(Index n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("random_dense: need >= 2 states");
  std::mt19937_64 rng(mix_seed(seed, 0x64656e7365ULL));
  std::uniform_real_distribution<double> unif{0.05, 1.0};
  Matrix<Scalar> m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = Scalar(unif(rng));
    m.row(i) /= m.row(i).sum();
  }
  return MarkovChain<Scalar>(std::move(m));
}

// Named family dispatch used by the CLI and corpus definitions.
struct FamilySpec {
  std::string family;
  std::map<std::string, double> params;
};

template <typename Scalar = double>
MarkovChain<Scalar> make_chain(const FamilySpec& spec) {
  const auto& ps = spec.params;
  auto get = [&](const std::string& key) {
    auto it = ps.find(key);
    if (it == ps.end())
      throw ValidationError("make_chain: missing parameter '" + key +
                            "' for family '" + spec.family + "'");
    return it->second;
  };
  auto geti = [&](const std::string& key) {
    const double v = get(key);
    const Index i = static_cast<Index>(v);
    if (double(i) != v)
      throw ValidationError("make_chain: parameter '" + key +
                            "' must be an integer");
    return i;
  };
  auto getu = [&](const std::string& key) {
    const double v = get(key);
    if (v < 0 || double(static_cast<std::uint64_t>(v)) != v)
      throw ValidationError("make_chain: parameter '" + key +
                            "' must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  };
  if (spec.family == "two_state")
    return two_state<Scalar>(Scalar(get("p")), Scalar(get("q")));
  if (spec.family == "biased_cycle") return biased_cycle<Scalar>(geti("n"));
  if (spec.family == "cycle_walk") return cycle_walk<Scalar>(geti("n"));
  if (spec.family == "greasy_ladder") return greasy_ladder<Scalar>(geti("n"));
  if (spec.family == "path_walk") return path_walk<Scalar>(geti("n"));
  if (spec.family == "glued_cliques") return glued_cliques<Scalar>(geti("n"));
  if (spec.family == "binary_tree_walk")
    return binary_tree_walk<Scalar>(geti("depth"));
  if (spec.family == "random_tree_walk")
    return random_tree_walk<Scalar>(geti("n"), getu("seed"));
  if (spec.family == "random_reversible")
    return random_reversible<Scalar>(geti("n"), getu("seed"));
  if (spec.family == "random_dense")
    return random_dense<Scalar>(geti("n"), getu("seed"));
  throw ValidationError("make_chain: unknown family '" + spec.family + "'");
}

}  // namespace chainlab
