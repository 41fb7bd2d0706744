#pragma once

// The standard chain corpus: a few hundred small, deterministic fixtures
// spanning reversible and non-reversible, periodic and aperiodic, fast and
// bottlenecked behaviour. Every entry has at most 12 states so that each
// exact routine stays cheap.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/generators.hpp"
#include "chainlab/trees.hpp"

namespace chainlab {

struct NamedChain {
  std::string name;
  MarkovChain<double> chain;
};

inline std::vector<NamedChain> standard_corpus() {
  std::vector<NamedChain> out;
  auto add = [&](std::string name, MarkovChain<double> mc) {
    out.push_back({std::move(name), std::move(mc)});
  };
  auto tag = [](const char* fmt, auto... args) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf);
  };

  add("two_state(0.5,0.5)", two_state<double>(0.5, 0.5));
  add("two_state(1,1)", two_state<double>(1.0, 1.0));
  add("two_state(0.3,0.7)", two_state<double>(0.3, 0.7));
  add("two_state(0.9,0.2)", two_state<double>(0.9, 0.2));
  add("two_state(0.05,0.95)", two_state<double>(0.05, 0.95));

  for (int n = 2; n <= 12; ++n)
    add(tag("path_walk(%d)", n), path_walk<double>(n));
  for (int n = 3; n <= 12; ++n)
    add(tag("lazy(path_walk(%d))", n), lazy(path_walk<double>(n)));
  for (int n = 3; n <= 12; ++n)
    add(tag("biased_cycle(%d)", n), biased_cycle<double>(n));
  for (int n : {4, 8, 12})
    add(tag("lazy(biased_cycle(%d))", n), lazy(biased_cycle<double>(n)));
  for (int n = 4; n <= 12; ++n)
    add(tag("cycle_walk(%d)", n), cycle_walk<double>(n));
  for (int n : {4, 8})
    add(tag("lazy(cycle_walk(%d))", n), lazy(cycle_walk<double>(n)));
  for (int n = 2; n <= 12; ++n)
    add(tag("greasy_ladder(%d)", n), greasy_ladder<double>(n));
  for (int n = 2; n <= 5; ++n)
    add(tag("glued_cliques(%d)", n), glued_cliques<double>(n));
  for (int d : {1, 2}) {
    add(tag("binary_tree_walk(%d)", d), binary_tree_walk<double>(d));
    add(tag("lazy(binary_tree_walk(%d))", d), lazy(binary_tree_walk<double>(d)));
  }

  add("weighted_triangle",
      weighted_graph_walk<double>(3, {{{0, 1}, 1.0}, {{1, 2}, 2.0}, {{0, 2}, 3.0}}));
  add("weighted_square_chord",
      weighted_graph_walk<double>(4, {{{0, 1}, 1.0},
                                      {{1, 2}, 1.0},
                                      {{2, 3}, 2.0},
                                      {{3, 0}, 2.0},
                                      {{0, 2}, 0.5}}));
  add("weighted_barbell",
      weighted_graph_walk<double>(6, {{{0, 1}, 2.0},
                                      {{1, 2}, 2.0},
                                      {{0, 2}, 2.0},
                                      {{3, 4}, 2.0},
                                      {{4, 5}, 2.0},
                                      {{3, 5}, 2.0},
                                      {{2, 3}, 0.1}}));

  for (int n = 4; n <= 12; ++n)
    for (std::uint64_t seed : {1ull, 2ull})
      add(tag("random_tree_walk(%d,seed=%d)", n, int(seed)),
          random_tree_walk<double>(n, seed));
  for (int n = 3; n <= 12; ++n)
    for (std::uint64_t seed = 1; seed <= 14; ++seed)
      add(tag("random_reversible(%d,seed=%d)", n, int(seed)),
          random_reversible<double>(n, seed));
  for (int n = 3; n <= 8; ++n)
    for (std::uint64_t seed : {1ull, 2ull})
      add(tag("random_dense(%d,seed=%d)", n, int(seed)),
          random_dense<double>(n, seed));

  {
    auto base = biased_cycle<double>(6);
    Vector<double> hold(6);
    for (Index x = 0; x < 6; ++x) hold[x] = 0.2 + 0.1 * double(x);
    add("loop_perturbed(biased_cycle(6))", loop_perturbation(base, hold));
    add("loop_perturbed(random_reversible(8,seed=3))",
        loop_perturbation(random_reversible<double>(8, 3), 0.35));
  }

  return out;
}

}  // namespace chainlab
