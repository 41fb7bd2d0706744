// Acceptance gate: nine numbered criteria, one verdict line each, exit code
// equal to the number of failures. Notes under a verdict carry the measured
// margins so a red line is diagnosable from the log alone.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/corpus.hpp"
#include "chainlab/distances.hpp"
#include "chainlab/generators.hpp"
#include "chainlab/hitting.hpp"
#include "chainlab/mc_sim.hpp"
#include "chainlab/numerics.hpp"
#include "chainlab/stopping.hpp"
#include "chainlab/trees.hpp"
#include "chainlab/verify_suite.hpp"

using namespace chainlab;

namespace {

struct Verdict {
  std::string name;
  bool pass = true;
  double seconds = 0.0;
  std::vector<std::string> notes;

  void fail(std::string why) {
    pass = false;
    notes.push_back("FAILED: " + std::move(why));
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
  void note(std::string s) { notes.push_back(std::move(s)); }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Vector<double> point_mass(Index n, Index x) {
  Vector<double> mu = Vector<double>::Zero(n);
  mu[x] = 1.0;
  return mu;
}

const std::vector<NamedChain>& corpus() {
  static const std::vector<NamedChain> c = standard_corpus();
  return c;
}

bool is_reversible(const MarkovChain<double>& mc) {
  return mc.reversibility_defect() <= 1e-9;
}

StateSet mask_to_set(Index n, std::uint64_t mask) {
  StateSet a;
  for (Index x = 0; x < n; ++x)
    if (mask >> x & 1) a.push_back(x);
  return a;
}

// 1. The ladder family admits closed forms for its stationary law, its
//    per-rung return times, and its optimal stationary stopping mean.
Verdict ladder_closed_forms() {
  Verdict v{"ladder family closed forms"};
  double worst_pi = 0.0, worst_ret = 0.0, worst_closed = 0.0;
  for (Index n = 2; n <= 12; ++n) {
    const auto mc = greasy_ladder(n);
    const double z = 1.0 - std::ldexp(1.0, -int(n));
    const Vector<double>& pi = mc.stationary();
    for (Index i = 0; i < n; ++i)
      worst_pi = std::max(
          worst_pi, std::abs(pi[i] - std::ldexp(1.0, -int(i) - 1) / z));

    for (Index i = 0; i < n; ++i) {
      const double ret = expected_return_times(mc, StateSet{i})[0];
      worst_ret =
          std::max(worst_ret, std::abs(ret - std::ldexp(1.0, int(i) + 1) * z));
    }

    const double stop = t_stop(mc).value;
    const double target = double(n) - 1.0;
    const double closed =
        (double(n) - 2.0 + std::ldexp(1.0, 1 - int(n))) / z;
    worst_closed = std::max(worst_closed, std::abs(stop - closed));
    if (std::abs(stop - target) > 1e-9)
      v.fail("t_stop(" + std::to_string(n) + ") = " + fmt(stop) +
             ", asserted value n-1 = " + fmt(target));
  }
  v.expect(worst_pi <= 1e-12,
           "stationary law deviates " + fmt(worst_pi) + " from 2^-i/(1-2^-n)");
  v.expect(worst_ret <= 1e-9,
           "return times deviate " + fmt(worst_ret) + " from 2^i(1-2^-n)");
  v.note("stationary law matches 2^-i/(1-2^-n), max dev " + fmt(worst_pi));
  v.note("rung return times match 2^i(1-2^-n), max dev " + fmt(worst_ret) +
         "; the hitting time of rung i from rung 1 is 2^i - 2 instead, so "
         "that formula is the Kac return time 1/pi(i)");
  if (!v.pass) {
    v.note("measured t_stop matches (n-2+2^(1-n))/(1-2^(-n)) exactly, max dev " +
           fmt(worst_closed));
    v.note("summing return times in place of hitting times over the "
           "stationary target law gives n-1; summing the true hitting times "
           "2^i - 2 gives the measured value, so the n-1 total is not "
           "attainable by any stationary stopping rule here");
  }
  return v;
}

// 2. The inequality battery holds on the whole corpus with slack >= -1e-9;
//    small chains get exhaustive set enumeration inside the battery.
Verdict corpus_inequalities() {
  Verdict v{"inequality battery over the standard corpus"};
  const VerifyOptions opt;
  std::size_t chains = 0, evaluated = 0, skipped = 0, violations = 0;
  double min_slack = 1e300;
  std::vector<std::string> bad;
  for (const auto& entry : corpus()) {
    ++chains;
    for (const auto& c : verify_chain(entry.chain, opt)) {
      if (c.status == CheckStatus::skipped) {
        ++skipped;
        continue;
      }
      ++evaluated;
      min_slack = std::min(min_slack, c.slack);
      if (c.status != CheckStatus::ok || c.slack < -1e-9) {
        ++violations;
        bad.push_back(entry.name + " / " + c.name + " slack " + fmt(c.slack));
      }
    }
  }
  v.expect(chains >= 200,
           "corpus has only " + std::to_string(chains) + " chains");
  v.expect(violations == 0,
           std::to_string(violations) + " violated checks, first: " +
               (bad.empty() ? std::string("-") : bad.front()));
  v.note(std::to_string(chains) + " chains, " + std::to_string(evaluated) +
         " checks evaluated, " + std::to_string(skipped) +
         " skipped by hypothesis, min slack " + fmt(min_slack));
  return v;
}

// 3. The resolvent-smoothed distance never increases, periodic chains
//    included.
Verdict resolvent_monotone() {
  Verdict v{"resolvent distance monotonicity"};
  double worst = -1.0;
  std::string where;
  for (const auto& entry : corpus()) {
    const auto prof = profile_geometric_tv(entry.chain, 129);
    for (Index t = 1; t <= 128; ++t) {
      const double rise = prof.at(t + 1) - prof.at(t);
      if (rise > worst) {
        worst = rise;
        where = entry.name + " at t = " + std::to_string(t);
      }
    }
  }
  v.expect(worst <= 1e-10, "distance rises by " + fmt(worst) + " on " + where);
  v.note("largest one-step rise " + fmt(worst) + " (" + where + ")");
  return v;
}

// 4. Independent oracles agree: series vs resolvent, sampler vs solver,
//    sampled stopping rule vs its transcript, and the halting-state
//    consistency of exit frequencies.
Verdict oracle_triangulation() {
  Verdict v{"simulation oracle triangulation"};

  {
    // Truncated series against the closed-form resolvent kernel.
    double worst = 0.0, allowance = 1e300;
    const std::vector<MarkovChain<double>> chains = {
        path_walk(6),       cycle_walk(5),          greasy_ladder(5),
        biased_cycle(7),    lazy(cycle_walk(8)),    random_dense(6, 5)};
    for (const auto& mc : chains) {
      for (double t : {2.0, 8.0, 32.0}) {
        const auto law = TimePmf<double>::geometric(t);
        Matrix<double> series =
            Matrix<double>::Zero(mc.size(), mc.size());
        Matrix<double> pk = Matrix<double>::Identity(mc.size(), mc.size());
        for (Index k = 0; k < law.offset(); ++k) pk = pk * mc.kernel();
        for (Index j = 0; j < law.length(); ++j) {
          series += law.masses()[j] * pk;
          if (j + 1 < law.length()) pk = pk * mc.kernel();
        }
        const Matrix<double> g = geometric_law(mc, t);
        worst = std::max(worst, (g - series).cwiseAbs().maxCoeff());
        allowance = std::min(allowance, double(law.tail_mass()) + 1e-14);
      }
    }
    v.expect(worst <= allowance, "series deviates " + fmt(worst) +
                                     " from the resolvent, certified tail " +
                                     fmt(allowance));
    v.note("series vs resolvent max entry gap " + fmt(worst) +
           " within certified tail " + fmt(allowance));
  }

  {
    // Twenty hitting fixtures, a million trajectories each.
    struct Fixture {
      MarkovChain<double> mc;
      Index start;
      StateSet target;
    };
    const std::vector<Fixture> fixtures = {
        {path_walk(5), 0, {4}},
        {path_walk(8), 0, {7}},
        {lazy(path_walk(6)), 0, {5}},
        {cycle_walk(6), 0, {3}},
        {cycle_walk(9), 2, {6, 7}},
        {lazy(cycle_walk(8)), 0, {4}},
        {biased_cycle(8), 0, {5}},
        {biased_cycle(12), 3, {0}},
        {greasy_ladder(4), 0, {3}},
        {greasy_ladder(6), 0, {5}},
        {two_state(0.3, 0.2), 0, {1}},
        {two_state(0.05, 0.9), 1, {0}},
        {glued_cliques(3), 1, {6}},
        {glued_cliques(4), 2, {5, 9}},
        {binary_tree_walk(3), 0, {14}},
        {binary_tree_walk(4), 7, {0}},
        {random_tree_walk(10, 7), 0, {9}},
        {random_reversible(8, 11), 0, {7}},
        {random_dense(7, 5), 1, {0, 6}},
        {lazy(greasy_ladder(5)), 0, {4}},
    };
    double worst_z = 0.0;
    std::string where;
    std::uint64_t stream = 0;
    for (const auto& f : fixtures) {
      const double exact = expected_hitting(f.mc, f.target)[f.start];
      SimConfig cfg;
      cfg.trajectories = 1000000;
      cfg.seed = 20260814;
      cfg.stream = stream++;
      const auto est = sample_hitting(f.mc, f.start, f.target, cfg);
      v.expect(est.overflow == 0, "hitting sampler overflowed on fixture " +
                                      std::to_string(stream - 1));
      const double z =
          est.se > 0.0 ? std::abs(est.point - exact) / est.se : 0.0;
      if (z > worst_z) {
        worst_z = z;
        where = "fixture " + std::to_string(stream - 1) + " exact " +
                fmt(exact) + " sampled " + fmt(est.point);
      }
      v.expect(std::abs(est.point - exact) <= 3.0 * est.se + 1e-9,
               "sampled hitting off by " + fmt(std::abs(est.point - exact)) +
                   " > 3 se on " + where);
    }
    v.note("20 hitting fixtures at 1e6 trajectories, worst deviation " +
           fmt(worst_z) + " se (" + where + ")");
  }

  {
    // Filling-rule transcripts against pi and against sampled runs.
    const std::vector<MarkovChain<double>> chains = {
        path_walk(4),        lazy(path_walk(5)), cycle_walk(6),
        greasy_ladder(5),    biased_cycle(6),    two_state(0.35, 0.6),
        random_reversible(6, 3), glued_cliques(2)};
    double worst_mass = 0.0, worst_freq_z = 0.0;
    std::uint64_t stream = 100;
    for (const auto& mc : chains) {
      FillingOptions fopt;
      fopt.mass_tol = 5e-13;  // run tighter than the asserted 1e-12
      const auto tr = filling_rule(mc, point_mass(mc.size(), 0), fopt);
      worst_mass = std::max(
          worst_mass,
          double((tr.quota_filled - mc.stationary()).cwiseAbs().maxCoeff()));
      SimConfig cfg;
      cfg.trajectories = 200000;
      cfg.seed = 20260814;
      cfg.stream = stream++;
      const auto fs = sample_filling_rule(mc, tr, 0, cfg);
      v.expect(fs.overflow_fraction <= 1e-6,
               "sampled stopping rule failed to stop " +
                   fmt(fs.overflow_fraction) + " of trajectories");
      for (Index x = 0; x < mc.size(); ++x) {
        const double q = tr.quota_filled[x];
        const double se =
            std::sqrt(std::max(q * (1.0 - q), 1e-300) / cfg.trajectories);
        const double z = std::abs(fs.stop_freq[x] - q) / se;
        worst_freq_z = std::max(worst_freq_z, z);
        v.expect(std::abs(fs.stop_freq[x] - q) <= 3.0 * se + 1e-9,
                 "stop frequency at state " + std::to_string(x) +
                     " deviates " + fmt(z) + " se");
      }
      const double tail = 3.0 * fs.time.se + tr.tail_bound + 1e-9;
      v.expect(std::abs(fs.time.point - tr.mean_lower) <= tail,
               "sampled stop mean " + fmt(fs.time.point) +
                   " vs transcript " + fmt(tr.mean_lower));
    }
    v.expect(worst_mass <= 1e-12, "stop distribution deviates " +
                                      fmt(worst_mass) + " from pi");
    v.note("stop distribution matches pi within " + fmt(worst_mass) +
           "; sampled frequencies worst " + fmt(worst_freq_z) + " se");
  }

  {
    // Halting consistency: some state is never visited before stopping,
    // and the reported state attains that minimum.
    std::size_t violations = 0, cases = 0;
    for (const auto& entry : corpus()) {
      const auto& mc = entry.chain;
      const Vector<double>& pi = mc.stationary();
      for (Index x = 0; x < mc.size(); ++x) {
        ++cases;
        const auto ef = exit_frequencies(mc, point_mass(mc.size(), x), pi);
        double min_ratio = 1e300;
        for (Index y = 0; y < mc.size(); ++y)
          min_ratio = std::min(min_ratio, double(ef.nu[y] / pi[y]));
        const double scale = 1.0 + double(ef.nu.maxCoeff());
        if (min_ratio > 1e-8 * scale) ++violations;
        if (ef.nu[ef.halting_state] / pi[ef.halting_state] >
            min_ratio + 1e-12 * scale)
          ++violations;
      }
    }
    v.expect(violations == 0,
             std::to_string(violations) + " halting-state inconsistencies");
    v.note("halting check clean on " + std::to_string(cases) +
           " chain/start cases");
  }

  return v;
}

// 5. Exit frequencies and the filling rule describe the same optimal rule:
//    equal means within the certified truncation bound, and a never-visited
//    state always exists.
Verdict exit_frequency_consistency() {
  Verdict v{"exit frequencies against the filling rule"};
  double worst_gap = 0.0, worst_min_nu = 0.0, worst_margin = -1e300;
  std::string where;
  for (const auto& entry : corpus()) {
    const auto& mc = entry.chain;
    const Vector<double>& pi = mc.stationary();
    for (Index x = 0; x < mc.size(); ++x) {
      const auto ef = exit_frequencies(mc, point_mass(mc.size(), x), pi);
      const auto tr = filling_rule(mc, point_mass(mc.size(), x));
      const double gap = std::abs(double(ef.mean) - double(tr.mean_lower));
      if (gap - double(tr.tail_bound) > worst_margin) {
        worst_margin = gap - double(tr.tail_bound);
        where = entry.name + " start " + std::to_string(x);
      }
      worst_gap = std::max(worst_gap, gap);
      v.expect(gap <= tr.tail_bound + 1e-9,
               "means differ by " + fmt(gap) + " > tail bound " +
                   fmt(tr.tail_bound) + " on " + entry.name + " start " +
                   std::to_string(x));
      worst_min_nu = std::max(worst_min_nu, double(ef.nu.minCoeff()));
    }
  }
  v.expect(worst_min_nu <= 1e-10,
           "min exit frequency " + fmt(worst_min_nu) + " > 1e-10");
  v.note("largest mean gap " + fmt(worst_gap) + ", tightest certificate "
         "margin " + fmt(-worst_margin) + " (" + where +
         "), largest min frequency " + fmt(worst_min_nu));
  return v;
}

// 6. Family sweeps reproduce the qualitative scalings: quadratic mixing
//    against linear hitting and stopping on the drift cycle, and the
//    bottleneck pair of cliques.
Verdict scaling_sweeps() {
  Verdict v{"family scaling sweeps"};

  {
    std::vector<double> ns, tl, th, ts;
    for (Index n : {Index(8), Index(16), Index(32), Index(64)}) {
      const auto mc = biased_cycle(n);
      const auto lm = mixing_time(lazy(mc), 0.25, 80 * n * n);
      v.expect(lm.attained, "lazy mixing not attained at n = " +
                                std::to_string(n));
      double hit;
      if (n <= 16) {
        hit = t_hit_alpha(mc, 0.25).value;
      } else {
        THitEstimateOptions opt;
        opt.seed = 9;
        hit = estimate_t_hit_alpha(mc, 0.25, opt).value;
      }
      ns.push_back(double(n));
      tl.push_back(double(lm.time));
      th.push_back(hit);
      ts.push_back(t_stop(mc).value);
    }
    const double s_l = fit_loglog(ns, tl).slope;
    const double s_h = fit_loglog(ns, th).slope;
    const double s_s = fit_loglog(ns, ts).slope;
    v.expect(s_l >= 1.7 && s_l <= 2.3,
             "lazy mixing slope " + fmt(s_l) + " outside [1.7, 2.3]");
    v.expect(s_h >= 0.7 && s_h <= 1.3,
             "large-set hitting slope " + fmt(s_h) + " outside [0.7, 1.3]");
    v.expect(s_s >= 0.7 && s_s <= 1.3,
             "stopping slope " + fmt(s_s) + " outside [0.7, 1.3]");
    v.note("drift cycle slopes: lazy mixing " + fmt(s_l) + ", hitting " +
           fmt(s_h) + ", stopping " + fmt(s_s));
    if (s_s < 0.7 || s_s > 1.3) {
      std::string vals;
      for (std::size_t i = 0; i < ns.size(); ++i)
        vals += (i ? ", " : "") + fmt(ts[i]);
      // The optimal stopping mean carries a logarithmic deficit below its
      // linear growth, so the fixed grid straddles a crossover; the fit
      // settles into the band once the window shifts up one octave.
      ns.erase(ns.begin());
      ts.erase(ts.begin());
      ns.push_back(128.0);
      ts.push_back(t_stop(biased_cycle(128)).value);
      v.note("stopping means on {8,16,32,64}: " + vals +
             " (close to 1.5n - 3 log2 n + 1.5; filling-rule transcripts "
             "reproduce each value); same fit over {16,32,64,128} gives "
             "slope " + fmt(fit_loglog(ns, ts).slope));
    }
  }

  {
    double lo = 1e300, hi = 0.0;
    for (Index n : {Index(4), Index(6), Index(8)}) {
      const auto mc = glued_cliques(n);
      const double hit = t_hit_alpha(mc, 0.6).value;
      v.expect(hit <= double(n) + 1e-9,
               "majority-set hitting " + fmt(hit) + " > n = " +
                   std::to_string(n));
      const auto lm = mixing_time(lazy(mc));
      v.expect(lm.attained,
               "lazy mixing not attained on cliques n = " + std::to_string(n));
      const double ratio = double(lm.time) / double(n * n);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    v.expect(hi / lo < 3.0, "bottleneck mixing ratio band " + fmt(hi / lo) +
                                " >= 3 across n = 4, 6, 8");
    v.note("clique pair: t_lazy/n^2 in [" + fmt(lo) + ", " + fmt(hi) +
           "], band " + fmt(hi / lo));
  }

  return v;
}

// 7. Weighted trees: the edge formula equals the solver, the worst hitting
//    time of any target set respects the center bound, and mixing is robust
//    to conductance noise.
Verdict tree_suite() {
  Verdict v{"weighted tree suite"};

  double worst_formula = 0.0, worst_center = -1e300;
  for (int i = 0; i < 50; ++i) {
    const Index n = 2 + (i % 23);
    const auto tree = random_weighted_tree(n, 1000 + std::uint64_t(i));
    const auto walk = tree.walk();
    for (Index y = 0; y < n; ++y) {
      const Vector<double> formula = tree.hitting_to(y);
      const Vector<double> solved = expected_hitting(walk, StateSet{y});
      worst_formula =
          std::max(worst_formula, (formula - solved).cwiseAbs().maxCoeff());
    }
    for (const auto& c : central_hit_bound_checks(tree))
      worst_center = std::max(worst_center, c.lhs - c.rhs);
    if (n <= 10) {
      const double tc = t_central(tree);
      const Vector<double> pi = tree.stationary();
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        const StateSet a = mask_to_set(n, mask);
        const double lhs = expected_hitting(walk, a).maxCoeff();
        const double rhs = tc * (1.0 + 1.0 / set_mass(pi, a));
        worst_center = std::max(worst_center, lhs - rhs);
      }
    }
  }
  v.expect(worst_formula <= 1e-9,
           "edge formula deviates " + fmt(worst_formula) + " from the solver");
  v.expect(worst_center <= 1e-9, "center bound violated by " +
                                     fmt(worst_center));
  v.note("50 trees: formula max dev " + fmt(worst_formula) +
         ", center-bound worst margin " + fmt(worst_center));

  for (Index depth : {Index(3), Index(4), Index(5)}) {
    const Index n = (Index(1) << (depth + 1)) - 1;
    std::vector<std::pair<Index, Index>> shape;
    for (Index x = 1; x < n; ++x) shape.push_back({(x - 1) / 2, x});
    const auto rep =
        robustness_experiment(n, shape, 50, 1.0, 2.0, 40 + std::uint64_t(depth));
    v.expect(rep.max_over_min < 10.0,
             "depth " + std::to_string(depth) + " mixing spread " +
                 fmt(rep.max_over_min) + " >= 10");
    v.note("depth " + std::to_string(depth) + ": lazy mixing spread " +
           fmt(rep.max_over_min) + " over 50 conductance draws in [1, 2]");
  }
  return v;
}

// 8. On reversible chains the lazy and resolvent mixing times track the
//    quarter-mass hitting time within one fixed band.
Verdict ratio_band() {
  Verdict v{"mixing-to-hitting ratio band"};
  double lo1 = 1e300, hi1 = 0.0, lo2 = 1e300, hi2 = 0.0;
  std::size_t used = 0;
  for (const auto& entry : corpus()) {
    const auto& mc = entry.chain;
    if (!is_reversible(mc)) continue;
    const double hit = t_hit_alpha(mc, 0.25).value;
    const auto lm = mixing_time(lazy(mc));
    const auto gm = geometric_mixing_time(mc);
    v.expect(lm.attained && gm.attained,
             "mixing threshold not attained on " + entry.name);
    if (!lm.attained || !gm.attained) continue;
    ++used;
    const double r1 = double(lm.time) / hit;
    const double r2 = double(gm.time) / hit;
    lo1 = std::min(lo1, r1);
    hi1 = std::max(hi1, r1);
    lo2 = std::min(lo2, r2);
    hi2 = std::max(hi2, r2);
  }
  v.expect(hi1 / lo1 < 50.0,
           "lazy/hitting band " + fmt(hi1 / lo1) + " >= 50");
  v.expect(hi2 / lo2 < 50.0,
           "resolvent/hitting band " + fmt(hi2 / lo2) + " >= 50");
  v.note(std::to_string(used) + " reversible chains: t_lazy/t_hit in [" +
         fmt(lo1) + ", " + fmt(hi1) + "] (band " + fmt(hi1 / lo1) +
         "), t_geo/t_hit in [" + fmt(lo2) + ", " + fmt(hi2) + "] (band " +
         fmt(hi2 / lo2) + ")");
  return v;
}

// 9. The windowed chi-square statistic of the truncated stopping rule dips
//    below 1 + L/U somewhere in every window of length U after L.
Verdict averaging_bound() {
  Verdict v{"windowed averaging bound"};
  double worst = -1e300;
  std::string where;
  std::size_t cases = 0;
  for (const auto& entry : corpus()) {
    const auto& mc = entry.chain;
    if (mc.size() > 10 || !is_reversible(mc)) continue;
    const Index big_l = std::max<Index>(1, Index(std::ceil(20.0 * t_stop(mc).value)));
    const Index big_u = 10 * big_l;
    const double bound = 1.0 + double(big_l) / double(big_u) + 1e-9;
    for (Index x = 0; x < mc.size(); ++x) {
      ++cases;
      const auto aw = averaging_statistic(mc, x, big_l, big_u);
      if (aw.window_min - bound > worst) {
        worst = aw.window_min - bound;
        where = entry.name + " start " + std::to_string(x);
      }
      v.expect(aw.window_min <= bound,
               "window minimum " + fmt(aw.window_min) + " > " + fmt(bound) +
                   " on " + entry.name + " start " + std::to_string(x));
    }
  }
  v.note(std::to_string(cases) + " reversible chain/start cases, worst "
         "margin to 1 + L/U + 1e-9 is " + fmt(worst) + " (" + where + ")");
  return v;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  struct Budget {
    Verdict (*run)();
    double seconds;  // negative means no budget asserted
  };
  const std::vector<Budget> plan = {
      {ladder_closed_forms, 1.0},   {corpus_inequalities, 600.0},
      {resolvent_monotone, -1.0},   {oracle_triangulation, -1.0},
      {exit_frequency_consistency, -1.0},
      {scaling_sweeps, 300.0},      {tree_suite, -1.0},
      {ratio_band, -1.0},           {averaging_bound, -1.0},
  };

  int failures = 0;
  int idx = 0;
  for (const auto& item : plan) {
    ++idx;
    const auto t0 = clock::now();
    Verdict v = item.run();
    v.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    if (item.seconds > 0.0 && v.seconds >= item.seconds)
      v.fail("runtime " + fmt(v.seconds) + " s exceeds budget " +
             fmt(item.seconds) + " s");
    std::printf("[%s] %d %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", idx,
                v.name.c_str(), v.seconds);
    for (const auto& n : v.notes) std::printf("       %s\n", n.c_str());
    if (!v.pass) ++failures;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
