#pragma once

// The named inequality battery. Every chain gets the same fixed list of
// checks; the ones whose hypotheses fail (reversibility, an attained
// threshold, positive holding) come back skipped with a note instead of
// silently vanishing, so tabulated output has stable columns.

#include <functional>
#include <string>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/checks.hpp"

namespace chainlab {

struct VerifyOptions {
  double epsilon = config::default_epsilon;
  double sep_level = config::separation_threshold;
  double alpha = config::default_alpha;
  Index horizon = -1;       // threshold searches; -1 means the size default
  Index profile_cap = 512;  // pointwise profile comparisons stop here
};

const std::vector<std::string>& verify_check_names();

std::vector<CheckResult> verify_chain(const MarkovChain<double>& mc,
                                      const VerifyOptions& opt = {});

struct SuiteResult {
  std::string chain;
  std::vector<CheckResult> checks;
};

// Runs the battery over the built-in corpus; on_chain, when given, sees each
// result as it lands (progress reporting, streaming output).
std::vector<SuiteResult> verify_corpus(
    const VerifyOptions& opt = {},
    const std::function<void(const SuiteResult&)>& on_chain = nullptr);

}  // namespace chainlab
