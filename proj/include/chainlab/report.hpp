#pragma once

// One-stop parameter report for a chain: every scalar the library computes,
// each tagged with whether its threshold search attained the level, plus the
// inequality battery. Serializes to JSON and to flat CSV with dotted column
// keys; both carry the same numeric content.

#include <cstdint>
#include <string>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/checks.hpp"

namespace chainlab {

struct AnalyzeOptions {
  double epsilon = config::default_epsilon;
  double sep_level = config::separation_threshold;
  double alpha = config::default_alpha;
  Index horizon = -1;  // -1 resolves to the size default
  double tol = config::verification_tol;
  std::uint64_t seed = 1;
  bool with_checks = true;
};

struct ParamValue {
  std::string key;
  double value = 0.0;
  bool attained = true;
  std::string note;
};

struct ParamReport {
  std::string chain;
  Index n = 0;
  bool reversible = false;
  AnalyzeOptions provenance;  // horizon stored resolved
  std::vector<ParamValue> parameters;
  std::vector<CheckResult> inequalities;
};

ParamReport analyze(const MarkovChain<double>& mc, const std::string& name,
                    const AnalyzeOptions& opt = {});

std::string report_to_json(const ParamReport& rep);
std::string reports_to_json(const std::vector<ParamReport>& reps);
std::string reports_to_csv(const std::vector<ParamReport>& reps);

// Reports for one family across a parameter range, e.g. cycle sizes.
std::vector<ParamReport> sweep_family(const std::string& family,
                                      const std::string& param, Index from,
                                      Index to, Index step = 1,
                                      const AnalyzeOptions& opt = {});

}  // namespace chainlab
