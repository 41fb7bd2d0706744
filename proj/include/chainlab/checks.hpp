#pragma once

// Uniform record for a verified inequality or identity. A check compares a
// left side against a right side it must not exceed; slack = rhs - lhs, and
// a violation means slack fell below the shared tolerance. Skipped checks
// carry a note explaining why they do not apply (non-reversible chain,
// threshold never attained, scale cutoff).

#include <string>
#include <vector>

#include "chainlab/chain.hpp"

namespace chainlab {

enum class CheckStatus { ok, violated, skipped };

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  CheckStatus status = CheckStatus::ok;
  std::string note;
};

inline CheckResult make_check(std::string name, double lhs, double rhs,
                              std::string note = {},
                              double tol = config::inequality_slack_tol) {
  CheckResult c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.status = (c.slack >= -tol) ? CheckStatus::ok : CheckStatus::violated;
  c.note = std::move(note);
  return c;
}

inline CheckResult skip_check(std::string name, std::string note) {
  CheckResult c;
  c.name = std::move(name);
  c.status = CheckStatus::skipped;
  c.note = std::move(note);
  return c;
}

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::ok: return "ok";
    case CheckStatus::violated: return "violated";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

inline std::size_t count_violations(const std::vector<CheckResult>& checks) {
  std::size_t bad = 0;
  for (const auto& c : checks)
    if (c.status == CheckStatus::violated) ++bad;
  return bad;
}

}  // namespace chainlab
