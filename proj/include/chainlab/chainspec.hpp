#pragma once

// Chain descriptions as data: JSON documents (family + params + transforms,
// explicit kernels with decimal-string entries, or weighted trees) and a
// compact "family:key=value,..." shorthand. Kernel entries round-trip
// exactly through the shortest decimal representation.

#include <string>

#include "chainlab/chain.hpp"

namespace chainlab {

struct ChainDescription {
  std::string name;
  MarkovChain<double> chain;
};

// Shortest decimal string that parses back to exactly v.
std::string format_decimal(double v);
double parse_decimal(const std::string& text);

ChainDescription chain_from_json(const std::string& text);
ChainDescription chain_from_shorthand(const std::string& text);
ChainDescription chain_from_file(const std::string& path);

// Dispatch on shape: "@path" reads a file, a leading '{' is inline JSON,
// anything else is shorthand.
ChainDescription resolve_chain_argument(const std::string& arg);

// Kernel emitted as rows of decimal strings; parsing the result rebuilds
// the same matrix bit for bit.
std::string chain_to_json(const MarkovChain<double>& mc,
                          const std::string& name = std::string());

}  // namespace chainlab
