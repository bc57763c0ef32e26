#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ionjch/params.hpp"

namespace ionjch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// KEY:START:STOP:N, N >= 1 points inclusive of both ends.
struct Sweep {
  std::string key;
  double start = 0.0;
  double stop = 0.0;
  int n = 1;

  std::vector<double> values() const;
};

Sweep parse_sweep(std::string_view text);

/// Re-parses the config with one key replaced (or added).
SimulationConfig with_value(const SimulationConfig& base, const std::string& key, double value);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ionjch::cli
