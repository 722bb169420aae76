#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fprmt::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitVerifyFail = 3 };

struct Options {
  int depth = 1;
  int dim = 1;
  std::vector<int> nus;
  std::vector<double> sigmas;
  std::string sigma_hat_grid;
  std::int64_t samples = 0;         // 0: per-subcommand default
  std::int64_t matrix_samples = 0;  // verify-theorem matrix side
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
  int bins = 30;
  double bandwidth = 0.0;  // 0: default_bandwidth
  double grid_L = 8.0;
  double grid_dx = 0.0;    // 0: default_spacing(σ)
  std::string part = "real";
  bool scaled = false;
  std::string range;       // lo:hi, empty for the default
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fprmt::cli
