#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "fprmt_cli/cli.hpp"

namespace fprmt::cli {

/// 17 significant digits, locale independent.
std::string format_double(double v);
/// Shortest round-trip form.
std::string format_shortest(double v);

/// A grid entry with the text it should be echoed as.
struct GridPoint {
  double value;
  std::string text;
};

/// "min:max:steps" (inclusive linspace) or a comma list. List entries are
/// echoed verbatim.
std::vector<GridPoint> parse_grid(const std::string& spec);
/// "lo:hi".
std::pair<double, double> parse_range(const std::string& spec);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Manifest {
  std::string subcommand;
  std::vector<std::string> argv;
  nlohmann::ordered_json parameters;
  std::uint64_t seed = 0;
  std::int64_t n_samples = 0;
  int workers = 1;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json options_json(const Options& o);

void write_file(const std::string& path, const std::string& content);
std::string manifest_path_for(const std::string& out);

}  // namespace fprmt::cli
