#include "fprmt_cli/output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "fprmt/version.hpp"

namespace fprmt::cli {
namespace {

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(' ') - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<GridPoint> parse_grid(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty grid");
  std::vector<GridPoint> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid must be min:max:steps, got '" + spec + "'");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double steps_d = parse_number(parts[2]);
    const int steps = static_cast<int>(steps_d);
    if (steps < 1 || steps != steps_d) throw std::invalid_argument("grid steps must be a positive integer");
    if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("grid values must be positive");
    if (steps == 1) {
      if (lo != hi) throw std::invalid_argument("a one-point grid needs min == max");
      out.push_back({lo, format_shortest(lo)});
      return out;
    }
    for (int i = 0; i < steps; ++i) {
      const double v = i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1);
      out.push_back({v, format_shortest(v)});
    }
    return out;
  }
  for (const auto& tok : split(spec, ',')) {
    const std::string t = trim(tok);
    out.push_back({parse_number(t), t});
  }
  for (const auto& g : out) {
    if (!(g.value > 0.0)) throw std::invalid_argument("grid values must be positive, got " + g.text);
  }
  return out;
}

std::pair<double, double> parse_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 2) throw std::invalid_argument("range must be lo:hi, got '" + spec + "'");
  const double lo = parse_number(parts[0]);
  const double hi = parse_number(parts[1]);
  if (!(hi > lo)) throw std::invalid_argument("range must have hi > lo");
  return {lo, hi};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("csv row width does not match header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return s;
}

nlohmann::ordered_json Manifest::to_json() const {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand;
  j["argv"] = argv;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["n_samples"] = n_samples;
  j["workers"] = workers;
  j["version"] = fprmt::kVersion;
  j["duration_seconds"] = seconds;
  return j;
}

nlohmann::ordered_json options_json(const Options& o) {
  nlohmann::ordered_json j;
  j["depth"] = o.depth;
  j["dim"] = o.dim;
  j["nu"] = o.nus;
  j["sigma"] = o.sigmas;
  j["sigma_hat_grid"] = o.sigma_hat_grid;
  j["samples"] = o.samples;
  j["matrix_samples"] = o.matrix_samples;
  j["seed"] = o.seed;
  j["workers"] = o.workers;
  j["out"] = o.out;
  j["bins"] = o.bins;
  j["bandwidth"] = o.bandwidth;
  j["grid_L"] = o.grid_L;
  j["grid_dx"] = o.grid_dx;
  j["part"] = o.part;
  j["scaled"] = o.scaled;
  j["range"] = o.range;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string manifest_path_for(const std::string& out) { return out + ".manifest.json"; }

}  // namespace fprmt::cli
