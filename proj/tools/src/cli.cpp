#include "fprmt_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "commands.hpp"
#include "fprmt/ensemble.hpp"
#include "fprmt/error.hpp"
#include "fprmt/version.hpp"

namespace fprmt::cli {
namespace {

using Command = std::function<int(const Options&, Manifest&, std::ostream&)>;

enum Flag : unsigned {
  kModel = 1u << 0,     // --depth --dim --nu
  kSigma = 1u << 1,     // --sigma
  kGrid = 1u << 2,      // --sigma-hat-grid
  kSamples = 1u << 3,   // --samples --seed --workers
  kBins = 1u << 4,      // --bins --part --scaled --range
  kBandwidth = 1u << 5, // --bandwidth
  kField = 1u << 6,     // --grid-L --grid-dx
};

void add_flags(CLI::App* sub, Options& o, unsigned flags) {
  if (flags & kModel) {
    sub->add_option("--depth", o.depth, "Number of layers D")->check(CLI::PositiveNumber);
    sub->add_option("--dim", o.dim, "Base dimension N")->check(CLI::PositiveNumber);
    sub->add_option("--nu", o.nus, "Dimension offset nu_d (repeatable)")->take_all();
  }
  if (flags & kSigma) sub->add_option("--sigma", o.sigmas, "Layer deviation (repeatable)")->take_all();
  if (flags & kGrid) {
    sub->add_option("--sigma-hat-grid", o.sigma_hat_grid, "min:max:steps or a comma list")->required();
  }
  if (flags & kSamples) {
    sub->add_option("--samples", o.samples, "Monte Carlo sample count");
    sub->add_option("--seed", o.seed, "Base seed (default: $FPRMT_SEED, else 1)");
    sub->add_option("--workers", o.workers, "Worker threads (0: all cores)");
  }
  if (flags & kBins) {
    sub->add_option("--bins", o.bins, "Histogram bins")->check(CLI::PositiveNumber);
    sub->add_option("--part", o.part, "real or complex-modulus");
    sub->add_flag("--scaled", o.scaled, "Divide eigenvalues by N^{D/2}");
    sub->add_option("--range", o.range, "Histogram range lo:hi");
  }
  if (flags & kBandwidth) sub->add_option("--bandwidth", o.bandwidth, "Box-kernel half-width");
  if (flags & kField) {
    sub->add_option("--grid-L", o.grid_L, "Field grid half-width")->check(CLI::PositiveNumber);
    sub->add_option("--grid-dx", o.grid_dx, "Field grid spacing (default min(0.05, 0.05/sigma))");
  }
  sub->add_option("--out", o.out, "Output path")->required();
}

std::vector<std::string> replace_out(std::vector<std::string> argv, const std::string& out) {
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--out" && i + 1 < argv.size()) {
      argv[i + 1] = out;
      return argv;
    }
    if (argv[i].rfind("--out=", 0) == 0) {
      argv[i] = "--out=" + out;
      return argv;
    }
  }
  argv.push_back("--out");
  argv.push_back(out);
  return argv;
}

int run_replay(const std::string& path, const std::string& out, std::ostream& sout, std::ostream& err) {
  std::ifstream f(path);
  if (!f) {
    err << "cannot read manifest '" << path << "'\n";
    return kExitUsage;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    err << "malformed manifest: " << e.what() << "\n";
    return kExitUsage;
  }
  if (j.contains("manifest")) j = j["manifest"];
  if (!j.contains("argv") || !j["argv"].is_array()) {
    err << "manifest has no argv\n";
    return kExitUsage;
  }
  auto argv = j["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "replay") {
    err << "refusing to replay a replay\n";
    return kExitUsage;
  }
  if (!out.empty()) argv = replace_out(argv, out);
  return run(argv, sout, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  if (const char* env = std::getenv("FPRMT_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "FPRMT_SEED is not an unsigned integer: '" << env << "'\n";
      return kExitUsage;
    }
  }

  CLI::App app{"Fixed points of layered Gaussian random maps: Monte Carlo and analytic predictions", "fprmt"};
  app.set_version_flag("--version", fprmt::kVersion);
  app.require_subcommand(1);

  const std::map<std::string, std::pair<Command, unsigned>> table{
      {"det-curve", {cmd_det_curve, kModel | kGrid | kSamples}},
      {"subleading", {cmd_subleading, kModel | kGrid | kSamples}},
      {"density", {cmd_density, kModel | kSigma | kSamples | kBins}},
      {"verify-theorem", {cmd_verify_theorem, kSigma | kSamples | kField}},
      {"verify-lemma", {cmd_verify_lemma, kModel | kSigma | kSamples | kBandwidth}},
      {"field-gallery", {cmd_field_gallery, kSigma | kSamples | kField}},
  };
  const std::map<std::string, std::string> help{
      {"det-curve", "log E|det(J1...JD - I)| over a sigma-hat grid vs the large-N prediction"},
      {"subleading", "Sub-leading term of log E|det| for D = 2 over offsets nu"},
      {"density", "Spectral histogram with limiting and finite-N overlays"},
      {"verify-theorem", "Field-side fixed-point counts vs the matrix expectation (N = 1)"},
      {"verify-lemma", "Determinant expectation vs real spectral density at 1/sigma_bar^D"},
      {"field-gallery", "Sample paths with fixed-point markers"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : table) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_flags(sub, o, entry.second);
    subs[name] = sub;
  }
  if (auto* ms = subs.at("verify-theorem")) {
    ms->add_option("--matrix-samples", o.matrix_samples, "Matrix-side sample count (default 1e6)");
  }
  std::string replay_path;
  std::string replay_out;
  CLI::App* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_path, "Manifest (.manifest.json or JSON output)")->required();
  replay->add_option("--out", replay_out, "Write to this path instead of the recorded one");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (replay->parsed()) return run_replay(replay_path, replay_out, out, err);

  for (const auto& [name, entry] : table) {
    if (!subs.at(name)->parsed()) continue;
    Manifest m;
    m.subcommand = name;
    m.argv = args;
    m.seed = o.seed;
    m.workers = o.workers > 0 ? o.workers : default_workers();
    m.parameters = options_json(o);
    try {
      return entry.first(o, m, err);
    } catch (const NumericalError& e) {
      err << "numerical failure [" << to_string(e.code()) << "]: " << e.what() << "\n";
      return kExitNumerical;
    } catch (const std::invalid_argument& e) {
      err << "invalid parameters: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::domain_error& e) {
      err << "invalid parameters: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitNumerical;
    }
  }
  return kExitUsage;
}

}  // namespace fprmt::cli
