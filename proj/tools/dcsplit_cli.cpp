#include "dcsplit/build_info.hpp"
#include "dcsplit/experiment.hpp"
#include "dcsplit/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

using dcsplit::ExperimentConfig;
using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw dcsplit::FormatError("cannot write " + path);
  out << text << '\n';
}

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(path);
  if (seed) cfg.seed = *seed;
  return cfg;
}

dcsplit::DenoiseInstance load_instance(const std::string& wav, bool observed,
                                       const ExperimentConfig& cfg) {
  if (wav.empty()) return dcsplit::make_synthetic_instance(cfg);
  const dcsplit::AudioSignal sig = dcsplit::load_wav(wav);
  return observed ? dcsplit::make_observed_instance(sig, cfg) : dcsplit::make_instance(sig, cfg);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

struct DenoiseArgs {
  std::string in;
  std::string out;
  std::string config;
  std::string trace;
  std::string sidecar;
  bool observed = false;
};

int cmd_denoise(const DenoiseArgs& a, std::optional<std::uint64_t> seed) {
  const ExperimentConfig cfg = load_config(a.config, seed);
  const dcsplit::DenoiseInstance inst = load_instance(a.in, a.observed, cfg);
  const dcsplit::DenoiseResult res = dcsplit::run_denoise(inst, cfg);
  print_warnings(res.warnings);

  const long clipped = dcsplit::save_wav(a.out, {res.recon, inst.noisy.sample_rate});
  if (clipped > 0) std::cerr << "warning: " << clipped << " samples clamped to [-1, 1]\n";
  if (!a.trace.empty()) dcsplit::write_trace_csv(res.trace, a.trace);
  write_text(a.sidecar.empty() ? a.out + ".json" : a.sidecar, dcsplit::sidecar_json(cfg, res));

  std::cout << res.trace.method << ": " << res.trace.iterations() << " iterations";
  if (inst.has_reference) std::cout << ", ISNR " << res.isnr << " dB";
  std::cout << '\n';
  return kExitOk;
}

int cmd_counterexample(long iters, const std::string& out) {
  const auto [trace, rep] = dcsplit::run_counterexample(iters, dcsplit::Vec::Zero(2));
  json j;
  j["iterations"] = rep.iterations;
  j["max_norm_x"] = rep.max_norm_x;
  j["sum_inv_rho"] = rep.sum_inv_rho;
  j["kkt_gap"] = rep.kkt_gap;
  j["max_z_minus_x"] = rep.max_z_minus_x;
  j["stationarity_inf"] = rep.stationarity_inf;
  j["velocities"] = {num(rep.vel_x), num(rep.vel_y), num(rep.vel_z)};
  const auto& fin = trace.final_state;
  j["x"] = {fin.x[0], fin.x[1]};
  j["z"] = {fin.z[0], fin.z[1]};
  j["build"] = dcsplit::git_describe();
  const std::string text = j.dump(2);
  if (out.empty()) {
    std::cout << text << '\n';
  } else {
    write_text(out, text);
  }
  return kExitOk;
}

int cmd_sweep(const std::string& grid_path, const std::string& out, const std::string& wav,
              std::optional<std::uint64_t> seed) {
  dcsplit::SweepGrid grid = dcsplit::SweepGrid::from_file(grid_path);
  if (seed) grid.base.seed = *seed;
  const dcsplit::DenoiseInstance inst = load_instance(wav, false, grid.base);
  const dcsplit::SweepResult res = dcsplit::run_sweep(grid, inst);
  res.write_csv(out);
  int failed = 0;
  for (const auto& cell : res.cells) {
    if (!cell.error.empty()) {
      ++failed;
      std::cerr << "cell (" << cell.row << ", " << cell.col << ") failed: " << cell.error << '\n';
    }
  }
  std::cout << res.cells.size() - failed << "/" << res.cells.size() << " cells written to " << out
            << '\n';
  return kExitOk;
}

int cmd_bench(const std::string& config, const std::vector<std::string>& methods, double budget,
              const std::string& wav, std::optional<std::uint64_t> seed) {
  ExperimentConfig base = load_config(config, seed);
  const dcsplit::DenoiseInstance inst = load_instance(wav, false, base);
  std::cout << "method,iterations,seconds,ms_per_iter,isnr_db\n";
  for (const auto& name : methods) {
    ExperimentConfig cfg = base;
    cfg.solver = dcsplit::parse_solver_kind(name);
    if (budget > 0.0) cfg.iters = std::max<long>(cfg.iters, 1000000);
    dcsplit::RunControls controls;
    controls.max_seconds = budget;
    controls.energies = false;
    const dcsplit::DenoiseResult res = dcsplit::run_denoise(inst, cfg, controls);
    const double ms = res.trace.records.back().t_ms;
    const long n = res.trace.iterations();
    std::cout << to_string(cfg.solver) << ',' << n << ',' << ms / 1e3 << ','
              << (n > 0 ? ms / static_cast<double>(n) : 0.0) << ',' << res.isnr << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-proximal full-splitting DC solvers and audio denoising"};
  app.set_version_flag("--version", std::string(dcsplit::version_string()) + " (" +
                                        dcsplit::git_describe() + ")");
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Seed for noise and synthetic signals (overrides config)");

  DenoiseArgs dn;
  auto* denoise = app.add_subcommand("denoise", "Denoise a WAV file (or the synthetic signal)");
  denoise->add_option("--in", dn.in, "Input WAV; omitted means the configured synthetic signal")
      ->check(CLI::ExistingFile);
  denoise->add_option("--out", dn.out, "Reconstruction, 16-bit PCM WAV")->required();
  denoise->add_option("--config", dn.config, "Experiment config JSON")->check(CLI::ExistingFile);
  denoise->add_option("--trace", dn.trace, "Per-iteration trace CSV");
  denoise->add_option("--sidecar", dn.sidecar, "Run summary JSON (default: <out>.json)");
  denoise->add_flag("--observed", dn.observed, "Input is already noisy; no noise is added");

  long cex_iters = 100000;
  std::string cex_out;
  auto* cex = app.add_subcommand("counterexample", "Run the two-dimensional divergence example");
  cex->add_option("--iters", cex_iters, "Iterations")->check(CLI::PositiveNumber);
  cex->add_option("--out", cex_out, "Report JSON (default: stdout)");

  std::string grid_path;
  std::string sweep_out;
  std::string sweep_in;
  auto* sweep = app.add_subcommand("sweep", "Run a two-parameter ISNR grid");
  sweep->add_option("--grid", grid_path, "Grid JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "Table CSV")->required();
  sweep->add_option("--in", sweep_in, "Clean input WAV")->check(CLI::ExistingFile);

  std::string bench_config;
  std::string bench_in;
  std::vector<std::string> bench_methods{"adaptive", "ls", "fbdc"};
  double budget = 10.0;
  auto* bench = app.add_subcommand("bench", "Compare solvers under a wall-clock budget");
  bench->add_option("--config", bench_config, "Experiment config JSON")
      ->check(CLI::ExistingFile);
  bench->add_option("--methods", bench_methods, "Comma-separated solvers")->delimiter(',');
  bench->add_option("--budget-seconds", budget, "Per-method budget; 0 runs cfg.iters")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--in", bench_in, "Clean input WAV")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*denoise) return cmd_denoise(dn, seed);
    if (*cex) return cmd_counterexample(cex_iters, cex_out);
    if (*sweep) return cmd_sweep(grid_path, sweep_out, sweep_in, seed);
    if (*bench) return cmd_bench(bench_config, bench_methods, budget, bench_in, seed);
  } catch (const dcsplit::DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const dcsplit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dcsplit::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dcsplit::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
