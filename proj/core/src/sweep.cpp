#include "dcsplit/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace dcsplit {

using nlohmann::json;

SweepAxes parse_sweep_axes(std::string_view name) {
  if (name == "r1_r2") return SweepAxes::kR1R2;
  if (name == "gamma_alpha_ratio") return SweepAxes::kGammaAlphaRatio;
  if (name == "eta_nu") return SweepAxes::kEtaNu;
  throw ConfigError("unknown sweep axes '" + std::string(name) + "'");
}

const char* to_string(SweepAxes axes) {
  switch (axes) {
    case SweepAxes::kR1R2:
      return "r1_r2";
    case SweepAxes::kGammaAlphaRatio:
      return "gamma_alpha_ratio";
    case SweepAxes::kEtaNu:
      return "eta_nu";
  }
  return "r1_r2";
}

namespace {

const char* corner_label(SweepAxes axes) {
  switch (axes) {
    case SweepAxes::kR1R2:
      return "r1\\r2";
    case SweepAxes::kGammaAlphaRatio:
      return "gamma\\alpha_ratio";
    case SweepAxes::kEtaNu:
      return "nu\\eta";
  }
  return "";
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> read_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
    throw ConfigError(std::string("sweep: '") + key + "' must be a nonempty array");
  }
  try {
    return j[key].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep: '") + key + "': " + e.what());
  }
}

}  // namespace

SweepGrid SweepGrid::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("sweep: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("sweep: expected a JSON object");
  for (const auto& item : j.items()) {
    static const char* const kKeys[] = {"axes", "rows", "cols", "base", "trace_dir", "workers"};
    if (std::find(std::begin(kKeys), std::end(kKeys), item.key()) == std::end(kKeys)) {
      throw ConfigError("sweep: unknown key '" + item.key() + "'");
    }
  }
  SweepGrid grid;
  if (!j.contains("axes") || !j["axes"].is_string()) throw ConfigError("sweep: 'axes' missing");
  grid.axes = parse_sweep_axes(j["axes"].get<std::string>());
  grid.rows = read_list(j, "rows");
  grid.cols = read_list(j, "cols");
  if (j.contains("base")) grid.base = ExperimentConfig::from_json(j["base"].dump());
  if (j.contains("trace_dir")) grid.trace_dir = j["trace_dir"].get<std::string>();
  if (j.contains("workers")) grid.workers = j["workers"].get<unsigned>();
  return grid;
}

SweepGrid SweepGrid::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_json(os.str());
}

ExperimentConfig SweepGrid::cell_config(double row, double col) const {
  ExperimentConfig cfg = base;
  switch (axes) {
    case SweepAxes::kR1R2:
      cfg.r1 = row;
      cfg.r2 = col;
      break;
    case SweepAxes::kGammaAlphaRatio:
      cfg.schedule.gamma = row;
      cfg.schedule.alpha = row / col;
      break;
    case SweepAxes::kEtaNu:
      cfg.solver = SolverKind::kLineSearch;
      cfg.line_search.nu = row;
      cfg.line_search.eta = col;
      break;
  }
  return cfg;
}

void SweepResult::write_csv(std::ostream& out) const {
  out << corner_label(axes);
  for (double c : cols) out << ',' << fmt(c);
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << fmt(rows[r]);
    for (std::size_t c = 0; c < cols.size(); ++c) out << ',' << fmt(at(r, c).isnr);
    out << '\n';
  }
}

void SweepResult::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_csv(out);
}

SweepResult run_sweep(const SweepGrid& grid, const DenoiseInstance& inst) {
  if (grid.rows.empty() || grid.cols.empty()) throw ConfigError("sweep: empty grid");
  if (!grid.trace_dir.empty()) std::filesystem::create_directories(grid.trace_dir);

  SweepResult result;
  result.axes = grid.axes;
  result.rows = grid.rows;
  result.cols = grid.cols;
  const std::size_t n_cells = grid.rows.size() * grid.cols.size();
  result.cells.resize(n_cells);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_cells; i = next++) {
      SweepCell& cell = result.cells[i];
      cell.row = grid.rows[i / grid.cols.size()];
      cell.col = grid.cols[i % grid.cols.size()];
      try {
        const ExperimentConfig cfg = grid.cell_config(cell.row, cell.col);
        cfg.validate();
        RunControls controls;
        controls.energies = false;
        const DenoiseResult res = run_denoise(inst, cfg, controls);
        cell.isnr = res.isnr;
        cell.iterations = res.trace.iterations();
        cell.frozen_at = res.trace.frozen_at;
        if (!grid.trace_dir.empty()) {
          const std::string stem = grid.trace_dir + "/cell_" +
                                   std::to_string(i / grid.cols.size()) + "_" +
                                   std::to_string(i % grid.cols.size());
          write_trace_csv(res.trace, stem + ".csv");
        }
      } catch (const std::exception& e) {
        cell.isnr = kNaN;
        cell.error = e.what();
      }
    }
  };

  unsigned n_workers = grid.workers > 0 ? grid.workers : std::thread::hardware_concurrency();
  n_workers = std::clamp<unsigned>(n_workers, 1, static_cast<unsigned>(n_cells));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

}  // namespace dcsplit
