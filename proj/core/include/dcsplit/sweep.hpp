#pragma once

#include "dcsplit/experiment.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dcsplit {

/// Which two config fields a grid varies (rows first).
enum class SweepAxes { kR1R2, kGammaAlphaRatio, kEtaNu };

SweepAxes parse_sweep_axes(std::string_view name);
const char* to_string(SweepAxes axes);

struct SweepGrid {
  SweepAxes axes = SweepAxes::kR1R2;
  std::vector<double> rows;
  std::vector<double> cols;
  ExperimentConfig base;
  /// Per-cell trace CSVs go here when non-empty.
  std::string trace_dir;
  /// 0 means std::thread::hardware_concurrency().
  unsigned workers = 0;

  /// {"axes": "r1_r2", "rows": [...], "cols": [...], "base": {...},
  ///  "trace_dir": "...", "workers": n}
  static SweepGrid from_json(const std::string& text);
  static SweepGrid from_file(const std::string& path);

  /// base with the row and column values applied.
  ExperimentConfig cell_config(double row, double col) const;
};

struct SweepCell {
  double row = 0.0;
  double col = 0.0;
  double isnr = kNaN;
  long iterations = 0;
  std::optional<long> frozen_at;
  std::string error;
};

struct SweepResult {
  SweepAxes axes = SweepAxes::kR1R2;
  std::vector<double> rows;
  std::vector<double> cols;
  /// Row-major.
  std::vector<SweepCell> cells;

  const SweepCell& at(std::size_t r, std::size_t c) const { return cells[r * cols.size() + c]; }

  /// One header row of column values, then one row per row value. Failed
  /// cells are written as nan.
  void write_csv(std::ostream& out) const;
  void write_csv(const std::string& path) const;
};

/// Runs every cell on the same instance. A cell that throws is recorded
/// with isnr = NaN and its error message; the sweep continues.
SweepResult run_sweep(const SweepGrid& grid, const DenoiseInstance& inst);

}  // namespace dcsplit
