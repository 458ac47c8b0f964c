#pragma once

#include "dcsplit/problem.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dcsplit {

/// One row per iterate. Row k describes (x^k, y^k, z^k): row 0 is the
/// starting point and row k >= 1 is the result of outer iteration k-1.
///
///  - vel_*    : ||x^k - x^{k-1}|| etc. (0 in row 0)
///  - psi_k    : energy with the z-step correction terms, defined for k >= 2 (NaN otherwise)
///  - varpi    : merit at (x^k, y^k, z^k, z^{k-1}) with alpha-tilde = alpha_k
///  - cert     : (alpha_{k-1} - alpha) ||z^k||, the freeze test of iteration k-1
///  - alpha_k, rho_k : parameters in effect for the step that starts at x^k
///  - accepted_rho   : line search only; rho that produced x^k
///
/// Columns that a method does not define are NaN.
struct TraceRecord {
  long k = 0;
  double norm_x = 0.0;
  double norm_y = 0.0;
  double norm_z = 0.0;
  double vel_x = 0.0;
  double vel_y = 0.0;
  double vel_z = 0.0;
  double F = kNaN;
  double Psi = kNaN;
  double psi_k = kNaN;
  double varpi = kNaN;
  double cert = kNaN;
  double alpha_k = kNaN;
  double rho_k = kNaN;
  double accepted_rho = kNaN;
  bool ls_fallback = false;
  double t_ms = 0.0;
};

enum class StopStatus { kMaxIters, kVelocityTol, kTimeBudget };

const char* to_string(StopStatus s);

struct Trace {
  std::string method;
  std::vector<TraceRecord> records;
  /// K_0: first iteration from which alpha, rho, delta stayed constant up to
  /// the end of the run. Empty if the freeze test fired on the final iteration.
  std::optional<long> frozen_at;
  /// Iterations at which the freeze test fired.
  std::vector<long> decrease_events;
  long ls_fallbacks = 0;
  /// FBDC: outer iterations whose inner solve hit its iteration cap.
  long inner_unconverged = 0;
  StopStatus status = StopStatus::kMaxIters;
  std::vector<std::string> warnings;
  SolverState final_state;

  long iterations() const noexcept {
    return records.empty() ? 0 : static_cast<long>(records.size()) - 1;
  }
};

/// Fixed column order of the CSV trace format.
extern const std::vector<std::string> kTraceColumns;

/// Writes the header plus one row per record, numbers at full (17-digit)
/// precision. With include_timing = false the t_ms column is written as 0 so
/// that traces of identical runs compare byte-for-byte.
void write_trace_csv(const Trace& trace, std::ostream& out, bool include_timing = true);
void write_trace_csv(const Trace& trace, const std::string& path, bool include_timing = true);

/// Parses a trace written by write_trace_csv. Throws FormatError.
std::vector<TraceRecord> read_trace_csv(std::istream& in);

}  // namespace dcsplit
