#include "dcsplit/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dcsplit {

const std::vector<std::string> kTraceColumns = {
    "k",     "norm_x", "norm_y", "norm_z",  "vel_x",   "vel_y",        "vel_z",       "F",   "Psi",
    "psi_k", "varpi",  "cert",   "alpha_k", "rho_k",   "accepted_rho", "ls_fallback", "t_ms"};

const char* to_string(StopStatus s) {
  switch (s) {
    case StopStatus::kMaxIters: return "max_iters";
    case StopStatus::kVelocityTol: return "velocity_tol";
    case StopStatus::kTimeBudget: return "time_budget";
  }
  return "unknown";
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

double parse_double(const std::string& cell) {
  if (cell == "nan" || cell == "-nan") return kNaN;
  if (cell == "inf") return kInf;
  if (cell == "-inf") return -kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw FormatError("trace: bad number '" + cell + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("trace: bad number '" + cell + "'");
  }
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out, bool include_timing) {
  for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
    out << (i ? "," : "") << kTraceColumns[i];
  }
  out << '\n';
  for (const TraceRecord& r : trace.records) {
    out << r.k;
    for (double v : {r.norm_x, r.norm_y, r.norm_z, r.vel_x, r.vel_y, r.vel_z, r.F, r.Psi, r.psi_k,
                     r.varpi, r.cert, r.alpha_k, r.rho_k, r.accepted_rho}) {
      out << ',';
      put(out, v);
    }
    out << ',' << (r.ls_fallback ? 1 : 0) << ',';
    put(out, include_timing ? r.t_ms : 0.0);
    out << '\n';
  }
}

void write_trace_csv(const Trace& trace, const std::string& path, bool include_timing) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open trace file for writing: " + path);
  write_trace_csv(trace, out, include_timing);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("trace: empty input");
  {
    std::stringstream header(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(header, cell, ',')) {
      if (i >= kTraceColumns.size() || cell != kTraceColumns[i]) {
        throw FormatError("trace: unexpected header column '" + cell + "'");
      }
      ++i;
    }
    if (i != kTraceColumns.size()) throw FormatError("trace: truncated header");
  }

  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != kTraceColumns.size()) throw FormatError("trace: wrong column count");

    TraceRecord r;
    r.k = static_cast<long>(parse_double(cells[0]));
    double* fields[] = {&r.norm_x, &r.norm_y, &r.norm_z, &r.vel_x, &r.vel_y,
                        &r.vel_z,  &r.F,      &r.Psi,    &r.psi_k, &r.varpi,
                        &r.cert,   &r.alpha_k, &r.rho_k, &r.accepted_rho};
    for (std::size_t i = 0; i < std::size(fields); ++i) *fields[i] = parse_double(cells[i + 1]);
    r.ls_fallback = parse_double(cells[15]) != 0.0;
    r.t_ms = parse_double(cells[16]);
    records.push_back(r);
  }
  return records;
}

}  // namespace dcsplit
