#include "dcsplit/experiment.hpp"
#include "dcsplit/trace.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <sstream>

namespace dcsplit {
namespace {

bool same(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) ||
         std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

Trace line_search_trace() {
  ExperimentConfig cfg;
  cfg.signal.length = 256;
  cfg.gabor.window_len = 64;
  cfg.gabor.hop = 16;
  cfg.solver = SolverKind::kLineSearch;
  cfg.iters = 40;
  return run_denoise(make_synthetic_instance(cfg), cfg).trace;
}

TEST(TraceCsv, RoundTripIsExact) {
  const Trace tr = line_search_trace();
  std::stringstream buf;
  write_trace_csv(tr, buf);
  const std::vector<TraceRecord> back = read_trace_csv(buf);
  ASSERT_EQ(back.size(), tr.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const TraceRecord& a = tr.records[i];
    const TraceRecord& b = back[i];
    EXPECT_EQ(a.k, b.k);
    EXPECT_EQ(a.ls_fallback, b.ls_fallback);
    for (auto field : {&TraceRecord::norm_x, &TraceRecord::norm_y, &TraceRecord::norm_z,
                       &TraceRecord::vel_x, &TraceRecord::vel_y, &TraceRecord::vel_z,
                       &TraceRecord::F, &TraceRecord::Psi, &TraceRecord::psi_k,
                       &TraceRecord::varpi, &TraceRecord::cert, &TraceRecord::alpha_k,
                       &TraceRecord::rho_k, &TraceRecord::accepted_rho, &TraceRecord::t_ms}) {
      EXPECT_TRUE(same(a.*field, b.*field)) << "row " << i;
    }
  }
}

TEST(TraceCsv, HeaderOrderIsFixed) {
  std::stringstream buf;
  write_trace_csv(Trace{}, buf);
  EXPECT_EQ(buf.str(),
            "k,norm_x,norm_y,norm_z,vel_x,vel_y,vel_z,F,Psi,psi_k,varpi,cert,alpha_k,rho_k,"
            "accepted_rho,ls_fallback,t_ms\n");
}

TEST(TraceCsv, TimingCanBeZeroed) {
  const Trace tr = line_search_trace();
  std::stringstream buf;
  write_trace_csv(tr, buf, false);
  for (const TraceRecord& r : read_trace_csv(buf)) EXPECT_EQ(r.t_ms, 0.0);
}

TEST(TraceCsv, MalformedInputThrows) {
  std::stringstream empty;
  EXPECT_THROW(read_trace_csv(empty), FormatError);
  std::stringstream bad_header("k,norm_x\n");
  EXPECT_THROW(read_trace_csv(bad_header), FormatError);
  std::stringstream buf;
  write_trace_csv(Trace{}, buf);
  buf << "0,1,2\n";
  EXPECT_THROW(read_trace_csv(buf), FormatError);
  std::stringstream buf2;
  write_trace_csv(Trace{}, buf2);
  buf2 << "0,x,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n";
  EXPECT_THROW(read_trace_csv(buf2), FormatError);
}

}  // namespace
}  // namespace dcsplit
