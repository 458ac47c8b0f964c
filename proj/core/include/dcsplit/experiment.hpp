#pragma once

#include "dcsplit/audio.hpp"
#include "dcsplit/diagnostics.hpp"
#include "dcsplit/gabor.hpp"
#include "dcsplit/solver.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dcsplit {

enum class SolverKind { kAdaptive, kLineSearch, kFbdc };

SolverKind parse_solver_kind(std::string_view name);
const char* to_string(SolverKind kind);

/// Where the clean signal comes from when no WAV file is given.
struct SignalSource {
  SynthKind kind = SynthKind::kSinesPlusClicks;
  Index length = 16384;
  double sample_rate = 16000.0;
};

/// Everything needed to reproduce one denoising run.
///
/// JSON keys mirror the field names; `schedule`, `gabor`, `line_search`,
/// `fbdc` and `signal` are nested objects. Unknown keys are rejected.
struct ExperimentConfig {
  double r1 = 9.0;
  double r2 = 0.6;
  double lambda = 0.1;
  double p = 0.5;
  /// signal_len is filled in from the (padded) signal.
  GaborConfig gabor;
  StepSchedule schedule;
  /// Overrides rho_0 when positive.
  double rho0 = 0.0;
  SolverKind solver = SolverKind::kAdaptive;
  long iters = 1000;
  double vel_tol = 0.0;
  std::uint64_t seed = 7;
  /// Seconds (t_start, t_end) of the input to keep.
  std::optional<std::pair<double, double>> segment;
  LineSearchParams line_search;
  FbdcParams fbdc;
  SignalSource signal;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;

  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_json() const;
};

/// Clean and noisy signals, zero-padded to a multiple of the Gabor hop.
struct DenoiseInstance {
  AudioSignal clean;
  AudioSignal noisy;
  double noise_sigma = 0.0;
  /// Length before padding; ISNR is taken over this prefix.
  Index original_len = 0;
  /// False when the input was already noisy and there is no reference.
  bool has_reference = true;
};

/// Segments (if configured), adds seeded noise and pads.
DenoiseInstance make_instance(const AudioSignal& clean, const ExperimentConfig& cfg);
/// Uses synth_signal(cfg.signal, cfg.seed).
DenoiseInstance make_synthetic_instance(const ExperimentConfig& cfg);
/// Treats `noisy` as the observation; no reference is available.
DenoiseInstance make_observed_instance(const AudioSignal& noisy, const ExperimentConfig& cfg);

struct DenoiseProblem {
  Problem problem;
  std::shared_ptr<const GaborOperator> gabor;
  /// Power-iteration estimate of ||T||^2 times 1.01.
  double sigma_T = 0.0;
  /// sqrt(lower frame bound) (1 - p) ||u||, a lower bound of ||T x|| on S.
  double mu_inj = 0.0;
  KlCheck kl;
  std::vector<std::string> warnings;
};

/// A = K = T (shared), g = elastic-l1(lambda), f = smoothed-l2(r2, lambda),
/// phi = (r1/2)||x - u||^2, S = B(u, p ||u||). The step schedule's lip_phi
/// and sigma_a are not touched; see schedule_for.
DenoiseProblem build_denoise_problem(const Vec& u, const ExperimentConfig& cfg);

/// cfg.schedule with lip_phi = r1 and sigma_a = sigma_T.
StepSchedule schedule_for(const ExperimentConfig& cfg, const DenoiseProblem& dp);

struct DenoiseResult {
  Trace trace;
  /// Reconstruction with the padding stripped.
  Vec recon;
  double isnr = kNaN;
  double input_snr = kNaN;
  double sigma_T = 0.0;
  KlCheck kl;
  RateFit velocity_fit;
  std::vector<std::string> warnings;
};

struct RunControls {
  double max_seconds = 0.0;
  Observer observer;
  /// Record energies (Psi, psi_k, varpi) per iteration.
  bool energies = true;
};

/// Builds the problem for `inst.noisy`, runs cfg.solver from x0 = u,
/// y0 = 0, z0 = 0 and scores the result.
DenoiseResult run_denoise(const DenoiseInstance& inst, const ExperimentConfig& cfg,
                          const RunControls& controls = {});

/// Config, build version, RNG algorithm and run summary as a JSON document.
std::string sidecar_json(const ExperimentConfig& cfg, const DenoiseResult& res);

}  // namespace dcsplit
