#include "dcsplit/experiment.hpp"

#include "dcsplit/build_info.hpp"
#include "dcsplit/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dcsplit {

using nlohmann::json;

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "adaptive") return SolverKind::kAdaptive;
  if (name == "line_search" || name == "ls") return SolverKind::kLineSearch;
  if (name == "fbdc") return SolverKind::kFbdc;
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kAdaptive:
      return "adaptive";
    case SolverKind::kLineSearch:
      return "line_search";
    case SolverKind::kFbdc:
      return "fbdc";
  }
  return "adaptive";
}

namespace {

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key())) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

json num(double v) { return std::isfinite(v) ? json(v) : json(); }

}  // namespace

void ExperimentConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("config: 0 < p < 1 required");
  if (!(r1 > 0.0)) throw ConfigError("config: r1 > 0 required");
  if (!(lambda > 0.0)) throw ConfigError("config: lambda > 0 required");
  if (!(r2 >= 0.0)) throw ConfigError("config: r2 >= 0 required");
  if (iters < 0) throw ConfigError("config: iters >= 0 required");
  if (vel_tol < 0.0) throw ConfigError("config: vel_tol >= 0 required");
  if (segment && !(segment->first >= 0.0 && segment->first < segment->second)) {
    throw ConfigError("config: segment needs 0 <= t_start < t_end");
  }
  if (gabor.window_len < 1 || gabor.hop < 1) {
    throw ConfigError("config: gabor window_len and hop must be >= 1");
  }
  if (gabor.n_channels != 0 && gabor.n_channels < gabor.window_len) {
    throw ConfigError("config: gabor n_channels >= window_len required");
  }
  if (signal.length < 1 || !(signal.sample_rate > 0.0)) {
    throw ConfigError("config: signal length and sample_rate must be positive");
  }
  // lip_phi and sigma_a are derived, so check the rest with placeholders.
  StepSchedule s = schedule;
  s.lip_phi = r1;
  s.sigma_a = 1.0;
  s.validate();
  line_search.validate();
  if (!(fbdc.step > 0.0 && fbdc.dual_step > 0.0)) {
    throw ConfigError("config: fbdc step and dual_step must be > 0");
  }
  if (!(fbdc.inner.tol > 0.0) || fbdc.inner.max_inner < 1) {
    throw ConfigError("config: fbdc inner tol > 0 and max_inner >= 1 required");
  }
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"r1", "r2", "lambda", "p", "gabor", "schedule", "rho0", "solver", "iters", "vel_tol",
              "seed", "segment", "line_search", "fbdc", "signal"});

  ExperimentConfig cfg;
  read(j, "r1", cfg.r1);
  read(j, "r2", cfg.r2);
  read(j, "lambda", cfg.lambda);
  read(j, "p", cfg.p);
  read(j, "rho0", cfg.rho0);
  read(j, "iters", cfg.iters);
  read(j, "vel_tol", cfg.vel_tol);
  read(j, "seed", cfg.seed);
  if (j.contains("solver")) {
    std::string name;
    read(j, "solver", name);
    cfg.solver = parse_solver_kind(name);
  }
  if (j.contains("segment")) {
    const json& seg = j["segment"];
    if (!seg.is_array() || seg.size() != 2) {
      throw ConfigError("config: segment must be [t_start, t_end]");
    }
    cfg.segment = std::make_pair(seg[0].get<double>(), seg[1].get<double>());
  }
  if (j.contains("gabor")) {
    const json& g = j["gabor"];
    check_keys(g, "gabor", {"window_len", "hop", "n_channels", "window_std", "tight"});
    read(g, "window_len", cfg.gabor.window_len);
    read(g, "hop", cfg.gabor.hop);
    read(g, "n_channels", cfg.gabor.n_channels);
    read(g, "window_std", cfg.gabor.window_std);
    read(g, "tight", cfg.gabor.tight);
  }
  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    check_keys(s, "schedule", {"alpha", "alpha_ratio", "gamma", "r_exp", "mu", "eps", "beta0"});
    read(s, "gamma", cfg.schedule.gamma);
    if (s.contains("alpha") && s.contains("alpha_ratio")) {
      throw ConfigError("schedule: give alpha or alpha_ratio, not both");
    }
    if (s.contains("alpha_ratio")) {
      double ratio = 0.0;
      read(s, "alpha_ratio", ratio);
      if (!(ratio > 0.0)) throw ConfigError("schedule: alpha_ratio must be > 0");
      cfg.schedule.alpha = cfg.schedule.gamma / ratio;
    } else {
      read(s, "alpha", cfg.schedule.alpha);
    }
    read(s, "r_exp", cfg.schedule.r_exp);
    read(s, "mu", cfg.schedule.mu);
    read(s, "eps", cfg.schedule.eps);
    read(s, "beta0", cfg.schedule.beta0);
  }
  if (j.contains("line_search")) {
    const json& l = j["line_search"];
    check_keys(l, "line_search", {"eta", "nu", "c", "lookback", "t_max"});
    read(l, "eta", cfg.line_search.eta);
    read(l, "nu", cfg.line_search.nu);
    read(l, "c", cfg.line_search.c);
    read(l, "lookback", cfg.line_search.lookback);
    read(l, "t_max", cfg.line_search.t_max);
  }
  if (j.contains("fbdc")) {
    const json& f = j["fbdc"];
    check_keys(f, "fbdc", {"step", "dual_step", "inner_tol", "max_inner"});
    read(f, "step", cfg.fbdc.step);
    read(f, "dual_step", cfg.fbdc.dual_step);
    read(f, "inner_tol", cfg.fbdc.inner.tol);
    read(f, "max_inner", cfg.fbdc.inner.max_inner);
  }
  if (j.contains("signal")) {
    const json& s = j["signal"];
    check_keys(s, "signal", {"kind", "length", "sample_rate"});
    if (s.contains("kind")) {
      std::string kind;
      read(s, "kind", kind);
      cfg.signal.kind = parse_synth_kind(kind);
    }
    read(s, "length", cfg.signal.length);
    read(s, "sample_rate", cfg.signal.sample_rate);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_json(os.str());
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  j["lambda"] = c.lambda;
  j["p"] = c.p;
  j["gabor"] = {{"window_len", c.gabor.window_len},
                {"hop", c.gabor.hop},
                {"n_channels", c.gabor.n_channels},
                {"window_std", c.gabor.window_std},
                {"tight", c.gabor.tight}};
  j["schedule"] = {{"alpha", c.schedule.alpha}, {"gamma", c.schedule.gamma},
                   {"r_exp", c.schedule.r_exp}, {"mu", c.schedule.mu},
                   {"eps", c.schedule.eps},     {"beta0", c.schedule.beta0}};
  j["rho0"] = c.rho0;
  j["solver"] = to_string(c.solver);
  j["iters"] = c.iters;
  j["vel_tol"] = c.vel_tol;
  j["seed"] = c.seed;
  if (c.segment) j["segment"] = {c.segment->first, c.segment->second};
  j["line_search"] = {{"eta", c.line_search.eta},
                      {"nu", c.line_search.nu},
                      {"c", c.line_search.c},
                      {"lookback", c.line_search.lookback},
                      {"t_max", c.line_search.t_max}};
  j["fbdc"] = {{"step", c.fbdc.step},
               {"dual_step", c.fbdc.dual_step},
               {"inner_tol", c.fbdc.inner.tol},
               {"max_inner", c.fbdc.inner.max_inner}};
  j["signal"] = {{"kind", to_string(c.signal.kind)},
                 {"length", c.signal.length},
                 {"sample_rate", c.signal.sample_rate}};
  return j;
}

DenoiseInstance finish_instance(AudioSignal clean, const ExperimentConfig& cfg) {
  DenoiseInstance inst;
  inst.original_len = clean.samples.size();
  NoisySignal noisy = add_noise(clean, cfg.seed);
  inst.noise_sigma = noisy.sigma;
  inst.clean = {pad_to_multiple(clean.samples, cfg.gabor.hop), clean.sample_rate};
  inst.noisy = {pad_to_multiple(noisy.noisy.samples, cfg.gabor.hop), clean.sample_rate};
  return inst;
}

}  // namespace

std::string ExperimentConfig::to_json() const { return config_json(*this).dump(2); }

DenoiseInstance make_instance(const AudioSignal& clean, const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.segment) {
    return finish_instance(extract_segment(clean, cfg.segment->first, cfg.segment->second), cfg);
  }
  return finish_instance(clean, cfg);
}

DenoiseInstance make_synthetic_instance(const ExperimentConfig& cfg) {
  cfg.validate();
  return finish_instance(
      synth_signal(cfg.signal.kind, cfg.signal.length, cfg.seed, cfg.signal.sample_rate), cfg);
}

DenoiseInstance make_observed_instance(const AudioSignal& noisy, const ExperimentConfig& cfg) {
  cfg.validate();
  const AudioSignal seg =
      cfg.segment ? extract_segment(noisy, cfg.segment->first, cfg.segment->second) : noisy;
  DenoiseInstance inst;
  inst.original_len = seg.samples.size();
  inst.has_reference = false;
  inst.noisy = {pad_to_multiple(seg.samples, cfg.gabor.hop), seg.sample_rate};
  inst.clean = {Vec::Zero(inst.noisy.samples.size()), seg.sample_rate};
  return inst;
}

DenoiseProblem build_denoise_problem(const Vec& u, const ExperimentConfig& cfg) {
  cfg.validate();
  const double u_norm = u.norm();
  if (!(u_norm > 0.0)) throw InvalidArgument("build_denoise_problem: u must be nonzero");
  if (!u.allFinite()) throw InvalidArgument("build_denoise_problem: u must be finite");

  GaborConfig gc = cfg.gabor;
  gc.signal_len = u.size();

  DenoiseProblem dp;
  dp.gabor = make_gabor(gc);
  dp.problem.A = dp.gabor;
  dp.problem.K = dp.gabor;
  dp.problem.g = std::make_shared<ElasticL1>(cfg.lambda);
  dp.problem.f = std::make_shared<SmoothedL2>(cfg.r2, cfg.lambda);
  dp.problem.phi = std::make_shared<QuadFidelity>(cfg.r1, u);
  dp.problem.S = std::make_shared<Ball>(u, cfg.p * u_norm);
  dp.problem.validate();

  dp.sigma_T = 1.01 * op_norm_sq_estimate(*dp.gabor);
  dp.mu_inj = std::sqrt(dp.gabor->lower_frame_bound()) * (1.0 - cfg.p) * u_norm;
  dp.kl = kl_condition_check(cfg.r1, cfg.r2, cfg.lambda, dp.sigma_T, dp.mu_inj);
  if (!dp.kl.holds) {
    std::ostringstream os;
    os << "KL sufficient condition fails: r1 = " << cfg.r1 << " <= " << dp.kl.threshold;
    dp.warnings.push_back(os.str());
  }
  return dp;
}

StepSchedule schedule_for(const ExperimentConfig& cfg, const DenoiseProblem& dp) {
  StepSchedule s = cfg.schedule;
  s.lip_phi = cfg.r1;
  s.sigma_a = dp.sigma_T;
  return s;
}

DenoiseResult run_denoise(const DenoiseInstance& inst, const ExperimentConfig& cfg,
                          const RunControls& controls) {
  const Vec& u = inst.noisy.samples;
  const DenoiseProblem dp = build_denoise_problem(u, cfg);
  const StepSchedule sched = schedule_for(cfg, dp);

  const InitialPoint init{u, Vec::Zero(dp.problem.dim_y()), Vec::Zero(dp.problem.dim_z())};
  StopRule stop;
  stop.max_iters = cfg.iters;
  stop.vel_tol = cfg.vel_tol;
  stop.max_seconds = controls.max_seconds;
  RunOptions opts;
  opts.rho0 = cfg.rho0;
  opts.record_energies = controls.energies;

  DenoiseResult res;
  res.sigma_T = dp.sigma_T;
  res.kl = dp.kl;
  res.warnings = dp.warnings;
  switch (cfg.solver) {
    case SolverKind::kAdaptive:
      res.trace = adaptive_dpfs(dp.problem, sched, init, stop, controls.observer, opts);
      break;
    case SolverKind::kLineSearch:
      res.trace = adaptive_dpfs_ls(dp.problem, sched, cfg.line_search, init, stop,
                                   controls.observer, opts);
      break;
    case SolverKind::kFbdc: {
      FbdcParams fp = cfg.fbdc;
      if (!(fp.sigma_T > 0.0)) fp.sigma_T = dp.sigma_T;
      res.trace = fbdc(dp.problem, fp, init, stop, controls.observer);
      break;
    }
  }
  res.warnings.insert(res.warnings.end(), res.trace.warnings.begin(), res.trace.warnings.end());

  res.recon = res.trace.final_state.x.head(inst.original_len);
  if (inst.has_reference) {
    const Vec clean = inst.clean.samples.head(inst.original_len);
    const Vec noisy = u.head(inst.original_len);
    res.isnr = isnr(clean, noisy, res.recon);
    res.input_snr = snr_db(clean, noisy);
  }

  std::vector<double> vel;
  vel.reserve(res.trace.records.size());
  for (std::size_t i = 1; i < res.trace.records.size(); ++i) {
    vel.push_back(res.trace.records[i].vel_x);
  }
  res.velocity_fit = rate_fit(vel, 0.5);
  return res;
}

std::string sidecar_json(const ExperimentConfig& cfg, const DenoiseResult& res) {
  json j;
  j["config"] = config_json(cfg);
  j["build"] = {{"version", version_string()}, {"git_describe", git_describe()}};
  j["rng"] = CounterRng::kAlgorithm;
  j["method"] = res.trace.method;
  j["iterations"] = res.trace.iterations();
  j["status"] = to_string(res.trace.status);
  j["frozen_at"] = res.trace.frozen_at ? json(*res.trace.frozen_at) : json();
  j["decrease_events"] = res.trace.decrease_events.size();
  j["ls_fallbacks"] = res.trace.ls_fallbacks;
  j["inner_unconverged"] = res.trace.inner_unconverged;
  j["sigma_T"] = num(res.sigma_T);
  j["kl_condition"] = {{"holds", res.kl.holds},
                       {"threshold", num(res.kl.threshold)},
                       {"margin", num(res.kl.margin)}};
  j["isnr_db"] = num(res.isnr);
  j["input_snr_db"] = num(res.input_snr);
  j["velocity_rate_fit"] = {{"status", res.velocity_fit.status},
                            {"q", num(res.velocity_fit.q)},
                            {"r_squared", num(res.velocity_fit.r_squared)}};
  j["warnings"] = res.warnings;
  return j.dump(2);
}

}  // namespace dcsplit
