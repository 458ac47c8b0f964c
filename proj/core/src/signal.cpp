#include "dcsplit/audio.hpp"
#include "dcsplit/rng.hpp"

#include <cmath>
#include <numbers>

namespace dcsplit {

AudioSignal extract_segment(const AudioSignal& sig, double t_start, double t_end) {
  if (!(t_start >= 0.0 && t_start < t_end && t_end <= sig.duration() + 1e-12)) {
    throw InvalidArgument("extract_segment: need 0 <= t_start < t_end <= duration");
  }
  const auto first = static_cast<Index>(std::llround(t_start * sig.sample_rate));
  const auto last = std::min<Index>(static_cast<Index>(std::llround(t_end * sig.sample_rate)),
                                    sig.samples.size());
  if (last <= first) throw InvalidArgument("extract_segment: empty segment");
  return {sig.samples.segment(first, last - first), sig.sample_rate};
}

Vec pad_to_multiple(const Vec& x, Index multiple) {
  if (multiple < 1) throw InvalidArgument("pad_to_multiple: multiple must be >= 1");
  const Index n = ((x.size() + multiple - 1) / multiple) * multiple;
  Vec out = Vec::Zero(n);
  out.head(x.size()) = x;
  return out;
}

NoisySignal add_noise(const AudioSignal& sig, std::uint64_t seed) {
  const double norm = sig.samples.norm();
  if (!(norm > 0.0)) throw InvalidArgument("add_noise: signal has zero norm");
  const auto L = static_cast<double>(sig.samples.size());
  NoisySignal out;
  out.sigma = norm / (20.0 * std::sqrt(L));
  out.noisy.sample_rate = sig.sample_rate;
  out.noisy.samples =
      sig.samples + out.sigma * CounterRng(seed, 0x6e6f697365ULL).normal_vector(sig.samples.size());
  return out;
}

double isnr(const Vec& orig, const Vec& noisy, const Vec& recon) {
  require_dim(noisy.size(), orig.size(), "isnr: noisy");
  require_dim(recon.size(), orig.size(), "isnr: recon");
  const double den = (orig - recon).squaredNorm();
  const double num = (orig - noisy).squaredNorm();
  if (den == 0.0) return kIsnrCap;
  return std::min(kIsnrCap, 10.0 * std::log10(num / den));
}

double snr_db(const Vec& orig, const Vec& noisy) {
  require_dim(noisy.size(), orig.size(), "snr_db");
  const double den = (orig - noisy).squaredNorm();
  if (den == 0.0) return kIsnrCap;
  return std::min(kIsnrCap, 10.0 * std::log10(orig.squaredNorm() / den));
}

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "sines") return SynthKind::kSines;
  if (name == "sines_plus_clicks") return SynthKind::kSinesPlusClicks;
  throw ConfigError("unknown synthetic signal kind '" + std::string(name) + "'");
}

const char* to_string(SynthKind kind) {
  return kind == SynthKind::kSines ? "sines" : "sines_plus_clicks";
}

AudioSignal synth_signal(SynthKind kind, Index n, std::uint64_t seed, double sample_rate) {
  if (n < 1) throw InvalidArgument("synth_signal: n must be >= 1");
  if (!(sample_rate > 0.0)) throw InvalidArgument("synth_signal: sample_rate must be > 0");
  const CounterRng rng(seed, 0x73796e7468ULL);
  std::uint64_t draw = 0;
  auto next = [&] { return rng.uniform(draw++); };

  const int n_sines = 3 + static_cast<int>(next() * 6.0);
  const double two_pi = 2.0 * std::numbers::pi;
  Vec x = Vec::Zero(n);
  for (int s = 0; s < n_sines; ++s) {
    const double freq = 80.0 + next() * (0.25 * sample_rate - 80.0);
    const double amp = 0.3 + 0.7 * next();
    const double phase = two_pi * next();
    const double env_rate = 0.5 + 2.0 * next();
    const double env_phase = two_pi * next();
    for (Index t = 0; t < n; ++t) {
      const double time = static_cast<double>(t) / sample_rate;
      const double env = 0.75 + 0.25 * std::sin(two_pi * env_rate * time + env_phase);
      x[t] += amp * env * std::sin(two_pi * freq * time + phase);
    }
  }

  if (kind == SynthKind::kSinesPlusClicks) {
    const int n_clicks = 2 + static_cast<int>(next() * 4.0);
    const double decay = 0.002 * sample_rate;
    for (int c = 0; c < n_clicks; ++c) {
      const auto at = static_cast<Index>(next() * static_cast<double>(n));
      const double amp = (next() < 0.5 ? -1.0 : 1.0) * (1.0 + next());
      const Index len = std::min<Index>(n - at, static_cast<Index>(6.0 * decay));
      for (Index t = 0; t < len; ++t) {
        x[at + t] += amp * std::exp(-static_cast<double>(t) / decay) *
                     std::cos(two_pi * 0.1 * static_cast<double>(t));
      }
    }
  }

  const double peak = x.cwiseAbs().maxCoeff();
  if (peak > 0.0) x *= 0.8 / peak;
  return {std::move(x), sample_rate};
}

}  // namespace dcsplit
