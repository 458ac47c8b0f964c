#pragma once

#include "dcsplit/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace dcsplit {

/// Mono signal, nominally in [-1, 1].
struct AudioSignal {
  Vec samples;
  double sample_rate = 16000.0;

  double duration() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Reads RIFF/WAVE with PCM 8/16/24/32-bit integer or 32-bit float samples.
/// Multichannel files are averaged down to mono. Throws FormatError.
AudioSignal load_wav(const std::string& path);

/// Writes 16-bit PCM mono. Samples outside [-1, 1] are clamped; the return
/// value is the number of clamped samples.
long save_wav(const std::string& path, const AudioSignal& sig);

/// Samples [round(t_start fs), round(t_end fs)).
AudioSignal extract_segment(const AudioSignal& sig, double t_start, double t_end);

/// Zero-pads to the next multiple of `multiple`.
Vec pad_to_multiple(const Vec& x, Index multiple);

struct NoisySignal {
  AudioSignal noisy;
  double sigma = 0.0;
};

/// Adds i.i.d. N(0, sigma^2) noise with sigma = ||x|| / (20 sqrt(L)), drawn
/// from CounterRng(seed).
NoisySignal add_noise(const AudioSignal& sig, std::uint64_t seed);

inline constexpr double kIsnrCap = 300.0;

/// 10 log10(||orig - noisy||^2 / ||orig - recon||^2), capped at kIsnrCap.
double isnr(const Vec& orig, const Vec& noisy, const Vec& recon);

/// 10 log10(||orig||^2 / ||orig - noisy||^2).
double snr_db(const Vec& orig, const Vec& noisy);

enum class SynthKind { kSines, kSinesPlusClicks };

SynthKind parse_synth_kind(std::string_view name);
const char* to_string(SynthKind kind);

/// Sum of 3 to 8 seeded sinusoids with slow amplitude envelopes, plus a few
/// decaying clicks for kSinesPlusClicks, peak-normalized to 0.8.
AudioSignal synth_signal(SynthKind kind, Index n, std::uint64_t seed,
                         double sample_rate = 16000.0);

}  // namespace dcsplit
