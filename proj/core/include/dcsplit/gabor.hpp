#pragma once

#include "dcsplit/linops.hpp"

#include <memory>

namespace dcsplit {

/// Layout of a periodic discrete Gabor (STFT) system.
struct GaborConfig {
  Index signal_len = 0;
  Index window_len = 2048;
  Index hop = 512;
  /// Frequency bins per frame; must be >= window_len. 0 means window_len.
  Index n_channels = 0;
  /// Gaussian standard deviation in samples; 0 means window_len / 6.
  double window_std = 0.0;
  /// Replace the Gaussian by its canonical tight window, so T^*T equals
  /// redundancy * I exactly.
  bool tight = true;

  Index channels() const noexcept { return n_channels > 0 ? n_channels : window_len; }
  double std_dev() const noexcept {
    return window_std > 0.0 ? window_std : static_cast<double>(window_len) / 6.0;
  }
  Index n_frames() const noexcept { return hop > 0 ? signal_len / hop : 0; }
  /// Number of complex coefficients M.
  Index n_coefficients() const noexcept { return n_frames() * channels(); }
  /// M / N: the frame redundancy.
  double redundancy() const noexcept {
    return static_cast<double>(n_coefficients()) / static_cast<double>(signal_len);
  }

  /// Throws InvalidArgument naming the first violated constraint.
  void validate() const;
};

/// Real-embedded Gabor analysis operator R^N -> R^{2M}.
///
/// Frame m covers samples (m*hop - window_len/2 + n) mod N for
/// n in [0, window_len), weighted by a truncated Gaussian and transformed by
/// an n_channels-point DFT. The output stores every real part first
/// (frame-major), then every imaginary part in the same order. The frame
/// operator T^*T is diagonal; the window is either made tight (T^*T equal to
/// redundancy * I) or scaled so that the diagonal averages to redundancy.
/// The adjoint is the matching synthesis map.
class GaborOperator final : public LinearOperator {
 public:
  explicit GaborOperator(const GaborConfig& cfg);
  ~GaborOperator() override;

  GaborOperator(const GaborOperator&) = delete;
  GaborOperator& operator=(const GaborOperator&) = delete;

  const GaborConfig& config() const noexcept { return cfg_; }
  const Vec& window() const noexcept { return window_; }

  /// Diagonal of T^*T; its extremes are the exact frame bounds.
  const Vec& frame_diagonal() const noexcept { return frame_diag_; }
  double lower_frame_bound() const noexcept { return frame_diag_.minCoeff(); }
  double upper_frame_bound() const noexcept { return frame_diag_.maxCoeff(); }

 protected:
  void apply_into(const Vec& x, Vec& out) const override;
  void adjoint_into(const Vec& y, Vec& out) const override;

 private:
  struct Plans;

  GaborConfig cfg_;
  Vec window_;
  Vec frame_diag_;
  std::unique_ptr<Plans> plans_;
};

std::shared_ptr<const GaborOperator> make_gabor(const GaborConfig& cfg);

}  // namespace dcsplit
