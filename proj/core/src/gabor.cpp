#include "dcsplit/gabor.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

namespace dcsplit {

namespace {

// The FFTW planner is not thread-safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(Index n) : data(fftw_alloc_complex(static_cast<std::size_t>(n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* data;
};

Index wrap(Index t, Index n) {
  t %= n;
  return t < 0 ? t + n : t;
}

}  // namespace

void GaborConfig::validate() const {
  if (signal_len <= 0) throw InvalidArgument("GaborConfig: signal_len must be > 0");
  if (window_len <= 0) throw InvalidArgument("GaborConfig: window_len must be > 0");
  if (hop <= 0) throw InvalidArgument("GaborConfig: hop must be > 0");
  if (signal_len % hop != 0) {
    throw InvalidArgument("GaborConfig: hop " + std::to_string(hop) +
                          " does not divide signal_len " + std::to_string(signal_len));
  }
  if (window_len > signal_len) throw InvalidArgument("GaborConfig: window_len exceeds signal_len");
  if (channels() < window_len) throw InvalidArgument("GaborConfig: n_channels < window_len");
  if (window_std < 0.0 || !std::isfinite(window_std)) {
    throw InvalidArgument("GaborConfig: window_std must be positive");
  }
}

struct GaborOperator::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(Index n) {
    FftwBuffer in(n);
    FftwBuffer out(n);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward =
        fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (forward == nullptr || backward == nullptr) throw std::runtime_error("FFTW planning failed");
  }

  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
};

GaborOperator::GaborOperator(const GaborConfig& cfg)
    : LinearOperator(cfg.signal_len, 2 * cfg.n_coefficients()), cfg_(cfg) {
  cfg_.validate();
  const Index n = cfg_.signal_len;
  const Index w_len = cfg_.window_len;
  const Index channels = cfg_.channels();
  const double sd = cfg_.std_dev();

  window_.resize(w_len);
  const double center = static_cast<double>(w_len / 2);
  for (Index i = 0; i < w_len; ++i) {
    const double u = (static_cast<double>(i) - center) / sd;
    window_[i] = std::exp(-0.5 * u * u);
  }

  // An unnormalized DFT multiplies the energy of each frame by `channels`.
  auto frame_diagonal = [&] {
    Vec d = Vec::Zero(n);
    for (Index m = 0; m < cfg_.n_frames(); ++m) {
      const Index start = m * cfg_.hop - w_len / 2;
      for (Index i = 0; i < w_len; ++i) {
        d[wrap(start + i, n)] += static_cast<double>(channels) * window_[i] * window_[i];
      }
    }
    return d;
  };
  frame_diag_ = frame_diagonal();
  const double red = cfg_.redundancy();
  if (cfg_.tight) {
    // The diagonal is hop-periodic, so S^{-1/2} acts on the window alone.
    for (Index i = 0; i < w_len; ++i) {
      window_[i] *= std::sqrt(red / frame_diag_[wrap(i - w_len / 2, n)]);
    }
    frame_diag_ = frame_diagonal();
  } else {
    const double scale_sq = red / frame_diag_.mean();
    window_ *= std::sqrt(scale_sq);
    frame_diag_ *= scale_sq;
  }

  plans_ = std::make_unique<Plans>(channels);
}

GaborOperator::~GaborOperator() = default;

void GaborOperator::apply_into(const Vec& x, Vec& out) const {
  const Index n = cfg_.signal_len;
  const Index w_len = cfg_.window_len;
  const Index channels = cfg_.channels();
  const Index m_total = cfg_.n_coefficients();
  FftwBuffer in(channels);
  FftwBuffer spec(channels);

  for (Index m = 0; m < cfg_.n_frames(); ++m) {
    const Index start = m * cfg_.hop - w_len / 2;
    for (Index i = 0; i < channels; ++i) {
      in.data[i][0] = i < w_len ? window_[i] * x[wrap(start + i, n)] : 0.0;
      in.data[i][1] = 0.0;
    }
    fftw_execute_dft(plans_->forward, in.data, spec.data);
    const Index base = m * channels;
    for (Index k = 0; k < channels; ++k) {
      out[base + k] = spec.data[k][0];
      out[m_total + base + k] = spec.data[k][1];
    }
  }
}

void GaborOperator::adjoint_into(const Vec& y, Vec& out) const {
  const Index n = cfg_.signal_len;
  const Index w_len = cfg_.window_len;
  const Index channels = cfg_.channels();
  const Index m_total = cfg_.n_coefficients();
  FftwBuffer spec(channels);
  FftwBuffer frame(channels);

  out.setZero();
  for (Index m = 0; m < cfg_.n_frames(); ++m) {
    const Index base = m * channels;
    for (Index k = 0; k < channels; ++k) {
      spec.data[k][0] = y[base + k];
      spec.data[k][1] = y[m_total + base + k];
    }
    fftw_execute_dft(plans_->backward, spec.data, frame.data);
    const Index start = m * cfg_.hop - w_len / 2;
    for (Index i = 0; i < w_len; ++i) {
      out[wrap(start + i, n)] += window_[i] * frame.data[i][0];
    }
  }
}

std::shared_ptr<const GaborOperator> make_gabor(const GaborConfig& cfg) {
  return std::make_shared<const GaborOperator>(cfg);
}

}  // namespace dcsplit
