#include "dcsplit/audio.hpp"
#include "dcsplit/gabor.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

namespace dcsplit {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dcsplit_test_audio";
  fs::create_directories(dir);
  return dir / name;
}

void le(std::vector<unsigned char>& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

// Minimal 16-bit PCM writer; `frames` holds interleaved samples.
std::vector<unsigned char> wav16(const std::vector<std::int16_t>& frames, int channels, int rate) {
  std::vector<unsigned char> out;
  const std::uint32_t data_len = static_cast<std::uint32_t>(frames.size() * 2);
  for (char c : std::string("RIFF")) out.push_back(static_cast<unsigned char>(c));
  le(out, 36 + data_len, 4);
  for (char c : std::string("WAVEfmt ")) out.push_back(static_cast<unsigned char>(c));
  le(out, 16, 4);
  le(out, 1, 2);
  le(out, static_cast<std::uint32_t>(channels), 2);
  le(out, static_cast<std::uint32_t>(rate), 4);
  le(out, static_cast<std::uint32_t>(rate * channels * 2), 4);
  le(out, static_cast<std::uint32_t>(channels * 2), 2);
  le(out, 16, 2);
  for (char c : std::string("data")) out.push_back(static_cast<unsigned char>(c));
  le(out, data_len, 4);
  for (std::int16_t s : frames) le(out, static_cast<std::uint16_t>(s), 2);
  return out;
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream f(p, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

AudioSignal sine(Index n, double freq, double rate, double amp = 0.6) {
  AudioSignal s;
  s.sample_rate = rate;
  s.samples.resize(n);
  for (Index i = 0; i < n; ++i) {
    s.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate);
  }
  return s;
}

TEST(Wav, SaveLoadRoundTripWithinQuantization) {
  const AudioSignal s = sine(4000, 440.0, 16000.0);
  const fs::path p = temp_file("sine.wav");
  EXPECT_EQ(save_wav(p.string(), s), 0);
  const AudioSignal back = load_wav(p.string());
  ASSERT_EQ(back.samples.size(), s.samples.size());
  EXPECT_EQ(back.sample_rate, 16000.0);
  EXPECT_LE((back.samples - s.samples).lpNorm<Eigen::Infinity>(), std::ldexp(1.0, -15) + 1e-9);
}

TEST(Wav, ClampsOnSave) {
  AudioSignal s = sine(100, 440.0, 8000.0, 1.5);
  const fs::path p = temp_file("loud.wav");
  EXPECT_GT(save_wav(p.string(), s), 0);
  EXPECT_LE(load_wav(p.string()).samples.lpNorm<Eigen::Infinity>(), 1.0);
}

TEST(Wav, IdenticalStereoEqualsMono) {
  std::vector<std::int16_t> mono;
  std::vector<std::int16_t> stereo;
  for (int i = 0; i < 500; ++i) {
    const auto s = static_cast<std::int16_t>(12000.0 * std::sin(0.05 * i));
    mono.push_back(s);
    stereo.push_back(s);
    stereo.push_back(s);
  }
  const fs::path pm = temp_file("mono.wav");
  const fs::path ps = temp_file("stereo.wav");
  write_bytes(pm, wav16(mono, 1, 22050));
  write_bytes(ps, wav16(stereo, 2, 22050));
  const AudioSignal a = load_wav(pm.string());
  const AudioSignal b = load_wav(ps.string());
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.sample_rate, b.sample_rate);
  EXPECT_NEAR(a.samples[10], 12000.0 * std::sin(0.5) / 32768.0, 1.0 / 32768.0);
}

TEST(Wav, MalformedFilesRaiseFormatError) {
  const std::vector<unsigned char> good = wav16({1, 2, 3, 4}, 1, 8000);
  const fs::path p = temp_file("truncated.wav");
  write_bytes(p, std::vector<unsigned char>(good.begin(), good.begin() + 20));
  EXPECT_THROW(load_wav(p.string()), FormatError);
  write_bytes(p, std::vector<unsigned char>(good.begin(), good.begin() + 30));
  EXPECT_THROW(load_wav(p.string()), FormatError);
  std::vector<unsigned char> codec = good;
  codec[20] = 2;  // ADPCM
  write_bytes(p, codec);
  EXPECT_THROW(load_wav(p.string()), FormatError);
  EXPECT_THROW(load_wav(temp_file("missing.wav").string()), FormatError);
}

TEST(Segment, Arithmetic) {
  AudioSignal s;
  s.sample_rate = 44100.0;
  s.samples = Vec::LinSpaced(5 * 44100, 0.0, 5.0 * 44100 - 1.0);
  const AudioSignal all = extract_segment(s, 0.0, s.duration());
  EXPECT_EQ(all.samples, s.samples);
  const AudioSignal two = extract_segment(s, 1.0, 3.0);
  EXPECT_EQ(two.samples.size(), 88200);
  EXPECT_EQ(two.samples[0], 44100.0);
  EXPECT_EQ(two.samples[two.samples.size() - 1], 132299.0);
  EXPECT_THROW(extract_segment(s, 3.0, 1.0), InvalidArgument);
  EXPECT_THROW(extract_segment(s, 0.0, 6.0), InvalidArgument);
}

TEST(Segment, PadToMultiple) {
  EXPECT_EQ(pad_to_multiple(Vec::Ones(10), 4).size(), 12);
  EXPECT_EQ(pad_to_multiple(Vec::Ones(12), 4).size(), 12);
  EXPECT_EQ(pad_to_multiple(Vec::Ones(10), 4).tail(2), Vec::Zero(2));
  EXPECT_THROW(pad_to_multiple(Vec::Ones(3), 0), InvalidArgument);
}

TEST(Noise, InputSnrNearTwentySixDecibels) {
  const AudioSignal s = synth_signal(SynthKind::kSines, 88200, 3, 44100.0);
  const NoisySignal n = add_noise(s, 7);
  EXPECT_NEAR(n.sigma, s.samples.norm() / (20.0 * std::sqrt(88200.0)), 1e-15);
  EXPECT_NEAR(snr_db(s.samples, n.noisy.samples), 20.0 * std::log10(20.0), 0.5);
}

TEST(Noise, DeterministicAndLinearInScale) {
  const AudioSignal s = synth_signal(SynthKind::kSines, 2048, 1);
  const NoisySignal a = add_noise(s, 42);
  const NoisySignal b = add_noise(s, 42);
  EXPECT_EQ(a.noisy.samples, b.noisy.samples);
  AudioSignal twice = s;
  twice.samples *= 2.0;
  const NoisySignal c = add_noise(twice, 42);
  EXPECT_NEAR(c.sigma, 2.0 * a.sigma, 1e-15);
  EXPECT_LE(((c.noisy.samples - twice.samples) - 2.0 * (a.noisy.samples - s.samples)).norm(),
            1e-12);
  EXPECT_NE(add_noise(s, 43).noisy.samples, a.noisy.samples);
  AudioSignal silent;
  silent.samples = Vec::Zero(10);
  EXPECT_THROW(add_noise(silent, 1), InvalidArgument);
}

TEST(Isnr, Formula) {
  const Vec orig = Vec::Zero(4);
  Vec noisy(4);
  noisy << 1, 1, 1, 1;
  EXPECT_DOUBLE_EQ(isnr(orig, noisy, noisy), 0.0);
  Vec recon(4);
  recon << 0.5, 0.5, 0.5, 0.5;
  EXPECT_NEAR(isnr(orig, noisy, recon), 10.0 * std::log10(4.0), 1e-12);
  EXPECT_EQ(isnr(orig, noisy, orig), kIsnrCap);
}

TEST(Synth, DeterministicNormalizedAndSparse) {
  const AudioSignal a = synth_signal(SynthKind::kSines, 16384, 7);
  const AudioSignal b = synth_signal(SynthKind::kSines, 16384, 7);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NEAR(a.samples.lpNorm<Eigen::Infinity>(), 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(a.duration(), 1.024);
  EXPECT_NE(synth_signal(SynthKind::kSinesPlusClicks, 16384, 7).samples, a.samples);

  GaborConfig gc;
  gc.signal_len = 16384;
  const Vec c = make_gabor(gc)->apply(a.samples);
  const Index m = c.size() / 2;
  std::vector<double> energy(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    energy[static_cast<std::size_t>(i)] = c[i] * c[i] + c[m + i] * c[m + i];
  std::sort(energy.begin(), energy.end(), std::greater<>());
  double total = 0.0;
  for (double e : energy) total += e;
  double top = 0.0;
  for (std::size_t i = 0; i < energy.size() / 20; ++i) top += energy[i];
  EXPECT_GE(top / total, 0.8);
}

TEST(Synth, KindNames) {
  EXPECT_EQ(parse_synth_kind("sines"), SynthKind::kSines);
  EXPECT_EQ(parse_synth_kind(to_string(SynthKind::kSinesPlusClicks)), SynthKind::kSinesPlusClicks);
  EXPECT_THROW(parse_synth_kind("noise"), ConfigError);
}

}  // namespace
}  // namespace dcsplit
