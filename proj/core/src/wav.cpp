#include "dcsplit/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace dcsplit {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode(const unsigned char* p, const Format& fmt) {
  if (fmt.tag == kFormatFloat) {
    float v;
    const std::uint32_t raw = le32(p);
    std::memcpy(&v, &raw, sizeof v);
    return static_cast<double>(v);
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
      return static_cast<double>(static_cast<std::int16_t>(le16(p))) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return static_cast<double>(v) / 8388608.0;
    }
    case 32:
      return static_cast<double>(static_cast<std::int32_t>(le32(p))) / 2147483648.0;
    default:
      throw FormatError("unsupported PCM bit depth");
  }
}

}  // namespace

AudioSignal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(path + ": not a RIFF/WAVE file");
  }

  Format fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const unsigned char* chunk = buf.data() + pos;
    const std::uint32_t len = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16 || body + len > buf.size()) throw FormatError(path + ": truncated fmt chunk");
      const unsigned char* f = buf.data() + body;
      fmt.tag = le16(f);
      fmt.channels = le16(f + 2);
      fmt.rate = le32(f + 4);
      fmt.block_align = le16(f + 12);
      fmt.bits = le16(f + 14);
      if (fmt.tag == kFormatExtensible) {
        if (len < 26) throw FormatError(path + ": truncated extensible fmt chunk");
        fmt.tag = le16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw FormatError(path + ": data chunk before fmt chunk");
      data = buf.data() + body;
      data_len = std::min<std::size_t>(len, buf.size() - std::min(body, buf.size()));
      break;
    }
    pos = body + len + (len & 1U);
  }
  if (!have_fmt) throw FormatError(path + ": missing fmt chunk");
  if (data == nullptr) throw FormatError(path + ": missing data chunk");
  if (fmt.tag != kFormatPcm && fmt.tag != kFormatFloat) {
    throw FormatError(path + ": unsupported codec " + std::to_string(fmt.tag));
  }
  if (fmt.tag == kFormatFloat && fmt.bits != 32) {
    throw FormatError(path + ": only 32-bit float is supported");
  }
  if (fmt.tag == kFormatPcm && fmt.bits != 8 && fmt.bits != 16 && fmt.bits != 24 &&
      fmt.bits != 32) {
    throw FormatError(path + ": unsupported PCM bit depth " + std::to_string(fmt.bits));
  }
  if (fmt.channels == 0 || fmt.rate == 0) throw FormatError(path + ": invalid fmt fields");
  const std::size_t width = fmt.bits / 8;
  if (fmt.block_align != width * fmt.channels)
    throw FormatError(path + ": inconsistent block align");

  const std::size_t frames = data_len / fmt.block_align;
  AudioSignal sig;
  sig.sample_rate = fmt.rate;
  sig.samples.resize(static_cast<Index>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      acc += decode(data + i * fmt.block_align + c * width, fmt);
    }
    sig.samples[static_cast<Index>(i)] = acc / fmt.channels;
  }
  if (!sig.samples.allFinite()) throw FormatError(path + ": non-finite samples");
  return sig;
}

long save_wav(const std::string& path, const AudioSignal& sig) {
  if (!(sig.sample_rate > 0.0)) throw InvalidArgument("save_wav: sample_rate must be > 0");
  const auto n = static_cast<std::uint32_t>(sig.samples.size());
  const auto rate = static_cast<std::uint32_t>(std::lround(sig.sample_rate));

  std::vector<unsigned char> out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 2);
  put16(out, 2);
  put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, 2 * n);

  long clipped = 0;
  for (Index i = 0; i < sig.samples.size(); ++i) {
    double v = sig.samples[i];
    if (!std::isfinite(v)) v = 0.0;
    if (v > 1.0 || v < -1.0) {
      ++clipped;
      v = std::clamp(v, -1.0, 1.0);
    }
    const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw FormatError("write failed for " + path);
  return clipped;
}

}  // namespace dcsplit
