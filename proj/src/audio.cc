// src/audio.cc
//
// Copyright 2026  The PairSQA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pairsqa/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "pairsqa/common.h"

namespace pairsqa {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0]) |
         static_cast<std::uint16_t>(p[1] << 8);
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform read_wav_mono16(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open WAV file: ", path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  require(bytes.size() >= 44, "WAV file too short: ", path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  require(std::memcmp(p, "RIFF", 4) == 0 && std::memcmp(p + 8, "WAVE", 4) == 0,
          "not a RIFF/WAVE file: ", path);

  int sample_rate = 0;
  int channels = 0;
  int bits = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = p + pos;
    const std::uint32_t chunk_len = read_u32(chunk + 4);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      require(chunk_len >= 16 && pos + 8 + 16 <= bytes.size(),
              "malformed fmt chunk: ", path);
      const std::uint16_t format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      sample_rate = static_cast<int>(read_u32(chunk + 12));
      bits = read_u16(chunk + 22);
      require(format == 1, "only PCM WAV is supported: ", path);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_len = std::min<std::size_t>(chunk_len, bytes.size() - pos - 8);
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }

  require(sample_rate > 0, "missing fmt chunk: ", path);
  require(channels == 1, "expected mono audio, got ", channels,
          " channels: ", path);
  require(bits == 16, "expected 16-bit PCM, got ", bits, " bits: ", path);
  require(data != nullptr, "missing data chunk: ", path);

  Waveform wav;
  wav.sample_rate = sample_rate;
  const std::size_t n = data_len / 2;
  wav.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int16_t s = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(data[2 * i]) |
        (static_cast<std::uint16_t>(data[2 * i + 1]) << 8));
    wav.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return wav;
}

void write_wav_mono16(const std::string& path, const Waveform& wav) {
  require(wav.sample_rate > 0, "write_wav_mono16: sample_rate must be > 0");
  const std::uint32_t n = static_cast<std::uint32_t>(wav.samples.size());
  const std::uint32_t data_bytes = n * 2;

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(wav.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(wav.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::clamp(wav.samples[i], -1.0, 1.0);
    const int s = static_cast<int>(std::lround(v * 32767.0));
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), "cannot write WAV file: ", path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  require(f.good(), "short write to WAV file: ", path);
}

Waveform resample_linear(const Waveform& wav, int target_rate) {
  require(wav.sample_rate > 0, "resample_linear: source rate must be > 0");
  require(target_rate > 0, "resample_linear: target rate must be > 0");
  if (wav.sample_rate == target_rate || wav.samples.empty()) {
    Waveform out = wav;
    out.sample_rate = target_rate;
    return out;
  }
  Waveform out;
  out.sample_rate = target_rate;
  const double ratio =
      static_cast<double>(wav.sample_rate) / static_cast<double>(target_rate);
  const std::size_t n = static_cast<std::size_t>(
      std::max(1.0, std::floor(static_cast<double>(wav.samples.size()) / ratio)));
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * ratio;
    const std::size_t lo = static_cast<std::size_t>(t);
    const std::size_t hi = std::min(lo + 1, wav.samples.size() - 1);
    const double frac = t - static_cast<double>(lo);
    out.samples[i] = (1.0 - frac) * wav.samples[lo] + frac * wav.samples[hi];
  }
  return out;
}

void AudioCache::put(const std::string& utt_id, Waveform wav) {
  store_[utt_id] = std::move(wav);
}

bool AudioCache::contains(const std::string& utt_id) const {
  return store_.count(utt_id) != 0;
}

const Waveform& AudioCache::get(const std::string& utt_id) const {
  auto it = store_.find(utt_id);
  require(it != store_.end(), "no cached audio for utterance '", utt_id, "'");
  return it->second;
}

}  // namespace pairsqa
