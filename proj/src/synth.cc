// src/synth.cc
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

#include "pairsqa/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "pairsqa/audio.h"
#include "pairsqa/common.h"
#include "pairsqa/rng.h"

namespace pairsqa {

namespace {

constexpr double kTwoPi = 6.283185307179586477;

const char* kToyVocab[] = {
    "river", "stone", "light", "garden", "window", "cloud",  "paper",
    "night", "music", "field", "silver", "orange", "candle", "winter",
    "harbor", "meadow", "signal", "branch", "copper", "lantern"};
constexpr std::size_t kToyVocabSize = sizeof(kToyVocab) / sizeof(kToyVocab[0]);

// Few random partials with a slow amplitude envelope, peak-normalized.
std::vector<double> make_base_waveform(int num_samples, int sample_rate,
                                       Rng* rng) {
  const int num_partials = 2 + static_cast<int>(rng->uniform_below(3));
  std::vector<double> freqs, amps, phases;
  for (int p = 0; p < num_partials; ++p) {
    freqs.push_back(rng->uniform(160.0, 900.0));
    amps.push_back(rng->uniform(0.4, 1.0));
    phases.push_back(rng->uniform(0.0, kTwoPi));
  }
  const double env_rate = rng->uniform(1.5, 4.0);
  const double env_phase = rng->uniform(0.0, kTwoPi);

  std::vector<double> samples(static_cast<std::size_t>(num_samples));
  double peak = 1e-12;
  for (int i = 0; i < num_samples; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double v = 0.0;
    for (int p = 0; p < num_partials; ++p) {
      v += amps[static_cast<std::size_t>(p)] *
           std::sin(kTwoPi * freqs[static_cast<std::size_t>(p)] * t +
                    phases[static_cast<std::size_t>(p)]);
    }
    v *= 0.6 + 0.4 * std::sin(kTwoPi * env_rate * t + env_phase);
    samples[static_cast<std::size_t>(i)] = v;
    peak = std::max(peak, std::abs(v));
  }
  const double norm = 0.5 / peak;
  for (double& v : samples) v *= norm;
  return samples;
}

std::string make_transcript(Rng* rng) {
  const int num_words = 2 + static_cast<int>(rng->uniform_below(4));
  std::string text;
  for (int w = 0; w < num_words; ++w) {
    if (w > 0) text += ' ';
    text += kToyVocab[rng->uniform_below(kToyVocabSize)];
  }
  return text;
}

}  // namespace

ToyCorpus make_toy_corpus(const std::string& out_dir,
                          const ToyCorpusConfig& cfg) {
  require(cfg.num_bases >= 3, "toy corpus needs at least 3 base waveforms");
  require(cfg.num_systems >= 2, "toy corpus needs at least 2 systems");
  require(cfg.train_bases >= 1 && cfg.train_bases <= cfg.num_bases - 2,
          "train_bases must leave at least one base each for dev and test");
  require(cfg.sample_rate > 0, "sample rate must be positive");
  require(cfg.max_duration >= cfg.min_duration && cfg.min_duration > 0.0,
          "bad duration range");
  require(cfg.snr_db_best > cfg.snr_db_worst, "SNR range must be decreasing");
  require(cfg.mos_best > cfg.mos_worst, "MOS range must be decreasing");

  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  const fs::path wav_dir = root / "wav";
  fs::create_directories(wav_dir);

  // Per-system SNR and nominal MOS, best system first.
  std::vector<double> snr_db(static_cast<std::size_t>(cfg.num_systems));
  std::vector<double> nominal_mos(static_cast<std::size_t>(cfg.num_systems));
  for (int s = 0; s < cfg.num_systems; ++s) {
    const double frac =
        cfg.num_systems == 1
            ? 0.0
            : static_cast<double>(s) / static_cast<double>(cfg.num_systems - 1);
    snr_db[static_cast<std::size_t>(s)] =
        cfg.snr_db_best + frac * (cfg.snr_db_worst - cfg.snr_db_best);
    nominal_mos[static_cast<std::size_t>(s)] =
        cfg.mos_best + frac * (cfg.mos_worst - cfg.mos_best);
  }

  ToyCorpus corpus;
  const int dev_bases = (cfg.num_bases - cfg.train_bases) / 2;

  for (int b = 0; b < cfg.num_bases; ++b) {
    Rng base_rng(mix64(cfg.seed, 0xba5e0000ULL + static_cast<std::uint64_t>(b)));
    const double duration =
        base_rng.uniform(cfg.min_duration, cfg.max_duration);
    const int num_samples =
        std::max(1, static_cast<int>(duration * cfg.sample_rate));
    const std::vector<double> base =
        make_base_waveform(num_samples, cfg.sample_rate, &base_rng);
    const std::string transcript = make_transcript(&base_rng);

    // Signal power for SNR scaling.
    double signal_power = 0.0;
    for (double v : base) signal_power += v * v;
    signal_power /= static_cast<double>(base.size());

    for (int s = 0; s < cfg.num_systems; ++s) {
      Rng noise_rng(mix64(cfg.seed, 0x401e0000ULL +
                                        static_cast<std::uint64_t>(b) * 1009ULL +
                                        static_cast<std::uint64_t>(s)));
      const double snr = snr_db[static_cast<std::size_t>(s)];
      const double noise_power = signal_power / std::pow(10.0, snr / 10.0);
      const double noise_sd = std::sqrt(noise_power);

      Waveform wav;
      wav.sample_rate = cfg.sample_rate;
      wav.samples.resize(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        wav.samples[i] = base[i] + noise_sd * noise_rng.normal();
      }

      char utt_id[64];
      std::snprintf(utt_id, sizeof(utt_id), "base%03d_sys%02d", b, s);
      char sys_id[32];
      std::snprintf(sys_id, sizeof(sys_id), "sys%02d", s);
      const fs::path wav_path = wav_dir / (std::string(utt_id) + ".wav");
      write_wav_mono16(wav_path.string(), wav);

      double mos = nominal_mos[static_cast<std::size_t>(s)] +
                   cfg.mos_noise_sd * noise_rng.normal();
      mos = std::clamp(mos, 1.0, 5.0);

      Utterance u;
      u.utt_id = utt_id;
      u.wav_path = wav_path.string();
      u.system_id = sys_id;
      u.mos = mos;
      u.transcript = transcript;
      u.sample_rate = cfg.sample_rate;

      if (b < cfg.train_bases) {
        corpus.train.push_back(std::move(u));
      } else if (b < cfg.train_bases + dev_bases) {
        corpus.dev.push_back(std::move(u));
      } else {
        corpus.test.push_back(std::move(u));
      }
    }
  }

  corpus.train_manifest = (root / "train.csv").string();
  corpus.dev_manifest = (root / "dev.csv").string();
  corpus.test_manifest = (root / "test.csv").string();
  write_manifest(corpus.train_manifest, corpus.train);
  write_manifest(corpus.dev_manifest, corpus.dev);
  write_manifest(corpus.test_manifest, corpus.test);
  return corpus;
}

}  // namespace pairsqa
