// include/pairsqa/synth.h
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
//
// Synthetic desk-scale corpus: harmonic base waveforms degraded by additive
// white noise at per-"system" SNR levels. The synthetic MOS is an affine
// function of the SNR plus small seeded noise, so preference labels follow
// the noise ordering almost everywhere. All base waveforms carry a toy
// transcript shared across systems, which makes the content-matched pair
// builder exercise real clusters.

#ifndef PAIRSQA_SYNTH_H_
#define PAIRSQA_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pairsqa/datamodel.h"

namespace pairsqa {

struct ToyCorpusConfig {
  int num_bases = 60;      // distinct source waveforms
  int num_systems = 6;     // noise levels; SNR spaced evenly over snr range
  int train_bases = 40;    // remaining bases split evenly dev/test
  int sample_rate = 16000;
  double min_duration = 0.35;  // seconds
  double max_duration = 0.60;
  double snr_db_best = 30.0;
  double snr_db_worst = 0.0;
  double mos_best = 4.6;   // affine MOS(SNR) endpoints
  double mos_worst = 1.4;
  double mos_noise_sd = 0.05;
  std::uint64_t seed = 7;
};

struct ToyCorpus {
  std::vector<Utterance> train;
  std::vector<Utterance> dev;
  std::vector<Utterance> test;
  std::string train_manifest;  // file paths written under out_dir
  std::string dev_manifest;
  std::string test_manifest;
};

// Writes <out_dir>/wav/*.wav and the three split manifests; fully
// deterministic given the config.
ToyCorpus make_toy_corpus(const std::string& out_dir,
                          const ToyCorpusConfig& cfg);

}  // namespace pairsqa

#endif  // PAIRSQA_SYNTH_H_
