// include/pairsqa/audio.h
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

#ifndef PAIRSQA_AUDIO_H_
#define PAIRSQA_AUDIO_H_

#include <string>
#include <unordered_map>
#include <vector>

namespace pairsqa {

// Mono waveform with samples in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_seconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

// 16-bit PCM mono WAV only; anything else is rejected.
Waveform read_wav_mono16(const std::string& path);
void write_wav_mono16(const std::string& path, const Waveform& wav);

// Linear-interpolation resampler; identity when rates already match.
Waveform resample_linear(const Waveform& wav, int target_rate);

// In-memory waveform store keyed by utt_id, loaded once per run so training
// epochs and evaluation never re-read the same file.
class AudioCache {
 public:
  void put(const std::string& utt_id, Waveform wav);
  bool contains(const std::string& utt_id) const;
  const Waveform& get(const std::string& utt_id) const;
  std::size_t size() const { return store_.size(); }

 private:
  std::unordered_map<std::string, Waveform> store_;
};

}  // namespace pairsqa

#endif  // PAIRSQA_AUDIO_H_
