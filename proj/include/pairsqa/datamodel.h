// include/pairsqa/datamodel.h
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
// Core domain types and their CSV serialization.
//
// Manifest format (UTF-8, LF, '.' decimal separator):
//   utt_id,wav_path,system_id,mos,transcript
// One utterance per line, empty cell means the field is absent. The
// transcript is the last column and is taken verbatim to end of line, so it
// may contain commas; the other fields may not.
//
// Pair format:
//   x_id,y_id,s_m_x,s_m_y,s_p,cluster_id
// cluster_id is -1 for pairs built without content matching. MOS values are
// written with 17 significant digits so serialize-then-parse is the identity.

#ifndef PAIRSQA_DATAMODEL_H_
#define PAIRSQA_DATAMODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pairsqa {

// One audio sample with system provenance, optional transcript and MOS label.
struct Utterance {
  std::string utt_id;
  std::string wav_path;
  std::string system_id;
  std::optional<double> mos;              // in [1, 5] when present
  std::optional<std::string> transcript;  // normalized text when present
  int sample_rate = 16000;  // nominal; audio loading reads the WAV header
};

// The five-tuple driving training and evaluation: paired utterances, their
// MOS labels and the derived preference label.
struct SpeechPair {
  std::string x_id;
  std::string y_id;
  std::optional<double> s_m_x;
  std::optional<double> s_m_y;
  int s_p = 0;                 // in {-1, 0, +1}
  std::int64_t cluster_id = -1;  // content cluster, -1 when unmatched
};

// Per-pair model output. pref_hat lies strictly inside (-1, 1) and shares
// its sign with mos_hat_x - mos_hat_y.
struct PredictionRecord {
  std::string x_id;
  std::string y_id;
  double mos_hat_x = 0.0;
  double mos_hat_y = 0.0;
  double pref_hat = 0.0;
};

enum class SplitName { kTrain, kDev, kTest };
enum class ScenarioTag { kMatched, kUnmatched, kNone };

std::string to_string(SplitName name);
std::string to_string(ScenarioTag tag);

struct DatasetSplit {
  SplitName name = SplitName::kTrain;
  std::vector<Utterance> utterances;
  std::vector<SpeechPair> pairs;
  ScenarioTag scenario_tag = ScenarioTag::kNone;
};

// s_p = sgn(s_m_x - s_m_y); exact comparison, no tolerance.
int derive_preference_label(double s_m_x, double s_m_y);

// Parses and validates a manifest. Rejects duplicate utt_ids, out-of-range
// MOS, and (when require_mos is set) rows without a MOS label.
std::vector<Utterance> load_manifest(const std::string& path,
                                     bool require_mos = false);
void write_manifest(const std::string& path,
                    const std::vector<Utterance>& utts);

// Pair file round-trip. When a manifest is supplied, load_pairs additionally
// rejects pairs whose utt_ids do not resolve.
void save_pairs(const std::string& path, const std::vector<SpeechPair>& pairs);
std::vector<SpeechPair> load_pairs(
    const std::string& path,
    const std::vector<Utterance>* manifest = nullptr);

// SpeechPair invariants: x != y, s_p in range, and label consistency with
// the stored MOS values when both are present.
void validate_pairs(const std::vector<SpeechPair>& pairs);

// Every pair member resolves to an utterance of the split; matched splits
// additionally carry cluster ids on every pair.
void validate_split(const DatasetSplit& split);

using UtteranceIndex = std::unordered_map<std::string, const Utterance*>;
UtteranceIndex build_index(const std::vector<Utterance>& utts);
const Utterance& find_utterance(const UtteranceIndex& index,
                                const std::string& utt_id);

}  // namespace pairsqa

#endif  // PAIRSQA_DATAMODEL_H_
