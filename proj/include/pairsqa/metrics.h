// include/pairsqa/metrics.h
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

#ifndef PAIRSQA_METRICS_H_
#define PAIRSQA_METRICS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pairsqa/audio.h"
#include "pairsqa/checkpoint.h"
#include "pairsqa/datamodel.h"
#include "pairsqa/samos.h"

namespace pairsqa {

// ACC = 1 - (1/N) * sum sgn(|sgn(pref_hat) - s_p|): a pair counts as
// correct iff the sign of the predicted preference equals the label
// exactly. A nonzero prediction on a tied label and a zero prediction on a
// decided label both count as errors. Predictions are matched to labels by
// (x_id, y_id), so file order does not matter.
double preference_accuracy(const std::vector<PredictionRecord>& preds,
                           const std::vector<SpeechPair>& labels);

// Spearman rank correlation: Pearson correlation of average-ranked values
// (ties get average ranks). Errors on length mismatch, fewer than two
// points, or a constant input vector (undefined, never silently 0).
double spearman_srcc(const std::vector<double>& pred_scores,
                     const std::vector<double>& true_scores);

// Mean predicted score per system against mean true MOS per system, then
// Spearman. Every system of `utterances` must have at least one scored
// utterance and every score must belong to a listed utterance.
double system_level_srcc(const std::map<std::string, double>& utt_scores,
                         const std::vector<Utterance>& utterances);

// One checkpoint evaluated on one pair set.
struct PairEvalResult {
  double acc = 0.0;
  std::optional<double> acc_excluding_ties;  // absent when every pair is tied
  int n_pairs = 0;
  int n_ties = 0;  // labels with s_p == 0
  std::optional<double> utt_srcc;  // absent without true MOS labels
  std::optional<double> sys_srcc;
  std::vector<PredictionRecord> records;
};

// Scores every test pair with forward_pair and computes ACC plus both SRCC
// levels over the de-duplicated utterance set of the pairs.
PairEvalResult evaluate_pairs(const ScoringModel& model,
                              const DatasetSplit& test,
                              const AudioCache& audio);

PairEvalResult evaluate(const Checkpoint& checkpoint, const DatasetSplit& test,
                        const AudioCache& audio);

}  // namespace pairsqa

#endif  // PAIRSQA_METRICS_H_
