// include/pairsqa/training.h
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
// Loss functions, the SGD training loop with SRCC-based checkpoint
// selection and early stopping, and multi-seed metric averaging.
//
// Label conditions:
//   LA       - MOS labels available: L = L_m + L_p.
//   LM       - labels missing: L = L_p only; the scorer becomes an absolute
//              (not MOS-calibrated) score predictor.
//   MOS_ONLY - ablation trained on single de-paired utterances with L_m.

#ifndef PAIRSQA_TRAINING_H_
#define PAIRSQA_TRAINING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pairsqa/audio.h"
#include "pairsqa/checkpoint.h"
#include "pairsqa/pairgen.h"
#include "pairsqa/samos.h"

namespace pairsqa {

enum class LabelCondition { kLA, kLM, kMosOnly };

std::string to_string(LabelCondition condition);
LabelCondition parse_label_condition(const std::string& text);

struct TrainConfig {
  LabelCondition label_condition = LabelCondition::kLA;
  int batch_size = 8;        // pairs per step (16 forward passes)
  double lr = 1e-4;
  int max_epochs = 1000;
  int patience = 15;         // consecutive non-improving epochs tolerated
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  bool swap_augment = false; // present each pair in both orders
};

void validate(const TrainConfig& cfg);

struct EpochReport {
  int epoch = 0;       // 1-based
  double loss_m = 0.0;
  double loss_p = 0.0;
  double loss = 0.0;
  double dev_srcc = 0.0;
  double seconds = 0.0;
};

// Per-epoch CSV log: epoch,loss_m,loss_p,loss,dev_srcc,seconds
void write_epoch_log(const std::string& path,
                     const std::vector<EpochReport>& reports);

struct MosBatchItem {
  double pred_x = 0.0;
  double pred_y = 0.0;
  double label_x = 0.0;
  double label_y = 0.0;
};

struct PrefBatchItem {
  double pred_p = 0.0;
  int label_p = 0;
};

// Mean over pairs of (label_x - pred_x)^2 + (label_y - pred_y)^2.
double mos_loss(const std::vector<MosBatchItem>& batch);

// Mean over pairs of (label_p - pred_p)^2.
double pref_loss(const std::vector<PrefBatchItem>& batch);

// LA -> L_m + L_p (unit weights); LM -> L_p; MOS_ONLY -> L_m.
double total_loss(LabelCondition condition, double loss_m, double loss_p);

// Tracks the best dev SRCC seen so far (strict improvement, earliest-epoch
// tie-breaking) and signals early stopping after `patience` consecutive
// non-improving epochs. Pure bookkeeping so it can be driven with injected
// SRCC sequences.
class CheckpointSelector {
 public:
  explicit CheckpointSelector(int patience);

  // Feed the next epoch's dev SRCC; returns true iff it improved the best.
  bool observe(int epoch, double srcc);
  bool should_stop() const { return stale_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_srcc() const { return best_srcc_; }
  int stale_epochs() const { return stale_; }

 private:
  int patience_;
  int best_epoch_ = 0;
  double best_srcc_ = 0.0;
  bool has_best_ = false;
  int stale_ = 0;
};

struct TrainResult {
  Checkpoint best;
  std::vector<EpochReport> reports;
  int stopped_epoch = 0;  // last epoch that ran
};

// Plain SGD over the scenario's train pairs with per-epoch deterministic
// shuffling, dev system-level SRCC computed every epoch from the model's
// absolute scores, best-SRCC checkpointing and early stopping. Fully
// deterministic given the seed.
TrainResult train(ScoringModel& model, const ScenarioSplits& splits,
                  const TrainConfig& cfg, std::uint64_t seed,
                  const AudioCache& audio,
                  const std::string& semantic_backbone,
                  const std::string& acoustic_backbone,
                  std::ostream* progress = nullptr);

struct SeedOutcome {
  std::uint64_t seed = 0;
  double test_acc = 0.0;
  double dev_srcc = 0.0;
  int best_epoch = 0;
  Checkpoint checkpoint;
  std::optional<std::string> error;  // set when this seed failed
};

struct MultiSeedResult {
  std::vector<SeedOutcome> per_seed;
  double mean_acc = 0.0;  // arithmetic mean over successful seeds
};

// Runs train() once per configured seed on a fresh model from the factory,
// evaluates each best checkpoint on the test split, and averages the
// accuracies. Per-seed failures are recorded and do not abort other seeds.
MultiSeedResult multi_seed_run(
    const std::function<std::unique_ptr<ScoringModel>()>& factory,
    const ScenarioSplits& splits, const TrainConfig& cfg,
    const AudioCache& audio, const std::string& semantic_backbone,
    const std::string& acoustic_backbone, std::ostream* progress = nullptr);

// Loads every waveform referenced by the splits' utterances.
AudioCache load_audio(const std::vector<const DatasetSplit*>& splits);

}  // namespace pairsqa

#endif  // PAIRSQA_TRAINING_H_
