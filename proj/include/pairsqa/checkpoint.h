// include/pairsqa/checkpoint.h
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

#ifndef PAIRSQA_CHECKPOINT_H_
#define PAIRSQA_CHECKPOINT_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "pairsqa/samos.h"

namespace pairsqa {

// Serialized model state: every parameter tensor, the full configuration,
// the training seed and the dev-set system-level SRCC at save time. Stored
// as a single MessagePack archive (float64 tensors round-trip exactly).
struct Checkpoint {
  static constexpr int kSchemaVersion = 1;

  std::string architecture = "samos";
  nlohmann::json model_config;     // architecture-specific
  std::string semantic_backbone;   // resolved extractor spec
  std::string acoustic_backbone;
  std::uint64_t seed = 0;
  double dev_srcc = std::numeric_limits<double>::quiet_NaN();
  std::string label_condition;     // provenance, informational
  std::string scenario;
  int best_epoch = 0;
  nlohmann::json tensors;

  static Checkpoint from_model(const ScoringModel& model,
                               const std::string& semantic_backbone,
                               const std::string& acoustic_backbone);

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

  // Rebuilds the backbones from the stored specs and restores the model.
  std::unique_ptr<ScoringModel> instantiate() const;
};

}  // namespace pairsqa

#endif  // PAIRSQA_CHECKPOINT_H_
