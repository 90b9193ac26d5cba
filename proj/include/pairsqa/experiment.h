// include/pairsqa/experiment.h
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
// Experiment orchestration shared by the CLI and the acceptance suite:
// manifests -> scenario splits -> training -> evaluation -> run artifacts.

#ifndef PAIRSQA_EXPERIMENT_H_
#define PAIRSQA_EXPERIMENT_H_

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "pairsqa/metrics.h"
#include "pairsqa/training.h"

namespace pairsqa {

struct ExperimentConfig {
  std::string train_manifest;
  std::string dev_manifest;
  std::string test_manifest;
  std::string out_dir = "runs";
  std::string architecture = "samos";
  std::string semantic_backbone = "toy";
  std::string acoustic_backbone = "toy";
  nlohmann::json model_config = nlohmann::json::object();
  TrainConfig train;
  PairGenConfig pairgen;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
};

// Loads the three manifests (MOS required; pair labels derive from it) and
// builds the scenario's pair sets.
ScenarioSplits build_splits(const ExperimentConfig& cfg, PairMode train_mode,
                            PairMode test_mode);

struct SeedRunOutput {
  std::string run_dir;    // <out_dir>/<condition>_<scenario>
  std::string seed_dir;   // <run_dir>/seed_<k>
  std::string checkpoint_path;
  TrainResult train_result;
  PairEvalResult eval;
};

// Trains one seed of one (scenario, condition) cell, evaluates the best
// checkpoint on the test split and writes run artifacts:
// run.json, seed_<k>/checkpoint.ckpt, seed_<k>/train_log.csv,
// seed_<k>/eval.json.
SeedRunOutput run_seed(const ExperimentConfig& cfg, PairMode train_mode,
                       PairMode test_mode, LabelCondition condition,
                       std::uint64_t seed, std::ostream* progress = nullptr);

// eval.json payload for one evaluated checkpoint.
nlohmann::json eval_to_json(const PairEvalResult& eval);
void write_eval_json(const std::string& path, const PairEvalResult& eval,
                     const nlohmann::json& extra);

}  // namespace pairsqa

#endif  // PAIRSQA_EXPERIMENT_H_
