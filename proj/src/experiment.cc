// src/experiment.cc
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

#include "pairsqa/experiment.h"

#include <filesystem>
#include <fstream>

#include "pairsqa/common.h"

namespace pairsqa {

namespace {

namespace fs = std::filesystem;

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  require(out.good(), "cannot write ", path.string());
  out << j.dump(2) << "\n";
  require(out.good(), "short write to ", path.string());
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  const auto& data = j.at("data");
  cfg.train_manifest = data.at("train_manifest").get<std::string>();
  cfg.dev_manifest = data.at("dev_manifest").get<std::string>();
  cfg.test_manifest = data.at("test_manifest").get<std::string>();
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.architecture = j.value("architecture", cfg.architecture);

  if (j.contains("backbone")) {
    const auto& bb = j.at("backbone");
    cfg.semantic_backbone = bb.value("semantic", cfg.semantic_backbone);
    cfg.acoustic_backbone = bb.value("acoustic", cfg.acoustic_backbone);
  }
  if (j.contains("model")) cfg.model_config = j.at("model");

  if (j.contains("train")) {
    const auto& t = j.at("train");
    if (t.contains("label_condition")) {
      cfg.train.label_condition =
          parse_label_condition(t.at("label_condition").get<std::string>());
    }
    cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
    cfg.train.lr = t.value("lr", cfg.train.lr);
    cfg.train.max_epochs = t.value("max_epochs", cfg.train.max_epochs);
    cfg.train.patience = t.value("patience", cfg.train.patience);
    if (t.contains("seeds")) {
      cfg.train.seeds = t.at("seeds").get<std::vector<std::uint64_t>>();
    }
    cfg.train.swap_augment = t.value("swap_augment", cfg.train.swap_augment);
  }
  if (j.contains("pairgen")) {
    const auto& p = j.at("pairgen");
    cfg.pairgen.eps = p.value("eps", cfg.pairgen.eps);
    cfg.pairgen.min_samples = p.value("min_samples", cfg.pairgen.min_samples);
    cfg.pairgen.rng_seed = p.value("seed", cfg.pairgen.rng_seed);
    cfg.pairgen.keep_tied_pairs =
        p.value("keep_tied_pairs", cfg.pairgen.keep_tied_pairs);
  }
  validate(cfg.train);
  validate(cfg.pairgen);
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config: ", path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("malformed JSON config ", path, ": ", e.what());
  }
  return from_json(j);
}

ScenarioSplits build_splits(const ExperimentConfig& cfg, PairMode train_mode,
                            PairMode test_mode) {
  const auto train_utts = load_manifest(cfg.train_manifest, /*require_mos=*/true);
  const auto dev_utts = load_manifest(cfg.dev_manifest, /*require_mos=*/true);
  const auto test_utts = load_manifest(cfg.test_manifest, /*require_mos=*/true);
  return build_scenario(train_mode, test_mode, train_utts, dev_utts, test_utts,
                        cfg.pairgen);
}

nlohmann::json eval_to_json(const PairEvalResult& eval) {
  nlohmann::json j;
  j["acc"] = eval.acc;
  j["acc_excluding_ties"] = eval.acc_excluding_ties
                                ? nlohmann::json(*eval.acc_excluding_ties)
                                : nlohmann::json(nullptr);
  j["n_pairs"] = eval.n_pairs;
  j["n_ties"] = eval.n_ties;
  j["utt_srcc"] =
      eval.utt_srcc ? nlohmann::json(*eval.utt_srcc) : nlohmann::json(nullptr);
  j["sys_srcc"] =
      eval.sys_srcc ? nlohmann::json(*eval.sys_srcc) : nlohmann::json(nullptr);
  return j;
}

void write_eval_json(const std::string& path, const PairEvalResult& eval,
                     const nlohmann::json& extra) {
  nlohmann::json j = eval_to_json(eval);
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    j[it.key()] = it.value();
  }
  write_json_file(path, j);
}

SeedRunOutput run_seed(const ExperimentConfig& cfg, PairMode train_mode,
                       PairMode test_mode, LabelCondition condition,
                       std::uint64_t seed, std::ostream* progress) {
  TrainConfig train_cfg = cfg.train;
  train_cfg.label_condition = condition;

  const ScenarioSplits splits = build_splits(cfg, train_mode, test_mode);
  const AudioCache audio =
      load_audio({&splits.train, &splits.dev, &splits.test});

  const BackbonePair backbones =
      make_backbones(cfg.semantic_backbone, cfg.acoustic_backbone);
  auto model = make_scoring_model(cfg.architecture, cfg.model_config,
                                  backbones.semantic, backbones.acoustic);

  SeedRunOutput out;
  out.train_result =
      train(*model, splits, train_cfg, seed, audio,
            backbones.semantic->name(), backbones.acoustic->name(), progress);
  out.eval = evaluate(out.train_result.best, splits.test, audio);

  const std::string scenario = scenario_string(train_mode, test_mode);
  const fs::path run_dir =
      fs::path(cfg.out_dir) / str_cat(to_string(condition), "_", scenario);
  const fs::path seed_dir = run_dir / str_cat("seed_", seed);
  fs::create_directories(seed_dir);

  nlohmann::json run_meta;
  run_meta["condition"] = to_string(condition);
  run_meta["scenario"] = scenario;
  run_meta["seeds"] = cfg.train.seeds;
  write_json_file(run_dir / "run.json", run_meta);

  const fs::path ckpt_path = seed_dir / "checkpoint.ckpt";
  out.train_result.best.save(ckpt_path.string());
  write_epoch_log((seed_dir / "train_log.csv").string(),
                  out.train_result.reports);

  nlohmann::json extra;
  extra["seed"] = seed;
  extra["condition"] = to_string(condition);
  extra["scenario"] = scenario;
  extra["dev_srcc"] = out.train_result.best.dev_srcc;
  extra["best_epoch"] = out.train_result.best.best_epoch;
  extra["checkpoint"] = ckpt_path.string();
  write_eval_json((seed_dir / "eval.json").string(), out.eval, extra);

  out.run_dir = run_dir.string();
  out.seed_dir = seed_dir.string();
  out.checkpoint_path = ckpt_path.string();
  return out;
}

}  // namespace pairsqa
