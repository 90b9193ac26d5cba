// tools/pairsqa_main.cc
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
// Command-line surface of the toolkit:
//   pairsqa make-toy     synthesize a desk-scale noisy-tone corpus
//   pairsqa build-pairs  construct speech pairs from a MOS manifest
//   pairsqa train        train one seed of one scenario/condition cell
//   pairsqa evaluate     evaluate a checkpoint on a pair file
//   pairsqa report       aggregate completed runs into a results grid

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "pairsqa/common.h"
#include "pairsqa/experiment.h"
#include "pairsqa/metrics.h"
#include "pairsqa/pairgen.h"
#include "pairsqa/report.h"
#include "pairsqa/synth.h"
#include "pairsqa/training.h"

namespace {

using namespace pairsqa;

int cmd_make_toy(const std::string& out_dir, int bases, int systems,
                 int train_bases, int sample_rate, std::uint64_t seed) {
  ToyCorpusConfig cfg;
  cfg.num_bases = bases;
  cfg.num_systems = systems;
  cfg.train_bases = train_bases;
  cfg.sample_rate = sample_rate;
  cfg.seed = seed;
  const ToyCorpus corpus = make_toy_corpus(out_dir, cfg);
  std::printf("wrote %zu train / %zu dev / %zu test utterances under %s\n",
              corpus.train.size(), corpus.dev.size(), corpus.test.size(),
              out_dir.c_str());
  std::printf("manifests: %s %s %s\n", corpus.train_manifest.c_str(),
              corpus.dev_manifest.c_str(), corpus.test_manifest.c_str());
  return 0;
}

int cmd_build_pairs(const std::string& mode, const std::string& manifest_path,
                    const std::string& out_path, double eps, int min_samples,
                    std::uint64_t seed, bool drop_ties) {
  PairGenConfig cfg;
  cfg.eps = eps;
  cfg.min_samples = min_samples;
  cfg.rng_seed = seed;
  cfg.keep_tied_pairs = !drop_ties;

  const auto utts = load_manifest(manifest_path, /*require_mos=*/true);
  std::vector<SpeechPair> pairs;
  if (parse_pair_mode(mode) == PairMode::kMatched) {
    const auto clusters = cluster_transcripts(utts, cfg);
    pairs = build_matched_pairs(clusters, utts, cfg);
    std::printf("%zu utterances -> %zu content clusters -> %zu pairs\n",
                utts.size(), clusters.size(), pairs.size());
  } else {
    pairs = build_unmatched_pairs(utts, cfg);
    std::set<std::string> systems;
    for (const auto& u : utts) systems.insert(u.system_id);
    std::printf("%zu utterances, %zu systems -> %zu pairs\n", utts.size(),
                systems.size(), pairs.size());
  }
  save_pairs(out_path, pairs);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& scenario,
              const std::string& condition, std::uint64_t seed, bool quiet) {
  const ExperimentConfig cfg = ExperimentConfig::load(config_path);
  const auto [train_mode, test_mode] = parse_scenario(scenario);
  const LabelCondition label_condition = parse_label_condition(condition);

  std::ostream* progress = quiet ? nullptr : &std::cerr;
  const SeedRunOutput out =
      run_seed(cfg, train_mode, test_mode, label_condition, seed, progress);

  std::printf("scenario %s  condition %s  seed %llu\n", scenario.c_str(),
              condition.c_str(), static_cast<unsigned long long>(seed));
  std::printf("best epoch %d  dev system SRCC %.4f  (%d epochs ran)\n",
              out.train_result.best.best_epoch,
              out.train_result.best.dev_srcc,
              out.train_result.stopped_epoch);
  std::printf("test ACC %.4f over %d pairs (%d tied labels)\n", out.eval.acc,
              out.eval.n_pairs, out.eval.n_ties);
  std::printf("checkpoint: %s\n", out.checkpoint_path.c_str());
  std::printf("run artifacts: %s\n", out.seed_dir.c_str());
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path,
                 const std::string& pairs_path, const std::string& manifest_path,
                 const std::string& out_dir, bool exclude_ties) {
  const Checkpoint ckpt = Checkpoint::load(checkpoint_path);
  const auto manifest = load_manifest(manifest_path);
  const auto pairs = load_pairs(pairs_path, &manifest);

  // Evaluation touches only the utterances the pair file references.
  std::set<std::string> referenced;
  for (const auto& p : pairs) {
    referenced.insert(p.x_id);
    referenced.insert(p.y_id);
  }
  DatasetSplit split;
  split.name = SplitName::kTest;
  for (const auto& u : manifest) {
    if (referenced.count(u.utt_id) != 0) split.utterances.push_back(u);
  }
  split.pairs = pairs;

  const AudioCache audio = load_audio({&split});
  const PairEvalResult result = evaluate(ckpt, split, audio);

  std::filesystem::create_directories(out_dir);
  nlohmann::json extra;
  extra["checkpoint"] = checkpoint_path;
  extra["pairs"] = pairs_path;
  extra["seed"] = ckpt.seed;
  extra["condition"] = ckpt.label_condition;
  extra["scenario"] = ckpt.scenario;
  extra["dev_srcc"] = ckpt.dev_srcc;
  write_eval_json((std::filesystem::path(out_dir) / "eval.json").string(),
                  result, extra);

  const auto pred_path = std::filesystem::path(out_dir) / "predictions.csv";
  {
    std::ofstream pred(pred_path, std::ios::trunc | std::ios::binary);
    require(pred.good(), "cannot write ", pred_path.string());
    pred << "x_id,y_id,mos_hat_x,mos_hat_y,pref_hat\n";
    char buf[160];
    for (const auto& rec : result.records) {
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", rec.mos_hat_x,
                    rec.mos_hat_y, rec.pref_hat);
      pred << rec.x_id << ',' << rec.y_id << ',' << buf;
    }
  }

  std::printf("N = %d pairs, %d tied labels\n", result.n_pairs, result.n_ties);
  std::printf("ACC            %.4f\n", result.acc);
  if (exclude_ties) {
    if (result.acc_excluding_ties) {
      std::printf("ACC (no ties)  %.4f over %d decided pairs\n",
                  *result.acc_excluding_ties, result.n_pairs - result.n_ties);
    } else {
      std::printf("ACC (no ties)  undefined: every label is tied\n");
    }
  }
  if (result.utt_srcc) std::printf("utterance SRCC %.4f\n", *result.utt_srcc);
  if (result.sys_srcc) std::printf("system SRCC    %.4f\n", *result.sys_srcc);
  std::printf("wrote %s\n", out_dir.c_str());
  return 0;
}

int cmd_report(const std::string& runs_dir, const std::string& format) {
  const auto rows = collect_reports(runs_dir);
  if (format == "text") {
    write_report_text(std::cout, rows);
  } else if (format == "csv") {
    write_report_csv(std::cout, rows);
  } else if (format == "json") {
    std::cout << report_to_json(rows).dump(2) << "\n";
  } else {
    fail("unknown report format '", format, "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference-based pairwise speech quality assessment toolkit"};
  app.require_subcommand(1);

  // make-toy
  std::string toy_out = "toy_corpus";
  int toy_bases = 60, toy_systems = 6, toy_train_bases = 40;
  int toy_rate = 16000;
  std::uint64_t toy_seed = 7;
  auto* make_toy = app.add_subcommand(
      "make-toy", "Synthesize a noisy-tone corpus with MOS labels");
  make_toy->add_option("--out", toy_out, "Output directory")->required();
  make_toy->add_option("--bases", toy_bases, "Base waveforms");
  make_toy->add_option("--systems", toy_systems, "Noise levels (systems)");
  make_toy->add_option("--train-bases", toy_train_bases,
                       "Bases assigned to the train split");
  make_toy->add_option("--sample-rate", toy_rate, "Sample rate in Hz");
  make_toy->add_option("--seed", toy_seed, "Corpus seed");

  // build-pairs
  std::string bp_mode, bp_manifest, bp_out;
  double bp_eps = 0.2;
  int bp_min_samples = 1;
  std::uint64_t bp_seed = 0;
  bool bp_drop_ties = false;
  auto* build_pairs = app.add_subcommand(
      "build-pairs", "Construct speech pairs from a MOS manifest");
  build_pairs->add_option("--mode", bp_mode, "matched or unmatched")
      ->required()
      ->check(CLI::IsMember({"matched", "unmatched"}));
  build_pairs->add_option("--manifest", bp_manifest, "Input manifest CSV")
      ->required();
  build_pairs->add_option("--out", bp_out, "Output pair CSV")->required();
  build_pairs->add_option("--eps", bp_eps,
                          "Clustering radius on normalized distance");
  build_pairs->add_option("--min-samples", bp_min_samples,
                          "Density threshold for core points");
  build_pairs->add_option("--seed", bp_seed, "Sampling seed (unmatched mode)");
  build_pairs->add_flag("--drop-ties", bp_drop_ties,
                        "Drop pairs with tied MOS labels");

  // train
  std::string tr_config, tr_scenario, tr_condition;
  std::uint64_t tr_seed = 1;
  bool tr_quiet = false;
  auto* train_cmd =
      app.add_subcommand("train", "Train one scenario/condition/seed cell");
  train_cmd->add_option("--config", tr_config, "Experiment config JSON")
      ->required();
  train_cmd->add_option("--scenario", tr_scenario, "Training-testing scenario")
      ->required()
      ->check(CLI::IsMember({"m-m", "nm-m", "m-nm", "nm-nm"}));
  train_cmd->add_option("--label-condition", tr_condition, "Label condition")
      ->required()
      ->check(CLI::IsMember({"LA", "LM", "MOS_ONLY"}));
  train_cmd->add_option("--seed", tr_seed, "Training seed")->required();
  train_cmd->add_flag("--quiet", tr_quiet, "Suppress per-epoch progress");

  // evaluate
  std::string ev_checkpoint, ev_pairs, ev_manifest, ev_out;
  bool ev_exclude_ties = false;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "Evaluate a checkpoint on a pair file");
  evaluate_cmd->add_option("--checkpoint", ev_checkpoint, "Checkpoint archive")
      ->required();
  evaluate_cmd->add_option("--pairs", ev_pairs, "Pair CSV")->required();
  evaluate_cmd->add_option("--manifest", ev_manifest, "Manifest CSV")
      ->required();
  evaluate_cmd->add_option("--out", ev_out, "Output directory")->required();
  evaluate_cmd->add_flag("--exclude-ties", ev_exclude_ties,
                         "Also report accuracy over decided pairs only");

  // report
  std::string rp_runs, rp_format = "text";
  auto* report_cmd =
      app.add_subcommand("report", "Aggregate completed runs into a grid");
  report_cmd->add_option("--runs", rp_runs, "Run directory")->required();
  report_cmd->add_option("--format", rp_format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (make_toy->parsed()) {
      return cmd_make_toy(toy_out, toy_bases, toy_systems, toy_train_bases,
                          toy_rate, toy_seed);
    }
    if (build_pairs->parsed()) {
      return cmd_build_pairs(bp_mode, bp_manifest, bp_out, bp_eps,
                             bp_min_samples, bp_seed, bp_drop_ties);
    }
    if (train_cmd->parsed()) {
      return cmd_train(tr_config, tr_scenario, tr_condition, tr_seed, tr_quiet);
    }
    if (evaluate_cmd->parsed()) {
      return cmd_evaluate(ev_checkpoint, ev_pairs, ev_manifest, ev_out,
                          ev_exclude_ties);
    }
    if (report_cmd->parsed()) {
      return cmd_report(rp_runs, rp_format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
