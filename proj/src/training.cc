// src/training.cc
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

#include "pairsqa/training.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "pairsqa/common.h"
#include "pairsqa/metrics.h"
#include "pairsqa/rng.h"

namespace pairsqa {

std::string to_string(LabelCondition condition) {
  switch (condition) {
    case LabelCondition::kLA: return "LA";
    case LabelCondition::kLM: return "LM";
    case LabelCondition::kMosOnly: return "MOS_ONLY";
  }
  return "?";
}

LabelCondition parse_label_condition(const std::string& text) {
  if (text == "LA") return LabelCondition::kLA;
  if (text == "LM") return LabelCondition::kLM;
  if (text == "MOS_ONLY") return LabelCondition::kMosOnly;
  fail("unknown label condition '", text, "' (expected LA, LM or MOS_ONLY)");
}

void validate(const TrainConfig& cfg) {
  require(cfg.batch_size >= 1, "batch_size must be >= 1, got ", cfg.batch_size);
  require(cfg.lr > 0.0, "learning rate must be positive, got ", cfg.lr);
  require(cfg.max_epochs >= 1, "max_epochs must be >= 1, got ", cfg.max_epochs);
  require(cfg.patience >= 1, "patience must be >= 1, got ", cfg.patience);
  require(!cfg.seeds.empty(), "seed list may not be empty");
}

void write_epoch_log(const std::string& path,
                     const std::vector<EpochReport>& reports) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  require(out.good(), "cannot write epoch log: ", path);
  out << "epoch,loss_m,loss_p,loss,dev_srcc,seconds\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g,%.3f\n",
                  r.epoch, r.loss_m, r.loss_p, r.loss, r.dev_srcc, r.seconds);
    out << buf;
  }
  require(out.good(), "short write to epoch log: ", path);
}

double mos_loss(const std::vector<MosBatchItem>& batch) {
  require(!batch.empty(), "mos_loss: empty batch");
  double sum = 0.0;
  for (const auto& item : batch) {
    require(std::isfinite(item.pred_x) && std::isfinite(item.pred_y) &&
                std::isfinite(item.label_x) && std::isfinite(item.label_y),
            "mos_loss: non-finite input");
    const double ex = item.label_x - item.pred_x;
    const double ey = item.label_y - item.pred_y;
    sum += ex * ex + ey * ey;
  }
  return sum / static_cast<double>(batch.size());
}

double pref_loss(const std::vector<PrefBatchItem>& batch) {
  require(!batch.empty(), "pref_loss: empty batch");
  double sum = 0.0;
  for (const auto& item : batch) {
    require(item.label_p == -1 || item.label_p == 0 || item.label_p == 1,
            "pref_loss: label ", item.label_p, " outside {-1,0,+1}");
    require(std::isfinite(item.pred_p), "pref_loss: non-finite prediction");
    const double e = static_cast<double>(item.label_p) - item.pred_p;
    sum += e * e;
  }
  return sum / static_cast<double>(batch.size());
}

double total_loss(LabelCondition condition, double loss_m, double loss_p) {
  switch (condition) {
    case LabelCondition::kLA: return loss_m + loss_p;
    case LabelCondition::kLM: return loss_p;
    case LabelCondition::kMosOnly: return loss_m;
  }
  fail("total_loss: bad label condition");
}

CheckpointSelector::CheckpointSelector(int patience) : patience_(patience) {
  require(patience >= 1, "CheckpointSelector: patience must be >= 1");
}

bool CheckpointSelector::observe(int epoch, double srcc) {
  require(std::isfinite(srcc), "CheckpointSelector: non-finite SRCC at epoch ",
          epoch);
  if (!has_best_ || srcc > best_srcc_) {  // strict improvement only
    has_best_ = true;
    best_srcc_ = srcc;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

namespace {

struct UttItem {
  std::string utt_id;
  double mos = 0.0;
};

// De-duplicated utterances referenced by a pair list, sorted by id.
std::vector<std::string> distinct_pair_utts(
    const std::vector<SpeechPair>& pairs) {
  std::set<std::string> ids;
  for (const auto& p : pairs) {
    ids.insert(p.x_id);
    ids.insert(p.y_id);
  }
  return {ids.begin(), ids.end()};
}

SpeechPair swapped(const SpeechPair& p) {
  SpeechPair s = p;
  std::swap(s.x_id, s.y_id);
  std::swap(s.s_m_x, s.s_m_y);
  s.s_p = -p.s_p;
  return s;
}

double dev_system_srcc(const ScoringModel& model, const DatasetSplit& dev,
                       const AudioCache& audio) {
  require(!dev.pairs.empty(), "dev split has no pairs");
  const auto index = build_index(dev.utterances);
  const auto ids = distinct_pair_utts(dev.pairs);

  std::map<std::string, double> scores;
  std::vector<Utterance> universe;
  for (const auto& id : ids) {
    const Utterance& u = find_utterance(index, id);
    require(u.mos.has_value(), "dev utterance '", id, "' has no MOS label");
    scores[id] = model.score(audio.get(id));
    universe.push_back(u);
  }
  return system_level_srcc(scores, universe);
}

std::string scenario_of(const ScenarioSplits& splits) {
  if (splits.train.scenario_tag == ScenarioTag::kNone ||
      splits.test.scenario_tag == ScenarioTag::kNone) {
    return "custom";
  }
  const PairMode train_mode = splits.train.scenario_tag == ScenarioTag::kMatched
                                  ? PairMode::kMatched
                                  : PairMode::kUnmatched;
  const PairMode test_mode = splits.test.scenario_tag == ScenarioTag::kMatched
                                 ? PairMode::kMatched
                                 : PairMode::kUnmatched;
  return scenario_string(train_mode, test_mode);
}

}  // namespace

TrainResult train(ScoringModel& model, const ScenarioSplits& splits,
                  const TrainConfig& cfg, std::uint64_t seed,
                  const AudioCache& audio,
                  const std::string& semantic_backbone,
                  const std::string& acoustic_backbone,
                  std::ostream* progress) {
  validate(cfg);
  require(!splits.train.pairs.empty(), "train split has no pairs");
  require(!splits.dev.pairs.empty(), "dev split has no pairs");
  const auto train_index = build_index(splits.train.utterances);

  const bool needs_mos = cfg.label_condition != LabelCondition::kLM;
  if (needs_mos) {
    for (const auto& p : splits.train.pairs) {
      require(p.s_m_x.has_value() && p.s_m_y.has_value(),
              to_string(cfg.label_condition), " training needs MOS labels; pair (",
              p.x_id, ",", p.y_id, ") lacks them");
    }
  }

  // Training items. Pair conditions iterate speech pairs; the MOS-only
  // ablation iterates the de-paired unique utterance set.
  std::vector<SpeechPair> pair_items;
  std::vector<UttItem> utt_items;
  if (cfg.label_condition == LabelCondition::kMosOnly) {
    for (const auto& id : distinct_pair_utts(splits.train.pairs)) {
      const Utterance& u = find_utterance(train_index, id);
      require(u.mos.has_value(), "utterance '", id, "' has no MOS label");
      utt_items.push_back({id, *u.mos});
    }
  } else {
    pair_items = splits.train.pairs;
    if (cfg.swap_augment) {
      const std::size_t n = pair_items.size();
      pair_items.reserve(2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        pair_items.push_back(swapped(pair_items[i]));
      }
    }
  }

  model.init_params(seed);
  Rng shuffle_rng(mix64(seed, 0x736875666c65ULL));
  CheckpointSelector selector(cfg.patience);

  TrainResult result;
  std::unique_ptr<ScoringModel> best_model;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    double epoch_loss_m = 0.0;
    double epoch_loss_p = 0.0;
    std::size_t epoch_items = 0;

    auto check_finite = [&](double loss, std::size_t step) {
      require(std::isfinite(loss), "non-finite loss at epoch ", epoch,
              ", step ", step, " (seed ", seed, ")");
    };

    if (cfg.label_condition == LabelCondition::kMosOnly) {
      shuffle_rng.shuffle(utt_items);
      std::size_t step = 0;
      for (std::size_t begin = 0; begin < utt_items.size();
           begin += static_cast<std::size_t>(cfg.batch_size), ++step) {
        const std::size_t end = std::min(
            utt_items.size(), begin + static_cast<std::size_t>(cfg.batch_size));
        const double inv_b = 1.0 / static_cast<double>(end - begin);
        model.zero_grad();
        double batch_loss = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
          std::unique_ptr<ScoreCache> cache;
          const double pred =
              model.forward_mos(audio.get(utt_items[i].utt_id), &cache);
          const double err = utt_items[i].mos - pred;
          batch_loss += err * err * inv_b;
          model.backward(*cache, -2.0 * err * inv_b);
          epoch_loss_m += err * err;
        }
        check_finite(batch_loss, step);
        model.sgd_step(cfg.lr);
        epoch_items += end - begin;
      }
    } else {
      shuffle_rng.shuffle(pair_items);
      std::size_t step = 0;
      for (std::size_t begin = 0; begin < pair_items.size();
           begin += static_cast<std::size_t>(cfg.batch_size), ++step) {
        const std::size_t end = std::min(
            pair_items.size(), begin + static_cast<std::size_t>(cfg.batch_size));
        const double inv_b = 1.0 / static_cast<double>(end - begin);
        model.zero_grad();
        double batch_loss = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
          const SpeechPair& p = pair_items[i];
          std::unique_ptr<ScoreCache> cache_x, cache_y;
          const double pred_x = model.forward_mos(audio.get(p.x_id), &cache_x);
          const double pred_y = model.forward_mos(audio.get(p.y_id), &cache_y);
          const double pred_p = preference_score(pred_x, pred_y);

          double d_x = 0.0, d_y = 0.0;
          // Preference term: d pref / d (x - y) = (1 - pref^2) / 2.
          const double pref_err = static_cast<double>(p.s_p) - pred_p;
          const double d_pref = -2.0 * pref_err * inv_b;
          const double d_diff = d_pref * 0.5 * (1.0 - pred_p * pred_p);
          d_x += d_diff;
          d_y -= d_diff;
          epoch_loss_p += pref_err * pref_err;
          batch_loss += pref_err * pref_err * inv_b;

          if (cfg.label_condition == LabelCondition::kLA) {
            const double ex = *p.s_m_x - pred_x;
            const double ey = *p.s_m_y - pred_y;
            d_x += -2.0 * ex * inv_b;
            d_y += -2.0 * ey * inv_b;
            epoch_loss_m += ex * ex + ey * ey;
            batch_loss += (ex * ex + ey * ey) * inv_b;
          }

          model.backward(*cache_x, d_x);
          model.backward(*cache_y, d_y);
        }
        check_finite(batch_loss, step);
        model.sgd_step(cfg.lr);
        epoch_items += end - begin;
      }
    }

    EpochReport report;
    report.epoch = epoch;
    const double inv_items = 1.0 / static_cast<double>(epoch_items);
    report.loss_m = epoch_loss_m * inv_items;
    report.loss_p = epoch_loss_p * inv_items;
    report.loss = total_loss(cfg.label_condition, report.loss_m, report.loss_p);
    report.dev_srcc = dev_system_srcc(model, splits.dev, audio);

    const bool improved = selector.observe(epoch, report.dev_srcc);
    if (improved) {
      best_model = model.clone();
    }

    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      epoch_start)
            .count();
    result.reports.push_back(report);
    result.stopped_epoch = epoch;

    if (progress != nullptr) {
      char line[256];
      std::snprintf(line, sizeof(line),
                    "epoch %4d  loss %.6f  (mos %.6f, pref %.6f)  dev_srcc "
                    "%.4f%s\n",
                    epoch, report.loss, report.loss_m, report.loss_p,
                    report.dev_srcc, improved ? "  *" : "");
      (*progress) << line << std::flush;
    }

    if (selector.should_stop()) break;
  }

  require(best_model != nullptr, "training selected no checkpoint");
  result.best =
      Checkpoint::from_model(*best_model, semantic_backbone, acoustic_backbone);
  result.best.seed = seed;
  result.best.dev_srcc = selector.best_srcc();
  result.best.best_epoch = selector.best_epoch();
  result.best.label_condition = to_string(cfg.label_condition);
  result.best.scenario = scenario_of(splits);
  return result;
}

MultiSeedResult multi_seed_run(
    const std::function<std::unique_ptr<ScoringModel>()>& factory,
    const ScenarioSplits& splits, const TrainConfig& cfg,
    const AudioCache& audio, const std::string& semantic_backbone,
    const std::string& acoustic_backbone, std::ostream* progress) {
  validate(cfg);
  MultiSeedResult result;
  double acc_sum = 0.0;
  std::size_t successes = 0;

  for (std::uint64_t seed : cfg.seeds) {
    SeedOutcome outcome;
    outcome.seed = seed;
    try {
      auto model = factory();
      TrainResult trained = train(*model, splits, cfg, seed, audio,
                                  semantic_backbone, acoustic_backbone,
                                  progress);
      const PairEvalResult eval = evaluate(trained.best, splits.test, audio);
      outcome.test_acc = eval.acc;
      outcome.dev_srcc = trained.best.dev_srcc;
      outcome.best_epoch = trained.best.best_epoch;
      outcome.checkpoint = std::move(trained.best);
      acc_sum += outcome.test_acc;
      ++successes;
    } catch (const std::exception& e) {
      outcome.error = e.what();
    }
    result.per_seed.push_back(std::move(outcome));
  }

  if (successes == 0) {
    fail("every seed failed; first error: ",
         result.per_seed.front().error.value_or("(none)"));
  }
  result.mean_acc = acc_sum / static_cast<double>(successes);
  return result;
}

AudioCache load_audio(const std::vector<const DatasetSplit*>& splits) {
  AudioCache cache;
  for (const DatasetSplit* split : splits) {
    for (const auto& u : split->utterances) {
      if (cache.contains(u.utt_id)) continue;
      cache.put(u.utt_id, read_wav_mono16(u.wav_path));
    }
  }
  return cache;
}

}  // namespace pairsqa
