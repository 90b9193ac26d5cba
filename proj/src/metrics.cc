// src/metrics.cc
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

#include "pairsqa/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pairsqa/common.h"

namespace pairsqa {

double preference_accuracy(const std::vector<PredictionRecord>& preds,
                           const std::vector<SpeechPair>& labels) {
  require(!labels.empty(), "preference_accuracy: no pairs (N = 0)");
  require(preds.size() == labels.size(),
          "preference_accuracy: ", preds.size(), " predictions for ",
          labels.size(), " labeled pairs");

  std::map<std::pair<std::string, std::string>, int> label_by_key;
  for (const auto& p : labels) {
    const bool inserted =
        label_by_key.emplace(std::make_pair(p.x_id, p.y_id), p.s_p).second;
    require(inserted, "preference_accuracy: duplicate labeled pair (", p.x_id,
            ",", p.y_id, ")");
  }

  std::size_t errors = 0;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& rec : preds) {
    const auto key = std::make_pair(rec.x_id, rec.y_id);
    auto it = label_by_key.find(key);
    require(it != label_by_key.end(),
            "preference_accuracy: prediction for unlabeled pair (", rec.x_id,
            ",", rec.y_id, ")");
    require(seen.insert(key).second,
            "preference_accuracy: duplicate prediction for pair (", rec.x_id,
            ",", rec.y_id, ")");
    if (sgn(sgn(rec.pref_hat) - it->second) != 0) ++errors;
  }
  return 1.0 - static_cast<double>(errors) / static_cast<double>(labels.size());
}

namespace {

// Average ranks, 1-based; ties share the mean of their rank range.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&values](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a *= inv_n;
  mean_b *= inv_n;

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  require(var_a > 0.0 && var_b > 0.0,
          "correlation undefined for a constant score vector");
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace

double spearman_srcc(const std::vector<double>& pred_scores,
                     const std::vector<double>& true_scores) {
  require(pred_scores.size() == true_scores.size(),
          "spearman_srcc: length mismatch (", pred_scores.size(), " vs ",
          true_scores.size(), ")");
  require(pred_scores.size() >= 2, "spearman_srcc: need at least 2 points");
  for (double v : pred_scores) {
    require(std::isfinite(v), "spearman_srcc: non-finite prediction");
  }
  for (double v : true_scores) {
    require(std::isfinite(v), "spearman_srcc: non-finite reference score");
  }
  return pearson(average_ranks(pred_scores), average_ranks(true_scores));
}

double system_level_srcc(const std::map<std::string, double>& utt_scores,
                         const std::vector<Utterance>& utterances) {
  struct Group {
    double pred_sum = 0.0;
    double mos_sum = 0.0;
    int count = 0;
  };
  std::map<std::string, Group> groups;
  std::set<std::string> known_ids;
  for (const auto& u : utterances) {
    known_ids.insert(u.utt_id);
    auto& group = groups[u.system_id];  // every listed system participates
    auto it = utt_scores.find(u.utt_id);
    if (it == utt_scores.end()) continue;
    require(u.mos.has_value(), "system_level_srcc: utterance '", u.utt_id,
            "' has no true MOS");
    group.pred_sum += it->second;
    group.mos_sum += *u.mos;
    group.count += 1;
  }
  for (const auto& [utt_id, score] : utt_scores) {
    require(known_ids.count(utt_id) != 0,
            "system_level_srcc: score for unknown utterance '", utt_id, "'");
  }
  require(groups.size() >= 2, "system_level_srcc: need at least 2 systems, got ",
          groups.size());

  std::vector<double> pred_means, mos_means;
  for (const auto& [system, group] : groups) {
    require(group.count > 0, "system_level_srcc: system '", system,
            "' has no scored utterances");
    pred_means.push_back(group.pred_sum / group.count);
    mos_means.push_back(group.mos_sum / group.count);
  }
  return spearman_srcc(pred_means, mos_means);
}

PairEvalResult evaluate_pairs(const ScoringModel& model,
                              const DatasetSplit& test,
                              const AudioCache& audio) {
  require(!test.pairs.empty(), "evaluate_pairs: test split has no pairs");
  validate_split(test);
  const auto index = build_index(test.utterances);

  // Score each distinct utterance once; pairs reuse the cached scores.
  std::set<std::string> distinct;
  for (const auto& p : test.pairs) {
    distinct.insert(p.x_id);
    distinct.insert(p.y_id);
  }
  std::map<std::string, double> scores;
  for (const auto& utt_id : distinct) {
    scores[utt_id] = model.score(audio.get(utt_id));
  }

  PairEvalResult result;
  result.n_pairs = static_cast<int>(test.pairs.size());
  int errors = 0, errors_excl = 0, n_decided = 0;
  for (const auto& p : test.pairs) {
    PredictionRecord rec;
    rec.x_id = p.x_id;
    rec.y_id = p.y_id;
    rec.mos_hat_x = scores.at(p.x_id);
    rec.mos_hat_y = scores.at(p.y_id);
    rec.pref_hat = preference_score(rec.mos_hat_x, rec.mos_hat_y);
    const bool wrong = sgn(sgn(rec.pref_hat) - p.s_p) != 0;
    if (wrong) ++errors;
    if (p.s_p == 0) {
      ++result.n_ties;
    } else {
      ++n_decided;
      if (wrong) ++errors_excl;
    }
    result.records.push_back(std::move(rec));
  }
  result.acc =
      1.0 - static_cast<double>(errors) / static_cast<double>(result.n_pairs);
  if (n_decided > 0) {
    result.acc_excluding_ties =
        1.0 - static_cast<double>(errors_excl) / static_cast<double>(n_decided);
  }

  // SRCC over the de-duplicated utterance set, when true MOS is available.
  bool have_mos = true;
  for (const auto& utt_id : distinct) {
    if (!find_utterance(index, utt_id).mos.has_value()) {
      have_mos = false;
      break;
    }
  }
  if (have_mos && distinct.size() >= 2) {
    std::vector<double> preds, trues;
    std::vector<Utterance> universe;
    std::set<std::string> systems;
    for (const auto& utt_id : distinct) {
      const Utterance& u = find_utterance(index, utt_id);
      preds.push_back(scores.at(utt_id));
      trues.push_back(*u.mos);
      universe.push_back(u);
      systems.insert(u.system_id);
    }
    result.utt_srcc = spearman_srcc(preds, trues);
    if (systems.size() >= 2) {
      result.sys_srcc = system_level_srcc(scores, universe);
    }
  }
  return result;
}

PairEvalResult evaluate(const Checkpoint& checkpoint, const DatasetSplit& test,
                        const AudioCache& audio) {
  const auto model = checkpoint.instantiate();
  return evaluate_pairs(*model, test, audio);
}

}  // namespace pairsqa
