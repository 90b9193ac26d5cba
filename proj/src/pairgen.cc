// src/pairgen.cc
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

#include "pairsqa/pairgen.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_set>

#include "pairsqa/common.h"
#include "pairsqa/rng.h"

namespace pairsqa {

void validate(const PairGenConfig& cfg) {
  require(cfg.eps > 0.0 && cfg.eps <= 1.0, "pairgen eps must be in (0,1], got ",
          cfg.eps);
  require(cfg.min_samples >= 1, "pairgen min_samples must be >= 1, got ",
          cfg.min_samples);
}

std::string normalize_transcript(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c)) {
      pending_space = true;
    }
    // punctuation and other symbols are dropped
  }
  return out;
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0 && m == 0) return 0.0;
  if (n == 0 || m == 0) return 1.0;

  // Two-row dynamic program.
  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> curr(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 0; i < n; ++i) {
    curr[0] = i + 1;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t cost = a[i] == b[j] ? 0 : 1;
      curr[j + 1] =
          std::min({curr[j] + 1, prev[j + 1] + 1, prev[j] + cost});
    }
    prev.swap(curr);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(std::max(n, m));
}

namespace {

std::vector<const Utterance*> sorted_by_id(const std::vector<Utterance>& utts) {
  std::vector<const Utterance*> order;
  order.reserve(utts.size());
  for (const auto& u : utts) order.push_back(&u);
  std::sort(order.begin(), order.end(),
            [](const Utterance* a, const Utterance* b) {
              return a->utt_id < b->utt_id;
            });
  return order;
}

SpeechPair make_pair(const Utterance& a, const Utterance& b,
                     std::int64_t cluster_id) {
  // Canonical unordered-pair representation: x_id < y_id.
  const Utterance& x = a.utt_id < b.utt_id ? a : b;
  const Utterance& y = a.utt_id < b.utt_id ? b : a;
  require(x.mos.has_value(), "utterance '", x.utt_id,
          "' has no MOS label; pair construction needs labeled data");
  require(y.mos.has_value(), "utterance '", y.utt_id,
          "' has no MOS label; pair construction needs labeled data");
  SpeechPair p;
  p.x_id = x.utt_id;
  p.y_id = y.utt_id;
  p.s_m_x = *x.mos;
  p.s_m_y = *y.mos;
  p.s_p = derive_preference_label(*x.mos, *y.mos);
  p.cluster_id = cluster_id;
  return p;
}

}  // namespace

std::vector<ContentCluster> cluster_transcripts(
    const std::vector<Utterance>& utts, const PairGenConfig& cfg) {
  validate(cfg);
  const auto order = sorted_by_id(utts);
  const std::size_t n = order.size();

  std::vector<std::string> norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(order[i]->transcript.has_value(), "utterance '", order[i]->utt_id,
            "' has no transcript; content-matched pairing needs transcripts");
    norm[i] = normalize_transcript(*order[i]->transcript);
  }

  auto neighbors_of = [&](std::size_t i) {
    std::vector<std::size_t> neigh;
    for (std::size_t j = 0; j < n; ++j) {
      if (normalized_levenshtein(norm[i], norm[j]) <= cfg.eps) {
        neigh.push_back(j);  // includes i itself
      }
    }
    return neigh;
  };

  // DBSCAN over the precomputable distance graph, expansion in sorted order.
  constexpr std::int64_t kUnvisited = -2;
  constexpr std::int64_t kNoise = -1;
  std::vector<std::int64_t> assignment(n, kUnvisited);
  std::int64_t next_id = 0;

  for (std::size_t i = 0; i < n; ++i) {
    if (assignment[i] != kUnvisited) continue;
    auto neigh = neighbors_of(i);
    if (neigh.size() < static_cast<std::size_t>(cfg.min_samples)) {
      assignment[i] = kNoise;
      continue;
    }
    const std::int64_t cid = next_id++;
    assignment[i] = cid;
    std::vector<std::size_t> frontier = neigh;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      const std::size_t j = frontier[k];
      if (assignment[j] == kNoise) assignment[j] = cid;  // border point
      if (assignment[j] != kUnvisited) continue;
      assignment[j] = cid;
      auto more = neighbors_of(j);
      if (more.size() >= static_cast<std::size_t>(cfg.min_samples)) {
        frontier.insert(frontier.end(), more.begin(), more.end());
      }
    }
  }

  // Noise points become singleton clusters so the result is a partition.
  for (std::size_t i = 0; i < n; ++i) {
    if (assignment[i] == kNoise) assignment[i] = next_id++;
  }

  std::map<std::int64_t, ContentCluster> by_id;
  for (std::size_t i = 0; i < n; ++i) {
    auto& cluster = by_id[assignment[i]];
    if (cluster.member_ids.empty()) {
      cluster.cluster_id = assignment[i];
      cluster.representative_transcript = norm[i];
    }
    cluster.member_ids.push_back(order[i]->utt_id);
  }

  std::vector<ContentCluster> clusters;
  clusters.reserve(by_id.size());
  for (auto& [id, cluster] : by_id) {
    std::sort(cluster.member_ids.begin(), cluster.member_ids.end());
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::vector<SpeechPair> build_matched_pairs(
    const std::vector<ContentCluster>& clusters,
    const std::vector<Utterance>& manifest, const PairGenConfig& cfg) {
  validate(cfg);
  const auto index = build_index(manifest);

  std::vector<SpeechPair> pairs;
  for (const auto& cluster : clusters) {
    for (std::size_t i = 0; i < cluster.member_ids.size(); ++i) {
      for (std::size_t j = i + 1; j < cluster.member_ids.size(); ++j) {
        const Utterance& a = find_utterance(index, cluster.member_ids[i]);
        const Utterance& b = find_utterance(index, cluster.member_ids[j]);
        SpeechPair p = make_pair(a, b, cluster.cluster_id);
        if (!cfg.keep_tied_pairs && p.s_p == 0) continue;
        pairs.push_back(std::move(p));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const SpeechPair& a, const SpeechPair& b) {
              return std::tie(a.cluster_id, a.x_id, a.y_id) <
                     std::tie(b.cluster_id, b.x_id, b.y_id);
            });
  return pairs;
}

std::vector<SpeechPair> build_unmatched_pairs(
    const std::vector<Utterance>& utts, const PairGenConfig& cfg) {
  validate(cfg);

  // Sorted system -> sorted member list; sampling below is keyed per system
  // pair so results do not depend on manifest ordering.
  std::map<std::string, std::vector<const Utterance*>> systems;
  for (const auto& u : utts) {
    require(!u.system_id.empty(), "utterance '", u.utt_id,
            "' has no system_id");
    systems[u.system_id].push_back(&u);
  }
  require(systems.size() >= 2,
          "content-unmatched pairing needs at least 2 systems, got ",
          systems.size());
  for (auto& [sys, members] : systems) {
    require(!members.empty(), "system '", sys, "' has no utterances");
    std::sort(members.begin(), members.end(),
              [](const Utterance* a, const Utterance* b) {
                return a->utt_id < b->utt_id;
              });
  }

  std::vector<SpeechPair> pairs;
  for (auto it_a = systems.begin(); it_a != systems.end(); ++it_a) {
    for (auto it_b = std::next(it_a); it_b != systems.end(); ++it_b) {
      Rng rng = Rng::keyed(cfg.rng_seed, it_a->first, it_b->first);
      const auto& members_a = it_a->second;
      const auto& members_b = it_b->second;
      const Utterance& a = *members_a[rng.uniform_below(members_a.size())];
      const Utterance& b = *members_b[rng.uniform_below(members_b.size())];
      SpeechPair p = make_pair(a, b, /*cluster_id=*/-1);
      if (!cfg.keep_tied_pairs && p.s_p == 0) continue;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

std::string to_string(PairMode mode) {
  return mode == PairMode::kMatched ? "matched" : "unmatched";
}

PairMode parse_pair_mode(const std::string& text) {
  if (text == "matched" || text == "m") return PairMode::kMatched;
  if (text == "unmatched" || text == "nm") return PairMode::kUnmatched;
  fail("unknown pair mode '", text, "' (expected matched or unmatched)");
}

std::string scenario_string(PairMode train_mode, PairMode test_mode) {
  auto short_tag = [](PairMode m) {
    return m == PairMode::kMatched ? "m" : "nm";
  };
  return str_cat(short_tag(train_mode), "-", short_tag(test_mode));
}

std::pair<PairMode, PairMode> parse_scenario(const std::string& text) {
  const std::size_t dash = text.find('-');
  require(dash != std::string::npos, "bad scenario '", text,
          "' (expected one of m-m, nm-m, m-nm, nm-nm)");
  return {parse_pair_mode(text.substr(0, dash)),
          parse_pair_mode(text.substr(dash + 1))};
}

namespace {

DatasetSplit build_split(SplitName name, PairMode mode,
                         const std::vector<Utterance>& manifest,
                         const PairGenConfig& cfg) {
  DatasetSplit split;
  split.name = name;
  split.utterances = manifest;
  if (mode == PairMode::kMatched) {
    const auto clusters = cluster_transcripts(manifest, cfg);
    split.pairs = build_matched_pairs(clusters, manifest, cfg);
    split.scenario_tag = ScenarioTag::kMatched;
  } else {
    split.pairs = build_unmatched_pairs(manifest, cfg);
    split.scenario_tag = ScenarioTag::kUnmatched;
  }
  validate_split(split);
  return split;
}

}  // namespace

ScenarioSplits build_scenario(PairMode train_mode, PairMode test_mode,
                              const std::vector<Utterance>& train_manifest,
                              const std::vector<Utterance>& dev_manifest,
                              const std::vector<Utterance>& test_manifest,
                              const PairGenConfig& cfg) {
  std::unordered_set<std::string> seen;
  auto check_disjoint = [&seen](const std::vector<Utterance>& utts,
                                const char* which) {
    for (const auto& u : utts) {
      require(seen.insert(u.utt_id).second, "utterance '", u.utt_id,
              "' in the ", which, " manifest also appears in another split");
    }
  };
  check_disjoint(train_manifest, "train");
  check_disjoint(dev_manifest, "dev");
  check_disjoint(test_manifest, "test");

  ScenarioSplits splits;
  splits.train = build_split(SplitName::kTrain, train_mode, train_manifest, cfg);
  splits.dev = build_split(SplitName::kDev, train_mode, dev_manifest, cfg);
  splits.test = build_split(SplitName::kTest, test_mode, test_manifest, cfg);
  return splits;
}

}  // namespace pairsqa
