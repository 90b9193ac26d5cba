// include/pairsqa/pairgen.h
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
// Speech-pair construction from a MOS-labeled manifest.
//
// Content-matched: utterances are clustered by transcript similarity
// (density clustering over normalized Levenshtein distance) and all pairs
// within each cluster are emitted.
//
// Content-unmatched: utterances are grouped by generating system and one
// random pair is drawn for every unordered pair of systems, giving exactly
// K*(K-1)/2 pairs for K systems.

#ifndef PAIRSQA_PAIRGEN_H_
#define PAIRSQA_PAIRGEN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pairsqa/datamodel.h"

namespace pairsqa {

// One same-content class. Clusters partition the utterance set; density
// noise points are emitted as singleton clusters.
struct ContentCluster {
  std::int64_t cluster_id = -1;
  std::vector<std::string> member_ids;  // sorted utt_ids, size >= 1
  std::string representative_transcript;
};

struct PairGenConfig {
  double eps = 0.2;        // density radius on normalized distance, in (0,1]
  int min_samples = 1;     // with 1 every point is core: radius components
  std::uint64_t rng_seed = 0;
  bool keep_tied_pairs = true;
};

void validate(const PairGenConfig& cfg);

// Lowercases, strips punctuation, collapses whitespace. Applied before any
// transcript distance so ASR formatting variance cannot split clusters.
std::string normalize_transcript(std::string_view text);

// edit_distance(a, b) / max(|a|, |b|); 0 when both strings are empty.
double normalized_levenshtein(std::string_view a, std::string_view b);

// Deterministic DBSCAN partition of the utterances by transcript distance;
// iteration order is fixed by sorted utt_id. Every utterance lands in
// exactly one cluster (noise points become singletons).
std::vector<ContentCluster> cluster_transcripts(
    const std::vector<Utterance>& utts, const PairGenConfig& cfg);

// All C(n,2) within-cluster pairs in canonical order (x_id < y_id), with MOS
// fields filled from the manifest and s_p derived from them. Tied pairs are
// dropped iff keep_tied_pairs is false.
std::vector<SpeechPair> build_matched_pairs(
    const std::vector<ContentCluster>& clusters,
    const std::vector<Utterance>& manifest, const PairGenConfig& cfg);

// One pair per unordered system pair, members drawn uniformly from each
// system by an rng_seed-keyed stream per system pair, so output is
// independent of manifest ordering.
std::vector<SpeechPair> build_unmatched_pairs(
    const std::vector<Utterance>& utts, const PairGenConfig& cfg);

enum class PairMode { kMatched, kUnmatched };

std::string to_string(PairMode mode);
PairMode parse_pair_mode(const std::string& text);  // "matched"/"unmatched"

// "m-m", "nm-m", "m-nm", "nm-nm"
std::string scenario_string(PairMode train_mode, PairMode test_mode);
std::pair<PairMode, PairMode> parse_scenario(const std::string& text);

struct ScenarioSplits {
  DatasetSplit train;
  DatasetSplit dev;
  DatasetSplit test;
};

// Applies the selected builder per split; the dev split mirrors the
// train-side mode. Manifests must be disjoint by utt_id.
ScenarioSplits build_scenario(PairMode train_mode, PairMode test_mode,
                              const std::vector<Utterance>& train_manifest,
                              const std::vector<Utterance>& dev_manifest,
                              const std::vector<Utterance>& test_manifest,
                              const PairGenConfig& cfg);

}  // namespace pairsqa

#endif  // PAIRSQA_PAIRGEN_H_
