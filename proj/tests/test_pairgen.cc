// tests/test_pairgen.cc
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

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pairsqa/common.h"
#include "pairsqa/rng.h"
#include "test_util.h"

using namespace pairsqa;
using testutil::TempDir;
using testutil::read_text;

namespace {

// Independent oracle: full-matrix edit-distance dynamic program.
std::size_t levenshtein_oracle(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1,
                                          std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + cost});
    }
  }
  return d[n][m];
}

Utterance make_utt(const std::string& id, const std::string& system,
                   double mos, const std::string& transcript) {
  Utterance u;
  u.utt_id = id;
  u.wav_path = id + ".wav";
  u.system_id = system;
  u.mos = mos;
  u.transcript = transcript;
  return u;
}

// Independent oracle for the min_samples=1 regime: connected components of
// the radius graph on normalized transcripts, via union-find.
std::set<std::set<std::string>> component_oracle(
    const std::vector<Utterance>& utts, double eps) {
  const std::size_t n = utts.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::vector<std::string> norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    norm[i] = normalize_transcript(*utts[i].transcript);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (normalized_levenshtein(norm[i], norm[j]) <= eps) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::map<std::size_t, std::set<std::string>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].insert(utts[i].utt_id);
  std::set<std::set<std::string>> result;
  for (auto& [root, members] : groups) result.insert(members);
  return result;
}

std::set<std::set<std::string>> as_partition(
    const std::vector<ContentCluster>& clusters) {
  std::set<std::set<std::string>> result;
  for (const auto& c : clusters) {
    result.insert({c.member_ids.begin(), c.member_ids.end()});
  }
  return result;
}

std::string random_string(Rng* rng, std::size_t max_len) {
  const std::size_t len = rng->uniform_below(max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    s.push_back(static_cast<char>('a' + rng->uniform_below(3)));
  }
  return s;
}

}  // namespace

TEST_CASE("normalized_levenshtein frozen examples") {
  CHECK(normalized_levenshtein("abc", "abc") == 0.0);
  CHECK(normalized_levenshtein("", "abc") == 1.0);
  CHECK(normalized_levenshtein("", "") == 0.0);
  CHECK(normalized_levenshtein("kitten", "sitting") ==
        doctest::Approx(3.0 / 7.0).epsilon(1e-12));
  CHECK(levenshtein_oracle("kitten", "sitting") == 3);
}

TEST_CASE("normalized_levenshtein properties against the oracle") {
  Rng rng(99);
  for (int iter = 0; iter < 300; ++iter) {
    const std::string a = random_string(&rng, 12);
    const std::string b = random_string(&rng, 12);
    const double d = normalized_levenshtein(a, b);
    CHECK(d == normalized_levenshtein(b, a));  // symmetric
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(normalized_levenshtein(a, a) == 0.0);
    const std::size_t max_len = std::max(a.size(), b.size());
    if (max_len > 0) {
      CHECK(d == doctest::Approx(static_cast<double>(levenshtein_oracle(a, b)) /
                                 static_cast<double>(max_len))
                     .epsilon(1e-12));
    } else {
      CHECK(d == 0.0);
    }
  }
}

TEST_CASE("normalize_transcript folds case, punctuation and whitespace") {
  CHECK(normalize_transcript("Hello,  World!") == "hello world");
  CHECK(normalize_transcript("  A  b\tC ") == "a b c");
  CHECK(normalize_transcript("...") == "");
  CHECK(normalize_transcript("don't stop") == "dont stop");
}

TEST_CASE("cluster_transcripts") {
  PairGenConfig cfg;

  SUBCASE("single utterance becomes a singleton cluster") {
    const auto clusters =
        cluster_transcripts({make_utt("u1", "s", 3.0, "hello world")}, cfg);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].member_ids == std::vector<std::string>{"u1"});
    CHECK(clusters[0].representative_transcript == "hello world");
  }

  SUBCASE("two duplicate-transcript groups split into two clusters") {
    std::vector<Utterance> utts = {
        make_utt("a1", "s1", 3.0, "the quick brown fox"),
        make_utt("b1", "s1", 2.0, "completely different words entirely"),
        make_utt("a2", "s2", 4.0, "The quick brown fox!"),
        make_utt("b2", "s2", 1.5, "Completely different words entirely"),
    };
    const auto clusters = cluster_transcripts(utts, cfg);
    REQUIRE(clusters.size() == 2);
    CHECK(as_partition(clusters) == component_oracle(utts, cfg.eps));
    for (const auto& c : clusters) CHECK(c.member_ids.size() == 2);
  }

  SUBCASE("mutually distant transcripts stay singletons") {
    std::vector<Utterance> utts = {
        make_utt("u1", "s", 3.0, "alpha bravo charlie"),
        make_utt("u2", "s", 3.1, "delta echo foxtrot golf"),
        make_utt("u3", "s", 3.2, "hotel india juliet kilo lima"),
    };
    const auto clusters = cluster_transcripts(utts, cfg);
    CHECK(clusters.size() == 3);
    CHECK(as_partition(clusters) == component_oracle(utts, cfg.eps));
  }

  SUBCASE("partition matches the radius-graph oracle on random corpora") {
    Rng rng(512);
    const char* stems[] = {"pack my box with five dozen jugs",
                           "sphinx of black quartz judge my vow",
                           "how vexingly quick daft zebras jump"};
    for (int iter = 0; iter < 20; ++iter) {
      std::vector<Utterance> utts;
      const int n = 3 + static_cast<int>(rng.uniform_below(10));
      for (int i = 0; i < n; ++i) {
        std::string text = stems[rng.uniform_below(3)];
        // Small random perturbations keep some pairs inside the radius.
        const int edits = static_cast<int>(rng.uniform_below(4));
        for (int e = 0; e < edits && !text.empty(); ++e) {
          text[rng.uniform_below(text.size())] =
              static_cast<char>('a' + rng.uniform_below(26));
        }
        utts.push_back(make_utt(str_cat("u", i), "s", 3.0, text));
      }
      const auto clusters = cluster_transcripts(utts, cfg);
      CHECK(as_partition(clusters) == component_oracle(utts, cfg.eps));
      std::size_t total = 0;
      for (const auto& c : clusters) total += c.member_ids.size();
      CHECK(total == utts.size());  // partition covers everything once
    }
  }

  SUBCASE("iteration order does not matter") {
    std::vector<Utterance> utts = {
        make_utt("z", "s", 3.0, "one two three"),
        make_utt("a", "s", 3.0, "one two three"),
        make_utt("m", "s", 3.0, "four five six"),
    };
    const auto forward = cluster_transcripts(utts, cfg);
    std::reverse(utts.begin(), utts.end());
    const auto reversed = cluster_transcripts(utts, cfg);
    CHECK(as_partition(forward) == as_partition(reversed));
  }

  SUBCASE("missing transcript is an error") {
    Utterance u = make_utt("u1", "s", 3.0, "x");
    u.transcript.reset();
    CHECK_THROWS_AS(cluster_transcripts({u}, cfg), Error);
  }

  SUBCASE("min_samples above 1 still yields a partition") {
    PairGenConfig dense = cfg;
    dense.min_samples = 3;
    std::vector<Utterance> utts = {
        make_utt("u1", "s", 3.0, "same text here"),
        make_utt("u2", "s", 3.0, "same text here"),
        make_utt("u3", "s", 3.0, "unrelated other words"),
    };
    const auto clusters = cluster_transcripts(utts, dense);
    std::size_t total = 0;
    for (const auto& c : clusters) total += c.member_ids.size();
    CHECK(total == 3);  // u1,u2 lack density, fall out as singletons
    CHECK(clusters.size() == 3);
  }

  SUBCASE("bad config is rejected") {
    PairGenConfig bad = cfg;
    bad.eps = 0.0;
    CHECK_THROWS_AS(cluster_transcripts({}, bad), Error);
    bad = cfg;
    bad.min_samples = 0;
    CHECK_THROWS_AS(cluster_transcripts({}, bad), Error);
  }
}

namespace {

// Enumeration oracle for matched pairs: every unordered within-cluster
// combination, counted independently.
std::set<std::pair<std::string, std::string>> matched_oracle(
    const std::vector<ContentCluster>& clusters) {
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& c : clusters) {
    for (std::size_t i = 0; i < c.member_ids.size(); ++i) {
      for (std::size_t j = 0; j < c.member_ids.size(); ++j) {
        if (i == j) continue;
        const std::string& a = c.member_ids[i];
        const std::string& b = c.member_ids[j];
        keys.insert({std::min(a, b), std::max(a, b)});
      }
    }
  }
  return keys;
}

}  // namespace

TEST_CASE("build_matched_pairs") {
  PairGenConfig cfg;

  SUBCASE("cluster sizes [3,2] give 3 + 1 pairs") {
    std::vector<Utterance> manifest;
    std::vector<ContentCluster> clusters(2);
    clusters[0].cluster_id = 0;
    clusters[1].cluster_id = 1;
    const char* ids0[] = {"a", "b", "c"};
    const char* ids1[] = {"d", "e"};
    double mos = 1.0;
    for (const char* id : ids0) {
      clusters[0].member_ids.push_back(id);
      manifest.push_back(make_utt(id, "s", mos += 0.3, "t"));
    }
    for (const char* id : ids1) {
      clusters[1].member_ids.push_back(id);
      manifest.push_back(make_utt(id, "s", mos += 0.3, "t"));
    }
    const auto pairs = build_matched_pairs(clusters, manifest, cfg);
    CHECK(pairs.size() == 4);
    for (const auto& p : pairs) {
      CHECK(p.x_id < p.y_id);  // canonical ordering
      CHECK(p.cluster_id >= 0);
    }
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& p : pairs) got.insert({p.x_id, p.y_id});
    CHECK(got == matched_oracle(clusters));
  }

  SUBCASE("all singleton clusters give no pairs") {
    std::vector<Utterance> manifest;
    std::vector<ContentCluster> clusters;
    for (int i = 0; i < 5; ++i) {
      ContentCluster c;
      c.cluster_id = i;
      c.member_ids = {str_cat("u", i)};
      clusters.push_back(c);
      manifest.push_back(make_utt(str_cat("u", i), "s", 2.0 + i * 0.1, "t"));
    }
    CHECK(build_matched_pairs(clusters, manifest, cfg).empty());
  }

  SUBCASE("one cluster of 250 members gives C(250,2) = 31125 pairs") {
    std::vector<Utterance> manifest;
    ContentCluster cluster;
    cluster.cluster_id = 0;
    Rng rng(7);
    for (int i = 0; i < 250; ++i) {
      const std::string id = str_cat("utt", 1000 + i);
      cluster.member_ids.push_back(id);
      manifest.push_back(make_utt(id, "s", rng.uniform(1.0, 5.0), "t"));
    }
    const auto pairs = build_matched_pairs({cluster}, manifest, cfg);
    CHECK(pairs.size() == 31125);
  }

  SUBCASE("drop-ties removes exactly the tied pairs") {
    std::vector<Utterance> manifest = {
        make_utt("a", "s", 3.0, "t"),
        make_utt("b", "s", 3.0, "t"),
        make_utt("c", "s", 4.0, "t"),
    };
    ContentCluster cluster;
    cluster.cluster_id = 0;
    cluster.member_ids = {"a", "b", "c"};

    const auto kept = build_matched_pairs({cluster}, manifest, cfg);
    CHECK(kept.size() == 3);

    PairGenConfig drop = cfg;
    drop.keep_tied_pairs = false;
    const auto dropped = build_matched_pairs({cluster}, manifest, drop);
    CHECK(dropped.size() == 2);
    for (const auto& p : dropped) CHECK(p.s_p != 0);
  }

  SUBCASE("cluster member missing from the manifest is an error") {
    ContentCluster cluster;
    cluster.cluster_id = 0;
    cluster.member_ids = {"a", "ghost"};
    const std::vector<Utterance> manifest = {make_utt("a", "s", 3.0, "t")};
    CHECK_THROWS_AS(build_matched_pairs({cluster}, manifest, cfg), Error);
  }
}

TEST_CASE("build_unmatched_pairs") {
  PairGenConfig cfg;

  auto make_systems = [](int num_systems, int utts_per_system,
                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Utterance> utts;
    for (int s = 0; s < num_systems; ++s) {
      for (int u = 0; u < utts_per_system; ++u) {
        utts.push_back(make_utt(str_cat("s", s, "_u", u), str_cat("sys", s),
                                rng.uniform(1.0, 5.0), "t"));
      }
    }
    return utts;
  };

  SUBCASE("two systems give exactly one pair") {
    const auto pairs = build_unmatched_pairs(make_systems(2, 3, 1), cfg);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].x_id < pairs[0].y_id);
    CHECK(pairs[0].cluster_id == -1);
  }

  SUBCASE("published system counts reproduce the published pair counts") {
    CHECK(build_unmatched_pairs(make_systems(175, 3, 2), cfg).size() == 15225);
    CHECK(build_unmatched_pairs(make_systems(187, 3, 3), cfg).size() == 17391);
  }

  SUBCASE("output size is K(K-1)/2 and members join distinct systems") {
    Rng rng(5);
    for (int iter = 0; iter < 8; ++iter) {
      const int k = 2 + static_cast<int>(rng.uniform_below(20));
      const auto utts = make_systems(k, 1 + static_cast<int>(rng.uniform_below(4)),
                                     100 + iter);
      const auto pairs = build_unmatched_pairs(utts, cfg);
      CHECK(pairs.size() == static_cast<std::size_t>(k * (k - 1) / 2));
      std::map<std::string, std::string> system_of;
      for (const auto& u : utts) system_of[u.utt_id] = u.system_id;
      for (const auto& p : pairs) {
        CHECK(system_of.at(p.x_id) != system_of.at(p.y_id));
      }
    }
  }

  SUBCASE("byte-identical output regardless of manifest order") {
    TempDir dir;
    auto utts = make_systems(9, 4, 42);
    const auto pairs_sorted = build_unmatched_pairs(utts, cfg);
    std::reverse(utts.begin(), utts.end());
    const auto pairs_reversed = build_unmatched_pairs(utts, cfg);

    const std::string f1 = dir.file("p1.csv");
    const std::string f2 = dir.file("p2.csv");
    save_pairs(f1, pairs_sorted);
    save_pairs(f2, pairs_reversed);
    CHECK(read_text(f1) == read_text(f2));
  }

  SUBCASE("different seeds sample different pairs") {
    const auto utts = make_systems(12, 6, 9);
    PairGenConfig other = cfg;
    other.rng_seed = 1234;
    const auto a = build_unmatched_pairs(utts, cfg);
    const auto b = build_unmatched_pairs(utts, other);
    REQUIRE(a.size() == b.size());
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].x_id != b[i].x_id || a[i].y_id != b[i].y_id) any_diff = true;
    }
    CHECK(any_diff);
  }

  SUBCASE("fewer than two systems is an error") {
    CHECK_THROWS_AS(build_unmatched_pairs(make_systems(1, 5, 0), cfg), Error);
    CHECK_THROWS_AS(build_unmatched_pairs({}, cfg), Error);
  }
}

TEST_CASE("scenario strings") {
  CHECK(scenario_string(PairMode::kMatched, PairMode::kMatched) == "m-m");
  CHECK(scenario_string(PairMode::kUnmatched, PairMode::kMatched) == "nm-m");
  CHECK(scenario_string(PairMode::kMatched, PairMode::kUnmatched) == "m-nm");
  CHECK(scenario_string(PairMode::kUnmatched, PairMode::kUnmatched) == "nm-nm");
  CHECK(parse_scenario("nm-m") ==
        std::make_pair(PairMode::kUnmatched, PairMode::kMatched));
  CHECK_THROWS_AS(parse_scenario("mm"), Error);
  CHECK_THROWS_AS(parse_scenario("m-x"), Error);
}

TEST_CASE("build_scenario") {
  PairGenConfig cfg;
  auto make_split_manifest = [](const std::string& prefix, int systems,
                                int per_system, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Utterance> utts;
    for (int s = 0; s < systems; ++s) {
      for (int u = 0; u < per_system; ++u) {
        utts.push_back(make_utt(str_cat(prefix, "_s", s, "_u", u),
                                str_cat("sys", s), rng.uniform(1.0, 5.0),
                                str_cat("text number ", u)));
      }
    }
    return utts;
  };
  const auto train = make_split_manifest("tr", 6, 2, 1);
  const auto dev = make_split_manifest("de", 6, 2, 2);
  const auto test = make_split_manifest("te", 6, 2, 3);

  SUBCASE("matched-matched tags both splits matched") {
    const auto splits = build_scenario(PairMode::kMatched, PairMode::kMatched,
                                       train, dev, test, cfg);
    CHECK(splits.train.scenario_tag == ScenarioTag::kMatched);
    CHECK(splits.dev.scenario_tag == ScenarioTag::kMatched);
    CHECK(splits.test.scenario_tag == ScenarioTag::kMatched);
  }

  SUBCASE("unmatched-matched tags train unmatched and test matched") {
    const auto splits = build_scenario(PairMode::kUnmatched, PairMode::kMatched,
                                       train, dev, test, cfg);
    CHECK(splits.train.scenario_tag == ScenarioTag::kUnmatched);
    CHECK(splits.dev.scenario_tag == ScenarioTag::kUnmatched);  // mirrors train
    CHECK(splits.test.scenario_tag == ScenarioTag::kMatched);
  }

  SUBCASE("6 systems x 2 utterances give C(6,2) = 15 unmatched train pairs") {
    const auto splits = build_scenario(PairMode::kUnmatched,
                                       PairMode::kUnmatched, train, dev, test,
                                       cfg);
    CHECK(splits.train.pairs.size() == 15);
    CHECK(splits.dev.pairs.size() == 15);
    CHECK(splits.test.pairs.size() == 15);
  }

  SUBCASE("overlapping manifests are rejected") {
    auto dev_overlap = dev;
    dev_overlap.push_back(train.front());
    CHECK_THROWS_AS(build_scenario(PairMode::kUnmatched, PairMode::kUnmatched,
                                   train, dev_overlap, test, cfg),
                    Error);
  }
}
