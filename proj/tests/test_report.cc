// tests/test_report.cc
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

#include "pairsqa/report.h"

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "pairsqa/common.h"
#include "test_util.h"

using namespace pairsqa;
using testutil::TempDir;
using testutil::write_text;

namespace {

namespace fs = std::filesystem;

void write_run(const fs::path& runs_dir, const std::string& condition,
               const std::string& scenario,
               const std::vector<std::uint64_t>& seeds,
               const std::vector<double>& accs) {
  const fs::path run_dir = runs_dir / (condition + "_" + scenario);
  fs::create_directories(run_dir);
  nlohmann::json meta;
  meta["condition"] = condition;
  meta["scenario"] = scenario;
  meta["seeds"] = seeds;
  write_text((run_dir / "run.json").string(), meta.dump());

  for (std::size_t i = 0; i < accs.size(); ++i) {
    const fs::path seed_dir = run_dir / str_cat("seed_", seeds[i]);
    fs::create_directories(seed_dir);
    nlohmann::json eval;
    eval["acc"] = accs[i];
    eval["acc_excluding_ties"] = accs[i];
    eval["n_pairs"] = 15;
    eval["n_ties"] = 1;
    eval["utt_srcc"] = 0.9;
    eval["sys_srcc"] = 0.95;
    write_text((seed_dir / "eval.json").string(), eval.dump());
  }
}

}  // namespace

TEST_CASE("collect_reports with one run") {
  TempDir dir;
  write_run(dir.path(), "LA", "nm-nm", {1, 2}, {0.8, 0.9});
  const auto rows = collect_reports(dir.path().string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].condition == "LA");
  CHECK(rows[0].scenario == "nm-nm");
  CHECK(rows[0].mean_acc == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(rows[0].complete);
  CHECK(rows[0].n_pairs == 15);
  CHECK(rows[0].n_ties == 1);
  CHECK(rows[0].utt_srcc == doctest::Approx(0.9));
}

TEST_CASE("eight runs come back as a fixed-order grid") {
  TempDir dir;
  // Written in scrambled order on purpose.
  const char* scenarios[] = {"nm-nm", "m-nm", "nm-m", "m-m"};
  for (const char* condition : {"LM", "LA"}) {
    for (const char* scenario : scenarios) {
      write_run(dir.path(), condition, scenario, {1}, {0.75});
    }
  }
  const auto rows = collect_reports(dir.path().string());
  REQUIRE(rows.size() == 8);
  const char* expected[][2] = {
      {"LA", "m-m"},  {"LA", "nm-m"},  {"LA", "m-nm"},  {"LA", "nm-nm"},
      {"LM", "m-m"},  {"LM", "nm-m"},  {"LM", "m-nm"},  {"LM", "nm-nm"}};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(rows[i].condition == expected[i][0]);
    CHECK(rows[i].scenario == expected[i][1]);
  }
}

TEST_CASE("a missing seed flags the row incomplete") {
  TempDir dir;
  write_run(dir.path(), "LA", "m-m", {1, 2, 3}, {0.8, 0.9});  // seed 3 missing
  const auto rows = collect_reports(dir.path().string());
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].complete);
  CHECK(rows[0].mean_acc == doctest::Approx(0.85));
  REQUIRE(rows[0].per_seed_acc.size() == 3);
  CHECK(rows[0].per_seed_acc[0].has_value());
  CHECK_FALSE(rows[0].per_seed_acc[2].has_value());

  std::ostringstream text;
  write_report_text(text, rows);
  CHECK(text.str().find("incomplete") != std::string::npos);
}

TEST_CASE("csv output carries the documented schema") {
  TempDir dir;
  write_run(dir.path(), "LA", "nm-nm", {1, 2}, {0.8, 0.9});
  write_run(dir.path(), "LM", "nm-nm", {1, 2}, {0.7, 0.72});
  const auto rows = collect_reports(dir.path().string());

  std::ostringstream csv;
  write_report_csv(csv, rows);
  const std::string text = csv.str();
  CHECK(text.rfind("condition,scenario,mean_acc,acc_seed_1,acc_seed_2,"
                   "utt_srcc,sys_srcc,n_pairs,n_ties\n",
                   0) == 0);
  CHECK(text.find("LA,nm-nm,0.8500,0.8000,0.9000,") != std::string::npos);
}

TEST_CASE("json output mirrors the rows") {
  TempDir dir;
  write_run(dir.path(), "MOS_ONLY", "nm-nm", {4}, {0.66});
  const auto rows = collect_reports(dir.path().string());
  const nlohmann::json j = report_to_json(rows);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["condition"] == "MOS_ONLY");
  CHECK(j[0]["per_seed"][0]["seed"] == 4);
  CHECK(j[0]["complete"] == true);
}

TEST_CASE("empty or missing run directories are errors") {
  TempDir dir;
  CHECK_THROWS_AS(collect_reports(dir.path().string()), Error);
  CHECK_THROWS_AS(collect_reports(dir.file("nope")), Error);
}
