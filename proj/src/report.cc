// src/report.cc
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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "pairsqa/common.h"

namespace pairsqa {

namespace {

namespace fs = std::filesystem;

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open ", path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("malformed JSON in ", path.string(), ": ", e.what());
  }
  return j;
}

int condition_rank(const std::string& condition) {
  if (condition == "LA") return 0;
  if (condition == "LM") return 1;
  if (condition == "MOS_ONLY") return 2;
  return 3;
}

int scenario_rank(const std::string& scenario) {
  if (scenario == "m-m") return 0;
  if (scenario == "nm-m") return 1;
  if (scenario == "m-nm") return 2;
  if (scenario == "nm-nm") return 3;
  return 4;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string("-");
}

}  // namespace

std::vector<EvalReport> collect_reports(const std::string& runs_dir) {
  require(fs::is_directory(runs_dir), "not a directory: ", runs_dir);

  std::vector<EvalReport> rows;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (!entry.is_directory()) continue;
    const fs::path run_json = entry.path() / "run.json";
    if (!fs::exists(run_json)) continue;

    const nlohmann::json meta = read_json_file(run_json);
    EvalReport row;
    row.condition = meta.at("condition").get<std::string>();
    row.scenario = meta.at("scenario").get<std::string>();
    row.seeds = meta.at("seeds").get<std::vector<std::uint64_t>>();

    double acc_sum = 0.0, utt_sum = 0.0, sys_sum = 0.0;
    int found = 0, utt_found = 0, sys_found = 0;
    for (std::uint64_t seed : row.seeds) {
      const fs::path eval_path =
          entry.path() / str_cat("seed_", seed) / "eval.json";
      if (!fs::exists(eval_path)) {
        row.per_seed_acc.emplace_back(std::nullopt);
        continue;
      }
      const nlohmann::json eval = read_json_file(eval_path);
      const double acc = eval.at("acc").get<double>();
      row.per_seed_acc.emplace_back(acc);
      acc_sum += acc;
      ++found;
      if (eval.contains("utt_srcc") && !eval.at("utt_srcc").is_null()) {
        utt_sum += eval.at("utt_srcc").get<double>();
        ++utt_found;
      }
      if (eval.contains("sys_srcc") && !eval.at("sys_srcc").is_null()) {
        sys_sum += eval.at("sys_srcc").get<double>();
        ++sys_found;
      }
      row.n_pairs = eval.at("n_pairs").get<int>();
      row.n_ties = eval.at("n_ties").get<int>();
    }
    require(found > 0, "run ", entry.path().string(),
            " has no completed seed evaluations");
    row.mean_acc = acc_sum / found;
    if (utt_found > 0) row.utt_srcc = utt_sum / utt_found;
    if (sys_found > 0) row.sys_srcc = sys_sum / sys_found;
    row.complete = found == static_cast<int>(row.seeds.size());
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "no completed runs under ", runs_dir);

  std::sort(rows.begin(), rows.end(),
            [](const EvalReport& a, const EvalReport& b) {
              const int ca = condition_rank(a.condition);
              const int cb = condition_rank(b.condition);
              if (ca != cb) return ca < cb;
              const int sa = scenario_rank(a.scenario);
              const int sb = scenario_rank(b.scenario);
              if (sa != sb) return sa < sb;
              return std::tie(a.condition, a.scenario) <
                     std::tie(b.condition, b.scenario);
            });
  return rows;
}

void write_report_text(std::ostream& out,
                       const std::vector<EvalReport>& rows) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %-8s %-9s %-9s %-9s %7s %6s  %s\n",
                "condition", "scenario", "mean_acc", "utt_srcc", "sys_srcc",
                "n_pairs", "n_ties", "seeds");
  out << line;
  for (const auto& row : rows) {
    std::string seed_accs;
    for (std::size_t i = 0; i < row.seeds.size(); ++i) {
      if (i > 0) seed_accs += ' ';
      seed_accs += str_cat(row.seeds[i], "=",
                           row.per_seed_acc[i] ? fmt(*row.per_seed_acc[i])
                                               : std::string("missing"));
    }
    std::snprintf(line, sizeof(line), "%-10s %-8s %-9s %-9s %-9s %7d %6d  %s%s\n",
                  row.condition.c_str(), row.scenario.c_str(),
                  fmt(row.mean_acc).c_str(), fmt_opt(row.utt_srcc).c_str(),
                  fmt_opt(row.sys_srcc).c_str(), row.n_pairs, row.n_ties,
                  seed_accs.c_str(), row.complete ? "" : "  (incomplete)");
    out << line;
  }
}

void write_report_csv(std::ostream& out, const std::vector<EvalReport>& rows) {
  std::size_t max_seeds = 0;
  for (const auto& row : rows) max_seeds = std::max(max_seeds, row.seeds.size());

  out << "condition,scenario,mean_acc";
  for (std::size_t i = 1; i <= max_seeds; ++i) out << ",acc_seed_" << i;
  out << ",utt_srcc,sys_srcc,n_pairs,n_ties\n";

  for (const auto& row : rows) {
    out << row.condition << ',' << row.scenario << ',' << fmt(row.mean_acc);
    for (std::size_t i = 0; i < max_seeds; ++i) {
      out << ',';
      if (i < row.per_seed_acc.size() && row.per_seed_acc[i]) {
        out << fmt(*row.per_seed_acc[i]);
      }
    }
    out << ',' << fmt_opt(row.utt_srcc) << ',' << fmt_opt(row.sys_srcc) << ','
        << row.n_pairs << ',' << row.n_ties << "\n";
  }
}

nlohmann::json report_to_json(const std::vector<EvalReport>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j;
    j["condition"] = row.condition;
    j["scenario"] = row.scenario;
    j["mean_acc"] = row.mean_acc;
    nlohmann::json accs = nlohmann::json::array();
    for (std::size_t i = 0; i < row.seeds.size(); ++i) {
      nlohmann::json one;
      one["seed"] = row.seeds[i];
      if (row.per_seed_acc[i]) {
        one["acc"] = *row.per_seed_acc[i];
      } else {
        one["acc"] = nullptr;
      }
      accs.push_back(std::move(one));
    }
    j["per_seed"] = std::move(accs);
    j["utt_srcc"] = row.utt_srcc ? nlohmann::json(*row.utt_srcc)
                                 : nlohmann::json(nullptr);
    j["sys_srcc"] = row.sys_srcc ? nlohmann::json(*row.sys_srcc)
                                 : nlohmann::json(nullptr);
    j["n_pairs"] = row.n_pairs;
    j["n_ties"] = row.n_ties;
    j["complete"] = row.complete;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace pairsqa
