// include/pairsqa/report.h
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
// Aggregation of completed runs into a condition x scenario grid.
//
// Run directory layout (one directory per condition/scenario, one
// subdirectory per seed):
//   <runs>/<condition>_<scenario>/run.json
//   <runs>/<condition>_<scenario>/seed_<k>/{checkpoint.ckpt,train_log.csv,
//                                           eval.json}

#ifndef PAIRSQA_REPORT_H_
#define PAIRSQA_REPORT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pairsqa {

// One condition x scenario row aggregated over seeds.
struct EvalReport {
  std::string condition;  // LA, LM or MOS_ONLY
  std::string scenario;   // m-m, nm-m, m-nm, nm-nm (or custom)
  std::vector<std::uint64_t> seeds;               // expected seeds, in order
  std::vector<std::optional<double>> per_seed_acc;  // aligned with seeds
  double mean_acc = 0.0;            // over seeds found
  std::optional<double> utt_srcc;   // mean over seeds found
  std::optional<double> sys_srcc;
  int n_pairs = 0;
  int n_ties = 0;
  bool complete = false;  // every expected seed has an evaluation
};

// Scans a run directory; rows come back in fixed order: conditions LA, LM,
// MOS_ONLY, scenarios m-m, nm-m, m-nm, nm-nm within each condition. Errors
// if the directory contains no runs at all.
std::vector<EvalReport> collect_reports(const std::string& runs_dir);

void write_report_text(std::ostream& out, const std::vector<EvalReport>& rows);
// Row schema: condition,scenario,mean_acc,acc_seed_1..k,utt_srcc,sys_srcc,
// n_pairs,n_ties
void write_report_csv(std::ostream& out, const std::vector<EvalReport>& rows);
nlohmann::json report_to_json(const std::vector<EvalReport>& rows);

}  // namespace pairsqa

#endif  // PAIRSQA_REPORT_H_
