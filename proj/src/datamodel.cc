// src/datamodel.cc
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

#include "pairsqa/datamodel.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unordered_set>

#include "pairsqa/common.h"

namespace pairsqa {

namespace {

constexpr const char* kManifestHeader = "utt_id,wav_path,system_id,mos,transcript";
constexpr const char* kPairHeader = "x_id,y_id,s_m_x,s_m_y,s_p,cluster_id";

// 17 significant digits round-trip any double exactly through strtod.
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& context) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  require(end == begin + s.size() && !s.empty(), "bad number '", s, "' in ",
          context);
  return v;
}

long long parse_int(const std::string& s, const std::string& context) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  require(end == begin + s.size() && !s.empty(), "bad integer '", s, "' in ",
          context);
  return v;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// Splits off the first `n` comma-separated fields; the remainder (possibly
// containing commas) is appended as the last element.
std::vector<std::string> split_fields(const std::string& line, std::size_t n,
                                      const std::string& context) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t comma = line.find(',', pos);
    require(comma != std::string::npos, "expected ", n, " fields in ", context,
            ": '", line, "'");
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  fields.push_back(line.substr(pos));
  return fields;
}

void check_plain_field(const std::string& value, const char* what) {
  require(value.find(',') == std::string::npos &&
              value.find('\n') == std::string::npos,
          what, " may not contain commas or newlines: '", value, "'");
}

}  // namespace

std::string to_string(SplitName name) {
  switch (name) {
    case SplitName::kTrain: return "train";
    case SplitName::kDev: return "dev";
    case SplitName::kTest: return "test";
  }
  return "?";
}

std::string to_string(ScenarioTag tag) {
  switch (tag) {
    case ScenarioTag::kMatched: return "matched";
    case ScenarioTag::kUnmatched: return "unmatched";
    case ScenarioTag::kNone: return "none";
  }
  return "?";
}

int derive_preference_label(double s_m_x, double s_m_y) {
  require(std::isfinite(s_m_x) && std::isfinite(s_m_y),
          "derive_preference_label: inputs must be finite");
  return sgn(s_m_x - s_m_y);
}

std::vector<Utterance> load_manifest(const std::string& path,
                                     bool require_mos) {
  std::ifstream in(path);
  require(in.good(), "cannot open manifest: ", path);

  std::string line;
  require(static_cast<bool>(std::getline(in, line)),
          "manifest is empty (missing header): ", path);
  require(strip_cr(line) == kManifestHeader, "bad manifest header in ", path,
          "; expected '", kManifestHeader, "'");

  std::vector<Utterance> utts;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string context = str_cat(path, ":", line_no);
    auto fields = split_fields(line, 5, context);

    Utterance u;
    u.utt_id = fields[0];
    u.wav_path = fields[1];
    u.system_id = fields[2];
    require(!u.utt_id.empty(), "empty utt_id in ", context);
    require(!u.wav_path.empty(), "empty wav_path in ", context);
    require(!u.system_id.empty(), "empty system_id in ", context);
    require(seen.insert(u.utt_id).second, "duplicate utt_id '", u.utt_id,
            "' in ", context);
    if (!fields[3].empty()) {
      const double mos = parse_double(fields[3], context);
      require(mos >= 1.0 && mos <= 5.0, "MOS ", mos, " outside [1,5] in ",
              context);
      u.mos = mos;
    } else {
      require(!require_mos, "missing MOS for utterance '", u.utt_id, "' in ",
              context);
    }
    if (!fields[4].empty()) u.transcript = fields[4];
    utts.push_back(std::move(u));
  }
  return utts;
}

void write_manifest(const std::string& path,
                    const std::vector<Utterance>& utts) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  require(out.good(), "cannot write manifest: ", path);
  out << kManifestHeader << "\n";
  std::unordered_set<std::string> seen;
  for (const auto& u : utts) {
    check_plain_field(u.utt_id, "utt_id");
    check_plain_field(u.wav_path, "wav_path");
    check_plain_field(u.system_id, "system_id");
    require(seen.insert(u.utt_id).second, "duplicate utt_id '", u.utt_id,
            "' while writing ", path);
    if (u.mos) {
      require(*u.mos >= 1.0 && *u.mos <= 5.0, "MOS ", *u.mos,
              " outside [1,5] for utterance '", u.utt_id, "'");
    }
    out << u.utt_id << ',' << u.wav_path << ',' << u.system_id << ','
        << (u.mos ? format_double(*u.mos) : "") << ','
        << (u.transcript ? *u.transcript : "") << "\n";
  }
  require(out.good(), "short write to manifest: ", path);
}

void validate_pairs(const std::vector<SpeechPair>& pairs) {
  for (const auto& p : pairs) {
    require(p.x_id != p.y_id, "pair references the same utterance twice: '",
            p.x_id, "'");
    require(p.s_p == -1 || p.s_p == 0 || p.s_p == 1, "pair (", p.x_id, ",",
            p.y_id, ") has s_p ", p.s_p, " outside {-1,0,+1}");
    if (p.s_m_x && p.s_m_y) {
      require(derive_preference_label(*p.s_m_x, *p.s_m_y) == p.s_p, "pair (",
              p.x_id, ",", p.y_id, ") label s_p=", p.s_p,
              " inconsistent with MOS values ", *p.s_m_x, " and ", *p.s_m_y);
    }
  }
}

void save_pairs(const std::string& path,
                const std::vector<SpeechPair>& pairs) {
  validate_pairs(pairs);
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  require(out.good(), "cannot write pair file: ", path);
  out << kPairHeader << "\n";
  for (const auto& p : pairs) {
    check_plain_field(p.x_id, "x_id");
    check_plain_field(p.y_id, "y_id");
    out << p.x_id << ',' << p.y_id << ','
        << (p.s_m_x ? format_double(*p.s_m_x) : "") << ','
        << (p.s_m_y ? format_double(*p.s_m_y) : "") << ',' << p.s_p << ','
        << p.cluster_id << "\n";
  }
  require(out.good(), "short write to pair file: ", path);
}

std::vector<SpeechPair> load_pairs(const std::string& path,
                                   const std::vector<Utterance>* manifest) {
  std::ifstream in(path);
  require(in.good(), "cannot open pair file: ", path);

  std::string line;
  require(static_cast<bool>(std::getline(in, line)),
          "pair file is empty (missing header): ", path);
  require(strip_cr(line) == kPairHeader, "bad pair-file header in ", path,
          "; expected '", kPairHeader, "'");

  std::vector<SpeechPair> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string context = str_cat(path, ":", line_no);
    auto fields = split_fields(line, 6, context);
    require(fields.size() == 6 && fields[5].find(',') == std::string::npos,
            "expected 6 fields in ", context);

    SpeechPair p;
    p.x_id = fields[0];
    p.y_id = fields[1];
    require(!p.x_id.empty() && !p.y_id.empty(), "empty utt_id in ", context);
    if (!fields[2].empty()) p.s_m_x = parse_double(fields[2], context);
    if (!fields[3].empty()) p.s_m_y = parse_double(fields[3], context);
    p.s_p = static_cast<int>(parse_int(fields[4], context));
    p.cluster_id = parse_int(fields[5], context);
    pairs.push_back(std::move(p));
  }
  validate_pairs(pairs);

  if (manifest != nullptr) {
    const auto index = build_index(*manifest);
    for (const auto& p : pairs) {
      require(index.count(p.x_id) != 0, "pair file ", path,
              " references unknown utterance '", p.x_id, "'");
      require(index.count(p.y_id) != 0, "pair file ", path,
              " references unknown utterance '", p.y_id, "'");
    }
  }
  return pairs;
}

void validate_split(const DatasetSplit& split) {
  const auto index = build_index(split.utterances);
  validate_pairs(split.pairs);
  for (const auto& p : split.pairs) {
    require(index.count(p.x_id) != 0, "split ", to_string(split.name),
            ": pair references utterance '", p.x_id, "' not in the split");
    require(index.count(p.y_id) != 0, "split ", to_string(split.name),
            ": pair references utterance '", p.y_id, "' not in the split");
    if (split.scenario_tag == ScenarioTag::kMatched) {
      require(p.cluster_id >= 0, "matched split ", to_string(split.name),
              ": pair (", p.x_id, ",", p.y_id, ") lacks a cluster id");
    }
  }
}

UtteranceIndex build_index(const std::vector<Utterance>& utts) {
  UtteranceIndex index;
  index.reserve(utts.size());
  for (const auto& u : utts) {
    require(index.emplace(u.utt_id, &u).second, "duplicate utt_id '", u.utt_id,
            "'");
  }
  return index;
}

const Utterance& find_utterance(const UtteranceIndex& index,
                                const std::string& utt_id) {
  auto it = index.find(utt_id);
  require(it != index.end(), "unknown utterance '", utt_id, "'");
  return *it->second;
}

}  // namespace pairsqa
