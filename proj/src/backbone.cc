// src/backbone.cc
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

#include "pairsqa/backbone.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "pairsqa/common.h"
#include "pairsqa/rng.h"

namespace pairsqa {

Eigen::VectorXd softmax_weights(const Eigen::VectorXd& raw) {
  require(raw.size() >= 1, "softmax_weights: need at least one layer weight");
  const double max_raw = raw.maxCoeff();
  Eigen::VectorXd w(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    w[i] = std::exp(raw[i] - max_raw);
  }
  return w / w.sum();
}

FeatureSequence aggregate_layers(const LayerStack& stack,
                                 const LayerWeights& weights) {
  require(!stack.layers.empty(), "aggregate_layers: empty layer stack");
  require(weights.raw.size() == static_cast<Eigen::Index>(stack.num_layers()),
          "aggregate_layers: ", weights.raw.size(), " weights for ",
          stack.num_layers(), " layers");
  const Eigen::Index rows = stack.layers.front().rows();
  const Eigen::Index cols = stack.layers.front().cols();
  for (const auto& layer : stack.layers) {
    require(layer.rows() == rows && layer.cols() == cols,
            "aggregate_layers: inconsistent layer shapes");
  }

  const Eigen::VectorXd w = softmax_weights(weights.raw);
  FeatureSequence out;
  out.frames = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t l = 0; l < stack.num_layers(); ++l) {
    out.frames.noalias() += w[static_cast<Eigen::Index>(l)] * stack.layers[l];
  }
  out.frame_rate = stack.frame_rate;
  out.source = stack.source;
  return out;
}

void align_lengths(FeatureSequence& a, FeatureSequence& b) {
  require(a.frame_rate == b.frame_rate,
          "align_lengths: frame-rate mismatch (", a.frame_rate, " vs ",
          b.frame_rate, ")");
  const Eigen::Index t = std::min(a.num_frames(), b.num_frames());
  if (a.num_frames() != t) a.frames = a.frames.topRows(t).eval();
  if (b.num_frames() != t) b.frames = b.frames.topRows(t).eval();
}

FeatureSequence FeatureExtractor::extract_semantic(const Waveform& wav) const {
  LayerStack stack = extract_stack(wav);
  FeatureSequence out;
  out.frames = std::move(stack.layers.back());
  out.frame_rate = stack.frame_rate;
  out.source = stack.source;
  return out;
}

namespace {

constexpr int kNumStats = 8;

inline double softsign(double x) { return x / (1.0 + (x < 0.0 ? -x : x)); }

// v >= 0 compressed into [0, 1); knee at c.
inline double compress(double v, double c) { return v / (v + c); }

}  // namespace

ToyExtractor::ToyExtractor(int dim, int layers, std::uint64_t seed)
    : dim_(dim), num_layers_(layers), seed_(seed) {
  require(dim_ >= 1, "toy extractor dim must be >= 1, got ", dim_);
  require(num_layers_ >= 1, "toy extractor layers must be >= 1, got ",
          num_layers_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(kNumStats));
  projections_.reserve(static_cast<std::size_t>(num_layers_));
  for (int l = 0; l < num_layers_; ++l) {
    Rng rng(mix64(seed_, 0x746f79ULL + static_cast<std::uint64_t>(l)));
    Eigen::MatrixXd p(dim_, kNumStats);
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < kNumStats; ++c) {
        p(r, c) = (2.0 * rng.uniform01() - 1.0) * scale;
      }
    }
    projections_.push_back(std::move(p));
  }
}

std::string ToyExtractor::name() const {
  return str_cat("toy:dim=", dim_, ",layers=", num_layers_, ",seed=", seed_);
}

LayerStack ToyExtractor::extract_stack(const Waveform& wav) const {
  require(wav.sample_rate > 0, "toy extractor: sample rate must be > 0");
  require(!wav.samples.empty(), "toy extractor: zero-length waveform");
  for (double s : wav.samples) {
    require(std::isfinite(s), "toy extractor: non-finite sample");
  }

  const int sr = wav.sample_rate;
  const std::size_t win = std::max<std::size_t>(
      2, static_cast<std::size_t>(0.025 * sr + 0.5));
  const std::size_t hop =
      std::max<std::size_t>(1, static_cast<std::size_t>(0.020 * sr + 0.5));
  const std::size_t n = wav.samples.size();
  const std::size_t num_frames = n >= win ? 1 + (n - win) / hop : 1;

  // Per-frame statistics; only IEEE +,-,*,/ in fixed order so the output is
  // reproducible bit-for-bit.
  Eigen::MatrixXd stats(num_frames, kNumStats);
  for (std::size_t t = 0; t < num_frames; ++t) {
    const std::size_t begin = t * hop;
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    double abs_sum = 0.0, abs_max = 0.0;
    int crossings = 0;
    double prev = 0.0, prev_d = 0.0;
    for (std::size_t k = 0; k < win; ++k) {
      const std::size_t idx = begin + k;
      const double x = idx < n ? wav.samples[idx] : 0.0;  // zero padding
      const double ax = x < 0.0 ? -x : x;
      e0 += x * x;
      abs_sum += ax;
      if (ax > abs_max) abs_max = ax;
      if (k > 0) {
        const double d = x - prev;
        e1 += d * d;
        if ((x > 0.0 && prev <= 0.0) || (x <= 0.0 && prev > 0.0)) ++crossings;
        if (k > 1) {
          const double dd = d - prev_d;
          e2 += dd * dd;
        }
        prev_d = d;
      }
      prev = x;
    }
    const double inv_win = 1.0 / static_cast<double>(win);
    e0 *= inv_win;
    e1 *= inv_win;
    e2 *= inv_win;
    stats(t, 0) = compress(e0, 0.02);
    stats(t, 1) = compress(e1, 0.002);
    stats(t, 2) = compress(e2, 0.002);
    stats(t, 3) = static_cast<double>(crossings) / static_cast<double>(win - 1);
    stats(t, 4) = abs_sum * inv_win;
    stats(t, 5) = abs_max;
    stats(t, 6) = compress(e1 / (e0 + 1e-12), 0.25);
    stats(t, 7) = compress(e2 / (e1 + 1e-12), 0.5);
  }

  LayerStack out;
  out.frame_rate = static_cast<double>(sr) / static_cast<double>(hop);
  out.source = name();
  out.layers.reserve(static_cast<std::size_t>(num_layers_));
  for (int l = 0; l < num_layers_; ++l) {
    const Eigen::MatrixXd& p = projections_[static_cast<std::size_t>(l)];
    Eigen::MatrixXd layer(num_frames, dim_);
    for (std::size_t t = 0; t < num_frames; ++t) {
      for (int d = 0; d < dim_; ++d) {
        double acc = 0.0;
        for (int s = 0; s < kNumStats; ++s) {
          acc += p(d, s) * stats(static_cast<Eigen::Index>(t), s);
        }
        layer(static_cast<Eigen::Index>(t), d) = softsign(3.0 * acc);
      }
    }
    out.layers.push_back(std::move(layer));
  }
  return out;
}

namespace {

struct ToyArgs {
  int dim = kToyDefaultDim;
  int layers = kToyDefaultLayers;
  std::uint64_t seed = kToySemanticSeed;
  bool seed_given = false;
};

ToyArgs parse_toy_args(const std::string& args) {
  ToyArgs parsed;
  std::size_t pos = 0;
  while (pos < args.size()) {
    std::size_t end = args.find(',', pos);
    if (end == std::string::npos) end = args.size();
    const std::string kv = args.substr(pos, end - pos);
    const std::size_t eq = kv.find('=');
    require(eq != std::string::npos, "bad toy extractor option '", kv,
            "' (expected key=value)");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      if (key == "dim") {
        parsed.dim = std::stoi(value);
      } else if (key == "layers") {
        parsed.layers = std::stoi(value);
      } else if (key == "seed") {
        parsed.seed = std::stoull(value);
        parsed.seed_given = true;
      } else {
        fail("unknown toy extractor option '", key, "'");
      }
    } catch (const std::invalid_argument&) {
      fail("bad value '", value, "' for toy extractor option '", key, "'");
    } catch (const std::out_of_range&) {
      fail("value '", value, "' out of range for toy extractor option '", key,
           "'");
    }
    pos = end + 1;
  }
  return parsed;
}

std::map<std::string, ExtractorFactory>& extractor_registry() {
  static std::map<std::string, ExtractorFactory> registry = {
      {"toy", [](const std::string& spec) -> std::unique_ptr<FeatureExtractor> {
         const std::size_t colon = spec.find(':');
         const ToyArgs args = parse_toy_args(
             colon == std::string::npos ? "" : spec.substr(colon + 1));
         return std::make_unique<ToyExtractor>(args.dim, args.layers,
                                               args.seed);
       }}};
  return registry;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_extractor(const std::string& name, ExtractorFactory factory) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  extractor_registry()[name] = std::move(factory);
}

std::unique_ptr<FeatureExtractor> make_extractor(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string name =
      colon == std::string::npos ? spec : spec.substr(0, colon);
  ExtractorFactory factory;
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto& registry = extractor_registry();
    auto it = registry.find(name);
    if (it == registry.end()) {
      std::string known;
      for (const auto& [k, v] : registry) {
        if (!known.empty()) known += ", ";
        known += k;
      }
      fail("unknown backbone '", name, "'; registered adapters: ", known);
    }
    factory = it->second;
  }
  return factory(spec);
}

namespace {

// Plain "toy" specs get a role-specific seed so the semantic and acoustic
// branches carry different projections by default.
std::string apply_toy_role_seed(const std::string& spec, std::uint64_t seed) {
  const std::size_t colon = spec.find(':');
  const std::string name =
      colon == std::string::npos ? spec : spec.substr(0, colon);
  if (name != "toy") return spec;
  const ToyArgs args = parse_toy_args(
      colon == std::string::npos ? "" : spec.substr(colon + 1));
  if (args.seed_given) return spec;
  return str_cat(spec, colon == std::string::npos ? ":" : ",", "seed=", seed);
}

}  // namespace

BackbonePair make_backbones(const std::string& semantic_spec,
                            const std::string& acoustic_spec) {
  BackbonePair pair;
  pair.semantic =
      make_extractor(apply_toy_role_seed(semantic_spec, kToySemanticSeed));
  pair.acoustic =
      make_extractor(apply_toy_role_seed(acoustic_spec, kToyAcousticSeed));
  return pair;
}

Waveform prepare_waveform(const Waveform& wav,
                          const FeatureExtractor& extractor) {
  const int want = extractor.required_sample_rate();
  if (want > 0 && want != wav.sample_rate) {
    return resample_linear(wav, want);
  }
  return wav;
}

}  // namespace pairsqa
