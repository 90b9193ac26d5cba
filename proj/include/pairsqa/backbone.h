// include/pairsqa/backbone.h
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
// Frame-level feature extraction behind a uniform interface. Extractors are
// opaque functions from waveforms to layer stacks; heavyweight pretrained
// encoders plug in through the same registry as the offline toy extractor
// used for tests and desk-scale experiments.

#ifndef PAIRSQA_BACKBONE_H_
#define PAIRSQA_BACKBONE_H_

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pairsqa/audio.h"

namespace pairsqa {

// Frame-aligned feature matrix, one row per frame.
struct FeatureSequence {
  Eigen::MatrixXd frames;  // T x D
  double frame_rate = 0.0;  // Hz
  std::string source;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

// All hidden states of a multi-layer encoder: L matrices of identical shape.
struct LayerStack {
  std::vector<Eigen::MatrixXd> layers;  // each T x D
  double frame_rate = 0.0;
  std::string source;

  std::size_t num_layers() const { return layers.size(); }
};

// Learnable per-layer mixing weights; normalized by softmax so the
// aggregate stays a convex combination.
struct LayerWeights {
  Eigen::VectorXd raw;
};

Eigen::VectorXd softmax_weights(const Eigen::VectorXd& raw);

// output[t,d] = sum_l softmax(raw)[l] * stack[l][t,d]
FeatureSequence aggregate_layers(const LayerStack& stack,
                                 const LayerWeights& weights);

// Truncates both sequences to min(T_a, T_b) from the start; the two
// backbones may emit off-by-one frame counts for the same waveform.
void align_lengths(FeatureSequence& a, FeatureSequence& b);

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;

  virtual std::string name() const = 0;
  virtual int feature_dim() const = 0;
  virtual int num_layers() const = 0;
  // 0 means the extractor consumes audio at its native rate.
  virtual int required_sample_rate() const { return 0; }

  virtual LayerStack extract_stack(const Waveform& wav) const = 0;

  // Final hidden layer only; the convention for the semantic branch.
  FeatureSequence extract_semantic(const Waveform& wav) const;
};

// Offline deterministic extractor: frames the waveform (25 ms window, 20 ms
// hop), computes energy/zero-crossing statistics per frame and projects them
// through fixed seeded random matrices, one per layer. Output is
// bit-identical across runs for identical input. Uses only IEEE +,-,*,/ in a
// fixed order, no libm, so results are also stable across platforms.
class ToyExtractor : public FeatureExtractor {
 public:
  ToyExtractor(int dim, int layers, std::uint64_t seed);

  std::string name() const override;
  int feature_dim() const override { return dim_; }
  int num_layers() const override { return num_layers_; }
  LayerStack extract_stack(const Waveform& wav) const override;

 private:
  int dim_;
  int num_layers_;
  std::uint64_t seed_;
  std::vector<Eigen::MatrixXd> projections_;  // per layer, dim x kNumStats
};

// Builds an extractor from a config value: "toy" or
// "toy:dim=<n>,layers=<n>,seed=<n>" (missing keys take the defaults below).
// Unknown names report the registered adapter names.
std::unique_ptr<FeatureExtractor> make_extractor(const std::string& spec);

// Extension point for real SSL encoders; the toolkit treats adapters as
// opaque functions satisfying the FeatureExtractor contract.
using ExtractorFactory =
    std::function<std::unique_ptr<FeatureExtractor>(const std::string& spec)>;
void register_extractor(const std::string& name, ExtractorFactory factory);

inline constexpr int kToyDefaultDim = 768;
inline constexpr int kToyDefaultLayers = 3;

// Role defaults keep the two branches distinct when both are plain "toy".
inline constexpr std::uint64_t kToySemanticSeed = 17;
inline constexpr std::uint64_t kToyAcousticSeed = 23;

struct BackbonePair {
  std::shared_ptr<const FeatureExtractor> semantic;
  std::shared_ptr<const FeatureExtractor> acoustic;
};

// Resolves the config pair ("backbone.semantic" / "backbone.acoustic"),
// applying the role-specific toy seeds when the spec leaves them unset.
BackbonePair make_backbones(const std::string& semantic_spec,
                            const std::string& acoustic_spec);

// Loads and, if the extractor requires a fixed rate, resamples.
Waveform prepare_waveform(const Waveform& wav,
                          const FeatureExtractor& extractor);

}  // namespace pairsqa

#endif  // PAIRSQA_BACKBONE_H_
