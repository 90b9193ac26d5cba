// include/pairsqa/samos.h
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
// The SA-MOS scoring network and the preference function.
//
// Per utterance: semantic features (final backbone layer) and acoustic
// features (learnable-weighted sum over all backbone layers) are refined by
// two parallel feature processors (linear-GELU-linear with a residual
// connection), concatenated along the feature axis, passed through a BiLSTM
// and a per-frame linear-ReLU-linear head, and averaged over frames into one
// absolute score. One shared network scores both members of a pair; the two
// scores fuse into a relative preference score in (-1, 1).
//
// Gradients are hand-written (no autograd graph); backward() accumulates
// into per-tensor gradient buffers held by the model.

#ifndef PAIRSQA_SAMOS_H_
#define PAIRSQA_SAMOS_H_

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "pairsqa/backbone.h"
#include "pairsqa/datamodel.h"

namespace pairsqa {

// s_p_hat = 2 / (1 + exp(-(mos_x - mos_y))) - 1, strictly inside (-1, 1)
// for all realistic score differences, antisymmetric, sign-preserving.
double preference_score(double mos_x, double mos_y);

struct SamosConfig {
  int feature_dim = 768;   // per-branch backbone feature dimension
  int acoustic_layers = 3; // L, taken from the acoustic backbone
  int proc_hidden = 64;    // feature-processor bottleneck width
  int lstm_hidden = 128;   // BiLSTM units per direction
  int head_hidden = 64;    // width of the head's hidden linear

  nlohmann::json to_json() const;
  static SamosConfig from_json(const nlohmann::json& j);
};

// y = w x + b
struct Linear {
  Eigen::MatrixXd w;
  Eigen::VectorXd b;
};

// Gates in i, f, g, o order; one combined bias.
struct LstmCell {
  Eigen::MatrixXd w_ih;  // 4H x input
  Eigen::MatrixXd w_hh;  // 4H x H
  Eigen::VectorXd b;     // 4H
};

struct SamosParams {
  Eigen::VectorXd layer_raw;  // acoustic layer-weight logits (L)
  Linear proc_sem1, proc_sem2;
  Linear proc_ac1, proc_ac2;
  LstmCell lstm_fwd, lstm_bwd;
  Linear head1, head2;

  // Visits every tensor in a fixed order; f is called with (name, tensor&)
  // where tensor is Eigen::MatrixXd or Eigen::VectorXd.
  template <typename Self, typename F>
  static void visit_impl(Self& self, F&& f) {
    f("layer_raw", self.layer_raw);
    f("proc_sem1.w", self.proc_sem1.w);
    f("proc_sem1.b", self.proc_sem1.b);
    f("proc_sem2.w", self.proc_sem2.w);
    f("proc_sem2.b", self.proc_sem2.b);
    f("proc_ac1.w", self.proc_ac1.w);
    f("proc_ac1.b", self.proc_ac1.b);
    f("proc_ac2.w", self.proc_ac2.w);
    f("proc_ac2.b", self.proc_ac2.b);
    f("lstm_fwd.w_ih", self.lstm_fwd.w_ih);
    f("lstm_fwd.w_hh", self.lstm_fwd.w_hh);
    f("lstm_fwd.b", self.lstm_fwd.b);
    f("lstm_bwd.w_ih", self.lstm_bwd.w_ih);
    f("lstm_bwd.w_hh", self.lstm_bwd.w_hh);
    f("lstm_bwd.b", self.lstm_bwd.b);
    f("head1.w", self.head1.w);
    f("head1.b", self.head1.b);
    f("head2.w", self.head2.w);
    f("head2.b", self.head2.b);
  }
  template <typename F>
  void visit(F&& f) { visit_impl(*this, std::forward<F>(f)); }
  template <typename F>
  void visit(F&& f) const { visit_impl(*this, std::forward<F>(f)); }

  // Visits matching tensors of two parameter sets (e.g. params and grads).
  template <typename A, typename B, typename F>
  static void visit2(A& a, B& b, F&& f) {
    f("layer_raw", a.layer_raw, b.layer_raw);
    f("proc_sem1.w", a.proc_sem1.w, b.proc_sem1.w);
    f("proc_sem1.b", a.proc_sem1.b, b.proc_sem1.b);
    f("proc_sem2.w", a.proc_sem2.w, b.proc_sem2.w);
    f("proc_sem2.b", a.proc_sem2.b, b.proc_sem2.b);
    f("proc_ac1.w", a.proc_ac1.w, b.proc_ac1.w);
    f("proc_ac1.b", a.proc_ac1.b, b.proc_ac1.b);
    f("proc_ac2.w", a.proc_ac2.w, b.proc_ac2.w);
    f("proc_ac2.b", a.proc_ac2.b, b.proc_ac2.b);
    f("lstm_fwd.w_ih", a.lstm_fwd.w_ih, b.lstm_fwd.w_ih);
    f("lstm_fwd.w_hh", a.lstm_fwd.w_hh, b.lstm_fwd.w_hh);
    f("lstm_fwd.b", a.lstm_fwd.b, b.lstm_fwd.b);
    f("lstm_bwd.w_ih", a.lstm_bwd.w_ih, b.lstm_bwd.w_ih);
    f("lstm_bwd.w_hh", a.lstm_bwd.w_hh, b.lstm_bwd.w_hh);
    f("lstm_bwd.b", a.lstm_bwd.b, b.lstm_bwd.b);
    f("head1.w", a.head1.w, b.head1.w);
    f("head1.b", a.head1.b, b.head1.b);
    f("head2.w", a.head2.w, b.head2.w);
    f("head2.b", a.head2.b, b.head2.b);
  }
};

// Opaque forward activations retained for the backward pass.
struct ScoreCache {
  virtual ~ScoreCache() = default;
};

// Architecture-agnostic scorer contract. Training, checkpointing and
// evaluation work against this interface; alternative scorer architectures
// register a factory under their own name.
class ScoringModel {
 public:
  virtual ~ScoringModel() = default;

  virtual std::string architecture() const = 0;
  virtual void init_params(std::uint64_t seed) = 0;

  // Inference-only absolute score.
  double score(const Waveform& wav) const;

  // Training forward; the cache feeds backward().
  virtual double forward_mos(const Waveform& wav,
                             std::unique_ptr<ScoreCache>* cache) const = 0;

  virtual void zero_grad() = 0;
  // Accumulates dLoss/dparams given dLoss/dscore for this utterance.
  virtual void backward(const ScoreCache& cache, double d_score) = 0;
  // theta <- theta - lr * grad for every parameter.
  virtual void sgd_step(double lr) = 0;

  virtual std::unique_ptr<ScoringModel> clone() const = 0;

  virtual nlohmann::json config_json() const = 0;
  virtual nlohmann::json save_tensors() const = 0;
  virtual void load_tensors(const nlohmann::json& tensors) = 0;
};

// Scores both members with the same parameters and fuses via the
// preference function; no pair-order dependence beyond antisymmetry.
PredictionRecord forward_pair(const ScoringModel& model, const Waveform& x,
                              const Waveform& y);
PredictionRecord forward_pair(const ScoringModel& model, const std::string& x_id,
                              const Waveform& x, const std::string& y_id,
                              const Waveform& y);

class SamosModel : public ScoringModel {
 public:
  SamosModel(const SamosConfig& config,
             std::shared_ptr<const FeatureExtractor> semantic,
             std::shared_ptr<const FeatureExtractor> acoustic);

  std::string architecture() const override { return "samos"; }
  void init_params(std::uint64_t seed) override;
  double forward_mos(const Waveform& wav,
                     std::unique_ptr<ScoreCache>* cache) const override;
  void zero_grad() override;
  void backward(const ScoreCache& cache, double d_score) override;
  void sgd_step(double lr) override;
  std::unique_ptr<ScoringModel> clone() const override;
  nlohmann::json config_json() const override;
  nlohmann::json save_tensors() const override;
  void load_tensors(const nlohmann::json& tensors) override;

  const SamosConfig& config() const { return config_; }
  SamosParams& params() { return params_; }
  const SamosParams& params() const { return params_; }
  const SamosParams& grads() const { return grads_; }

 private:
  SamosConfig config_;
  std::shared_ptr<const FeatureExtractor> semantic_;
  std::shared_ptr<const FeatureExtractor> acoustic_;
  SamosParams params_;
  SamosParams grads_;
};

using ModelFactory = std::function<std::unique_ptr<ScoringModel>(
    const nlohmann::json& model_config,
    std::shared_ptr<const FeatureExtractor> semantic,
    std::shared_ptr<const FeatureExtractor> acoustic)>;

void register_architecture(const std::string& name, ModelFactory factory);
std::unique_ptr<ScoringModel> make_scoring_model(
    const std::string& architecture, const nlohmann::json& model_config,
    std::shared_ptr<const FeatureExtractor> semantic,
    std::shared_ptr<const FeatureExtractor> acoustic);

}  // namespace pairsqa

#endif  // PAIRSQA_SAMOS_H_
