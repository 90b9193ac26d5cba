// src/samos.cc
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

#include "pairsqa/samos.h"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "pairsqa/common.h"
#include "pairsqa/rng.h"

namespace pairsqa {

double preference_score(double mos_x, double mos_y) {
  require(std::isfinite(mos_x) && std::isfinite(mos_y),
          "preference_score: inputs must be finite");
  return 2.0 / (1.0 + std::exp(-(mos_x - mos_y))) - 1.0;
}

nlohmann::json SamosConfig::to_json() const {
  return {{"feature_dim", feature_dim},
          {"acoustic_layers", acoustic_layers},
          {"proc_hidden", proc_hidden},
          {"lstm_hidden", lstm_hidden},
          {"head_hidden", head_hidden}};
}

SamosConfig SamosConfig::from_json(const nlohmann::json& j) {
  SamosConfig cfg;
  cfg.feature_dim = j.value("feature_dim", cfg.feature_dim);
  cfg.acoustic_layers = j.value("acoustic_layers", cfg.acoustic_layers);
  cfg.proc_hidden = j.value("proc_hidden", cfg.proc_hidden);
  cfg.lstm_hidden = j.value("lstm_hidden", cfg.lstm_hidden);
  cfg.head_hidden = j.value("head_hidden", cfg.head_hidden);
  return cfg;
}

namespace {

inline double stable_sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

inline double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2));
}

inline double gelu_grad(double x) {
  const double phi = std::exp(-0.5 * x * x) * kInvSqrt2Pi;
  return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) + x * phi;
}

// X: T x in, returns T x out
Eigen::MatrixXd apply_linear(const Linear& lin, const Eigen::MatrixXd& x) {
  return (x * lin.w.transpose()).rowwise() + lin.b.transpose();
}

struct SamosCache : ScoreCache {
  Eigen::Index frames = 0;
  Eigen::MatrixXd f_sem;                   // T x D
  std::vector<Eigen::MatrixXd> ac_layers;  // L of T x D (length-aligned)
  Eigen::VectorXd w_soft;                  // L
  Eigen::MatrixXd f_ac;                    // T x D
  Eigen::MatrixXd sem_h_pre, sem_h;        // T x P
  Eigen::MatrixXd ac_h_pre, ac_h;          // T x P
  Eigen::MatrixXd concat;                  // T x 2D
  Eigen::MatrixXd fwd_gates, fwd_c, fwd_h; // T x 4H, T x H, T x H
  Eigen::MatrixXd bwd_gates, bwd_c, bwd_h;
  Eigen::MatrixXd lstm_out;                // T x 2H
  Eigen::MatrixXd head_h_pre, head_h;      // T x Hh
  Eigen::VectorXd frame_scores;            // T
  double mos = 0.0;
};

// Runs one LSTM direction over the frames of x in the given time order,
// filling per-frame gate/cell/hidden rows (indexed by frame, not by step).
void lstm_forward(const LstmCell& cell, const Eigen::MatrixXd& x,
                  const std::vector<Eigen::Index>& order,
                  Eigen::MatrixXd* gates, Eigen::MatrixXd* c_seq,
                  Eigen::MatrixXd* h_seq) {
  const Eigen::Index hidden = cell.w_hh.cols();
  const Eigen::Index frames = x.rows();
  gates->resize(frames, 4 * hidden);
  c_seq->resize(frames, hidden);
  h_seq->resize(frames, hidden);

  Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden);
  for (Eigen::Index step = 0; step < frames; ++step) {
    const Eigen::Index t = order[static_cast<std::size_t>(step)];
    Eigen::VectorXd a = cell.w_ih * x.row(t).transpose() + cell.w_hh * h + cell.b;
    for (Eigen::Index k = 0; k < hidden; ++k) {
      const double i = stable_sigmoid(a[k]);
      const double f = stable_sigmoid(a[hidden + k]);
      const double g = std::tanh(a[2 * hidden + k]);
      const double o = stable_sigmoid(a[3 * hidden + k]);
      (*gates)(t, k) = i;
      (*gates)(t, hidden + k) = f;
      (*gates)(t, 2 * hidden + k) = g;
      (*gates)(t, 3 * hidden + k) = o;
      c[k] = f * c[k] + i * g;
      h[k] = o * std::tanh(c[k]);
    }
    c_seq->row(t) = c.transpose();
    h_seq->row(t) = h.transpose();
  }
}

// Backpropagates one direction; accumulates parameter gradients and the
// gradient w.r.t. the direction's input sequence.
void lstm_backward(const LstmCell& cell, const Eigen::MatrixXd& x,
                   const std::vector<Eigen::Index>& order,
                   const Eigen::MatrixXd& gates, const Eigen::MatrixXd& c_seq,
                   const Eigen::MatrixXd& h_seq, const Eigen::MatrixXd& dh_out,
                   LstmCell* grad, Eigen::MatrixXd* dx) {
  const Eigen::Index hidden = cell.w_hh.cols();
  const Eigen::Index frames = x.rows();

  Eigen::VectorXd dh_rec = Eigen::VectorXd::Zero(hidden);
  Eigen::VectorXd dc_rec = Eigen::VectorXd::Zero(hidden);
  Eigen::VectorXd da(4 * hidden);
  for (Eigen::Index step = frames - 1; step >= 0; --step) {
    const Eigen::Index t = order[static_cast<std::size_t>(step)];
    const Eigen::Index t_prev =
        step > 0 ? order[static_cast<std::size_t>(step - 1)] : -1;

    Eigen::VectorXd dh = dh_out.row(t).transpose() + dh_rec;
    Eigen::VectorXd dc = dc_rec;
    for (Eigen::Index k = 0; k < hidden; ++k) {
      const double i = gates(t, k);
      const double f = gates(t, hidden + k);
      const double g = gates(t, 2 * hidden + k);
      const double o = gates(t, 3 * hidden + k);
      const double tanh_c = std::tanh(c_seq(t, k));
      const double c_prev = t_prev >= 0 ? c_seq(t_prev, k) : 0.0;

      dc[k] += dh[k] * o * (1.0 - tanh_c * tanh_c);
      const double d_o = dh[k] * tanh_c;
      const double d_i = dc[k] * g;
      const double d_g = dc[k] * i;
      const double d_f = dc[k] * c_prev;

      da[k] = d_i * i * (1.0 - i);
      da[hidden + k] = d_f * f * (1.0 - f);
      da[2 * hidden + k] = d_g * (1.0 - g * g);
      da[3 * hidden + k] = d_o * o * (1.0 - o);

      dc_rec[k] = dc[k] * f;
    }

    grad->w_ih.noalias() += da * x.row(t);
    if (t_prev >= 0) {
      grad->w_hh.noalias() += da * h_seq.row(t_prev);
    }
    grad->b += da;
    dx->row(t) += (cell.w_ih.transpose() * da).transpose();
    dh_rec.noalias() = cell.w_hh.transpose() * da;
  }
}

std::vector<Eigen::Index> time_order(Eigen::Index frames, bool reversed) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(frames));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  if (reversed) std::reverse(order.begin(), order.end());
  return order;
}

void init_linear(Linear* lin, Eigen::Index out, Eigen::Index in, Rng* rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  lin->w.resize(out, in);
  lin->b.resize(out);
  for (Eigen::Index r = 0; r < out; ++r) {
    for (Eigen::Index c = 0; c < in; ++c) {
      lin->w(r, c) = rng->uniform(-bound, bound);
    }
  }
  for (Eigen::Index r = 0; r < out; ++r) lin->b[r] = rng->uniform(-bound, bound);
}

void init_lstm(LstmCell* cell, Eigen::Index input, Eigen::Index hidden,
               Rng* rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  cell->w_ih.resize(4 * hidden, input);
  cell->w_hh.resize(4 * hidden, hidden);
  cell->b.resize(4 * hidden);
  auto fill = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = rng->uniform(-bound, bound);
      }
    }
  };
  fill(cell->w_ih);
  fill(cell->w_hh);
  for (Eigen::Index r = 0; r < cell->b.size(); ++r) {
    cell->b[r] = rng->uniform(-bound, bound);
  }
}

template <typename T>
void zero_like(const T& src, T* dst) {
  *dst = T::Zero(src.rows(), src.cols());
}

}  // namespace

double ScoringModel::score(const Waveform& wav) const {
  return forward_mos(wav, nullptr);
}

PredictionRecord forward_pair(const ScoringModel& model, const Waveform& x,
                              const Waveform& y) {
  return forward_pair(model, "", x, "", y);
}

PredictionRecord forward_pair(const ScoringModel& model,
                              const std::string& x_id, const Waveform& x,
                              const std::string& y_id, const Waveform& y) {
  PredictionRecord rec;
  rec.x_id = x_id;
  rec.y_id = y_id;
  rec.mos_hat_x = model.score(x);
  rec.mos_hat_y = model.score(y);
  rec.pref_hat = preference_score(rec.mos_hat_x, rec.mos_hat_y);
  require(sgn(rec.pref_hat) == sgn(rec.mos_hat_x - rec.mos_hat_y),
          "forward_pair: preference sign disagrees with score difference");
  require(rec.pref_hat > -1.0 && rec.pref_hat < 1.0,
          "forward_pair: preference score left the open interval (-1,1)");
  return rec;
}

SamosModel::SamosModel(const SamosConfig& config,
                       std::shared_ptr<const FeatureExtractor> semantic,
                       std::shared_ptr<const FeatureExtractor> acoustic)
    : config_(config),
      semantic_(std::move(semantic)),
      acoustic_(std::move(acoustic)) {
  require(semantic_ != nullptr && acoustic_ != nullptr,
          "SamosModel: both backbones are required");
  require(semantic_->feature_dim() == config_.feature_dim,
          "SamosModel: semantic backbone dim ", semantic_->feature_dim(),
          " != configured feature_dim ", config_.feature_dim);
  require(acoustic_->feature_dim() == config_.feature_dim,
          "SamosModel: acoustic backbone dim ", acoustic_->feature_dim(),
          " != configured feature_dim ", config_.feature_dim);
  require(acoustic_->num_layers() == config_.acoustic_layers,
          "SamosModel: acoustic backbone has ", acoustic_->num_layers(),
          " layers, config says ", config_.acoustic_layers);
  require(config_.proc_hidden >= 1 && config_.lstm_hidden >= 1 &&
              config_.head_hidden >= 1,
          "SamosModel: all hidden widths must be >= 1");
  init_params(0);
}

void SamosModel::init_params(std::uint64_t seed) {
  const Eigen::Index d = config_.feature_dim;
  const Eigen::Index l = config_.acoustic_layers;
  const Eigen::Index p = config_.proc_hidden;
  const Eigen::Index h = config_.lstm_hidden;
  const Eigen::Index hh = config_.head_hidden;

  Rng rng(mix64(seed, 0x73616d6f73ULL));
  params_.layer_raw = Eigen::VectorXd::Zero(l);  // uniform convex start
  init_linear(&params_.proc_sem1, p, d, &rng);
  init_linear(&params_.proc_sem2, d, p, &rng);
  init_linear(&params_.proc_ac1, p, d, &rng);
  init_linear(&params_.proc_ac2, d, p, &rng);
  init_lstm(&params_.lstm_fwd, 2 * d, h, &rng);
  init_lstm(&params_.lstm_bwd, 2 * d, h, &rng);
  init_linear(&params_.head1, hh, 2 * h, &rng);
  init_linear(&params_.head2, 1, hh, &rng);

  zero_grad();
}

void SamosModel::zero_grad() {
  SamosParams::visit2(params_, grads_,
                      [](const char*, const auto& p, auto& g) {
                        g = std::remove_reference_t<decltype(g)>::Zero(
                            p.rows(), p.cols());
                      });
}

double SamosModel::forward_mos(const Waveform& wav,
                               std::unique_ptr<ScoreCache>* cache) const {
  FeatureSequence f_sem =
      semantic_->extract_semantic(prepare_waveform(wav, *semantic_));
  LayerStack stack =
      acoustic_->extract_stack(prepare_waveform(wav, *acoustic_));
  require(f_sem.frame_rate == stack.frame_rate,
          "forward_mos: semantic and acoustic frame rates differ (",
          f_sem.frame_rate, " vs ", stack.frame_rate, ")");
  require(static_cast<Eigen::Index>(stack.num_layers()) ==
              config_.acoustic_layers,
          "forward_mos: unexpected acoustic layer count");

  // Length-align both branches before aggregation.
  Eigen::Index frames = f_sem.num_frames();
  for (const auto& layer : stack.layers) frames = std::min(frames, layer.rows());
  require(frames >= 1, "forward_mos: empty feature sequence");

  SamosCache c;
  c.frames = frames;
  c.f_sem = f_sem.frames.topRows(frames);
  c.ac_layers.reserve(stack.num_layers());
  for (auto& layer : stack.layers) {
    c.ac_layers.push_back(layer.topRows(frames));
  }
  c.w_soft = softmax_weights(params_.layer_raw);
  c.f_ac = Eigen::MatrixXd::Zero(frames, config_.feature_dim);
  for (std::size_t i = 0; i < c.ac_layers.size(); ++i) {
    c.f_ac.noalias() +=
        c.w_soft[static_cast<Eigen::Index>(i)] * c.ac_layers[i];
  }

  // Feature processors with residual connections.
  c.sem_h_pre = apply_linear(params_.proc_sem1, c.f_sem);
  c.sem_h = c.sem_h_pre.unaryExpr([](double v) { return gelu(v); });
  Eigen::MatrixXd r_sem = c.f_sem + apply_linear(params_.proc_sem2, c.sem_h);

  c.ac_h_pre = apply_linear(params_.proc_ac1, c.f_ac);
  c.ac_h = c.ac_h_pre.unaryExpr([](double v) { return gelu(v); });
  Eigen::MatrixXd r_ac = c.f_ac + apply_linear(params_.proc_ac2, c.ac_h);

  // Semantic-residual first, acoustic-residual second; fixed for
  // checkpoint compatibility.
  c.concat.resize(frames, 2 * config_.feature_dim);
  c.concat << r_sem, r_ac;

  const auto fwd_order = time_order(frames, /*reversed=*/false);
  const auto bwd_order = time_order(frames, /*reversed=*/true);
  lstm_forward(params_.lstm_fwd, c.concat, fwd_order, &c.fwd_gates, &c.fwd_c,
               &c.fwd_h);
  lstm_forward(params_.lstm_bwd, c.concat, bwd_order, &c.bwd_gates, &c.bwd_c,
               &c.bwd_h);
  c.lstm_out.resize(frames, 2 * config_.lstm_hidden);
  c.lstm_out << c.fwd_h, c.bwd_h;

  c.head_h_pre = apply_linear(params_.head1, c.lstm_out);
  c.head_h = c.head_h_pre.cwiseMax(0.0);
  c.frame_scores = ((c.head_h * params_.head2.w.transpose()).col(0).array() +
                    params_.head2.b[0])
                       .matrix();
  c.mos = c.frame_scores.mean();
  const double mos = c.mos;

  require(std::isfinite(mos),
          "forward_mos: non-finite score (backbone=", f_sem.source,
          ", frames=", frames, ")");

  if (cache != nullptr) {
    *cache = std::make_unique<SamosCache>(std::move(c));
  }
  return mos;
}

void SamosModel::backward(const ScoreCache& cache, double d_score) {
  const auto* c = dynamic_cast<const SamosCache*>(&cache);
  require(c != nullptr, "SamosModel::backward: cache from a different model");
  const Eigen::Index frames = c->frames;
  const Eigen::Index d = config_.feature_dim;

  // Mean pooling spreads the gradient uniformly over frames.
  Eigen::VectorXd d_scores = Eigen::VectorXd::Constant(
      frames, d_score / static_cast<double>(frames));

  // Head.
  grads_.head2.w.noalias() += d_scores.transpose() * c->head_h;
  grads_.head2.b[0] += d_scores.sum();
  Eigen::MatrixXd d_head_h = d_scores * params_.head2.w;  // T x Hh
  Eigen::MatrixXd d_head_pre =
      (c->head_h_pre.array() > 0.0).select(d_head_h, 0.0);
  grads_.head1.w.noalias() += d_head_pre.transpose() * c->lstm_out;
  grads_.head1.b += d_head_pre.colwise().sum().transpose();
  Eigen::MatrixXd d_lstm_out = d_head_pre * params_.head1.w;  // T x 2H

  // BiLSTM.
  const Eigen::Index h = config_.lstm_hidden;
  Eigen::MatrixXd d_concat = Eigen::MatrixXd::Zero(frames, 2 * d);
  const auto fwd_order = time_order(frames, /*reversed=*/false);
  const auto bwd_order = time_order(frames, /*reversed=*/true);
  lstm_backward(params_.lstm_fwd, c->concat, fwd_order, c->fwd_gates, c->fwd_c,
                c->fwd_h, d_lstm_out.leftCols(h), &grads_.lstm_fwd, &d_concat);
  lstm_backward(params_.lstm_bwd, c->concat, bwd_order, c->bwd_gates, c->bwd_c,
                c->bwd_h, d_lstm_out.rightCols(h), &grads_.lstm_bwd, &d_concat);

  // Residual + processor, semantic branch (its backbone is fixed, so the
  // input gradient stops here).
  Eigen::MatrixXd d_r_sem = d_concat.leftCols(d);
  grads_.proc_sem2.w.noalias() += d_r_sem.transpose() * c->sem_h;
  grads_.proc_sem2.b += d_r_sem.colwise().sum().transpose();
  Eigen::MatrixXd d_sem_h = d_r_sem * params_.proc_sem2.w;
  Eigen::MatrixXd d_sem_pre = d_sem_h.cwiseProduct(
      c->sem_h_pre.unaryExpr([](double v) { return gelu_grad(v); }));
  grads_.proc_sem1.w.noalias() += d_sem_pre.transpose() * c->f_sem;
  grads_.proc_sem1.b += d_sem_pre.colwise().sum().transpose();

  // Acoustic branch; the aggregated features also feed the layer weights.
  Eigen::MatrixXd d_r_ac = d_concat.rightCols(d);
  grads_.proc_ac2.w.noalias() += d_r_ac.transpose() * c->ac_h;
  grads_.proc_ac2.b += d_r_ac.colwise().sum().transpose();
  Eigen::MatrixXd d_ac_h = d_r_ac * params_.proc_ac2.w;
  Eigen::MatrixXd d_ac_pre = d_ac_h.cwiseProduct(
      c->ac_h_pre.unaryExpr([](double v) { return gelu_grad(v); }));
  grads_.proc_ac1.w.noalias() += d_ac_pre.transpose() * c->f_ac;
  grads_.proc_ac1.b += d_ac_pre.colwise().sum().transpose();

  Eigen::MatrixXd d_f_ac = d_r_ac + d_ac_pre * params_.proc_ac1.w;  // T x D
  const Eigen::Index layers = config_.acoustic_layers;
  Eigen::VectorXd d_w(layers);
  for (Eigen::Index i = 0; i < layers; ++i) {
    d_w[i] =
        d_f_ac.cwiseProduct(c->ac_layers[static_cast<std::size_t>(i)]).sum();
  }
  // Softmax Jacobian: d_raw_j = w_j * (d_w_j - sum_k w_k d_w_k).
  const double weighted = c->w_soft.dot(d_w);
  grads_.layer_raw += c->w_soft.cwiseProduct(
      d_w - Eigen::VectorXd::Constant(layers, weighted));
}

void SamosModel::sgd_step(double lr) {
  SamosParams::visit2(params_, grads_,
                      [lr](const char*, auto& p, const auto& g) {
                        p -= lr * g;
                      });
}

std::unique_ptr<ScoringModel> SamosModel::clone() const {
  return std::make_unique<SamosModel>(*this);
}

nlohmann::json SamosModel::config_json() const { return config_.to_json(); }

nlohmann::json SamosModel::save_tensors() const {
  nlohmann::json out = nlohmann::json::object();
  params_.visit([&out](const char* name, const auto& tensor) {
    nlohmann::json entry;
    entry["rows"] = tensor.rows();
    entry["cols"] = tensor.cols();
    std::vector<double> data(static_cast<std::size_t>(tensor.size()));
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index col = 0; col < tensor.cols(); ++col) {
        data[static_cast<std::size_t>(k++)] = tensor(r, col);
      }
    }
    entry["data"] = std::move(data);
    out[name] = std::move(entry);
  });
  return out;
}

void SamosModel::load_tensors(const nlohmann::json& tensors) {
  params_.visit([&tensors](const char* name, auto& tensor) {
    require(tensors.contains(name), "checkpoint is missing tensor '", name,
            "'");
    const auto& entry = tensors.at(name);
    const Eigen::Index rows = entry.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = entry.at("cols").get<Eigen::Index>();
    require(rows == tensor.rows() && cols == tensor.cols(), "tensor '", name,
            "' has shape ", rows, "x", cols, " but the model expects ",
            tensor.rows(), "x", tensor.cols());
    const auto data = entry.at("data").get<std::vector<double>>();
    require(static_cast<Eigen::Index>(data.size()) == rows * cols,
            "tensor '", name, "' data length mismatch");
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index col = 0; col < cols; ++col) {
        tensor(r, col) = data[static_cast<std::size_t>(k++)];
      }
    }
  });
  zero_grad();
}

namespace {

std::map<std::string, ModelFactory>& model_registry() {
  static std::map<std::string, ModelFactory> registry = {
      {"samos",
       [](const nlohmann::json& cfg,
          std::shared_ptr<const FeatureExtractor> semantic,
          std::shared_ptr<const FeatureExtractor> acoustic)
           -> std::unique_ptr<ScoringModel> {
         SamosConfig parsed = SamosConfig::from_json(cfg);
         if (!cfg.contains("feature_dim")) {
           parsed.feature_dim = semantic->feature_dim();
         }
         if (!cfg.contains("acoustic_layers")) {
           parsed.acoustic_layers = acoustic->num_layers();
         }
         return std::make_unique<SamosModel>(parsed, std::move(semantic),
                                             std::move(acoustic));
       }}};
  return registry;
}

std::mutex& model_registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void register_architecture(const std::string& name, ModelFactory factory) {
  std::lock_guard<std::mutex> lock(model_registry_mutex());
  model_registry()[name] = std::move(factory);
}

std::unique_ptr<ScoringModel> make_scoring_model(
    const std::string& architecture, const nlohmann::json& model_config,
    std::shared_ptr<const FeatureExtractor> semantic,
    std::shared_ptr<const FeatureExtractor> acoustic) {
  ModelFactory factory;
  {
    std::lock_guard<std::mutex> lock(model_registry_mutex());
    auto& registry = model_registry();
    auto it = registry.find(architecture);
    if (it == registry.end()) {
      std::string known;
      for (const auto& [k, v] : registry) {
        if (!known.empty()) known += ", ";
        known += k;
      }
      fail("unknown scorer architecture '", architecture,
           "'; registered: ", known);
    }
    factory = it->second;
  }
  return factory(model_config, std::move(semantic), std::move(acoustic));
}

}  // namespace pairsqa
