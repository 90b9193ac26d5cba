// tests/test_backbone.cc
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

#include <doctest.h>

#include <cmath>

#include "pairsqa/common.h"
#include "pairsqa/rng.h"
#include "test_util.h"

using namespace pairsqa;
using testutil::TempDir;

namespace {

Waveform sine_wave(double freq, double seconds, int rate, double amp = 0.4) {
  Waveform wav;
  wav.sample_rate = rate;
  const int n = static_cast<int>(seconds * rate);
  wav.samples.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    wav.samples[static_cast<std::size_t>(i)] =
        amp * std::sin(2.0 * M_PI * freq * i / rate);
  }
  return wav;
}

Waveform noise_wave(double seconds, int rate, std::uint64_t seed,
                    double amp = 0.3) {
  Waveform wav;
  wav.sample_rate = rate;
  Rng rng(seed);
  const int n = static_cast<int>(seconds * rate);
  wav.samples.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    wav.samples[static_cast<std::size_t>(i)] = amp * (2.0 * rng.uniform01() - 1.0);
  }
  return wav;
}

}  // namespace

TEST_CASE("toy extractor frame count follows the 50 Hz frame rate") {
  ToyExtractor toy(8, 3, 1);
  SUBCASE("one second of 16 kHz audio") {
    const auto stack = toy.extract_stack(sine_wave(440.0, 1.0, 16000));
    CHECK(stack.frame_rate == doctest::Approx(50.0));
    const auto frames = stack.layers.front().rows();
    CHECK(frames >= 49);  // 50 +- 1 boundary frame
    CHECK(frames <= 51);
  }
  SUBCASE("short input still yields one padded frame") {
    Waveform wav;
    wav.sample_rate = 16000;
    wav.samples.assign(10, 0.1);
    const auto stack = toy.extract_stack(wav);
    CHECK(stack.layers.front().rows() == 1);
  }
  SUBCASE("zero-length waveform is an error") {
    Waveform wav;
    wav.sample_rate = 16000;
    CHECK_THROWS_AS(toy.extract_stack(wav), Error);
  }
}

TEST_CASE("toy extractor output is bit-identical across runs and instances") {
  const Waveform wav = noise_wave(0.5, 16000, 77);
  ToyExtractor a(16, 3, 9);
  ToyExtractor b(16, 3, 9);
  const auto stack_a1 = a.extract_stack(wav);
  const auto stack_a2 = a.extract_stack(wav);
  const auto stack_b = b.extract_stack(wav);
  REQUIRE(stack_a1.layers.size() == 3);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(stack_a1.layers[l] == stack_a2.layers[l]);  // exact
    CHECK(stack_a1.layers[l] == stack_b.layers[l]);
  }
}

TEST_CASE("toy extractor stack shape and finiteness") {
  ToyExtractor toy(24, 3, 5);
  const auto stack = toy.extract_stack(sine_wave(300.0, 0.4, 16000));
  REQUIRE(stack.num_layers() == 3);
  for (const auto& layer : stack.layers) {
    CHECK(layer.rows() == stack.layers.front().rows());
    CHECK(layer.cols() == 24);
    CHECK(layer.allFinite());
  }

  SUBCASE("silence maps to finite features") {
    Waveform silence;
    silence.sample_rate = 16000;
    silence.samples.assign(8000, 0.0);
    const auto s = toy.extract_stack(silence);
    for (const auto& layer : s.layers) CHECK(layer.allFinite());
  }

  SUBCASE("semantic view is the final layer") {
    const auto sem = toy.extract_semantic(sine_wave(300.0, 0.4, 16000));
    CHECK(sem.frames == stack.layers.back());
  }
}

TEST_CASE("different toy seeds give different projections") {
  const Waveform wav = sine_wave(500.0, 0.3, 16000);
  ToyExtractor a(8, 2, 1);
  ToyExtractor b(8, 2, 2);
  CHECK(a.extract_stack(wav).layers[0] != b.extract_stack(wav).layers[0]);
}

TEST_CASE("softmax_weights") {
  SUBCASE("uniform raw gives uniform weights") {
    const Eigen::VectorXd w = softmax_weights(Eigen::VectorXd::Zero(4));
    for (int i = 0; i < 4; ++i) CHECK(w[i] == doctest::Approx(0.25));
  }
  SUBCASE("normalized for any magnitude") {
    Eigen::VectorXd raw(3);
    for (double scale : {1.0, 50.0, 700.0, -700.0}) {
      raw << scale, -scale, scale / 2.0;
      const Eigen::VectorXd w = softmax_weights(raw);
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) {
        CHECK(w[i] >= 0.0);
        sum += w[i];
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("aggregate_layers") {
  auto make_stack = [](std::initializer_list<double> fills, Eigen::Index t,
                       Eigen::Index d) {
    LayerStack stack;
    stack.frame_rate = 50.0;
    for (double v : fills) {
      stack.layers.push_back(Eigen::MatrixXd::Constant(t, d, v));
    }
    return stack;
  };

  SUBCASE("single layer passes through for any raw weight") {
    LayerStack stack = make_stack({0.7}, 4, 3);
    for (double raw : {-3.0, 0.0, 12.0}) {
      LayerWeights w{Eigen::VectorXd::Constant(1, raw)};
      const auto out = aggregate_layers(stack, w);
      CHECK(out.frames == stack.layers[0]);
    }
  }

  SUBCASE("identical layers and equal raw weights reproduce the layer") {
    LayerStack stack = make_stack({1.25, 1.25, 1.25}, 5, 2);
    LayerWeights w{Eigen::VectorXd::Constant(3, 0.4)};
    const auto out = aggregate_layers(stack, w);
    CHECK((out.frames - stack.layers[0]).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("two layers with zero raw mix half and half") {
    Rng rng(3);
    LayerStack stack;
    stack.frame_rate = 50.0;
    Eigen::MatrixXd a(3, 4), b(3, 4);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a(i / 4, i % 4) = rng.uniform(-1.0, 1.0);
      b(i / 4, i % 4) = rng.uniform(-1.0, 1.0);
    }
    stack.layers = {a, b};
    LayerWeights w{Eigen::VectorXd::Zero(2)};
    const auto out = aggregate_layers(stack, w);
    CHECK((out.frames - 0.5 * (a + b)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("linear in the stack for fixed weights") {
    Rng rng(4);
    auto random_stack = [&rng](double scale) {
      LayerStack stack;
      stack.frame_rate = 50.0;
      for (int l = 0; l < 3; ++l) {
        Eigen::MatrixXd m(4, 5);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = scale * rng.uniform(-1.0, 1.0);
          }
        }
        stack.layers.push_back(m);
      }
      return stack;
    };
    const LayerStack s1 = random_stack(1.0);
    const LayerStack s2 = random_stack(2.0);
    LayerWeights w{Eigen::VectorXd::Zero(3)};
    w.raw << 0.3, -0.8, 1.1;

    const double alpha = 0.7, beta = -1.3;
    LayerStack combo;
    combo.frame_rate = 50.0;
    for (int l = 0; l < 3; ++l) {
      combo.layers.push_back(alpha * s1.layers[static_cast<std::size_t>(l)] +
                             beta * s2.layers[static_cast<std::size_t>(l)]);
    }
    const Eigen::MatrixXd lhs = aggregate_layers(combo, w).frames;
    const Eigen::MatrixXd rhs = alpha * aggregate_layers(s1, w).frames +
                                beta * aggregate_layers(s2, w).frames;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-6);
  }

  SUBCASE("shape and weight-count mismatches are errors") {
    LayerStack stack = make_stack({1.0, 2.0}, 4, 3);
    LayerWeights wrong_count{Eigen::VectorXd::Zero(3)};
    CHECK_THROWS_AS(aggregate_layers(stack, wrong_count), Error);

    stack.layers[1] = Eigen::MatrixXd::Zero(5, 3);
    LayerWeights w{Eigen::VectorXd::Zero(2)};
    CHECK_THROWS_AS(aggregate_layers(stack, w), Error);
  }
}

TEST_CASE("align_lengths") {
  auto seq = [](Eigen::Index t, double rate) {
    FeatureSequence s;
    s.frames = Eigen::MatrixXd::Random(t, 3);
    s.frame_rate = rate;
    return s;
  };

  SUBCASE("off-by-one truncates to the shorter") {
    auto a = seq(100, 50.0);
    auto b = seq(99, 50.0);
    align_lengths(a, b);
    CHECK(a.num_frames() == 99);
    CHECK(b.num_frames() == 99);
  }
  SUBCASE("equal lengths are untouched") {
    auto a = seq(10, 50.0);
    auto b = seq(10, 50.0);
    const Eigen::MatrixXd before = a.frames;
    align_lengths(a, b);
    CHECK(a.frames == before);
  }
  SUBCASE("minimum rules") {
    auto a = seq(1, 50.0);
    auto b = seq(5, 50.0);
    align_lengths(a, b);
    CHECK(a.num_frames() == 1);
    CHECK(b.num_frames() == 1);
  }
  SUBCASE("frame-rate mismatch is an error") {
    auto a = seq(10, 50.0);
    auto b = seq(10, 49.0);
    CHECK_THROWS_AS(align_lengths(a, b), Error);
  }
}

TEST_CASE("WAV io round-trip") {
  TempDir dir;
  const Waveform wav = sine_wave(440.0, 0.25, 16000);
  const std::string path = dir.file("tone.wav");
  write_wav_mono16(path, wav);
  const Waveform back = read_wav_mono16(path);
  CHECK(back.sample_rate == 16000);
  REQUIRE(back.samples.size() == wav.samples.size());
  double max_err = 0.0;
  for (std::size_t i = 0; i < wav.samples.size(); ++i) {
    max_err = std::max(max_err, std::abs(back.samples[i] - wav.samples[i]));
  }
  CHECK(max_err < 1.0 / 32000.0);

  SUBCASE("missing and malformed files are errors") {
    CHECK_THROWS_AS(read_wav_mono16(dir.file("missing.wav")), Error);
    testutil::write_text(dir.file("junk.wav"), "definitely not a wav file");
    CHECK_THROWS_AS(read_wav_mono16(dir.file("junk.wav")), Error);
  }
}

TEST_CASE("linear resampler") {
  const Waveform wav = sine_wave(100.0, 0.5, 16000);
  const Waveform down = resample_linear(wav, 8000);
  CHECK(down.sample_rate == 8000);
  CHECK(down.samples.size() == doctest::Approx(wav.samples.size() / 2.0).epsilon(0.01));

  Waveform flat;
  flat.sample_rate = 16000;
  flat.samples.assign(1600, 0.25);
  const Waveform re = resample_linear(flat, 22050);
  for (double s : re.samples) CHECK(s == doctest::Approx(0.25));
}

TEST_CASE("extractor registry") {
  const auto toy = make_extractor("toy:dim=16,layers=2,seed=5");
  CHECK(toy->feature_dim() == 16);
  CHECK(toy->num_layers() == 2);
  CHECK(toy->name() == "toy:dim=16,layers=2,seed=5");

  CHECK_THROWS_AS(make_extractor("wavlm-base"), Error);
  CHECK_THROWS_AS(make_extractor("toy:bogus=1"), Error);

  SUBCASE("role defaults keep the two branches distinct") {
    const BackbonePair pair = make_backbones("toy", "toy");
    CHECK(pair.semantic->name() != pair.acoustic->name());
    const Waveform wav = sine_wave(250.0, 0.3, 16000);
    CHECK(pair.semantic->extract_semantic(wav).frames !=
          pair.acoustic->extract_semantic(wav).frames);
  }
  SUBCASE("explicit seed wins over the role default") {
    const BackbonePair pair = make_backbones("toy:seed=4", "toy:seed=4");
    CHECK(pair.semantic->name() == pair.acoustic->name());
  }
}
