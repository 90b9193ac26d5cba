// src/checkpoint.cc
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

#include "pairsqa/checkpoint.h"

#include <fstream>

#include "pairsqa/common.h"

namespace pairsqa {

namespace {
constexpr const char* kSchemaId = "pairsqa.checkpoint";
}

Checkpoint Checkpoint::from_model(const ScoringModel& model,
                                  const std::string& semantic_backbone,
                                  const std::string& acoustic_backbone) {
  Checkpoint ckpt;
  ckpt.architecture = model.architecture();
  ckpt.model_config = model.config_json();
  ckpt.semantic_backbone = semantic_backbone;
  ckpt.acoustic_backbone = acoustic_backbone;
  ckpt.tensors = model.save_tensors();
  return ckpt;
}

void Checkpoint::save(const std::string& path) const {
  nlohmann::json j;
  j["schema"] = kSchemaId;
  j["version"] = kSchemaVersion;
  j["architecture"] = architecture;
  j["model_config"] = model_config;
  j["semantic_backbone"] = semantic_backbone;
  j["acoustic_backbone"] = acoustic_backbone;
  j["seed"] = seed;
  j["dev_srcc"] = dev_srcc;
  j["label_condition"] = label_condition;
  j["scenario"] = scenario;
  j["best_epoch"] = best_epoch;
  j["tensors"] = tensors;

  const std::vector<std::uint8_t> bytes = nlohmann::json::to_msgpack(j);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), "cannot write checkpoint: ", path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  require(out.good(), "short write to checkpoint: ", path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open checkpoint: ", path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::from_msgpack(bytes);
  } catch (const nlohmann::json::exception& e) {
    fail("corrupt checkpoint ", path, ": ", e.what());
  }
  require(j.value("schema", "") == kSchemaId, "file ", path,
          " is not a checkpoint archive");
  const int version = j.value("version", -1);
  require(version == kSchemaVersion, "checkpoint ", path, " has schema version ",
          version, "; this build reads version ", kSchemaVersion);

  Checkpoint ckpt;
  ckpt.architecture = j.at("architecture").get<std::string>();
  ckpt.model_config = j.at("model_config");
  ckpt.semantic_backbone = j.at("semantic_backbone").get<std::string>();
  ckpt.acoustic_backbone = j.at("acoustic_backbone").get<std::string>();
  ckpt.seed = j.at("seed").get<std::uint64_t>();
  ckpt.dev_srcc = j.at("dev_srcc").get<double>();
  ckpt.label_condition = j.value("label_condition", "");
  ckpt.scenario = j.value("scenario", "");
  ckpt.best_epoch = j.value("best_epoch", 0);
  ckpt.tensors = j.at("tensors");
  return ckpt;
}

std::unique_ptr<ScoringModel> Checkpoint::instantiate() const {
  auto backbones = make_backbones(semantic_backbone, acoustic_backbone);
  auto model = make_scoring_model(architecture, model_config,
                                  backbones.semantic, backbones.acoustic);
  model->load_tensors(tensors);
  return model;
}

}  // namespace pairsqa
