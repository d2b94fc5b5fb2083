// Copyright 2026 The VQCL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VQCL_RUN_CONFIG_H_
#define VQCL_RUN_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "vqcl/encoding.h"
#include "vqcl/model.h"
#include "vqcl/statevector.h"

namespace vqcl {

// Everything a run needs, loadable from one JSON file:
//
//   {"encoding": {"feature_dim", "pad_value", "order"},
//    "ansatz":   {"num_qubits", "num_layers", "axis"},
//    "train":    {"batch_size", "epochs", "learning_rate", "seed", "shuffle",
//                 "freeze_circuit", "threads"},
//    "paths":    {"train", "val", "test", "checkpoint", "history"}}
//
// Every section and key is optional; unknown ones are rejected.
// feature_dim and num_qubits default to whatever the data implies.
struct RunConfig {
  std::optional<std::size_t> feature_dim;
  double pad_value = kDefaultPadValue;
  PadOrder pad_order = PadOrder::kPadThenNormalize;

  std::optional<int> num_qubits;
  int num_layers = 6;
  Axis axis = Axis::kX;

  TrainConfig train;

  std::string train_path;
  std::string val_path;
  std::string test_path;
  std::string checkpoint_path;
  std::string history_path;

  // Overlays the keys present in `doc`. Throws ConfigError on unknown keys or
  // wrongly typed values.
  void Merge(const nlohmann::json& doc);
  nlohmann::json ToJson() const;

  // Encoding for data of width `data_dim`, checked against the optional
  // feature_dim / num_qubits pins. Throws ConfigError on a mismatch.
  EncodingConfig ResolveEncoding(std::size_t data_dim) const;

  void Validate() const;
};

RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace vqcl

#endif  // VQCL_RUN_CONFIG_H_
