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

#include "vqcl/run_config.h"

#include <cmath>
#include <fstream>
#include <set>

#include "vqcl/errors.h"

namespace vqcl {
namespace {

using nlohmann::json;

void RejectUnknown(const json& obj, const std::string& where,
                   const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown config key '" + where + "." + key + "'");
    }
  }
}

template <typename T>
void Take(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + "." + key +
                      "' has the wrong type");
  }
}

}  // namespace

void RunConfig::Merge(const json& doc) {
  RejectUnknown(doc, "config", {"encoding", "ansatz", "train", "paths"});
  try {
    if (doc.contains("encoding")) {
      const json& e = doc["encoding"];
      RejectUnknown(e, "encoding", {"feature_dim", "pad_value", "order"});
      if (e.contains("feature_dim")) {
        std::size_t n = 0;
        Take(e, "feature_dim", n, "encoding");
        feature_dim = n;
      }
      Take(e, "pad_value", pad_value, "encoding");
      if (e.contains("order")) {
        std::string s;
        Take(e, "order", s, "encoding");
        pad_order = ParsePadOrder(s);
      }
    }
    if (doc.contains("ansatz")) {
      const json& a = doc["ansatz"];
      RejectUnknown(a, "ansatz", {"num_qubits", "num_layers", "axis"});
      if (a.contains("num_qubits")) {
        int n = 0;
        Take(a, "num_qubits", n, "ansatz");
        num_qubits = n;
      }
      Take(a, "num_layers", num_layers, "ansatz");
      if (a.contains("axis")) {
        std::string s;
        Take(a, "axis", s, "ansatz");
        axis = ParseAxis(s);
      }
    }
    if (doc.contains("train")) {
      const json& t = doc["train"];
      RejectUnknown(t, "train",
                    {"batch_size", "epochs", "learning_rate", "seed", "shuffle",
                     "freeze_circuit", "threads"});
      Take(t, "batch_size", train.batch_size, "train");
      Take(t, "epochs", train.epochs, "train");
      Take(t, "learning_rate", train.learning_rate, "train");
      Take(t, "seed", train.seed, "train");
      Take(t, "shuffle", train.shuffle, "train");
      Take(t, "freeze_circuit", train.freeze_circuit, "train");
      Take(t, "threads", train.threads, "train");
    }
    if (doc.contains("paths")) {
      const json& p = doc["paths"];
      RejectUnknown(p, "paths", {"train", "val", "test", "checkpoint", "history"});
      Take(p, "train", train_path, "paths");
      Take(p, "val", val_path, "paths");
      Take(p, "test", test_path, "paths");
      Take(p, "checkpoint", checkpoint_path, "paths");
      Take(p, "history", history_path, "paths");
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

json RunConfig::ToJson() const {
  json enc = {{"pad_value", pad_value}, {"order", PadOrderName(pad_order)}};
  if (feature_dim) enc["feature_dim"] = *feature_dim;
  json ans = {{"num_layers", num_layers}, {"axis", AxisName(axis)}};
  if (num_qubits) ans["num_qubits"] = *num_qubits;
  return {
      {"encoding", enc},
      {"ansatz", ans},
      {"train",
       {{"batch_size", train.batch_size},
        {"epochs", train.epochs},
        {"learning_rate", train.learning_rate},
        {"seed", train.seed},
        {"shuffle", train.shuffle},
        {"freeze_circuit", train.freeze_circuit},
        {"threads", train.threads}}},
      {"paths",
       {{"train", train_path},
        {"val", val_path},
        {"test", test_path},
        {"checkpoint", checkpoint_path},
        {"history", history_path}}},
  };
}

EncodingConfig RunConfig::ResolveEncoding(std::size_t data_dim) const {
  if (feature_dim && *feature_dim != data_dim) {
    throw ConfigError("config pins feature_dim " + std::to_string(*feature_dim) +
                      " but the data has " + std::to_string(data_dim) +
                      " features");
  }
  EncodingConfig enc{data_dim, pad_value, pad_order};
  enc.Validate();
  if (num_qubits && *num_qubits != enc.num_qubits()) {
    throw ConfigError("config pins " + std::to_string(*num_qubits) +
                      " qubits but " + std::to_string(data_dim) +
                      " features encode into " +
                      std::to_string(enc.num_qubits()));
  }
  return enc;
}

void RunConfig::Validate() const {
  try {
    train.Validate();
    if (num_layers < 1) throw DomainError("num_layers must be >= 1");
    if (!std::isfinite(pad_value)) throw DomainError("pad_value must be finite");
    if (feature_dim && *feature_dim < 1) throw DomainError("feature_dim must be >= 1");
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  RunConfig cfg;
  cfg.Merge(doc);
  return cfg;
}

}  // namespace vqcl
