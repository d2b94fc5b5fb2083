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

#ifndef VQCL_EXPLAIN_H_
#define VQCL_EXPLAIN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vqcl/data.h"
#include "vqcl/model.h"

namespace vqcl {

// Exact enumeration visits 2^m coalitions.
inline constexpr int kMaxExactGroups = 20;
inline constexpr int kMinShapleySamples = 100;

struct FeatureGroup {
  std::string name;
  std::vector<std::size_t> indices;

  bool operator==(const FeatureGroup&) const = default;
};

// k contiguous blocks of (almost) equal size covering [0, feature_dim).
std::vector<FeatureGroup> EqualBlockGroups(std::size_t feature_dim, int k);

// Throws DomainError unless the groups partition [0, feature_dim).
void ValidateGroups(std::span<const FeatureGroup> groups,
                    std::size_t feature_dim);

// Token-aligned groups written by the embedding extractor:
//   [{"id": "...", "tokens": [{"text": "Il", "start": 0, "end": 96}, ...]}]
// Spans are half-open feature-index ranges. Returns the groups of `id`.
std::vector<FeatureGroup> TokenGroupsFromJson(const nlohmann::json& doc,
                                              std::string_view id);
std::vector<FeatureGroup> LoadTokenGroups(const std::filesystem::path& path,
                                          std::string_view id);

enum class ShapleyMethod { kExact, kSampled };
std::string_view ShapleyMethodName(ShapleyMethod method);
ShapleyMethod ParseShapleyMethod(std::string_view name);

// Scalar model output being explained.
using ValueFunction = std::function<double(std::span<const double>)>;

// Probability of class 1 ("acceptable").
ValueFunction ClassOneProbability(const HybridModel& model);

struct AttributionRequest {
  LabeledExample example;
  std::vector<FeatureGroup> groups;
  std::vector<double> baseline;
  ShapleyMethod method = ShapleyMethod::kExact;
  int samples = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  // Dendrogram profiles: attributions recomputed on `replicates` copies of
  // the example with Gaussian noise of scale
  // perturbation * ||x - baseline|| / sqrt(N) added to every feature.
  int replicates = 8;
  double perturbation = 0.05;

  void Validate() const;
};

// Binary merge tree. Nodes [0, m) are leaves (node i is group i); merges
// append internal nodes, the last node is the root.
struct DendrogramNode {
  int left = -1;
  int right = -1;
  double height = 0.0;
  std::vector<int> members;  // group indices under this node, ascending
  double phi_sum = 0.0;

  bool is_leaf() const { return left < 0; }
  bool operator==(const DendrogramNode&) const = default;
};

struct Dendrogram {
  std::vector<DendrogramNode> nodes;

  std::size_t num_leaves() const { return (nodes.size() + 1) / 2; }
  int root() const { return static_cast<int>(nodes.size()) - 1; }
  bool operator==(const Dendrogram&) const = default;
};

// UPGMA on a symmetric distance matrix (row-major m x m). Ties go to the pair
// whose lowest leaf indices are lexicographically smallest. Throws
// DomainError for m < 2 or a malformed matrix.
Dendrogram AverageLinkage(std::span<const double> distances, std::size_t m);

// Average linkage over the distance 1 - |corr| between the rows of
// `profiles` (m rows of r attribution values). Rows with zero variance have
// correlation 0 with everything. Leaves' phi_sum comes from `phi`.
Dendrogram ClusterDendrogram(const std::vector<std::vector<double>>& profiles,
                             std::span<const double> phi);

// Fills phi_sum of every node from per-group values.
void AssignPhiSums(Dendrogram& dendrogram, std::span<const double> phi);

struct AttributionReport {
  std::string example_id;
  ShapleyMethod method = ShapleyMethod::kExact;
  double base_value = 0.0;  // f(baseline)
  double fx = 0.0;          // f(example)
  std::vector<FeatureGroup> groups;
  std::vector<double> phi;
  std::vector<double> std_errors;  // sampled mode only, else empty
  Dendrogram dendrogram;
};

// Exact Shapley values over the groups with baseline-replacement masking.
// Throws CapacityError above kMaxExactGroups groups. The dendrogram is left
// empty.
AttributionReport ShapleyExact(const ValueFunction& f,
                               const AttributionRequest& request);

// Permutation-sampling estimate with per-group standard errors.
AttributionReport ShapleySampled(const ValueFunction& f,
                                 const AttributionRequest& request);

// Attribution with the requested method plus the replicate-based dendrogram.
AttributionReport Explain(const ValueFunction& f,
                          const AttributionRequest& request);

inline constexpr int kReportVersion = 1;

// `extra` members (e.g. the effective run configuration) are merged into the
// top-level object.
nlohmann::json ReportToJson(const AttributionReport& report,
                            const nlohmann::json& extra = nullptr);
AttributionReport ReportFromJson(const nlohmann::json& doc);
std::string ReportToDot(const AttributionReport& report);

enum class ReportFormat { kJson, kDot };
ReportFormat ParseReportFormat(std::string_view name);
void ExportReport(const AttributionReport& report,
                  const std::filesystem::path& path, ReportFormat format,
                  const nlohmann::json& extra = nullptr);

}  // namespace vqcl

#endif  // VQCL_EXPLAIN_H_
