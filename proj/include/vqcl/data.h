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

#ifndef VQCL_DATA_H_
#define VQCL_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vqcl {

// Label convention: 1 = acceptable, 0 = not acceptable.
struct LabeledExample {
  std::string id;
  int label = 0;
  std::vector<double> features;
  std::optional<std::string> sentence;

  bool operator==(const LabeledExample&) const = default;
};

struct Dataset {
  std::size_t feature_dim = 0;
  std::vector<LabeledExample> examples;
  // Whether the CSV carried a sentence column; preserved on write.
  bool has_sentences = false;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }

  // Throws ShapeError on ragged features, DomainError on non-binary labels.
  void Validate() const;

  bool operator==(const Dataset&) const = default;
};

// Embedding CSV.
//
// Header: id,label[,sentence],f0,...,f{N-1}. The feature count N is the number
// of columns after id/label/sentence. Fields may be double-quoted (RFC 4180,
// "" escapes a quote, quoted fields may span lines). Lines starting with '#'
// outside a quoted field are comments and are skipped, as are blank lines.
//
// Errors: ParseError (with the 1-based line number) for ragged rows,
// non-binary labels and malformed numbers; DomainError for a file without
// header or data rows.
Dataset ReadCsv(std::istream& in, const std::string& source = "<stream>");
Dataset LoadCsv(const std::filesystem::path& path);

// Features are written with 17 significant digits so ReadCsv(WriteCsv(d))
// reproduces d exactly. `comment` lines are emitted first, each prefixed "# ".
void WriteCsv(const Dataset& dataset, std::ostream& out,
              const std::vector<std::string>& comment = {});
void SaveCsv(const Dataset& dataset, const std::filesystem::path& path,
             const std::vector<std::string>& comment = {});

// Two unit-variance isotropic Gaussian clusters centred at -(separation/2) u
// (label 0) and +(separation/2) u (label 1) for a seeded random unit vector u.
// Examples alternate 0, 1, 0, 1, ...; ids are "syn-<index>".
Dataset Synthesize(std::size_t n_per_class, std::size_t dim, double separation,
                   std::uint64_t seed);

struct NormPercentiles {
  double p0 = 0, p25 = 0, p50 = 0, p75 = 0, p100 = 0;
};

struct DatasetStats {
  std::size_t count = 0;
  std::size_t feature_dim = 0;
  std::size_t label0 = 0;
  std::size_t label1 = 0;
  // Fraction of examples labelled 1.
  double class_balance = 0.0;
  // Per-feature mean and population standard deviation.
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  // L2 norms of the feature vectors, linear interpolation between ranks.
  NormPercentiles norm;
};

// Single pass (Welford) moments. Throws DomainError on an empty dataset.
DatasetStats ComputeStats(const Dataset& dataset);
nlohmann::json StatsToJson(const DatasetStats& stats);

// Per-feature mean over the dataset, the default attribution baseline.
std::vector<double> FeatureMean(const Dataset& dataset);

}  // namespace vqcl

#endif  // VQCL_DATA_H_
