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

#include "vqcl/data.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "vqcl/errors.h"
#include "vqcl/random.h"

namespace vqcl {
namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // line on which the record starts
};

class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  // Next non-comment, non-blank record, or nullopt at end of input.
  std::optional<Record> Next() {
    while (true) {
      int c = in_.peek();
      if (c == std::char_traits<char>::eof()) return std::nullopt;
      if (c == '#') {
        std::string skip;
        std::getline(in_, skip);
        ++line_;
        continue;
      }
      if (c == '\n' || c == '\r') {
        std::string skip;
        std::getline(in_, skip);
        ++line_;
        continue;
      }
      return ReadRecord();
    }
  }

  const std::string& source() const { return source_; }

 private:
  Record ReadRecord() {
    Record rec;
    rec.line = ++line_;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    while (true) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        if (quoted) {
          throw ParseError(source_ + ":" + std::to_string(rec.line) +
                           ": unterminated quoted field");
        }
        rec.fields.push_back(std::move(field));
        return rec;
      }
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == '"' && field.empty() && !was_quoted) {
        quoted = true;
        was_quoted = true;
      } else if (ch == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (ch == '\n') {
        rec.fields.push_back(std::move(field));
        return rec;
      } else if (ch == '\r') {
        if (in_.peek() == '\n') continue;
        rec.fields.push_back(std::move(field));
        return rec;
      } else {
        field.push_back(ch);
      }
    }
  }

  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

double ParseDouble(const std::string& text, const std::string& where) {
  if (text.empty()) throw ParseError(where + ": empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ParseError(where + ": invalid number '" + text + "'");
  }
  return v;
}

bool NeedsQuoting(const std::string& s) {
  if (!s.empty() && s.front() == '#') return true;
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

void WriteField(std::ostream& out, const std::string& s) {
  if (!NeedsQuoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (const char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

double Percentile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

void Dataset::Validate() const {
  for (const auto& ex : examples) {
    if (ex.features.size() != feature_dim) {
      throw ShapeError("example '" + ex.id + "' has " +
                       std::to_string(ex.features.size()) +
                       " features, dataset declares " +
                       std::to_string(feature_dim));
    }
    if (ex.label != 0 && ex.label != 1) {
      throw DomainError("example '" + ex.id + "' has non-binary label " +
                        std::to_string(ex.label));
    }
  }
}

Dataset ReadCsv(std::istream& in, const std::string& source) {
  CsvReader reader(in, source);
  const auto header = reader.Next();
  if (!header) throw DomainError(source + ": empty file");
  const auto& cols = header->fields;
  if (cols.size() < 3 || cols[0] != "id" || cols[1] != "label") {
    throw ParseError(source + ":" + std::to_string(header->line) +
                     ": header must start with id,label and name at least "
                     "one feature column");
  }
  Dataset ds;
  ds.has_sentences = cols[2] == "sentence";
  const std::size_t first_feature = ds.has_sentences ? 3 : 2;
  if (cols.size() <= first_feature) {
    throw ParseError(source + ":" + std::to_string(header->line) +
                     ": header has no feature columns");
  }
  ds.feature_dim = cols.size() - first_feature;

  while (auto rec = reader.Next()) {
    const std::string where = source + ":" + std::to_string(rec->line);
    if (rec->fields.size() != cols.size()) {
      throw ParseError(where + ": expected " + std::to_string(cols.size()) +
                       " fields (" + std::to_string(ds.feature_dim) +
                       " features), got " + std::to_string(rec->fields.size()));
    }
    LabeledExample ex;
    ex.id = rec->fields[0];
    const std::string& label = rec->fields[1];
    if (label == "0") {
      ex.label = 0;
    } else if (label == "1") {
      ex.label = 1;
    } else {
      throw ParseError(where + ": label must be 0 or 1, got '" + label + "'");
    }
    if (ds.has_sentences) ex.sentence = rec->fields[2];
    ex.features.reserve(ds.feature_dim);
    for (std::size_t c = first_feature; c < rec->fields.size(); ++c) {
      ex.features.push_back(ParseDouble(rec->fields[c], where));
    }
    ds.examples.push_back(std::move(ex));
  }
  if (ds.examples.empty()) throw DomainError(source + ": no data rows");
  return ds;
}

Dataset LoadCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return ReadCsv(in, path.string());
}

void WriteCsv(const Dataset& dataset, std::ostream& out,
              const std::vector<std::string>& comment) {
  dataset.Validate();
  for (const auto& line : comment) out << "# " << line << '\n';
  out << "id,label";
  if (dataset.has_sentences) out << ",sentence";
  for (std::size_t j = 0; j < dataset.feature_dim; ++j) out << ",f" << j;
  out << '\n';
  char buf[32];
  for (const auto& ex : dataset.examples) {
    WriteField(out, ex.id);
    out << ',' << ex.label;
    if (dataset.has_sentences) {
      out << ',';
      WriteField(out, ex.sentence.value_or(""));
    }
    for (const double v : ex.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void SaveCsv(const Dataset& dataset, const std::filesystem::path& path,
             const std::vector<std::string>& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  WriteCsv(dataset, out, comment);
  if (!out) throw Error("write failed for " + path.string());
}

Dataset Synthesize(std::size_t n_per_class, std::size_t dim, double separation,
                   std::uint64_t seed) {
  if (dim < 2) throw DomainError("synthetic dimension must be >= 2");
  if (n_per_class < 1) throw DomainError("need at least one example per class");
  if (!(separation > 0) || !std::isfinite(separation)) {
    throw DomainError("separation must be positive and finite");
  }
  std::normal_distribution<double> normal(0.0, 1.0);

  Rng dir_rng(DeriveSeed(seed, "direction"));
  std::vector<double> u(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& v : u) {
      v = normal(dir_rng);
      norm2 += v * v;
    }
  } while (norm2 == 0.0);
  const double norm = std::sqrt(norm2);
  for (double& v : u) v /= norm;

  Rng rng(DeriveSeed(seed, "samples"));
  Dataset ds;
  ds.feature_dim = dim;
  ds.examples.reserve(2 * n_per_class);
  const double half = separation / 2;
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    LabeledExample ex;
    ex.label = static_cast<int>(i % 2);
    const double sign = ex.label == 1 ? 1.0 : -1.0;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06zu", i);
    ex.id = id;
    ex.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      ex.features[j] = sign * half * u[j] + normal(rng);
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

DatasetStats ComputeStats(const Dataset& dataset) {
  if (dataset.empty()) throw DomainError("statistics of an empty dataset");
  dataset.Validate();
  DatasetStats st;
  st.count = dataset.size();
  st.feature_dim = dataset.feature_dim;
  std::vector<double> mean(dataset.feature_dim, 0.0);
  std::vector<double> m2(dataset.feature_dim, 0.0);
  std::vector<double> norms;
  norms.reserve(dataset.size());
  std::size_t k = 0;
  for (const auto& ex : dataset.examples) {
    ++k;
    (ex.label == 1 ? st.label1 : st.label0)++;
    double norm2 = 0.0;
    for (std::size_t j = 0; j < ex.features.size(); ++j) {
      const double x = ex.features[j];
      const double delta = x - mean[j];
      mean[j] += delta / static_cast<double>(k);
      m2[j] += delta * (x - mean[j]);
      norm2 += x * x;
    }
    norms.push_back(std::sqrt(norm2));
  }
  st.class_balance =
      static_cast<double>(st.label1) / static_cast<double>(st.count);
  st.feature_mean = std::move(mean);
  st.feature_std.resize(dataset.feature_dim);
  for (std::size_t j = 0; j < dataset.feature_dim; ++j) {
    st.feature_std[j] = std::sqrt(std::max(0.0, m2[j] / static_cast<double>(k)));
  }
  std::sort(norms.begin(), norms.end());
  st.norm = {Percentile(norms, 0.0), Percentile(norms, 0.25),
             Percentile(norms, 0.5), Percentile(norms, 0.75),
             Percentile(norms, 1.0)};
  return st;
}

nlohmann::json StatsToJson(const DatasetStats& stats) {
  return {
      {"count", stats.count},
      {"feature_dim", stats.feature_dim},
      {"label0", stats.label0},
      {"label1", stats.label1},
      {"class_balance", stats.class_balance},
      {"feature_mean", stats.feature_mean},
      {"feature_std", stats.feature_std},
      {"norm_percentiles",
       {{"p0", stats.norm.p0},
        {"p25", stats.norm.p25},
        {"p50", stats.norm.p50},
        {"p75", stats.norm.p75},
        {"p100", stats.norm.p100}}},
  };
}

std::vector<double> FeatureMean(const Dataset& dataset) {
  return ComputeStats(dataset).feature_mean;
}

}  // namespace vqcl
