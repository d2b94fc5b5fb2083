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

#include "vqcl/explain.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "vqcl/errors.h"
#include "vqcl/parallel.h"
#include "vqcl/random.h"

namespace vqcl {
namespace {

constexpr char kReportNote[] =
    "Shapley values over embedding-feature groups with single-baseline "
    "replacement; the attribution target is P(class 1). This is not "
    "token-level attribution inside the language model.";

// Example features for groups in `mask`, baseline elsewhere.
void MaskedInput(const AttributionRequest& req, std::uint64_t mask,
                 std::span<const double> x, std::vector<double>& out) {
  out.assign(req.baseline.begin(), req.baseline.end());
  for (std::size_t g = 0; g < req.groups.size(); ++g) {
    if (!(mask >> g & 1)) continue;
    for (const std::size_t j : req.groups[g].indices) out[j] = x[j];
  }
}

// 1 / (m * C(m-1, s)) == s! (m-s-1)! / m!
std::vector<double> ShapleyWeights(int m) {
  std::vector<double> w(m);
  for (int s = 0; s < m; ++s) {
    double binom = 1.0;
    for (int k = 1; k <= s; ++k) binom = binom * (m - 1 - s + k) / k;
    w[s] = 1.0 / (m * binom);
  }
  return w;
}

double Correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t r = a.size();
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < r; ++k) ma += a[k], mb += b[k];
  ma /= static_cast<double>(r);
  mb /= static_cast<double>(r);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < r; ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

nlohmann::json NodeToJson(const Dendrogram& d, int id) {
  const DendrogramNode& node = d.nodes[id];
  if (node.is_leaf()) return {{"leaf", id}};
  return {{"left", NodeToJson(d, node.left)},
          {"right", NodeToJson(d, node.right)},
          {"height", node.height},
          {"phi_sum", node.phi_sum}};
}

// Rebuilds the node table from nested JSON; leaves keep their group index.
int NodeFromJson(const nlohmann::json& j, Dendrogram& d, std::size_t m) {
  if (j.contains("leaf")) {
    const int leaf = j.at("leaf").get<int>();
    if (leaf < 0 || static_cast<std::size_t>(leaf) >= m) {
      throw ParseError("dendrogram leaf index out of range");
    }
    return leaf;
  }
  DendrogramNode node;
  node.left = NodeFromJson(j.at("left"), d, m);
  node.right = NodeFromJson(j.at("right"), d, m);
  node.height = j.at("height").get<double>();
  node.phi_sum = j.at("phi_sum").get<double>();
  node.members = d.nodes[node.left].members;
  const auto& rm = d.nodes[node.right].members;
  node.members.insert(node.members.end(), rm.begin(), rm.end());
  std::sort(node.members.begin(), node.members.end());
  d.nodes.push_back(std::move(node));
  return static_cast<int>(d.nodes.size()) - 1;
}

std::string FormatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string DotEscape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

const char* SignColor(double v) {
  if (v > 0) return "#ff7f0e";  // orange: pushes towards class 1
  if (v < 0) return "#2ca02c";  // green: pushes towards class 0
  return "#7f7f7f";
}

const char* SignClass(double v) {
  if (v > 0) return "positive";
  if (v < 0) return "negative";
  return "neutral";
}

}  // namespace

std::vector<FeatureGroup> EqualBlockGroups(std::size_t feature_dim, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > feature_dim) {
    throw DomainError("cannot split " + std::to_string(feature_dim) +
                      " features into " + std::to_string(k) + " groups");
  }
  std::vector<FeatureGroup> groups(k);
  const std::size_t base = feature_dim / k;
  const std::size_t extra = feature_dim % k;
  std::size_t start = 0;
  for (int g = 0; g < k; ++g) {
    const std::size_t len = base + (static_cast<std::size_t>(g) < extra ? 1 : 0);
    groups[g].name = "f" + std::to_string(start) + "-" +
                     std::to_string(start + len - 1);
    for (std::size_t j = start; j < start + len; ++j) groups[g].indices.push_back(j);
    start += len;
  }
  return groups;
}

void ValidateGroups(std::span<const FeatureGroup> groups,
                    std::size_t feature_dim) {
  if (groups.empty()) throw DomainError("at least one feature group required");
  std::vector<char> seen(feature_dim, 0);
  for (const auto& g : groups) {
    if (g.indices.empty()) throw DomainError("group '" + g.name + "' is empty");
    for (const std::size_t j : g.indices) {
      if (j >= feature_dim) {
        throw DomainError("group '" + g.name + "' references feature " +
                          std::to_string(j) + " beyond dimension " +
                          std::to_string(feature_dim));
      }
      if (seen[j]) {
        throw DomainError("feature " + std::to_string(j) +
                          " appears in more than one group");
      }
      seen[j] = 1;
    }
  }
  const auto missing = std::find(seen.begin(), seen.end(), 0);
  if (missing != seen.end()) {
    throw DomainError("feature " + std::to_string(missing - seen.begin()) +
                      " is not covered by any group");
  }
}

std::vector<FeatureGroup> TokenGroupsFromJson(const nlohmann::json& doc,
                                              std::string_view id) {
  try {
    for (const auto& entry : doc) {
      if (entry.at("id").get<std::string>() != id) continue;
      std::vector<FeatureGroup> groups;
      for (const auto& tok : entry.at("tokens")) {
        FeatureGroup g;
        g.name = tok.at("text").get<std::string>();
        const auto start = tok.at("start").get<std::size_t>();
        const auto end = tok.at("end").get<std::size_t>();
        if (end <= start) throw ParseError("token span is empty");
        for (std::size_t j = start; j < end; ++j) g.indices.push_back(j);
        groups.push_back(std::move(g));
      }
      return groups;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed token-group JSON: ") + e.what());
  }
  throw ParseError("no token groups for example '" + std::string(id) + "'");
}

std::vector<FeatureGroup> LoadTokenGroups(const std::filesystem::path& path,
                                          std::string_view id) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return TokenGroupsFromJson(doc, id);
}

std::string_view ShapleyMethodName(ShapleyMethod method) {
  return method == ShapleyMethod::kExact ? "exact" : "sampled";
}

ShapleyMethod ParseShapleyMethod(std::string_view name) {
  if (name == "exact") return ShapleyMethod::kExact;
  if (name == "sampled") return ShapleyMethod::kSampled;
  throw DomainError("unknown Shapley method '" + std::string(name) + "'");
}

ValueFunction ClassOneProbability(const HybridModel& model) {
  model.Validate();
  return [model](std::span<const double> x) { return HybridForward(x, model)[1]; };
}

void AttributionRequest::Validate() const {
  const std::size_t n = example.features.size();
  if (baseline.size() != n) {
    throw ShapeError("baseline has " + std::to_string(baseline.size()) +
                     " entries, example has " + std::to_string(n));
  }
  ValidateGroups(groups, n);
  if (threads < 1) throw DomainError("threads must be >= 1");
}

AttributionReport ShapleyExact(const ValueFunction& f,
                               const AttributionRequest& request) {
  request.Validate();
  const int m = static_cast<int>(request.groups.size());
  if (m > kMaxExactGroups) {
    throw CapacityError("exact Shapley enumeration supports at most " +
                        std::to_string(kMaxExactGroups) + " groups, got " +
                        std::to_string(m) + "; use the sampled method");
  }
  const std::uint64_t coalitions = std::uint64_t{1} << m;
  std::vector<double> value(coalitions);
  const auto& x = request.example.features;
  ParallelFor(coalitions, request.threads, [&](std::size_t mask) {
    std::vector<double> input;
    MaskedInput(request, mask, x, input);
    value[mask] = f(input);
  });

  const std::vector<double> weight = ShapleyWeights(m);
  AttributionReport report;
  report.example_id = request.example.id;
  report.method = ShapleyMethod::kExact;
  report.groups = request.groups;
  report.base_value = value.front();
  report.fx = value.back();
  report.phi.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double acc = 0.0;
    for (std::uint64_t mask = 0; mask < coalitions; ++mask) {
      if (mask & bit) continue;
      acc += weight[std::popcount(mask)] * (value[mask | bit] - value[mask]);
    }
    report.phi[i] = acc;
  }
  return report;
}

AttributionReport ShapleySampled(const ValueFunction& f,
                                 const AttributionRequest& request) {
  request.Validate();
  if (request.samples < kMinShapleySamples) {
    throw DomainError("sampled Shapley needs at least " +
                      std::to_string(kMinShapleySamples) + " permutations, got " +
                      std::to_string(request.samples));
  }
  const std::size_t m = request.groups.size();
  const auto samples = static_cast<std::size_t>(request.samples);
  const auto& x = request.example.features;

  Rng rng(request.seed);
  std::vector<std::vector<std::size_t>> perms(samples);
  for (auto& perm : perms) {
    perm.resize(m);
    for (std::size_t g = 0; g < m; ++g) perm[g] = g;
    for (std::size_t i = m; i > 1; --i) {
      auto j = static_cast<std::size_t>(UniformUnit(rng) * static_cast<double>(i));
      if (j >= i) j = i - 1;
      std::swap(perm[i - 1], perm[j]);
    }
  }

  const double base_value = f(request.baseline);
  const double fx = f(x);
  // contrib[p * m + g]: marginal contribution of group g in permutation p.
  std::vector<double> contrib(samples * m);
  ParallelFor(samples, request.threads, [&](std::size_t p) {
    std::vector<double> input(request.baseline);
    double prev = base_value;
    for (std::size_t step = 0; step < m; ++step) {
      const std::size_t g = perms[p][step];
      for (const std::size_t j : request.groups[g].indices) input[j] = x[j];
      const double cur = step + 1 == m ? fx : f(input);
      contrib[p * m + g] = cur - prev;
      prev = cur;
    }
  });

  AttributionReport report;
  report.example_id = request.example.id;
  report.method = ShapleyMethod::kSampled;
  report.groups = request.groups;
  report.base_value = base_value;
  report.fx = fx;
  report.phi.assign(m, 0.0);
  report.std_errors.assign(m, 0.0);
  for (std::size_t g = 0; g < m; ++g) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t p = 0; p < samples; ++p) {
      const double v = contrib[p * m + g];
      const double delta = v - mean;
      mean += delta / static_cast<double>(p + 1);
      m2 += delta * (v - mean);
    }
    report.phi[g] = mean;
    const double var = m2 / static_cast<double>(samples - 1);
    report.std_errors[g] = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
  }
  return report;
}

Dendrogram AverageLinkage(std::span<const double> distances, std::size_t m) {
  if (m < 2) throw DomainError("clustering needs at least two groups");
  if (distances.size() != m * m) throw ShapeError("distance matrix is not m x m");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distances[i * m + j];
      if (!std::isfinite(d) || d < 0 || d != distances[j * m + i]) {
        throw DomainError("distance matrix must be finite, non-negative and "
                          "symmetric");
      }
    }
  }
  Dendrogram tree;
  tree.nodes.resize(m);
  for (std::size_t i = 0; i < m; ++i) tree.nodes[i].members = {static_cast<int>(i)};

  // Active clusters: node id, and distances between active clusters keyed by
  // position in `active`.
  std::vector<int> active(m);
  for (std::size_t i = 0; i < m; ++i) active[i] = static_cast<int>(i);
  std::vector<std::vector<double>> dist(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) dist[i][j] = distances[i * m + j];
  }
  auto min_leaf = [&](int node) { return tree.nodes[node].members.front(); };

  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> best_key{0, 0};
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = dist[a][b];
        std::pair<int, int> key{min_leaf(active[a]), min_leaf(active[b])};
        if (key.first > key.second) std::swap(key.first, key.second);
        if (d < best || (d == best && key < best_key)) {
          best = d;
          best_a = a;
          best_b = b;
          best_key = key;
        }
      }
    }
    if (min_leaf(active[best_a]) > min_leaf(active[best_b])) {
      std::swap(best_a, best_b);
    }
    const int left = active[best_a];
    const int right = active[best_b];
    DendrogramNode node;
    node.left = left;
    node.right = right;
    node.height = best;
    node.members = tree.nodes[left].members;
    node.members.insert(node.members.end(), tree.nodes[right].members.begin(),
                        tree.nodes[right].members.end());
    std::sort(node.members.begin(), node.members.end());
    const double na = static_cast<double>(tree.nodes[left].members.size());
    const double nb = static_cast<double>(tree.nodes[right].members.size());
    tree.nodes.push_back(std::move(node));

    // Merged cluster replaces slot best_a; slot best_b is removed.
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == best_a || k == best_b) continue;
      const double d = (na * dist[best_a][k] + nb * dist[best_b][k]) / (na + nb);
      dist[best_a][k] = dist[k][best_a] = d;
    }
    active[best_a] = static_cast<int>(tree.nodes.size()) - 1;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(best_b));
    for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_b));
  }
  return tree;
}

Dendrogram ClusterDendrogram(const std::vector<std::vector<double>>& profiles,
                             std::span<const double> phi) {
  const std::size_t m = profiles.size();
  if (m < 2) throw DomainError("clustering needs at least two groups");
  const std::size_t r = profiles.front().size();
  if (r < 2) throw DomainError("clustering needs at least two replicates");
  for (const auto& row : profiles) {
    if (row.size() != r) throw ShapeError("attribution profiles are ragged");
  }
  if (phi.size() != m) throw ShapeError("phi length differs from group count");
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dist = std::max(0.0, 1.0 - std::abs(Correlation(profiles[i], profiles[j])));
      d[i * m + j] = d[j * m + i] = dist;
    }
  }
  Dendrogram tree = AverageLinkage(d, m);
  AssignPhiSums(tree, phi);
  return tree;
}

void AssignPhiSums(Dendrogram& dendrogram, std::span<const double> phi) {
  for (auto& node : dendrogram.nodes) {
    double s = 0.0;
    for (const int g : node.members) s += phi[g];
    node.phi_sum = s;
  }
}

AttributionReport Explain(const ValueFunction& f,
                          const AttributionRequest& request) {
  request.Validate();
  const auto attribute = [&](const AttributionRequest& req) {
    return req.method == ShapleyMethod::kExact ? ShapleyExact(f, req)
                                               : ShapleySampled(f, req);
  };
  AttributionReport report = attribute(request);
  const std::size_t m = request.groups.size();
  if (m < 2) {
    report.dendrogram.nodes.resize(1);
    report.dendrogram.nodes[0].members = {0};
    AssignPhiSums(report.dendrogram, report.phi);
    return report;
  }
  if (request.replicates < 2) {
    throw DomainError("dendrogram needs at least two replicates");
  }
  if (!(request.perturbation >= 0) || !std::isfinite(request.perturbation)) {
    throw DomainError("perturbation scale must be non-negative");
  }

  const auto& x = request.example.features;
  double dist2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    dist2 += (x[j] - request.baseline[j]) * (x[j] - request.baseline[j]);
  }
  const double sigma = request.perturbation * std::sqrt(dist2 / static_cast<double>(x.size()));
  std::vector<std::vector<double>> profiles(m, std::vector<double>(request.replicates));
  Rng noise_rng(DeriveSeed(request.seed, "replicates"));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < request.replicates; ++k) {
    AttributionRequest rep = request;
    for (double& v : rep.example.features) v += sigma * normal(noise_rng);
    rep.seed = DeriveSeed(request.seed, "replicate-" + std::to_string(k));
    const AttributionReport r = attribute(rep);
    for (std::size_t g = 0; g < m; ++g) profiles[g][k] = r.phi[g];
  }
  report.dendrogram = ClusterDendrogram(profiles, report.phi);
  return report;
}

nlohmann::json ReportToJson(const AttributionReport& report,
                            const nlohmann::json& extra) {
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    nlohmann::json entry = {{"name", report.groups[g].name},
                            {"indices", report.groups[g].indices},
                            {"phi", report.phi[g]}};
    if (!report.std_errors.empty()) entry["stderr"] = report.std_errors[g];
    groups.push_back(std::move(entry));
  }
  nlohmann::json doc = {
      {"version", kReportVersion},
      {"example_id", report.example_id},
      {"method", ShapleyMethodName(report.method)},
      {"note", kReportNote},
      {"base_value", report.base_value},
      {"fx", report.fx},
      {"groups", std::move(groups)},
  };
  doc["dendrogram"] = report.dendrogram.nodes.empty()
                          ? nlohmann::json(nullptr)
                          : NodeToJson(report.dendrogram, report.dendrogram.root());
  if (extra.is_object()) {
    for (const auto& [key, value] : extra.items()) doc[key] = value;
  }
  return doc;
}

AttributionReport ReportFromJson(const nlohmann::json& doc) {
  try {
    if (doc.at("version").get<int>() != kReportVersion) {
      throw ParseError("unsupported report version");
    }
    AttributionReport report;
    report.example_id = doc.at("example_id").get<std::string>();
    report.method = ParseShapleyMethod(doc.at("method").get<std::string>());
    report.base_value = doc.at("base_value").get<double>();
    report.fx = doc.at("fx").get<double>();
    bool has_stderr = false;
    for (const auto& g : doc.at("groups")) {
      report.groups.push_back({g.at("name").get<std::string>(),
                               g.at("indices").get<std::vector<std::size_t>>()});
      report.phi.push_back(g.at("phi").get<double>());
      if (g.contains("stderr")) {
        has_stderr = true;
        report.std_errors.push_back(g.at("stderr").get<double>());
      }
    }
    if (has_stderr && report.std_errors.size() != report.phi.size()) {
      throw ParseError("stderr present for only some groups");
    }
    const auto& tree = doc.at("dendrogram");
    if (!tree.is_null()) {
      const std::size_t m = report.groups.size();
      report.dendrogram.nodes.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        report.dendrogram.nodes[i].members = {static_cast<int>(i)};
        report.dendrogram.nodes[i].phi_sum = report.phi[i];
      }
      NodeFromJson(tree, report.dendrogram, m);
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed attribution report: ") + e.what());
  }
}

std::string ReportToDot(const AttributionReport& report) {
  std::ostringstream out;
  out << "// " << kReportNote << "\n";
  out << "digraph attribution {\n";
  out << "  label=\"" << DotEscape(report.example_id) << "  f(x)="
      << FormatValue(report.fx) << "  f(baseline)="
      << FormatValue(report.base_value) << "\";\n";
  const Dendrogram& d = report.dendrogram;
  for (std::size_t id = 0; id < d.nodes.size(); ++id) {
    const DendrogramNode& node = d.nodes[id];
    out << "  n" << id << " [";
    if (node.is_leaf()) {
      out << "shape=box, label=\"" << DotEscape(report.groups[id].name)
          << "\\nφ=" << FormatValue(report.phi[id]) << "\"";
    } else {
      out << "shape=ellipse, label=\"h=" << FormatValue(node.height)
          << "\\nΣφ=" << FormatValue(node.phi_sum) << "\"";
    }
    out << ", class=\"" << SignClass(node.phi_sum) << "\"];\n";
  }
  for (std::size_t id = 0; id < d.nodes.size(); ++id) {
    const DendrogramNode& node = d.nodes[id];
    if (node.is_leaf()) continue;
    for (const int child : {node.left, node.right}) {
      const double v = d.nodes[child].phi_sum;
      out << "  n" << id << " -> n" << child << " [color=\"" << SignColor(v)
          << "\", class=\"" << SignClass(v) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "dot") return ReportFormat::kDot;
  throw DomainError("unknown report format '" + std::string(name) + "'");
}

void ExportReport(const AttributionReport& report,
                  const std::filesystem::path& path, ReportFormat format,
                  const nlohmann::json& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (format == ReportFormat::kJson) {
    out << ReportToJson(report, extra).dump(2) << '\n';
  } else {
    if (!extra.is_null()) out << "// provenance: " << extra.dump() << '\n';
    out << ReportToDot(report);
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace vqcl
