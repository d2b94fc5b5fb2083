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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Lines starting with "  info" are diagnostics only.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracle.h"
#include "vqcl/ansatz.h"
#include "vqcl/data.h"
#include "vqcl/errors.h"
#include "vqcl/explain.h"
#include "vqcl/gradients.h"
#include "vqcl/model.h"

namespace vqcl {
namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void Report(bool pass, const char* name, const std::string& detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void Info(const std::string& text) {
  std::printf("  info  %s\n", text.c_str());
  std::fflush(stdout);
}

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> Gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

void GradientCorrectness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const AnsatzConfig cfg{UniformInt(rng, 1, 6), UniformInt(rng, 1, 4),
                           static_cast<Axis>(UniformInt(rng, 0, 2))};
    const std::size_t full = std::size_t{1} << cfg.num_qubits;
    const EncodingConfig enc{cfg.num_qubits == 1
                                 ? 2
                                 : static_cast<std::size_t>(UniformInt(
                                       rng, static_cast<int>(full / 2) + 1, static_cast<int>(full)))};
    const AnsatzParams params = InitParams(cfg, rng());
    const auto x = Gaussian(enc.feature_dim, rng);
    worst = std::max(worst, MaxAbsDifference(ParameterShiftJacobian(x, params, cfg, enc),
                                             FiniteDiffJacobian(x, params, cfg, enc, 1e-5)));
  }
  const double t = Seconds(start);
  Report(worst < 1e-6 && t < 30, "gradient-correctness",
         Fmt("max|ps-fd|=%.3e (<1e-6) over 100 instances, %.2fs (<30s)", worst, t));
}

std::vector<Complex> RandomState(int n, std::mt19937_64& rng) {
  const auto re = Gaussian(std::size_t{1} << n, rng);
  const auto im = Gaussian(std::size_t{1} << n, rng);
  std::vector<Complex> amps(re.size());
  double norm2 = 0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amps[i] = {re[i], im[i]};
    norm2 += std::norm(amps[i]);
  }
  for (auto& a : amps) a /= std::sqrt(norm2);
  return amps;
}

double StateDeviation(const QuantumState& got, const std::vector<oracle::C>& want) {
  double worst = 0;
  for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  return worst;
}

void SimulatorOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> angle(-2 * std::numbers::pi, 2 * std::numbers::pi);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + i % 3;
    const auto amps = RandomState(n, rng);
    const QuantumState psi = QuantumState::FromAmplitudes(amps);
    const std::vector<oracle::C> v(amps.begin(), amps.end());
    for (const Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
      for (int q = 0; q < n; ++q) {
        const double theta = angle(rng);
        worst = std::max(worst, StateDeviation(ApplyRotation(psi, q, axis, theta),
                                               oracle::Apply(oracle::OnQubit(
                                                   n, q, oracle::Rotation(axis, theta)), v)));
      }
    }
    for (int c = 0; c < n; ++c) {
      for (int t = 0; t < n; ++t) {
        if (c == t) continue;
        worst = std::max(worst, StateDeviation(ApplyCnot(psi, c, t),
                                               oracle::Apply(oracle::Cnot(n, c, t), v)));
      }
    }
    for (int q = 0; q < n; ++q) {
      worst = std::max(worst, std::abs(ExpectZ(psi, q) - oracle::ExpectZ(n, q, v)));
    }
    const AnsatzConfig cfg{n, 1 + i % 4, static_cast<Axis>(i % 3)};
    const AnsatzParams params = InitParams(cfg, rng());
    const EncodingConfig enc{std::size_t{1} << n};
    const auto x = Gaussian(enc.feature_dim, rng);
    std::vector<std::vector<double>> rows;
    for (int l = 0; l < cfg.num_layers; ++l) {
      rows.emplace_back(params.row(l).begin(), params.row(l).end());
    }
    const auto want = oracle::AnsatzForward(EncodeAmplitudes(x, enc), rows, cfg.rotation_axis);
    const auto got = CircuitForward(x, params, cfg, enc);
    for (int q = 0; q < n; ++q) worst = std::max(worst, std::abs(got[q] - want[q]));
  }
  const double t = Seconds(start);
  Report(worst < 1e-12 && t < 5, "simulator-oracle",
         Fmt("max deviation=%.3e (<1e-12) over 50 instances, %.3fs (<5s)", worst, t));
}

void EncodingNorms() {
  std::mt19937_64 rng(103);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = i % 4 == 0 ? 768 : static_cast<std::size_t>(UniformInt(rng, 1, 300));
    EncodingConfig enc{dim};
    const auto x = Gaussian(dim, rng);
    const auto amps = EncodeAmplitudes(x, enc);
    if (dim == 768 && amps.size() != 1024) worst = 1;
    double norm2 = 0;
    for (const double a : amps) norm2 += a * a;
    worst = std::max(worst, std::abs(std::sqrt(norm2) - 1.0));
  }
  bool zero_rejected = false;
  try {
    EncodeAmplitudes(std::vector<double>(768, 0.0), EncodingConfig{768});
  } catch (const DegenerateInputError&) {
    zero_rejected = true;
  }
  Report(worst < 1e-12 && zero_rejected, "encoding",
         Fmt("max|norm-1|=%.3e (<1e-12) over 1000 inputs incl. 768->1024; zero vector %s",
             worst, zero_rejected ? "rejected" : "NOT rejected"));
}

// Largest |p1(x) - p1(-x)| over the dataset.
double ReflectionGap(const HybridModel& model, const Dataset& ds) {
  double gap = 0;
  for (const auto& ex : ds.examples) {
    std::vector<double> neg(ex.features);
    for (double& v : neg) v = -v;
    gap = std::max(gap, std::abs(HybridForward(ex.features, model)[1] -
                                 HybridForward(neg, model)[1]));
  }
  return gap;
}

void EndToEndTraining() {
  const Dataset ds = Synthesize(100, 16, 6.0, 7);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.learning_rate = 1e-3;
  cfg.seed = 7;
  const HybridModel init = InitModel({16}, 6, Axis::kX, 7);
  const auto start = Clock::now();
  const TrainResult result = Train(init, ds, ds, cfg);
  const double t = Seconds(start);
  const EvalReport eval = Evaluate(result.model, ds);
  const double loss1 = result.history[0].train_loss;
  const double loss5 = result.history[4].train_loss;
  const bool pass = eval.accuracy >= 0.95 && eval.mcc >= 0.90 && loss5 < loss1 && t < 120;
  Report(pass, "end-to-end-training",
         Fmt("train accuracy=%.4f (>=0.95) mcc=%.4f (>=0.90) loss e1=%.6f e5=%.6f "
             "(e5<e1: %s) %.2fs (<120s)",
             eval.accuracy, eval.mcc, loss1, loss5, loss5 < loss1 ? "yes" : "no", t));

  Info(Fmt("max|p1(x)-p1(-x)| over the training set = %.3e", ReflectionGap(result.model, ds)));
  Dataset shifted = ds;
  std::mt19937_64 rng(7);
  auto w = Gaussian(16, rng);
  double norm = 0;
  for (const double v : w) norm += v * v;
  for (double& v : w) v *= 6.0 / std::sqrt(norm);
  for (auto& ex : shifted.examples) {
    for (std::size_t j = 0; j < 16; ++j) ex.features[j] += w[j];
  }
  const TrainResult off = Train(init, shifted, shifted, cfg);
  const EvalReport off_eval = Evaluate(off.model, shifted);
  Info(Fmt("same run with both clusters offset by a common vector of norm 6: "
           "accuracy=%.4f mcc=%.4f",
           off_eval.accuracy, off_eval.mcc));
}

double BatchLoss(std::span<const LabeledExample> batch, const HybridModel& model) {
  double sum = 0;
  for (const auto& ex : batch) sum += CrossEntropy(HybridForward(ex.features, model), ex.label);
  return sum / static_cast<double>(batch.size());
}

void EndToEndLossGradient() {
  std::mt19937_64 rng(104);
  HybridModel model = InitModel({4}, 1, Axis::kX, 11);
  std::vector<LabeledExample> batch;
  for (int i = 0; i < 4; ++i) batch.push_back({"t", i % 2, Gaussian(4, rng), std::nullopt});
  const auto analytic = FlattenGradients(LossGradients(batch, model));
  std::vector<double> flat = FlattenTrainable(model);
  constexpr double kEps = 1e-5;
  double worst = 0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double keep = flat[i];
    flat[i] = keep + kEps;
    UnflattenTrainable(flat, model);
    const double up = BatchLoss(batch, model);
    flat[i] = keep - kEps;
    UnflattenTrainable(flat, model);
    const double down = BatchLoss(batch, model);
    flat[i] = keep;
    UnflattenTrainable(flat, model);
    worst = std::max(worst, std::abs(analytic[i] - (up - down) / (2 * kEps)));
  }
  Report(worst < 1e-5, "end-to-end-loss-gradient",
         Fmt("max|analytic-fd|=%.3e (<1e-5) over %zu parameters", worst, flat.size()));
}

double Pearson(const Confusion& c) {
  // Moments of the binary (actual, predicted) pairs, from the counts.
  const double n = static_cast<double>(c[0][0] + c[0][1] + c[1][0] + c[1][1]);
  const double ea = static_cast<double>(c[1][0] + c[1][1]) / n;
  const double ep = static_cast<double>(c[0][1] + c[1][1]) / n;
  const double eap = static_cast<double>(c[1][1]) / n;
  const double va = ea - ea * ea;
  const double vp = ep - ep * ep;
  if (va <= 0 || vp <= 0) return 0.0;
  return (eap - ea * ep) / std::sqrt(va * vp);
}

void Metrics() {
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<std::int64_t> count(0, 500);
  double worst = 0;
  int checked = 0;
  while (checked < 1000) {
    const Confusion c{{{count(rng), count(rng)}, {count(rng), count(rng)}}};
    if (c[0][0] + c[0][1] + c[1][0] + c[1][1] == 0) continue;
    worst = std::max(worst, std::abs(Mcc(c) - Pearson(c)));
    ++checked;
  }
  const double single = Mcc({{{0, 40}, {0, 60}}});
  const double perfect = Mcc({{{40, 0}, {0, 60}}});
  const double inverted = Mcc({{{0, 40}, {60, 0}}});
  Report(worst < 1e-12 && single == 0.0 && perfect == 1.0 && inverted == -1.0, "metrics",
         Fmt("max|mcc-pearson|=%.3e (<1e-12) over 1000 matrices; single-class=%g "
             "perfect=%g inverted=%g",
             worst, single, perfect, inverted));
}

void Shapley() {
  std::mt19937_64 rng(106);
  double efficiency = 0;
  for (int i = 0; i < 50; ++i) {
    const HybridModel model = InitModel({16}, 2, static_cast<Axis>(i % 3), rng());
    AttributionRequest req;
    req.example = {"x", 1, Gaussian(16, rng), std::nullopt};
    req.baseline = Gaussian(16, rng);
    req.groups = EqualBlockGroups(16, 8);
    const auto r = ShapleyExact(ClassOneProbability(model), req);
    double sum = 0;
    for (const double p : r.phi) sum += p;
    efficiency = std::max(efficiency, std::abs(sum - (r.fx - r.base_value)));
  }

  const auto w = Gaussian(8, rng);
  const ValueFunction linear = [&](std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i < 8; ++i) s += w[i] * x[i];
    return s;
  };
  AttributionRequest lin;
  lin.example = {"lin", 1, Gaussian(8, rng), std::nullopt};
  lin.baseline = Gaussian(8, rng);
  lin.groups = EqualBlockGroups(8, 8);
  const auto lr = ShapleyExact(linear, lin);
  double linear_dev = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    linear_dev = std::max(linear_dev,
                          std::abs(lr.phi[i] - w[i] * (lin.example.features[i] - lin.baseline[i])));
  }

  const HybridModel model = InitModel({16}, 2, Axis::kX, 12);
  AttributionRequest req;
  req.example = {"s", 1, Gaussian(16, rng), std::nullopt};
  req.baseline = Gaussian(16, rng);
  req.groups = EqualBlockGroups(16, 8);
  const auto exact = ShapleyExact(ClassOneProbability(model), req);
  req.method = ShapleyMethod::kSampled;
  req.samples = 2000;
  req.seed = 13;
  const auto sampled = ShapleySampled(ClassOneProbability(model), req);
  double worst_z = 0;
  for (std::size_t g = 0; g < 8; ++g) {
    const double diff = std::abs(sampled.phi[g] - exact.phi[g]);
    const double z = sampled.std_errors[g] > 0 ? diff / sampled.std_errors[g]
                                               : (diff == 0 ? 0 : INFINITY);
    worst_z = std::max(worst_z, z);
  }
  Report(efficiency < 1e-8 && linear_dev < 1e-12 && worst_z <= 3, "shapley",
         Fmt("efficiency=%.3e (<1e-8) over 50 m=8 instances; linear closed form dev=%.3e; "
             "sampled max |diff|/stderr=%.2f (<=3)",
             efficiency, linear_dev, worst_z));
}

TrainResult DeterminismRun(int threads) {
  const Dataset ds = Synthesize(100, 16, 6.0, 7);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.learning_rate = 1e-3;
  cfg.seed = 21;
  cfg.threads = threads;
  return Train(InitModel({16}, 6, Axis::kX, 21), ds, ds, cfg);
}

void Determinism() {
  const TrainResult a = DeterminismRun(1);
  const TrainResult b = DeterminismRun(1);
  const TrainResult c = DeterminismRun(4);
  const auto bytes_a = SerializeCheckpoint(a.model, a.optimizer);
  const bool history_same = a.history == b.history && a.history == c.history;
  const bool ckpt_same = bytes_a == SerializeCheckpoint(b.model, b.optimizer) &&
                         bytes_a == SerializeCheckpoint(c.model, c.optimizer);
  Report(history_same && ckpt_same, "determinism",
         Fmt("history %s, checkpoint bytes %s (threads 1, 1, 4)",
             history_same ? "identical" : "DIFFER", ckpt_same ? "identical" : "DIFFER"));
}

void CheckpointRoundTrip() {
  const Dataset ds = Synthesize(50, 16, 6.0, 8);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.learning_rate = 1e-2;
  const TrainResult r = Train(InitModel({16}, 6, Axis::kY, 8), ds, ds, cfg);
  const auto path = std::filesystem::temp_directory_path() / "vqcl_acceptance.ckpt";
  SaveCheckpoint(path, r.model, r.optimizer);
  const Checkpoint back = LoadCheckpoint(path);
  std::filesystem::remove(path);
  const EvalReport want = Evaluate(r.model, ds);
  const EvalReport got = Evaluate(back.model, ds);
  Report(got == want && back.optimizer == r.optimizer, "checkpoint-round-trip",
         Fmt("EvalReport %s after save/load (accuracy=%.4f mcc=%.4f loss=%.6f)",
             got == want ? "identical" : "DIFFERS", got.accuracy, got.mcc, got.loss));
}

}  // namespace
}  // namespace vqcl

int main() {
  using namespace vqcl;
  const std::vector<std::pair<const char*, std::function<void()>>> checks{
      {"gradient-correctness", GradientCorrectness},
      {"simulator-oracle", SimulatorOracle},
      {"encoding", EncodingNorms},
      {"end-to-end-training", EndToEndTraining},
      {"end-to-end-loss-gradient", EndToEndLossGradient},
      {"metrics", Metrics},
      {"shapley", Shapley},
      {"determinism", Determinism},
      {"checkpoint-round-trip", CheckpointRoundTrip},
  };
  for (const auto& [name, check] : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      Report(false, name, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, checks.size());
  return failures == 0 ? 0 : 1;
}
