// Copyright 2026 The bvi Authors.
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

#include "bvi/solvers.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "bvi/errors.h"
#include "bvi/geometry.h"

namespace bvi {

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kOptimistic:
      return "alg1";
    case Method::kMirrorProx:
      return "mirror-prox";
    case Method::kVrMirrorProx:
      return "vr-mirror-prox";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  if (name == "alg1") return Method::kOptimistic;
  if (name == "mirror-prox") return Method::kMirrorProx;
  if (name == "vr-mirror-prox") return Method::kVrMirrorProx;
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (valid: alg1, mirror-prox, vr-mirror-prox)");
}

std::string_view SamplingName(SamplingKind kind) {
  return kind == SamplingKind::kUniform ? "uniform" : "importance";
}

SamplingKind ParseSampling(std::string_view name) {
  if (name == "uniform") return SamplingKind::kUniform;
  if (name == "importance") return SamplingKind::kImportance;
  throw ConfigError("unknown sampling scheme '" + std::string(name) +
                    "' (valid: uniform, importance)");
}

void SolverConfig::Validate(Index num_components) const {
  if (!(eta > 0) || !std::isfinite(eta)) throw DomainError("eta must be positive");
  if (!(gamma >= 0 && gamma <= 1)) throw DomainError("gamma must lie in [0, 1]");
  if (batch_size < 1 || batch_size > num_components) {
    throw DomainError("batch size must lie in [1, M]");
  }
  if (inner_iterations < 1) throw DomainError("K must be positive");
  if (epochs < 1) throw DomainError("S must be positive");
}

std::string SolverConfig::Fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "eta=" << eta << ";gamma=" << gamma << ";p=" << p
     << ";b=" << batch_size << ";K=" << inner_iterations << ";S=" << epochs
     << ";seed=" << seed << ";scheme=" << SamplingName(scheme)
     << ";shared_batch=" << shared_batch << ";exact_delta=" << exact_delta;
  return os.str();
}

SolverConfig TheoreticalParams(Index num_components, int batch_size,
                               const LipschitzInfo& lipschitz,
                               TheoryVariant variant, double c, Index n,
                               std::int64_t epochs, double eta_scale) {
  lipschitz.Validate();
  if (batch_size < 1) throw DomainError("batch size must be at least 1");
  const double m = double(num_components);
  const double b = double(batch_size);
  if (variant == TheoryVariant::kEuclideanLipschitz) {
    if (!(lipschitz.l2 > 0) || !(lipschitz.bar_l2 > 0)) {
      throw DomainError("theoretical step needs positive L2 and bar L2");
    }
    const double bound = std::sqrt(m) * lipschitz.bar_l2 / lipschitz.l2;
    if (b > bound) {
      std::ostringstream os;
      os << "batch size " << batch_size
         << " violates b ≤ √M·L̄₂/L₂ = " << bound;
      throw FeasibilityError(os.str(), bound);
    }
  } else {
    if (!(lipschitz.l > 0)) throw DomainError("theoretical step needs positive L");
    const double bound = std::sqrt(m);
    if (b > bound) {
      std::ostringstream os;
      os << "batch size " << batch_size << " violates b ≤ √M = " << bound;
      throw FeasibilityError(os.str(), bound);
    }
  }
  if (m < 3 * b) throw DomainError("theoretical parameters need M >= 3b");
  if (!(eta_scale > 0)) throw DomainError("eta_scale must be positive");

  SolverConfig config;
  config.batch_size = batch_size;
  config.inner_iterations =
      std::max(1, static_cast<int>(std::llround(m / (3 * b))));
  config.gamma = 1.0 / config.inner_iterations;
  config.p = config.gamma;
  config.epochs = epochs;
  const double root_gb = std::sqrt(config.gamma * b);
  if (variant == TheoryVariant::kEuclideanLipschitz) {
    config.eta = std::min(root_gb / (eta_scale * lipschitz.bar_l2),
                          1.0 / (8.0 * lipschitz.l2));
  } else {
    const double geometry_factor =
        std::sqrt(1.0 + c * std::log(double(std::max<Index>(n, 1))));
    config.eta =
        std::min(root_gb / (eta_scale * lipschitz.l * geometry_factor),
                 1.0 / (8.0 * lipschitz.l * geometry_factor));
  }
  return config;
}

SolverConfig VrMirrorProxDefaults(Index num_components, int batch_size,
                                  const LipschitzInfo& lipschitz,
                                  std::int64_t epochs) {
  lipschitz.Validate();
  if (batch_size < 1) throw DomainError("batch size must be at least 1");
  if (!(lipschitz.bar_l2 > 0)) throw DomainError("step needs positive bar L2");
  SolverConfig config;
  config.batch_size = batch_size;
  config.inner_iterations = std::max(
      1, static_cast<int>(std::llround(double(num_components) /
                                       (2.0 * batch_size))));
  config.gamma = 1.0 / config.inner_iterations;
  config.p = config.gamma;
  config.eta = 0.99 * std::sqrt(config.gamma) / lipschitz.bar_l2;
  config.epochs = epochs;
  return config;
}

VectorXd SolverState::Average() const {
  if (run_count == 0) return x_cur;
  return run_sum / double(run_count);
}

SolverState InitialState(const FiniteSumProblem& problem, const VectorXd& start,
                         OracleCounter& counter) {
  const Geometry& geometry = problem.geometry();
  if (!IsInDomain(geometry, start)) {
    throw DomainError("start point is not interior to the domain");
  }
  SolverState state;
  state.x_cur = start;
  state.x_prev = start;
  state.w = start;
  state.f_w = problem.Operator(start);
  counter.Charge(problem.num_components());
  state.w_bar_dual = Grad(geometry, start);
  state.run_sum = VectorXd::Zero(start.size());
  state.epoch_sum = VectorXd::Zero(start.size());
  state.epoch_dual_sum = VectorXd::Zero(start.size());
  return state;
}

namespace {

// One sampled batch per block (or one shared), drawn from the importance
// signal of `d` or uniformly.
std::vector<BlockSample> DrawSamples(const FiniteSumProblem& problem,
                                     const SolverConfig& config,
                                     const VectorXd& d, CounterRng& rng) {
  const Index m = problem.num_components();
  auto scheme_for = [&](const VectorXd& signal) {
    return config.scheme == SamplingKind::kImportance
               ? SamplingScheme::Importance(signal)
               : SamplingScheme::Uniform(m);
  };
  std::vector<BlockSample> samples;
  if (config.shared_batch || problem.num_blocks() == 1) {
    VectorXd signal = VectorXd::Zero(m);
    if (config.scheme == SamplingKind::kImportance) {
      for (int b = 0; b < problem.num_blocks(); ++b) {
        signal += problem.SamplingSignal(b, d).cwiseAbs();
      }
    }
    SamplingScheme scheme = scheme_for(signal);
    std::vector<Index> batch = DrawBatch(scheme, config.batch_size, rng);
    samples.push_back({std::move(batch), std::move(scheme)});
    return samples;
  }
  for (int b = 0; b < problem.num_blocks(); ++b) {
    SamplingScheme scheme =
        config.scheme == SamplingKind::kImportance
            ? scheme_for(problem.SamplingSignal(b, d))
            : SamplingScheme::Uniform(m);
    std::vector<Index> batch = DrawBatch(scheme, config.batch_size, rng);
    samples.push_back({std::move(batch), std::move(scheme)});
  }
  return samples;
}

// Records gap checkpoints of the averaged point.
class TraceRecorder {
 public:
  TraceRecorder(const FiniteSumProblem& problem, const TraceOptions& options,
                RunRecord& record)
      : problem_(problem),
        options_(options),
        record_(record),
        start_(std::chrono::steady_clock::now()) {
    if (options.gap_every < 1) throw DomainError("gap_every must be positive");
  }

  void Record(std::int64_t calls, const VectorXd& point) {
    TracePoint tp;
    tp.oracle_calls = calls;
    tp.gap = problem_.Gap(point);
    record_.gap_calls += problem_.num_components();
    if (options_.record_time) {
      tp.elapsed_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
    }
    record_.trace.push_back(tp);
    next_ = (calls / options_.gap_every + 1) * options_.gap_every;
    dirty_ = false;
  }

  // After a step that changed the averaged point.
  void Step(std::int64_t calls, const std::function<VectorXd()>& point) {
    dirty_ = true;
    if (calls >= next_) Record(calls, point());
  }

  void Finish(std::int64_t calls, const VectorXd& point) {
    if (dirty_) Record(calls, point);
  }

 private:
  const FiniteSumProblem& problem_;
  const TraceOptions& options_;
  RunRecord& record_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t next_ = 0;
  bool dirty_ = false;
};

VectorXd StartPoint(const FiniteSumProblem& problem,
                    const TraceOptions& options) {
  return options.start ? *options.start : CenterPoint(problem.geometry());
}

void FillMeta(RunRecord& record, Method method, const FiniteSumProblem& problem,
              const SolverConfig& config) {
  record.method = std::string(MethodName(method));
  record.n = problem.num_components();
  record.batch_size = config.batch_size;
  record.seed = config.seed;
  record.eta = config.eta;
  record.gamma = config.gamma;
  record.fingerprint = "method=" + record.method + ";" + config.Fingerprint();
}

}  // namespace

void InnerStep(SolverState& state, const FiniteSumProblem& problem,
               const SolverConfig& config, CounterRng& rng,
               OracleCounter& counter) {
  const Geometry& geometry = problem.geometry();
  VectorXd delta;
  if (config.exact_delta) {
    delta = 2.0 * problem.Operator(state.x_cur) - problem.Operator(state.x_prev);
    counter.Charge(2 * problem.num_components());
  } else {
    const VectorXd d = 2.0 * state.x_cur - state.w - state.x_prev;
    const std::vector<BlockSample> samples = DrawSamples(problem, config, d, rng);
    delta = EstimateDelta(problem, counter, state.x_cur, state.x_prev, state.w,
                          state.f_w, samples);
  }
  VectorXd next = ProxStep(geometry, state.x_cur, state.w_bar_dual,
                           config.gamma, config.eta, Dual{std::move(delta)});
  const Dual next_grad = Grad(geometry, next);
  state.run_sum += next;
  ++state.run_count;
  state.epoch_sum += next;
  state.epoch_dual_sum += next_grad.coords;
  state.x_prev = std::move(state.x_cur);
  state.x_cur = std::move(next);
  ++state.k;
}

void EpochEnd(SolverState& state, const FiniteSumProblem& problem,
              int inner_iterations, OracleCounter& counter) {
  if (inner_iterations < 1 || state.k != inner_iterations) {
    throw DomainError("epoch_end called after " + std::to_string(state.k) +
                      " of " + std::to_string(inner_iterations) +
                      " inner steps");
  }
  const double k = double(inner_iterations);
  state.w = state.epoch_sum / k;
  state.w_bar_dual = Dual{state.epoch_dual_sum / k};
  state.f_w = problem.Operator(state.w);
  counter.Charge(problem.num_components());
  state.epoch_sum.setZero();
  state.epoch_dual_sum.setZero();
  state.k = 0;
  ++state.s;
}

RunRecord Run(const FiniteSumProblem& problem, const SolverConfig& config,
              std::int64_t budget, const TraceOptions& options) {
  if (budget <= 0) throw DomainError("oracle budget must be positive");
  config.Validate(problem.num_components());
  RunRecord record;
  FillMeta(record, Method::kOptimistic, problem, config);
  TraceRecorder recorder(problem, options, record);

  const VectorXd start = StartPoint(problem, options);
  recorder.Record(0, start);
  OracleCounter counter;
  SolverState state = InitialState(problem, start, counter);
  CounterRng rng(config.seed);

  const std::int64_t m = problem.num_components();
  const std::int64_t step_cost =
      config.exact_delta ? 2 * m : 3 * std::int64_t(config.batch_size);
  while (state.s < config.epochs) {
    if (state.k == config.inner_iterations) {
      if (counter.calls() + m > budget) break;
      EpochEnd(state, problem, config.inner_iterations, counter);
      ++record.epochs_completed;
      continue;
    }
    if (counter.calls() + step_cost > budget) break;
    InnerStep(state, problem, config, rng, counter);
    ++record.inner_steps;
    if (options.keep_iterates) record.iterates.push_back(state.x_cur);
    recorder.Step(counter.calls(), [&] { return state.Average(); });
  }
  record.x_final = state.Average();
  recorder.Finish(counter.calls(), record.x_final);
  record.solver_calls = counter.calls();
  return record;
}

RunRecord MirrorProx(const FiniteSumProblem& problem, double eta,
                     std::int64_t iterations, const TraceOptions& options) {
  if (!(eta > 0)) throw DomainError("mirror prox: eta must be positive");
  if (iterations < 0) throw DomainError("mirror prox: negative iteration count");
  const Geometry& geometry = problem.geometry();
  RunRecord record;
  SolverConfig meta;
  meta.eta = eta;
  meta.batch_size = int(problem.num_components());
  meta.inner_iterations = 1;
  meta.epochs = iterations;
  FillMeta(record, Method::kMirrorProx, problem, meta);
  TraceRecorder recorder(problem, options, record);

  VectorXd x = StartPoint(problem, options);
  if (!IsInDomain(geometry, x)) throw DomainError("start point is not interior");
  recorder.Record(0, x);
  OracleCounter counter;
  const std::int64_t m = problem.num_components();
  VectorXd sum = VectorXd::Zero(x.size());
  // gamma = 0 makes the anchor irrelevant; any dual vector of the right size.
  const Dual anchor{VectorXd::Zero(x.size())};
  for (std::int64_t t = 0; t < iterations; ++t) {
    const VectorXd y = ProxStep(geometry, x, anchor, 0.0, eta,
                                Dual{problem.Operator(x)});
    x = ProxStep(geometry, x, anchor, 0.0, eta, Dual{problem.Operator(y)});
    counter.Charge(2 * m);
    sum += y;
    ++record.inner_steps;
    if (options.keep_iterates) record.iterates.push_back(y);
    recorder.Step(counter.calls(),
                  [&] { return VectorXd(sum / double(t + 1)); });
  }
  record.x_final = iterations > 0 ? VectorXd(sum / double(iterations)) : x;
  recorder.Finish(counter.calls(), record.x_final);
  record.solver_calls = counter.calls();
  return record;
}

RunRecord VrMirrorProx(const FiniteSumProblem& problem,
                       const SolverConfig& config, std::int64_t budget,
                       const TraceOptions& options) {
  if (budget <= 0) throw DomainError("oracle budget must be positive");
  config.Validate(problem.num_components());
  const Geometry& geometry = problem.geometry();
  RunRecord record;
  FillMeta(record, Method::kVrMirrorProx, problem, config);
  TraceRecorder recorder(problem, options, record);

  VectorXd x = StartPoint(problem, options);
  recorder.Record(0, x);
  OracleCounter counter;
  SolverState state = InitialState(problem, x, counter);
  CounterRng rng(config.seed);
  const std::int64_t m = problem.num_components();
  const std::int64_t step_cost = 2 * std::int64_t(config.batch_size);
  VectorXd half_sum = VectorXd::Zero(x.size());
  std::int64_t half_count = 0;

  while (state.s < config.epochs) {
    if (state.k == config.inner_iterations) {
      if (counter.calls() + m > budget) break;
      EpochEnd(state, problem, config.inner_iterations, counter);
      ++record.epochs_completed;
      continue;
    }
    if (counter.calls() + step_cost > budget) break;
    const VectorXd half = ProxStep(geometry, state.x_cur, state.w_bar_dual,
                                   config.gamma, config.eta, Dual{state.f_w});
    const std::vector<BlockSample> samples =
        DrawSamples(problem, config, half - state.w, rng);
    VectorXd g = EstimateSnapshotCorrection(problem, counter, half, state.w,
                                            state.f_w, samples);
    VectorXd next = ProxStep(geometry, state.x_cur, state.w_bar_dual,
                             config.gamma, config.eta, Dual{std::move(g)});
    state.epoch_sum += next;
    state.epoch_dual_sum += Grad(geometry, next).coords;
    state.x_prev = std::move(state.x_cur);
    state.x_cur = std::move(next);
    ++state.k;
    half_sum += half;
    ++half_count;
    ++record.inner_steps;
    if (options.keep_iterates) record.iterates.push_back(half);
    recorder.Step(counter.calls(),
                  [&] { return VectorXd(half_sum / double(half_count)); });
  }
  record.x_final =
      half_count > 0 ? VectorXd(half_sum / double(half_count)) : state.x_cur;
  recorder.Finish(counter.calls(), record.x_final);
  record.solver_calls = counter.calls();
  return record;
}

}  // namespace bvi
