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

#include "bvi/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "bvi/errors.h"
#include "bvi/matrix_io.h"
#include "bvi/rng.h"
#include "bvi/trace_csv.h"

namespace bvi {
namespace {

constexpr std::int64_t kUnboundedEpochs = std::numeric_limits<std::int64_t>::max() / 4;

// Runs task(i) for i in [0, count) on up to `parallel` threads. The first
// exception by index is rethrown after all workers finish.
template <typename Task>
void ParallelFor(std::size_t count, int parallel, Task task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(count, std::size_t(std::max(parallel, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

MatrixXd GeneratePolicemanBurglar(Index n, std::uint64_t seed, double theta) {
  if (n < 2) throw DomainError("policeman-burglar matrix needs n >= 2");
  if (!(theta > 0)) throw DomainError("policeman-burglar theta must be positive");
  CounterRng rng(seed);
  VectorXd weights(n);
  for (Index i = 0; i < n; ++i) weights[i] = std::abs(rng.Normal());
  MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      a(i, j) = weights[i] * (1.0 - std::exp(-theta * double(std::abs(i - j))));
    }
  }
  return a;
}

MatrixXd GenerateRampMatrix(Index n) {
  if (n < 2) throw DomainError("ramp matrix needs n >= 2");
  MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      // 1-based: (i + 1) + (j + 1) - 1.
      a(i, j) = double(i + j + 1) / double(2 * n - 1);
    }
  }
  return a;
}

MatrixXd MatrixSource::Load() const {
  if (generator.empty()) return LoadMatrix(file);
  if (generator == "policeman-burglar") {
    return GeneratePolicemanBurglar(n, seed, theta);
  }
  if (generator == "ramp") return GenerateRampMatrix(n);
  throw ConfigError("unknown generator '" + generator +
                    "' (valid: policeman-burglar, ramp)");
}

std::string MatrixSource::Label() const {
  if (generator.empty()) return file.stem().string();
  return generator;
}

double DefaultMirrorProxStep(const MatrixGame& game) {
  const double l = game.lipschitz().l;
  if (!(l > 0)) throw DomainError("mirror prox step needs a nonzero matrix");
  return 1.0 / l;
}

SolverConfig ResolveConfig(const MatrixGame& game, const MethodSpec& spec,
                           int batch_size, std::uint64_t seed) {
  const Index m = game.num_components();
  SolverConfig config;
  switch (spec.method) {
    case Method::kOptimistic:
      if (spec.theory) {
        config = TheoreticalParams(m, batch_size, game.lipschitz(), *spec.theory,
                                   spec.c, game.n(), kUnboundedEpochs,
                                   spec.eta_scale);
      } else {
        if (!spec.eta || !spec.gamma) {
          throw ConfigError("alg1 needs a theory variant or explicit eta and gamma");
        }
        config.batch_size = batch_size;
        config.inner_iterations = std::max(
            1, int(std::llround(double(m) / (3.0 * batch_size))));
        config.epochs = kUnboundedEpochs;
      }
      break;
    case Method::kMirrorProx:
      config.batch_size = int(m);
      config.eta = DefaultMirrorProxStep(game);
      config.epochs = kUnboundedEpochs;
      break;
    case Method::kVrMirrorProx:
      config = VrMirrorProxDefaults(m, batch_size, game.lipschitz(),
                                    kUnboundedEpochs);
      break;
  }
  if (spec.eta) config.eta = *spec.eta;
  if (spec.gamma) {
    config.gamma = *spec.gamma;
    config.p = *spec.gamma;
  }
  config.seed = seed;
  config.scheme = spec.scheme;
  config.shared_batch = spec.shared_batch;
  return config;
}

RunRecord RunCell(const MatrixGame& game, const MethodSpec& spec,
                  int batch_size, std::uint64_t seed, std::int64_t budget,
                  const TraceOptions& options) {
  const SolverConfig config = ResolveConfig(game, spec, batch_size, seed);
  RunRecord record;
  switch (spec.method) {
    case Method::kOptimistic:
      record = Run(game, config, budget, options);
      break;
    case Method::kMirrorProx:
      record = MirrorProx(game, config.eta,
                          budget / (2 * game.num_components()), options);
      // Deterministic; b and seed only label the sweep cell.
      record.batch_size = batch_size;
      record.seed = seed;
      break;
    case Method::kVrMirrorProx:
      record = VrMirrorProx(game, config, budget, options);
      break;
  }
  return record;
}

void ExperimentPlan::Validate() const {
  if (methods.empty()) throw ConfigError("experiment plan has no methods");
  if (batches.empty()) throw ConfigError("experiment plan has no batch sizes");
  if (seeds.empty()) throw ConfigError("experiment plan has no seeds");
  if (budget <= 0) throw ConfigError("budget must be positive");
  if (gap_every <= 0) throw ConfigError("gap_every must be positive");
  for (int b : batches) {
    if (b < 1) throw ConfigError("batch sizes must be positive");
  }
}

std::vector<RunRecord> SweepBatches(const ExperimentPlan& plan) {
  plan.Validate();
  const MatrixGame game(plan.source.Load());
  const std::string label = plan.source.Label();
  struct Cell {
    const MethodSpec* method;
    int batch;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const MethodSpec& method : plan.methods) {
    for (int b : plan.batches) {
      for (std::uint64_t seed : plan.seeds) cells.push_back({&method, b, seed});
    }
  }
  TraceOptions options;
  options.gap_every = plan.gap_every;
  options.record_time = plan.record_time;
  std::vector<RunRecord> records(cells.size());
  ParallelFor(cells.size(), plan.parallel, [&](std::size_t i) {
    records[i] = RunCell(game, *cells[i].method, cells[i].batch, cells[i].seed,
                         plan.budget, options);
    records[i].matrix = label;
  });
  if (!plan.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(plan.output_dir, ec);
    if (ec) {
      throw IoError("cannot create " + plan.output_dir.string() + ": " +
                    ec.message());
    }
    WriteTraceCsvFile(plan.output_dir / "sweep.csv", records);
  }
  return records;
}

GridSearchResult GridSearch(const MatrixGame& game, const MethodSpec& method,
                            int batch_size, const std::vector<double>& eta_grid,
                            const std::vector<double>& gamma_grid,
                            std::int64_t budget,
                            const std::vector<std::uint64_t>& seeds,
                            int parallel) {
  if (eta_grid.empty() || gamma_grid.empty()) {
    throw ConfigError("grid search needs non-empty eta and gamma grids");
  }
  if (seeds.empty()) throw ConfigError("grid search needs at least one seed");
  struct Cell {
    double eta;
    double gamma;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double eta : eta_grid) {
    for (double gamma : gamma_grid) {
      for (std::uint64_t seed : seeds) cells.push_back({eta, gamma, seed});
    }
  }
  TraceOptions options;
  options.gap_every = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<double> gaps(cells.size());
  ParallelFor(cells.size(), parallel, [&](std::size_t i) {
    MethodSpec spec = method;
    spec.theory.reset();
    spec.eta = cells[i].eta;
    spec.gamma = cells[i].gamma;
    try {
      gaps[i] = RunCell(game, spec, batch_size, cells[i].seed, budget, options)
                    .final_gap();
    } catch (const DomainError&) {
      // Iterates left the interior or parameters were invalid: diverged.
      gaps[i] = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(gaps[i])) gaps[i] = std::numeric_limits<double>::infinity();
  });

  GridSearchResult result;
  for (std::size_t i = 0; i < cells.size(); i += seeds.size()) {
    LeaderboardEntry entry;
    entry.eta = cells[i].eta;
    entry.gamma = cells[i].gamma;
    entry.seed_gaps.assign(gaps.begin() + i, gaps.begin() + i + seeds.size());
    entry.final_gap = Median(entry.seed_gaps);
    result.leaderboard.push_back(std::move(entry));
  }
  std::stable_sort(result.leaderboard.begin(), result.leaderboard.end(),
                   [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                     return std::tie(a.final_gap, a.eta, a.gamma) <
                            std::tie(b.final_gap, b.eta, b.gamma);
                   });
  if (!std::isfinite(result.leaderboard.front().final_gap)) {
    std::string grid = "eta {";
    for (double e : eta_grid) grid += " " + FormatDouble(e);
    grid += " } x gamma {";
    for (double g : gamma_grid) grid += " " + FormatDouble(g);
    throw DomainError("every grid point diverged: " + grid + " }");
  }
  MethodSpec best = method;
  best.theory.reset();
  best.eta = result.leaderboard.front().eta;
  best.gamma = result.leaderboard.front().gamma;
  result.best = ResolveConfig(game, best, batch_size, seeds.front());
  return result;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * double(values.size() - 1);
  const std::size_t lo = std::size_t(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - double(lo);
  if (frac == 0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

double Median(std::vector<double> values) {
  return Quantile(std::move(values), 0.5);
}

std::vector<SummaryRow> Aggregate(const std::vector<RunRecord>& records) {
  if (records.empty()) throw DomainError("nothing to aggregate");
  using Key = std::tuple<std::string, std::string, Index, int, double, double>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    groups[{r.method, r.matrix, r.n, r.batch_size, r.eta, r.gamma}].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    const auto& reference = group.front()->trace;
    for (const RunRecord* r : group) {
      bool same = r->trace.size() == reference.size();
      for (std::size_t i = 0; same && i < reference.size(); ++i) {
        same = r->trace[i].oracle_calls == reference[i].oracle_calls;
      }
      if (!same) {
        throw DomainError("records of " + std::get<0>(key) +
                          " have different gap checkpoints");
      }
    }
    for (std::size_t i = 0; i < reference.size(); ++i) {
      std::vector<double> gaps;
      for (const RunRecord* r : group) gaps.push_back(r->trace[i].gap);
      SummaryRow row;
      std::tie(row.method, row.matrix, row.n, row.batch_size, row.eta,
               row.gamma) = key;
      row.oracle_calls = reference[i].oracle_calls;
      row.median = Quantile(gaps, 0.5);
      row.q1 = Quantile(gaps, 0.25);
      row.q3 = Quantile(gaps, 0.75);
      row.count = int(gaps.size());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::optional<std::int64_t> CallsToTarget(const RunRecord& record,
                                          double target) {
  for (const TracePoint& p : record.trace) {
    if (p.gap <= target) return p.oracle_calls;
  }
  return std::nullopt;
}

}  // namespace bvi
