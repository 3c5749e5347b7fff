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

// bvi: generate games, run solvers, sweep batch sizes, tune steps, plot.
//
// Exit codes: 0 success, 2 config or validation error, 3 infeasible batch
// size, 4 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bvi/config.h"
#include "bvi/errors.h"
#include "bvi/harness.h"
#include "bvi/matrix_game.h"
#include "bvi/matrix_io.h"
#include "bvi/plot.h"
#include "bvi/solvers.h"
#include "bvi/trace_csv.h"
#include "nlohmann/json.hpp"

namespace bvi {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFeasibility = 3;
constexpr int kExitIo = 4;

const std::vector<std::string> kMatrixKeys = {"kind", "matrix", "n", "M",
                                              "theta", "matrix_seed"};

std::vector<std::string> Keys(std::vector<std::string> own, bool with_matrix) {
  std::vector<std::string> keys = {"config"};
  if (with_matrix) keys.insert(keys.end(), kMatrixKeys.begin(), kMatrixKeys.end());
  keys.insert(keys.end(), own.begin(), own.end());
  return keys;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::vector<std::string> keys;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
  std::vector<std::string> positional;

  // Config file first, then flags on top.
  ConfigValues Resolve() const {
    ConfigValues values;
    if (options.at("config")->count() > 0) {
      values = LoadConfigFile(text.at("config"), keys);
    }
    ConfigValues overrides;
    for (const auto& [key, opt] : options) {
      if (key == "config" || opt->count() == 0) continue;
      const auto flag = flags.find(key);
      if (flag != flags.end()) {
        overrides.Set(key, flag->second ? "true" : "false");
      } else {
        overrides.Set(key, text.at(key));
      }
    }
    values.Merge(overrides);
    return values;
  }
};

std::unique_ptr<Subcommand> AddSubcommand(CLI::App& app, const std::string& name,
                                          const std::string& description,
                                          std::vector<std::string> keys) {
  auto sub = std::make_unique<Subcommand>();
  sub->app = app.add_subcommand(name, description);
  sub->keys = std::move(keys);
  for (const std::string& key : sub->keys) {
    const ConfigKey* spec = FindConfigKey(key);
    std::string names = "--" + key;
    const std::string dashed = [&] {
      std::string d = key;
      std::replace(d.begin(), d.end(), '_', '-');
      return d;
    }();
    if (dashed != key) names += ",--" + dashed;
    CLI::Option* opt;
    if (spec->type == ValueType::kBool) {
      opt = sub->app->add_flag(names, sub->flags[key], spec->help);
    } else {
      opt = sub->app->add_option(names, sub->text[key], spec->help);
    }
    sub->options[key] = opt;
  }
  return sub;
}

MatrixSource SourceFrom(const ConfigValues& cfg) {
  MatrixSource source;
  if (cfg.Has("matrix")) {
    source.generator.clear();
    source.file = *cfg.GetString("matrix");
    return source;
  }
  source.generator = cfg.GetString("kind").value_or("policeman-burglar");
  if (cfg.Has("n") && cfg.Has("M") && *cfg.GetInt("n") != *cfg.GetInt("M")) {
    throw ConfigError("n and M disagree");
  }
  const std::int64_t n = cfg.GetInt("n").value_or(cfg.GetInt("M").value_or(50));
  if (n < 1) throw ConfigError("n must be positive");
  source.n = n;
  source.theta = cfg.GetDouble("theta").value_or(kDefaultPolicemanTheta);
  source.seed = std::uint64_t(
      cfg.GetInt("matrix_seed").value_or(cfg.GetInt("seed").value_or(0)));
  return source;
}

MethodSpec SpecFrom(const ConfigValues& cfg, Method method) {
  MethodSpec spec;
  spec.method = method;
  const std::string theory = cfg.GetString("theory").value_or(
      cfg.Has("eta") && cfg.Has("gamma") ? "none" : "cor1");
  if (theory == "cor1") {
    spec.theory = TheoryVariant::kEuclideanLipschitz;
  } else if (theory == "cor2") {
    spec.theory = TheoryVariant::kDualNormLipschitz;
  } else if (theory == "none") {
    spec.theory.reset();
  } else {
    throw ConfigError("unknown theory '" + theory + "' (valid: cor1, cor2, none)");
  }
  if (auto v = cfg.GetDouble("eta")) spec.eta = *v;
  if (auto v = cfg.GetDouble("gamma")) spec.gamma = *v;
  spec.c = cfg.GetDouble("C").value_or(1.0);
  spec.eta_scale = cfg.GetDouble("eta_scale").value_or(8.0);
  spec.scheme = ParseSampling(cfg.GetString("scheme").value_or("importance"));
  spec.shared_batch = cfg.GetBool("shared_batch").value_or(false);
  return spec;
}

std::int64_t BudgetFrom(const ConfigValues& cfg, Index m) {
  if (auto v = cfg.GetInt("budget")) {
    if (*v <= 0) throw ConfigError("budget must be positive");
    return *v;
  }
  const double multiple = cfg.GetDouble("budget_m").value_or(200.0);
  if (!(multiple > 0)) throw ConfigError("budget_m must be positive");
  return std::int64_t(std::llround(multiple * double(m)));
}

int ParallelFrom(const ConfigValues& cfg) {
  if (auto v = cfg.GetInt("parallel")) {
    if (*v < 1) throw ConfigError("parallel must be >= 1");
    return int(*v);
  }
  if (const char* env = std::getenv("BVI_THREADS"); env && *env) {
    const std::int64_t v = ParseInt(env, "BVI_THREADS");
    if (v < 1) throw ConfigError("BVI_THREADS must be >= 1");
    return int(v);
  }
  return 1;
}

std::vector<std::uint64_t> SeedsFrom(const ConfigValues& cfg) {
  std::vector<std::uint64_t> seeds;
  if (auto list = cfg.GetIntList("seeds")) {
    for (std::int64_t s : *list) seeds.push_back(std::uint64_t(s));
  } else {
    seeds.push_back(std::uint64_t(cfg.GetInt("seed").value_or(0)));
  }
  return seeds;
}

int CmdGen(const ConfigValues& cfg) {
  MatrixSource source = SourceFrom(cfg);
  if (source.generator.empty()) throw ConfigError("gen needs --kind, not --matrix");
  const MatrixXd a = source.Load();
  const std::filesystem::path out = cfg.GetString("out").value_or(
      source.generator + "_n" + std::to_string(source.n) + "_s" +
      std::to_string(source.seed) + ".bvi");
  const std::string bytes = EncodeMatrix(a);
  WriteFileBytes(out, bytes);
  nlohmann::ordered_json meta;
  meta["generator"] = source.generator;
  meta["n"] = source.n;
  meta["seed"] = source.seed;
  if (source.generator == "policeman-burglar") meta["theta"] = source.theta;
  meta["rows"] = a.rows();
  meta["cols"] = a.cols();
  meta["crc32"] = Crc32(bytes);
  WriteFileBytes(out.string() + ".json", meta.dump(2) + "\n");
  std::cout << "wrote " << out.string() << " (" << a.rows() << "x" << a.cols()
            << ", crc32 " << Crc32(bytes) << ")\n";
  return kExitOk;
}

int CmdRun(const ConfigValues& cfg) {
  const MatrixSource source = SourceFrom(cfg);
  const MatrixGame game(source.Load());
  const Index m = game.num_components();
  const Method method = ParseMethod(cfg.GetString("method").value_or("alg1"));
  const MethodSpec spec = SpecFrom(cfg, method);
  const int b = int(cfg.GetInt("b").value_or(1));
  const std::uint64_t seed = std::uint64_t(cfg.GetInt("seed").value_or(0));
  const SolverConfig config = ResolveConfig(game, spec, b, seed);
  const std::int64_t budget = BudgetFrom(cfg, m);

  std::cout << "# method=" << MethodName(method) << " matrix=" << source.Label()
            << " M=" << m << " b=" << config.batch_size
            << " K=" << config.inner_iterations
            << " gamma=" << FormatDouble(config.gamma)
            << " eta=" << FormatDouble(config.eta) << " seed=" << seed
            << " budget=" << budget << "\n";

  TraceOptions options;
  options.gap_every = cfg.GetInt("gap_every").value_or(m);
  if (options.gap_every <= 0) throw ConfigError("gap_every must be positive");
  options.record_time = cfg.GetBool("record_time").value_or(false);
  RunRecord record = RunCell(game, spec, b, seed, budget, options);
  record.matrix = source.Label();
  if (auto out = cfg.GetString("out")) {
    WriteTraceCsvFile(*out, {record});
  } else {
    WriteTraceCsv(std::cout, {record});
  }
  std::cout << "final_gap=" << FormatDouble(record.final_gap())
            << " oracle_calls=" << record.solver_calls << "\n";
  return kExitOk;
}

int CmdSweep(const ConfigValues& cfg) {
  ExperimentPlan plan;
  plan.source = SourceFrom(cfg);
  const MatrixXd a = plan.source.Load();
  const Index m = a.rows();
  for (const std::string& name : cfg.GetStringList("methods").value_or(
           std::vector<std::string>{"alg1", "mirror-prox", "vr-mirror-prox"})) {
    plan.methods.push_back(SpecFrom(cfg, ParseMethod(name)));
  }
  for (std::int64_t b : cfg.GetIntList("batches").value_or(
           std::vector<std::int64_t>{1, 2, 5, 10})) {
    plan.batches.push_back(int(b));
  }
  plan.budget = BudgetFrom(cfg, m);
  plan.gap_every = cfg.GetInt("gap_every").value_or(m);
  plan.seeds = SeedsFrom(cfg);
  plan.parallel = ParallelFrom(cfg);
  plan.record_time = cfg.GetBool("record_time").value_or(false);
  if (auto out = cfg.GetString("out")) {
    plan.output_dir = *out;
    std::filesystem::create_directories(plan.output_dir);
  }
  const std::vector<RunRecord> records = SweepBatches(plan);
  std::cout << "method,b,seed,final_gap,oracle_calls\n";
  for (const RunRecord& r : records) {
    std::cout << r.method << ',' << r.batch_size << ',' << r.seed << ','
              << FormatDouble(r.final_gap()) << ',' << r.solver_calls << "\n";
  }
  return kExitOk;
}

int CmdTune(const ConfigValues& cfg) {
  const MatrixSource source = SourceFrom(cfg);
  const MatrixGame game(source.Load());
  const Index m = game.num_components();
  const Method method = ParseMethod(cfg.GetString("method").value_or("alg1"));
  MethodSpec spec;
  spec.method = method;
  spec.theory.reset();
  spec.scheme = ParseSampling(cfg.GetString("scheme").value_or("importance"));
  spec.shared_batch = cfg.GetBool("shared_batch").value_or(false);
  const auto eta_grid = cfg.GetDoubleList("eta_grid");
  if (!eta_grid || eta_grid->empty()) throw ConfigError("tune needs a non-empty eta_grid");
  const int b = int(cfg.GetInt("b").value_or(1));
  if (b < 1) throw ConfigError("b must be >= 1");
  // Without a gamma grid, tune eta alone at gamma = 1/K, K = M / 3b.
  const double default_gamma =
      1.0 / double(std::max<std::int64_t>(1, std::llround(double(m) / (3.0 * b))));
  const std::vector<double> gamma_grid =
      cfg.GetDoubleList("gamma_grid").value_or(std::vector<double>{default_gamma});
  const GridSearchResult result =
      GridSearch(game, spec, b, *eta_grid, gamma_grid, BudgetFrom(cfg, m),
                 SeedsFrom(cfg), ParallelFrom(cfg));
  std::ostringstream table;
  table << "rank,eta,gamma,final_gap\n";
  for (std::size_t i = 0; i < result.leaderboard.size(); ++i) {
    const LeaderboardEntry& e = result.leaderboard[i];
    table << i + 1 << ',' << FormatDouble(e.eta) << ',' << FormatDouble(e.gamma)
          << ',' << FormatDouble(e.final_gap) << "\n";
  }
  if (auto out = cfg.GetString("out")) {
    std::filesystem::create_directories(*out);
    WriteFileBytes(std::filesystem::path(*out) / "leaderboard.csv", table.str());
  }
  std::cout << table.str();
  std::cout << "# best eta=" << FormatDouble(result.best.eta)
            << " gamma=" << FormatDouble(result.best.gamma) << "\n";
  return kExitOk;
}

int CmdPlot(const ConfigValues& cfg, const std::vector<std::string>& positional) {
  std::vector<std::string> inputs =
      cfg.GetStringList("inputs").value_or(std::vector<std::string>{});
  inputs.insert(inputs.end(), positional.begin(), positional.end());
  std::vector<RunRecord> records;
  for (const std::string& path : inputs) {
    std::vector<RunRecord> part = ReadTraceCsvFile(path);
    records.insert(records.end(), part.begin(), part.end());
  }
  const std::string svg = RenderGapPlotSvg(records);
  if (auto out = cfg.GetString("out")) {
    WriteFileBytes(*out, svg);
  } else {
    std::cout << svg;
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Variance-reduced solvers for finite-sum monotone VIs"};
  app.require_subcommand(1);
  auto gen = AddSubcommand(app, "gen", "write a test matrix and its metadata",
                           {"config", "kind", "n", "M", "theta", "seed", "out"});
  auto run = AddSubcommand(
      app, "run", "run one configuration and write its trace CSV",
      Keys({"seed", "method", "theory", "eta", "gamma", "eta_scale", "C", "b",
            "budget", "budget_m", "gap_every", "scheme", "shared_batch",
            "record_time", "out"},
           true));
  auto sweep = AddSubcommand(
      app, "sweep", "run methods x batch sizes x seeds",
      Keys({"seed", "seeds", "methods", "theory", "eta", "gamma", "eta_scale",
            "C", "batches", "budget", "budget_m", "gap_every", "scheme",
            "shared_batch", "record_time", "parallel", "out"},
           true));
  auto tune = AddSubcommand(
      app, "tune", "grid search over eta and gamma",
      Keys({"seed", "seeds", "method", "b", "eta_grid", "gamma_grid", "budget",
            "budget_m", "scheme", "shared_batch", "parallel", "out"},
           true));
  auto plot = AddSubcommand(app, "plot", "draw gap vs. oracle calls as SVG",
                            {"config", "inputs", "out"});
  plot->app->add_option("files", plot->positional, "trace CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->app->parsed()) return CmdGen(gen->Resolve());
    if (run->app->parsed()) return CmdRun(run->Resolve());
    if (sweep->app->parsed()) return CmdSweep(sweep->Resolve());
    if (tune->app->parsed()) return CmdTune(tune->Resolve());
    if (plot->app->parsed()) return CmdPlot(plot->Resolve(), plot->positional);
  } catch (const FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFeasibility;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace
}  // namespace bvi

int main(int argc, char** argv) { return bvi::Main(argc, argv); }
