/*
 * Copyright 2026 The GeoShap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoshap/analysis.hpp"
#include "geoshap/bridge.hpp"
#include "geoshap/error.hpp"
#include "geoshap/io.hpp"
#include "geoshap/kernel.hpp"
#include "geoshap/models.hpp"
#include "geoshap/synthetic.hpp"

namespace geoshap::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kCvFolds = 5;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return kExitUsage;
    case ErrorKind::kData: return kExitData;
    case ErrorKind::kModel: return kExitModel;
    case ErrorKind::kNumerical: return kExitNumerical;
    case ErrorKind::kBudget: return kExitBudget;
    case ErrorKind::kBridge: return kExitBridge;
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitInternal;
}

std::size_t DefaultThreads() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Tracks one command invocation. The hashed part is {tool, version, command,
// config}; inputs, outputs, thread counts and timings are recorded alongside
// but never change the artifact bytes.
class Run {
 public:
  explicit Run(std::string command) : command_(std::move(command)), start_(Clock::now()) {}

  Json& config() { return config_; }
  Json& info() { return info_; }

  void Mark(const std::string& stage) {
    const auto now = Clock::now();
    timings_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }

  const std::string& hash() {
    if (hash_.empty()) hash_ = Sha256Hex(HashedPart().dump());
    return hash_;
  }

  void Finish(const std::filesystem::path& artifact) {
    Json manifest = HashedPart();
    manifest["manifest_hash"] = hash();
    for (auto& [key, value] : info_.items()) manifest[key] = value;
    Json timings = Json::object();
    for (const auto& [stage, ms] : timings_) timings[stage] = ms;
    timings["total"] = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    manifest["timings_ms"] = std::move(timings);
    WriteFile(artifact.string() + ".manifest.json", manifest.dump(1) + "\n");
  }

 private:
  Json HashedPart() const {
    Json out;
    out["tool"] = "geoshap";
    out["version"] = GEOSHAP_VERSION;
    out["command"] = command_;
    out["config"] = config_;
    return out;
  }

  std::string command_;
  Clock::time_point start_;
  Clock::time_point last_ = Clock::now();
  Json config_ = Json::object();
  Json info_ = Json::object();
  std::map<std::string, double> timings_;
  std::string hash_;
};

struct DataOptions {
  std::string path;
  std::string coords = "u,v";
  std::string target;
  std::string id_column;
  std::vector<std::string> features;
  std::vector<std::string> exclude;
};

struct ModelOptions {
  std::string kind = "gbt";
  std::string command;
  std::string file;
  int trees = 200;
  int depth = 3;
  double rate = 0.1;
  int min_leaf = 5;
  double subsample = 1.0;
  double lengthscale = 1.0;
  double ridge = 1e-3;
  long timeout_ms = 60000;
};

struct ExplainOptions {
  std::size_t background = kDefaultBackgroundSize;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  bool no_geo = false;
  std::string solver = "qr";
  std::size_t threads = 1;
};

void AddDataOptions(CLI::App* app, DataOptions& o) {
  app->add_option("--data", o.path, "input CSV with a header row")->required();
  app->add_option("--coords", o.coords, "coordinate columns as x,y")->capture_default_str();
  app->add_option("--target", o.target, "response column");
  app->add_option("--id-column", o.id_column, "column holding row ids");
  app->add_option("--features", o.features, "feature columns (default: all others)")
      ->delimiter(',');
  app->add_option("--exclude", o.exclude, "columns to leave out")->delimiter(',');
}

void AddModelOptions(CLI::App* app, ModelOptions& o) {
  app->add_option("--model", o.kind, "built-in model: gbt, linear or krr")
      ->capture_default_str();
  app->add_option("--model-cmd", o.command, "command starting a model server");
  app->add_option("--model-file", o.file, "saved model artifact");
  app->add_option("--trees", o.trees, "boosting rounds")->capture_default_str();
  app->add_option("--depth", o.depth, "tree depth")->capture_default_str();
  app->add_option("--learning-rate", o.rate, "boosting shrinkage")->capture_default_str();
  app->add_option("--min-leaf", o.min_leaf, "minimum rows per leaf")->capture_default_str();
  app->add_option("--subsample", o.subsample, "row fraction per tree")->capture_default_str();
  app->add_option("--lengthscale", o.lengthscale, "krr RBF lengthscale")->capture_default_str();
  app->add_option("--ridge", o.ridge, "krr ridge penalty")->capture_default_str();
  app->add_option("--timeout-ms", o.timeout_ms, "model server response timeout")
      ->capture_default_str();
}

void AddExplainOptions(CLI::App* app, ExplainOptions& o) {
  app->add_option("--background", o.background, "background rows")->capture_default_str();
  app->add_option("--seed", o.seed, "global seed")->capture_default_str();
  app->add_option("--budget", o.budget, "coalition budget (0: default)")->capture_default_str();
  app->add_flag("--no-geo", o.no_geo, "plain Shapley values, coordinates held fixed");
  app->add_option("--solver", o.solver, "qr or normal")->capture_default_str();
  app->add_option("--threads", o.threads, std::string("worker threads (default $") +
                                               kThreadsEnv + " or 1)");
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

DataSet LoadData(const DataOptions& o, Run& run, std::ostream& err) {
  const std::vector<std::string> coords = SplitList(o.coords);
  if (coords.size() != 2) {
    Fail(ErrorKind::kInvalidArgument, "--coords needs two column names, got '" + o.coords + "'");
  }
  CsvSelection selection;
  selection.x_column = coords[0];
  selection.y_column = coords[1];
  if (!o.target.empty()) selection.target = o.target;
  if (!o.id_column.empty()) selection.id_column = o.id_column;
  selection.include = o.features;
  selection.exclude = o.exclude;
  IngestReport report;
  DataSet data = IngestCsv(o.path, selection, &report);
  if (!report.dropped_row_ids.empty()) {
    err << "warning: dropped " << report.dropped_row_ids.size()
        << " rows with missing values:";
    for (const auto& id : report.dropped_row_ids) err << ' ' << id;
    err << '\n';
  }
  Json& c = run.config()["data"];
  c["sha256"] = Sha256Hex(ReadFile(o.path));
  c["coords"] = coords;
  c["target"] = o.target.empty() ? Json() : Json(o.target);
  c["id_column"] = o.id_column.empty() ? Json() : Json(o.id_column);
  c["features"] = data.feature_names();
  run.info()["inputs"]["data"] = o.path;
  run.info()["rows"] = {{"read", report.rows_read},
                        {"used", data.n_rows()},
                        {"dropped", report.dropped_row_ids}};
  run.Mark("ingest");
  return data;
}

std::unique_ptr<Trainer> BuiltinTrainer(const ModelOptions& o, std::uint64_t seed) {
  switch (ParseModelKind(o.kind)) {
    case ModelKind::kLinear:
      return std::make_unique<LinearTrainer>();
    case ModelKind::kKernelRidge:
      return std::make_unique<KernelRidgeTrainer>(o.lengthscale, o.ridge);
    case ModelKind::kBoostedTrees: {
      BoostedTreesConfig cfg;
      cfg.trees = o.trees;
      cfg.depth = o.depth;
      cfg.rate = o.rate;
      cfg.min_leaf = o.min_leaf;
      cfg.subsample = o.subsample;
      cfg.seed = seed;
      return std::make_unique<BoostedTreesTrainer>(cfg);
    }
  }
  Fail(ErrorKind::kInvalidArgument, "unknown model kind");
}

Json BuiltinConfig(const ModelOptions& o, std::uint64_t seed) {
  Json c;
  c["source"] = "builtin";
  c["kind"] = ModelKindName(ParseModelKind(o.kind));
  switch (ParseModelKind(o.kind)) {
    case ModelKind::kLinear:
      break;
    case ModelKind::kKernelRidge:
      c["lengthscale"] = o.lengthscale;
      c["ridge"] = o.ridge;
      break;
    case ModelKind::kBoostedTrees:
      c["trees"] = o.trees;
      c["depth"] = o.depth;
      c["learning_rate"] = o.rate;
      c["min_leaf"] = o.min_leaf;
      c["subsample"] = o.subsample;
      c["seed"] = seed;
      break;
  }
  return c;
}

void CheckModelSource(const ModelOptions& o) {
  if (!o.command.empty() && !o.file.empty()) {
    Fail(ErrorKind::kInvalidArgument, "--model-cmd and --model-file are mutually exclusive");
  }
  if (o.timeout_ms <= 0) Fail(ErrorKind::kInvalidArgument, "--timeout-ms must be positive");
}

BridgeOptions MakeBridgeOptions(const ModelOptions& o) {
  BridgeOptions b;
  b.timeout = std::chrono::milliseconds(o.timeout_ms);
  return b;
}

// Resolves the oracle to explain: a saved artifact, a model server (refitted
// on the data when it is trainable and a target is present) or a built-in
// model trained on the data.
OraclePtr ResolveOracle(const DataSet& data, const ModelOptions& o, std::uint64_t seed,
                        Run& run, std::ostream& out, std::string* save_model) {
  CheckModelSource(o);
  Json& c = run.config()["model"];
  if (!o.file.empty()) {
    TrainedModelPtr model = LoadModel(o.file);
    if (model->n_columns() != data.n_columns()) {
      Fail(ErrorKind::kModel, "model artifact expects " + std::to_string(model->n_columns()) +
                                  " columns, dataset layout has " +
                                  std::to_string(data.n_columns()));
    }
    c["source"] = "file";
    c["kind"] = ModelKindName(model->kind());
    c["sha256"] = Sha256Hex(ReadFile(o.file));
    run.info()["inputs"]["model_file"] = o.file;
    run.Mark("model");
    return model;
  }
  if (!o.command.empty()) {
    BridgeSessionPtr session =
        BridgeSession::Handshake(o.command, data.n_columns(), MakeBridgeOptions(o));
    c["source"] = "command";
    c["command"] = o.command;
    const bool refit = session->capabilities().trainable && data.target();
    c["refit"] = refit;
    if (refit) session->FitRemote(data.model_matrix(), *data.target());
    run.Mark("model");
    return std::make_shared<BridgeOracle>(std::move(session));
  }
  if (!data.target()) {
    Fail(ErrorKind::kInvalidArgument,
         "training a built-in model needs --target (or use --model-file / --model-cmd)");
  }
  c = BuiltinConfig(o, seed);
  const std::unique_ptr<Trainer> trainer = BuiltinTrainer(o, seed);
  const Matrix rows = data.model_matrix();
  const double r2 = CrossValidatedR2(*trainer, rows, *data.target(), kCvFolds, seed);
  run.Mark("cross_validation");
  run.info()["cv"] = {{"folds", kCvFolds}, {"seed", seed}, {"r2", r2}};
  out << "five-fold cross-validated R^2: " << FormatDouble(r2) << '\n';
  OraclePtr model = trainer->fit(rows, *data.target());
  run.Mark("model");
  if (save_model != nullptr && !save_model->empty()) {
    SaveModel(dynamic_cast<const TrainedModel&>(*model), *save_model);
    run.info()["outputs"]["model"] = *save_model;
  }
  return model;
}

ExplainConfig MakeExplainConfig(const ExplainOptions& o, Run& run) {
  ExplainConfig cfg;
  cfg.budget = o.budget;
  cfg.seed = o.seed;
  cfg.include_geo = !o.no_geo;
  if (o.solver == "qr") {
    cfg.solver = SolverPath::kQr;
  } else if (o.solver == "normal") {
    cfg.solver = SolverPath::kNormalEquations;
  } else {
    Fail(ErrorKind::kInvalidArgument, "--solver must be qr or normal, got '" + o.solver + "'");
  }
  if (o.threads == 0) Fail(ErrorKind::kInvalidArgument, "--threads must be at least 1");
  cfg.threads = o.threads;
  Json& c = run.config()["explain"];
  c["background"] = o.background;
  c["seed"] = o.seed;
  c["budget"] = o.budget;
  c["include_geo"] = cfg.include_geo;
  c["solver"] = o.solver;
  run.info()["threads"] = o.threads;
  return cfg;
}

ExplanationSet ComputeExplanations(const DataSet& data, const ModelOptions& model,
                                   const ExplainOptions& explain, Run& run,
                                   std::ostream& out, std::string* save_model = nullptr) {
  const ExplainConfig cfg = MakeExplainConfig(explain, run);
  const OraclePtr oracle = ResolveOracle(data, model, explain.seed, run, out, save_model);
  const BackgroundSet background = BackgroundSet::Sample(data, explain.background, explain.seed);
  ExplanationSet e = Explain(data, *oracle, background, cfg);
  run.Mark("explain");
  return e;
}

// Explanations either read from a previous explain run or computed here.
ExplanationSet ObtainExplanations(const std::string& path, const DataSet& data,
                                  const ModelOptions& model, const ExplainOptions& explain,
                                  Run& run, std::ostream& out) {
  if (path.empty()) return ComputeExplanations(data, model, explain, run, out);
  ExplanationSet e = ParseExplanationJson(ReadFile(path));
  if (e.rows.size() != data.n_rows()) {
    Fail(ErrorKind::kData, "explanation file has " + std::to_string(e.rows.size()) +
                               " rows, dataset has " + std::to_string(data.n_rows()));
  }
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (e.rows[i].row_id != data.row_ids()[i]) {
      Fail(ErrorKind::kData, "explanation row " + std::to_string(i) + " has id '" +
                                 e.rows[i].row_id + "', dataset has '" + data.row_ids()[i] +
                                 "'");
    }
  }
  if (e.feature_names != data.feature_names()) {
    Fail(ErrorKind::kData, "explanation features do not match the selected dataset features");
  }
  run.config()["explanations_sha256"] = Sha256Hex(ReadFile(path));
  run.info()["inputs"]["explanations"] = path;
  run.Mark("load_explanations");
  return e;
}

void Emit(Run& run, const std::string& path, const std::string& text, std::ostream& out) {
  WriteFile(path, text);
  run.info()["outputs"]["artifact"] = path;
  run.Finish(path);
  out << "wrote " << path << " (manifest " << run.hash().substr(0, 12) << ")\n";
}

SvcOptions MakeSvcOptions(const std::string& kernel, const std::string& bandwidth, Json& c) {
  SvcOptions o;
  o.kernel = ParseSpatialKernel(kernel);
  c["kernel"] = SpatialKernelName(o.kernel);
  if (bandwidth == "auto") {
    c["bandwidth"] = "auto";
  } else {
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(bandwidth, &used);
      if (used != bandwidth.size()) throw std::invalid_argument(bandwidth);
    } catch (const std::exception&) {
      Fail(ErrorKind::kInvalidArgument, "--bandwidth must be 'auto' or a number");
    }
    o.bandwidth = value;
    c["bandwidth"] = value;
  }
  return o;
}

// --- commands -------------------------------------------------------------

struct SimulateArgs {
  std::string process = "svc";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::optional<double> noise;
  std::size_t null_features = 0;
  std::string out;
  std::string truth_out;
};

void Simulate(const SimulateArgs& a, std::ostream& out) {
  Run run("simulate");
  SyntheticTruth truth = [&] {
    if (a.process == "svc") return GenerateSvc(a.n, a.seed, a.noise.value_or(0.2), a.null_features);
    if (a.process == "nonlinear") {
      if (a.null_features != 0) {
        Fail(ErrorKind::kInvalidArgument, "--null-features applies to the svc process only");
      }
      return GenerateNonlinear(a.n, a.seed, a.noise.value_or(0.1));
    }
    Fail(ErrorKind::kInvalidArgument, "--process must be svc or nonlinear");
  }();
  run.Mark("generate");
  Json& c = run.config();
  c["process"] = a.process;
  c["n"] = a.n;
  c["seed"] = a.seed;
  c["noise_sd"] = truth.noise_sd;
  c["null_features"] = a.null_features;
  std::string truth_path = a.truth_out;
  if (truth_path.empty()) {
    std::filesystem::path p(a.out);
    truth_path = (p.parent_path() / (p.stem().string() + ".truth.csv")).string();
  }
  WriteFile(truth_path, TruthCsv(truth, run.hash()));
  run.info()["outputs"]["truth"] = truth_path;
  Emit(run, a.out, SimulationCsv(truth, run.hash()), out);
}

struct ExplainArgs {
  DataOptions data;
  ModelOptions model;
  ExplainOptions explain;
  std::string out;
  std::string save_model;
};

void ExplainCommand(ExplainArgs& a, std::ostream& out, std::ostream& err) {
  Run run("explain");
  const DataSet data = LoadData(a.data, run, err);
  const ExplanationSet e = ComputeExplanations(data, a.model, a.explain, run, out, &a.save_model);
  Emit(run, a.out, ExplanationJson(e, run.hash()), out);
}

struct ImportanceArgs {
  DataOptions data;
  ModelOptions model;
  ExplainOptions explain;
  std::string explanations;
  std::string out;
};

void ImportanceCommand(const ImportanceArgs& a, std::ostream& out, std::ostream& err) {
  Run run("importance");
  const DataSet data = LoadData(a.data, run, err);
  const ExplanationSet e = ObtainExplanations(a.explanations, data, a.model, a.explain, run, out);
  const ImportanceTable table = GlobalImportance(e);
  run.Mark("importance");
  Emit(run, a.out, ImportanceCsv(table, run.hash()), out);
}

struct PdpArgs {
  DataOptions data;
  ModelOptions model;
  ExplainOptions explain;
  std::string explanations;
  std::vector<std::string> features;
  std::string out;
};

void PdpCommand(const PdpArgs& a, std::ostream& out, std::ostream& err) {
  Run run("pdp");
  const DataSet data = LoadData(a.data, run, err);
  const ExplanationSet e = ObtainExplanations(a.explanations, data, a.model, a.explain, run, out);
  const std::vector<std::string> features = a.features.empty() ? data.feature_names() : a.features;
  std::vector<std::vector<DependencePoint>> points;
  for (const auto& f : features) points.push_back(PdpPoints(e, data, f));
  run.config()["pdp_features"] = features;
  run.Mark("pdp");
  Emit(run, a.out, PdpCsv(features, points, e, run.hash()), out);
}

struct SvcArgs {
  DataOptions data;
  ModelOptions model;
  ExplainOptions explain;
  std::string explanations;
  std::string feature;
  std::string kernel = "bisquare";
  std::string bandwidth = "auto";
  std::string bootstrap;
  std::string out;
};

void SvcCommand(const SvcArgs& a, std::ostream& out, std::ostream& err) {
  Run run("svc");
  const DataSet data = LoadData(a.data, run, err);
  const ExplanationSet e = ObtainExplanations(a.explanations, data, a.model, a.explain, run, out);
  Json& c = run.config()["svc"];
  c["feature"] = a.feature;
  const SvcOptions options = MakeSvcOptions(a.kernel, a.bandwidth, c);
  SvcSurface surface = SvcExtract(e, data, a.feature, options);
  run.info()["svc_bandwidth"] = surface.bandwidth;
  run.Mark("svc");
  if (!a.bootstrap.empty()) {
    const BootstrapSummary summary = ParseBootstrapJson(ReadFile(a.bootstrap));
    if (summary.row_ids != data.row_ids()) {
      Fail(ErrorKind::kData, "bootstrap file rows do not match the dataset rows");
    }
    MaskSurface(surface, summary);
    run.config()["bootstrap_sha256"] = Sha256Hex(ReadFile(a.bootstrap));
    run.info()["inputs"]["bootstrap"] = a.bootstrap;
    std::size_t masked = 0;
    for (bool m : surface.masked) masked += m ? 1 : 0;
    out << masked << " of " << surface.masked.size()
        << " locations masked (95% interval contains zero)\n";
  }
  Emit(run, a.out, SvcGeoJson(surface, e, run.hash()), out);
}

struct BootstrapArgs {
  DataOptions data;
  ModelOptions model;
  ExplainOptions explain;
  std::size_t replicates = BootstrapConfig{}.replicates;
  bool no_svc = false;
  std::string kernel = "bisquare";
  std::string bandwidth = "auto";
  std::string out;
};

void BootstrapCommand(const BootstrapArgs& a, std::ostream& out, std::ostream& err) {
  Run run("bootstrap");
  const DataSet data = LoadData(a.data, run, err);
  if (!data.target()) Fail(ErrorKind::kInvalidArgument, "bootstrap needs --target");
  CheckModelSource(a.model);
  if (!a.model.file.empty()) {
    Fail(ErrorKind::kInvalidArgument,
         "bootstrap refits the model on every resample; use --model or --model-cmd");
  }
  const ExplainConfig explain = MakeExplainConfig(a.explain, run);
  std::unique_ptr<Trainer> trainer;
  if (!a.model.command.empty()) {
    trainer = std::make_unique<BridgeTrainer>(a.model.command, data.n_columns(),
                                              MakeBridgeOptions(a.model));
    run.config()["model"] = {{"source", "command"}, {"command", a.model.command}};
  } else {
    trainer = BuiltinTrainer(a.model, a.explain.seed);
    run.config()["model"] = BuiltinConfig(a.model, a.explain.seed);
  }
  BootstrapConfig cfg;
  cfg.replicates = a.replicates;
  cfg.seed = a.explain.seed;
  cfg.threads = a.explain.threads;
  cfg.svc = !a.no_svc;
  Json& c = run.config()["bootstrap"];
  c["replicates"] = a.replicates;
  c["seed"] = cfg.seed;
  c["svc"] = cfg.svc;
  if (cfg.svc) cfg.svc_options = MakeSvcOptions(a.kernel, a.bandwidth, c["svc_options"]);
  const BackgroundSet background = BackgroundSet::Sample(data, a.explain.background, a.explain.seed);
  const BootstrapSummary summary = Bootstrap(data, *trainer, background, explain, cfg);
  run.Mark("bootstrap");
  run.info()["replicates_failed"] = summary.failed;
  out << summary.replicates << " of " << a.replicates << " replicates succeeded\n";
  Emit(run, a.out, BootstrapJson(summary, run.hash()), out);
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shapley and GeoShapley explanations for models of geospatial data", "geoshap"};
  app.set_version_flag("--version", std::string(GEOSHAP_VERSION));
  app.require_subcommand(1);

  const std::size_t threads = DefaultThreads();

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "write a synthetic dataset and its truth");
  simulate->add_option("--process", sim.process, "svc or nonlinear")->capture_default_str();
  simulate->add_option("--n", sim.n, "rows")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "generator seed")->capture_default_str();
  simulate->add_option("--noise", sim.noise, "noise standard deviation (svc 0.2, nonlinear 0.1)");
  simulate->add_option("--null-features", sim.null_features,
                       "extra features with zero coefficient (svc only)")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "output CSV")->required();
  simulate->add_option("--truth-out", sim.truth_out, "truth CSV (default <out>.truth.csv)");

  ExplainArgs ex;
  ex.explain.threads = threads;
  CLI::App* explain = app.add_subcommand("explain", "explain every row of a dataset");
  AddDataOptions(explain, ex.data);
  AddModelOptions(explain, ex.model);
  AddExplainOptions(explain, ex.explain);
  explain->add_option("--out", ex.out, "explanation JSON")->required();
  explain->add_option("--save-model", ex.save_model, "write the trained built-in model");

  ImportanceArgs imp;
  imp.explain.threads = threads;
  CLI::App* importance = app.add_subcommand("importance", "global mean |phi| per component");
  AddDataOptions(importance, imp.data);
  AddModelOptions(importance, imp.model);
  AddExplainOptions(importance, imp.explain);
  importance->add_option("--explanations", imp.explanations, "reuse an explanation JSON");
  importance->add_option("--out", imp.out, "importance CSV")->required();

  PdpArgs pd;
  pd.explain.threads = threads;
  CLI::App* pdp = app.add_subcommand("pdp", "partial dependence points (feature value, phi)");
  AddDataOptions(pdp, pd.data);
  AddModelOptions(pdp, pd.model);
  AddExplainOptions(pdp, pd.explain);
  pdp->add_option("--explanations", pd.explanations, "reuse an explanation JSON");
  pdp->add_option("--feature", pd.features, "features to emit (default: all)")->delimiter(',');
  pdp->add_option("--out", pd.out, "PDP CSV")->required();

  SvcArgs sv;
  sv.explain.threads = threads;
  CLI::App* svc = app.add_subcommand("svc", "spatially varying coefficient surface");
  AddDataOptions(svc, sv.data);
  AddModelOptions(svc, sv.model);
  AddExplainOptions(svc, sv.explain);
  svc->add_option("--explanations", sv.explanations, "reuse an explanation JSON");
  svc->add_option("--feature", sv.feature, "feature whose coefficient to map")->required();
  svc->add_option("--kernel", sv.kernel, "bisquare, uniform or gaussian")->capture_default_str();
  svc->add_option("--bandwidth", sv.bandwidth, "auto, neighbor count or distance")
      ->capture_default_str();
  svc->add_option("--bootstrap", sv.bootstrap, "bootstrap JSON used to mask locations");
  svc->add_option("--out", sv.out, "GeoJSON output")->required();

  BootstrapArgs bs;
  bs.explain.threads = threads;
  CLI::App* bootstrap = app.add_subcommand("bootstrap", "percentile intervals by resampling");
  AddDataOptions(bootstrap, bs.data);
  AddModelOptions(bootstrap, bs.model);
  AddExplainOptions(bootstrap, bs.explain);
  bootstrap->add_option("--replicates", bs.replicates, "resamples")->capture_default_str();
  bootstrap->add_flag("--no-svc", bs.no_svc, "skip local coefficient intervals");
  bootstrap->add_option("--kernel", bs.kernel, "bisquare, uniform or gaussian")
      ->capture_default_str();
  bootstrap->add_option("--bandwidth", bs.bandwidth, "auto, neighbor count or distance")
      ->capture_default_str();
  bootstrap->add_option("--out", bs.out, "bootstrap JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) Simulate(sim, out);
    if (explain->parsed()) ExplainCommand(ex, out, err);
    if (importance->parsed()) ImportanceCommand(imp, out, err);
    if (pdp->parsed()) PdpCommand(pd, out, err);
    if (svc->parsed()) SvcCommand(sv, out, err);
    if (bootstrap->parsed()) BootstrapCommand(bs, out, err);
  } catch (const Error& e) {
    err << "geoshap: " << ErrorKindName(e.kind()) << ": " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "geoshap: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace geoshap::cli
