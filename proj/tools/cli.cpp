// Copyright 2026 The ropnet Authors
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

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ropnet/checkpoint.hpp"
#include "ropnet/config.hpp"
#include "ropnet/data_io.hpp"
#include "ropnet/errors.hpp"
#include "ropnet/explain.hpp"
#include "ropnet/metrics.hpp"
#include "ropnet/preprocess.hpp"
#include "ropnet/train.hpp"

namespace ropnet::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string model;
  std::string checkpoint;
  std::string input;
  std::vector<std::string> overrides;
};

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;
};

RunConfig resolve_config(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? RunConfig{} : RunConfig::load(opt.config_path);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opt.seed) {
    cfg.set("train.seed", std::to_string(*opt.seed));
    cfg.set("data.synthetic.seed", std::to_string(*opt.seed));
  }
  if (!opt.model.empty()) cfg.set("model.kind", opt.model);
  if (!opt.out_dir.empty()) cfg.set("output.dir", opt.out_dir);
  return cfg;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path.string());
  body(file);
  file.flush();
  if (!file) throw Error("failed while writing " + path.string());
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

RawTable load_table(const Context& ctx) {
  const std::string path = ctx.cfg.get_string("data.path");
  if (path.empty()) return generate_synthetic(ctx.cfg.synthetic_spec()).table;
  LoadResult loaded = load_csv(path, ctx.cfg.schema());
  for (const auto& w : loaded.warnings) ctx.err << "warning: " << w << '\n';
  return std::move(loaded.table);
}

PreparedData prepare(const Context& ctx) {
  PreparedData data = prepare_dataset(load_table(ctx), ctx.cfg.pipeline_options());
  for (const auto& w : data.warnings) ctx.err << "warning: " << w << '\n';
  return data;
}

std::vector<double> unscaled(const PreprocessorState& state, const Tensor& column) {
  return inverse_target(state, std::vector<double>(column.data().begin(), column.data().end()));
}

// Metrics in target units over the windows whose target is present.
MetricsReport score(const Model& model, const Dataset& data, const PreprocessorState& state) {
  const std::vector<double> predicted = unscaled(state, predict_dataset(model, data));
  const std::vector<double> actual = unscaled(state, data.targets);
  std::vector<double> a, p;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (is_missing(actual[i])) continue;
    a.push_back(actual[i]);
    p.push_back(predicted[i]);
  }
  return compute_metrics(a, p);
}

json train_config_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate}, {"weight_decay", t.weight_decay}, {"batch_size", t.batch_size},
          {"epochs", t.epochs},           {"dropout", t.dropout},           {"beta1", t.beta1},
          {"beta2", t.beta2},             {"eps", t.eps},                   {"seed", t.seed}};
}

json preprocessing_json(const PreparedData& data) {
  json outliers = json::object();
  for (const auto& [name, report] : data.outliers) outliers[name] = report.to_json();
  return {{"train_samples", data.train.size()},
          {"test_samples", data.test.size()},
          {"split_seed", data.split.seed},
          {"imputation", data.imputation.to_json()},
          {"outliers", outliers},
          {"warnings", data.warnings}};
}

struct TrainedModel {
  Model model;
  LossCurve curve;
  MetricsReport train_metrics;
  MetricsReport test_metrics;
};

TrainedModel train_kind(const Context& ctx, ModelKind kind, const PreparedData& data) {
  ModelSpec spec = ctx.cfg.model_spec(data.state.input_width());
  spec.kind = kind;
  const TrainConfig tc = ctx.cfg.train_config();
  SeededRng init(tc.seed);
  Model model = Model::build(spec, init);
  LossCurve curve = train_model(model, data.train, data.test, tc);
  MetricsReport train_metrics = score(model, data.train, data.state);
  MetricsReport test_metrics = score(model, data.test, data.state);
  return {std::move(model), std::move(curve), train_metrics, test_metrics};
}

void write_training_artifacts(const Context& ctx, const TrainedModel& t, const PreparedData& data) {
  const std::string kind(to_string(t.model.spec().kind));
  write_file(ctx.out_dir / ("losscurve_" + kind + ".csv"),
             [&](std::ostream& o) { write_loss_curve_csv(o, t.curve); });
  json j{{"model", kind},
         {"display_name", display_name(t.model.spec().kind)},
         {"parameters", t.model.parameter_count()},
         {"spec", model_spec_to_json(t.model.spec())},
         {"train_config", train_config_json(ctx.cfg.train_config())},
         {"train", t.train_metrics.to_json()},
         {"test", t.test_metrics.to_json()},
         {"preprocessing", preprocessing_json(data)}};
  write_json(ctx.out_dir / ("metrics_" + kind + ".json"), j);
  save_checkpoint(ctx.out_dir / ("checkpoint_" + kind + ".roph"), t.model, data.state);
}

fs::path checkpoint_path(const Context& ctx, const Options& opt) {
  if (!opt.checkpoint.empty()) return opt.checkpoint;
  return ctx.out_dir / ("checkpoint_" + ctx.cfg.get_string("model.kind") + ".roph");
}

// Columns a checkpoint needs from an input file. Derived columns are
// recomputed, so only the raw ones are listed.
DatasetSchema input_schema(const PreprocessorState& state) {
  DatasetSchema schema;
  for (const auto& name : state.numeric_features) {
    if (state.derived_features && (name == kSpecificEnergyRatio || name == kHydraulicHorsepower)) continue;
    schema.features.push_back({name, "", FeatureKind::kContinuous});
  }
  for (const auto& name : state.categorical_features) schema.features.push_back({name, "", FeatureKind::kCategorical});
  schema.features.push_back({state.target_name, "", FeatureKind::kTarget});
  return schema;
}

// Evaluation data for a checkpoint: the rows of --input, or the configured
// dataset's test split when no input is given.
Dataset evaluation_data(const Context& ctx, const Options& opt, const LoadedCheckpoint& cp) {
  const std::size_t window = cp.model.spec().window_len;
  if (!opt.input.empty()) {
    LoadResult loaded = load_csv(opt.input, input_schema(cp.preprocessor));
    TransformedData t = transform_table(cp.preprocessor, loaded.table, window);
    for (const auto& w : t.warnings) ctx.err << "warning: " << w << '\n';
    return std::move(t.data);
  }
  RunConfig same = ctx.cfg;
  same.set("model.window_len", std::to_string(window));
  const PreparedData data = prepare_dataset(load_table(ctx), same.pipeline_options());
  if (data.state.to_json() != cp.preprocessor.to_json()) {
    throw ConfigError("checkpoint was fitted on different data than the configuration describes; pass --input");
  }
  return data.test;
}

int cmd_gen_data(const Context& ctx) {
  const SyntheticData data = generate_synthetic(ctx.cfg.synthetic_spec());
  save_csv(ctx.out_dir / "synthetic.csv", data.table);
  write_json(ctx.out_dir / "synthetic.truth.json", data.truth.to_json());
  ctx.out << "wrote " << data.table.rows() << " rows to " << (ctx.out_dir / "synthetic.csv").string() << '\n';
  return kExitOk;
}

int cmd_train(const Context& ctx) {
  const PreparedData data = prepare(ctx);
  const ModelKind kind = parse_model_kind(ctx.cfg.get_string("model.kind"));
  const TrainedModel t = train_kind(ctx, kind, data);
  write_training_artifacts(ctx, t, data);
  ctx.out << to_string(kind) << ": test r2=" << format_double(t.test_metrics.r2)
          << " rmse=" << format_double(t.test_metrics.rmse) << '\n';
  return kExitOk;
}

int cmd_eval(const Context& ctx, const Options& opt) {
  const LoadedCheckpoint cp = load_checkpoint(checkpoint_path(ctx, opt));
  const Dataset data = evaluation_data(ctx, opt, cp);
  const MetricsReport report = score(cp.model, data, cp.preprocessor);
  const std::string kind(to_string(cp.model.spec().kind));
  json j{{"model", kind}, {"samples", data.size()}, {"metrics", report.to_json()}};
  write_json(ctx.out_dir / ("eval_" + kind + ".json"), j);
  ctx.out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_predict(const Context& ctx, const Options& opt) {
  if (opt.input.empty()) throw ConfigError("predict requires --input");
  const LoadedCheckpoint cp = load_checkpoint(checkpoint_path(ctx, opt));
  const PreprocessorState& state = cp.preprocessor;

  LoadResult loaded = load_csv(opt.input, input_schema(state), /*require_target=*/false);
  for (const auto& w : loaded.warnings) ctx.err << "warning: " << w << '\n';
  const RawTable& table = loaded.table;
  const TransformedData t = transform_table(state, table, cp.model.spec().window_len);
  for (const auto& w : t.warnings) ctx.err << "warning: " << w << '\n';
  const std::vector<double> predicted = unscaled(state, predict_dataset(cp.model, t.data));

  const bool with_actual = table.has_target();
  write_file(ctx.out_dir / "predictions.csv", [&](std::ostream& o) {
    o << (with_actual ? "sample_index,actual,predicted,abs_error\n" : "sample_index,predicted\n");
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      const std::size_t row = t.sample_rows[i];
      o << row << ',';
      if (with_actual) {
        const double actual = table.target[row];
        o << format_double(actual) << ',' << format_double(predicted[i]) << ','
          << (is_missing(actual) ? "" : format_double(std::fabs(actual - predicted[i])));
      } else {
        o << format_double(predicted[i]);
      }
      o << '\n';
    }
  });
  ctx.out << "wrote " << predicted.size() << " predictions to " << (ctx.out_dir / "predictions.csv").string()
          << '\n';
  return kExitOk;
}

int cmd_compare(const Context& ctx) {
  const PreparedData data = prepare(ctx);
  const std::vector<ModelKind> kinds = ctx.cfg.compare_models();
  std::vector<std::string> rows;
  bool failed = false;
  for (ModelKind kind : kinds) {
    const std::string name(to_string(kind));
    try {
      const TrainedModel t = train_kind(ctx, kind, data);
      write_training_artifacts(ctx, t, data);
      const MetricsReport& m = t.test_metrics;
      rows.push_back(name + ',' + format_double(m.r2) + ',' + format_double(m.mae) + ',' + format_double(m.rmse) +
                     ',' + format_double(m.mape));
      ctx.out << name << ": test r2=" << format_double(m.r2) << '\n';
    } catch (const DivergenceError& e) {
      failed = true;
      rows.push_back(name + ",FAILED,FAILED,FAILED,FAILED");
      ctx.err << name << " diverged: " << e.what() << '\n';
    }
  }
  write_file(ctx.out_dir / "comparison.csv", [&](std::ostream& o) {
    o << "model,r2,mae,rmse,mape_pct\n";
    for (const auto& r : rows) o << r << '\n';
  });
  return failed ? kExitDivergence : kExitOk;
}

int cmd_explain(const Context& ctx, const Options& opt) {
  const LoadedCheckpoint cp = load_checkpoint(checkpoint_path(ctx, opt));
  const Dataset data = evaluation_data(ctx, opt, cp);
  const std::vector<std::string> names = cp.preprocessor.input_names();
  const double sigma = cp.preprocessor.target_sigma;
  const SeededRng root(ctx.cfg.get_u64("train.seed"));
  SeededRng permutation_rng = root.split(1);
  const ImportanceReport importance = permutation_importance(
      predictor_for(cp.model), data, names, permutation_rng, ctx.cfg.get_size("explain.repeats"), sigma * sigma);

  const std::size_t anchor = ctx.cfg.get_size("explain.anchor");
  if (anchor >= data.size()) {
    throw RangeError("explain.anchor " + std::to_string(anchor) + " is outside the " + std::to_string(data.size()) +
                     " evaluation samples");
  }
  std::vector<double> point(data.statics.raw() + anchor * data.features(),
                            data.statics.raw() + (anchor + 1) * data.features());
  const PointPredictor local = last_step_predictor(cp.model, data, anchor);
  SeededRng surrogate_rng = root.split(2);
  const LocalSurrogate surrogate = local_surrogate(local, point, ctx.cfg.get_double("explain.radius"),
                                                   ctx.cfg.get_size("explain.samples"), surrogate_rng);

  write_file(ctx.out_dir / "importance.csv", [&](std::ostream& o) { importance.write_csv(o); });
  json j{{"model", to_string(cp.model.spec().kind)},
         {"permutation", importance.to_json()},
         {"surrogate", surrogate.to_json(names)}};
  write_json(ctx.out_dir / "importance.json", j);
  for (const auto& f : importance.features) {
    if (f.rank <= 3) ctx.out << f.rank << ". " << f.feature << " " << format_double(f.importance) << '\n';
  }
  return kExitOk;
}

void add_options(CLI::App& sub, Options& opt, bool model, bool checkpoint, bool input) {
  sub.add_option("--config", opt.config_path, "key=value configuration file");
  sub.add_option("--seed", opt.seed, "overrides train.seed and data.synthetic.seed");
  sub.add_option("--out", opt.out_dir, "output directory (output.dir)");
  sub.add_option("--set", opt.overrides, "extra key=value override, repeatable");
  if (model) sub.add_option("--model", opt.model, "model kind (model.kind)");
  if (checkpoint) sub.add_option("--checkpoint", opt.checkpoint, "checkpoint path, default <out>/checkpoint_<kind>.roph");
  if (input) sub.add_option("--input", opt.input, "input CSV");
  sub.footer(describe_config_keys());
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const RangeError*>(&e)) return kExitConfig;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const CheckpointError*>(&e)) return kExitData;
  if (dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const DegenerateNeighborhoodError*>(&e))
    return kExitDivergence;
  return kExitOther;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate-of-penetration regression models: data, training, evaluation and explanations", "ropnet"};
  app.require_subcommand(1);
  app.footer(describe_config_keys());
  Options opt;
  CLI::App* gen = app.add_subcommand("gen-data", "write synthetic.csv and synthetic.truth.json");
  CLI::App* train = app.add_subcommand("train", "train one model and write its artifacts");
  CLI::App* eval = app.add_subcommand("eval", "score a checkpoint on the test split or --input");
  CLI::App* predict = app.add_subcommand("predict", "write predictions.csv for --input");
  CLI::App* compare = app.add_subcommand("compare", "train every model in compare.models and write comparison.csv");
  CLI::App* explain = app.add_subcommand("explain", "permutation importance and a local surrogate");
  add_options(*gen, opt, false, false, false);
  add_options(*train, opt, true, false, false);
  add_options(*eval, opt, true, true, true);
  add_options(*predict, opt, true, true, true);
  add_options(*compare, opt, false, false, false);
  add_options(*explain, opt, true, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Context ctx{resolve_config(opt), {}, out, err};
    ctx.out_dir = ctx.cfg.get_string("output.dir");
    fs::create_directories(ctx.out_dir);
    if (gen->parsed()) return cmd_gen_data(ctx);
    if (train->parsed()) return cmd_train(ctx);
    if (eval->parsed()) return cmd_eval(ctx, opt);
    if (predict->parsed()) return cmd_predict(ctx, opt);
    if (compare->parsed()) return cmd_compare(ctx);
    return cmd_explain(ctx, opt);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace ropnet::cli
