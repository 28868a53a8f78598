// Command-line front end: simulate | fit | benchmark | evaluate.
// Every command is deterministic given its flags and seed; outputs are
// plain CSV/JSON written under --out-dir (or $ALBAMA_OUTPUT_DIR, or cwd).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "albama/error.hpp"
#include "albama/evaluation.hpp"
#include "albama/filters.hpp"
#include "albama/forest.hpp"
#include "albama/simulation.hpp"
#include "albama/time_series.hpp"
#include "albama/trend_filters.hpp"

namespace {

using namespace albama;

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// short form for human-facing labels
std::string format_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct InputOptions {
  std::string input_path;
  std::string date_column = "date";
  std::string value_column = "value";
  std::string transform_name = "none";
  std::string scenario_name;
  int length = 300;
  double sigma = 0.5;
  std::uint64_t seed = 42;
};

void add_input_options(CLI::App* cmd, InputOptions& opts) {
  auto* input = cmd->add_option("--input", opts.input_path,
                                "CSV file with a date and a value column");
  cmd->add_option("--date-column", opts.date_column, "Date column name");
  cmd->add_option("--value-column", opts.value_column, "Value column name");
  cmd->add_option("--transform", opts.transform_name,
                  "none|pct_change|log_diff|annualized_mom|yoy");
  auto* scenario =
      cmd->add_option("--scenario", opts.scenario_name,
                      "Simulated input instead of a file: "
                      "gradual|abrupt|combined");
  cmd->add_option("--T", opts.length, "Simulated series length");
  cmd->add_option("--sigma", opts.sigma, "Simulated noise std dev");
  input->excludes(scenario);
}

// name + series resolved from either --input or --scenario
std::pair<std::string, TimeSeries> resolve_input(const InputOptions& opts) {
  if (!opts.scenario_name.empty()) {
    ScenarioSpec spec;
    spec.scenario = parse_scenario(opts.scenario_name);
    spec.length = opts.length;
    spec.sigma = opts.sigma;
    spec.seed = opts.seed;
    return {scenario_name(spec.scenario), generate(spec)};
  }
  if (opts.input_path.empty())
    throw Error(ErrorKind::usage, "provide --input or --scenario");
  TimeSeries series =
      load_csv(opts.input_path, opts.date_column, opts.value_column);
  series = transform(series, parse_transform(opts.transform_name));
  return {std::filesystem::path(opts.input_path).stem().string(),
          std::move(series)};
}

std::filesystem::path output_dir(const std::string& flag_value) {
  std::string dir = flag_value;
  if (dir.empty()) {
    if (const char* env = std::getenv("ALBAMA_OUTPUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::filesystem::create_directories(dir);
  return dir;
}

struct ForestFlags {
  int trees = 500;
  int min_leaf = 40;
  int max_depth = 0;
  bool no_bootstrap = false;
  std::uint64_t seed = 42;

  ForestParams params() const {
    ForestParams p;
    p.n_trees = trees;
    p.tree.min_leaf = min_leaf;
    p.tree.max_depth = max_depth;
    p.bootstrap = !no_bootstrap;
    p.seed = seed;
    return p;
  }
};

void add_forest_options(CLI::App* cmd, ForestFlags& flags) {
  cmd->add_option("--trees", flags.trees, "Number of bagged trees");
  cmd->add_option("--min-leaf", flags.min_leaf, "Minimum leaf size");
  cmd->add_option("--max-depth", flags.max_depth,
                  "Maximum split depth (0 = unlimited)");
  cmd->add_flag("--no-bootstrap", flags.no_bootstrap,
                "Fit every tree on the full sample");
}

// "0;1-2;3-5;6+" -> lag buckets
BucketSpec parse_buckets(const std::string& text, bool causal) {
  if (text.empty())
    return causal ? BucketSpec::one_sided_default()
                  : BucketSpec::two_sided_default();
  BucketSpec spec;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ';')) {
    if (token.empty()) continue;
    LagBucket bucket{};
    if (token.back() == '+') {
      bucket.lo = std::stoi(token.substr(0, token.size() - 1));
      bucket.hi = LagBucket::open_end;
    } else if (const auto dash = token.find('-', 1);
               dash != std::string::npos) {
      bucket.lo = std::stoi(token.substr(0, dash));
      bucket.hi = std::stoi(token.substr(dash + 1));
    } else {
      bucket.lo = bucket.hi = std::stoi(token);
    }
    spec.buckets.push_back(bucket);
  }
  if (spec.buckets.empty())
    throw Error(ErrorKind::usage, "empty bucket spec: '" + text + "'");
  return spec;
}

int cmd_simulate(const InputOptions& input, const std::string& out_flag) {
  ScenarioSpec spec;
  spec.scenario = parse_scenario(input.scenario_name);
  spec.length = input.length;
  spec.sigma = input.sigma;
  spec.seed = input.seed;

  const std::vector<double> clean = signal(spec);
  const TimeSeries noisy = generate(spec);

  const auto path = output_dir(out_flag) /
                    ("simulated_" + scenario_name(spec.scenario) + ".csv");
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << "date,signal,noisy\n";
  for (std::size_t t = 0; t < noisy.size(); ++t)
    out << noisy.stamp(t).str() << ',' << format_value(clean[t]) << ','
        << format_value(noisy.value(t)) << '\n';
  std::cout << "wrote " << path.string() << " (" << noisy.size() << " rows)\n";
  return 0;
}

void write_fit_outputs(const std::filesystem::path& dir,
                       const std::string& mode, const TimeSeries& full,
                       const TimeSeries& fitted, const WeightMatrix& weights,
                       const std::string& bucket_flag) {
  write_csv(fitted, (dir / ("fitted_" + mode + ".csv")).string());
  write_weights_long(weights,
                     (dir / ("weights_long_" + mode + ".csv")).string());
  write_weights_dense(weights, full,
                      (dir / ("weights_dense_" + mode + ".csv")).string());
  const BucketShares shares =
      bucket_shares(weights, parse_buckets(bucket_flag, weights.causal()));
  write_bucket_shares(shares, full,
                      (dir / ("bucket_shares_" + mode + ".csv")).string());
}

int cmd_fit(const InputOptions& input, const ForestFlags& forest,
            const std::string& mode, int warmup, const std::string& buckets,
            const std::string& out_flag) {
  if (mode != "one-sided" && mode != "two-sided" && mode != "both")
    throw Error(ErrorKind::usage, "--mode must be one-sided|two-sided|both");
  const auto [name, series] = resolve_input(input);
  const auto dir = output_dir(out_flag);
  const ForestParams params = forest.params();

  if (mode == "two-sided" || mode == "both") {
    const ForestModel model = fit_two_sided(series, params);
    write_fit_outputs(dir, "two_sided", series, forest_fitted(model),
                      extract_weights(model), buckets);
  }
  if (mode == "one-sided" || mode == "both") {
    const auto [fitted, weights] = fit_one_sided(series, params, warmup);
    write_fit_outputs(dir, "one_sided", series, fitted, weights, buckets);
  }
  std::cout << "fit '" << name << "' (" << series.size()
            << " obs) mode=" << mode << " -> " << dir.string() << '\n';
  return 0;
}

struct TidyWriter {
  std::ofstream out;

  explicit TidyWriter(const std::filesystem::path& path) : out(path) {
    if (!out)
      throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << "date,method,value,defined\n";
  }

  // method_ok=false marks a whole method undefined (solver failure)
  void add(const TimeSeries& series, const std::string& method,
           const FilterOutput& values, bool method_ok = true) {
    for (std::size_t t = 0; t < series.size(); ++t) {
      const bool defined = method_ok && values.defined[t];
      out << series.stamp(t).str() << ',' << method << ','
          << format_value(values.values[t]) << ',' << (defined ? 1 : 0)
          << '\n';
    }
  }
};

FilterOutput vector_as_output(const std::vector<double>& values) {
  return FilterOutput{values, std::vector<bool>(values.size(), true)};
}

int cmd_benchmark(const InputOptions& input, const std::string& out_flag,
                  int sg_window, int sg_order, int l1_order,
                  std::vector<double> l1_grid, std::vector<double> bhp_lambdas,
                  int bhp_max_iter) {
  const auto [name, series] = resolve_input(input);
  const auto dir = output_dir(out_flag);
  TidyWriter tidy(dir / ("benchmark_" + name + ".csv"));

  for (int k : {3, 6, 12}) {
    tidy.add(series, "MA(" + std::to_string(k) + ")_1s",
             ma_one_sided(series, k));
    tidy.add(series, "MA(" + std::to_string(k) + ")_2s",
             ma_two_sided(series, k));
  }
  tidy.add(series, "EMA(12)", ema(series, 12));
  const std::string sg_tag =
      "SG(" + std::to_string(sg_window) + ";" + std::to_string(sg_order) + ")";
  tidy.add(series, sg_tag + "_1s", sg_one_sided(series, sg_window, sg_order));
  tidy.add(series, sg_tag + "_2s", sg_two_sided(series, sg_window, sg_order));

  if (l1_grid.empty())
    l1_grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
  const double cv_lambda = select_lambda_cv(series, l1_order, l1_grid);
  std::cout << "l1 cross-validated lambda: " << format_label(cv_lambda)
            << '\n';
  const std::pair<std::string, double> scaled[] = {
      {"L1TF(0.1l)", 0.1 * cv_lambda},
      {"L1TF(l)", cv_lambda},
      {"L1TF(4l)", 4.0 * cv_lambda}};
  for (const auto& [tag, lambda] : scaled) {
    const L1TrendResult result = l1_trend_filter(series, lambda, l1_order);
    if (!result.converged)
      std::cerr << "warning: " << tag << " did not converge after "
                << result.iterations << " iterations\n";
    tidy.add(series, tag, vector_as_output(result.trend), result.converged);
  }

  if (bhp_lambdas.empty()) bhp_lambdas = {0.1, 1.0, 100.0};
  for (double lambda : bhp_lambdas) {
    const BoostedHpResult result = boosted_hp(series, lambda, bhp_max_iter);
    tidy.add(series, "bHP(" + format_label(lambda) + ")",
             vector_as_output(result.trend));
  }
  std::cout << "benchmarks for '" << name << "' -> " << dir.string() << '\n';
  return 0;
}

int cmd_evaluate(const std::vector<std::string>& inputs,
                 const InputOptions& base, const ForestFlags& forest,
                 int warmup, const std::vector<std::string>& window_names,
                 const std::string& out_flag) {
  std::vector<NamedSeries> series;
  if (!base.scenario_name.empty()) {
    auto [name, s] = resolve_input(base);
    series.push_back({std::move(name), std::move(s)});
  }
  for (const std::string& path : inputs) {
    InputOptions opts = base;
    opts.scenario_name.clear();
    opts.input_path = path;
    auto [name, s] = resolve_input(opts);
    series.push_back({std::move(name), std::move(s)});
  }
  if (series.empty())
    throw Error(ErrorKind::usage,
                "provide --input (repeatable) or --scenario");

  std::vector<Window> windows;
  for (const std::string& w : window_names)
    windows.push_back(Window::parse(w));
  if (windows.empty()) windows.push_back(Window::named(WindowKind::full));

  EvalParams params;
  params.forest = forest.params();
  params.warmup = warmup;
  const std::vector<MethodPair> methods = all_method_pairs();
  const EvaluationReport report = full_report(series, methods, windows, params);

  const auto dir = output_dir(out_flag);
  write_report_csv(report, (dir / "report.csv").string());
  write_report_json(report, (dir / "boxplots.json").string());
  std::cout << "evaluated " << series.size() << " series x " << methods.size()
            << " methods x " << windows.size() << " windows -> "
            << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive learning-based moving average toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value config file; flags override");

  InputOptions input;
  ForestFlags forest;
  std::string out_dir;
  std::string mode = "one-sided";
  int warmup = 24;
  std::string buckets;
  int sg_window = 11, sg_order = 3, l1_order = 4, bhp_max_iter = 100;
  std::vector<double> l1_grid, bhp_lambdas;
  std::vector<std::string> eval_inputs, window_names;

  auto* simulate = app.add_subcommand("simulate", "Write a scenario CSV");
  simulate->add_option("--scenario", input.scenario_name)->required();
  simulate->add_option("--T", input.length);
  simulate->add_option("--sigma", input.sigma);
  simulate->add_option("--seed", input.seed);
  simulate->add_option("--out-dir", out_dir);

  auto* fit = app.add_subcommand("fit", "Fit the bagged-tree moving average");
  add_input_options(fit, input);
  add_forest_options(fit, forest);
  fit->add_option("--seed", input.seed);
  fit->add_option("--mode", mode, "one-sided|two-sided|both");
  fit->add_option("--warmup", warmup, "One-sided warm-up length");
  fit->add_option("--buckets", buckets, "Lag buckets, e.g. 0;1-2;3-5;6+");
  fit->add_option("--out-dir", out_dir);

  auto* benchmark = app.add_subcommand("benchmark", "Run the filter suite");
  add_input_options(benchmark, input);
  benchmark->add_option("--seed", input.seed);
  benchmark->add_option("--sg-window", sg_window);
  benchmark->add_option("--sg-order", sg_order);
  benchmark->add_option("--l1-order", l1_order, "Difference order");
  benchmark->add_option("--l1-grid", l1_grid, "CV grid for lambda");
  benchmark->add_option("--bhp-lambdas", bhp_lambdas);
  benchmark->add_option("--bhp-max-iter", bhp_max_iter);
  benchmark->add_option("--out-dir", out_dir);

  auto* evaluate =
      app.add_subcommand("evaluate", "One-sided vs two-sided consistency R^2");
  evaluate->add_option("--input", eval_inputs, "Input CSV (repeatable)");
  evaluate->add_option("--date-column", input.date_column);
  evaluate->add_option("--value-column", input.value_column);
  evaluate->add_option("--transform", input.transform_name);
  evaluate->add_option("--scenario", input.scenario_name);
  evaluate->add_option("--T", input.length);
  evaluate->add_option("--sigma", input.sigma);
  evaluate->add_option("--seed", input.seed);
  add_forest_options(evaluate, forest);
  evaluate->add_option("--warmup", warmup);
  evaluate->add_option("--window", window_names, "Window name (repeatable)");
  evaluate->add_option("--out-dir", out_dir);

  try {
    app.parse(argc, argv);
    forest.seed = input.seed;
    if (simulate->parsed()) return cmd_simulate(input, out_dir);
    if (fit->parsed())
      return cmd_fit(input, forest, mode, warmup, buckets, out_dir);
    if (benchmark->parsed())
      return cmd_benchmark(input, out_dir, sg_window, sg_order, l1_order,
                           l1_grid, bhp_lambdas, bhp_max_iter);
    if (evaluate->parsed())
      return cmd_evaluate(eval_inputs, input, forest, warmup, window_names,
                          out_dir);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit cleanly
  } catch (const albama::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 3;
  }
}
