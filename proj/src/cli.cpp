#include "fseval/cli.hpp"

#include "fseval/csv.hpp"
#include "fseval/server.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fseval {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

Dataset dataset_from_json(const json& d, const fs::path& base) {
  if (!d.is_object() || !d.contains("name")) throw Error("dataset entry needs a name");
  const auto name = d.at("name").get<std::string>();
  if (d.contains("path")) return load_dataset(resolve(base, d.at("path").get<std::string>()), name);
  if (d.contains("synthetic")) {
    const auto& s = d.at("synthetic");
    const auto n = s.value("n_instances", Index{100});
    const auto f = s.value("n_features", Index{50});
    auto ds = make_synthetic(n, f, s.value("n_informative", std::min<Index>(10, f)),
                             s.value("n_classes", 2), s.value("seed", std::uint64_t{0}));
    ds.name = name;
    return ds;
  }
  throw Error("dataset " + name + " needs path or synthetic");
}

SelectorSpec method_from_json(const json& m, const fs::path& base, const SelectorRegistry& registry) {
  if (m.is_string()) return registry.at(m.get<std::string>());
  if (!m.is_object() || !m.contains("name")) throw Error("method entry needs a name");
  const auto name = m.at("name").get<std::string>();
  if (!m.contains("command")) return registry.at(name);
  auto command = m.at("command").get<std::vector<std::string>>();
  if (command.empty()) throw Error("method " + name + ": empty command");
  // A relative program path that exists next to the config is resolved.
  if (command[0].find('/') != std::string::npos) command[0] = resolve(base, command[0]).string();
  return make_subprocess_selector(name, std::move(command),
                                  parse_selector_kind(m.value("type", std::string("unsupervised"))),
                                  m.value("stochastic", false), m.value("timeout", 0.0));
}

json read_json_file(const fs::path& path) {
  if (!fs::exists(path)) throw Error("config file not found: " + path.string());
  try {
    return json::parse(csv::read_file(path));
  } catch (const json::exception& e) {
    throw Error("unreadable config " + path.string() + ": " + e.what());
  }
}

RankQuery make_query(const std::string& metric, const std::string& experiment,
                     const std::string& stat, double alpha, const std::vector<std::string>& exclude) {
  RankQuery q;
  q.metric = metric;
  q.experiment = experiment;
  q.stat = parse_rank_family(stat);
  q.alpha = alpha;
  q.exclude = split_names(exclude);
  return q;
}

}  // namespace

LoadedConfig load_config(const json& j, const fs::path& base_dir, const SelectorRegistry& registry) {
  LoadedConfig c;
  c.run = run_config_from_json(j);
  if (j.contains("output_dir")) c.run.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
  try {
    // Methods first: an unknown name must fail before any dataset is read.
    if (j.contains("methods"))
      for (const auto& m : j.at("methods")) c.methods.push_back(method_from_json(m, base_dir, registry));
    if (j.contains("datasets"))
      for (const auto& d : j.at("datasets")) c.datasets.push_back(dataset_from_json(d, base_dir));
    if (j.contains("classifier")) {
      const auto& f = j.at("classifier");
      c.forest.n_trees = f.value("n_trees", c.forest.n_trees);
      c.forest.bootstrap = f.value("bootstrap", c.forest.bootstrap);
      c.forest.max_features = f.value("max_features", c.forest.max_features);
      c.forest.min_samples_split = f.value("min_samples_split", c.forest.min_samples_split);
    }
    if (j.contains("timer")) {
      const auto& t = j.at("timer");
      c.timer.feature_sizes = t.value("feature_sizes", c.timer.feature_sizes);
      c.timer.instance_sizes = t.value("instance_sizes", c.timer.instance_sizes);
      c.timer.fixed_instances = t.value("fixed_instances", c.timer.fixed_instances);
      c.timer.fixed_features = t.value("fixed_features", c.timer.fixed_features);
      c.timer.repeats = t.value("repeats", c.timer.repeats);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("invalid config: ") + e.what());
  }
  if (c.forest.n_trees < 1) throw Error("classifier.n_trees must be >= 1");
  return c;
}

LoadedConfig load_config(const fs::path& path, const SelectorRegistry& registry) {
  return load_config(read_json_file(path), path.parent_path(), registry);
}

std::string rank_report_json_text(const RankReport& report) {
  return to_json(report).dump(2) + "\n";
}

int run_cli(const std::vector<std::string>& args, CliContext& ctx, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Feature selection evaluation harness", "fseval"};
  app.require_subcommand(1);

  std::string config_path, out_path, results_path, metric, experiment, stat = "standard",
                                                                        format = "text", cd_svg,
                                                                        vary = "both", kind = "ranks",
                                                                        assets;
  std::vector<std::string> exclude;
  double alpha = 0.05, time_limit = 3600.0;
  int port = 8050;
  std::optional<std::uint64_t> seed;
  Index n_instances = 200, n_features = 50, n_informative = 10;
  int n_classes = 2;

  auto* run = app.add_subcommand("run", "Evaluate methods over datasets and write a results bundle");
  run->add_option("--config", config_path, "Run config (JSON)")->required();
  run->add_option("--out", out_path, "Output directory (overrides the config)");
  run->add_option("--seed", seed, "Base seed (overrides the config)");

  auto* tim = app.add_subcommand("timer", "Measure selector runtime against data size");
  tim->add_option("--config", config_path, "Config naming the methods and timer sizes");
  tim->add_option("--out", out_path, "Output directory for timings.csv")->required();
  tim->add_option("--vary", vary, "features, instances or both")
      ->check(CLI::IsMember({"features", "instances", "both"}));
  tim->add_option("--time-limit", time_limit, "Per-call limit in seconds");
  tim->add_option("--seed", seed, "Base seed");

  auto add_rank_options = [&](CLI::App* sub) {
    sub->add_option("--results", results_path, "Results directory or results.csv")->required();
    sub->add_option("--metric", metric, "Base metric name")->required();
    sub->add_option("--experiment", experiment, "10Percent or 100Percent")->required();
    sub->add_option("--stat", stat, "standard or mars")->check(CLI::IsMember({"standard", "mars"}));
    sub->add_option("--exclude", exclude, "Method or dataset names to leave out");
    sub->add_option("--alpha", alpha, "0.05 or 0.10");
  };
  auto* rnk = app.add_subcommand("ranks", "Friedman/Nemenyi rank analysis of FSDEM scores");
  add_rank_options(rnk);
  rnk->add_option("--format", format, "text, json or latex")
      ->check(CLI::IsMember({"text", "json", "latex"}));
  rnk->add_option("--cd-svg", cd_svg, "Write the CD diagram here");

  auto* exp = app.add_subcommand("export", "LaTeX tables");
  add_rank_options(exp);
  exp->add_option("--kind", kind, "ranks or fsdem")->check(CLI::IsMember({"ranks", "fsdem"}));
  exp->add_option("--out", out_path, "Write to a file instead of stdout");

  auto* srv = app.add_subcommand("serve", "Serve the results API and dashboard assets");
  srv->add_option("--results", results_path, "Results directory or results.csv")->required();
  srv->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  srv->add_option("--assets", assets, "Static dashboard directory");

  auto* mk = app.add_subcommand("make-data", "Write a synthetic dataset CSV");
  mk->add_option("--out", out_path, "Output CSV path")->required();
  mk->add_option("--instances", n_instances)->check(CLI::PositiveNumber);
  mk->add_option("--features", n_features)->check(CLI::PositiveNumber);
  mk->add_option("--informative", n_informative)->check(CLI::NonNegativeNumber);
  mk->add_option("--classes", n_classes)->check(CLI::Range(2, 1000));
  mk->add_option("--seed", seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << app.help();
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      auto cfg = load_config(fs::path(config_path), ctx.registry);
      if (!out_path.empty()) cfg.run.output_dir = out_path;
      if (seed) cfg.run.base_seed = *seed;
      RandomForestClassifier classifier(cfg.forest);
      auto results = fseval::run(cfg.run, cfg.datasets, cfg.methods, classifier, ctx.custom);
      write_results(results, cfg.run.output_dir);
      out << "wrote " << results.records.size() << " rows to "
          << (cfg.run.output_dir / "results.csv").string() << "\n";
      for (const auto& f : results.failures)
        err << "failed: " << f.dataset << " / " << f.method
            << (f.experiment.empty() ? "" : " / " + f.experiment + " / " + f.metric) << ": "
            << f.message << "\n";
      return results.partial() ? 2 : 0;
    }
    if (*tim) {
      LoadedConfig cfg;
      if (!config_path.empty()) {
        cfg = load_config(fs::path(config_path), ctx.registry);
      } else {
        for (const auto& name : ctx.registry.names()) cfg.methods.push_back(ctx.registry.at(name));
      }
      if (seed) cfg.run.base_seed = *seed;
      auto timings = timer(cfg.run, cfg.methods, vary, time_limit, cfg.timer);
      write_timings(timings, out_path);
      out << "wrote " << timings.size() << " timings to " << (fs::path(out_path) / "timings.csv").string()
          << "\n";
      return 0;
    }
    if (*rnk) {
      const auto store = load_results(results_path);
      const auto report = compute_ranks(store, make_query(metric, experiment, stat, alpha, exclude));
      if (format == "json")
        out << rank_report_json_text(report);
      else if (format == "latex")
        out << format_latex(report);
      else
        out << format_text(report);
      if (!cd_svg.empty()) csv::write_file_atomic(cd_svg, cd_diagram_svg(report));
      return 0;
    }
    if (*exp) {
      const auto store = load_results(results_path);
      std::string text;
      if (kind == "fsdem")
        text = fsdem_latex(store, metric, experiment, split_names(exclude));
      else
        text = format_latex(compute_ranks(store, make_query(metric, experiment, stat, alpha, exclude)));
      if (out_path.empty())
        out << text;
      else
        csv::write_file_atomic(out_path, text);
      return 0;
    }
    if (*srv) {
      ResultsServer server(load_results(results_path), assets);
      const int bound = server.bind("0.0.0.0", port);
      out << "serving " << results_path << " on http://localhost:" << bound << "/" << std::endl;
      server.listen();
      return 0;
    }
    if (*mk) {
      if (n_informative > n_features) throw Error("--informative exceeds --features");
      auto ds = make_synthetic(n_instances, n_features, n_informative, n_classes, seed.value_or(0));
      ds.name = fs::path(out_path).stem().string();
      write_dataset(ds, out_path);
      out << "wrote " << out_path << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace fseval
