#include "fseval/runner.hpp"

#include "fseval/csv.hpp"
#include "fseval/fsdem.hpp"
#include "fseval/rng.hpp"
#include "fseval/learners/kmeans.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <tuple>

namespace fseval {

using nlohmann::json;

std::string eval_type_of(const std::string& metric) {
  if (metric == "ACC" || metric == "AUC") return "supervised";
  if (metric == "CLSACC" || metric == "NMI") return "unsupervised";
  if (metric == "AAD") return "model_agnostic";
  return "custom";
}

bool RunConfig::has_eval_type(const std::string& t) const {
  return std::find(eval_type.begin(), eval_type.end(), t) != eval_type.end();
}

void RunConfig::validate(const CustomMetricSet& custom) const {
  if (cv < 2) throw Error("cv must be >= 2");
  if (avg_steps < 1 || supervised_iter < 1 || unsupervised_iter < 1)
    throw Error("avg_steps, supervised_iter and unsupervised_iter must be >= 1");
  if (kmeans_max_iter < 1) throw Error("kmeans_max_iter must be >= 1");
  if (workers < 0) throw Error("workers must be >= 0");
  if (eval_type.empty()) throw Error("eval_type must not be empty");
  const auto& known = known_eval_types();
  for (const auto& t : eval_type)
    if (std::find(known.begin(), known.end(), t) == known.end())
      throw Error("unknown eval_type: " + t);
  for (const auto& m : metrics) {
    if (is_builtin_metric(m)) {
      if (!has_eval_type(eval_type_of(m)))
        throw Error("metric " + m + " requires eval_type " + eval_type_of(m));
    } else if (custom.find(m)) {
      if (!has_eval_type("custom")) throw Error("custom metric " + m + " requires eval_type custom");
    } else {
      throw Error("unknown metric: " + m);
    }
  }
  if (has_eval_type("custom") && custom.empty())
    throw Error("eval_type custom requires at least one custom metric");
  if (experiments.empty()) throw Error("experiments must not be empty");
  const auto& exps = known_experiments();
  for (const auto& e : experiments)
    if (std::find(exps.begin(), exps.end(), e) == exps.end()) throw Error("unknown experiment: " + e);
  const auto active = active_metrics(custom);
  for (const auto& m : stability.metrics)
    if (std::find(active.begin(), active.end(), m) == active.end())
      throw Error("stability metric " + m + " is not an evaluated metric");
}

std::vector<std::string> RunConfig::active_metrics(const CustomMetricSet& custom) const {
  std::vector<std::string> out;
  for (const auto& m : metrics)
    if (is_builtin_metric(m) && std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  if (has_eval_type("custom"))
    for (const auto& c : custom.all()) out.push_back(c.name);
  return out;
}

bool RunConfig::wants_stability(const std::string& metric) const {
  if (stability.all) return true;
  return std::find(stability.metrics.begin(), stability.metrics.end(), metric) !=
         stability.metrics.end();
}

json to_json(const RunConfig& c) {
  json stab;
  if (c.stability.all)
    stab = true;
  else if (c.stability.metrics.empty())
    stab = false;
  else
    stab = c.stability.metrics;
  return {{"output_dir", c.output_dir.string()},
          {"cv", c.cv},
          {"avg_steps", c.avg_steps},
          {"supervised_iter", c.supervised_iter},
          {"unsupervised_iter", c.unsupervised_iter},
          {"eval_type", c.eval_type},
          {"metrics", c.metrics},
          {"stability", stab},
          {"experiments", c.experiments},
          {"save_all", c.save_all},
          {"base_seed", c.base_seed},
          {"workers", c.workers},
          {"kmeans_max_iter", c.kmeans_max_iter}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw Error("config must be a JSON object");
  try {
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("cv")) c.cv = j.at("cv").get<int>();
    if (j.contains("avg_steps")) c.avg_steps = j.at("avg_steps").get<int>();
    if (j.contains("supervised_iter")) c.supervised_iter = j.at("supervised_iter").get<int>();
    if (j.contains("unsupervised_iter")) c.unsupervised_iter = j.at("unsupervised_iter").get<int>();
    if (j.contains("eval_type")) c.eval_type = j.at("eval_type").get<std::vector<std::string>>();
    if (j.contains("metrics")) c.metrics = j.at("metrics").get<std::vector<std::string>>();
    if (j.contains("stability")) {
      const auto& s = j.at("stability");
      if (s.is_boolean())
        c.stability = s.get<bool>() ? StabilitySetting{} : StabilitySetting::none();
      else
        c.stability = {false, s.get<std::vector<std::string>>()};
    }
    if (j.contains("experiments")) c.experiments = j.at("experiments").get<std::vector<std::string>>();
    if (j.contains("save_all")) c.save_all = j.at("save_all").get<bool>();
    if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("kmeans_max_iter")) c.kmeans_max_iter = j.at("kmeans_max_iter").get<int>();
  } catch (const json::exception& e) {
    throw Error(std::string("invalid config field: ") + e.what());
  }
  return c;
}

std::uint64_t derive_seed(std::uint64_t base, const std::vector<std::string>& labels,
                          std::uint64_t index) {
  // FNV-1a over a length-prefixed little-endian encoding, then a SplitMix64
  // finalizer to spread the bits.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto byte = [&h](unsigned char b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  auto word = [&byte](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<unsigned char>(v >> (8 * i)));
  };
  word(base);
  word(labels.size());
  for (const auto& s : labels) {
    word(s.size());
    for (char c : s) byte(static_cast<unsigned char>(c));
  }
  word(index);
  std::uint64_t z = h + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<int> stratified_folds(const Labels& y, int n_classes, int n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw Error("need at least 2 folds");
  const auto counts = class_counts(y, n_classes);
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] < n_folds)
      throw Error("cannot build " + std::to_string(n_folds) + " stratified folds: class " +
                  std::to_string(c) + " has only " + std::to_string(counts[c]) + " instances");
  Rng rng(seed);
  std::vector<int> fold(static_cast<std::size_t>(y.size()), -1);
  int next = 0;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < y.size(); ++i)
      if (y(i) == c) members.push_back(i);
    rng.shuffle(members.begin(), members.end());
    for (Index i : members) {
      fold[static_cast<std::size_t>(i)] = next;
      next = (next + 1) % n_folds;
    }
  }
  return fold;
}

namespace {

struct Unit {
  std::size_t dataset;
  std::size_t method;
  int rep;
};

// Scores of one feature count for one repetition, per active metric.
struct KScores {
  std::vector<std::vector<double>> scores;
  std::vector<std::string> errors;  // empty string = ok
};

struct UnitOutput {
  std::uint64_t seed = 0;
  std::string error;  // selector failure
  std::map<Index, KScores> by_k;
};

struct DatasetContext {
  const Dataset* ds = nullptr;
  MatrixXd X_std;
  std::vector<RatioGrid> grids;
};

struct FoldData {
  MatrixXd X_train, X_test;
  Labels y_train, y_test;
};

class UnitEvaluator {
 public:
  UnitEvaluator(const RunConfig& config, const DatasetContext& ctx,
                const std::vector<std::string>& metrics, const Classifier& classifier,
                const CustomMetricSet& custom, int rep)
      : config_(config), ctx_(ctx), metrics_(metrics), classifier_(classifier), custom_(custom),
        rep_(rep) {
    for (std::size_t i = 0; i < metrics.size(); ++i) slot_[metrics[i]] = i;
    wants_supervised_ = slot_.count("ACC") || slot_.count("AUC");
    wants_unsupervised_ = slot_.count("CLSACC") || slot_.count("NMI");
  }

  void prepare_folds() {
    if (!wants_supervised_) return;
    const Dataset& ds = *ctx_.ds;
    const auto fold = stratified_folds(ds.y, ds.n_classes, config_.cv,
                                       derive_seed(config_.base_seed, {ds.name, "folds"},
                                                   static_cast<std::uint64_t>(rep_)));
    for (int f = 0; f < config_.cv; ++f) {
      std::vector<Index> tr, te;
      for (Index i = 0; i < ds.n_instances(); ++i) (fold[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
      FoldData d;
      const MatrixXd raw_train = ds.X(tr, Eigen::all);
      auto [train_std, stats] = standardize(raw_train);
      d.X_train = std::move(train_std);
      d.X_test = standardize(MatrixXd(ds.X(te, Eigen::all)), stats).first;
      d.y_train = ds.y(tr);
      d.y_test = ds.y(te);
      folds_.push_back(std::move(d));
    }
  }

  KScores evaluate(const std::vector<Index>& columns) {
    const Dataset& ds = *ctx_.ds;
    KScores out;
    out.scores.resize(metrics_.size());
    out.errors.resize(metrics_.size());
    auto fail = [&](const std::string& metric, const std::string& msg) {
      auto it = slot_.find(metric);
      if (it != slot_.end() && out.errors[it->second].empty()) out.errors[it->second] = msg;
    };
    auto push = [&](const std::string& metric, double v) {
      auto it = slot_.find(metric);
      if (it != slot_.end()) out.scores[it->second].push_back(v);
    };

    if (wants_supervised_) {
      try {
        for (std::size_t f = 0; f < folds_.size(); ++f) {
          const MatrixXd Xtr = folds_[f].X_train(Eigen::all, columns);
          const MatrixXd Xte = folds_[f].X_test(Eigen::all, columns);
          for (int s = 0; s < config_.supervised_iter; ++s) {
            const auto seed = derive_seed(
                config_.base_seed, {ds.name, "classifier", std::to_string(f)},
                static_cast<std::uint64_t>(rep_) * static_cast<std::uint64_t>(config_.supervised_iter) +
                    static_cast<std::uint64_t>(s));
            const auto model = classifier_.fit(Xtr, folds_[f].y_train, ds.n_classes, seed);
            const MatrixXd proba = model->predict_proba(Xte);
            push("ACC", accuracy(folds_[f].y_test, predict_labels(proba)));
            if (slot_.count("AUC")) push("AUC", auc(folds_[f].y_test, proba));
          }
        }
      } catch (const std::exception& e) {
        fail("ACC", e.what());
        fail("AUC", e.what());
      }
    }

    const MatrixXd Xs = ctx_.X_std(Eigen::all, columns);
    if (wants_unsupervised_) {
      try {
        for (int s = 0; s < config_.unsupervised_iter; ++s) {
          const auto seed = derive_seed(
              config_.base_seed, {ds.name, "kmeans"},
              static_cast<std::uint64_t>(rep_) * static_cast<std::uint64_t>(config_.unsupervised_iter) +
                  static_cast<std::uint64_t>(s));
          const auto km = kmeans(Xs, ds.n_classes, seed, config_.kmeans_max_iter);
          push("CLSACC", clustering_accuracy(ds.y, km.assignments));
          push("NMI", nmi(ds.y, km.assignments));
        }
      } catch (const std::exception& e) {
        fail("CLSACC", e.what());
        fail("NMI", e.what());
      }
    }

    if (slot_.count("AAD")) {
      try {
        push("AAD", aad(ctx_.X_std, columns));
      } catch (const std::exception& e) {
        fail("AAD", e.what());
      }
    }

    if (config_.has_eval_type("custom")) {
      for (const auto& cm : custom_.all()) {
        try {
          push(cm.name, eval_custom(cm, ctx_.X_std, Xs, ds.y));
        } catch (const std::exception& e) {
          fail(cm.name, e.what());
        }
      }
    }
    return out;
  }

 private:
  const RunConfig& config_;
  const DatasetContext& ctx_;
  const std::vector<std::string>& metrics_;
  const Classifier& classifier_;
  const CustomMetricSet& custom_;
  int rep_;
  std::map<std::string, std::size_t> slot_;
  bool wants_supervised_ = false;
  bool wants_unsupervised_ = false;
  std::vector<FoldData> folds_;
};

UnitOutput run_unit(const RunConfig& config, const DatasetContext& ctx, const SelectorSpec& method,
                    const std::vector<std::string>& metrics, const Classifier& classifier,
                    const CustomMetricSet& custom, int rep) {
  UnitOutput out;
  const Dataset& ds = *ctx.ds;
  out.seed = derive_seed(config.base_seed, {ds.name, method.name, "rank"},
                         static_cast<std::uint64_t>(rep));
  FeatureRanking ranking;
  try {
    ranking = rank_features(method, ds, out.seed);
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }
  UnitEvaluator eval(config, ctx, metrics, classifier, custom, rep);
  eval.prepare_folds();
  for (const auto& grid : ctx.grids) {
    for (const auto& point : grid.points) {
      if (out.by_k.count(point.k)) continue;
      const auto subset = take_subset(ds, ranking, point.k);
      out.by_k.emplace(point.k, eval.evaluate(subset.columns));
    }
  }
  return out;
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const auto threads = static_cast<std::size_t>(
      workers > 0 ? workers : std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, n); ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

RunResults run(const RunConfig& config, const std::vector<Dataset>& datasets,
               const std::vector<SelectorSpec>& methods, const Classifier& classifier,
               const CustomMetricSet& custom) {
  config.validate(custom);
  if (datasets.empty()) throw Error("run: no datasets");
  if (methods.empty()) throw Error("run: no methods");
  {
    std::set<std::string> names;
    for (const auto& d : datasets)
      if (!names.insert(d.name).second) throw Error("duplicate dataset name: " + d.name);
    names.clear();
    for (const auto& m : methods)
      if (!names.insert(m.name).second) throw Error("duplicate method name: " + m.name);
  }
  const auto metrics = config.active_metrics(custom);

  std::vector<DatasetContext> contexts(datasets.size());
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const auto& ds = datasets[d];
    ds.validate();
    if (config.has_eval_type("supervised")) {
      for (Index c : class_counts(ds.y, ds.n_classes))
        if (c < config.cv)
          throw Error(ds.name + ": cannot build " + std::to_string(config.cv) +
                      " stratified folds, a class has only " + std::to_string(c) + " instances");
    }
    contexts[d].ds = &ds;
    contexts[d].X_std = standardize(ds.X).first;
    for (const auto& e : config.experiments) contexts[d].grids.push_back(build_grid(e, ds.n_features()));
  }

  auto reps_of = [&](const SelectorSpec& m) { return m.stochastic ? config.avg_steps : 1; };
  std::vector<Unit> units;
  for (std::size_t d = 0; d < datasets.size(); ++d)
    for (std::size_t m = 0; m < methods.size(); ++m)
      for (int r = 0; r < reps_of(methods[m]); ++r) units.push_back({d, m, r});

  std::vector<UnitOutput> outputs(units.size());
  parallel_for(units.size(), config.workers, [&](std::size_t i) {
    const auto& u = units[i];
    outputs[i] = run_unit(config, contexts[u.dataset], methods[u.method], metrics, classifier,
                          custom, u.rep);
  });

  // Aggregation walks units in their fixed construction order, so the output
  // does not depend on which worker finished first.
  RunResults res;
  std::size_t cursor = 0;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const auto& ds = datasets[d];
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto& method = methods[m];
      const int reps = reps_of(method);
      std::vector<const UnitOutput*> outs;
      for (int r = 0; r < reps; ++r) outs.push_back(&outputs[cursor++]);
      bool method_failed = false;
      for (int r = 0; r < reps; ++r)
        if (!outs[static_cast<std::size_t>(r)]->error.empty()) {
          res.failures.push_back({ds.name, method.name, "", "", r, outs[static_cast<std::size_t>(r)]->error});
          method_failed = true;
        }
      if (method_failed) continue;

      for (const auto& grid : contexts[d].grids) {
        for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
          const auto& metric = metrics[mi];
          MetricCurve curve{grid.experiment, metric, {}};
          bool complete = true;
          for (const auto& point : grid.points) {
            std::vector<double> flat;
            std::vector<double> rep_means;
            std::string error;
            int bad_rep = 0;
            for (int r = 0; r < reps; ++r) {
              const auto& ks = outs[static_cast<std::size_t>(r)]->by_k.at(point.k);
              if (!ks.errors[mi].empty()) {
                error = ks.errors[mi];
                bad_rep = r;
                break;
              }
              flat.insert(flat.end(), ks.scores[mi].begin(), ks.scores[mi].end());
              rep_means.push_back(mean_of(ks.scores[mi]));
            }
            if (!error.empty() || flat.empty()) {
              res.failures.push_back({ds.name, method.name, grid.experiment, metric, bad_rep,
                                      error.empty() ? "no scores" : error});
              complete = false;
              continue;
            }
            const double mean = mean_of(flat);
            EvaluationRecord rec{ds.name,
                                 method.name,
                                 grid.experiment,
                                 metric,
                                 quantize_ratio(point.ratio),
                                 point.k,
                                 quantize(mean),
                                 quantize(sample_std(flat, mean)),
                                 static_cast<Index>(flat.size())};
            curve.points.push_back({rec.ratio, rec.mean, rec.std});
            if (config.save_all)
              for (int r = 0; r < reps; ++r)
                res.runs.push_back({rec, r, outs[static_cast<std::size_t>(r)]->seed,
                                    quantize(rep_means[static_cast<std::size_t>(r)])});
            res.records.push_back(std::move(rec));
          }
          if (!complete || curve.points.empty()) continue;
          const auto score = fsdem(curve);
          const auto n_points = static_cast<Index>(curve.points.size());
          res.records.push_back({ds.name, method.name, grid.experiment, "FSDEM_" + metric, 0.0, 0,
                                 quantize(score.score), 0.0, n_points});
          if (config.wants_stability(metric) && score.stability)
            res.records.push_back({ds.name, method.name, grid.experiment, "STAB_" + metric, 0.0, 0,
                                   quantize(*score.stability), 0.0, n_points});
        }
      }
    }
  }
  sort_canonical(res.records);
  std::stable_sort(res.runs.begin(), res.runs.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.cell.dataset, a.cell.method, a.cell.experiment, a.cell.metric, a.cell.ratio,
                    a.rep) < std::tie(b.cell.dataset, b.cell.method, b.cell.experiment,
                                      b.cell.metric, b.cell.ratio, b.rep);
  });

  json& mf = res.manifest;
  mf["version"] = kVersion;
  mf["base_seed"] = config.base_seed;
  mf["config"] = to_json(config);
  mf["classifier"] = classifier.describe();
  mf["datasets"] = json::array();
  for (const auto& ds : datasets)
    mf["datasets"].push_back({{"name", ds.name},
                              {"n_instances", ds.n_instances()},
                              {"n_features", ds.n_features()},
                              {"n_classes", ds.n_classes}});
  mf["methods"] = json::array();
  for (const auto& m : methods)
    mf["methods"].push_back({{"name", m.name}, {"kind", to_string(m.kind)}, {"stochastic", m.stochastic}});
  mf["metrics"] = json::array();
  for (const auto& m : metrics) {
    const auto* cm = custom.find(m);
    const auto o = cm ? cm->orientation : builtin_orientation(m);
    mf["metrics"].push_back({{"name", m}, {"orientation", to_string(o)}});
  }
  mf["experiments"] = config.experiments;
  mf["failures"] = json::array();
  for (const auto& f : res.failures)
    mf["failures"].push_back({{"dataset", f.dataset},
                              {"method", f.method},
                              {"experiment", f.experiment},
                              {"metric", f.metric},
                              {"rep", f.rep},
                              {"message", f.message}});
  return res;
}

void write_results(const RunResults& results, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  csv::write_file_atomic(dir / "results.csv", format_results_csv(results.records));
  if (results.manifest.value("config", json::object()).value("save_all", false))
    csv::write_file_atomic(dir / "runs.csv", format_runs_csv(results.runs));
  csv::write_file_atomic(dir / "manifest.json", results.manifest.dump(2) + "\n");
}

std::vector<TimingRecord> timer(const RunConfig& config, const std::vector<SelectorSpec>& methods,
                                const std::string& vary, double time_limit,
                                const TimerOptions& options) {
  if (!(time_limit > 0.0)) throw Error("time_limit must be > 0");
  if (options.repeats < 1) throw Error("timer repeats must be >= 1");
  std::vector<TimerAxis> axes;
  if (vary == "features" || vary == "both") axes.push_back(TimerAxis::features);
  if (vary == "instances" || vary == "both") axes.push_back(TimerAxis::instances);
  if (axes.empty()) throw Error("vary must be features, instances or both");

  std::vector<TimingRecord> out;
  for (const auto axis : axes) {
    const auto& sizes = axis == TimerAxis::features ? options.feature_sizes : options.instance_sizes;
    std::vector<char> stopped(methods.size(), 0);
    for (const Index size : sizes) {
      const Index n = axis == TimerAxis::features ? options.fixed_instances : size;
      const Index d = axis == TimerAxis::features ? size : options.fixed_features;
      if (std::all_of(stopped.begin(), stopped.end(), [](char s) { return s != 0; })) break;
      auto ds = make_synthetic(n, d, std::min<Index>(10, d), 2,
                               derive_seed(config.base_seed, {"timer", to_string(axis)},
                                           static_cast<std::uint64_t>(size)));
      ds.name = "timer";
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        if (stopped[mi]) continue;
        const auto& method = methods[mi];
        const auto seed = derive_seed(config.base_seed, {"timer", method.name, to_string(axis)},
                                      static_cast<std::uint64_t>(size));
        std::vector<double> times;
        bool timed_out = false;
        for (int r = 0; r < options.repeats; ++r) {
          const auto t0 = std::chrono::steady_clock::now();
          (void)rank_features(method, ds, seed);
          const double elapsed =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          times.push_back(elapsed);
          if (elapsed > time_limit) {
            timed_out = true;
            break;
          }
        }
        TimingRecord rec{method.name, axis, n, d, 0.0, timed_out};
        if (timed_out) {
          rec.seconds = times.back();
          stopped[mi] = 1;
        } else {
          std::sort(times.begin(), times.end());
          const auto h = times.size() / 2;
          rec.seconds = times.size() % 2 ? times[h] : (times[h - 1] + times[h]) / 2.0;
        }
        out.push_back(rec);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const TimingRecord& a, const TimingRecord& b) {
    auto pos = [&](const std::string& name) {
      for (std::size_t i = 0; i < methods.size(); ++i)
        if (methods[i].name == name) return i;
      return methods.size();
    };
    return std::make_tuple(pos(a.method), a.axis, a.n_instances * a.n_features) <
           std::make_tuple(pos(b.method), b.axis, b.n_instances * b.n_features);
  });
  return out;
}

void write_timings(const std::vector<TimingRecord>& timings, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  csv::write_file_atomic(dir / "timings.csv", format_timings_csv(timings));
}

}  // namespace fseval
