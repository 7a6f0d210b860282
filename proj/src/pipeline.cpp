#include "nidsfs/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace nidsfs {

using nlohmann::ordered_json;

std::string_view to_string(Engine engine) noexcept {
  switch (engine) {
    case Engine::EM: return "em";
    case Engine::NB: return "nb";
    case Engine::LR: return "lr";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  if (name == "em") return Engine::EM;
  if (name == "nb") return Engine::NB;
  if (name == "lr") return Engine::LR;
  throw Error(ErrorCode::InvalidConfig, "unknown engine '" + std::string(name) + "' (expected em, nb or lr)");
}

void PipelineConfig::validate() const {
  if (thresholds.empty()) throw Error(ErrorCode::InvalidConfig, "at least one minsup/minconf value required");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "minsup/minconf values must lie in (0, 1]");
    }
    if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
      throw Error(ErrorCode::InvalidConfig, "minsup/minconf values must be strictly ascending");
    }
  }
  if (num_features < 1) throw Error(ErrorCode::InvalidConfig, "number of features must be at least 1");
  if (engines.empty()) throw Error(ErrorCode::InvalidConfig, "at least one engine required");
  for (std::size_t i = 0; i < engines.size(); ++i) {
    for (std::size_t j = i + 1; j < engines.size(); ++j) {
      if (engines[i] == engines[j]) throw Error(ErrorCode::InvalidConfig, "engine listed twice");
    }
  }
  auto check_ratio = [](double r) {
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::InvalidConfig, "split ratio must lie strictly in (0, 1)");
  };
  if (const auto* s = std::get_if<SingleFile>(&source)) check_ratio(s->split_ratio);
  if (const auto* s = std::get_if<SyntheticSource>(&source)) {
    check_ratio(s->split_ratio);
    if (s->signal_features == 0 || s->records < 4) {
      throw Error(ErrorCode::InvalidConfig, "synthetic data needs >= 4 records and >= 1 signal feature");
    }
  }
}

Selection select_training_features(const Dataset& train, std::span<const double> thresholds,
                                   std::size_t num_features, std::size_t threads) {
  const std::size_t p = partition_count(train.size(), train.num_attributes());
  auto table = central_points(train, p, threads);
  const auto plan = make_plan(train.size(), p);
  auto transactions = build_transactions(table, partition_labels(train.labels(), plan));
  auto sweep = run_threshold_sweep(transactions, num_features, thresholds);
  auto rules = generate_rules(transactions, thresholds.front(), thresholds.front());
  return {p, std::move(table), std::move(transactions), std::move(sweep), std::move(rules)};
}

namespace {

class StageClock {
 public:
  explicit StageClock(EvaluationReport& report) : report_(report) {}

  template <typename F>
  auto run(const std::string& stage, F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
      const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
      report_.timings_ms.emplace_back(stage, ms.count());
    };
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record();
      } else {
        auto out = fn();
        record();
        return out;
      }
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(stage, e);
    } catch (const std::invalid_argument& e) {
      throw StageError(stage, Error(ErrorCode::InvalidSpec, e.what()));
    }
  }

 private:
  EvaluationReport& report_;
};

ordered_json config_echo(const PipelineConfig& c) {
  ordered_json j;
  ordered_json src;
  if (const auto* f = std::get_if<TrainTestFiles>(&c.source)) {
    src["kind"] = "files";
    src["train"] = f->train.string();
    src["test"] = f->test.string();
  } else if (const auto* s = std::get_if<SingleFile>(&c.source)) {
    src["kind"] = "split";
    src["input"] = s->input.string();
    src["split_ratio"] = s->split_ratio;
  } else {
    const auto& y = std::get<SyntheticSource>(c.source);
    src["kind"] = "synthetic";
    src["records"] = y.records;
    src["noise_features"] = y.noise_features;
    src["signal_features"] = y.signal_features;
    src["split_ratio"] = y.split_ratio;
  }
  j["source"] = std::move(src);
  j["label_column"] = c.label_column;
  j["minsup_minconf"] = c.thresholds;
  j["num_features"] = c.num_features;
  ordered_json engines = ordered_json::array();
  for (Engine e : c.engines) engines.push_back(std::string(to_string(e)));
  j["engines"] = std::move(engines);
  j["seed"] = c.seed;
  j["lr"] = {{"learning_rate", c.lr.learning_rate},
             {"max_iterations", c.lr.max_iterations},
             {"l2", c.lr.l2},
             {"tolerance", c.lr.tolerance}};
  j["em"] = {{"components", c.em.components},
             {"max_iterations", c.em.max_iterations},
             {"tolerance", c.em.tolerance},
             {"restarts", c.em.restarts}};
  return j;
}

std::vector<ReportFeature> report_features(const FeatureRanking& ranking) {
  std::vector<ReportFeature> out;
  for (const auto& f : ranking.features) out.push_back({f.attribute, f.importance});
  return out;
}

std::vector<Label> true_labels(const Dataset& d) { return d.labels(); }

}  // namespace

EvaluationReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  EvaluationReport report;
  report.config = config_echo(config);
  StageClock clock(report);

  auto data = clock.run("load", [&]() -> TrainTest {
    TrainTest tt = [&]() -> TrainTest {
      if (const auto* f = std::get_if<TrainTestFiles>(&config.source)) {
        Dataset train = load_csv(f->train, config.label_column);
        Dataset test = load_csv(f->test, config.label_column, &train.schema());
        return {std::move(train), std::move(test)};
      }
      if (const auto* s = std::get_if<SingleFile>(&config.source)) {
        return split(load_csv(s->input, config.label_column), {RatioSplit{s->split_ratio}, config.seed});
      }
      const auto& y = std::get<SyntheticSource>(config.source);
      auto synth = synth_dataset(y.records, y.noise_features, y.signal_features, config.seed);
      return split(synth.dataset, {RatioSplit{y.split_ratio}, config.seed});
    }();
    const auto [normal, attack] = tt.train.class_counts();
    if (normal == 0 || attack == 0) {
      throw Error(ErrorCode::SingleClassTraining, "training data must contain both normal and attack records");
    }
    return tt;
  });
  const Dataset& train = data.train;
  const Dataset& test = data.test;

  const std::size_t p = partition_count(train.size(), train.num_attributes());
  report.partitions = p;
  auto centres = clock.run("central_points", [&] { return central_points(train, p, config.threads); });
  if (config.dump_centres) {
    clock.run("dump_centres", [&] { write_central_points(centres, *config.dump_centres); });
  }

  struct ArmOutput {
    ThresholdSweep sweep;
    std::vector<Rule> rules;
  };
  auto arm = clock.run("arm", [&] {
    const auto plan = make_plan(train.size(), p);
    const auto transactions = build_transactions(centres, partition_labels(train.labels(), plan));
    auto sweep = run_threshold_sweep(transactions, config.num_features, config.thresholds);
    std::vector<Rule> rules;
    if (config.dump_rules) rules = generate_rules(transactions, config.thresholds.front(), config.thresholds.front());
    return ArmOutput{std::move(sweep), std::move(rules)};
  });
  if (config.dump_rules) clock.run("dump_rules", [&] { write_rules(arm.rules, *config.dump_rules); });

  report.selected_features = report_features(arm.sweep.merged);
  for (const auto& e : arm.sweep.entries) {
    report.threshold_sweep.push_back(
        {e.threshold, e.rule_count, {report_features(e.per_class[0]), report_features(e.per_class[1])}});
  }
  const std::vector<std::string> features = arm.sweep.merged.names();
  const std::vector<Label> truth = true_labels(test);

  const bool needs_matrix = std::any_of(config.engines.begin(), config.engines.end(),
                                        [](Engine e) { return e != Engine::NB; });
  std::optional<FeatureMatrix> train_matrix;
  std::optional<FeatureMatrix> test_matrix;
  if (needs_matrix) {
    clock.run("encode", [&] {
      auto enc = encode(train, features);
      test_matrix = enc.encoder.transform(test);
      train_matrix = std::move(enc.matrix);
    });
  }

  ordered_json model_dump;
  for (Engine engine : config.engines) {
    const std::string name(to_string(engine));
    std::vector<Label> predicted;
    predicted.reserve(test.size());
    switch (engine) {
      case Engine::NB: {
        const auto model = clock.run("fit_nb", [&] { return nb_fit(train, features); });
        clock.run("predict_nb", [&] {
          const auto cols = resolve_features(test, features);
          for (std::size_t r = 0; r < test.size(); ++r) {
            predicted.push_back(nb_predict(model, project_row(test, r, cols)).label);
          }
        });
        if (config.dump_model) model_dump[name] = to_json(model);
        break;
      }
      case Engine::LR: {
        const auto model = clock.run("fit_lr", [&] { return lr_fit(*train_matrix, config.lr); });
        clock.run("predict_lr", [&] {
          for (std::size_t r = 0; r < test_matrix->rows(); ++r) {
            predicted.push_back(lr_predict(model, test_matrix->row(r)).label);
          }
        });
        if (config.dump_model) model_dump[name] = to_json(model);
        break;
      }
      case Engine::EM: {
        const auto model = clock.run("fit_em", [&] {
          EMConfig cfg = config.em;
          cfg.seed = config.seed;
          auto m = em_fit(*train_matrix, cfg);
          m.cluster_labels = map_clusters(m, *train_matrix);
          return m;
        });
        clock.run("predict_em", [&] {
          for (std::size_t r = 0; r < test_matrix->rows(); ++r) {
            predicted.push_back(em_predict(model, test_matrix->row(r)).label);
          }
        });
        if (config.dump_model) model_dump[name] = to_json(model);
        break;
      }
    }
    const auto cm = clock.run("evaluate_" + name, [&] { return confusion(predicted, truth); });
    report.engines.push_back({engine, cm, compute_metrics(cm)});
  }

  if (config.dump_model) {
    clock.run("dump_model", [&] {
      std::ofstream out(*config.dump_model, std::ios::binary);
      if (!out) throw Error(ErrorCode::IoError, "cannot open " + config.dump_model->string() + " for writing");
      out << model_dump.dump(2) << '\n';
      if (!out) throw Error(ErrorCode::IoError, "failed writing " + config.dump_model->string());
    });
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

ordered_json metric_json(const Metric& m) { return m ? ordered_json(*m) : ordered_json(nullptr); }

Metric metric_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ordered_json features_json(const std::vector<ReportFeature>& fs) {
  ordered_json a = ordered_json::array();
  for (const auto& f : fs) a.push_back({{"attribute", f.attribute}, {"importance", f.importance}});
  return a;
}

std::vector<ReportFeature> features_from(const ordered_json& j) {
  std::vector<ReportFeature> out;
  for (const auto& f : j) out.push_back({f.at("attribute").get<std::string>(), f.at("importance").get<double>()});
  return out;
}

}  // namespace

ordered_json to_json(const EvaluationReport& report) {
  ordered_json j;
  j["config"] = report.config;
  j["partitions"] = report.partitions;
  j["selected_features"] = features_json(report.selected_features);
  ordered_json sweep = ordered_json::array();
  for (const auto& t : report.threshold_sweep) {
    sweep.push_back({{"threshold", t.threshold},
                     {"rule_count", t.rule_count},
                     {"normal", features_json(t.per_class[0])},
                     {"attack", features_json(t.per_class[1])}});
  }
  j["threshold_sweep"] = std::move(sweep);
  ordered_json engines = ordered_json::object();
  for (const auto& e : report.engines) {
    ordered_json ej;
    ej["confusion"] = {{"tp", e.confusion.tp}, {"tn", e.confusion.tn}, {"fp", e.confusion.fp}, {"fn", e.confusion.fn}};
    ej["metrics"] = {{"accuracy", metric_json(e.metrics.accuracy)}, {"fpr", metric_json(e.metrics.fpr)},
                     {"fnr", metric_json(e.metrics.fnr)},           {"far", metric_json(e.metrics.far)},
                     {"precision", metric_json(e.metrics.precision)}, {"recall", metric_json(e.metrics.recall)}};
    engines[std::string(to_string(e.engine))] = std::move(ej);
  }
  j["engines"] = std::move(engines);
  ordered_json timings = ordered_json::object();
  for (const auto& [stage, ms] : report.timings_ms) timings[stage] = ms;
  j["timings_ms"] = std::move(timings);
  j["version"] = report.version;
  return j;
}

EvaluationReport report_from_json(const ordered_json& j) {
  EvaluationReport r;
  r.config = j.at("config");
  r.partitions = j.at("partitions").get<std::size_t>();
  r.selected_features = features_from(j.at("selected_features"));
  for (const auto& t : j.at("threshold_sweep")) {
    r.threshold_sweep.push_back({t.at("threshold").get<double>(),
                                 t.at("rule_count").get<std::size_t>(),
                                 {features_from(t.at("normal")), features_from(t.at("attack"))}});
  }
  for (const auto& [name, ej] : j.at("engines").items()) {
    EngineResult e;
    e.engine = parse_engine(name);
    const auto& c = ej.at("confusion");
    e.confusion = {c.at("tp").get<std::size_t>(), c.at("tn").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                   c.at("fn").get<std::size_t>()};
    const auto& m = ej.at("metrics");
    e.metrics = {metric_from(m.at("accuracy")), metric_from(m.at("fpr")),       metric_from(m.at("fnr")),
                 metric_from(m.at("far")),      metric_from(m.at("precision")), metric_from(m.at("recall"))};
    r.engines.push_back(e);
  }
  for (const auto& [stage, ms] : j.at("timings_ms").items()) r.timings_ms.emplace_back(stage, ms.get<double>());
  r.version = j.at("version").get<std::string>();
  return r;
}

std::string report_text(const EvaluationReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_table(const EvaluationReport& report) {
  auto pct = [](const Metric& m) -> std::string {
    if (!m) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", *m * 100.0);
    return buf;
  };
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %9s %7s %7s %7s %10s %7s\n", "engine", "accuracy", "far", "fpr", "fnr",
                "precision", "recall");
  out << line;
  for (const auto& e : report.engines) {
    std::string name(to_string(e.engine));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    std::snprintf(line, sizeof(line), "%-8s %9s %7s %7s %7s %10s %7s\n", name.c_str(), pct(e.metrics.accuracy).c_str(),
                  pct(e.metrics.far).c_str(), pct(e.metrics.fpr).c_str(), pct(e.metrics.fnr).c_str(),
                  pct(e.metrics.precision).c_str(), pct(e.metrics.recall).c_str());
    out << line;
  }
  return out.str();
}

void emit_report(const EvaluationReport& report, const std::filesystem::path& path, std::ostream* table_out) {
  const std::string text = report_text(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
  if (table_out) *table_out << render_table(report);
}

}  // namespace nidsfs
