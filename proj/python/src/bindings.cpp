#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nidsfs/pipeline.hpp"

namespace py = pybind11;
using namespace nidsfs;

namespace {

// Leaked on purpose: must outlive interpreter teardown.
py::exception<Error>* error_type = nullptr;

py::object to_py(const Value& v) {
  if (v.is_missing()) return py::none();
  if (v.is_numeric()) return py::float_(v.as_number());
  return py::str(v.as_token());
}

Value from_py(const py::handle& h) {
  if (h.is_none()) return Value::missing();
  if (py::isinstance<py::str>(h)) return Value::categorical(h.cast<std::string>());
  return Value::numeric(h.cast<double>());
}

std::vector<Value> values_from(const py::iterable& xs) {
  std::vector<Value> out;
  for (auto x : xs) out.push_back(from_py(x));
  return out;
}

Label label_from(const py::handle& h) { return label_from_int(h.cast<int>()); }

py::dict rule_dict(const Rule& r) {
  py::dict d;
  d["antecedent"] = py::make_tuple(r.antecedent.attribute, to_py(r.antecedent.value));
  d["consequent"] = py::make_tuple(r.consequent.attribute, to_py(r.consequent.value));
  d["support"] = r.support;
  d["confidence"] = r.confidence;
  d["importance"] = r.importance;
  d["label"] = to_int(r.label);
  return d;
}

py::object metric(const Metric& m) { return m ? py::object(py::float_(*m)) : py::object(py::none()); }

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<Transaction> transactions_from(const py::iterable& txs) {
  std::vector<Transaction> out;
  for (auto t : txs) {
    auto pair = t.cast<py::tuple>();
    std::vector<Item> items;
    for (auto kv : pair[0].cast<py::dict>()) items.push_back({kv.first.cast<std::string>(), from_py(kv.second)});
    std::sort(items.begin(), items.end());
    out.emplace_back(std::move(items), label_from(pair[1]));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_nidsfs, m) {
  m.doc() = "Central-point and association-rule feature selection with NB / LR / EM engines";
  m.attr("__version__") = std::string(kVersion);

  error_type = new py::exception<Error>(m, "NidsfsError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type->ptr())(py::str(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type->ptr(), exc.ptr());
    }
  });

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("name", &Dataset::name)
      .def_property_readonly("attributes",
                             [](const Dataset& d) {
                               std::vector<std::string> out;
                               for (const auto& a : d.schema()) out.push_back(a.name);
                               return out;
                             })
      .def_property_readonly("kinds",
                             [](const Dataset& d) {
                               std::vector<std::string> out;
                               for (const auto& a : d.schema()) out.emplace_back(to_string(a.kind));
                               return out;
                             })
      .def_property_readonly("labels",
                             [](const Dataset& d) {
                               std::vector<int> out;
                               for (auto l : d.labels()) out.push_back(to_int(l));
                               return out;
                             })
      .def_property_readonly("records",
                             [](const Dataset& d) {
                               py::list rows;
                               for (const auto& r : d.records()) {
                                 py::list row;
                                 for (const auto& v : r) row.append(to_py(v));
                                 rows.append(row);
                               }
                               return rows;
                             })
      .def("class_counts", &Dataset::class_counts)
      .def("__len__", &Dataset::size)
      .def("to_csv", [](const Dataset& d, const std::string& label) { return to_csv(d, label); },
           py::arg("label_column") = "label");

  m.def("load_csv", [](const std::filesystem::path& p, const std::string& label) { return load_csv(p, label); },
        py::arg("path"), py::arg("label_column") = "label");
  m.def("parse_csv",
        [](const std::string& text, const std::string& label, const std::string& name) {
          return parse_csv(text, label, name);
        },
        py::arg("text"), py::arg("label_column") = "label", py::arg("name") = "inline");
  m.def("synth_dataset",
        [](std::size_t n, std::size_t noise, std::size_t signal, std::uint64_t seed) {
          auto s = synth_dataset(n, noise, signal, seed);
          return py::make_tuple(std::move(s.dataset), s.signal_features);
        },
        py::arg("records"), py::arg("noise"), py::arg("signal"), py::arg("seed") = 0,
        "Returns (dataset, signal_feature_names).");

  m.def("partition_count", &partition_count, py::arg("records"), py::arg("attributes"));
  m.def("make_plan",
        [](std::size_t n, std::size_t p) {
          std::vector<std::pair<std::size_t, std::size_t>> out;
          for (const auto& r : make_plan(n, p).ranges) out.emplace_back(r.begin, r.end);
          return out;
        },
        py::arg("records"), py::arg("p"));
  m.def("mode_of",
        [](const py::iterable& xs) -> py::object {
          auto mode = mode_of(values_from(xs));
          if (!mode) return py::none();
          return py::make_tuple(to_py(mode->value), mode->count);
        },
        "Most frequent non-missing value and its count, or None.");
  m.def("central_points",
        [](const Dataset& d, std::size_t p, std::size_t threads) {
          py::list out;
          const auto table = central_points(d, p, threads);
          for (const auto& e : table.entries()) {
            out.append(py::make_tuple(table.attributes()[e.attribute], e.partition, to_py(e.value), e.frequency));
          }
          return out;
        },
        py::arg("dataset"), py::arg("p"), py::arg("threads") = 1,
        "List of (attribute, partition, value, frequency).");

  m.def("generate_rules",
        [](const py::iterable& txs, double minsup, double minconf) {
          py::list out;
          for (const auto& r : generate_rules(transactions_from(txs), minsup, minconf)) out.append(rule_dict(r));
          return out;
        },
        py::arg("transactions"), py::arg("minsup"), py::arg("minconf"),
        "Transactions are (dict attribute -> value, label) pairs.");
  m.def("select_features",
        [](const Dataset& train, std::vector<double> thresholds, std::size_t x) {
          return select_training_features(train, thresholds, x).sweep.merged.names();
        },
        py::arg("train"), py::arg("thresholds") = std::vector<double>(kDefaultThresholds.begin(), kDefaultThresholds.end()),
        py::arg("num_features") = 11);

  m.def("confusion",
        [](const std::vector<int>& pred, const std::vector<int>& truth) {
          std::vector<Label> p, t;
          for (int x : pred) p.push_back(label_from_int(x));
          for (int x : truth) t.push_back(label_from_int(x));
          const auto cm = confusion(p, t);
          py::dict d;
          d["tp"] = cm.tp;
          d["tn"] = cm.tn;
          d["fp"] = cm.fp;
          d["fn"] = cm.fn;
          return d;
        },
        py::arg("predictions"), py::arg("truth"));
  m.def("compute_metrics",
        [](std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
          const auto r = compute_metrics({tp, tn, fp, fn});
          py::dict d;
          d["accuracy"] = metric(r.accuracy);
          d["fpr"] = metric(r.fpr);
          d["fnr"] = metric(r.fnr);
          d["far"] = metric(r.far);
          d["precision"] = metric(r.precision);
          d["recall"] = metric(r.recall);
          return d;
        },
        py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"));

  m.def("run_pipeline",
        [](std::optional<std::filesystem::path> train, std::optional<std::filesystem::path> test,
           std::optional<std::filesystem::path> input, double split_ratio, std::size_t synth_records,
           std::size_t synth_noise, std::size_t synth_signal, const std::string& label_column,
           std::vector<double> thresholds, std::size_t num_features, std::vector<std::string> engines,
           std::uint64_t seed, std::size_t threads) {
          PipelineConfig cfg;
          if (train || test) {
            if (!train || !test) throw Error(ErrorCode::InvalidConfig, "train and test go together");
            cfg.source = TrainTestFiles{*train, *test};
          } else if (input) {
            cfg.source = SingleFile{*input, split_ratio};
          } else {
            cfg.source = SyntheticSource{synth_records, synth_noise, synth_signal, split_ratio};
          }
          cfg.label_column = label_column;
          cfg.thresholds = std::move(thresholds);
          cfg.num_features = num_features;
          cfg.engines.clear();
          for (const auto& e : engines) cfg.engines.push_back(parse_engine(e));
          cfg.seed = seed;
          cfg.threads = threads;
          EvaluationReport report;
          {
            py::gil_scoped_release release;
            report = run_pipeline(cfg);
          }
          return json_to_py(to_json(report));
        },
        py::kw_only(), py::arg("train") = py::none(), py::arg("test") = py::none(), py::arg("input") = py::none(),
        py::arg("split_ratio") = 0.8, py::arg("synth_records") = 2000, py::arg("synth_noise") = 16,
        py::arg("synth_signal") = 4, py::arg("label_column") = "label",
        py::arg("thresholds") = std::vector<double>(kDefaultThresholds.begin(), kDefaultThresholds.end()),
        py::arg("num_features") = 11, py::arg("engines") = std::vector<std::string>{"em", "nb", "lr"},
        py::arg("seed") = 0, py::arg("threads") = 1,
        "Runs the full pipeline and returns the report as a dict. Without train/test or input, a "
        "synthetic dataset is generated.");
}
