// nidsfs: central-point + association-rule feature selection for labeled
// network-flow CSVs, followed by NB / LR / EM decision engines.
//
//   nidsfs run --train train.csv --test test.csv --report out.json
//   nidsfs run --input flows.csv --split-ratio 0.8 --report out.json
//   nidsfs synth --records 2000 --noise 16 --signal 4 --seed 7 --out synth.csv
//   nidsfs inspect --input flows.csv

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nidsfs/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

int exit_code_for(const nidsfs::Error& e) {
  switch (e.category()) {
    case nidsfs::ErrorCategory::Config: return kExitConfig;
    case nidsfs::ErrorCategory::Data: return kExitData;
    case nidsfs::ErrorCategory::Runtime: return kExitRuntime;
  }
  return kExitRuntime;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split_list(text)) {
    auto v = nidsfs::parse_number(tok);
    if (!v) throw nidsfs::Error(nidsfs::ErrorCode::InvalidConfig, "bad minsup/minconf value '" + tok + "'");
    out.push_back(*v);
  }
  return out;
}

struct RunOptions {
  std::string train, test, input;
  double split_ratio = 0.8;
  std::size_t synth_records = 0, synth_noise = 16, synth_signal = 4;
  std::string label_column = "label";
  std::string thresholds = "0.4,0.6,0.8";
  std::size_t num_features = 11;
  std::string engines = "em,nb,lr";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string report;
  std::string dump_centres, dump_rules, dump_model;
};

nidsfs::PipelineConfig build_config(const RunOptions& o) {
  using nidsfs::Error;
  using nidsfs::ErrorCode;
  nidsfs::PipelineConfig cfg;
  const int sources = (!o.train.empty() || !o.test.empty()) + !o.input.empty() + (o.synth_records > 0);
  if (sources != 1) {
    throw Error(ErrorCode::InvalidConfig, "give exactly one of --train/--test, --input or --synth-records");
  }
  if (!o.train.empty() || !o.test.empty()) {
    if (o.train.empty() || o.test.empty()) throw Error(ErrorCode::InvalidConfig, "--train and --test go together");
    cfg.source = nidsfs::TrainTestFiles{o.train, o.test};
  } else if (!o.input.empty()) {
    cfg.source = nidsfs::SingleFile{o.input, o.split_ratio};
  } else {
    cfg.source = nidsfs::SyntheticSource{o.synth_records, o.synth_noise, o.synth_signal, o.split_ratio};
  }
  cfg.label_column = o.label_column;
  cfg.thresholds = parse_thresholds(o.thresholds);
  cfg.num_features = o.num_features;
  cfg.engines.clear();
  for (const auto& name : split_list(o.engines)) cfg.engines.push_back(nidsfs::parse_engine(name));
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  if (!o.dump_centres.empty()) cfg.dump_centres = o.dump_centres;
  if (!o.dump_rules.empty()) cfg.dump_rules = o.dump_rules;
  if (!o.dump_model.empty()) cfg.dump_model = o.dump_model;
  cfg.validate();
  return cfg;
}

int cmd_run(const RunOptions& o) {
  const auto cfg = build_config(o);
  const auto report = nidsfs::run_pipeline(cfg);
  nidsfs::emit_report(report, o.report, &std::cout);
  std::cout << "selected features:";
  for (const auto& f : report.selected_features) std::cout << ' ' << f.attribute;
  std::cout << "\nreport written to " << o.report << '\n';
  return 0;
}

int cmd_synth(std::size_t records, std::size_t noise, std::size_t signal, std::uint64_t seed,
              const std::filesystem::path& out) {
  const auto synth = nidsfs::synth_dataset(records, noise, signal, seed);
  nidsfs::write_csv(synth.dataset, out);
  auto manifest = out;
  manifest.replace_extension(".manifest.json");
  std::ofstream m(manifest, std::ios::binary);
  if (!m) throw nidsfs::Error(nidsfs::ErrorCode::IoError, "cannot write " + manifest.string());
  m << nidsfs::synth_manifest_json(synth);
  std::cout << "wrote " << out.string() << " (" << records << " records, " << noise + signal
            << " attributes) and " << manifest.string() << '\n';
  return 0;
}

int cmd_inspect(const std::filesystem::path& input, const std::string& label_column) {
  const auto data = nidsfs::load_csv(input, label_column);
  const auto [normal, attack] = data.class_counts();
  std::cout << "dataset: " << data.name() << '\n'
            << "records: " << data.size() << " (normal " << normal << ", attack " << attack << ")\n"
            << "attributes: " << data.num_attributes() << '\n'
            << "partitions: " << nidsfs::partition_count(data.size(), data.num_attributes()) << '\n';
  for (const auto& a : data.schema()) {
    std::cout << "  " << a.index << '\t' << a.name << '\t' << nidsfs::to_string(a.kind) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Central-point / association-rule feature selection for network intrusion detection"};
  app.set_version_flag("--version", std::string(nidsfs::kVersion));
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run the full selection + evaluation pipeline");
  run_cmd->add_option("--train", run.train, "Training CSV");
  run_cmd->add_option("--test", run.test, "Testing CSV");
  run_cmd->add_option("--input", run.input, "Single CSV to split");
  run_cmd->add_option("--split-ratio", run.split_ratio, "Training fraction for --input / synthetic data");
  run_cmd->add_option("--synth-records", run.synth_records, "Generate a synthetic dataset with N records");
  run_cmd->add_option("--synth-noise", run.synth_noise, "Synthetic noise features");
  run_cmd->add_option("--synth-signal", run.synth_signal, "Synthetic signal features");
  run_cmd->add_option("--label-column", run.label_column, "Label column name");
  run_cmd->add_option("--minsup-minconf", run.thresholds, "Comma-separated threshold sweep");
  run_cmd->add_option("--num-features", run.num_features, "Number of features to select");
  run_cmd->add_option("--engines", run.engines, "Comma-separated subset of em,nb,lr");
  run_cmd->add_option("--seed", run.seed, "Seed for splitting, synthesis and EM");
  run_cmd->add_option("--threads", run.threads, "Worker threads for central points");
  run_cmd->add_option("--report", run.report, "Report JSON path")->required();
  run_cmd->add_option("--dump-centres", run.dump_centres, "Write the central points table as CSV");
  run_cmd->add_option("--dump-rules", run.dump_rules, "Write rules at the lowest threshold as CSV");
  run_cmd->add_option("--dump-model", run.dump_model, "Write fitted models as JSON");

  std::size_t records = 2000, noise = 16, signal = 4;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a planted-signal CSV and its manifest");
  synth_cmd->add_option("--records", records, "Number of records");
  synth_cmd->add_option("--noise", noise, "Number of noise features");
  synth_cmd->add_option("--signal", signal, "Number of signal features");
  synth_cmd->add_option("--seed", synth_seed, "Generator seed");
  synth_cmd->add_option("--out", synth_out, "Output CSV path")->required();

  std::string inspect_input;
  std::string inspect_label = "label";
  auto* inspect_cmd = app.add_subcommand("inspect", "Print schema and partition count of a CSV");
  inspect_cmd->add_option("--input", inspect_input, "CSV to inspect")->required();
  inspect_cmd->add_option("--label-column", inspect_label, "Label column name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*synth_cmd) return cmd_synth(records, noise, signal, synth_seed, synth_out);
    if (*inspect_cmd) return cmd_inspect(inspect_input, inspect_label);
  } catch (const nidsfs::StageError& e) {
    std::cerr << "error in stage '" << e.stage() << "': " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const nidsfs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
