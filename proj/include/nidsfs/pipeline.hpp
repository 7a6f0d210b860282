#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nidsfs/arm_ranker.hpp"
#include "nidsfs/dataset.hpp"
#include "nidsfs/engines.hpp"
#include "nidsfs/error.hpp"
#include "nidsfs/metrics.hpp"
#include "nidsfs/partition_cp.hpp"

namespace nidsfs {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Engine { EM, NB, LR };

std::string_view to_string(Engine engine) noexcept;
/// Accepts "em", "nb", "lr". Throws InvalidConfig otherwise.
Engine parse_engine(std::string_view name);

struct TrainTestFiles {
  std::filesystem::path train;
  std::filesystem::path test;
};

struct SingleFile {
  std::filesystem::path input;
  double split_ratio = 0.8;
};

struct SyntheticSource {
  std::size_t records = 2000;
  std::size_t noise_features = 16;
  std::size_t signal_features = 4;
  double split_ratio = 0.8;
};

struct PipelineConfig {
  std::variant<TrainTestFiles, SingleFile, SyntheticSource> source = SyntheticSource{};
  std::string label_column = "label";
  std::vector<double> thresholds{kDefaultThresholds.begin(), kDefaultThresholds.end()};
  std::size_t num_features = 11;
  std::vector<Engine> engines{Engine::EM, Engine::NB, Engine::LR};
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  LRHyper lr;
  EMConfig em;  // em.seed is replaced by `seed`
  std::optional<std::filesystem::path> dump_centres;
  std::optional<std::filesystem::path> dump_rules;
  std::optional<std::filesystem::path> dump_model;

  /// Throws InvalidConfig: thresholds must be ascending in (0, 1],
  /// num_features >= 1, engines non-empty without duplicates.
  void validate() const;
};

/// Pipeline failure carrying the name of the stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), "stage '" + stage + "': " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Everything feature selection produces from the training set.
struct Selection {
  std::size_t partitions = 0;
  CentralPointsTable centres;
  std::vector<Transaction> transactions;
  ThresholdSweep sweep;
  std::vector<Rule> rules;  // at the lowest threshold
};

/// Central points -> transactions -> threshold sweep, on training data only.
Selection select_training_features(const Dataset& train, std::span<const double> thresholds,
                                   std::size_t num_features, std::size_t threads = 1);

struct ReportFeature {
  std::string attribute;
  double importance = 0.0;
  bool operator==(const ReportFeature&) const = default;
};

struct ReportThreshold {
  double threshold = 0.0;
  std::size_t rule_count = 0;
  std::array<std::vector<ReportFeature>, 2> per_class;
  bool operator==(const ReportThreshold&) const = default;
};

struct EngineResult {
  Engine engine = Engine::LR;
  ConfusionMatrix confusion;
  MetricsReport metrics;
  bool operator==(const EngineResult&) const = default;
};

struct EvaluationReport {
  nlohmann::ordered_json config;
  std::size_t partitions = 0;
  std::vector<ReportFeature> selected_features;
  std::vector<ReportThreshold> threshold_sweep;
  std::vector<EngineResult> engines;
  std::vector<std::pair<std::string, double>> timings_ms;  // in stage order
  std::string version{kVersion};

  bool operator==(const EvaluationReport&) const = default;
};

/// Load -> central points -> rule mining -> engines -> metrics. Every
/// stage is timed. Errors are rethrown as StageError.
EvaluationReport run_pipeline(const PipelineConfig& config);

nlohmann::ordered_json to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::ordered_json& j);

/// Report JSON text: fixed key order, shortest round-trip floats.
std::string report_text(const EvaluationReport& report);

/// Fixed-width metrics table, percentages with one decimal.
std::string render_table(const EvaluationReport& report);

/// Writes report_text to `path` and, when `table_out` is set, the table to it.
/// Throws IoError.
void emit_report(const EvaluationReport& report, const std::filesystem::path& path,
                 std::ostream* table_out = nullptr);

}  // namespace nidsfs
