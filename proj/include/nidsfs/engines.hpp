#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nidsfs/dataset.hpp"
#include "nidsfs/value.hpp"

namespace nidsfs {

struct Prediction {
  Label label = Label::Attack;
  double probability = 0.5;  // probability of Attack
};

// ---------------------------------------------------------------------------
// Encoding

/// How one selected attribute maps onto matrix columns.
struct ColumnSpec {
  std::string attribute;
  AttributeKind kind = AttributeKind::Numeric;
  std::vector<std::string> tokens;  // categorical: one-hot order (sorted)
  double mean = 0.0;                // numeric standardization
  double scale = 1.0;               // population std, 1 when the column is constant
  Value impute;                     // training mode, substituted for Missing
};

/// Dense row-major real matrix with optional labels.
struct FeatureMatrix {
  std::vector<ColumnSpec> columns;
  std::size_t width = 0;
  std::vector<double> data;
  std::vector<Label> labels;

  std::size_t rows() const noexcept { return width == 0 ? 0 : data.size() / width; }
  std::span<const double> row(std::size_t i) const noexcept { return {data.data() + i * width, width}; }
  bool labeled() const noexcept { return !labels.empty() && labels.size() == rows(); }

  /// Matrix over raw values with no encoding metadata.
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows, std::vector<Label> labels = {});
};

/// Fitted on training data; applies identical encoding to any dataset with
/// the same attributes. Categoricals are one-hot over training tokens
/// (unseen tokens give an all-zero block); numerics are standardized.
class FeatureEncoder {
 public:
  /// Throws UnknownFeature when a name is not in the schema.
  static FeatureEncoder fit(const Dataset& train, std::span<const std::string> features);

  FeatureMatrix transform(const Dataset& dataset) const;
  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
  std::size_t width() const noexcept { return width_; }

 private:
  std::vector<ColumnSpec> columns_;
  std::size_t width_ = 0;
};

struct Encoded {
  FeatureEncoder encoder;
  FeatureMatrix matrix;
};

Encoded encode(const Dataset& train, std::span<const std::string> features);

/// Values of the named attributes for one record, in the given order.
std::vector<Value> project_row(const Dataset& dataset, std::size_t row, std::span<const std::size_t> columns);
std::vector<std::size_t> resolve_features(const Dataset& dataset, std::span<const std::string> features);

// ---------------------------------------------------------------------------
// Naive Bayes

inline constexpr double kVarianceFloor = 1e-9;

struct GaussianParams {
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 2> variance{1.0, 1.0};
};

struct CategoricalParams {
  std::vector<std::string> vocabulary;           // sorted
  std::array<std::vector<double>, 2> probability;  // per class, aligned with vocabulary
};

struct NBFeature {
  std::string attribute;
  std::variant<GaussianParams, CategoricalParams> params;
};

struct NBModel {
  std::array<double, 2> priors{0.5, 0.5};
  std::vector<NBFeature> features;
};

/// Class priors from label frequencies; Laplace-smoothed (alpha = 1) token
/// tables for categoricals; per-class Gaussians with a variance floor for
/// numerics. Missing cells are skipped. Throws SingleClassTraining.
NBModel nb_fit(const Dataset& train, std::span<const std::string> features);

/// `row` holds one value per model feature, in model order. Missing values
/// and unseen tokens contribute equally to both classes. Equal class scores
/// predict Attack. Throws SchemaMismatch on a length mismatch.
Prediction nb_predict(const NBModel& model, std::span<const Value> row);

/// Per-class log score: log prior + sum of log likelihoods.
std::array<double, 2> nb_log_scores(const NBModel& model, std::span<const Value> row);

// ---------------------------------------------------------------------------
// Logistic regression

struct LRHyper {
  double learning_rate = 0.1;
  std::size_t max_iterations = 500;
  double l2 = 1e-4;
  double tolerance = 1e-8;
};

struct LRModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t iterations = 0;
  double final_loss = 0.0;
  std::vector<double> loss_trace;  // loss before the first step, then after each step
};

double sigmoid(double z) noexcept;

/// Mean negative log-likelihood plus (l2 / 2) * |w|^2; the bias is not penalized.
double lr_loss(std::span<const double> weights, double bias, const FeatureMatrix& matrix, double l2);

/// Returns the loss and writes its gradient into grad_weights / grad_bias.
double lr_loss_gradient(std::span<const double> weights, double bias, const FeatureMatrix& matrix, double l2,
                        std::span<double> grad_weights, double& grad_bias);

/// Full-batch gradient descent from zero weights. Stops after
/// max_iterations steps or once a step improves the loss by less than the
/// tolerance. Throws SingleClassTraining or DivergedLoss.
LRModel lr_fit(const FeatureMatrix& matrix, const LRHyper& hyper = {});

/// Attack iff logistic(w.x + b) >= 0.5. Throws SchemaMismatch.
Prediction lr_predict(const LRModel& model, std::span<const double> row);

// ---------------------------------------------------------------------------
// EM clustering (diagonal Gaussian mixture)

struct EMConfig {
  std::size_t components = 2;
  std::size_t max_iterations = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  std::size_t restarts = 5;
};

struct EMComponent {
  double weight = 0.0;
  std::vector<double> mean;
  std::vector<double> variance;
};

struct EMModel {
  std::vector<EMComponent> components;
  std::vector<Label> cluster_labels;            // filled by map_clusters
  std::vector<double> log_likelihood_trace;     // one entry per E-step of the kept run
  std::size_t iterations = 0;

  bool fitted() const noexcept { return !components.empty(); }
  std::size_t dimension() const noexcept { return fitted() ? components.front().mean.size() : 0; }
};

/// Best of `restarts` runs, each seeded by distance-weighted sampling of
/// initial means with unit variances and equal weights. Labels in the
/// matrix are ignored. Throws TooFewRows when rows < 2 * components.
EMModel em_fit(const FeatureMatrix& matrix, const EMConfig& config = {});

/// Posterior component probabilities for one row; sums to 1.
std::vector<double> em_responsibilities(const EMModel& model, std::span<const double> row);

/// Total data log-likelihood under the model.
double em_log_likelihood(const EMModel& model, const FeatureMatrix& matrix);

/// Hard-assigns rows to their most responsible component and maps each
/// component to its majority label. If every component maps to one label,
/// the component with the highest attack fraction maps to Attack and the
/// rest to Normal. Throws UnfittedModel, or LengthMismatch for unlabeled input.
std::vector<Label> map_clusters(const EMModel& model, const FeatureMatrix& labeled);

/// Label of the most responsible component; probability is the total
/// responsibility of components mapped to Attack. Throws UnfittedModel
/// when the model has no cluster mapping.
Prediction em_predict(const EMModel& model, std::span<const double> row);

// ---------------------------------------------------------------------------
// Model dumps

nlohmann::ordered_json to_json(const NBModel& model);
nlohmann::ordered_json to_json(const LRModel& model);
nlohmann::ordered_json to_json(const EMModel& model);

}  // namespace nidsfs
