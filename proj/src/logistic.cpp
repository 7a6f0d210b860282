#include <algorithm>
#include <cmath>

#include "nidsfs/engines.hpp"
#include "nidsfs/error.hpp"

namespace nidsfs {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) noexcept { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(std::span<const double> w, std::span<const double> x, double bias) noexcept {
  double z = bias;
  for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
  return z;
}

void check_width(std::span<const double> weights, const FeatureMatrix& matrix) {
  if (weights.size() != matrix.width) {
    throw Error(ErrorCode::SchemaMismatch, "weight vector width differs from matrix width");
  }
  if (!matrix.labeled()) throw Error(ErrorCode::LengthMismatch, "logistic loss needs a labeled matrix");
}

}  // namespace

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double lr_loss(std::span<const double> weights, double bias, const FeatureMatrix& matrix, double l2) {
  check_width(weights, matrix);
  const std::size_t n = matrix.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = dot(weights, matrix.row(i), bias);
    total += softplus(z) - (matrix.labels[i] == Label::Attack ? z : 0.0);
  }
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return total / static_cast<double>(n) + 0.5 * l2 * penalty;
}

double lr_loss_gradient(std::span<const double> weights, double bias, const FeatureMatrix& matrix, double l2,
                        std::span<double> grad_weights, double& grad_bias) {
  check_width(weights, matrix);
  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.width;
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  grad_bias = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = matrix.row(i);
    const double z = dot(weights, x, bias);
    const double y = matrix.labels[i] == Label::Attack ? 1.0 : 0.0;
    total += softplus(z) - y * z;
    const double err = sigmoid(z) - y;
    for (std::size_t j = 0; j < d; ++j) grad_weights[j] += err * x[j];
    grad_bias += err;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double penalty = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    grad_weights[j] = grad_weights[j] * inv_n + l2 * weights[j];
    penalty += weights[j] * weights[j];
  }
  grad_bias *= inv_n;
  return total * inv_n + 0.5 * l2 * penalty;
}

LRModel lr_fit(const FeatureMatrix& matrix, const LRHyper& hyper) {
  if (!matrix.labeled()) throw Error(ErrorCode::LengthMismatch, "logistic regression needs a labeled matrix");
  bool has[2] = {false, false};
  for (Label l : matrix.labels) has[to_int(l)] = true;
  if (!has[0] || !has[1]) {
    throw Error(ErrorCode::SingleClassTraining, "logistic regression needs both classes in training data");
  }

  LRModel model;
  model.weights.assign(matrix.width, 0.0);
  std::vector<double> grad(matrix.width, 0.0);
  double grad_bias = 0.0;
  double loss = lr_loss_gradient(model.weights, model.bias, matrix, hyper.l2, grad, grad_bias);
  model.loss_trace.push_back(loss);

  for (std::size_t it = 0; it < hyper.max_iterations; ++it) {
    for (std::size_t j = 0; j < matrix.width; ++j) model.weights[j] -= hyper.learning_rate * grad[j];
    model.bias -= hyper.learning_rate * grad_bias;
    const double next = lr_loss_gradient(model.weights, model.bias, matrix, hyper.l2, grad, grad_bias);
    if (!std::isfinite(next)) {
      throw Error(ErrorCode::DivergedLoss, "loss became non-finite at iteration " + std::to_string(it + 1));
    }
    model.loss_trace.push_back(next);
    model.iterations = it + 1;
    const double improvement = loss - next;
    loss = next;
    if (improvement < hyper.tolerance) break;
  }
  model.final_loss = loss;
  return model;
}

Prediction lr_predict(const LRModel& model, std::span<const double> row) {
  if (row.size() != model.weights.size()) {
    throw Error(ErrorCode::SchemaMismatch, "row width " + std::to_string(row.size()) + " differs from model width " +
                                               std::to_string(model.weights.size()));
  }
  const double p = sigmoid(dot(model.weights, row, model.bias));
  return {p >= 0.5 ? Label::Attack : Label::Normal, p};
}

}  // namespace nidsfs
