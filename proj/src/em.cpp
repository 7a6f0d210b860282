#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nidsfs/engines.hpp"
#include "nidsfs/error.hpp"
#include "nidsfs/rng.hpp"

namespace nidsfs {

namespace {

// Per-component log(weight * density) for one row.
void component_log_terms(const std::vector<EMComponent>& comps, std::span<const double> x, std::span<double> out) {
  constexpr double kLog2Pi = 1.8378770664093454835606594728112;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& c = comps[k];
    double s = std::log(c.weight);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - c.mean[j];
      s -= 0.5 * (kLog2Pi + std::log(c.variance[j]) + d * d / c.variance[j]);
    }
    out[k] = s;
  }
}

// Normalizes log terms in place into responsibilities; returns log-sum-exp.
double normalize(std::span<double> terms) {
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double& t : terms) {
    t = std::exp(t - top);
    sum += t;
  }
  for (double& t : terms) t /= sum;
  return top + std::log(sum);
}

std::vector<std::size_t> seed_means(const FeatureMatrix& m, std::size_t k, Rng& rng) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.below(n))};
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < k) {
    const auto last = m.row(chosen.back());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = m.row(i);
      double d = 0.0;
      for (std::size_t j = 0; j < m.width; ++j) d += (x[j] - last[j]) * (x[j] - last[j]);
      dist[i] = std::min(dist[i], d);
      total += dist[i];
    }
    if (total <= 0.0) {
      chosen.push_back(static_cast<std::size_t>(rng.below(n)));
      continue;
    }
    const double target = rng.uniform01() * total;
    double acc = 0.0;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      acc += dist[i];
      if (acc > target) {
        pick = i;
        break;
      }
    }
    chosen.push_back(pick);
  }
  return chosen;
}

EMModel run_once(const FeatureMatrix& m, const EMConfig& cfg, Rng& rng) {
  const std::size_t n = m.rows();
  const std::size_t d = m.width;
  const std::size_t k = cfg.components;

  EMModel model;
  for (std::size_t idx : seed_means(m, k, rng)) {
    const auto row = m.row(idx);
    model.components.push_back({1.0 / static_cast<double>(k), {row.begin(), row.end()}, std::vector<double>(d, 1.0)});
  }

  std::vector<double> resp(n * k);
  std::vector<double> terms(k);
  for (std::size_t it = 0;; ++it) {
    // E-step
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::span<double> r(resp.data() + i * k, k);
      component_log_terms(model.components, m.row(i), r);
      ll += normalize(r);
    }
    const bool converged =
        !model.log_likelihood_trace.empty() && ll - model.log_likelihood_trace.back() < cfg.tolerance;
    model.log_likelihood_trace.push_back(ll);
    if (converged || it >= cfg.max_iterations) break;
    model.iterations = it + 1;

    // M-step
    for (std::size_t c = 0; c < k; ++c) {
      double nk = 0.0;
      std::vector<double> mean(d, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = resp[i * k + c];
        nk += w;
        const auto x = m.row(i);
        for (std::size_t j = 0; j < d; ++j) mean[j] += w * x[j];
      }
      nk = std::max(nk, std::numeric_limits<double>::min());
      for (double& v : mean) v /= nk;
      std::vector<double> var(d, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = resp[i * k + c];
        const auto x = m.row(i);
        for (std::size_t j = 0; j < d; ++j) var[j] += w * (x[j] - mean[j]) * (x[j] - mean[j]);
      }
      for (double& v : var) v = std::max(v / nk, kVarianceFloor);
      auto& comp = model.components[c];
      comp.weight = nk / static_cast<double>(n);
      comp.mean = std::move(mean);
      comp.variance = std::move(var);
    }
    // Renormalize so the weights sum to 1 despite rounding.
    double wsum = 0.0;
    for (const auto& comp : model.components) wsum += comp.weight;
    for (auto& comp : model.components) comp.weight /= wsum;
  }
  return model;
}

void require_fitted(const EMModel& model) {
  if (!model.fitted()) throw Error(ErrorCode::UnfittedModel, "EM model has not been fitted");
}

std::size_t hard_assign(std::span<const double> resp) {
  return static_cast<std::size_t>(std::max_element(resp.begin(), resp.end()) - resp.begin());
}

}  // namespace

EMModel em_fit(const FeatureMatrix& matrix, const EMConfig& config) {
  if (config.components < 1) throw Error(ErrorCode::InvalidConfig, "EM needs at least one component");
  if (matrix.rows() < 2 * config.components) {
    throw Error(ErrorCode::TooFewRows, "EM needs at least " + std::to_string(2 * config.components) + " rows");
  }
  Rng rng(config.seed);
  EMModel best;
  const std::size_t restarts = std::max<std::size_t>(1, config.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    EMModel candidate = run_once(matrix, config, rng);
    if (!best.fitted() || candidate.log_likelihood_trace.back() > best.log_likelihood_trace.back()) {
      best = std::move(candidate);
    }
  }
  return best;
}

std::vector<double> em_responsibilities(const EMModel& model, std::span<const double> row) {
  require_fitted(model);
  if (row.size() != model.dimension()) throw Error(ErrorCode::SchemaMismatch, "row width differs from EM model");
  std::vector<double> r(model.components.size());
  component_log_terms(model.components, row, r);
  normalize(r);
  return r;
}

double em_log_likelihood(const EMModel& model, const FeatureMatrix& matrix) {
  require_fitted(model);
  if (matrix.width != model.dimension()) throw Error(ErrorCode::SchemaMismatch, "matrix width differs from EM model");
  std::vector<double> terms(model.components.size());
  double ll = 0.0;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    component_log_terms(model.components, matrix.row(i), terms);
    ll += normalize(terms);
  }
  return ll;
}

std::vector<Label> map_clusters(const EMModel& model, const FeatureMatrix& labeled) {
  require_fitted(model);
  if (!labeled.labeled()) throw Error(ErrorCode::LengthMismatch, "cluster mapping needs a labeled matrix");
  const std::size_t k = model.components.size();
  std::vector<std::size_t> total(k, 0);
  std::vector<std::size_t> attacks(k, 0);
  for (std::size_t i = 0; i < labeled.rows(); ++i) {
    const auto c = hard_assign(em_responsibilities(model, labeled.row(i)));
    ++total[c];
    attacks[c] += labeled.labels[i] == Label::Attack;
  }
  auto fraction = [&](std::size_t c) {
    return total[c] ? static_cast<double>(attacks[c]) / static_cast<double>(total[c]) : 0.0;
  };

  std::vector<Label> mapping(k);
  for (std::size_t c = 0; c < k; ++c) mapping[c] = 2 * attacks[c] > total[c] ? Label::Attack : Label::Normal;
  if (std::all_of(mapping.begin(), mapping.end(), [&](Label l) { return l == mapping.front(); }) && k > 1) {
    std::size_t top = 0;
    for (std::size_t c = 1; c < k; ++c) {
      if (fraction(c) >= fraction(top)) top = c;
    }
    for (std::size_t c = 0; c < k; ++c) mapping[c] = c == top ? Label::Attack : Label::Normal;
  }
  return mapping;
}

Prediction em_predict(const EMModel& model, std::span<const double> row) {
  require_fitted(model);
  if (model.cluster_labels.size() != model.components.size()) {
    throw Error(ErrorCode::UnfittedModel, "EM model has no cluster-to-label mapping");
  }
  const auto r = em_responsibilities(model, row);
  double p_attack = 0.0;
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (model.cluster_labels[c] == Label::Attack) p_attack += r[c];
  }
  return {model.cluster_labels[hard_assign(r)], p_attack};
}

}  // namespace nidsfs
