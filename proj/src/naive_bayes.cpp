#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "nidsfs/engines.hpp"
#include "nidsfs/error.hpp"

namespace nidsfs {

namespace {

std::string token_of(const Value& v) { return v.is_categorical() ? v.as_token() : v.to_text(); }

GaussianParams fit_gaussian(const Dataset& train, std::size_t col) {
  std::array<double, 2> sum{0.0, 0.0};
  std::array<std::size_t, 2> count{0, 0};
  for (std::size_t r = 0; r < train.size(); ++r) {
    const Value& v = train.records()[r][col];
    if (!v.is_numeric()) continue;
    const int c = to_int(train.labels()[r]);
    sum[c] += v.as_number();
    ++count[c];
  }
  GaussianParams g;
  std::array<double, 2> ss{0.0, 0.0};
  for (int c = 0; c < 2; ++c) g.mean[c] = count[c] ? sum[c] / static_cast<double>(count[c]) : 0.0;
  for (std::size_t r = 0; r < train.size(); ++r) {
    const Value& v = train.records()[r][col];
    if (!v.is_numeric()) continue;
    const int c = to_int(train.labels()[r]);
    const double d = v.as_number() - g.mean[c];
    ss[c] += d * d;
  }
  for (int c = 0; c < 2; ++c) {
    g.variance[c] = count[c] ? std::max(ss[c] / static_cast<double>(count[c]), kVarianceFloor) : 1.0;
  }
  // A class with no observations borrows the other's parameters so the
  // feature stays neutral for it.
  for (int c = 0; c < 2; ++c) {
    if (count[c] == 0 && count[1 - c] > 0) {
      g.mean[c] = g.mean[1 - c];
      g.variance[c] = g.variance[1 - c];
    }
  }
  return g;
}

CategoricalParams fit_categorical(const Dataset& train, std::size_t col) {
  std::set<std::string> vocab;
  for (const auto& rec : train.records()) {
    if (!rec[col].is_missing()) vocab.insert(token_of(rec[col]));
  }
  CategoricalParams p;
  p.vocabulary.assign(vocab.begin(), vocab.end());
  const std::size_t k = p.vocabulary.size();
  std::array<std::vector<std::size_t>, 2> counts{std::vector<std::size_t>(k, 0), std::vector<std::size_t>(k, 0)};
  std::array<std::size_t, 2> totals{0, 0};
  for (std::size_t r = 0; r < train.size(); ++r) {
    const Value& v = train.records()[r][col];
    if (v.is_missing()) continue;
    const int c = to_int(train.labels()[r]);
    auto it = std::lower_bound(p.vocabulary.begin(), p.vocabulary.end(), token_of(v));
    ++counts[c][static_cast<std::size_t>(it - p.vocabulary.begin())];
    ++totals[c];
  }
  for (int c = 0; c < 2; ++c) {
    p.probability[c].resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      p.probability[c][i] = (static_cast<double>(counts[c][i]) + 1.0) / static_cast<double>(totals[c] + k);
    }
  }
  return p;
}

double gaussian_log_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * variance) - d * d / (2.0 * variance);
}

}  // namespace

NBModel nb_fit(const Dataset& train, std::span<const std::string> features) {
  const auto cols = resolve_features(train, features);
  const auto [normal, attack] = train.class_counts();
  if (normal == 0 || attack == 0) {
    throw Error(ErrorCode::SingleClassTraining, "naive Bayes needs both classes in training data");
  }
  NBModel model;
  const double n = static_cast<double>(train.size());
  model.priors = {static_cast<double>(normal) / n, static_cast<double>(attack) / n};
  for (std::size_t f = 0; f < cols.size(); ++f) {
    const auto& attr = train.schema()[cols[f]];
    NBFeature feature{attr.name, {}};
    if (attr.kind == AttributeKind::Numeric) {
      feature.params = fit_gaussian(train, cols[f]);
    } else {
      feature.params = fit_categorical(train, cols[f]);
    }
    model.features.push_back(std::move(feature));
  }
  return model;
}

std::array<double, 2> nb_log_scores(const NBModel& model, std::span<const Value> row) {
  if (row.size() != model.features.size()) {
    throw Error(ErrorCode::SchemaMismatch, "row has " + std::to_string(row.size()) + " values, model expects " +
                                               std::to_string(model.features.size()));
  }
  std::array<double, 2> score{std::log(model.priors[0]), std::log(model.priors[1])};
  for (std::size_t f = 0; f < row.size(); ++f) {
    const Value& v = row[f];
    if (v.is_missing()) continue;
    if (const auto* g = std::get_if<GaussianParams>(&model.features[f].params)) {
      if (!v.is_numeric()) continue;
      for (int c = 0; c < 2; ++c) score[c] += gaussian_log_pdf(v.as_number(), g->mean[c], g->variance[c]);
    } else {
      const auto& p = std::get<CategoricalParams>(model.features[f].params);
      auto it = std::lower_bound(p.vocabulary.begin(), p.vocabulary.end(), token_of(v));
      if (it == p.vocabulary.end() || *it != token_of(v)) continue;  // unseen: uniform for both classes
      const auto i = static_cast<std::size_t>(it - p.vocabulary.begin());
      for (int c = 0; c < 2; ++c) score[c] += std::log(p.probability[c][i]);
    }
  }
  return score;
}

Prediction nb_predict(const NBModel& model, std::span<const Value> row) {
  const auto score = nb_log_scores(model, row);
  const double p1 = 1.0 / (1.0 + std::exp(score[0] - score[1]));
  return {score[1] >= score[0] ? Label::Attack : Label::Normal, p1};
}

}  // namespace nidsfs
