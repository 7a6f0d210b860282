#include <algorithm>
#include <cmath>
#include <set>

#include "nidsfs/engines.hpp"
#include "nidsfs/error.hpp"
#include "nidsfs/partition_cp.hpp"

namespace nidsfs {

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows, std::vector<Label> labels) {
  FeatureMatrix m;
  m.width = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != m.width) throw Error(ErrorCode::SchemaMismatch, "ragged matrix rows");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  if (!labels.empty() && labels.size() != rows.size()) {
    throw Error(ErrorCode::LengthMismatch, "labels length differs from row count");
  }
  m.labels = std::move(labels);
  return m;
}

std::vector<std::size_t> resolve_features(const Dataset& dataset, std::span<const std::string> features) {
  std::vector<std::size_t> out;
  out.reserve(features.size());
  for (const auto& name : features) {
    auto idx = dataset.find_attribute(name);
    if (!idx) throw Error(ErrorCode::UnknownFeature, "feature '" + name + "' is not in " + dataset.name());
    out.push_back(*idx);
  }
  return out;
}

std::vector<Value> project_row(const Dataset& dataset, std::size_t row, std::span<const std::size_t> columns) {
  std::vector<Value> out;
  out.reserve(columns.size());
  const auto& rec = dataset.records().at(row);
  for (std::size_t c : columns) out.push_back(rec.at(c));
  return out;
}

namespace {

std::string token_of(const Value& v) { return v.is_categorical() ? v.as_token() : v.to_text(); }

}  // namespace

FeatureEncoder FeatureEncoder::fit(const Dataset& train, std::span<const std::string> features) {
  const auto cols = resolve_features(train, features);
  FeatureEncoder enc;
  std::vector<Value> column;
  for (std::size_t f = 0; f < cols.size(); ++f) {
    const auto& attr = train.schema()[cols[f]];
    column.clear();
    for (const auto& rec : train.records()) column.push_back(rec[cols[f]]);

    ColumnSpec spec;
    spec.attribute = attr.name;
    spec.kind = attr.kind;
    if (auto mode = mode_of(column)) spec.impute = mode->value;

    if (attr.kind == AttributeKind::Categorical) {
      std::set<std::string> tokens;
      for (const auto& v : column) {
        if (!v.is_missing()) tokens.insert(token_of(v));
      }
      spec.tokens.assign(tokens.begin(), tokens.end());
      enc.width_ += spec.tokens.size();
    } else {
      const double fill = spec.impute.is_numeric() ? spec.impute.as_number() : 0.0;
      double sum = 0.0;
      for (const auto& v : column) sum += v.is_numeric() ? v.as_number() : fill;
      const double n = static_cast<double>(column.size());
      spec.mean = sum / n;
      double ss = 0.0;
      for (const auto& v : column) {
        const double d = (v.is_numeric() ? v.as_number() : fill) - spec.mean;
        ss += d * d;
      }
      const double sd = std::sqrt(ss / n);
      spec.scale = sd > 0.0 ? sd : 1.0;
      enc.width_ += 1;
    }
    enc.columns_.push_back(std::move(spec));
  }
  return enc;
}

FeatureMatrix FeatureEncoder::transform(const Dataset& dataset) const {
  std::vector<std::size_t> cols;
  cols.reserve(columns_.size());
  for (const auto& spec : columns_) {
    auto idx = dataset.find_attribute(spec.attribute);
    if (!idx) throw Error(ErrorCode::UnknownFeature, "feature '" + spec.attribute + "' is not in " + dataset.name());
    cols.push_back(*idx);
  }

  FeatureMatrix m;
  m.columns = columns_;
  m.width = width_;
  m.labels = dataset.labels();
  m.data.assign(dataset.size() * width_, 0.0);
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    double* out = m.data.data() + r * width_;
    const auto& rec = dataset.records()[r];
    for (std::size_t f = 0; f < columns_.size(); ++f) {
      const auto& spec = columns_[f];
      const Value& raw = rec[cols[f]].is_missing() ? spec.impute : rec[cols[f]];
      if (spec.kind == AttributeKind::Categorical) {
        if (!raw.is_missing()) {
          const std::string tok = token_of(raw);
          auto it = std::lower_bound(spec.tokens.begin(), spec.tokens.end(), tok);
          if (it != spec.tokens.end() && *it == tok) out[it - spec.tokens.begin()] = 1.0;
        }
        out += spec.tokens.size();
      } else {
        const double x = raw.is_numeric() ? raw.as_number() : spec.mean;
        *out++ = (x - spec.mean) / spec.scale;
      }
    }
  }
  return m;
}

Encoded encode(const Dataset& train, std::span<const std::string> features) {
  auto encoder = FeatureEncoder::fit(train, features);
  auto matrix = encoder.transform(train);
  return {std::move(encoder), std::move(matrix)};
}

}  // namespace nidsfs
