#include "nidsfs/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "nidsfs/csv.hpp"
#include "nidsfs/error.hpp"
#include "nidsfs/rng.hpp"

namespace nidsfs {

namespace {

// NSL-KDD attack names and category names; all map to Attack.
constexpr std::array kAttackTokens = {
    "1",           "attack",        "anomaly",         "back",         "land",
    "neptune",     "pod",           "smurf",           "teardrop",     "apache2",
    "udpstorm",    "processtable",  "mailbomb",        "buffer_overflow", "loadmodule",
    "perl",        "rootkit",       "ps",              "sqlattack",    "xterm",
    "httptunnel",  "ftp_write",     "guess_passwd",    "imap",         "multihop",
    "phf",         "spy",           "warezclient",     "warezmaster",  "snmpgetattack",
    "named",       "xlock",         "xsnoop",          "sendmail",     "worm",
    "snmpguess",   "ipsweep",       "nmap",            "portsweep",    "satan",
    "mscan",       "saint",         "dos",             "DoS",          "u2r",
    "U2R",         "r2l",           "R2L",             "probe",        "Probe",
};

constexpr std::array kNormalTokens = {"0", "normal", "Normal", "benign"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Value to_value(const std::string& cell, AttributeKind kind, std::size_t row, const std::string& source) {
  if (cell.empty()) return Value::missing();
  if (kind == AttributeKind::Categorical) return Value::categorical(cell);
  auto v = parse_number(cell);
  if (!v) {
    throw RowError(ErrorCode::MalformedCsv, row, cell,
                   source + ": non-numeric cell '" + cell + "' in numeric column at row " +
                       std::to_string(row));
  }
  return Value::numeric(*v);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace

Dataset::Dataset(std::string name, Schema schema, std::vector<Row> records, std::vector<Label> labels)
    : name_(std::move(name)), schema_(std::move(schema)), records_(std::move(records)),
      labels_(std::move(labels)) {
  if (records_.empty()) throw Error(ErrorCode::EmptyDataset, name_ + ": dataset has no records");
  if (labels_.size() != records_.size()) {
    throw Error(ErrorCode::LengthMismatch, name_ + ": labels length differs from record count");
  }
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < schema_.size(); ++i) {
    if (schema_[i].index != i) {
      throw Error(ErrorCode::SchemaMismatch, name_ + ": schema indices must be 0..m-1 in order");
    }
    if (!names.insert(schema_[i].name).second) {
      throw Error(ErrorCode::SchemaMismatch, name_ + ": duplicate attribute '" + schema_[i].name + "'");
    }
  }
  for (std::size_t r = 0; r < records_.size(); ++r) {
    if (records_[r].size() != schema_.size()) {
      throw RowError(ErrorCode::MalformedCsv, r + 1, {},
                     name_ + ": row " + std::to_string(r + 1) + " length differs from schema");
    }
  }
}

std::optional<std::size_t> Dataset::find_attribute(std::string_view name) const noexcept {
  for (const auto& a : schema_) {
    if (a.name == name) return a.index;
  }
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> Dataset::class_counts() const noexcept {
  const auto attacks =
      static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), Label::Attack));
  return {labels_.size() - attacks, attacks};
}

Dataset Dataset::subset(std::span<const std::size_t> rows, std::string name) const {
  std::vector<Row> records;
  std::vector<Label> labels;
  records.reserve(rows.size());
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    records.push_back(records_.at(r));
    labels.push_back(labels_.at(r));
  }
  return Dataset(std::move(name), schema_, std::move(records), std::move(labels));
}

bool Dataset::operator==(const Dataset& other) const {
  return name_ == other.name_ && schema_ == other.schema_ && records_ == other.records_ &&
         labels_ == other.labels_;
}

std::optional<Label> map_label(std::string_view token) {
  token = trim(token);
  for (auto t : kNormalTokens) {
    if (token == t) return Label::Normal;
  }
  for (auto t : kAttackTokens) {
    if (token == t) return Label::Attack;
  }
  return std::nullopt;
}

Schema infer_schema(std::span<const std::string> header,
                    std::span<const std::vector<std::string>> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "no data rows to infer a schema from");
  Schema schema;
  schema.reserve(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    bool numeric = true;
    for (const auto& row : rows) {
      if (c >= row.size() || row[c].empty()) continue;
      if (!parse_number(row[c])) {
        numeric = false;
        break;
      }
    }
    schema.push_back({header[c], c, numeric ? AttributeKind::Numeric : AttributeKind::Categorical});
  }
  return schema;
}

Dataset parse_csv(std::string_view text, std::string_view label_column, std::string name,
                  const Schema* expected) {
  std::vector<csv::Record> records;
  try {
    records = csv::parse(text);
  } catch (const std::runtime_error& e) {
    throw Error(ErrorCode::MalformedCsv, name + ": " + e.what());
  }
  if (records.empty()) throw Error(ErrorCode::MalformedCsv, name + ": missing header row");

  const std::vector<std::string> header = std::move(records.front().fields);
  const std::size_t width = header.size();
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw Error(ErrorCode::UnknownLabelColumn,
                name + ": label column '" + std::string(label_column) + "' not in header");
  }
  const auto label_pos = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::vector<std::string>> cells;
  std::vector<Label> labels;
  cells.reserve(records.size() - 1);
  labels.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& fields = records[r].fields;
    if (fields.size() != width) {
      throw RowError(ErrorCode::MalformedCsv, r, {},
                     name + ": row " + std::to_string(r) + " has " + std::to_string(fields.size()) +
                         " fields, header has " + std::to_string(width));
    }
    auto label = map_label(fields[label_pos]);
    if (!label) {
      throw RowError(ErrorCode::UnmappableLabel, r, fields[label_pos],
                     name + ": unmappable label '" + fields[label_pos] + "' at row " + std::to_string(r));
    }
    labels.push_back(*label);
    fields.erase(fields.begin() + static_cast<std::ptrdiff_t>(label_pos));
    cells.push_back(std::move(fields));
  }
  if (cells.empty()) throw Error(ErrorCode::EmptyDataset, name + ": no data rows");

  std::vector<std::string> attr_names = header;
  attr_names.erase(attr_names.begin() + static_cast<std::ptrdiff_t>(label_pos));

  Schema schema;
  std::vector<std::size_t> source_col;  // schema position -> column in `cells`
  if (expected) {
    schema = *expected;
    for (const auto& a : schema) {
      auto it = std::find(attr_names.begin(), attr_names.end(), a.name);
      if (it == attr_names.end()) {
        throw Error(ErrorCode::SchemaMismatch, name + ": missing attribute '" + a.name + "'");
      }
      source_col.push_back(static_cast<std::size_t>(it - attr_names.begin()));
    }
    if (attr_names.size() != schema.size()) {
      throw Error(ErrorCode::SchemaMismatch, name + ": attribute set differs from expected schema");
    }
  } else {
    schema = infer_schema(attr_names, cells);
    for (std::size_t c = 0; c < schema.size(); ++c) source_col.push_back(c);
  }

  std::vector<Row> rows;
  rows.reserve(cells.size());
  for (std::size_t r = 0; r < cells.size(); ++r) {
    Row row;
    row.reserve(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      row.push_back(to_value(cells[r][source_col[c]], schema[c].kind, r + 1, name));
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(name), std::move(schema), std::move(rows), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path, std::string_view label_column,
                 const Schema* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text, label_column, path.filename().string(), expected);
}

std::string to_csv(const Dataset& dataset, std::string_view label_column) {
  std::string out;
  std::vector<std::string> fields;
  for (const auto& a : dataset.schema()) fields.push_back(a.name);
  fields.emplace_back(label_column);
  out += csv::join(fields);
  out.push_back('\n');
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    fields.clear();
    for (const auto& v : dataset.records()[r]) fields.push_back(v.to_text());
    fields.push_back(std::to_string(to_int(dataset.labels()[r])));
    out += csv::join(fields);
    out.push_back('\n');
  }
  return out;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path, std::string_view label_column) {
  write_text(path, to_csv(dataset, label_column));
}

TrainTest split(const Dataset& dataset, const SplitSpec& spec) {
  const auto* ratio = std::get_if<RatioSplit>(&spec.mode);
  if (!ratio) throw Error(ErrorCode::InvalidConfig, "file split must be resolved by loading both files");
  if (!(ratio->fraction > 0.0 && ratio->fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "split fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = dataset.size();
  if (n < 2) throw Error(ErrorCode::TooFewRecords, "need at least 2 records to split");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.shuffle(std::span<std::size_t>(order));

  // The small slack keeps e.g. 100 * 0.07 = 7.000000000000001 from rounding up to 8.
  auto n_train = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * ratio->fraction - 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  std::vector<std::size_t> train_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test_rows(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {dataset.subset(train_rows, dataset.name() + ":train"),
          dataset.subset(test_rows, dataset.name() + ":test")};
}

SyntheticDataset synth_dataset(std::size_t n_records, std::size_t n_noise_features,
                               std::size_t n_signal_features, std::uint64_t seed) {
  if (n_signal_features == 0) throw Error(ErrorCode::InvalidSpec, "at least one signal feature required");
  if (n_records < 4) throw Error(ErrorCode::InvalidSpec, "at least 4 records required");

  const std::size_t m = n_noise_features + n_signal_features;
  Rng rng(seed);

  std::vector<std::size_t> positions(m);
  for (std::size_t i = 0; i < m; ++i) positions[i] = i;
  rng.shuffle(std::span<std::size_t>(positions));
  std::vector<bool> is_signal(m, false);
  for (std::size_t i = 0; i < n_signal_features; ++i) is_signal[positions[i]] = true;

  const std::size_t digits = std::to_string(m - 1).size();
  auto feature_name = [&](std::size_t i) {
    std::string s = std::to_string(i);
    return "f" + std::string(digits - s.size(), '0') + s;
  };

  // Per-column generator description.
  enum class Gen { SignalNumeric, SignalCategorical, NoiseCategorical, NoiseInteger, NoiseReal };
  struct Column {
    Gen gen;
    double centre[2] = {0.0, 0.0};
  };
  // Within-class values c-1, c, c+1 with probabilities 0.1/0.8/0.1 have
  // standard deviation sqrt(0.2); class centres sit three of those apart.
  const double class_offset = 3.0 * std::sqrt(0.2);

  Schema schema;
  std::vector<Column> columns;
  std::vector<std::string> signal_names;
  std::size_t signal_seen = 0;
  std::size_t noise_seen = 0;
  for (std::size_t i = 0; i < m; ++i) {
    Column col{};
    AttributeKind kind;
    if (is_signal[i]) {
      if (signal_seen % 2 == 0) {
        col.gen = Gen::SignalNumeric;
        col.centre[0] = 10.0 * static_cast<double>(signal_seen + 1);
        col.centre[1] = col.centre[0] + class_offset;
        kind = AttributeKind::Numeric;
      } else {
        col.gen = Gen::SignalCategorical;
        kind = AttributeKind::Categorical;
      }
      ++signal_seen;
      signal_names.push_back(feature_name(i));
    } else {
      switch (noise_seen % 3) {
        case 0: col.gen = Gen::NoiseCategorical; kind = AttributeKind::Categorical; break;
        case 1: col.gen = Gen::NoiseInteger; kind = AttributeKind::Numeric; break;
        default: col.gen = Gen::NoiseReal; kind = AttributeKind::Numeric; break;
      }
      ++noise_seen;
    }
    schema.push_back({feature_name(i), i, kind});
    columns.push_back(col);
  }

  static const std::array<std::string, 4> kNoiseTokens = {"p", "q", "r", "s"};
  const std::size_t n_normal = n_records / 2;

  std::vector<Row> records;
  std::vector<Label> labels;
  records.reserve(n_records);
  labels.reserve(n_records);
  for (std::size_t r = 0; r < n_records; ++r) {
    const Label label = r < n_normal ? Label::Normal : Label::Attack;
    const int cls = to_int(label);
    Row row;
    row.reserve(m);
    for (const auto& col : columns) {
      switch (col.gen) {
        case Gen::SignalNumeric: {
          const auto u = rng.below(10);
          const double jitter = u == 0 ? -1.0 : (u == 9 ? 1.0 : 0.0);
          row.push_back(Value::numeric(col.centre[cls] + jitter));
          break;
        }
        case Gen::SignalCategorical: {
          // 80/20 token skew, reversed between the classes.
          const bool first_token = rng.below(10) < 8;
          row.push_back(Value::categorical((first_token == (cls == 0)) ? "a" : "b"));
          break;
        }
        case Gen::NoiseCategorical:
          row.push_back(Value::categorical(kNoiseTokens[rng.below(kNoiseTokens.size())]));
          break;
        case Gen::NoiseInteger:
          row.push_back(Value::numeric(static_cast<double>(rng.below(10))));
          break;
        case Gen::NoiseReal:
          row.push_back(Value::numeric(static_cast<double>(rng.below(100000)) / 100.0));
          break;
      }
    }
    records.push_back(std::move(row));
    labels.push_back(label);
  }
  return {Dataset("synthetic-" + std::to_string(seed), std::move(schema), std::move(records),
                  std::move(labels)),
          std::move(signal_names), seed};
}

std::string synth_manifest_json(const SyntheticDataset& synth) {
  nlohmann::ordered_json j;
  j["signal_features"] = synth.signal_features;
  j["seed"] = synth.seed;
  return j.dump(2) + "\n";
}

}  // namespace nidsfs
