#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nidsfs/value.hpp"

namespace nidsfs {

using Schema = std::vector<AttributeSchema>;
using Row = std::vector<Value>;

/// Labeled tabular data. The label column is held apart from the schema.
/// Immutable once constructed; the constructor enforces shape invariants.
class Dataset {
 public:
  Dataset(std::string name, Schema schema, std::vector<Row> records, std::vector<Label> labels);

  const std::string& name() const noexcept { return name_; }
  const Schema& schema() const noexcept { return schema_; }
  const std::vector<Row>& records() const noexcept { return records_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }

  std::size_t size() const noexcept { return records_.size(); }
  std::size_t num_attributes() const noexcept { return schema_.size(); }

  /// Index of the named attribute, if present.
  std::optional<std::size_t> find_attribute(std::string_view name) const noexcept;

  /// Count of records per label, indexed by to_int(Label).
  std::pair<std::size_t, std::size_t> class_counts() const noexcept;

  /// Rows at the given indices, in the given order.
  Dataset subset(std::span<const std::size_t> rows, std::string name) const;

  bool operator==(const Dataset& other) const;

 private:
  std::string name_;
  Schema schema_;
  std::vector<Row> records_;
  std::vector<Label> labels_;
};

/// Maps a raw label token onto the binary class, or nullopt when the token
/// is not recognized. Surrounding whitespace is ignored.
std::optional<Label> map_label(std::string_view token);

/// Infers the kind of each column: Numeric iff every non-empty cell parses
/// as a finite real number. Throws EmptyDataset when there are no rows.
Schema infer_schema(std::span<const std::string> header,
                    std::span<const std::vector<std::string>> rows);

/// Reads a labeled CSV file. When `expected` is given, the file's columns
/// are coerced to that schema (same attribute names, any order) instead of
/// being inferred, so that a test file is typed exactly like its training file.
Dataset load_csv(const std::filesystem::path& path, std::string_view label_column,
                 const Schema* expected = nullptr);

/// Parses CSV text held in memory; `name` is used for the Dataset and in errors.
Dataset parse_csv(std::string_view text, std::string_view label_column, std::string name,
                  const Schema* expected = nullptr);

/// Serializes with the same formatting rules load_csv reads back. The label
/// column is appended last as 0/1.
std::string to_csv(const Dataset& dataset, std::string_view label_column = "label");
void write_csv(const Dataset& dataset, const std::filesystem::path& path,
               std::string_view label_column = "label");

struct RatioSplit {
  double fraction = 0.8;
};

struct FileSplit {
  std::filesystem::path train;
  std::filesystem::path test;
};

struct SplitSpec {
  std::variant<RatioSplit, FileSplit> mode = RatioSplit{};
  std::uint64_t seed = 0;
};

struct TrainTest {
  Dataset train;
  Dataset test;
};

/// Ratio mode: a seeded shuffle decides membership, the first
/// ceil(n * fraction) shuffled rows go to train (clamped so both sides are
/// non-empty). Each side keeps the input's relative row order. FileSplit
/// mode is resolved by the caller and rejected here.
TrainTest split(const Dataset& dataset, const SplitSpec& spec);

struct SyntheticDataset {
  Dataset dataset;
  std::vector<std::string> signal_features;
  std::uint64_t seed = 0;
};

/// Planted-signal generator. Rows are grouped by class (all normal, then
/// all attack); labels are balanced. Attributes are named f00, f01, ...;
/// which positions carry signal is drawn from the seed and reported in
/// `signal_features`.
SyntheticDataset synth_dataset(std::size_t n_records, std::size_t n_noise_features,
                               std::size_t n_signal_features, std::uint64_t seed);

/// JSON manifest written beside a materialized synthetic CSV.
std::string synth_manifest_json(const SyntheticDataset& synth);

}  // namespace nidsfs
