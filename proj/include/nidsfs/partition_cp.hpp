#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nidsfs/dataset.hpp"
#include "nidsfs/value.hpp"

namespace nidsfs {

/// Half-open row range [begin, end).
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool operator==(const RowRange&) const = default;
};

struct PartitionPlan {
  std::size_t p = 1;
  std::vector<RowRange> ranges;
};

/// Number of partitions for a dataset: records / attributes, at least 1.
std::size_t partition_count(std::size_t n_records, std::size_t n_attributes) noexcept;

/// Splits 0..n into p contiguous ranges of floor(n/p) rows; the last range
/// also takes the remainder. Throws TooManyPartitions when p > n.
PartitionPlan make_plan(std::size_t n_records, std::size_t p);

struct Mode {
  Value value;
  std::size_t count = 0;
};

/// Most frequent non-missing value. Among equally frequent values the one
/// whose first occurrence comes last wins, so {tcp, udp, tcp, udp} -> udp.
/// Returns nullopt when every value is missing.
std::optional<Mode> mode_of(std::span<const Value> values);

struct CentralPoint {
  std::size_t attribute = 0;  // schema index
  std::size_t partition = 0;
  Value value;
  std::size_t frequency = 0;

  bool operator==(const CentralPoint&) const = default;
};

/// Modes of every attribute within every partition, ordered by
/// (attribute, partition). A pair is absent only when that slice is
/// entirely missing.
class CentralPointsTable {
 public:
  CentralPointsTable(std::vector<std::string> attributes, std::size_t p,
                     std::vector<CentralPoint> entries);

  const std::vector<std::string>& attributes() const noexcept { return attributes_; }
  std::size_t p() const noexcept { return p_; }
  const std::vector<CentralPoint>& entries() const noexcept { return entries_; }

  const CentralPoint* find(std::size_t attribute, std::size_t partition) const noexcept;

  bool operator==(const CentralPointsTable&) const = default;

 private:
  std::vector<std::string> attributes_;
  std::size_t p_;
  std::vector<CentralPoint> entries_;
};

/// Computes the table for `p` partitions. `threads` > 1 evaluates
/// partitions concurrently; the result is identical to the sequential one.
CentralPointsTable central_points(const Dataset& dataset, std::size_t p, std::size_t threads = 1);

/// CSV with columns attribute,partition,value,frequency.
std::string central_points_csv(const CentralPointsTable& table);
void write_central_points(const CentralPointsTable& table, const std::filesystem::path& path);

}  // namespace nidsfs
