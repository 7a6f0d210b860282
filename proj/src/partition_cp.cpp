#include "nidsfs/partition_cp.hpp"

#include <algorithm>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "nidsfs/csv.hpp"
#include "nidsfs/error.hpp"

namespace nidsfs {

std::size_t partition_count(std::size_t n_records, std::size_t n_attributes) noexcept {
  if (n_attributes == 0) return 1;
  return std::max<std::size_t>(1, n_records / n_attributes);
}

PartitionPlan make_plan(std::size_t n_records, std::size_t p) {
  if (p == 0) throw Error(ErrorCode::InvalidConfig, "partition count must be positive");
  if (p > n_records) {
    throw Error(ErrorCode::TooManyPartitions, std::to_string(p) + " partitions requested for " +
                                                  std::to_string(n_records) + " records");
  }
  PartitionPlan plan{p, {}};
  plan.ranges.reserve(p);
  const std::size_t len = n_records / p;
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t begin = i * len;
    const std::size_t end = (i + 1 == p) ? n_records : begin + len;
    plan.ranges.push_back({begin, end});
  }
  return plan;
}

std::optional<Mode> mode_of(std::span<const Value> values) {
  struct Tally {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<Value, Tally, ValueHash> tallies;
  tallies.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_missing()) continue;
    auto [it, inserted] = tallies.try_emplace(values[i], Tally{0, i});
    ++it->second.count;
  }
  if (tallies.empty()) return std::nullopt;

  const Value* best = nullptr;
  Tally best_tally;
  for (const auto& [value, tally] : tallies) {
    if (!best || tally.count > best_tally.count ||
        (tally.count == best_tally.count && tally.first > best_tally.first)) {
      best = &value;
      best_tally = tally;
    }
  }
  return Mode{*best, best_tally.count};
}

CentralPointsTable::CentralPointsTable(std::vector<std::string> attributes, std::size_t p,
                                       std::vector<CentralPoint> entries)
    : attributes_(std::move(attributes)), p_(p), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.attribute >= attributes_.size() || e.partition >= p_ || e.value.is_missing() || e.frequency == 0) {
      throw Error(ErrorCode::InvalidSpec, "malformed central point entry");
    }
    if (i > 0) {
      const auto& prev = entries_[i - 1];
      if (std::pair(prev.attribute, prev.partition) >= std::pair(e.attribute, e.partition)) {
        throw Error(ErrorCode::InvalidSpec, "central point entries must be strictly ordered");
      }
    }
  }
}

const CentralPoint* CentralPointsTable::find(std::size_t attribute, std::size_t partition) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair(attribute, partition),
                             [](const CentralPoint& e, const std::pair<std::size_t, std::size_t>& key) {
                               return std::pair(e.attribute, e.partition) < key;
                             });
  if (it == entries_.end() || it->attribute != attribute || it->partition != partition) return nullptr;
  return &*it;
}

namespace {

// Modes for partitions [first, last) of every attribute; slot layout is
// [attribute][partition - first].
void modes_for_partitions(const Dataset& dataset, const PartitionPlan& plan, std::size_t first,
                          std::size_t last, std::vector<std::vector<std::optional<Mode>>>& out) {
  const auto& records = dataset.records();
  std::vector<Value> column;
  for (std::size_t part = first; part < last; ++part) {
    const RowRange range = plan.ranges[part];
    for (std::size_t a = 0; a < dataset.num_attributes(); ++a) {
      column.clear();
      for (std::size_t r = range.begin; r < range.end; ++r) column.push_back(records[r][a]);
      out[a][part] = mode_of(column);
    }
  }
}

}  // namespace

CentralPointsTable central_points(const Dataset& dataset, std::size_t p, std::size_t threads) {
  const PartitionPlan plan = make_plan(dataset.size(), p);
  const std::size_t m = dataset.num_attributes();

  std::vector<std::vector<std::optional<Mode>>> modes(m, std::vector<std::optional<Mode>>(p));
  threads = std::clamp<std::size_t>(threads, 1, p);
  if (threads == 1) {
    modes_for_partitions(dataset, plan, 0, p, modes);
  } else {
    // Workers write disjoint partition slots, so no synchronization is needed.
    std::vector<std::jthread> workers;
    const std::size_t chunk = (p + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t first = t * chunk;
      const std::size_t last = std::min(p, first + chunk);
      if (first >= last) break;
      workers.emplace_back([&, first, last] { modes_for_partitions(dataset, plan, first, last, modes); });
    }
  }

  std::vector<CentralPoint> entries;
  entries.reserve(m * p);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t part = 0; part < p; ++part) {
      if (auto& mode = modes[a][part]) {
        entries.push_back({a, part, std::move(mode->value), mode->count});
      }
    }
  }
  std::vector<std::string> names;
  names.reserve(m);
  for (const auto& attr : dataset.schema()) names.push_back(attr.name);
  return CentralPointsTable(std::move(names), p, std::move(entries));
}

std::string central_points_csv(const CentralPointsTable& table) {
  std::string out = "attribute,partition,value,frequency\n";
  for (const auto& e : table.entries()) {
    out += csv::join({table.attributes()[e.attribute], std::to_string(e.partition), e.value.to_text(),
                      std::to_string(e.frequency)});
    out.push_back('\n');
  }
  return out;
}

void write_central_points(const CentralPointsTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << central_points_csv(table);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace nidsfs
