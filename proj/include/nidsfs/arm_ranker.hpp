#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nidsfs/partition_cp.hpp"
#include "nidsfs/value.hpp"

namespace nidsfs {

/// attribute=value pair; the unit of association rules.
struct Item {
  std::string attribute;
  Value value;

  bool operator==(const Item&) const = default;
  auto operator<=>(const Item&) const = default;
};

struct ItemHash {
  std::size_t operator()(const Item& item) const noexcept;
};

/// One partition rendered as a set of items, at most one per attribute.
class Transaction {
 public:
  Transaction(std::vector<Item> items, Label label);

  const std::vector<Item>& items() const noexcept { return items_; }
  Label label() const noexcept { return label_; }
  bool contains(const Item& item) const noexcept;

  bool operator==(const Transaction&) const = default;

 private:
  std::vector<Item> items_;
  Label label_;
};

/// Pairwise association rule antecedent => consequent.
struct Rule {
  Item antecedent;
  Item consequent;
  double support = 0.0;
  double confidence = 0.0;
  double importance = 0.0;  // (support + confidence) / 2
  Label label = Label::Attack;

  bool operator==(const Rule&) const = default;
};

/// Ordering used for rule lists: importance desc, support desc, antecedent
/// attribute asc, consequent attribute asc, then antecedent and consequent
/// value asc so the order is total.
bool rule_order(const Rule& a, const Rule& b) noexcept;

/// Majority label of each partition's rows; an even split goes to Attack.
std::vector<Label> partition_labels(std::span<const Label> labels, const PartitionPlan& plan);

/// One transaction per partition holding that partition's central points.
/// Throws LengthMismatch unless labels_per_partition has table.p() entries.
std::vector<Transaction> build_transactions(const CentralPointsTable& table,
                                            std::span<const Label> labels_per_partition);

/// Fraction of transactions containing both items. Throws EmptyTransactions.
double support(const Item& f1, const Item& f2, std::span<const Transaction> transactions);

/// Fraction of transactions containing f1 that also contain f2. Throws
/// AntecedentAbsent when f1 occurs nowhere.
double confidence(const Item& f1, const Item& f2, std::span<const Transaction> transactions);

/// Every ordered pair of co-occurring items from distinct attributes with
/// support >= minsup and confidence >= minconf, sorted by rule_order. A
/// rule's label is the majority label of the transactions holding both
/// items (an even split goes to Attack).
std::vector<Rule> generate_rules(std::span<const Transaction> transactions, double minsup, double minconf);

struct RankedFeature {
  std::string attribute;
  double importance = 0.0;
  Rule rule;  // first rule (in rule order) reaching that importance

  bool operator==(const RankedFeature&) const = default;
};

struct FeatureRanking {
  std::vector<RankedFeature> features;
  double minsup = 0.0;
  double minconf = 0.0;
  std::size_t max_features = 0;

  std::vector<std::string> names() const;
  bool operator==(const FeatureRanking&) const = default;
};

/// Scores each attribute by the highest importance of any rule with
/// `label` that mentions it, and keeps the best `max_features`, ties by name.
FeatureRanking select_features(std::span<const Rule> rules, std::size_t max_features, Label label,
                               double minsup = 0.0, double minconf = 0.0);

struct SweepEntry {
  double threshold = 0.0;  // used for both minsup and minconf
  std::size_t rule_count = 0;
  std::array<FeatureRanking, 2> per_class;  // indexed by to_int(Label)
};

struct ThresholdSweep {
  std::vector<SweepEntry> entries;
  /// Union of both classes' rankings at the lowest threshold, best
  /// importance per attribute, truncated to max_features.
  FeatureRanking merged;
};

inline constexpr std::array<double, 3> kDefaultThresholds = {0.4, 0.6, 0.8};

/// Throws EmptyTransactions, or InvalidConfig for an empty/unsorted/out-of-range threshold list.
ThresholdSweep run_threshold_sweep(std::span<const Transaction> transactions, std::size_t max_features,
                                   std::span<const double> thresholds = kDefaultThresholds);

/// CSV with columns antecedent_attr,antecedent_value,consequent_attr,
/// consequent_value,support,confidence,importance,label.
std::string rules_csv(std::span<const Rule> rules);
void write_rules(std::span<const Rule> rules, const std::filesystem::path& path);

}  // namespace nidsfs
