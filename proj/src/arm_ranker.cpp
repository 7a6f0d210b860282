#include "nidsfs/arm_ranker.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "nidsfs/csv.hpp"
#include "nidsfs/error.hpp"

namespace nidsfs {

std::size_t ItemHash::operator()(const Item& item) const noexcept {
  const std::size_t h = std::hash<std::string>{}(item.attribute);
  return h ^ (item.value.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Transaction::Transaction(std::vector<Item> items, Label label) : items_(std::move(items)), label_(label) {
  std::unordered_set<std::string_view> seen;
  for (const auto& item : items_) {
    if (item.value.is_missing()) throw Error(ErrorCode::InvalidSpec, "transaction item may not be missing");
    if (!seen.insert(item.attribute).second) {
      throw Error(ErrorCode::InvalidSpec, "transaction holds two items for attribute '" + item.attribute + "'");
    }
  }
}

bool Transaction::contains(const Item& item) const noexcept {
  return std::find(items_.begin(), items_.end(), item) != items_.end();
}

bool rule_order(const Rule& a, const Rule& b) noexcept {
  if (a.importance != b.importance) return a.importance > b.importance;
  if (a.support != b.support) return a.support > b.support;
  if (a.antecedent.attribute != b.antecedent.attribute) return a.antecedent.attribute < b.antecedent.attribute;
  if (a.consequent.attribute != b.consequent.attribute) return a.consequent.attribute < b.consequent.attribute;
  if (a.antecedent.value != b.antecedent.value) return a.antecedent.value < b.antecedent.value;
  return a.consequent.value < b.consequent.value;
}

std::vector<Label> partition_labels(std::span<const Label> labels, const PartitionPlan& plan) {
  std::vector<Label> out;
  out.reserve(plan.ranges.size());
  for (const auto& range : plan.ranges) {
    if (range.end > labels.size()) throw Error(ErrorCode::LengthMismatch, "partition plan exceeds label count");
    std::size_t attacks = 0;
    for (std::size_t r = range.begin; r < range.end; ++r) attacks += labels[r] == Label::Attack;
    out.push_back(2 * attacks >= range.size() ? Label::Attack : Label::Normal);
  }
  return out;
}

std::vector<Transaction> build_transactions(const CentralPointsTable& table,
                                            std::span<const Label> labels_per_partition) {
  if (labels_per_partition.size() != table.p()) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(table.p()) + " partition labels, got " +
                                               std::to_string(labels_per_partition.size()));
  }
  std::vector<std::vector<Item>> items(table.p());
  // Entries are ordered by attribute, so each transaction lists items in schema order.
  for (const auto& e : table.entries()) {
    items[e.partition].push_back({table.attributes()[e.attribute], e.value});
  }
  std::vector<Transaction> out;
  out.reserve(table.p());
  for (std::size_t part = 0; part < table.p(); ++part) {
    out.emplace_back(std::move(items[part]), labels_per_partition[part]);
  }
  return out;
}

double support(const Item& f1, const Item& f2, std::span<const Transaction> transactions) {
  if (transactions.empty()) throw Error(ErrorCode::EmptyTransactions, "support over zero transactions");
  std::size_t both = 0;
  for (const auto& t : transactions) both += t.contains(f1) && t.contains(f2);
  return static_cast<double>(both) / static_cast<double>(transactions.size());
}

double confidence(const Item& f1, const Item& f2, std::span<const Transaction> transactions) {
  std::size_t antecedent = 0;
  std::size_t both = 0;
  for (const auto& t : transactions) {
    if (!t.contains(f1)) continue;
    ++antecedent;
    both += t.contains(f2);
  }
  if (antecedent == 0) throw Error(ErrorCode::AntecedentAbsent, "antecedent occurs in no transaction");
  return static_cast<double>(both) / static_cast<double>(antecedent);
}

std::vector<Rule> generate_rules(std::span<const Transaction> transactions, double minsup, double minconf) {
  if (transactions.empty()) throw Error(ErrorCode::EmptyTransactions, "rule mining over zero transactions");

  // Intern items so pair counting works on integer ids.
  std::unordered_map<Item, std::uint32_t, ItemHash> ids;
  std::vector<const Item*> items;
  std::vector<std::size_t> item_count;
  std::vector<std::vector<std::uint32_t>> tx_ids(transactions.size());
  for (std::size_t t = 0; t < transactions.size(); ++t) {
    for (const auto& item : transactions[t].items()) {
      auto [it, inserted] = ids.try_emplace(item, static_cast<std::uint32_t>(items.size()));
      if (inserted) {
        items.push_back(&it->first);
        item_count.push_back(0);
      }
      ++item_count[it->second];
      tx_ids[t].push_back(it->second);
    }
    std::sort(tx_ids[t].begin(), tx_ids[t].end());
  }

  struct PairCount {
    std::size_t both = 0;
    std::size_t attacks = 0;
  };
  std::unordered_map<std::uint64_t, PairCount> pairs;
  for (std::size_t t = 0; t < transactions.size(); ++t) {
    const auto& tid = tx_ids[t];
    const bool attack = transactions[t].label() == Label::Attack;
    for (std::size_t i = 0; i < tid.size(); ++i) {
      for (std::size_t j = i + 1; j < tid.size(); ++j) {
        auto& pc = pairs[(static_cast<std::uint64_t>(tid[i]) << 32) | tid[j]];
        ++pc.both;
        pc.attacks += attack;
      }
    }
  }

  const double n = static_cast<double>(transactions.size());
  std::vector<Rule> rules;
  auto emit = [&](std::uint32_t ante, std::uint32_t cons, const PairCount& pc) {
    const double sup = static_cast<double>(pc.both) / n;
    const double conf = static_cast<double>(pc.both) / static_cast<double>(item_count[ante]);
    if (sup < minsup || conf < minconf) return;
    const Label label = 2 * pc.attacks >= pc.both ? Label::Attack : Label::Normal;
    rules.push_back({*items[ante], *items[cons], sup, conf, (sup + conf) / 2.0, label});
  };
  for (const auto& [key, pc] : pairs) {
    const auto a = static_cast<std::uint32_t>(key >> 32);
    const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
    emit(a, b, pc);
    emit(b, a, pc);
  }
  std::sort(rules.begin(), rules.end(), rule_order);
  return rules;
}

std::vector<std::string> FeatureRanking::names() const {
  std::vector<std::string> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(f.attribute);
  return out;
}

namespace {

bool ranked_order(const RankedFeature& a, const RankedFeature& b) {
  if (a.importance != b.importance) return a.importance > b.importance;
  return a.attribute < b.attribute;
}

}  // namespace

FeatureRanking select_features(std::span<const Rule> rules, std::size_t max_features, Label label,
                               double minsup, double minconf) {
  // Rules may arrive in any order; keep, per attribute, the first rule in
  // rule_order among those with the highest importance.
  std::map<std::string, RankedFeature> best;
  auto consider = [&](const std::string& attr, const Rule& rule) {
    auto it = best.find(attr);
    if (it == best.end()) {
      best.emplace(attr, RankedFeature{attr, rule.importance, rule});
    } else if (rule_order(rule, it->second.rule)) {
      it->second.importance = rule.importance;
      it->second.rule = rule;
    }
  };
  for (const auto& rule : rules) {
    if (rule.label != label) continue;
    consider(rule.antecedent.attribute, rule);
    consider(rule.consequent.attribute, rule);
  }
  FeatureRanking ranking{{}, minsup, minconf, max_features};
  for (auto& [name, feature] : best) ranking.features.push_back(std::move(feature));
  std::sort(ranking.features.begin(), ranking.features.end(), ranked_order);
  if (ranking.features.size() > max_features) ranking.features.resize(max_features);
  return ranking;
}

ThresholdSweep run_threshold_sweep(std::span<const Transaction> transactions, std::size_t max_features,
                                   std::span<const double> thresholds) {
  if (transactions.empty()) throw Error(ErrorCode::EmptyTransactions, "threshold sweep over zero transactions");
  if (thresholds.empty()) throw Error(ErrorCode::InvalidConfig, "threshold sweep needs at least one value");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] <= 1.0) || (i > 0 && thresholds[i] <= thresholds[i - 1])) {
      throw Error(ErrorCode::InvalidConfig, "thresholds must be ascending values in (0, 1]");
    }
  }

  ThresholdSweep sweep;
  for (double threshold : thresholds) {
    const auto rules = generate_rules(transactions, threshold, threshold);
    SweepEntry entry{threshold, rules.size(), {}};
    for (Label label : {Label::Normal, Label::Attack}) {
      entry.per_class[to_int(label)] = select_features(rules, max_features, label, threshold, threshold);
    }
    sweep.entries.push_back(std::move(entry));
  }

  const SweepEntry& lowest = sweep.entries.front();
  std::map<std::string, RankedFeature> merged;
  for (const auto& ranking : lowest.per_class) {
    for (const auto& f : ranking.features) {
      auto it = merged.find(f.attribute);
      if (it == merged.end()) {
        merged.emplace(f.attribute, f);
      } else if (rule_order(f.rule, it->second.rule)) {
        it->second = f;
      }
    }
  }
  sweep.merged = FeatureRanking{{}, lowest.threshold, lowest.threshold, max_features};
  for (auto& [name, feature] : merged) sweep.merged.features.push_back(std::move(feature));
  std::sort(sweep.merged.features.begin(), sweep.merged.features.end(), ranked_order);
  if (sweep.merged.features.size() > max_features) sweep.merged.features.resize(max_features);
  return sweep;
}

std::string rules_csv(std::span<const Rule> rules) {
  std::string out =
      "antecedent_attr,antecedent_value,consequent_attr,consequent_value,support,confidence,importance,label\n";
  for (const auto& r : rules) {
    out += csv::join({r.antecedent.attribute, r.antecedent.value.to_text(), r.consequent.attribute,
                      r.consequent.value.to_text(), format_number(r.support), format_number(r.confidence),
                      format_number(r.importance), std::to_string(to_int(r.label))});
    out.push_back('\n');
  }
  return out;
}

void write_rules(std::span<const Rule> rules, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << rules_csv(rules);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace nidsfs
