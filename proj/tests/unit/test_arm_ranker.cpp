#include <random>

#include "doctest.h"
#include "nidsfs/arm_ranker.hpp"
#include "nidsfs/error.hpp"
#include "oracles.hpp"

using namespace nidsfs;

namespace {

Item it(const char* attr, double v) { return {attr, Value::numeric(v)}; }
Item it(const char* attr, const char* tok) { return {attr, Value::categorical(tok)}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an nidsfs::Error");
  return ErrorCode::InvalidConfig;
}

std::vector<Transaction> random_transactions(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 25;
  const std::size_t attrs = 1 + rng() % 6;
  std::vector<Transaction> out;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Item> items;
    for (std::size_t a = 0; a < attrs; ++a) {
      if (rng() % 5 == 0) continue;
      const std::string name(1, static_cast<char>('a' + a));
      const auto v = rng() % (1 + rng() % 4);
      items.push_back(a % 2 ? Item{name, Value::categorical("v" + std::to_string(v))}
                            : Item{name, Value::numeric(static_cast<double>(v))});
    }
    out.emplace_back(std::move(items), rng() % 2 ? Label::Attack : Label::Normal);
  }
  return out;
}

void check_same_rules(const std::vector<Rule>& got, const std::vector<Rule>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].antecedent == want[i].antecedent);
    CHECK(got[i].consequent == want[i].consequent);
    CHECK(got[i].support == doctest::Approx(want[i].support).epsilon(1e-12));
    CHECK(got[i].confidence == doctest::Approx(want[i].confidence).epsilon(1e-12));
    CHECK(got[i].label == want[i].label);
  }
}

}  // namespace

TEST_CASE("transactions from a table") {
  CentralPointsTable table({"a", "b"}, 2,
                           {{0, 0, Value::numeric(1), 3},
                            {0, 1, Value::numeric(2), 3},
                            {1, 0, Value::categorical("tcp"), 2},
                            {1, 1, Value::categorical("udp"), 2}});
  auto txs = build_transactions(table, std::vector<Label>{Label::Normal, Label::Attack});
  REQUIRE(txs.size() == 2);
  CHECK(txs[0] == Transaction({it("a", 1), it("b", "tcp")}, Label::Normal));
  CHECK(txs[1] == Transaction({it("a", 2), it("b", "udp")}, Label::Attack));
  CHECK(code_of([&] { build_transactions(table, std::vector<Label>{Label::Normal}); }) ==
        ErrorCode::LengthMismatch);

  CentralPointsTable gap({"a", "c"}, 2, {{0, 0, Value::numeric(1), 1}, {0, 1, Value::numeric(1), 1},
                                         {1, 0, Value::numeric(4), 1}});
  auto g = build_transactions(gap, std::vector<Label>{Label::Attack, Label::Attack});
  CHECK(g[1].items().size() == 1);
}

TEST_CASE("transaction invariants") {
  CHECK_THROWS_AS(Transaction({it("a", 1), it("a", 2)}, Label::Attack), Error);
  CHECK_THROWS_AS(Transaction({Item{"a", Value::missing()}}, Label::Attack), Error);
}

TEST_CASE("partition labels") {
  const std::vector<Label> labels = {Label::Normal, Label::Attack, Label::Normal, Label::Normal, Label::Attack};
  auto plan = make_plan(5, 2);
  CHECK(partition_labels(labels, plan) == std::vector<Label>{Label::Attack, Label::Normal});
}

TEST_CASE("transactions match recomputed slices") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto d = synth_dataset(60, 3, 2, seed).dataset;
    const std::size_t p = 10;
    auto table = central_points(d, p);
    auto txs = build_transactions(table, partition_labels(d.labels(), make_plan(d.size(), p)));
    CHECK(txs == oracle::transactions(d, p));
  }
}

TEST_CASE("support and confidence") {
  const std::vector<Transaction> four(4, Transaction({it("a", 1), it("b", 2)}, Label::Attack));
  CHECK(support(it("a", 1), it("b", 2), four) == 1.0);

  std::vector<Transaction> txs = {Transaction({it("a", 1)}, Label::Attack),
                                  Transaction({it("a", 1), it("b", 2)}, Label::Attack),
                                  Transaction({it("b", 2)}, Label::Normal),
                                  Transaction({it("c", 3)}, Label::Normal)};
  // Brute-force set intersection over transaction indices.
  std::set<std::size_t> with_a, with_b;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    if (txs[i].contains(it("a", 1))) with_a.insert(i);
    if (txs[i].contains(it("b", 2))) with_b.insert(i);
  }
  std::vector<std::size_t> both;
  std::set_intersection(with_a.begin(), with_a.end(), with_b.begin(), with_b.end(), std::back_inserter(both));
  CHECK(support(it("a", 1), it("b", 2), txs) == static_cast<double>(both.size()) / 4.0);
  CHECK(support(it("a", 1), it("b", 2), txs) == 0.25);
  CHECK(support(it("a", 1), it("c", 3), txs) == 0.0);

  CHECK(confidence(it("a", 1), it("b", 2), txs) == 0.5);
  std::vector<Transaction> perfect = {Transaction({it("a", 1), it("b", 2)}, Label::Attack),
                                      Transaction({it("a", 1), it("b", 2)}, Label::Attack),
                                      Transaction({it("c", 1)}, Label::Attack)};
  CHECK(confidence(it("a", 1), it("b", 2), perfect) == 1.0);
  CHECK(code_of([&] { confidence(it("z", 1), it("b", 2), txs); }) == ErrorCode::AntecedentAbsent);
  CHECK(code_of([&] { support(it("a", 1), it("b", 2), std::vector<Transaction>{}); }) ==
        ErrorCode::EmptyTransactions);
}

TEST_CASE("fully correlated pair") {
  const std::vector<Transaction> txs(2, Transaction({it("a", 1), it("b", 2)}, Label::Normal));
  auto rules = generate_rules(txs, 0.5, 0.5);
  REQUIRE(rules.size() == 2);
  CHECK(rules[0].antecedent == it("a", 1));
  CHECK(rules[1].antecedent == it("b", 2));
  for (const auto& r : rules) {
    CHECK(r.support == 1.0);
    CHECK(r.confidence == 1.0);
    CHECK(r.importance == 1.0);
    CHECK(r.label == Label::Normal);
  }
  CHECK(generate_rules(txs, 1.01, 0.5).empty());
  CHECK(code_of([] { generate_rules(std::vector<Transaction>{}, 0.4, 0.4); }) == ErrorCode::EmptyTransactions);

  auto sweep = run_threshold_sweep(txs, 4);
  REQUIRE(sweep.entries.size() == 3);
  for (const auto& e : sweep.entries) {
    CHECK(e.per_class[0].names() == std::vector<std::string>{"a", "b"});
    CHECK(e.per_class[1].features.empty());
  }
}

TEST_CASE("rule label ties go to attack") {
  std::vector<Transaction> txs = {Transaction({it("a", 1), it("b", 1)}, Label::Normal),
                                  Transaction({it("a", 1), it("b", 1)}, Label::Attack)};
  for (const auto& r : generate_rules(txs, 0.0, 0.0)) CHECK(r.label == Label::Attack);
}

TEST_CASE("rules match exhaustive enumeration") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto txs = random_transactions(rng);
    for (double th : {0.0, 0.2, 0.4}) check_same_rules(generate_rules(txs, th, th), oracle::rules(txs, th, th));
  }
}

TEST_CASE("rule properties") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto txs = random_transactions(rng);
    auto all = generate_rules(txs, 0.0, 0.0);
    for (const auto& r : all) {
      CHECK(r.antecedent.attribute != r.consequent.attribute);
      CHECK(r.support <= r.confidence);
      CHECK(r.importance == (r.support + r.confidence) / 2.0);
      CHECK(r.support == support(r.consequent, r.antecedent, txs));
    }
    auto strict = generate_rules(txs, 0.3, 0.5);
    for (const auto& r : strict) CHECK(std::find(all.begin(), all.end(), r) != all.end());

    auto reversed = txs;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(generate_rules(reversed, 0.0, 0.0) == all);
    CHECK(std::is_sorted(all.begin(), all.end(), rule_order));
  }
}

TEST_CASE("feature selection") {
  Rule ab{it("a", 1), it("b", 1), 0.9, 0.9, 0.9, Label::Attack};
  Rule cd{it("c", 1), it("d", 1), 0.5, 0.5, 0.5, Label::Attack};
  auto ranking = select_features(std::vector<Rule>{ab, cd}, 2, Label::Attack);
  CHECK(ranking.names() == std::vector<std::string>{"a", "b"});
  CHECK(ranking.features[0].importance == 0.9);
  CHECK(ranking.features[0].rule == ab);

  CHECK(select_features(std::vector<Rule>{}, 3, Label::Attack).features.empty());
  CHECK(select_features(std::vector<Rule>{ab, cd}, 4, Label::Normal).features.empty());
  CHECK(select_features(std::vector<Rule>{ab, cd}, 4, Label::Attack).names() ==
        std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("threshold sweep drops a half-supported pair") {
  std::vector<Transaction> txs = {Transaction({it("a", 1), it("b", 1)}, Label::Attack),
                                  Transaction({it("a", 1), it("b", 1)}, Label::Attack),
                                  Transaction({it("a", 2), it("b", 2)}, Label::Attack),
                                  Transaction({it("a", 3), it("b", 3)}, Label::Attack)};
  CHECK(support(it("a", 1), it("b", 1), txs) == 0.5);
  auto sweep = run_threshold_sweep(txs, 4);
  REQUIRE(sweep.entries.size() == 3);
  auto has_pair = [](const std::vector<Rule>& rs) {
    for (const auto& r : rs) {
      if (r.antecedent == Item{"a", Value::numeric(1)} && r.consequent == Item{"b", Value::numeric(1)}) return true;
    }
    return false;
  };
  CHECK(has_pair(generate_rules(txs, 0.4, 0.4)));
  CHECK_FALSE(has_pair(generate_rules(txs, 0.6, 0.6)));
  CHECK(sweep.entries[0].rule_count == 2);
  CHECK(sweep.entries[1].rule_count == 0);
  CHECK(sweep.entries[2].rule_count == 0);
  CHECK(sweep.merged.names() == std::vector<std::string>{"a", "b"});

  CHECK(code_of([&] { run_threshold_sweep(txs, 4, std::vector<double>{0.6, 0.4}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { run_threshold_sweep(txs, 4, std::vector<double>{}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { run_threshold_sweep(txs, 4, std::vector<double>{0.0}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { run_threshold_sweep(txs, 4, std::vector<double>{1.5}); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("merged ranking takes both classes") {
  std::vector<Transaction> txs = {Transaction({it("a", 1), it("b", 1), it("c", 5)}, Label::Attack),
                                  Transaction({it("a", 1), it("b", 1), it("c", 6)}, Label::Attack),
                                  Transaction({it("c", 7), it("d", 1), it("e", 1)}, Label::Normal),
                                  Transaction({it("c", 8), it("d", 1), it("e", 1)}, Label::Normal)};
  auto sweep = run_threshold_sweep(txs, 3);
  CHECK(sweep.entries[0].per_class[1].names() == std::vector<std::string>{"a", "b"});
  CHECK(sweep.entries[0].per_class[0].names() == std::vector<std::string>{"d", "e"});
  CHECK(sweep.merged.names() == std::vector<std::string>{"a", "b", "d"});
}

TEST_CASE("rules dump") {
  std::vector<Rule> rules = {{it("a", 1), it("b", "x,y"), 0.5, 1.0, 0.75, Label::Normal}};
  CHECK(rules_csv(rules) ==
        "antecedent_attr,antecedent_value,consequent_attr,consequent_value,support,confidence,importance,label\n"
        "a,1,b,\"x,y\",0.5,1,0.75,0\n");
}
