#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "doctest.h"
#include "nidsfs/error.hpp"
#include "nidsfs/partition_cp.hpp"
#include "oracles.hpp"

using namespace nidsfs;

namespace {

std::vector<Value> nums(std::initializer_list<double> xs) {
  std::vector<Value> out;
  for (double x : xs) out.push_back(Value::numeric(x));
  return out;
}

std::vector<Value> toks(std::initializer_list<const char*> xs) {
  std::vector<Value> out;
  for (const char* x : xs) out.push_back(Value::categorical(x));
  return out;
}

Dataset random_dataset(std::size_t rows, std::size_t cols, std::uint64_t seed, double missing_rate = 0.0) {
  std::mt19937_64 rng(seed);
  Schema schema;
  for (std::size_t c = 0; c < cols; ++c) {
    schema.push_back({"c" + std::to_string(c), c, c % 2 ? AttributeKind::Categorical : AttributeKind::Numeric});
  }
  std::vector<Row> records;
  std::vector<Label> labels;
  for (std::size_t r = 0; r < rows; ++r) {
    Row row;
    for (std::size_t c = 0; c < cols; ++c) {
      if (std::uniform_real_distribution<>(0, 1)(rng) < missing_rate) {
        row.push_back(Value::missing());
      } else if (c % 2) {
        row.push_back(Value::categorical(std::string(1, static_cast<char>('a' + rng() % 3))));
      } else {
        row.push_back(Value::numeric(static_cast<double>(rng() % 4)));
      }
    }
    records.push_back(std::move(row));
    labels.push_back(rng() % 2 ? Label::Attack : Label::Normal);
  }
  return Dataset("random", schema, records, labels);
}

}  // namespace

TEST_CASE("partition count") {
  CHECK(partition_count(42, 42) == 1);
  CHECK(partition_count(125973, 41) == 3072);
  CHECK(partition_count(3, 40) == 1);
  // Repeated subtraction as an independent division.
  std::size_t q = 0;
  for (std::size_t n = 100; n >= 7; n -= 7) ++q;
  CHECK(partition_count(100, 7) == q);
  CHECK(q == 14);
}

TEST_CASE("plans") {
  CHECK(make_plan(10, 2).ranges == std::vector<RowRange>{{0, 5}, {5, 10}});
  auto three = make_plan(10, 3);
  CHECK(three.ranges == std::vector<RowRange>{{0, 3}, {3, 6}, {6, 10}});
  std::size_t total = 0;
  for (const auto& r : three.ranges) total += r.size();
  CHECK(total == 10);
  auto singles = make_plan(5, 5);
  CHECK(singles.ranges.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(singles.ranges[i] == RowRange{i, i + 1});

  CHECK_THROWS_AS(make_plan(3, 4), Error);
  try {
    make_plan(3, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyPartitions);
  }

  for (std::size_t n = 1; n < 60; ++n) {
    for (std::size_t p = 1; p <= n; ++p) {
      auto plan = make_plan(n, p);
      REQUIRE(plan.ranges.size() == p);
      std::size_t next = 0;
      for (std::size_t i = 0; i < p; ++i) {
        CHECK(plan.ranges[i].begin == next);
        if (i + 1 < p) CHECK(plan.ranges[i].size() == n / p);
        next = plan.ranges[i].end;
      }
      CHECK(next == n);
    }
  }
}

TEST_CASE("mode") {
  auto a = mode_of(nums({1, 2, 1, 1, 3.2, 1}));
  REQUIRE(a);
  CHECK(a->value == Value::numeric(1));
  CHECK(a->count == 4);

  auto b = mode_of(toks({"tcp", "udp", "tcp", "udp"}));
  REQUIRE(b);
  CHECK(b->value == Value::categorical("udp"));
  CHECK(b->count == 2);

  CHECK_FALSE(mode_of(std::vector<Value>{Value::missing(), Value::missing()}));
  CHECK_FALSE(mode_of(std::vector<Value>{}));

  auto zero = mode_of(nums({0, 0, 5}));
  REQUIRE(zero);
  CHECK(zero->value == Value::numeric(0));

  std::vector<Value> gaps = {Value::missing(), Value::categorical("x"), Value::missing(), Value::missing()};
  CHECK(mode_of(gaps)->count == 1);
}

TEST_CASE("mode agrees with exhaustive counting") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Value> xs;
    const std::size_t n = rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = rng() % 5;
      xs.push_back(k == 0 ? Value::missing() : k < 3 ? Value::numeric(static_cast<double>(rng() % 3))
                                                     : Value::categorical(std::string(1, 'a' + rng() % 2)));
    }
    bool empty = false;
    auto [v, c] = oracle::mode(xs, empty);
    auto m = mode_of(xs);
    REQUIRE(m.has_value() == !empty);
    if (m) {
      CHECK(m->value == v);
      CHECK(m->count == c);
    }
  }
}

TEST_CASE("central points small cases") {
  Schema s = {{"x", 0, AttributeKind::Numeric}};
  std::vector<Row> rows = {{Value::numeric(1)}, {Value::numeric(1)}, {Value::numeric(2)}, {Value::numeric(2)}};
  Dataset d("four", s, rows, std::vector<Label>(4, Label::Normal));
  auto t = central_points(d, 2);
  CHECK(t.entries() == std::vector<CentralPoint>{{0, 0, Value::numeric(1), 2}, {0, 1, Value::numeric(2), 2}});

  auto six = random_dataset(6, 2, 1);
  auto one = central_points(six, 1);
  REQUIRE(one.entries().size() == 2);
  for (std::size_t a = 0; a < 2; ++a) {
    std::vector<Value> col;
    for (const auto& r : six.records()) col.push_back(r[a]);
    CHECK(one.entries()[a].value == mode_of(col)->value);
  }

  CHECK_THROWS_AS(central_points(six, 7), Error);
}

TEST_CASE("central points match a brute-force frequency count") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto d = random_dataset(60, 5, seed, seed % 2 ? 0.3 : 0.0);
    const std::size_t p = 10;
    auto table = central_points(d, p);
    std::vector<CentralPoint> expected;
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t part = 0; part < p; ++part) {
        std::unordered_map<Value, std::pair<std::size_t, std::size_t>, ValueHash> counts;
        for (std::size_t r = part * 6; r < part * 6 + 6; ++r) {
          const auto& v = d.records()[r][a];
          if (v.is_missing()) continue;
          auto [it, fresh] = counts.try_emplace(v, 0, r);
          ++it->second.first;
        }
        if (counts.empty()) continue;
        auto best = counts.begin();
        for (auto it = counts.begin(); it != counts.end(); ++it) {
          if (it->second.first > best->second.first ||
              (it->second.first == best->second.first && it->second.second > best->second.second)) {
            best = it;
          }
        }
        expected.push_back({a, part, best->first, best->second.first});
      }
    }
    CHECK(table.entries() == expected);
  }
}

TEST_CASE("all-missing slices are absent") {
  Schema s = {{"x", 0, AttributeKind::Numeric}, {"y", 1, AttributeKind::Categorical}};
  std::vector<Row> rows = {{Value::numeric(1), Value::missing()},
                           {Value::numeric(1), Value::missing()},
                           {Value::numeric(2), Value::categorical("k")},
                           {Value::numeric(2), Value::missing()}};
  Dataset d("gaps", s, rows, std::vector<Label>(4, Label::Attack));
  auto t = central_points(d, 2);
  CHECK(t.entries().size() == 3);
  CHECK(t.find(1, 0) == nullptr);
  REQUIRE(t.find(1, 1) != nullptr);
  CHECK(t.find(1, 1)->value == Value::categorical("k"));
}

TEST_CASE("threaded central points equal sequential") {
  auto d = random_dataset(997, 7, 12, 0.1);
  auto seq = central_points(d, 50);
  for (std::size_t threads : {2u, 3u, 8u, 64u}) CHECK(central_points(d, 50, threads) == seq);
  CHECK(central_points(d, 50) == seq);
}

TEST_CASE("shuffling inside a partition keeps tie-free modes") {
  auto d = random_dataset(120, 4, 5);
  auto base = central_points(d, 4);
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(1);
  for (std::size_t part = 0; part < 4; ++part) {
    std::shuffle(order.begin() + static_cast<long>(part * 30), order.begin() + static_cast<long>(part * 30 + 30), rng);
  }
  auto shuffled = central_points(d.subset(order, "shuffled"), 4);
  for (const auto& e : base.entries()) {
    // Skip slices whose top count is shared by two values.
    std::map<Value, std::size_t> counts;
    for (std::size_t r = e.partition * 30; r < e.partition * 30 + 30; ++r) ++counts[d.records()[r][e.attribute]];
    std::size_t top = 0;
    for (const auto& [v, c] : counts) top += c == e.frequency;
    if (top != 1) continue;
    const auto* other = shuffled.find(e.attribute, e.partition);
    REQUIRE(other != nullptr);
    CHECK(other->value == e.value);
    CHECK(other->frequency == e.frequency);
  }
}

TEST_CASE("central points dump") {
  Schema s = {{"x", 0, AttributeKind::Numeric}, {"proto", 1, AttributeKind::Categorical}};
  std::vector<Row> rows = {{Value::numeric(0.5), Value::categorical("tcp")},
                           {Value::numeric(0.5), Value::categorical("a,b")}};
  Dataset d("dump", s, rows, {Label::Normal, Label::Attack});
  CHECK(central_points_csv(central_points(d, 1)) ==
        "attribute,partition,value,frequency\nx,0,0.5,2\nproto,0,\"a,b\",1\n");
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(CentralPointsTable({"a"}, 2, {{0, 1, Value::numeric(1), 1}, {0, 0, Value::numeric(1), 1}}), Error);
  CHECK_THROWS_AS(CentralPointsTable({"a"}, 1, {{0, 0, Value::missing(), 1}}), Error);
}
