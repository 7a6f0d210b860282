#include <random>

#include "doctest.h"
#include "nidsfs/error.hpp"
#include "nidsfs/metrics.hpp"
#include "oracles.hpp"

using namespace nidsfs;

namespace {

std::vector<Label> labels(std::initializer_list<int> xs) {
  std::vector<Label> out;
  for (int x : xs) out.push_back(label_from_int(x));
  return out;
}

}  // namespace

TEST_CASE("confusion cells") {
  CHECK(confusion(labels({1, 0, 1, 0}), labels({1, 0, 0, 1})) == ConfusionMatrix{1, 1, 1, 1});
  CHECK(confusion(labels({1, 1, 0}), labels({1, 1, 0})) == ConfusionMatrix{2, 1, 0, 0});
  CHECK_THROWS_AS(confusion(labels({1}), labels({1, 0})), Error);
  CHECK_THROWS_AS(confusion(labels({}), labels({})), Error);
}

TEST_CASE("confusion matches an independent tally") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<Label> p, t;
    for (std::size_t i = 0; i < n; ++i) {
      p.push_back(label_from_int(static_cast<int>(rng() % 2)));
      t.push_back(label_from_int(static_cast<int>(rng() % 2)));
    }
    CHECK(confusion(p, t) == oracle::tally(p, t));

    std::vector<Label> fp, ft;
    for (auto l : p) fp.push_back(label_from_int(1 - to_int(l)));
    for (auto l : t) ft.push_back(label_from_int(1 - to_int(l)));
    auto a = confusion(p, t), b = confusion(fp, ft);
    CHECK(a.tp == b.tn);
    CHECK(a.fp == b.fn);
    CHECK(compute_metrics(a).accuracy == compute_metrics(b).accuracy);
  }
}

TEST_CASE("worked metrics") {
  auto m = compute_metrics({50, 40, 5, 5});
  CHECK(*m.accuracy == 0.9);
  CHECK(*m.fpr == 1.0 / 9.0);
  CHECK(*m.fnr == 1.0 / 11.0);
  CHECK(*m.precision == 10.0 / 11.0);
  CHECK(*m.recall == 10.0 / 11.0);
  CHECK(*m.far == (1.0 / 9.0 + 1.0 / 11.0) / 2.0);
}

TEST_CASE("undefined metrics") {
  auto m = compute_metrics({0, 10, 0, 0});
  CHECK(m.accuracy == 1.0);
  CHECK(m.fpr == 0.0);
  CHECK_FALSE(m.fnr);
  CHECK_FALSE(m.far);
  CHECK_FALSE(m.precision);
  CHECK_FALSE(m.recall);
  CHECK_FALSE(error_rate({}));
}

TEST_CASE("perfect classifier") {
  for (std::size_t n : {1u, 2u, 17u, 1000u}) {
    auto m = compute_metrics({n, n, 0, 0});
    CHECK(m.accuracy == 1.0);
    CHECK(m.far == 0.0);
  }
}

TEST_CASE("metric identities") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionMatrix cm{rng() % 200, rng() % 200, rng() % 200, rng() % 200};
    if (cm.total() == 0) continue;
    auto m = compute_metrics(cm);
    if (m.fpr && m.fnr) CHECK(*m.far == (*m.fpr + *m.fnr) / 2.0);
    CHECK(*m.accuracy + *error_rate(cm) == 1.0);
    for (const auto& v : {m.accuracy, m.fpr, m.fnr, m.far, m.precision, m.recall}) {
      if (v) CHECK((*v >= 0.0 && *v <= 1.0));
    }
  }
}
