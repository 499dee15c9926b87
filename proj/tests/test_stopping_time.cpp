#include <doctest.h>

#include <algorithm>

#include "amalgam/stopping_time.hpp"
#include "support.hpp"

using namespace amalgam;
using amalgam::testing::brute_force_stopping_times;

namespace {

std::vector<std::vector<int>> tables(const std::vector<StoppingTime>& times) {
  std::vector<std::vector<int>> out;
  for (const auto& nu : times) out.emplace_back(nu.times().begin(), nu.times().end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("measurability check") {
  auto space = amalgam::testing::worked_space();
  constexpr int inf = StoppingTime::never;
  CHECK(is_stopping_time(*space, std::vector<int>{1, 1, inf, inf}));
  CHECK(is_stopping_time(*space, std::vector<int>{2, inf, 1, 1}));
  CHECK_FALSE(is_stopping_time(*space, std::vector<int>{1, 2, inf, inf}));
  CHECK_FALSE(is_stopping_time(*space, std::vector<int>{0, 0, 0, 1}));
  CHECK_THROWS_AS(StoppingTime(*space, {0, 1, 1, 1}), std::invalid_argument);
  const StoppingTime nu(*space, {1, 1, inf, inf});
  CHECK(nu.support() == Event{true, true, false, false});
}

TEST_CASE("depth-one dyadic space has five stopping times") {
  auto space = dyadic_space(1);
  CHECK(brute_force_stopping_times(*space).size() == 5);
  CHECK(count_stopping_times(*space, 1000) == 5);
  auto all = enumerate_stopping_times(*space);
  REQUIRE(all);
  CHECK(all->size() == 5);
}

TEST_CASE("enumeration agrees with exhaustive search") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    auto space = amalgam::testing::random_space(rng, 1 + trial % 3, 3, 1);
    if (space->size() > 7) continue;
    auto oracle = brute_force_stopping_times(*space);
    std::sort(oracle.begin(), oracle.end());
    auto all = enumerate_stopping_times(*space);
    REQUIRE(all);
    CHECK(tables(*all) == oracle);
    CHECK(count_stopping_times(*space, 1'000'000) == oracle.size());
  }
}

TEST_CASE("counts on binary trees and the overflow cap") {
  CHECK(count_stopping_times(*dyadic_space(2), 1'000'000) == 26);
  CHECK(count_stopping_times(*dyadic_space(3), 1'000'000) == 677);
  CHECK(count_stopping_times(*dyadic_space(4), 1'000'000) == 458330);
  CHECK(count_stopping_times(*dyadic_space(5), 1'000'000) == 1'000'000);
  CHECK_FALSE(enumerate_stopping_times(*dyadic_space(5)).has_value());
  std::size_t visited = 0;
  CHECK_FALSE(for_each_stopping_time(*dyadic_space(5), 1'000'000, [&](const StoppingTime&) { ++visited; }));
  CHECK(visited == 0);
}

TEST_CASE("enumeration yields distinct valid stopping times") {
  auto space = dyadic_space(3);
  auto all = enumerate_stopping_times(*space);
  REQUIRE(all);
  auto sorted = tables(*all);
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  for (const auto& nu : *all) CHECK(is_stopping_time(*space, nu.times()));
}
