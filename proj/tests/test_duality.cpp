#include <doctest.h>

#include <cmath>

#include "amalgam/duality.hpp"
#include "support.hpp"

using namespace amalgam;

namespace {

RandomVariable zero_mean_noise(std::mt19937_64& rng, const FilteredSpace& space) {
  std::normal_distribution<double> normal;
  RandomVariable g = RandomVariable::zeros(space.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = normal(rng);
  const double mean = space.expectation(g);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= mean;
  return g;
}

}  // namespace

TEST_CASE("phi and the pairing") {
  auto space = with_blocks(*dyadic_space(2), Partition{{0, 1}, {2, 3}});
  CHECK(phi(*space, Event{true, false, false, false}, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(phi(*space, Event(4, false), 1.0, 2.0), std::invalid_argument);
  const Martingale f = amalgam::testing::worked_martingale();
  CHECK(pairing(f, RandomVariable({1.0, 1.0, 1.0, -3.0})) == doctest::Approx(1.0));
}

TEST_CASE("two-point Campanato norm") {
  auto space = dyadic_space(1);
  const CampanatoResult r = campanato_norm(*space, RandomVariable({1.0, -1.0}), 2.0, 2.0, CampanatoMode::exact);
  CHECK(r.mode == CampanatoMode::exact);
  CHECK(r.norm_value == doctest::Approx(1.0));
  CHECK(r.attaining_nu.times()[0] == 0);
  CHECK(r.attaining_nu.times()[1] == 0);
  CHECK(r.candidates_examined == 4);
}

TEST_CASE("exact enumeration dominates the heuristic family") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto space = amalgam::testing::random_space(rng, 1 + trial % 3, 2, 2);
    const RandomVariable g = zero_mean_noise(rng, *space);
    const CampanatoResult exact = campanato_norm(*space, g, 0.5, 1.0, CampanatoMode::exact);
    const CampanatoResult heuristic = campanato_norm(*space, g, 0.5, 1.0, CampanatoMode::heuristic);
    CHECK(exact.mode == CampanatoMode::exact);
    CHECK(heuristic.norm_value <= exact.norm_value * (1 + 1e-12));
  }
}

TEST_CASE("exact mode falls back past the cap") {
  std::mt19937_64 rng(37);
  auto space = dyadic_space(5);
  const CampanatoResult r = campanato_norm(*space, zero_mean_noise(rng, *space), 1.0, 1.0, CampanatoMode::exact);
  CHECK(r.mode == CampanatoMode::heuristic);
}

TEST_CASE("duality chain on random pairs") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto space = amalgam::testing::random_space(rng, 1 + trial % 4, 2, 1 + trial % 2);
    const Martingale f = amalgam::testing::random_martingale(rng, space);
    const RandomVariable g = zero_mean_noise(rng, *space);
    for (const auto& [p, q] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}}) {
      const DualityCertificate cert = certify_duality(f, g, p, q, CampanatoMode::exact);
      CHECK_MESSAGE(cert.passed(), (cert.failures.empty() ? std::string() : cert.failures.front()));
      CHECK(cert.pairing_abs <= cert.atomwise_bound * (1 + 1e-12) + 1e-15);
      CHECK(cert.atomwise_bound <= cert.budget * (1 + 1e-12) + 1e-15);
    }
  }
  const Martingale f = amalgam::testing::worked_martingale();
  CHECK_THROWS_AS(certify_duality(f, RandomVariable({1.0, 1.0, 1.0, -3.0}), 2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(certify_duality(f, RandomVariable({1.0, 1.0, 1.0, 1.0}), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("representer recovery") {
  std::mt19937_64 rng(43);
  auto space = dyadic_space(3);
  const RandomVariable g = zero_mean_noise(rng, *space);
  std::vector<RandomVariable> basis;
  std::vector<double> values;
  for (std::size_t w = 0; w + 1 < space->size(); ++w) {
    Event e(space->size(), false);
    e[w] = true;
    basis.push_back(indicator(e) - RandomVariable::constant(space->size(), space->prob(w)));
    values.push_back(space->expectation(hadamard(basis.back(), g)));
  }
  const RandomVariable recovered = representer(*space, basis, values);
  CHECK(amalgam::testing::max_abs_diff(recovered, g) < 1e-10);
  basis.pop_back();
  values.pop_back();
  CHECK_THROWS_AS(representer(*space, basis, values), std::invalid_argument);
}

TEST_CASE("reverse Minkowski") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto space = amalgam::testing::random_space(rng, 2, 3, 3);
    std::vector<RandomVariable> family;
    for (int i = 0; i < 4; ++i) {
      RandomVariable x = RandomVariable::zeros(space->size());
      for (std::size_t w = 0; w < x.size(); ++w) x[w] = unit(rng) < 0.3 ? 0.0 : unit(rng);
      family.push_back(x);
    }
    for (const auto& [p, q] : {std::pair{0.5, 0.5}, std::pair{0.3, 1.0}, std::pair{0.9, 0.7}}) {
      CHECK(reverse_minkowski_check(*space, family, p, q).holds);
    }
  }
  auto space = dyadic_space(1);
  CHECK_THROWS_AS(reverse_minkowski_check(*space, {RandomVariable({1.0, 0.0})}, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(reverse_minkowski_check(*space, {RandomVariable({1.0, 0.0})}, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("degenerate pairs and scaling") {
  const Martingale f = amalgam::testing::worked_martingale();
  const DualityCertificate zero_g = certify_duality(f, RandomVariable::zeros(4), 1.0, 1.0);
  CHECK(zero_g.pairing_abs == 0.0);
  CHECK(zero_g.atomwise_bound == 0.0);
  CHECK(zero_g.budget == 0.0);
  CHECK(zero_g.passed());
  const DualityCertificate zero_f =
      certify_duality(Martingale::zero(f.space_ptr()), RandomVariable({1.0, 1.0, 1.0, -3.0}), 1.0, 1.0);
  CHECK(zero_f.pairing_abs == 0.0);
  CHECK(zero_f.budget == 0.0);
  CHECK(zero_f.passed());

  std::mt19937_64 rng(59);
  auto space = amalgam::testing::random_space(rng, 3, 2, 2);
  const RandomVariable g = zero_mean_noise(rng, *space);
  const double base = campanato_norm(*space, g, 0.5, 1.0, CampanatoMode::exact).norm_value;
  CHECK(campanato_norm(*space, -3.0 * g, 0.5, 1.0, CampanatoMode::exact).norm_value ==
        doctest::Approx(3.0 * base).epsilon(1e-12));
  const Martingale h = amalgam::testing::random_martingale(rng, space);
  CHECK(pairing(h, 2.0 * g) == doctest::Approx(2.0 * pairing(h, g)).epsilon(1e-12));
}

TEST_CASE("duality chain at the remaining exponents") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    auto space = amalgam::testing::random_space(rng, 1 + trial % 4, 3, 2);
    const Martingale f = amalgam::testing::random_martingale(rng, space);
    const RandomVariable g = zero_mean_noise(rng, *space);
    for (const auto& [p, q] : {std::pair{0.5, 0.5}, std::pair{0.75, 1.0}}) {
      CHECK(certify_duality(f, g, p, q, CampanatoMode::heuristic).passed());
    }
  }
}

TEST_CASE("four-point representer from three pairings") {
  auto space = dyadic_space(2);
  const RandomVariable h({0.5, -1.5, 2.0, -1.0});
  const std::vector<RandomVariable> basis{RandomVariable({1.0, -1.0, 0.0, 0.0}), RandomVariable({0.0, 0.0, 1.0, -1.0}),
                                          RandomVariable({1.0, 1.0, -1.0, -1.0})};
  std::vector<double> values;
  for (const auto& x : basis) values.push_back(space->expectation(hadamard(x, h)));
  CHECK(amalgam::testing::max_abs_diff(representer(*space, basis, values), h) <= 1e-12);
  CHECK(representer(*space, basis, {0.0, 0.0, 0.0}) == RandomVariable::zeros(4));
}

TEST_CASE("reverse Minkowski equality cases") {
  auto space = with_blocks(*dyadic_space(2), Partition{{0, 1}, {2, 3}});
  const RandomVariable a({1.0, 0.0, 0.0, 2.0});
  const RandomVariable b({0.0, 3.0, 0.5, 0.0});
  const auto single = reverse_minkowski_check(*space, {a}, 0.5, 0.7);
  CHECK(single.left == doctest::Approx(single.right).epsilon(1e-13));
  const auto disjoint = reverse_minkowski_check(*space, {a, b}, 0.5, 0.5);
  CHECK(disjoint.holds);
  // Disjoint supports at p = q: p-th powers add, so the right side is the
  // l_p sum of the individual norms, strictly above their plain sum.
  const double na = lr_norm(*space, a, 0.5);
  const double nb = lr_norm(*space, b, 0.5);
  CHECK(disjoint.right == doctest::Approx(std::pow(std::sqrt(na) + std::sqrt(nb), 2.0)).epsilon(1e-13));
  CHECK(disjoint.slack > 0.0);
}
