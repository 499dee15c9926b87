#include <doctest.h>

#include <cmath>

#include "amalgam/atomic_decomposition.hpp"
#include "support.hpp"

using namespace amalgam;
using amalgam::testing::max_abs_diff;
using amalgam::testing::worked_martingale;

namespace {

constexpr HardyFlavor kFlavors[] = {HardyFlavor::conditional_square, HardyFlavor::square, HardyFlavor::maximal};
constexpr AtomDefinition kDefinitions[] = {AtomDefinition::simple, AtomDefinition::weighted};

}  // namespace

TEST_CASE("worked decomposition") {
  const Martingale f = worked_martingale();
  const Decomposition d = decompose(f, 2.0, 2.0, HardyFlavor::conditional_square, AtomDefinition::simple);
  REQUIRE(d.triples.size() == 2);
  const AtomTriple& low = d.triples[0];
  const AtomTriple& high = d.triples[1];
  CHECK(low.k == -1);
  CHECK(std::abs(low.lambda - 1.0) <= 1e-12);
  CHECK(max_abs_diff(low.atom, RandomVariable({1.0, 1.0, -1.0, -1.0})) <= 1e-12);
  CHECK(low.nu.support() == Event(4, true));
  CHECK(high.k == 0);
  CHECK(std::abs(high.lambda - std::sqrt(2.0)) <= 1e-12);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(high.atom, RandomVariable({h, -h, 0.0, 0.0})) <= 1e-12);
  CHECK(high.nu.support() == Event{true, true, false, false});
  CHECK(std::abs(d.source_norm - std::sqrt(1.5)) <= 1e-12);
  CHECK(std::abs(aggregate_eta_norm(d, 1.0) - std::sqrt(5.0)) <= 1e-12);
  CHECK(reconstruction_residual(d, f) <= 1e-15);

  const AtomReport report = verify_atom(f.space(), high, 2.0, 2.0, kInfinity);
  CHECK(report.passed());
  CHECK(report.measured == doctest::Approx(h));
  CHECK(report.bound == doctest::Approx(std::sqrt(2.0)));
  CHECK(report.ratio == doctest::Approx(0.5));
}

TEST_CASE("upper constant") {
  CHECK(upper_constant(1.0) == doctest::Approx(4.0));
  CHECK(upper_constant(0.5) == doctest::Approx(std::pow(2.0 / (std::sqrt(2.0) - 1.0), 2.0)));
  CHECK(upper_constant(0.5) == doctest::Approx(23.3137).epsilon(1e-5));
  CHECK_THROWS_AS(upper_constant(0.0), std::invalid_argument);
}

TEST_CASE("zero martingale has no triples") {
  const Martingale f = Martingale::zero(dyadic_space(3));
  for (auto flavor : kFlavors) {
    const Decomposition d = decompose(f, 1.0, 1.0, flavor, AtomDefinition::simple);
    CHECK(d.triples.empty());
    CHECK(reconstruction_residual(d, f) == 0.0);
    CHECK(certify_bounds(f, d).passed());
  }
}

TEST_CASE("all variants on random trees") {
  std::mt19937_64 rng(13);
  const double pqs[][2] = {{0.5, 0.5}, {0.5, 1.0}, {1.0, 1.0}, {2.0, 2.0}, {1.0, 2.0}, {0.7, kInfinity}};
  for (int trial = 0; trial < 30; ++trial) {
    auto space = amalgam::testing::random_space(rng, 2 + trial % 4, 3, 1 + trial % 3);
    const Martingale f = amalgam::testing::random_martingale(rng, space);
    for (const auto& pq : pqs) {
      for (auto flavor : kFlavors) {
        for (auto defn : kDefinitions) {
          const Decomposition d = decompose(f, pq[0], pq[1], flavor, defn);
          CHECK(reconstruction_residual(d, f) <= 1e-10 * std::max(1.0, f.terminal().max_abs()));
          for (int n = 0; n <= f.horizon(); ++n) CHECK(max_abs_diff(reconstruct(d, n), f.level(n)) <= 1e-10);
          for (const auto& t : d.triples) {
            CHECK(is_stopping_time(*space, t.nu.times()));
            for (double r : {2.0, 4.0, kInfinity}) {
              if (r <= std::max(1.0, pq[0])) continue;
              const AtomReport report = verify_atom(*space, t, pq[0], pq[1], r);
              CHECK(report.vanishing);
              CHECK(report.support_ok);
              CHECK(report.slack >= -1e-12 * std::max(1.0, report.bound));
            }
          }
          const BoundCertificate cert = certify_bounds(f, d);
          CHECK_MESSAGE(cert.passed(), (cert.failures.empty() ? std::string() : cert.failures.front()));
        }
      }
    }
  }
}

TEST_CASE("window errors shrink to zero and never grow with the window") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto space = amalgam::testing::random_space(rng, 3 + trial % 3, 2, 1);
    const Martingale f = amalgam::testing::random_martingale(rng, space);
    const Decomposition d = decompose(f, 1.0, 1.0, HardyFlavor::conditional_square, AtomDefinition::simple);
    const auto errors = window_errors(d, f);
    REQUIRE_FALSE(errors.empty());
    CHECK(errors.front() <= 1e-10);
    for (std::size_t i = 1; i < errors.size(); ++i) CHECK(errors[i - 1] <= errors[i] + 1e-12);
    if (!d.triples.empty()) {
      const Martingale all = partial_sum(d, d.triples.front().k, d.triples.back().k);
      CHECK(max_abs_diff(all.terminal(), f.terminal()) <= 1e-10);
    }
  }
}

TEST_CASE("a tampered coefficient is caught") {
  const Martingale f = worked_martingale();
  Decomposition d = decompose(f, 2.0, 2.0, HardyFlavor::conditional_square, AtomDefinition::simple);
  d.triples[1].lambda /= 2.0;
  CHECK(reconstruction_residual(d, f) == doctest::Approx(0.5));
}

TEST_CASE("rescaled and split decompositions keep the converse bound") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto space = amalgam::testing::random_space(rng, 2 + trial % 3, 3, 2);
    const Martingale f = amalgam::testing::random_martingale(rng, space);
    for (auto flavor : kFlavors) {
      Decomposition d = decompose(f, 1.0, 2.0, flavor, AtomDefinition::weighted);
      for (auto& t : d.triples) {
        const double c = 1.0 + unit(rng);
        t.lambda *= c;
        t.atom *= 1.0 / c;
        CHECK(verify_atom(*space, t, 1.0, 2.0, kInfinity).passed());
      }
      CHECK(reconstruction_residual(d, f) <= 1e-10);
      for (double eta : kDefaultEtaGrid) CHECK(d.source_norm <= aggregate_eta_norm(d, eta) * (1 + 1e-12));
    }
  }
}

TEST_CASE("parsing flavors and definitions") {
  CHECK(parse_flavor("s") == HardyFlavor::conditional_square);
  CHECK(parse_flavor("S") == HardyFlavor::square);
  CHECK(parse_flavor("star") == HardyFlavor::maximal);
  CHECK(parse_definition("weighted") == AtomDefinition::weighted);
  CHECK_THROWS_AS(parse_flavor("x"), std::invalid_argument);
  CHECK(to_string(HardyFlavor::maximal) == "star");
}

TEST_CASE("ladder layers are disjoint and rebuild the supports") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    auto space = amalgam::testing::random_space(rng, 2 + trial % 4, 3, 1);
    const Martingale f = amalgam::testing::random_martingale(rng, space);
    for (auto flavor : kFlavors) {
      const Decomposition d = decompose(f, 1.0, 1.0, flavor, AtomDefinition::simple);
      REQUIRE(d.trace.size() == d.triples.size());
      for (std::size_t w = 0; w < space->size(); ++w) {
        int layers = 0;
        for (std::size_t i = 0; i < d.trace.size(); ++i) {
          layers += d.trace[i].layer[w] ? 1 : 0;
          bool in_later_layer = false;
          for (std::size_t j = i; j < d.trace.size(); ++j) in_later_layer = in_later_layer || d.trace[j].layer[w];
          CHECK(d.trace[i].support[w] == in_later_layer);
        }
        CHECK(layers <= 1);
      }
    }
  }
}

TEST_CASE("hand-built atom violations") {
  auto space = amalgam::testing::worked_space();
  AtomTriple t;
  t.atom = RandomVariable::constant(4, 1.0);
  t.nu = StoppingTime::constant(4, 0);
  t.lambda = 1.0;
  const AtomReport report = verify_atom(*space, t, 1.0, 1.0, 2.0);
  CHECK_FALSE(report.vanishing);
  CHECK(report.first_failing_time == 0);
  CHECK_FALSE(report.passed());

  AtomTriple wide;
  wide.atom = RandomVariable({1.0, -1.0, 0.0, 0.0}) * 10.0;
  wide.nu = StoppingTime(*space, {1, 1, StoppingTime::never, StoppingTime::never});
  const AtomReport big = verify_atom(*space, wide, 2.0, 2.0, kInfinity);
  CHECK(big.vanishing);
  CHECK_FALSE(big.size_ok);
  CHECK(big.slack < 0.0);
}

TEST_CASE("weighted and simple coefficients coincide when p = q") {
  const Martingale f = worked_martingale();
  const Decomposition a = decompose(f, 2.0, 2.0, HardyFlavor::conditional_square, AtomDefinition::simple);
  const Decomposition b = decompose(f, 2.0, 2.0, HardyFlavor::conditional_square, AtomDefinition::weighted);
  REQUIRE(a.triples.size() == b.triples.size());
  for (std::size_t i = 0; i < a.triples.size(); ++i) {
    CHECK(a.triples[i].lambda == doctest::Approx(b.triples[i].lambda).epsilon(1e-14));
  }
}
