#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "amalgam/atomic_decomposition.hpp"

namespace amalgam {

/// phi(A) = ||1_A||_{p,q} / P(A). Rejects null sets.
double phi(const FilteredSpace& space, const Event& set, double p, double q);

enum class CampanatoMode { exact, heuristic };

std::string to_string(CampanatoMode mode);
CampanatoMode parse_mode(const std::string& text);

struct CampanatoResult {
  double norm_value = 0.0;
  StoppingTime attaining_nu;
  CampanatoMode mode = CampanatoMode::heuristic;
  std::uint64_t candidates_examined = 0;
};

/// (1/phi(B)) ((1/P(B)) int_B |g - g^nu|^2 dP)^{1/2} for one stopping time
/// with P(B_nu) > 0. `g_levels` are E_0 g, ..., E_N g.
double campanato_term(const FilteredSpace& space, const RandomVariable& g, const std::vector<RandomVariable>& g_levels,
                      const StoppingTime& nu, double p, double q);

/// Threshold family for the heuristic supremum: conditional-variation and
/// both envelope ladders of the martingale of g at every k of their windows,
/// plus the first-entry time of every cell of every Pi_n.
std::vector<StoppingTime> heuristic_stopping_times(const Martingale& g_martingale);

/// sup over stopping times with P(B_nu) > 0 of campanato_term. Exact mode
/// enumerates every stopping time when their count is at most `cap` and
/// otherwise falls back to the heuristic family (mode reports which ran).
/// `extra_candidates` are always examined as well. Ties go to the
/// lexicographically smallest stopping-time table.
CampanatoResult campanato_norm(const FilteredSpace& space, const RandomVariable& g, double p, double q,
                               CampanatoMode mode, std::uint64_t cap = 1'000'000,
                               const std::vector<StoppingTime>& extra_candidates = {});
CampanatoResult campanato_norm(const SpacePtr& space, const RandomVariable& g, double p, double q,
                               CampanatoMode mode, std::uint64_t cap = 1'000'000,
                               const std::vector<StoppingTime>& extra_candidates = {});

/// kappa_g(f) = E[f_N g].
double pairing(const Martingale& f, const RandomVariable& g);

struct DualityCertificate {
  double p = 1.0;
  double q = 1.0;
  double eta = 1.0;
  double pairing_abs = 0.0;       ///< |E[f g]|
  double atomwise_bound = 0.0;    ///< sum_k lambda_k ||a^k||_2 (int_B |g - g^nu|^2)^{1/2}
  double block_sum_bound = 0.0;   ///< ||g|| sum_k ||(lambda_k / P(B)^{1/p}) 1_B||_{p,q}
  double aggregate_bound = 0.0;   ///< ||g|| A(eta)
  double budget = 0.0;            ///< C(eta) ||f||_{H^s_{p,q}} ||g||
  double hardy_norm = 0.0;
  double constant = 0.0;
  CampanatoResult campanato;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Duality chain |E[fg]| <= atom-wise bound <= block sum <= aggregate <= budget
/// built from the conditional-variation ladder decomposition of f. Requires
/// 0 < p <= q <= 1 and E g = 0 (std::invalid_argument otherwise). The
/// Campanato supremum always includes the ladder times of f.
DualityCertificate certify_duality(const Martingale& f, const RandomVariable& g, double p, double q,
                                   CampanatoMode mode = CampanatoMode::exact, double eta = 1.0,
                                   std::uint64_t cap = 1'000'000);

/// Recovers the unique zero-mean g with E[X_i g] = value_i. Throws
/// std::invalid_argument when the system is inconsistent or leaves g
/// undetermined.
RandomVariable representer(const FilteredSpace& space, const std::vector<RandomVariable>& basis,
                           const std::vector<double>& values);

struct ReverseMinkowskiReport {
  double left = 0.0;   ///< sum_n ||f_n||_{p,q}
  double right = 0.0;  ///< || sum_n |f_n| ||_{p,q}
  double slack = 0.0;  ///< right - left
  bool holds = true;
};

/// sum_n ||f_n||_{p,q} <= || sum_n |f_n| ||_{p,q} for 0 < p < 1, 0 < q <= 1.
/// Exponents outside that range are rejected with std::invalid_argument.
ReverseMinkowskiReport reverse_minkowski_check(const FilteredSpace& space, const std::vector<RandomVariable>& fs,
                                               double p, double q);

}  // namespace amalgam
