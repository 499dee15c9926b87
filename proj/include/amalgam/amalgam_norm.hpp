#pragma once

#include <limits>

#include "amalgam/filtered_space.hpp"
#include "amalgam/martingale.hpp"

namespace amalgam {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Exponents for norms and atoms: p in (0, inf), q in (0, inf],
/// r in (max(p, 1), inf], eta in (0, 1]. Infinity is spelled kInfinity.
struct ExponentConfig {
  double p = 1.0;
  double q = 1.0;
  double r = kInfinity;
  double eta = 1.0;

  /// Throws std::invalid_argument naming the offending exponent.
  void validate() const;
};

/// Throws std::invalid_argument unless p in (0, inf) and q in (0, inf].
void validate_pq(double p, double q);

/// Amalgam norm
///   ||g||_{p,q} = [ sum_j ( int |g|^p 1_{Omega_j} dP )^{q/p} ]^{1/q},
/// with the sup over blocks when q = inf. Blocks with zero integral
/// contribute 0. Small exponents are evaluated in log space.
double lpq_norm(const FilteredSpace& space, const RandomVariable& g, double p, double q);

/// Classical (E |g|^r)^{1/r}; r = inf gives max |g| (all outcomes carry mass).
double lr_norm(const FilteredSpace& space, const RandomVariable& g, double r);

/// ||s(f)||_{p,q}.
double hardy_s_norm(const Martingale& f, double p, double q);
/// ||S(f)||_{p,q}.
double hardy_S_norm(const Martingale& f, double p, double q);
/// ||f*||_{p,q}.
double hardy_star_norm(const Martingale& f, double p, double q);
/// inf over admissible S-envelopes of ||beta_inf||_{p,q}, attained by the minimal envelope.
double q_space_norm(const Martingale& f, double p, double q);
/// inf over admissible |f|-envelopes of ||beta_inf||_{p,q}, attained by the minimal envelope.
double p_space_norm(const Martingale& f, double p, double q);

struct HardyNorms {
  double s = 0.0;
  double S = 0.0;
  double star = 0.0;
  double Q = 0.0;
  double P = 0.0;
};

HardyNorms all_norms(const Martingale& f, double p, double q);

}  // namespace amalgam
