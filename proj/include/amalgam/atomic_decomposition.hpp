#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amalgam/amalgam_norm.hpp"
#include "amalgam/martingale.hpp"

namespace amalgam {

/// Which maximal quantity controls the atoms: s(a), S(a) or a*.
enum class HardyFlavor { conditional_square, square, maximal };

/// Size condition of the atoms: P(B)^{1/r - 1/p} (simple) or
/// P(B)^{1/r} ||1_B||_{p,q}^{-1} (weighted).
enum class AtomDefinition { simple, weighted };

std::string to_string(HardyFlavor flavor);
std::string to_string(AtomDefinition defn);
/// Accepts "s", "S", "star"; throws std::invalid_argument otherwise.
HardyFlavor parse_flavor(const std::string& text);
/// Accepts "simple", "weighted".
AtomDefinition parse_definition(const std::string& text);

/// T(a) for the flavor, evaluated on the martingale E_n a generated by the
/// terminal function a (no mean check, d_0 = 0).
RandomVariable atom_statistic(const FilteredSpace& space, const RandomVariable& atom, HardyFlavor flavor);

/// One (lambda_k, a^k, nu^k). The atom is kept as its terminal function.
struct AtomTriple {
  int k = 0;
  double lambda = 0.0;
  RandomVariable atom;
  StoppingTime nu;
  HardyFlavor flavor = HardyFlavor::conditional_square;
  AtomDefinition defn = AtomDefinition::simple;
};

/// Ladder bookkeeping for one k: B = {nu^k != inf}, its mass, and
/// G_k = B_{nu^k} \ B_{nu^{k+1}}.
struct LadderLevel {
  int k = 0;
  Event support;
  double support_prob = 0.0;
  Event layer;
};

struct Decomposition {
  SpacePtr space;
  HardyFlavor flavor = HardyFlavor::conditional_square;
  AtomDefinition defn = AtomDefinition::simple;
  double p = 1.0;
  double q = 1.0;
  std::vector<AtomTriple> triples;  ///< ordered by k
  double source_norm = 0.0;         ///< ||f|| in H^s, Q or P per flavor
  std::vector<LadderLevel> trace;
};

/// Norm of f matching the flavor: ||f||_{H^s_{p,q}}, ||f||_{Q_{p,q}} or ||f||_{P_{p,q}}.
double source_norm(const Martingale& f, HardyFlavor flavor, double p, double q);

/// Stopping-time ladder decomposition.
///
/// conditional_square: nu^k = inf{n : s_{n+1}(f) > 2^k}, lambda_k = 2^{k+1} c_k;
/// square / maximal:   nu^k = inf{n : beta_n > 2^k} for the minimal
///                     envelope, lambda_k = 2^{k+2} c_k;
/// with c_k = P(B_{nu^k})^{1/p} (simple) or ||1_{B_{nu^k}}||_{p,q} (weighted),
/// and a^k = (f^{nu^{k+1}} - f^{nu^k}) / lambda_k. Ladder indices with empty
/// B_{nu^k} are omitted; the zero martingale gives no triples.
Decomposition decompose(const Martingale& f, double p, double q, HardyFlavor flavor, AtomDefinition defn);

struct AtomReport {
  bool vanishing = true;          ///< E_n a = 0 on {nu >= n} for every n
  int first_failing_time = -1;    ///< first n where vanishing fails, -1 if none
  double vanishing_residual = 0;  ///< max |E_n a| over {nu >= n}
  bool size_ok = true;            ///< size condition of the atom definition
  double measured = 0.0;          ///< ||T(a)||_r
  double bound = 0.0;             ///< right-hand side of the size condition
  double slack = 0.0;             ///< bound - measured
  double ratio = 0.0;             ///< measured / bound (0 when bound is infinite)
  bool support_ok = true;         ///< supp T(a) within B_nu
  bool passed() const { return vanishing && size_ok && support_ok; }
};

/// Checks a triple's atom for vanishing, its size condition at exponent r,
/// and support containment. Failures are report entries, never exceptions.
AtomReport verify_atom(const FilteredSpace& space, const AtomTriple& triple, double p, double q, double r);

/// sum_k lambda_k E_n a^k.
RandomVariable reconstruct(const Decomposition& d, int n);

/// Largest |reconstruct(d, n) - f_n| over n and outcomes.
double reconstruction_residual(const Decomposition& d, const Martingale& f);

/// Partial sum sum_{k=l}^{m} lambda_k a^k as a martingale.
Martingale partial_sum(const Decomposition& d, int l, int m);

/// ||f - partial_sum(l, m)||_{H^s_{p,q}} for every symmetric window
/// [k_first + i, k_last - i] shrinking to empty; index 0 is the full window.
std::vector<double> window_errors(const Decomposition& d, const Martingale& f);

/// || sum_k (lambda_k / c_k)^eta 1_{B_{nu^k}} ||_{p/eta, q/eta}^{1/eta}
/// with c_k = P(B_{nu^k})^{1/p} (simple) or ||1_{B_{nu^k}}||_{p,q} (weighted).
double aggregate_eta_norm(const Decomposition& d, double eta, double p, double q);
double aggregate_eta_norm(const Decomposition& d, double eta);

/// (4^eta / (2^eta - 1))^{1/eta}.
double upper_constant(double eta);

struct EtaBound {
  double eta = 1.0;
  double aggregate = 0.0;     ///< A(eta)
  double constant = 0.0;      ///< upper_constant(eta) times the flavor factor
  double upper_budget = 0.0;  ///< constant * source_norm
  bool upper_ok = true;       ///< A(eta) <= upper_budget
  bool lower_ok = true;       ///< source_norm <= A(eta)
  double upper_ratio = 0.0;   ///< A / budget
  double lower_ratio = 0.0;   ///< source_norm / A
};

struct BoundCertificate {
  double source_norm = 0.0;
  std::vector<EtaBound> rows;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

inline const std::vector<double> kDefaultEtaGrid{0.25, 0.5, 0.75, 1.0};

/// Two-sided certificate: A(eta) <= C(eta) ||f|| (with an extra factor 2
/// for the envelope flavors) and ||f|| <= A(eta), for every eta in the grid.
BoundCertificate certify_bounds(const Martingale& f, const Decomposition& d,
                                const std::vector<double>& eta_grid = kDefaultEtaGrid);

}  // namespace amalgam
