#include "amalgam/atomic_decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "amalgam/tolerance.hpp"

namespace amalgam {

std::string to_string(HardyFlavor flavor) {
  switch (flavor) {
    case HardyFlavor::conditional_square: return "s";
    case HardyFlavor::square: return "S";
    case HardyFlavor::maximal: return "star";
  }
  return "?";
}

std::string to_string(AtomDefinition defn) { return defn == AtomDefinition::simple ? "simple" : "weighted"; }

HardyFlavor parse_flavor(const std::string& text) {
  if (text == "s") return HardyFlavor::conditional_square;
  if (text == "S") return HardyFlavor::square;
  if (text == "star" || text == "*") return HardyFlavor::maximal;
  throw std::invalid_argument("unknown flavor '" + text + "' (expected s, S or star)");
}

AtomDefinition parse_definition(const std::string& text) {
  if (text == "simple") return AtomDefinition::simple;
  if (text == "weighted") return AtomDefinition::weighted;
  throw std::invalid_argument("unknown atom definition '" + text + "' (expected simple or weighted)");
}

namespace {

// Shared pointer that does not own the space; lets by-reference callers use
// the Martingale-based functionals.
SpacePtr borrow(const FilteredSpace& space) { return SpacePtr(SpacePtr{}, &space); }

RandomVariable stopped_terminal(const Martingale& f, const StoppingTime& nu) {
  RandomVariable out = RandomVariable::zeros(f.space().size());
  const int horizon = f.horizon();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.level(std::min(horizon, nu[i]))[i];
  return out;
}

double normaliser(const FilteredSpace& space, const Event& support, double prob, AtomDefinition defn, double p,
                  double q) {
  if (defn == AtomDefinition::simple) return std::pow(prob, 1.0 / p);
  return lpq_norm(space, indicator(support), p, q);
}

Event difference(const Event& a, const Event& b) {
  Event out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && !b[i];
  return out;
}

}  // namespace

RandomVariable atom_statistic(const FilteredSpace& space, const RandomVariable& atom, HardyFlavor flavor) {
  const Martingale process = Martingale::unchecked(borrow(space), generated_levels(space, atom));
  switch (flavor) {
    case HardyFlavor::conditional_square: return conditional_quadratic_variation(process);
    case HardyFlavor::square: return quadratic_variation(process);
    case HardyFlavor::maximal: return maximal_function(process);
  }
  throw std::logic_error("unreachable flavor");
}

double source_norm(const Martingale& f, HardyFlavor flavor, double p, double q) {
  switch (flavor) {
    case HardyFlavor::conditional_square: return hardy_s_norm(f, p, q);
    case HardyFlavor::square: return q_space_norm(f, p, q);
    case HardyFlavor::maximal: return p_space_norm(f, p, q);
  }
  throw std::logic_error("unreachable flavor");
}

Decomposition decompose(const Martingale& f, double p, double q, HardyFlavor flavor, AtomDefinition defn) {
  validate_pq(p, q);
  const FilteredSpace& space = f.space();
  Decomposition d;
  d.space = f.space_ptr();
  d.flavor = flavor;
  d.defn = defn;
  d.p = p;
  d.q = q;
  d.source_norm = source_norm(f, flavor, p, q);

  std::vector<RandomVariable> statistic;
  double scale_exponent = 1.0;  // lambda_k = 2^{k + scale_exponent} c_k
  if (flavor == HardyFlavor::conditional_square) {
    statistic = ladder_statistic(f, LadderKind::conditional_variation);
  } else {
    const auto envelope_flavor =
        flavor == HardyFlavor::square ? EnvelopeFlavor::square_function : EnvelopeFlavor::maximal;
    const PredictorEnvelope beta = minimal_envelope(f, envelope_flavor);
    statistic = ladder_statistic(f, LadderKind::envelope, &beta);
    scale_exponent = 2.0;
  }

  const LadderWindow window = ladder_window(statistic);
  if (window.empty) return d;

  std::vector<StoppingTime> ladder;
  for (int k = window.k_min; k <= window.k_max; ++k) ladder.push_back(first_exceedance(statistic, std::ldexp(1.0, k)));

  for (int k = window.k_min; k < window.k_max; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k - window.k_min);
    const StoppingTime& nu = ladder[idx];
    const StoppingTime& next = ladder[idx + 1];
    const Event support = nu.support();
    const double prob = space.probability(support);

    LadderLevel level{k, support, prob, difference(support, next.support())};
    d.trace.push_back(std::move(level));
    if (prob == 0.0) continue;

    const double lambda = std::ldexp(1.0, k) * std::exp2(scale_exponent) * normaliser(space, support, prob, defn, p, q);
    RandomVariable atom = stopped_terminal(f, next) - stopped_terminal(f, nu);
    atom *= 1.0 / lambda;
    d.triples.push_back(AtomTriple{k, lambda, std::move(atom), nu, flavor, defn});
  }
  return d;
}

AtomReport verify_atom(const FilteredSpace& space, const AtomTriple& triple, double p, double q, double r) {
  validate_pq(p, q);
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (triple.atom.size() != space.size() || triple.nu.size() != space.size()) {
    throw std::invalid_argument("atom lives on a different space");
  }
  AtomReport report;
  const double scale = std::max(1.0, triple.atom.max_abs());

  const auto levels = generated_levels(space, triple.atom);
  for (int n = 0; n <= space.horizon(); ++n) {
    const RandomVariable& a_n = levels[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (triple.nu[i] < n) continue;
      report.vanishing_residual = std::max(report.vanishing_residual, std::abs(a_n[i]));
      if (!approx_equal(a_n[i], 0.0, scale) && report.vanishing) {
        report.vanishing = false;
        report.first_failing_time = n;
      }
    }
  }

  const Event support = triple.nu.support();
  const double prob = space.probability(support);
  const RandomVariable t = atom_statistic(space, triple.atom, triple.flavor);
  report.measured = lr_norm(space, t, r);
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  if (prob == 0.0) {
    report.bound = kInfinity;
  } else if (triple.defn == AtomDefinition::simple) {
    report.bound = std::pow(prob, inv_r - 1.0 / p);
  } else {
    report.bound = std::pow(prob, inv_r) / lpq_norm(space, indicator(support), p, q);
  }
  report.size_ok = approx_leq(report.measured, report.bound);
  report.slack = report.bound - report.measured;
  report.ratio = std::isinf(report.bound) ? 0.0 : report.measured / report.bound;

  const double t_scale = std::max(1.0, t.max_abs());
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!support[i] && !approx_equal(t[i], 0.0, t_scale)) report.support_ok = false;
  }
  return report;
}

RandomVariable reconstruct(const Decomposition& d, int n) {
  if (!d.space) throw std::invalid_argument("decomposition has no space");
  RandomVariable sum = RandomVariable::zeros(d.space->size());
  for (const auto& t : d.triples) sum += conditional_expectation(*d.space, t.atom, n) * t.lambda;
  return sum;
}

double reconstruction_residual(const Decomposition& d, const Martingale& f) {
  double worst = 0.0;
  for (int n = 0; n <= f.horizon(); ++n) {
    worst = std::max(worst, (reconstruct(d, n) - f.level(n)).max_abs());
  }
  return worst;
}

Martingale partial_sum(const Decomposition& d, int l, int m) {
  RandomVariable terminal = RandomVariable::zeros(d.space->size());
  for (const auto& t : d.triples) {
    if (t.k >= l && t.k <= m) terminal += t.atom * t.lambda;
  }
  return Martingale::unchecked(d.space, generated_levels(*d.space, terminal));
}

std::vector<double> window_errors(const Decomposition& d, const Martingale& f) {
  std::vector<double> errors;
  if (d.triples.empty()) {
    errors.push_back(hardy_s_norm(f, d.p, d.q));
    return errors;
  }
  const int first = d.triples.front().k;
  const int last = d.triples.back().k;
  for (int i = 0;; ++i) {
    const int l = first + i;
    const int m = last - i;
    const Martingale partial = partial_sum(d, l, m);
    std::vector<RandomVariable> residual;
    for (int n = 0; n <= f.horizon(); ++n) residual.push_back(f.level(n) - partial.level(n));
    errors.push_back(hardy_s_norm(Martingale::unchecked(f.space_ptr(), std::move(residual)), d.p, d.q));
    if (l > m) break;
  }
  return errors;
}

double aggregate_eta_norm(const Decomposition& d, double eta, double p, double q) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  validate_pq(p, q);
  if (d.triples.empty()) return 0.0;
  const FilteredSpace& space = *d.space;
  RandomVariable weights = RandomVariable::zeros(space.size());
  for (const auto& t : d.triples) {
    const Event support = t.nu.support();
    const double prob = space.probability(support);
    if (prob == 0.0) continue;
    const double c = normaliser(space, support, prob, t.defn, p, q);
    const double w = std::pow(t.lambda / c, eta);
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (support[i]) weights[i] += w;
    }
  }
  return std::pow(lpq_norm(space, weights, p / eta, q / eta), 1.0 / eta);
}

double aggregate_eta_norm(const Decomposition& d, double eta) { return aggregate_eta_norm(d, eta, d.p, d.q); }

double upper_constant(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  return std::pow(std::pow(4.0, eta) / (std::pow(2.0, eta) - 1.0), 1.0 / eta);
}

BoundCertificate certify_bounds(const Martingale& f, const Decomposition& d, const std::vector<double>& eta_grid) {
  BoundCertificate cert;
  cert.source_norm = source_norm(f, d.flavor, d.p, d.q);
  // The envelope ladders use 2^{k+2} weights, one extra factor 2 over the
  // conditional-variation ladder.
  const double flavor_factor = d.flavor == HardyFlavor::conditional_square ? 1.0 : 2.0;
  for (double eta : eta_grid) {
    EtaBound row;
    row.eta = eta;
    row.aggregate = aggregate_eta_norm(d, eta);
    row.constant = upper_constant(eta) * flavor_factor;
    row.upper_budget = row.constant * cert.source_norm;
    row.upper_ok = approx_leq(row.aggregate, row.upper_budget);
    row.lower_ok = approx_leq(cert.source_norm, row.aggregate);
    row.upper_ratio = row.upper_budget > 0.0 ? row.aggregate / row.upper_budget : 0.0;
    row.lower_ratio = row.aggregate > 0.0 ? cert.source_norm / row.aggregate : 0.0;
    if (!row.upper_ok) {
      std::ostringstream msg;
      msg << "upper bound fails at eta=" << eta << ": A=" << row.aggregate << " > " << row.upper_budget;
      cert.failures.push_back(msg.str());
    }
    if (!row.lower_ok) {
      std::ostringstream msg;
      msg << "converse bound fails at eta=" << eta << ": ||f||=" << cert.source_norm << " > A=" << row.aggregate;
      cert.failures.push_back(msg.str());
    }
    cert.rows.push_back(row);
  }
  return cert;
}

}  // namespace amalgam
