#include "amalgam/duality.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "amalgam/tolerance.hpp"

namespace amalgam {

double phi(const FilteredSpace& space, const Event& set, double p, double q) {
  const double prob = space.probability(set);
  if (prob <= 0.0) throw std::invalid_argument("phi is undefined on null sets");
  return lpq_norm(space, indicator(set), p, q) / prob;
}

std::string to_string(CampanatoMode mode) { return mode == CampanatoMode::exact ? "exact" : "heuristic"; }

CampanatoMode parse_mode(const std::string& text) {
  if (text == "exact") return CampanatoMode::exact;
  if (text == "heuristic") return CampanatoMode::heuristic;
  throw std::invalid_argument("unknown mode '" + text + "' (expected exact or heuristic)");
}

namespace {

void require_zero_mean(const FilteredSpace& space, const RandomVariable& g) {
  if (g.size() != space.size()) throw std::invalid_argument("g lives on a different space");
  if (!approx_equal(space.expectation(g), 0.0, std::max(1.0, g.max_abs()))) {
    throw std::invalid_argument("g must have zero mean");
  }
}

// int_B |g - g^nu|^2 dP.
double oscillation(const FilteredSpace& space, const RandomVariable& g, const std::vector<RandomVariable>& g_levels,
                   const StoppingTime& nu) {
  double sum = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!nu.stops(i)) continue;
    const double diff = g[i] - g_levels[static_cast<std::size_t>(nu[i])][i];
    sum += space.prob(i) * diff * diff;
  }
  return sum;
}

void append_ladders(const std::vector<RandomVariable>& statistic, std::vector<StoppingTime>& out) {
  const LadderWindow w = ladder_window(statistic);
  if (w.empty) return;
  for (int k = w.k_min; k <= w.k_max; ++k) out.push_back(first_exceedance(statistic, std::ldexp(1.0, k)));
}

struct Best {
  double value = -1.0;
  StoppingTime nu;
  std::uint64_t examined = 0;

  void offer(double v, const StoppingTime& candidate) {
    ++examined;
    if (v > value || (v == value && candidate < nu)) {
      value = v;
      nu = candidate;
    }
  }
};

}  // namespace

double campanato_term(const FilteredSpace& space, const RandomVariable& g, const std::vector<RandomVariable>& g_levels,
                      const StoppingTime& nu, double p, double q) {
  const Event support = nu.support();
  const double prob = space.probability(support);
  if (prob <= 0.0) throw std::invalid_argument("stopping time never stops");
  return std::sqrt(oscillation(space, g, g_levels, nu) / prob) / phi(space, support, p, q);
}

std::vector<StoppingTime> heuristic_stopping_times(const Martingale& g_martingale) {
  const FilteredSpace& space = g_martingale.space();
  std::vector<StoppingTime> out;
  append_ladders(ladder_statistic(g_martingale, LadderKind::conditional_variation), out);
  for (EnvelopeFlavor flavor : {EnvelopeFlavor::square_function, EnvelopeFlavor::maximal}) {
    const PredictorEnvelope beta = minimal_envelope(g_martingale, flavor);
    append_ladders(ladder_statistic(g_martingale, LadderKind::envelope, &beta), out);
  }
  for (int n = 0; n <= space.horizon(); ++n) {
    for (const Cell& cell : space.level(n)) {
      std::vector<int> times(space.size(), StoppingTime::never);
      for (std::size_t omega : cell) times[omega] = n;
      out.push_back(StoppingTime::unchecked(std::move(times)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CampanatoResult campanato_norm(const FilteredSpace& space, const RandomVariable& g, double p, double q,
                               CampanatoMode mode, std::uint64_t cap,
                               const std::vector<StoppingTime>& extra_candidates) {
  validate_pq(p, q);
  require_zero_mean(space, g);
  const std::vector<RandomVariable> g_levels = generated_levels(space, g);

  Best best;
  auto consider = [&](const StoppingTime& nu) {
    const Event support = nu.support();
    const double prob = space.probability(support);
    if (prob <= 0.0) return;
    const double value = std::sqrt(oscillation(space, g, g_levels, nu) / prob) / phi(space, support, p, q);
    best.offer(value, nu);
  };

  CampanatoResult result;
  result.mode = mode;
  bool done = false;
  if (mode == CampanatoMode::exact) done = for_each_stopping_time(space, cap, consider);
  if (!done) {
    result.mode = CampanatoMode::heuristic;
    auto levels = g_levels;
    levels.front() = RandomVariable::zeros(space.size());
    const Martingale gm = Martingale::unchecked(SpacePtr(SpacePtr{}, &space), std::move(levels));
    for (const auto& nu : heuristic_stopping_times(gm)) consider(nu);
  }
  for (const auto& nu : extra_candidates) {
    if (nu.size() != space.size()) throw std::invalid_argument("candidate stopping time lives on a different space");
    consider(nu);
  }
  result.norm_value = std::max(0.0, best.value);
  result.attaining_nu = best.nu;
  result.candidates_examined = best.examined;
  return result;
}

CampanatoResult campanato_norm(const SpacePtr& space, const RandomVariable& g, double p, double q,
                               CampanatoMode mode, std::uint64_t cap,
                               const std::vector<StoppingTime>& extra_candidates) {
  return campanato_norm(*space, g, p, q, mode, cap, extra_candidates);
}

double pairing(const Martingale& f, const RandomVariable& g) {
  if (g.size() != f.space().size()) throw std::invalid_argument("g lives on a different space");
  return f.space().expectation(hadamard(f.terminal(), g));
}

DualityCertificate certify_duality(const Martingale& f, const RandomVariable& g, double p, double q,
                                   CampanatoMode mode, double eta, std::uint64_t cap) {
  if (!(p > 0.0 && p <= q && q <= 1.0)) {
    throw std::invalid_argument("duality needs 0 < p <= q <= 1");
  }
  const FilteredSpace& space = f.space();
  require_zero_mean(space, g);

  DualityCertificate cert;
  cert.p = p;
  cert.q = q;
  cert.eta = eta;

  const Decomposition d = decompose(f, p, q, HardyFlavor::conditional_square, AtomDefinition::simple);
  std::vector<StoppingTime> ladder;
  for (const auto& t : d.triples) ladder.push_back(t.nu);
  cert.campanato = campanato_norm(space, g, p, q, mode, cap, ladder);
  const double g_norm = cert.campanato.norm_value;

  const std::vector<RandomVariable> g_levels = generated_levels(space, g);
  cert.pairing_abs = std::abs(pairing(f, g));

  double block_sum = 0.0;
  for (const auto& t : d.triples) {
    cert.atomwise_bound += t.lambda * lr_norm(space, t.atom, 2.0) * std::sqrt(oscillation(space, g, g_levels, t.nu));
    const Event support = t.nu.support();
    const double prob = space.probability(support);
    block_sum += lpq_norm(space, indicator(support) * (t.lambda / std::pow(prob, 1.0 / p)), p, q);
  }
  cert.block_sum_bound = g_norm * block_sum;
  cert.aggregate_bound = g_norm * aggregate_eta_norm(d, eta);
  cert.hardy_norm = d.source_norm;
  cert.constant = upper_constant(eta);
  cert.budget = cert.constant * cert.hardy_norm * g_norm;

  const std::pair<const char*, std::pair<double, double>> links[] = {
      {"|E[fg]| <= atom-wise bound", {cert.pairing_abs, cert.atomwise_bound}},
      {"atom-wise bound <= block sum", {cert.atomwise_bound, cert.block_sum_bound}},
      {"block sum <= aggregate", {cert.block_sum_bound, cert.aggregate_bound}},
      {"aggregate <= budget", {cert.aggregate_bound, cert.budget}},
  };
  for (const auto& [name, values] : links) {
    if (!approx_leq(values.first, values.second)) {
      std::ostringstream msg;
      msg << name << " fails: " << values.first << " > " << values.second;
      cert.failures.push_back(msg.str());
    }
  }
  return cert;
}

RandomVariable representer(const FilteredSpace& space, const std::vector<RandomVariable>& basis,
                           const std::vector<double>& values) {
  if (basis.size() != values.size()) throw std::invalid_argument("one functional value is needed per basis element");
  const auto m = static_cast<Eigen::Index>(space.size());
  const auto rows = static_cast<Eigen::Index>(basis.size()) + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (Eigen::Index j = 0; j < m; ++j) a(0, j) = space.prob(static_cast<std::size_t>(j));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const RandomVariable& x = basis[i];
    if (x.size() != space.size()) throw std::invalid_argument("basis element lives on a different space");
    if (!approx_equal(space.expectation(x), 0.0, std::max(1.0, x.max_abs()))) {
      throw std::invalid_argument("basis element " + std::to_string(i) + " is not zero-mean");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      a(static_cast<Eigen::Index>(i) + 1, j) = space.prob(static_cast<std::size_t>(j)) * x[static_cast<std::size_t>(j)];
    }
    b(static_cast<Eigen::Index>(i) + 1) = values[i];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < m) throw std::invalid_argument("functional values leave the representer undetermined");
  const Eigen::VectorXd solution = qr.solve(b);
  const double residual = (a * solution - b).norm();
  if (residual > 1e-9 * std::max(1.0, b.norm())) {
    throw std::invalid_argument("functional values are inconsistent");
  }
  return RandomVariable(std::vector<double>(solution.data(), solution.data() + solution.size()));
}

ReverseMinkowskiReport reverse_minkowski_check(const FilteredSpace& space, const std::vector<RandomVariable>& fs,
                                               double p, double q) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("reverse Minkowski needs 0 < p < 1");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("reverse Minkowski needs 0 < q <= 1");
  ReverseMinkowskiReport report;
  RandomVariable total = RandomVariable::zeros(space.size());
  for (const auto& f : fs) {
    report.left += lpq_norm(space, f, p, q);
    total += abs(f);
  }
  report.right = lpq_norm(space, total, p, q);
  report.slack = report.right - report.left;
  report.holds = approx_leq(report.left, report.right);
  return report;
}

}  // namespace amalgam
