#include "amalgam/amalgam_norm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace amalgam {

void validate_pq(double p, double q) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in (0, inf), got " + std::to_string(p));
  if (!(q > 0.0)) throw std::invalid_argument("q must lie in (0, inf], got " + std::to_string(q));
}

void ExponentConfig::validate() const {
  validate_pq(p, q);
  if (!(r > std::max(p, 1.0))) throw std::invalid_argument("r must exceed max(p, 1), got " + std::to_string(r));
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1], got " + std::to_string(eta));
}

namespace {

constexpr double kSmallExponent = 0.1;

double log_sum_exp(const std::vector<double>& logs) {
  double top = -kInfinity;
  for (double l : logs) top = std::max(top, l);
  if (top == -kInfinity) return top;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return top + std::log(acc);
}

double lpq_log_space(const FilteredSpace& space, const RandomVariable& g, double p, double q) {
  // log of each block integral
  std::vector<std::vector<double>> per_block(space.blocks().size());
  for (std::size_t omega = 0; omega < space.size(); ++omega) {
    if (g[omega] == 0.0) continue;
    per_block[space.block_of(omega)].push_back(std::log(space.prob(omega)) + p * std::log(std::abs(g[omega])));
  }
  std::vector<double> block_logs;
  for (const auto& terms : per_block) {
    if (!terms.empty()) block_logs.push_back(log_sum_exp(terms));
  }
  if (block_logs.empty()) return 0.0;
  if (std::isinf(q)) {
    return std::exp(*std::max_element(block_logs.begin(), block_logs.end()) / p);
  }
  for (double& l : block_logs) l *= q / p;
  return std::exp(log_sum_exp(block_logs) / q);
}

}  // namespace

double lpq_norm(const FilteredSpace& space, const RandomVariable& g, double p, double q) {
  validate_pq(p, q);
  if (g.size() != space.size()) throw std::invalid_argument("random variable lives on a different space");
  if (p < kSmallExponent || q < kSmallExponent) return lpq_log_space(space, g, p, q);

  std::vector<double> integrals(space.blocks().size(), 0.0);
  for (std::size_t omega = 0; omega < space.size(); ++omega) {
    if (g[omega] == 0.0) continue;
    integrals[space.block_of(omega)] += space.prob(omega) * std::pow(std::abs(g[omega]), p);
  }
  if (std::isinf(q)) {
    double top = 0.0;
    for (double integral : integrals) top = std::max(top, integral);
    return std::pow(top, 1.0 / p);
  }
  double sum = 0.0;
  for (double integral : integrals) {
    if (integral > 0.0) sum += std::pow(integral, q / p);
  }
  return std::pow(sum, 1.0 / q);
}

double lr_norm(const FilteredSpace& space, const RandomVariable& g, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (g.size() != space.size()) throw std::invalid_argument("random variable lives on a different space");
  if (std::isinf(r)) return g.max_abs();
  double sum = 0.0;
  for (std::size_t omega = 0; omega < space.size(); ++omega) {
    if (g[omega] != 0.0) sum += space.prob(omega) * std::pow(std::abs(g[omega]), r);
  }
  return std::pow(sum, 1.0 / r);
}

double hardy_s_norm(const Martingale& f, double p, double q) {
  return lpq_norm(f.space(), conditional_quadratic_variation(f), p, q);
}

double hardy_S_norm(const Martingale& f, double p, double q) {
  return lpq_norm(f.space(), quadratic_variation(f), p, q);
}

double hardy_star_norm(const Martingale& f, double p, double q) {
  return lpq_norm(f.space(), maximal_function(f), p, q);
}

double q_space_norm(const Martingale& f, double p, double q) {
  return lpq_norm(f.space(), minimal_envelope(f, EnvelopeFlavor::square_function).terminal(), p, q);
}

double p_space_norm(const Martingale& f, double p, double q) {
  return lpq_norm(f.space(), minimal_envelope(f, EnvelopeFlavor::maximal).terminal(), p, q);
}

HardyNorms all_norms(const Martingale& f, double p, double q) {
  return {hardy_s_norm(f, p, q), hardy_S_norm(f, p, q), hardy_star_norm(f, p, q), q_space_norm(f, p, q),
          p_space_norm(f, p, q)};
}

}  // namespace amalgam
