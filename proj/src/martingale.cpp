#include "amalgam/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "amalgam/tolerance.hpp"

namespace amalgam {

namespace {

double level_scale(const std::vector<RandomVariable>& levels) {
  double scale = 1.0;
  for (const auto& l : levels) scale = std::max(scale, l.max_abs());
  return scale;
}

// Running sums of squared differences (conditional or not) for n = 0..N.
std::vector<RandomVariable> cumulative_squares(const Martingale& f, bool conditional) {
  const FilteredSpace& space = f.space();
  const auto d = differences(f);
  std::vector<RandomVariable> sums;
  sums.reserve(d.size());
  sums.push_back(RandomVariable::zeros(space.size()));
  for (int n = 1; n <= f.horizon(); ++n) {
    RandomVariable sq = hadamard(d[static_cast<std::size_t>(n)], d[static_cast<std::size_t>(n)]);
    if (conditional) sq = conditional_expectation(space, sq, n - 1);
    sums.push_back(sums.back() + sq);
  }
  return sums;
}

RandomVariable sqrt_of(RandomVariable x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sqrt(x[i]);
  return x;
}

void require_time(const Martingale& f, int n) {
  if (n < 0 || n > f.horizon()) throw std::out_of_range("time index " + std::to_string(n) + " out of range");
}

}  // namespace

Martingale::Martingale(SpacePtr space, std::vector<RandomVariable> levels)
    : Martingale(std::move(space), std::move(levels), true) {}

Martingale::Martingale(SpacePtr space, std::vector<RandomVariable> levels, bool validate)
    : space_(std::move(space)), levels_(std::move(levels)) {
  if (!space_) throw std::invalid_argument("martingale needs a space");
  if (static_cast<int>(levels_.size()) != space_->horizon() + 1) {
    throw std::invalid_argument("martingale needs exactly N+1 levels");
  }
  for (const auto& l : levels_) {
    if (l.size() != space_->size()) throw std::invalid_argument("martingale level lives on a different space");
  }
  if (!validate) return;

  const double scale = level_scale(levels_);
  for (std::size_t i = 0; i < space_->size(); ++i) {
    if (!approx_equal(levels_.front()[i], 0.0, scale)) throw std::invalid_argument("martingale must start at f_0 = 0");
  }
  for (int n = 0; n <= horizon(); ++n) {
    if (!is_measurable(*space_, level(n), n)) {
      throw std::invalid_argument("level " + std::to_string(n) + " is not F_n-measurable");
    }
  }
  for (int n = 0; n < horizon(); ++n) {
    const RandomVariable e = conditional_expectation(*space_, level(n + 1), n);
    for (std::size_t i = 0; i < space_->size(); ++i) {
      if (!approx_equal(e[i], level(n)[i], scale)) {
        throw std::invalid_argument("martingale property fails between levels " + std::to_string(n) + " and " +
                                    std::to_string(n + 1));
      }
    }
  }
}

Martingale Martingale::from_terminal(SpacePtr space, const RandomVariable& x) {
  if (!space) throw std::invalid_argument("martingale needs a space");
  const double mean = space->expectation(x);
  if (!approx_equal(mean, 0.0, std::max(1.0, x.max_abs()))) {
    throw std::invalid_argument("terminal value must have zero mean (got " + std::to_string(mean) + ")");
  }
  auto levels = generated_levels(*space, x);
  levels.front() = RandomVariable::zeros(space->size());
  // Cells that do not split keep the parent value, so f_0 = 0 propagates.
  for (int n = 1; n <= space->horizon(); ++n) {
    for (std::size_t c = 0; c < space->level(n - 1).size(); ++c) {
      const auto& kids = space->children(n - 1, c);
      if (kids.size() != 1) continue;
      const std::size_t w0 = space->level(n - 1)[c].front();
      for (std::size_t w : space->level(n)[kids.front()]) {
        levels[static_cast<std::size_t>(n)][w] = levels[static_cast<std::size_t>(n) - 1][w0];
      }
    }
  }
  return Martingale(std::move(space), std::move(levels), false);
}

Martingale Martingale::unchecked(SpacePtr space, std::vector<RandomVariable> levels) {
  return Martingale(std::move(space), std::move(levels), false);
}

Martingale Martingale::zero(SpacePtr space) {
  const std::size_t m = space->size();
  const int n = space->horizon();
  return unchecked(std::move(space), std::vector<RandomVariable>(static_cast<std::size_t>(n + 1), RandomVariable::zeros(m)));
}

std::vector<RandomVariable> generated_levels(const FilteredSpace& space, const RandomVariable& x) {
  const int horizon = space.horizon();
  // Cell values per level, averaged bottom-up so that a cell with a single
  // child inherits its value exactly.
  std::vector<std::vector<double>> cell_value(static_cast<std::size_t>(horizon + 1));
  const RandomVariable last = conditional_expectation(space, x, horizon);
  auto& bottom = cell_value.back();
  bottom.resize(space.level(horizon).size());
  for (std::size_t c = 0; c < bottom.size(); ++c) bottom[c] = last[space.level(horizon)[c].front()];
  for (int n = horizon - 1; n >= 0; --n) {
    auto& values = cell_value[static_cast<std::size_t>(n)];
    const auto& below = cell_value[static_cast<std::size_t>(n) + 1];
    values.resize(space.level(n).size());
    for (std::size_t c = 0; c < values.size(); ++c) {
      const auto& kids = space.children(n, c);
      if (kids.size() == 1) {
        values[c] = below[kids.front()];
        continue;
      }
      double mass = 0.0;
      double sum = 0.0;
      for (std::size_t k : kids) {
        mass += space.cell_prob(n + 1, k);
        sum += space.cell_prob(n + 1, k) * below[k];
      }
      values[c] = sum / mass;
    }
  }
  std::vector<RandomVariable> levels;
  levels.reserve(static_cast<std::size_t>(horizon + 1));
  for (int n = 0; n <= horizon; ++n) {
    RandomVariable level = RandomVariable::zeros(space.size());
    for (std::size_t w = 0; w < space.size(); ++w) level[w] = cell_value[static_cast<std::size_t>(n)][space.cell_of(n, w)];
    levels.push_back(std::move(level));
  }
  return levels;
}

std::vector<RandomVariable> differences(const Martingale& f) {
  std::vector<RandomVariable> d;
  d.reserve(f.levels().size());
  d.push_back(RandomVariable::zeros(f.space().size()));
  for (int n = 1; n <= f.horizon(); ++n) d.push_back(f.level(n) - f.level(n - 1));
  return d;
}

RandomVariable partial_quadratic_variation(const Martingale& f, int n) {
  require_time(f, n);
  return sqrt_of(cumulative_squares(f, false)[static_cast<std::size_t>(n)]);
}

RandomVariable partial_conditional_quadratic_variation(const Martingale& f, int n) {
  require_time(f, n);
  return sqrt_of(cumulative_squares(f, true)[static_cast<std::size_t>(n)]);
}

RandomVariable quadratic_variation(const Martingale& f) { return sqrt_of(cumulative_squares(f, false).back()); }

RandomVariable conditional_quadratic_variation(const Martingale& f) {
  return sqrt_of(cumulative_squares(f, true).back());
}

RandomVariable maximal_function(const Martingale& f) {
  RandomVariable out = RandomVariable::zeros(f.space().size());
  for (const auto& level : f.levels()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(level[i]));
  }
  return out;
}

Martingale stop(const Martingale& f, const StoppingTime& nu) {
  if (nu.size() != f.space().size()) throw std::invalid_argument("stopping time lives on a different space");
  std::vector<RandomVariable> levels;
  levels.reserve(f.levels().size());
  for (int n = 0; n <= f.horizon(); ++n) {
    RandomVariable g = RandomVariable::zeros(f.space().size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = f.level(std::min(n, nu[i]))[i];
    levels.push_back(std::move(g));
  }
  return Martingale::unchecked(f.space_ptr(), std::move(levels));
}

namespace {

std::vector<RandomVariable> dominated_statistic(const Martingale& f, EnvelopeFlavor flavor) {
  // Entry n is T_n for n = 0..N.
  if (flavor == EnvelopeFlavor::square_function) {
    auto sums = cumulative_squares(f, false);
    for (auto& s : sums) s = sqrt_of(std::move(s));
    return sums;
  }
  std::vector<RandomVariable> out;
  for (const auto& level : f.levels()) out.push_back(abs(level));
  return out;
}

}  // namespace

bool is_admissible_envelope(const Martingale& f, const PredictorEnvelope& beta) {
  const FilteredSpace& space = f.space();
  if (static_cast<int>(beta.levels.size()) != f.horizon() + 1) return false;
  const auto t = dominated_statistic(f, beta.flavor);
  const double scale = std::max(1.0, level_scale(beta.levels));
  for (int n = 0; n <= f.horizon(); ++n) {
    const RandomVariable& b = beta.levels[static_cast<std::size_t>(n)];
    if (b.size() != space.size() || !is_measurable(space, b, n)) return false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] < -tolerance() * scale) return false;
      if (n > 0 && !approx_leq(beta.levels[static_cast<std::size_t>(n - 1)][i], b[i])) return false;
      if (n > 0 && !approx_leq(t[static_cast<std::size_t>(n)][i], beta.levels[static_cast<std::size_t>(n - 1)][i])) {
        return false;
      }
    }
  }
  return true;
}

PredictorEnvelope minimal_envelope(const Martingale& f, EnvelopeFlavor flavor) {
  const FilteredSpace& space = f.space();
  const auto t = dominated_statistic(f, flavor);
  PredictorEnvelope beta{flavor, {}};
  RandomVariable previous = RandomVariable::zeros(space.size());
  for (int n = 0; n <= f.horizon(); ++n) {
    const std::size_t next = static_cast<std::size_t>(std::min(n + 1, f.horizon()));
    RandomVariable b = conditional_ess_sup(space, t[next], n);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::max(b[i], previous[i]);
    previous = b;
    beta.levels.push_back(std::move(b));
  }
  return beta;
}

std::vector<RandomVariable> ladder_statistic(const Martingale& f, LadderKind kind, const PredictorEnvelope* beta) {
  if (kind == LadderKind::envelope) {
    if (beta == nullptr) throw std::invalid_argument("envelope ladder needs a predictor envelope");
    if (static_cast<int>(beta->levels.size()) != f.horizon() + 1) {
      throw std::invalid_argument("envelope has the wrong number of levels");
    }
    return beta->levels;
  }
  auto sums = cumulative_squares(f, true);
  std::vector<RandomVariable> out;
  out.reserve(sums.size());
  for (int n = 0; n <= f.horizon(); ++n) {
    out.push_back(sqrt_of(sums[static_cast<std::size_t>(std::min(n + 1, f.horizon()))]));
  }
  return out;
}

StoppingTime first_exceedance(const std::vector<RandomVariable>& statistic, double threshold) {
  if (statistic.empty()) throw std::invalid_argument("empty ladder statistic");
  std::vector<int> times(statistic.front().size(), StoppingTime::never);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t n = 0; n < statistic.size(); ++n) {
      if (statistic[n][i] > threshold) {
        times[i] = static_cast<int>(n);
        break;
      }
    }
  }
  return StoppingTime::unchecked(std::move(times));
}

StoppingTime ladder_stopping_time(const Martingale& f, int k, LadderKind kind, const PredictorEnvelope* beta) {
  return first_exceedance(ladder_statistic(f, kind, beta), std::ldexp(1.0, k));
}

LadderWindow ladder_window(const std::vector<RandomVariable>& statistic) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& level : statistic) {
    for (double v : level.values()) {
      if (v > 0.0) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  LadderWindow w;
  if (hi == 0.0) return w;
  w.empty = false;
  w.k_min = std::ilogb(lo) - 1;
  const int e = std::ilogb(hi);
  w.k_max = std::ldexp(1.0, e) == hi ? e : e + 1;
  return w;
}

}  // namespace amalgam
