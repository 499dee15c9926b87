#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <random>
#include <set>
#include <vector>

#include "amalgam/filtered_space.hpp"
#include "amalgam/martingale.hpp"

namespace amalgam::testing {

/// Four equally likely outcomes, Pi_1 = {{w1,w2},{w3,w4}}, one block.
inline SpacePtr worked_space() {
  return make_space(std::vector<std::string>{"w1", "w2", "w3", "w4"}, std::vector<double>{0.25, 0.25, 0.25, 0.25},
                    std::vector<Partition>{{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}},
                    Partition{{0, 1, 2, 3}});
}

inline Martingale worked_martingale() {
  return Martingale::from_terminal(worked_space(), RandomVariable({2.0, 0.0, -1.0, -1.0}));
}

/// Cell of Pi_n holding omega, found by scanning the partition.
inline const Cell& cell_containing(const FilteredSpace& space, int n, std::size_t omega) {
  for (const Cell& c : space.level(n)) {
    for (std::size_t w : c) {
      if (w == omega) return c;
    }
  }
  throw std::logic_error("outcome missing from partition");
}

/// E_n X by direct per-cell averaging.
inline RandomVariable average_oracle(const FilteredSpace& space, const RandomVariable& x, int n) {
  RandomVariable out = RandomVariable::zeros(space.size());
  for (std::size_t w = 0; w < space.size(); ++w) {
    double mass = 0.0;
    double sum = 0.0;
    for (std::size_t v : cell_containing(space, n, w)) {
      mass += space.prob(v);
      sum += space.prob(v) * x[v];
    }
    out[w] = sum / mass;
  }
  return out;
}

/// Amalgam norm straight from its definition, in linear space.
inline double lpq_oracle(const FilteredSpace& space, const RandomVariable& g, double p, double q) {
  std::vector<double> local;
  for (const Cell& block : space.blocks()) {
    double integral = 0.0;
    for (std::size_t w : block) integral += std::pow(std::abs(g[w]), p) * space.prob(w);
    local.push_back(std::pow(integral, 1.0 / p));
  }
  if (std::isinf(q)) {
    double best = 0.0;
    for (double x : local) best = std::max(best, x);
    return best;
  }
  double sum = 0.0;
  for (double x : local) sum += std::pow(x, q);
  return std::pow(sum, 1.0 / q);
}

/// Every map omega -> {0..N, never} whose level sets are unions of cells,
/// by exhaustive search over all (N+2)^M tables.
inline std::vector<std::vector<int>> brute_force_stopping_times(const FilteredSpace& space) {
  const int n_max = space.horizon();
  const std::size_t m = space.size();
  std::vector<int> values;
  for (int n = 0; n <= n_max; ++n) values.push_back(n);
  values.push_back(StoppingTime::never);
  std::vector<std::vector<int>> out;
  std::vector<std::size_t> digit(m, 0);
  while (true) {
    std::vector<int> times(m);
    for (std::size_t w = 0; w < m; ++w) times[w] = values[digit[w]];
    bool ok = true;
    for (int n = 0; n <= n_max && ok; ++n) {
      for (std::size_t w = 0; w < m && ok; ++w) {
        const bool at_n = times[w] == n;
        for (std::size_t v : cell_containing(space, n, w)) {
          if ((times[v] == n) != at_n) ok = false;
        }
      }
    }
    if (ok) out.push_back(times);
    std::size_t i = 0;
    while (i < m && ++digit[i] == values.size()) digit[i++] = 0;
    if (i == m) break;
  }
  return out;
}

/// Random tree of the given depth with branching in [1, max_branching] and
/// random masses; blocks are drawn at random.
inline SpacePtr random_space(std::mt19937_64& rng, int depth, int max_branching, int block_count) {
  std::uniform_int_distribution<int> branch(1, max_branching);
  std::uniform_real_distribution<double> share(0.2, 1.0);
  std::vector<std::vector<int>> paths{{}};
  std::vector<double> prob{1.0};
  for (int n = 0; n < depth; ++n) {
    std::vector<std::vector<int>> next_paths;
    std::vector<double> next_prob;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const int b = branch(rng);
      std::vector<double> w(static_cast<std::size_t>(b));
      double total = 0.0;
      for (double& x : w) total += (x = share(rng));
      for (int c = 0; c < b; ++c) {
        auto path = paths[i];
        path.push_back(c);
        next_paths.push_back(std::move(path));
        next_prob.push_back(prob[i] * w[static_cast<std::size_t>(c)] / total);
      }
    }
    paths = std::move(next_paths);
    prob = std::move(next_prob);
  }
  std::vector<Partition> filtration;
  for (int n = 0; n <= depth; ++n) {
    std::map<std::vector<int>, Cell> cells;
    for (std::size_t w = 0; w < paths.size(); ++w) {
      cells[std::vector<int>(paths[w].begin(), paths[w].begin() + n)].push_back(w);
    }
    Partition level;
    for (auto& [key, cell] : cells) level.push_back(std::move(cell));
    filtration.push_back(std::move(level));
  }
  std::uniform_int_distribution<int> pick(0, std::max(0, block_count - 1));
  std::vector<Cell> blocks(static_cast<std::size_t>(std::max(1, block_count)));
  for (std::size_t w = 0; w < paths.size(); ++w) blocks[static_cast<std::size_t>(pick(rng))].push_back(w);
  std::erase_if(blocks, [](const Cell& c) { return c.empty(); });
  return make_space(std::vector<std::string>{}, std::move(prob), std::move(filtration), std::move(blocks));
}

inline Martingale random_martingale(std::mt19937_64& rng, const SpacePtr& space) {
  std::normal_distribution<double> normal;
  RandomVariable x = RandomVariable::zeros(space->size());
  double mean = 0.0;
  for (std::size_t w = 0; w < x.size(); ++w) {
    x[w] = normal(rng);
    mean += space->prob(w) * x[w];
  }
  for (std::size_t w = 0; w < x.size(); ++w) x[w] -= mean;
  return Martingale::from_terminal(space, x);
}

inline double max_abs_diff(const RandomVariable& a, const RandomVariable& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

}  // namespace amalgam::testing
