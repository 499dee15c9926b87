#include "amalgam/filtered_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "amalgam/tolerance.hpp"

namespace amalgam {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> index_partition(const Partition& partition, std::size_t size,
                                         const std::string& what, bool allow_empty_cells) {
  std::vector<std::size_t> index(size, kUnassigned);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (partition[c].empty() && !allow_empty_cells) {
      throw std::invalid_argument(what + ": cell " + std::to_string(c) + " is empty");
    }
    for (std::size_t omega : partition[c]) {
      if (omega >= size) {
        throw std::invalid_argument(what + ": outcome index " + std::to_string(omega) + " out of range");
      }
      if (index[omega] != kUnassigned) {
        throw std::invalid_argument(what + ": outcome " + std::to_string(omega) + " appears twice");
      }
      index[omega] = c;
    }
  }
  for (std::size_t omega = 0; omega < size; ++omega) {
    if (index[omega] == kUnassigned) {
      throw std::invalid_argument(what + ": outcome " + std::to_string(omega) + " is not covered");
    }
  }
  return index;
}

void require_level(const FilteredSpace& space, int n) {
  if (n < 0 || n > space.horizon()) {
    throw std::out_of_range("time index " + std::to_string(n) + " outside [0, " +
                            std::to_string(space.horizon()) + "]");
  }
}

}  // namespace

FilteredSpace::FilteredSpace(std::vector<std::string> outcomes, std::vector<double> prob,
                             std::vector<Partition> filtration, Partition blocks)
    : outcomes_(std::move(outcomes)),
      prob_(std::move(prob)),
      filtration_(std::move(filtration)),
      blocks_(std::move(blocks)) {
  const std::size_t m = prob_.size();
  if (m == 0) throw std::invalid_argument("space needs at least one outcome");
  if (outcomes_.empty()) {
    outcomes_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) outcomes_.push_back("w" + std::to_string(i + 1));
  }
  if (outcomes_.size() != m) throw std::invalid_argument("outcome list and probability list differ in length");
  if (std::set<std::string>(outcomes_.begin(), outcomes_.end()).size() != m) {
    throw std::invalid_argument("outcome identifiers must be distinct");
  }

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(prob_[i]) || prob_[i] <= 0.0) {
      throw std::invalid_argument("probability of outcome " + outcomes_[i] + " must be strictly positive");
    }
    total += prob_[i];
  }
  if (!approx_equal(total, 1.0)) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
  }

  if (filtration_.empty()) throw std::invalid_argument("filtration needs at least the trivial level");
  if (filtration_.front().size() != 1 || filtration_.front().front().size() != m) {
    throw std::invalid_argument("level 0 of the filtration must be the trivial partition");
  }

  const std::size_t levels = filtration_.size();
  cell_index_.resize(levels);
  cell_prob_.resize(levels);
  children_.resize(levels);
  for (std::size_t n = 0; n < levels; ++n) {
    const std::string what = "filtration level " + std::to_string(n);
    cell_index_[n] = index_partition(filtration_[n], m, what, false);
    cell_prob_[n].resize(filtration_[n].size());
    for (std::size_t c = 0; c < filtration_[n].size(); ++c) {
      double mass = 0.0;
      for (std::size_t omega : filtration_[n][c]) mass += prob_[omega];
      cell_prob_[n][c] = mass;
    }
  }

  regularity_ = 1.0;
  for (std::size_t n = 0; n < levels; ++n) {
    children_[n].resize(filtration_[n].size());
    if (n + 1 == levels) continue;
    for (std::size_t c = 0; c < filtration_[n + 1].size(); ++c) {
      const Cell& cell = filtration_[n + 1][c];
      const std::size_t parent = cell_index_[n][cell.front()];
      for (std::size_t omega : cell) {
        if (cell_index_[n][omega] != parent) {
          throw std::invalid_argument("filtration level " + std::to_string(n + 1) + " does not refine level " +
                                      std::to_string(n));
        }
      }
      children_[n][parent].push_back(c);
      regularity_ = std::max(regularity_, cell_prob_[n][parent] / cell_prob_[n + 1][c]);
    }
  }

  block_index_ = index_partition(blocks_, m, "blocks", true);
}

bool FilteredSpace::blocks_measurable_at(int n) const {
  require_level(*this, n);
  for (const Cell& cell : level(n)) {
    const std::size_t b = block_index_[cell.front()];
    for (std::size_t omega : cell) {
      if (block_index_[omega] != b) return false;
    }
  }
  return true;
}

double FilteredSpace::probability(const Event& event) const {
  if (event.size() != size()) throw std::invalid_argument("event lives on a different space");
  double p = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (event[i]) p += prob_[i];
  }
  return p;
}

double FilteredSpace::expectation(const RandomVariable& x) const {
  if (x.size() != size()) throw std::invalid_argument("random variable lives on a different space");
  double e = 0.0;
  for (std::size_t i = 0; i < size(); ++i) e += prob_[i] * x[i];
  return e;
}

SpacePtr dyadic_space(int depth) {
  if (depth < 0 || depth > 12) throw std::invalid_argument("dyadic depth must lie in [0, 12]");
  const std::size_t m = std::size_t{1} << depth;
  std::vector<Partition> filtration;
  for (int n = 0; n <= depth; ++n) {
    const std::size_t width = m >> n;
    Partition level;
    for (std::size_t start = 0; start < m; start += width) {
      Cell cell;
      for (std::size_t i = start; i < start + width; ++i) cell.push_back(i);
      level.push_back(std::move(cell));
    }
    filtration.push_back(std::move(level));
  }
  Partition single{filtration.front().front()};
  return make_space(std::vector<std::string>{}, std::vector<double>(m, 1.0 / static_cast<double>(m)),
                    std::move(filtration), std::move(single));
}

SpacePtr with_blocks(const FilteredSpace& space, Partition blocks) {
  return make_space(space.outcomes(), std::vector<double>(space.prob().begin(), space.prob().end()),
                    space.filtration(), std::move(blocks));
}

Partition level_blocks(const FilteredSpace& space, int n) {
  require_level(space, n);
  return space.level(n);
}

RandomVariable conditional_expectation(const FilteredSpace& space, const RandomVariable& x, int n) {
  require_level(space, n);
  if (x.size() != space.size()) throw std::invalid_argument("random variable lives on a different space");
  RandomVariable out = RandomVariable::zeros(space.size());
  const Partition& cells = space.level(n);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double mass = 0.0;
    for (std::size_t omega : cells[c]) mass += space.prob(omega) * x[omega];
    const double value = mass / space.cell_prob(n, c);
    for (std::size_t omega : cells[c]) out[omega] = value;
  }
  return out;
}

RandomVariable conditional_ess_sup(const FilteredSpace& space, const RandomVariable& x, int n) {
  require_level(space, n);
  if (x.size() != space.size()) throw std::invalid_argument("random variable lives on a different space");
  RandomVariable out = RandomVariable::zeros(space.size());
  for (const Cell& cell : space.level(n)) {
    double value = -std::numeric_limits<double>::infinity();
    for (std::size_t omega : cell) value = std::max(value, x[omega]);
    for (std::size_t omega : cell) out[omega] = value;
  }
  return out;
}

bool is_measurable(const FilteredSpace& space, const RandomVariable& x, int n) {
  require_level(space, n);
  if (x.size() != space.size()) return false;
  for (const Cell& cell : space.level(n)) {
    const double first = x[cell.front()];
    for (std::size_t omega : cell) {
      const double scale = std::max({1.0, std::abs(first), std::abs(x[omega])});
      if (!approx_equal(x[omega], first, scale)) return false;
    }
  }
  return true;
}

double regularity_constant(const FilteredSpace& space) { return space.regularity_constant(); }

}  // namespace amalgam
