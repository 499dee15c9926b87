#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "amalgam/random_variable.hpp"

namespace amalgam {

/// A cell is a list of outcome indices; a partition is a list of cells.
using Cell = std::vector<std::size_t>;
using Partition = std::vector<Cell>;

/// Finite probability space with a refining partition filtration
/// Pi_0 = {Omega}, Pi_1, ..., Pi_N and a block partition {Omega_j} used by
/// the amalgam norm.
///
/// Immutable after construction. The constructor validates every structural
/// invariant and throws std::invalid_argument on the first violation.
class FilteredSpace {
 public:
  FilteredSpace(std::vector<std::string> outcomes, std::vector<double> prob,
                std::vector<Partition> filtration, Partition blocks);

  std::size_t size() const { return prob_.size(); }
  /// Final time index N.
  int horizon() const { return static_cast<int>(filtration_.size()) - 1; }

  const std::vector<std::string>& outcomes() const { return outcomes_; }
  std::span<const double> prob() const { return prob_; }
  double prob(std::size_t omega) const { return prob_[omega]; }

  const Partition& level(int n) const { return filtration_.at(static_cast<std::size_t>(n)); }
  const std::vector<Partition>& filtration() const { return filtration_; }
  std::size_t cell_of(int n, std::size_t omega) const { return cell_index_[static_cast<std::size_t>(n)][omega]; }
  double cell_prob(int n, std::size_t cell) const { return cell_prob_[static_cast<std::size_t>(n)][cell]; }
  /// Cells of Pi_{n+1} contained in cell `cell` of Pi_n.
  const std::vector<std::size_t>& children(int n, std::size_t cell) const {
    return children_[static_cast<std::size_t>(n)][cell];
  }

  const Partition& blocks() const { return blocks_; }
  std::size_t block_of(std::size_t omega) const { return block_index_[omega]; }

  /// Smallest R with P(parent) <= R * P(child) over every split.
  double regularity_constant() const { return regularity_; }

  /// True when every block is a union of cells of Pi_n.
  bool blocks_measurable_at(int n) const;

  double probability(const Event& event) const;
  double expectation(const RandomVariable& x) const;

 private:
  std::vector<std::string> outcomes_;
  std::vector<double> prob_;
  std::vector<Partition> filtration_;
  Partition blocks_;
  std::vector<std::vector<std::size_t>> cell_index_;
  std::vector<std::vector<double>> cell_prob_;
  std::vector<std::vector<std::vector<std::size_t>>> children_;
  std::vector<std::size_t> block_index_;
  double regularity_ = 1.0;
};

using SpacePtr = std::shared_ptr<const FilteredSpace>;

template <class... Args>
SpacePtr make_space(Args&&... args) {
  return std::make_shared<const FilteredSpace>(std::forward<Args>(args)...);
}

/// Uniform space of 2^depth outcomes with the dyadic filtration and a
/// single block. Blocks may be replaced with `with_blocks`.
SpacePtr dyadic_space(int depth);

/// Copy of `space` with a different block partition.
SpacePtr with_blocks(const FilteredSpace& space, Partition blocks);

/// Blocks given by the cells of Pi_n.
Partition level_blocks(const FilteredSpace& space, int n);

/// E_n X: constant on every cell of Pi_n, equal to the P-weighted cell average.
RandomVariable conditional_expectation(const FilteredSpace& space, const RandomVariable& x, int n);

/// Per-cell maximum over Pi_n; the smallest F_n-measurable majorant of X.
RandomVariable conditional_ess_sup(const FilteredSpace& space, const RandomVariable& x, int n);

/// True iff X is constant (within tolerance) on every cell of Pi_n.
bool is_measurable(const FilteredSpace& space, const RandomVariable& x, int n);

double regularity_constant(const FilteredSpace& space);

}  // namespace amalgam
