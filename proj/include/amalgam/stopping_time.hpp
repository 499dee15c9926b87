#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "amalgam/filtered_space.hpp"

namespace amalgam {

/// Map omega -> {0, ..., N} U {infinity} whose level sets {nu = n} are
/// unions of cells of Pi_n.
class StoppingTime {
 public:
  /// Encodes nu(omega) = infinity.
  static constexpr int never = std::numeric_limits<int>::max();

  StoppingTime() = default;
  /// Validates measurability against `space`; throws std::invalid_argument.
  StoppingTime(const FilteredSpace& space, std::vector<int> times);

  /// Skips validation. Used by constructions that are measurable by design.
  static StoppingTime unchecked(std::vector<int> times);
  static StoppingTime constant(std::size_t size, int n) { return unchecked(std::vector<int>(size, n)); }

  std::size_t size() const { return times_.size(); }
  int operator[](std::size_t omega) const { return times_[omega]; }
  std::span<const int> times() const { return times_; }
  bool stops(std::size_t omega) const { return times_[omega] != never; }

  /// B_nu = {nu != infinity}.
  Event support() const;

  friend bool operator==(const StoppingTime&, const StoppingTime&) = default;
  friend auto operator<=>(const StoppingTime& a, const StoppingTime& b) { return a.times_ <=> b.times_; }

 private:
  explicit StoppingTime(std::vector<int> times) : times_(std::move(times)) {}
  std::vector<int> times_;
};

/// Level-set measurability check.
bool is_stopping_time(const FilteredSpace& space, std::span<const int> times);

/// Number of distinct stopping times, saturated at `saturate_at`.
std::uint64_t count_stopping_times(const FilteredSpace& space, std::uint64_t saturate_at);

/// Calls `visit` once per distinct stopping time, in a fixed order, when the
/// total count is at most `cap`. Returns false (and visits nothing) on
/// overflow.
bool for_each_stopping_time(const FilteredSpace& space, std::uint64_t cap,
                            const std::function<void(const StoppingTime&)>& visit);

/// Every stopping time, or std::nullopt when the count exceeds `cap`.
std::optional<std::vector<StoppingTime>> enumerate_stopping_times(const FilteredSpace& space,
                                                                  std::uint64_t cap = 1'000'000);

}  // namespace amalgam
