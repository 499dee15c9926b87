#include "amalgam/stopping_time.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace amalgam {

StoppingTime::StoppingTime(const FilteredSpace& space, std::vector<int> times) : times_(std::move(times)) {
  if (!is_stopping_time(space, times_)) throw std::invalid_argument("map is not a stopping time of this filtration");
}

StoppingTime StoppingTime::unchecked(std::vector<int> times) { return StoppingTime(std::move(times)); }

Event StoppingTime::support() const {
  Event b(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) b[i] = times_[i] != never;
  return b;
}

bool is_stopping_time(const FilteredSpace& space, std::span<const int> times) {
  if (times.size() != space.size()) return false;
  const int horizon = space.horizon();
  for (int t : times) {
    if (t != StoppingTime::never && (t < 0 || t > horizon)) return false;
  }
  for (int n = 0; n <= horizon; ++n) {
    for (const Cell& cell : space.level(n)) {
      const bool first = times[cell.front()] == n;
      for (std::size_t omega : cell) {
        if ((times[omega] == n) != first) return false;
      }
    }
  }
  return true;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
  if (a == 0 || b == 0) return 0;
  if (a > limit / b) return limit;
  return std::min(a * b, limit);
}

// A stopping time restricted to a cell of Pi_n on which it has not yet
// stopped either stops at n on the whole cell or defers to every child cell
// independently; at the horizon the only alternative to stopping is never.
std::uint64_t count_from(const FilteredSpace& space, int n, std::size_t cell, std::uint64_t limit) {
  if (n == space.horizon()) return std::min<std::uint64_t>(2, limit);
  std::uint64_t product = 1;
  for (std::size_t child : space.children(n, cell)) {
    product = saturating_mul(product, count_from(space, n + 1, child, limit), limit);
  }
  return std::min(limit, product + 1);
}

struct Enumerator {
  const FilteredSpace& space;
  const std::function<void(const StoppingTime&)>& visit;
  std::vector<std::pair<int, std::size_t>> pending;
  std::vector<int> table;

  void assign(int n, std::size_t cell, int value) {
    for (std::size_t omega : space.level(n)[cell]) table[omega] = value;
  }

  void run() {
    if (pending.empty()) {
      visit(StoppingTime::unchecked(table));
      return;
    }
    const auto [n, cell] = pending.back();
    pending.pop_back();

    assign(n, cell, n);
    run();

    if (n == space.horizon()) {
      assign(n, cell, StoppingTime::never);
      run();
    } else {
      const auto& kids = space.children(n, cell);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) pending.emplace_back(n + 1, *it);
      run();
      pending.resize(pending.size() - kids.size());
    }
    pending.emplace_back(n, cell);
  }
};

}  // namespace

std::uint64_t count_stopping_times(const FilteredSpace& space, std::uint64_t saturate_at) {
  return count_from(space, 0, 0, saturate_at);
}

bool for_each_stopping_time(const FilteredSpace& space, std::uint64_t cap,
                            const std::function<void(const StoppingTime&)>& visit) {
  if (cap == 0) throw std::invalid_argument("enumeration cap must be positive");
  const std::uint64_t limit = cap == std::numeric_limits<std::uint64_t>::max() ? cap : cap + 1;
  if (count_stopping_times(space, limit) > cap) return false;
  Enumerator e{space, visit, {{0, 0}}, std::vector<int>(space.size(), StoppingTime::never)};
  e.run();
  return true;
}

std::optional<std::vector<StoppingTime>> enumerate_stopping_times(const FilteredSpace& space, std::uint64_t cap) {
  std::vector<StoppingTime> out;
  if (!for_each_stopping_time(space, cap, [&](const StoppingTime& nu) { out.push_back(nu); })) {
    return std::nullopt;
  }
  return out;
}

}  // namespace amalgam
