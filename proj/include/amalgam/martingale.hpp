#pragma once

#include <optional>
#include <vector>

#include "amalgam/filtered_space.hpp"
#include "amalgam/stopping_time.hpp"

namespace amalgam {

/// Adapted process f_0, ..., f_N with f_0 = 0 and E_n f_{n+1} = f_n.
class Martingale {
 public:
  /// Validates f_0 = 0, adaptedness and the martingale property; throws
  /// std::invalid_argument.
  Martingale(SpacePtr space, std::vector<RandomVariable> levels);

  /// f_n = E_n X. Rejects E[X] != 0.
  static Martingale from_terminal(SpacePtr space, const RandomVariable& x);

  /// Skips validation. For processes that are martingales by construction.
  static Martingale unchecked(SpacePtr space, std::vector<RandomVariable> levels);

  static Martingale zero(SpacePtr space);

  const FilteredSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  int horizon() const { return static_cast<int>(levels_.size()) - 1; }
  const RandomVariable& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  const RandomVariable& terminal() const { return levels_.back(); }
  const std::vector<RandomVariable>& levels() const { return levels_; }

 private:
  Martingale(SpacePtr space, std::vector<RandomVariable> levels, bool validate);
  SpacePtr space_;
  std::vector<RandomVariable> levels_;
};

/// E_0 X, ..., E_N X without any mean check.
std::vector<RandomVariable> generated_levels(const FilteredSpace& space, const RandomVariable& x);

/// d_0 = 0, d_n = f_n - f_{n-1}.
std::vector<RandomVariable> differences(const Martingale& f);

/// S_n(f) = (sum_{i<=n} |d_i f|^2)^{1/2}; S_0 = 0.
RandomVariable partial_quadratic_variation(const Martingale& f, int n);
/// s_n(f) = (sum_{i<=n} E_{i-1} |d_i f|^2)^{1/2}; s_0 = 0.
RandomVariable partial_conditional_quadratic_variation(const Martingale& f, int n);
/// S(f) = S_N(f).
RandomVariable quadratic_variation(const Martingale& f);
/// s(f) = s_N(f).
RandomVariable conditional_quadratic_variation(const Martingale& f);
/// f* = max_n |f_n|.
RandomVariable maximal_function(const Martingale& f);

/// f^nu_n = f_{min(n, nu)}.
Martingale stop(const Martingale& f, const StoppingTime& nu);

/// Which one-step-ahead statistic an envelope dominates.
enum class EnvelopeFlavor {
  square_function,  ///< S_n(f) <= beta_{n-1}
  maximal,          ///< |f_n| <= beta_{n-1}
};

/// Adapted, non-decreasing, non-negative beta_0, ..., beta_N. The last level
/// plays the role of beta_infinity.
struct PredictorEnvelope {
  EnvelopeFlavor flavor = EnvelopeFlavor::square_function;
  std::vector<RandomVariable> levels;

  const RandomVariable& terminal() const { return levels.back(); }
};

/// Checks every envelope invariant against f: adaptedness, monotonicity,
/// non-negativity and one-step domination of the flavor's statistic.
bool is_admissible_envelope(const Martingale& f, const PredictorEnvelope& beta);

/// Pointwise-smallest admissible envelope:
///   beta_n = max(beta_{n-1}, esssup_n T_{n+1}),  beta_{-1} = 0,
/// with T = S_.(f) or |f_.| and T_{N+1} = T_N.
PredictorEnvelope minimal_envelope(const Martingale& f, EnvelopeFlavor flavor);

enum class LadderKind {
  conditional_variation,  ///< nu^k = inf{n : s_{n+1}(f) > 2^k}
  envelope,               ///< nu^k = inf{n : beta_n > 2^k}
};

/// The per-time statistic a ladder thresholds: entry n is F_n-measurable.
/// For the conditional-variation ladder entry n is s_{n+1}(f), with
/// s_{N+1} = s_N; for the envelope ladder entry n is beta_n.
std::vector<RandomVariable> ladder_statistic(const Martingale& f, LadderKind kind,
                                             const PredictorEnvelope* beta = nullptr);

/// First n with statistic[n] > threshold, else never.
StoppingTime first_exceedance(const std::vector<RandomVariable>& statistic, double threshold);

/// nu^k for the chosen ladder. The envelope ladder requires `beta`
/// (std::invalid_argument otherwise).
StoppingTime ladder_stopping_time(const Martingale& f, int k, LadderKind kind,
                                  const PredictorEnvelope* beta = nullptr);

/// Range of ladder indices outside of which nu^k is identically "stop at the
/// first time the statistic is positive" (below) or never (above).
struct LadderWindow {
  int k_min = 0;
  int k_max = 0;
  bool empty = true;  ///< statistic identically zero
};

/// k_min = floor(log2(min positive value)) - 1, k_max = ceil(log2(max value)).
LadderWindow ladder_window(const std::vector<RandomVariable>& statistic);

}  // namespace amalgam
