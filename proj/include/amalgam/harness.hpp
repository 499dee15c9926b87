#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <ostream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "amalgam/amalgam_norm.hpp"
#include "amalgam/martingale.hpp"

namespace amalgam {

enum class GeneratorKind { dyadic, random_tree, coin_walk };
enum class BlockPolicy { single, level_cells, random_partition };

inline constexpr std::size_t kMaxOutcomes = 4096;

struct CorpusSpec {
  GeneratorKind generator = GeneratorKind::dyadic;
  int depth = 2;          ///< dyadic and random-tree depth; coin-walk steps
  int max_branching = 2;  ///< random-tree only
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> exponents;
  BlockPolicy blocks = BlockPolicy::single;
  int block_param = 0;  ///< level for level-cells, block count for random-partition

  /// Throws std::invalid_argument on a bad spec or when the outcome count
  /// could exceed kMaxOutcomes.
  void validate() const;
};

std::string to_string(GeneratorKind kind);
std::string to_string(BlockPolicy policy);

/// Parses "dyadic(3)", "random-tree(3,4)", "coin-walk(5)" into the
/// generator fields of `spec`.
void parse_generator(const std::string& text, CorpusSpec& spec);
/// Parses "single", "level-cells(1)", "random-partition(3)".
void parse_block_policy(const std::string& text, CorpusSpec& spec);

/// Deterministic in the seed. Terminal values are i.i.d. standard normal
/// shifted to mean zero (coin-walk uses random step sizes on fair coins).
std::vector<Martingale> generate(const CorpusSpec& spec);

/// Calls fn on every item concurrently; results are returned in input order.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F fn) -> std::vector<std::invoke_result_t<F&, const T&>> {
  using R = std::invoke_result_t<F&, const T&>;
  std::vector<R> out(items.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), items.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) out[i] = fn(items[i]);
  };
  if (workers <= 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

enum class NormKind { s, S, star, Q, P };
std::string to_string(NormKind kind);
double norm_of(const HardyNorms& norms, NormKind kind);

struct RatioRow {
  NormKind numerator = NormKind::s;
  NormKind denominator = NormKind::s;
  std::size_t samples = 0;  ///< items where both norms are nonzero
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct EmbeddingTable {
  double p = 1.0;
  double q = 1.0;
  std::vector<RatioRow> rows;
  std::vector<std::string> violations;
  std::string to_csv() const;
};

/// Ratio statistics for the ten pairs among H^s, H^S, H^*, Q, P. At p = q a
/// direction asserted by the classical comparisons is flagged when its ratio
/// is not finite, and H^S/Q, H^*/P are flagged above 1 (the minimal envelope
/// dominates pointwise). Off-diagonal tables carry no flags.
EmbeddingTable explore_embeddings(const std::vector<Martingale>& corpus, double p, double q);

/// Full property suite on a seeded mixed corpus; one line per check on
/// `log`. Returns true when every check passes.
bool run_selftest(std::uint64_t seed, std::size_t count, std::ostream& log);

}  // namespace amalgam
