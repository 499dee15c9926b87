#include "amalgam/harness.hpp"

#include <cmath>
#include <random>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "amalgam/atomic_decomposition.hpp"
#include "amalgam/duality.hpp"
#include "amalgam/serialization.hpp"
#include "amalgam/tolerance.hpp"

namespace amalgam {

namespace {

std::uint64_t saturating_power(std::uint64_t base, int exponent) {
  std::uint64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    out *= base;
    if (out > kMaxOutcomes) return kMaxOutcomes + 1;
  }
  return out;
}

RandomVariable zero_mean(const FilteredSpace& space, RandomVariable x) {
  const double mean = space.expectation(x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= mean;
  return x;
}

/// Tree with random branching in [1, max_branching] and random split shares
/// bounded away from zero.
SpacePtr random_tree(int depth, int max_branching, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> branching(1, max_branching);
  std::uniform_real_distribution<double> share(0.25, 1.0);
  // Per level: parent index of every node and node probabilities.
  std::vector<std::vector<std::size_t>> parent(static_cast<std::size_t>(depth) + 1);
  std::vector<double> prob{1.0};
  parent[0].push_back(0);
  for (int n = 0; n < depth; ++n) {
    std::vector<double> next;
    auto& up = parent[static_cast<std::size_t>(n) + 1];
    for (std::size_t node = 0; node < prob.size(); ++node) {
      const int b = branching(rng);
      std::vector<double> w(static_cast<std::size_t>(b));
      double total = 0.0;
      for (double& x : w) total += (x = share(rng));
      for (double x : w) {
        next.push_back(prob[node] * x / total);
        up.push_back(node);
      }
    }
    prob = std::move(next);
  }
  const std::size_t m = prob.size();
  std::vector<Partition> filtration(static_cast<std::size_t>(depth) + 1);
  std::vector<std::size_t> ancestor(m);
  for (std::size_t i = 0; i < m; ++i) ancestor[i] = i;
  for (int n = depth; n >= 0; --n) {
    auto& level = filtration[static_cast<std::size_t>(n)];
    const std::size_t cells = n == depth ? m : parent[static_cast<std::size_t>(n) + 1].back() + 1;
    if (n < depth) {
      for (auto& a : ancestor) a = parent[static_cast<std::size_t>(n) + 1][a];
    }
    level.assign(cells, {});
    for (std::size_t i = 0; i < m; ++i) level[ancestor[i]].push_back(i);
  }
  Cell all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;
  return make_space(std::vector<std::string>{}, std::move(prob), std::move(filtration), Partition{std::move(all)});
}

SpacePtr apply_blocks(const SpacePtr& space, const CorpusSpec& spec, std::mt19937_64& rng) {
  switch (spec.blocks) {
    case BlockPolicy::single:
      return space;
    case BlockPolicy::level_cells:
      return with_blocks(*space, level_blocks(*space, std::min(spec.block_param, space->horizon())));
    case BlockPolicy::random_partition: {
      std::uniform_int_distribution<int> pick(0, spec.block_param - 1);
      Partition blocks(static_cast<std::size_t>(spec.block_param));
      for (std::size_t i = 0; i < space->size(); ++i) blocks[static_cast<std::size_t>(pick(rng))].push_back(i);
      std::erase_if(blocks, [](const Cell& c) { return c.empty(); });
      return with_blocks(*space, std::move(blocks));
    }
  }
  return space;
}

Martingale one_item(const CorpusSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpacePtr space;
  RandomVariable terminal;
  switch (spec.generator) {
    case GeneratorKind::dyadic:
    case GeneratorKind::coin_walk:
      space = dyadic_space(spec.depth);
      break;
    case GeneratorKind::random_tree:
      space = random_tree(spec.depth, spec.max_branching, rng);
      break;
  }
  space = apply_blocks(space, spec, rng);
  const std::size_t m = space->size();
  if (spec.generator == GeneratorKind::coin_walk) {
    std::uniform_real_distribution<double> step(0.5, 1.5);
    terminal = RandomVariable::zeros(m);
    for (int i = 0; i < spec.depth; ++i) {
      const double c = step(rng);
      const int shift = spec.depth - 1 - i;
      for (std::size_t w = 0; w < m; ++w) terminal[w] += ((w >> shift) & 1U) ? -c : c;
    }
  } else {
    std::vector<double> values(m);
    for (double& v : values) v = normal(rng);
    terminal = RandomVariable(std::move(values));
  }
  return Martingale::from_terminal(space, zero_mean(*space, std::move(terminal)));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

void CorpusSpec::validate() const {
  if (depth < 0) throw std::invalid_argument("corpus: depth must be non-negative");
  if (count == 0) throw std::invalid_argument("corpus: count must be positive");
  std::uint64_t outcomes = 0;
  switch (generator) {
    case GeneratorKind::dyadic:
    case GeneratorKind::coin_walk:
      outcomes = saturating_power(2, depth);
      break;
    case GeneratorKind::random_tree:
      if (max_branching < 1) throw std::invalid_argument("corpus: max branching must be at least 1");
      outcomes = saturating_power(static_cast<std::uint64_t>(max_branching), depth);
      break;
  }
  if (outcomes > kMaxOutcomes) {
    throw std::invalid_argument("corpus: outcome count may exceed " + std::to_string(kMaxOutcomes));
  }
  if (blocks == BlockPolicy::level_cells && block_param < 0) {
    throw std::invalid_argument("corpus: level-cells needs a non-negative level");
  }
  if (blocks == BlockPolicy::random_partition && block_param < 1) {
    throw std::invalid_argument("corpus: random-partition needs at least one block");
  }
  for (const auto& [p, q] : exponents) validate_pq(p, q);
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::dyadic:
      return "dyadic";
    case GeneratorKind::random_tree:
      return "random-tree";
    case GeneratorKind::coin_walk:
      return "coin-walk";
  }
  return "?";
}

std::string to_string(BlockPolicy policy) {
  switch (policy) {
    case BlockPolicy::single:
      return "single";
    case BlockPolicy::level_cells:
      return "level-cells";
    case BlockPolicy::random_partition:
      return "random-partition";
  }
  return "?";
}

void parse_generator(const std::string& text, CorpusSpec& spec) {
  static const std::regex one(R"(\s*(dyadic|coin-walk)\s*\(\s*(\d+)\s*\)\s*)");
  static const std::regex two(R"(\s*random-tree\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
  std::smatch m;
  if (std::regex_match(text, m, one)) {
    spec.generator = m[1] == "dyadic" ? GeneratorKind::dyadic : GeneratorKind::coin_walk;
    spec.depth = std::stoi(m[2]);
  } else if (std::regex_match(text, m, two)) {
    spec.generator = GeneratorKind::random_tree;
    spec.max_branching = std::stoi(m[1]);
    spec.depth = std::stoi(m[2]);
  } else {
    throw std::invalid_argument("unknown generator '" + text + "'");
  }
}

void parse_block_policy(const std::string& text, CorpusSpec& spec) {
  static const std::regex with_arg(R"(\s*(level-cells|random-partition)\s*\(\s*(\d+)\s*\)\s*)");
  std::smatch m;
  if (text == "single") {
    spec.blocks = BlockPolicy::single;
  } else if (std::regex_match(text, m, with_arg)) {
    spec.blocks = m[1] == "level-cells" ? BlockPolicy::level_cells : BlockPolicy::random_partition;
    spec.block_param = std::stoi(m[2]);
  } else {
    throw std::invalid_argument("unknown block policy '" + text + "'");
  }
}

std::vector<Martingale> generate(const CorpusSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<Martingale> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(one_item(spec, rng));
  return out;
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::s:
      return "H^s";
    case NormKind::S:
      return "H^S";
    case NormKind::star:
      return "H^*";
    case NormKind::Q:
      return "Q";
    case NormKind::P:
      return "P";
  }
  return "?";
}

double norm_of(const HardyNorms& norms, NormKind kind) {
  switch (kind) {
    case NormKind::s:
      return norms.s;
    case NormKind::S:
      return norms.S;
    case NormKind::star:
      return norms.star;
    case NormKind::Q:
      return norms.Q;
    case NormKind::P:
      return norms.P;
  }
  return 0.0;
}

std::string EmbeddingTable::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "p,q,numerator,denominator,samples,min,median,max\n";
  for (const auto& row : rows) {
    out << p << ',' << q << ',' << to_string(row.numerator) << ',' << to_string(row.denominator) << ','
        << row.samples << ',' << row.min << ',' << row.median << ',' << row.max << '\n';
  }
  return out.str();
}

EmbeddingTable explore_embeddings(const std::vector<Martingale>& corpus, double p, double q) {
  if (corpus.empty()) throw std::invalid_argument("explore: empty corpus");
  validate_pq(p, q);
  const auto norms = parallel_map(corpus, [&](const Martingale& f) { return all_norms(f, p, q); });
  constexpr NormKind kinds[] = {NormKind::s, NormKind::S, NormKind::star, NormKind::Q, NormKind::P};
  const bool diagonal = p == q;

  EmbeddingTable table{p, q, {}, {}};
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a + 1; b < 5; ++b) {
      RatioRow row{kinds[a], kinds[b], 0, 0.0, 0.0, 0.0};
      std::vector<double> ratios;
      for (std::size_t i = 0; i < norms.size(); ++i) {
        const double x = norm_of(norms[i], kinds[a]);
        const double y = norm_of(norms[i], kinds[b]);
        const double scale = std::max({x, y, 1.0});
        const bool x_zero = x <= tolerance() * scale;
        const bool y_zero = y <= tolerance() * scale;
        if (x_zero && y_zero) continue;
        if (diagonal && x_zero != y_zero) {
          table.violations.push_back("item " + std::to_string(i) + ": " + to_string(kinds[a]) + "/" +
                                     to_string(kinds[b]) + " is not finite in both directions");
          continue;
        }
        if (x_zero != y_zero) continue;
        ratios.push_back(x / y);
      }
      row.samples = ratios.size();
      if (!ratios.empty()) {
        row.min = *std::min_element(ratios.begin(), ratios.end());
        row.max = *std::max_element(ratios.begin(), ratios.end());
        row.median = median_of(ratios);
      }
      table.rows.push_back(row);
    }
  }
  if (diagonal) {
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (!approx_leq(norms[i].S, norms[i].Q)) {
        table.violations.push_back("item " + std::to_string(i) + ": H^S exceeds Q");
      }
      if (!approx_leq(norms[i].star, norms[i].P)) {
        table.violations.push_back("item " + std::to_string(i) + ": H^* exceeds P");
      }
      const double values[] = {norms[i].s, norms[i].S, norms[i].star, norms[i].Q, norms[i].P};
      for (double v : values) {
        if (!std::isfinite(v)) {
          table.violations.push_back("item " + std::to_string(i) + ": non-finite norm");
          break;
        }
      }
    }
  }
  return table;
}

namespace {

struct ItemOutcome {
  std::vector<std::string> failures;
  std::size_t atoms = 0;
  std::size_t decompositions = 0;
};

const std::vector<std::pair<double, double>> kSelftestExponents{{0.5, 0.5}, {0.5, 1.0}, {1.0, 1.0}, {2.0, 2.0}, {1.0, 2.0}};
constexpr double kAtomExponents[] = {2.0, 4.0, kInfinity};

ItemOutcome check_item(const Martingale& f) {
  ItemOutcome out;
  auto fail = [&](std::string what) { out.failures.push_back(std::move(what)); };
  const FilteredSpace& space = f.space();
  const double scale = std::max(1.0, f.terminal().max_abs());

  const double e_f2 = space.expectation(hadamard(f.terminal(), f.terminal()));
  const RandomVariable S = quadratic_variation(f);
  const RandomVariable s = conditional_quadratic_variation(f);
  if (std::abs(e_f2 - space.expectation(hadamard(S, S))) > 1e-10 * std::max(1.0, e_f2) ||
      std::abs(e_f2 - space.expectation(hadamard(s, s))) > 1e-10 * std::max(1.0, e_f2)) {
    fail("L2 isometry");
  }
  for (auto flavor : {EnvelopeFlavor::square_function, EnvelopeFlavor::maximal}) {
    if (!is_admissible_envelope(f, minimal_envelope(f, flavor))) fail("minimal envelope not admissible");
  }

  for (const auto& [p, q] : kSelftestExponents) {
    for (auto flavor : {HardyFlavor::conditional_square, HardyFlavor::square, HardyFlavor::maximal}) {
      for (auto defn : {AtomDefinition::simple, AtomDefinition::weighted}) {
        const Decomposition d = decompose(f, p, q, flavor, defn);
        ++out.decompositions;
        const std::string tag = to_string(flavor) + "/" + to_string(defn) + " p=" + std::to_string(p) +
                                " q=" + std::to_string(q);
        if (reconstruction_residual(d, f) > 1e-10 * scale) fail("reconstruction " + tag);
        for (const auto& t : d.triples) {
          if (!is_stopping_time(space, t.nu.times())) fail("ladder time " + tag);
          for (double r : kAtomExponents) {
            if (r <= 1.0 || r <= p) continue;
            if (!verify_atom(space, t, p, q, r).passed()) fail("atom k=" + std::to_string(t.k) + " " + tag);
          }
          ++out.atoms;
        }
        const BoundCertificate cert = certify_bounds(f, d);
        for (const auto& why : cert.failures) fail("bounds " + tag + ": " + why);
        const io::json doc = io::to_json(d);
        if (io::canonical(io::to_json(io::decomposition_from_json(io::parse_document(doc.dump()), f.space_ptr()))) !=
            io::canonical(doc)) {
          fail("round trip " + tag);
        }
      }
    }
  }

  if (space.size() <= 8 && space.size() > 1) {
    std::vector<double> gv(space.size());
    for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = std::sin(1.0 + 3.0 * static_cast<double>(i));
    const double mean = space.expectation(RandomVariable(gv));
    for (double& v : gv) v -= mean;
    for (const auto& [p, q] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}}) {
      const DualityCertificate cert = certify_duality(f, RandomVariable(gv), p, q, CampanatoMode::exact);
      for (const auto& why : cert.failures) fail("duality: " + why);
    }
  }
  return out;
}

}  // namespace

bool run_selftest(std::uint64_t seed, std::size_t count, std::ostream& log) {
  std::vector<Martingale> corpus;
  const std::string generators[] = {"dyadic(2)", "dyadic(3)", "random-tree(3,3)", "coin-walk(4)", "random-tree(2,5)"};
  const std::string policies[] = {"single", "level-cells(1)", "random-partition(3)"};
  std::size_t index = 0;
  for (std::size_t i = 0; i < count; ++i) {
    CorpusSpec spec;
    parse_generator(generators[i % std::size(generators)], spec);
    parse_block_policy(policies[(i / std::size(generators)) % std::size(policies)], spec);
    spec.seed = seed + 0x9e3779b97f4a7c15ULL * ++index;
    auto items = generate(spec);
    corpus.push_back(std::move(items.front()));
  }

  const auto outcomes = parallel_map(corpus, check_item);
  std::size_t atoms = 0;
  std::size_t decompositions = 0;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    atoms += outcomes[i].atoms;
    decompositions += outcomes[i].decompositions;
    for (const auto& why : outcomes[i].failures) failures.push_back("item " + std::to_string(i) + ": " + why);
  }
  log << "corpus: " << corpus.size() << " martingales, " << decompositions << " decompositions, " << atoms
      << " atoms\n";

  std::vector<Martingale> dyadic;
  for (const auto& f : corpus) {
    if (f.space().regularity_constant() == 2.0 && f.space().blocks().size() == 1) dyadic.push_back(f);
  }
  std::size_t flagged = 0;
  if (!dyadic.empty()) {
    for (double p : {0.5, 1.0, 2.0}) {
      const EmbeddingTable table = explore_embeddings(dyadic, p, p);
      flagged += table.violations.size();
      for (const auto& v : table.violations) failures.push_back("embedding p=" + std::to_string(p) + ": " + v);
    }
  }
  log << "embedding flags: " << flagged << '\n';

  for (const auto& why : failures) log << "FAIL " << why << '\n';
  log << (failures.empty() ? "selftest passed" : "selftest FAILED") << '\n';
  return failures.empty();
}

}  // namespace amalgam
