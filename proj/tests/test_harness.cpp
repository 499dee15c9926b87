#include <doctest.h>

#include <sstream>

#include "amalgam/harness.hpp"
#include "amalgam/serialization.hpp"

using namespace amalgam;

TEST_CASE("generator basics") {
  CorpusSpec spec;
  parse_generator("dyadic(2)", spec);
  spec.seed = 42;
  const auto corpus = generate(spec);
  REQUIRE(corpus.size() == 1);
  CHECK(corpus[0].space().size() == 4);
  CHECK(corpus[0].space().regularity_constant() == doctest::Approx(2.0));
  CHECK(corpus[0].level(0) == RandomVariable::zeros(4));
  CHECK(corpus[0].space().expectation(corpus[0].terminal()) == doctest::Approx(0.0));
}

TEST_CASE("same seed, same corpus") {
  for (const char* gen : {"dyadic(3)", "random-tree(3,3)", "coin-walk(4)"}) {
    CorpusSpec spec;
    parse_generator(gen, spec);
    parse_block_policy("random-partition(3)", spec);
    spec.count = 5;
    spec.seed = 1234;
    const auto a = generate(spec);
    const auto b = generate(spec);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(io::canonical(io::to_json(a[i])) == io::canonical(io::to_json(b[i])));
    }
  }
}

TEST_CASE("random trees stay within their size") {
  CorpusSpec spec;
  parse_generator("random-tree(3,3)", spec);
  spec.count = 30;
  for (const auto& f : generate(spec)) {
    CHECK(f.space().size() <= 27);
    CHECK(f.horizon() == 3);
  }
}

TEST_CASE("spec validation") {
  CorpusSpec spec;
  parse_generator("random-tree(5,6)", spec);
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  parse_generator("dyadic(13)", spec);
  CHECK_THROWS_AS(generate(spec), std::invalid_argument);
  parse_generator("dyadic(12)", spec);
  CHECK_NOTHROW(spec.validate());
  CHECK_THROWS_AS(parse_generator("cube(3)", spec), std::invalid_argument);
  CHECK_THROWS_AS(parse_block_policy("random-partition(x)", spec), std::invalid_argument);
}

TEST_CASE("level-cell blocks") {
  CorpusSpec spec;
  parse_generator("dyadic(3)", spec);
  parse_block_policy("level-cells(2)", spec);
  const auto corpus = generate(spec);
  CHECK(corpus[0].space().blocks().size() == 4);
}

TEST_CASE("embedding explorer") {
  CorpusSpec spec;
  parse_generator("dyadic(3)", spec);
  spec.count = 40;
  spec.seed = 5;
  const auto corpus = generate(spec);
  const EmbeddingTable diagonal = explore_embeddings(corpus, 2.0, 2.0);
  CHECK(diagonal.rows.size() == 10);
  CHECK(diagonal.violations.empty());
  for (const auto& row : diagonal.rows) {
    CHECK(row.samples == corpus.size());
    CHECK(std::isfinite(row.max));
    CHECK(row.min > 0.0);
  }
  const EmbeddingTable off = explore_embeddings(corpus, 0.5, 2.0);
  CHECK(off.rows.size() == 10);
  const std::string csv = off.to_csv();
  CHECK(csv.rfind("p,q,numerator,denominator", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
  CHECK_THROWS_AS(explore_embeddings({}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("single coin step: all ratios are one") {
  CorpusSpec spec;
  parse_generator("coin-walk(1)", spec);
  spec.count = 3;
  const EmbeddingTable table = explore_embeddings(generate(spec), 1.0, 1.0);
  for (const auto& row : table.rows) {
    CHECK(row.min == doctest::Approx(1.0));
    CHECK(row.max == doctest::Approx(1.0));
  }
}

TEST_CASE("parallel map keeps input order") {
  std::vector<int> items(1000);
  for (int i = 0; i < 1000; ++i) items[static_cast<std::size_t>(i)] = i;
  const auto out = parallel_map(items, [](int x) { return 3 * x; });
  for (int i = 0; i < 1000; ++i) CHECK(out[static_cast<std::size_t>(i)] == 3 * i);
}

TEST_CASE("selftest") {
  std::ostringstream log;
  CHECK(run_selftest(7, 40, log));
  CHECK(log.str().find("selftest passed") != std::string::npos);
}
