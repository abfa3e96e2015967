#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "testutil.hpp"
#include "xfam/errors.hpp"
#include "xfam/extremal.hpp"
#include "xfam/oracle.hpp"

using namespace xfam;

TEST_CASE("enumerate_upsets matches the monotone-function counts") {
  // M(n) including the empty family and the full power set: 3, 6, 20, 168, 7581
  const std::uint64_t expected[] = {0, 3, 6, 20, 168, 7581};
  for (int n = 1; n <= 5; ++n) {
    std::uint64_t count = 0;
    enumerate_upsets(n, std::nullopt, [&](const Family& f) {
      ++count;
      CHECK(up_closure(f) == f);
    });
    CHECK(count == expected[n]);
  }
  CHECK_THROWS_AS(enumerate_upsets(7, std::nullopt, [](const Family&) {}), guard_error);

  // capped: up-sets within [3]^(<=1) are the empty family and singleton stars
  std::uint64_t capped = 0;
  enumerate_upsets(3, 1, [&](const Family&) { ++capped; });
  CHECK(capped == 9);  // subsets of the 3 singletons, plus {} with the empty set forced in: 8 + 1
}

TEST_CASE("best_response") {
  std::vector<Family> star{block_family(4, 1)};
  CHECK(best_response(star, 1, std::nullopt) == scatter_family(4, 1, 1));

  std::vector<Family> top{Family::of(3, {{1, 2, 3}})};
  CHECK(best_response(top, 2, std::nullopt) == slice(scatter_family(3, 3, 2), 2, 3));

  std::vector<Family> pair{scatter_family(3, 2, 1), block_family(3, 2)};
  Family resp = best_response(pair, 1, std::nullopt);
  CHECK(block_family(3, 2).subset_of(resp));

  // sound and complete: G valid iff G subseteq best_response(fixed)
  std::mt19937_64 rng(59);
  for (int it = 0; it < 100; ++it) {
    int n = 2 + static_cast<int>(rng() % 4);
    int t = 1 + static_cast<int>(rng() % 2);
    Family f1 = testutil::random_family(rng, n, n, 5);
    if (f1.empty()) f1.insert((1ULL << n) - 1);
    std::vector<Family> fixed{f1};
    Family resp2 = best_response(fixed, t, std::nullopt);
    if (!resp2.empty()) {
      CrossInstance full;
      full.t = t;
      full.families = {f1, resp2};
      CHECK(is_cross_t_intersecting(full));
    }
    Family probe = testutil::random_family(rng, n, n, 4);
    if (probe.empty()) continue;
    CrossInstance inst;
    inst.t = t;
    inst.families = {f1, probe};
    CHECK(is_cross_t_intersecting(inst) == probe.subset_of(resp2));
  }
}

TEST_CASE("exhaustive_max uniform") {
  SearchSpec spec;
  spec.mode = SearchSpec::Mode::Uniform;
  spec.n = 4;
  spec.k = 2;
  spec.r = 2;
  spec.t = 1;
  auto res = exhaustive_max(spec);
  CHECK(res.value == 6);
  REQUIRE(res.witness.size() == 2);
  CrossInstance inst;
  inst.t = 1;
  inst.families = res.witness;
  CHECK(is_cross_t_intersecting(inst));
  for (const auto& f : res.witness) CHECK(f == slice(f, 2, 2));

  spec.n = 5;
  spec.r = 3;
  auto res53 = exhaustive_max(spec);
  CHECK(res53.value == 12);
}

TEST_CASE("exhaustive_max nonuniform") {
  SearchSpec spec;
  spec.mode = SearchSpec::Mode::Nonuniform;
  spec.n = 2;
  spec.r = 2;
  spec.t = 1;
  auto res = exhaustive_max(spec);
  CHECK(res.value == 4);

  spec.n = 4;
  spec.r = 3;
  spec.objective = SearchSpec::Objective::Product;
  CHECK(exhaustive_max(spec).value == 512);
}

TEST_CASE("exhaustive_max truncated (mixed uniformities)") {
  auto level = [](int n, int k) {
    MeasureTable mu;
    mu.n = n;
    mu.weights.assign(static_cast<std::size_t>(n) + 1, Rational(0));
    mu.weights[static_cast<std::size_t>(k)] = 1;
    return mu;
  };
  SearchSpec spec;
  spec.mode = SearchSpec::Mode::Truncated;
  spec.n = 3;
  spec.r = 2;
  spec.t = 1;
  spec.caps = {1, 2};
  spec.measures = {level(3, 1), level(3, 2)};
  CHECK(exhaustive_max(spec).value == 3);

  // caps (4,2), t=2, counting: the oracle finds the (ell=2, a=4) optimum of 7
  SearchSpec wide;
  wide.mode = SearchSpec::Mode::Truncated;
  wide.n = 4;
  wide.r = 2;
  wide.t = 2;
  wide.caps = {4, 2};
  wide.measures = {counting_measure(4), counting_measure(4)};
  CHECK(exhaustive_max(wide).value == 7);
}

TEST_CASE("exhaustive_max_single") {
  for (int n = 2; n <= 5; ++n)
    CHECK(exhaustive_max_single(n, n, counting_measure(n)).value == (Int(1) << (n - 1)));
  CHECK(exhaustive_max_single(4, 2, uniform_measure(4, 2)).value == Rational(1, 2));
  CHECK(exhaustive_max_single(5, 5, product_measure(5, Rational(1, 3))).value == Rational(1, 3));
  CHECK(exhaustive_max_single(4, 4, product_measure(4, Rational(1, 2))).value == Rational(1, 2));

  auto res = exhaustive_max_single(4, 2, uniform_measure(4, 2));
  REQUIRE(res.witness.size() == 1);
  CHECK(is_t_intersecting(res.witness.front(), 1));
}

TEST_CASE("threaded search is deterministic") {
  SearchSpec spec;
  spec.mode = SearchSpec::Mode::Nonuniform;
  spec.n = 4;
  spec.r = 2;
  spec.t = 1;
  auto seq = exhaustive_max(spec);
  spec.threads = 3;
  auto par = exhaustive_max(spec);
  CHECK(seq.value == par.value);
  CHECK(seq.nodes_explored == par.nodes_explored);
  REQUIRE(seq.witness.size() == par.witness.size());
  for (std::size_t i = 0; i < seq.witness.size(); ++i) CHECK(seq.witness[i] == par.witness[i]);

  auto s1 = exhaustive_max_single(5, 3, counting_measure(5), 1);
  auto s4 = exhaustive_max_single(5, 3, counting_measure(5), 4);
  CHECK(s1.value == s4.value);
  CHECK(s1.nodes_explored == s4.nodes_explored);
  CHECK(s1.witness.front() == s4.witness.front());
}

TEST_CASE("resource guards") {
  SearchSpec spec;
  spec.mode = SearchSpec::Mode::Nonuniform;
  spec.n = 7;
  CHECK_THROWS_AS(exhaustive_max(spec), guard_error);
  spec.n = 6;
  spec.r = 3;
  CHECK_THROWS_AS(exhaustive_max(spec), guard_error);
  SearchSpec uni;
  uni.mode = SearchSpec::Mode::Uniform;
  uni.n = 6;
  uni.k = 3;
  uni.r = 3;
  CHECK_THROWS_AS(exhaustive_max(uni), guard_error);  // (r-1) C(6,3) = 40
  CHECK_THROWS_AS(exhaustive_max_single(7, 3, counting_measure(7)), std::exception);
}

TEST_CASE("oracle equals closed form on spot checks") {
  SearchSpec spec;
  spec.mode = SearchSpec::Mode::Uniform;
  for (auto [n, k, r, t] : {std::tuple{4, 2, 2, 1}, {5, 2, 2, 1}, {5, 2, 2, 2}, {4, 2, 3, 1}}) {
    spec.n = n;
    spec.k = k;
    spec.r = r;
    spec.t = t;
    CHECK(exhaustive_max(spec).value == bound_uniform(n, k, r, t).value);
  }
}
