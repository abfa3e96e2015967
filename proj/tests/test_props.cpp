#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "testutil.hpp"
#include "xfam/extremal.hpp"
#include "xfam/oracle.hpp"
#include "xfam/props.hpp"

using namespace xfam;

TEST_CASE("meet_closure") {
  std::vector<Family> one{Family::of(2, {{1, 2}})};
  CHECK(meet_closure(one) == Family::of(2, {{1, 2}}));

  std::vector<Family> two{Family::of(3, {{1, 2}, {2, 3}}), Family::of(3, {{2}})};
  CHECK(meet_closure(two) == Family::of(3, {{2}}));

  // all four tuple meets: {1,2},{2},{1},{3}
  std::vector<Family> four{Family::of(3, {{1, 2}, {1, 3}}), Family::of(3, {{1, 2}, {2, 3}})};
  CHECK(meet_closure(four) == Family::of(3, {{1, 2}, {2}, {1}, {3}}));

  CHECK_THROWS_AS(meet_closure(std::vector<Family>{}), std::invalid_argument);
}

TEST_CASE("is_cross_t_intersecting") {
  CrossInstance a;
  a.t = 1;
  a.families = {Family::of(2, {{1}, {1, 2}}), Family::of(2, {{1}, {1, 2}})};
  CHECK(is_cross_t_intersecting(a));

  CrossInstance b;
  b.t = 2;
  b.families = {Family::of(3, {{1, 2}}), Family::of(3, {{2, 3}})};
  CHECK(!is_cross_t_intersecting(b));

  CrossInstance c;
  c.t = 1;
  c.families = {scatter_family(3, 2, 1), block_family(3, 2), block_family(3, 2)};
  CHECK(is_cross_t_intersecting(c));

  // a member below size t sinks the instance
  CrossInstance d;
  d.t = 2;
  d.families = {Family::of(3, {{1}}), Family::of(3, {{1, 2}})};
  CHECK(!is_cross_t_intersecting(d));
}

TEST_CASE("is_t_intersecting") {
  CHECK(is_t_intersecting(Family::of(3, {{1, 2}, {2, 3}}), 1));
  CHECK(!is_t_intersecting(Family::of(4, {{1, 2}, {3, 4}}), 1));
  CHECK(is_t_intersecting(scatter_family(4, 2, 2), 2));   // A_{4,2,2} = B_{4,2}
  CHECK(!is_t_intersecting(scatter_family(4, 4, 2), 2));  // {1,3} cap {2,4} too small
  // the F = F' pair means members below t fail
  CHECK(!is_t_intersecting(Family::of(3, {{1}}), 2));
}

TEST_CASE("shift_set") {
  CHECK(shift_set(Subset::of(3, {2, 3}), 1, 2) == Subset::of(3, {1, 3}));
  CHECK(shift_set(Subset::of(3, {1, 2}), 1, 2) == Subset::of(3, {1, 2}));
  CHECK(shift_set(Subset::of(3, {3}), 1, 2) == Subset::of(3, {3}));
  CHECK(shift_set(Subset::of(3, {2}), 1, 2).size() == 1);
  CHECK_THROWS_AS(shift_set(Subset::of(3, {1}), 2, 2), std::invalid_argument);
}

TEST_CASE("shift_family") {
  CHECK(shift_family(Family::of(2, {{2}}), 1, 2) == Family::of(2, {{1}}));
  CHECK(shift_family(Family::of(2, {{1}, {2}}), 1, 2) == Family::of(2, {{1}, {2}}));
  CHECK(shift_family(Family::of(3, {{2, 3}, {1, 3}}), 1, 2) ==
        Family::of(3, {{1, 3}, {2, 3}}));
}

TEST_CASE("is_shifted and fixpoint") {
  CHECK(is_shifted(Family::of(2, {{1}})));
  CHECK(!is_shifted(Family::of(2, {{2}})));
  for (auto [n, a, t] : {std::tuple{4, 2, 1}, {5, 3, 2}, {6, 4, 3}})
    CHECK(is_shifted(scatter_family(n, a, t)));

  auto fixed = shift_to_fixpoint({Family::of(2, {{2}})});
  CHECK(fixed.front() == Family::of(2, {{1}}));
  CHECK(shift_to_fixpoint({Family::of(3, {{2, 3}})}).front() == Family::of(3, {{1, 2}}));
  auto already = scatter_family(4, 2, 1);
  CHECK(shift_to_fixpoint({already}).front() == already);
}

TEST_CASE("shifting properties on random instances") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 200; ++it) {
    int n = 3 + static_cast<int>(rng() % 4);  // 3..6
    int r = 2 + static_cast<int>(rng() % 2);
    int t = 1 + static_cast<int>(rng() % 2);
    std::vector<Family> fams;
    Family f1 = testutil::random_family(rng, n, n, 6);
    if (f1.empty()) f1.insert((1ULL << n) - 1);
    fams.push_back(f1);
    for (int j = 1; j < r; ++j) {
      Family resp = best_response(fams, t, std::nullopt);
      if (resp.empty()) break;
      Family pick(n);
      auto ms = resp.members();
      for (auto m : ms)
        if (rng() % 2) pick.insert(m);
      if (pick.empty()) pick.insert(ms.back());
      fams.push_back(pick);
    }
    if (static_cast<int>(fams.size()) != r) continue;

    CrossInstance inst;
    inst.t = t;
    inst.families = fams;
    bool before = is_cross_t_intersecting(inst);

    int i = 1 + static_cast<int>(rng() % n), j = 1 + static_cast<int>(rng() % n);
    if (i == j) continue;
    std::vector<Family> shifted;
    for (const auto& f : fams) shifted.push_back(shift_family(f, i, j));
    for (std::size_t q = 0; q < fams.size(); ++q) {
      CHECK(shifted[q].count() == fams[q].count());
      CHECK(shifted[q].level_counts() == fams[q].level_counts());
    }
    if (before) {
      CrossInstance after;
      after.t = t;
      after.families = shifted;
      CHECK(is_cross_t_intersecting(after));
    }

    auto fixed = shift_to_fixpoint(fams);
    for (const auto& f : fixed) CHECK(is_shifted(f));
  }
}

TEST_CASE("meet closure agrees with tuple enumeration") {
  std::mt19937_64 rng(37);
  for (int it = 0; it < 300; ++it) {
    int n = 2 + static_cast<int>(rng() % 5);
    int r = 2 + static_cast<int>(rng() % 2);
    std::vector<Family> fams;
    std::uint64_t prod = 1;
    for (int j = 0; j < r; ++j) {
      Family f = testutil::random_family(rng, n, n, 5);
      if (f.empty()) f.insert(1);
      prod *= f.count();
      fams.push_back(f);
    }
    if (prod > 10000) continue;
    CrossInstance inst;
    inst.t = 1 + static_cast<int>(rng() % 2);
    inst.families = fams;
    CHECK(is_cross_t_intersecting(inst) == testutil::naive_cross_t(fams, inst.t));

    int min_pc = 99;
    meet_closure(fams).for_each([&](std::uint64_t x) { min_pc = std::min(min_pc, std::popcount(x)); });
    // explicit minimum over tuples
    int naive_min = 99;
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t d, std::uint64_t meet) {
      if (d == fams.size()) {
        naive_min = std::min(naive_min, std::popcount(meet));
        return;
      }
      fams[d].for_each([&](std::uint64_t m) { rec(d + 1, meet & m); });
    };
    rec(0, ~0ULL);
    CHECK(min_pc == naive_min);
  }
}

TEST_CASE("up_closure preserves cross-intersection") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 100; ++it) {
    int n = 3 + static_cast<int>(rng() % 3);
    CrossInstance inst;
    inst.t = 1 + static_cast<int>(rng() % 2);
    Family f1 = testutil::random_family(rng, n, n, 4);
    if (f1.empty()) f1.insert((1ULL << n) - 1);
    std::vector<Family> fixed{f1};
    Family f2 = best_response(fixed, inst.t, std::nullopt);
    if (f2.empty()) continue;
    inst.families = {f1, f2};
    REQUIRE(is_cross_t_intersecting(inst));
    inst.families = {up_closure(f1), up_closure(f2)};
    CHECK(is_cross_t_intersecting(inst));
  }
}

TEST_CASE("fixpoint terminates via strictly decreasing potential") {
  std::mt19937_64 rng(43);
  auto potential = [](const Family& f) {
    std::uint64_t p = 0;
    f.for_each([&](std::uint64_t m) {
      while (m) {
        p += static_cast<std::uint64_t>(std::countr_zero(m)) + 1;
        m &= m - 1;
      }
    });
    return p;
  };
  for (int it = 0; it < 100; ++it) {
    Family f = testutil::random_family(rng, 6, 6, 10);
    if (f.empty()) continue;
    for (int i = 1; i <= 6; ++i)
      for (int j = i + 1; j <= 6; ++j) {
        Family g = shift_family(f, i, j);
        if (!(g == f)) CHECK(potential(g) < potential(f));
      }
  }
}
