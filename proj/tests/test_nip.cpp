#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "testutil.hpp"
#include "xfam/errors.hpp"
#include "xfam/extremal.hpp"
#include "xfam/nip.hpp"

using namespace xfam;

namespace {
CrossInstance make_inst(int t, std::vector<Family> fams) {
  CrossInstance inst;
  inst.t = t;
  inst.families = std::move(fams);
  return inst;
}
}  // namespace

TEST_CASE("nip_single") {
  auto rep = nip_single(Family::of(1, {{1}}));
  CHECK(rep.points == std::vector<int>{1});
  CHECK(rep.max_point == 1);

  rep = nip_single(Family::of(3, {{1, 2}, {2, 3}}));
  CHECK(rep.max_point == 2);
  REQUIRE(rep.witness.size() == 2);
  CHECK(nth_smallest(rep.witness[0] & rep.witness[1], 1) == 2);

  rep = nip_single(block_family(5, 1));
  CHECK(rep.max_point == 1);

  CHECK_THROWS_AS(nip_single(Family::of(4, {{1, 2}, {3, 4}})), std::domain_error);
}

TEST_CASE("nip_cross") {
  auto rep = nip_cross(make_inst(1, {Family::of(1, {{1}}), Family::of(1, {{1}})}));
  CHECK(rep.max_point == 1);

  rep = nip_cross(make_inst(1, {Family::of(3, {{1, 2}}), Family::of(3, {{2, 3}})}));
  CHECK(rep.max_point == 2);
  CHECK(rep.points == std::vector<int>{2});

  rep = nip_cross(make_inst(2, {Family::of(3, {{1, 2}, {1, 2, 3}}),
                                Family::of(3, {{1, 2}, {1, 2, 3}})}));
  CHECK(rep.max_point == 2);
  CHECK(rep.points == std::vector<int>{2});

  CHECK_THROWS_AS(nip_cross(make_inst(2, {Family::of(3, {{1, 2}}), Family::of(3, {{2, 3}})})),
                  std::domain_error);

  // witness tuple re-checks against its defining condition
  auto inst = make_inst(1, {scatter_family(4, 2, 1), block_family(4, 2)});
  rep = nip_cross(inst);
  REQUIRE(rep.max_point.has_value());
  std::uint64_t meet = rep.witness[0] & rep.witness[1];
  CHECK(nth_smallest(meet, 1) == *rep.max_point);
}

TEST_CASE("nip agrees with tuple enumeration") {
  std::mt19937_64 rng(47);
  for (int it = 0; it < 200; ++it) {
    int n = 2 + static_cast<int>(rng() % 4);
    int t = 1 + static_cast<int>(rng() % 2);
    Family f1 = testutil::random_family(rng, n, n, 5);
    if (f1.empty()) f1.insert((1ULL << n) - 1);
    std::vector<Family> fixed{f1};
    Family resp = best_response(fixed, t, std::nullopt);
    if (resp.empty()) continue;
    Family f2(n);
    auto ms = resp.members();
    for (auto m : ms)
      if (rng() % 2) f2.insert(m);
    if (f2.empty()) f2.insert(ms.back());
    auto inst = make_inst(t, {f1, f2});
    REQUIRE(is_cross_t_intersecting(inst));
    CHECK(nip_cross(inst).points == testutil::naive_nip_points(inst.families, t));
  }
}

TEST_CASE("dependent_sets") {
  auto inst = make_inst(1, {Family::of(3, {{1, 2}}), Family::of(3, {{2, 3}})});
  CHECK(dependent_sets(inst, 0, 2) == Family::of(3, {{1, 2}}));
  CHECK(dependent_sets(inst, 1, 2) == Family::of(3, {{2, 3}}));
  CHECK_THROWS_AS(dependent_sets(inst, 0, 3), std::domain_error);

  // a* = t with all members containing [t]: everything depends
  auto all = make_inst(2, {block_family(4, 2), block_family(4, 2)});
  CHECK(dependent_sets(all, 0, 2) == block_family(4, 2));

  CHECK(dependent_sets_single(Family::of(4, {{1, 2}, {1, 3}, {2, 3}}), 3) ==
        Family::of(4, {{1, 3}, {2, 3}}));
}

TEST_CASE("find_shift_target") {
  Family f = Family::of(4, {{1, 2}, {1, 3}, {2, 3}});
  CHECK(find_shift_target_single(f, Subset::of(4, {1, 3}).mask, 3, 2, 2) == 4);
  // no landing spot: [n] \ [a*] inside F
  Family g = Family::of(3, {{1, 2}, {1, 3}, {2, 3}});
  CHECK_THROWS_AS(find_shift_target_single(g, Subset::of(3, {2, 3}).mask, 2, 1, 2),
                  hypothesis_error);
}

TEST_CASE("reduce_step_single walks the heavier-half construction") {
  Family f = Family::of(4, {{1, 2}, {1, 3}, {2, 3}});
  auto mu = counting_measure(4);
  auto step = reduce_step_single(f, mu, 2, 2);
  CHECK(step.a_star == 3);
  CHECK(step.dependent_sizes == std::vector<std::uint64_t>{2});
  CHECK(step.part_h == 1);
  CHECK(step.part_h1 == 0);
  CHECK(step.part_h2 == 1);
  CHECK(step.before == 3);
  CHECK(step.after == 3);
  CHECK(step.result.front() == Family::of(4, {{1, 2}, {1, 3}, {1, 4}}));

  // refused when already at the bottom
  CHECK_THROWS_AS(reduce_step_single(block_family(4, 1), counting_measure(4), 1, 3),
                  std::invalid_argument);  // member {1,2,3,4} exceeds khat = 3
  CHECK_THROWS_AS(reduce_step_single(slice(block_family(4, 1), 1, 3), counting_measure(4), 1, 3),
                  std::domain_error);  // a* = 1
  CHECK_THROWS_AS(reduce_step_single(f, mu, 2, 3), hypothesis_error);  // n < k + khat
}

TEST_CASE("reduce_step_cross on a plain instance") {
  Family f = Family::of(3, {{1, 2}, {1, 3}, {2, 3}});
  CrossInstance inst;
  inst.t = 1;
  inst.families = {f, f};
  inst.caps = {2, 2};
  inst.ks = {1, 1};
  inst.measures = {counting_measure(3), counting_measure(3)};
  auto step = reduce_step_cross(inst);
  CHECK(step.a_star == 3);
  CHECK(!step.terminal);
  CHECK(step.case_tag == "grow-rest");
  CHECK(step.before == 6);
  CHECK(step.after >= 6);
  CrossInstance after = inst;
  after.families = step.result;
  CHECK(is_cross_t_intersecting(after));
  CHECK(*nip_cross(after).max_point <= 2);
  CHECK(step.result[0].count() + step.result[1].count() >= 6);
}

TEST_CASE("reduce_step_cross terminal block case") {
  CrossInstance inst;
  inst.t = 1;
  inst.families = {slice(scatter_family(3, 2, 1), 0, 2), slice(block_family(3, 2), 0, 2)};
  inst.caps = {2, 2};
  inst.ks = {1, 1};
  inst.measures = {counting_measure(3), counting_measure(3)};
  auto step = reduce_step_cross(inst);
  CHECK(step.terminal);
  CHECK(step.case_tag == "terminal-block");
  CHECK(step.distinguished == 1);
  CHECK(step.after == step.before);

  // a* = t is refused outright
  CrossInstance att;
  att.t = 1;
  att.families = {slice(block_family(3, 1), 1, 2), slice(block_family(3, 1), 1, 2)};
  att.caps = {2, 2};
  att.ks = {1, 1};
  att.measures = {counting_measure(3), counting_measure(3)};
  CHECK_THROWS_AS(reduce_step_cross(att), std::domain_error);
}

TEST_CASE("reduce_to_extremal_single") {
  // extremal input: empty trace
  Family star = slice(block_family(5, 1), 1, 2);
  auto trace = reduce_to_extremal_single(star, counting_measure(5), 2, 2);
  CHECK(trace.steps.empty());
  CHECK(trace.final_measure == trace.initial);

  // the worked n = 4 example: one step, measure preserved
  Family f = Family::of(4, {{1, 2}, {1, 3}, {2, 3}});
  trace = reduce_to_extremal_single(f, counting_measure(4), 2, 2);
  CHECK(trace.steps.size() == 1);
  CHECK(trace.final_measure == trace.initial);
  trace.final_families.front().for_each([&](std::uint64_t m) { CHECK((m & 1) == 1); });
}

TEST_CASE("reduce_to_extremal_single on random inputs") {
  std::mt19937_64 rng(53);
  int ran = 0;
  for (int it = 0; it < 60 && ran < 40; ++it) {
    int n = 4 + static_cast<int>(rng() % 5);  // 4..8
    int khat = 1 + static_cast<int>(rng() % (n - 1));
    int kmax = std::min(khat, n - khat);
    if (kmax < 1) continue;
    int k = 1 + static_cast<int>(rng() % kmax);
    Family f = testutil::random_shifted_intersecting(rng, n, khat, 8);
    MeasureTable mu = testutil::random_window_measure(rng, n, k, khat);
    auto trace = reduce_to_extremal_single(f, mu, k, khat);
    ++ran;
    CHECK(trace.final_measure >= trace.initial);
    Rational prev = trace.initial;
    int prev_a = n + 1;
    for (const auto& st : trace.steps) {
      CHECK(st.after >= st.before);
      CHECK(st.a_star < prev_a);
      prev_a = st.a_star;
      prev = st.after;
    }
    CHECK(trace.final_measure <= bound_single(n, k, khat, mu));
  }
  CHECK(ran >= 40);
}
