#include "xfam/nip.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xfam/errors.hpp"

namespace xfam {
namespace {

std::string mask_str(std::uint64_t m) {
  std::string out = "{";
  bool first = true;
  while (m) {
    int b = std::countr_zero(m);
    m &= m - 1;
    if (!first) out += ",";
    out += std::to_string(b + 1);
    first = false;
  }
  return out + "}";
}

// Meets of one member per family, layered, with provenance for witness
// reconstruction: prov[i][meet] = (meet over families 0..i-1, member of i).
struct LayeredMeets {
  std::vector<std::uint64_t> final_meets;  // ascending
  std::vector<std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>> prov;

  std::vector<std::uint64_t> witness(std::uint64_t meet, std::size_t r) const {
    std::vector<std::uint64_t> tuple(r);
    std::uint64_t cur = meet;
    for (std::size_t i = r - 1; i >= 1; --i) {
      auto [prev, member] = prov[i].at(cur);
      tuple[i] = member;
      cur = prev;
    }
    tuple[0] = cur;
    return tuple;
  }
};

LayeredMeets layered_meets(const std::vector<Family>& families) {
  LayeredMeets lm;
  lm.prov.resize(families.size());
  std::set<std::uint64_t> cur;
  for (auto m : families.front().members()) cur.insert(m);
  for (std::size_t i = 1; i < families.size(); ++i) {
    std::set<std::uint64_t> next;
    auto ys = families[i].members();
    for (auto x : cur)
      for (auto y : ys) {
        std::uint64_t meet = x & y;
        if (next.insert(meet).second) lm.prov[i].emplace(meet, std::make_pair(x, y));
      }
    cur = std::move(next);
  }
  lm.final_meets.assign(cur.begin(), cur.end());
  return lm;
}

int max_nip_cross_value(const CrossInstance& inst) {
  Family closure = meet_closure(inst.families);
  int best = 0;
  closure.for_each([&](std::uint64_t x) { best = std::max(best, nth_smallest(x, inst.t)); });
  return best;
}

std::uint64_t low(int a) { return prefix_mask(a); }

}  // namespace

NipReport nip_single(const Family& f) {
  if (!is_t_intersecting(f, 1))
    throw std::domain_error("nip_single: family is not intersecting");
  NipReport rep;
  auto ms = f.members();
  std::set<int> pts;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i; j < ms.size(); ++j)
      pts.insert(nth_smallest(ms[i] & ms[j], 1));
  pts.erase(0);
  rep.points.assign(pts.begin(), pts.end());
  if (!rep.points.empty()) {
    int a = rep.points.back();
    rep.max_point = a;
    for (std::size_t i = 0; i < ms.size() && rep.witness.empty(); ++i)
      for (std::size_t j = i; j < ms.size(); ++j)
        if (nth_smallest(ms[i] & ms[j], 1) == a) {
          rep.witness = {ms[i], ms[j]};
          break;
        }
  }
  return rep;
}

NipReport nip_cross(const CrossInstance& inst) {
  inst.validate(true);
  if (!is_cross_t_intersecting(inst))
    throw std::domain_error("nip_cross: instance is not cross-t-intersecting");
  NipReport rep;
  auto lm = layered_meets(inst.families);
  std::set<int> pts;
  for (auto x : lm.final_meets) pts.insert(nth_smallest(x, inst.t));
  pts.erase(0);
  rep.points.assign(pts.begin(), pts.end());
  if (!rep.points.empty()) {
    int a = rep.points.back();
    rep.max_point = a;
    for (auto x : lm.final_meets)
      if (nth_smallest(x, inst.t) == a) {
        rep.witness = lm.witness(x, inst.families.size());
        break;
      }
  }
  return rep;
}

Family dependent_sets_single(const Family& f, int a_star) {
  auto rep = nip_single(f);
  if (!rep.max_point || *rep.max_point != a_star)
    throw std::domain_error("dependent_sets_single: a_star is not the maximal intersection point");
  Family dep(f.n());
  auto ms = f.members();
  for (auto x : ms)
    for (auto y : ms)
      if (nth_smallest(x & y, 1) == a_star) { dep.insert(x); break; }
  return dep;
}

Family dependent_sets(const CrossInstance& inst, int j, int a_star) {
  if (j < 0 || j >= inst.r()) throw std::invalid_argument("dependent_sets: bad family index");
  auto rep = nip_cross(inst);
  if (!rep.max_point || *rep.max_point != a_star)
    throw std::domain_error("dependent_sets: a_star is not the maximal intersection point");
  std::vector<Family> others;
  for (int i = 0; i < inst.r(); ++i)
    if (i != j) others.push_back(inst.families[static_cast<std::size_t>(i)]);
  auto meets = meet_closure(others).members();
  Family dep(inst.n());
  inst.families[static_cast<std::size_t>(j)].for_each([&](std::uint64_t F) {
    for (auto y : meets)
      if (nth_smallest(F & y, inst.t) == a_star) { dep.insert(F); return; }
  });
  return dep;
}

namespace {

int shift_target_scan(const Family& fam, std::uint64_t F, int a_star) {
  int n = fam.n();
  std::uint64_t astar_bit = 1ULL << (a_star - 1);
  for (int s = a_star + 1; s <= n; ++s) {
    std::uint64_t sbit = 1ULL << (s - 1);
    if (F & sbit) continue;
    std::uint64_t img = (F & ~astar_bit) | sbit;
    if (!fam.contains(img)) return s;
  }
  return 0;
}

}  // namespace

int find_shift_target_single(const Family& f, std::uint64_t F, int a_star, int k, int khat) {
  int n = f.n();
  if (n < k + khat)
    throw hypothesis_error("find_shift_target_single: n >= k + khat violated");
  if (!f.contains(F)) throw std::invalid_argument("find_shift_target_single: F not a member");
  if (!((F >> (a_star - 1)) & 1))
    throw std::invalid_argument("find_shift_target_single: a_star not in F");
  if (!is_shifted(f)) throw std::invalid_argument("find_shift_target_single: family not shifted");
  int s = shift_target_scan(f, F, a_star);
  if (s == 0)
    throw hypothesis_error("find_shift_target_single: no landing spot for " + mask_str(F) +
                           " at a_star=" + std::to_string(a_star));
  return s;
}

int find_shift_target(const CrossInstance& inst, int j, std::uint64_t F, int a_star) {
  inst.validate(true);
  if (inst.caps.empty() || inst.ks.empty())
    throw std::invalid_argument("find_shift_target: instance lacks caps/ks");
  int n = inst.n();
  int worst = 0;
  for (int i = 0; i < inst.r(); ++i) {
    int mincap = inst.n();
    for (int l = 0; l < inst.r(); ++l)
      if (l != i) mincap = std::min(mincap, inst.caps[static_cast<std::size_t>(l)]);
    worst = std::max(worst, inst.ks[static_cast<std::size_t>(i)] + mincap);
  }
  if (!(n > worst - inst.t))
    throw hypothesis_error("find_shift_target: n > max_i(k_i + min_{j!=i} khat_j) - t violated");
  const Family& fam = inst.families[static_cast<std::size_t>(j)];
  if (!fam.contains(F)) throw std::invalid_argument("find_shift_target: F not a member");
  if (!is_shifted(fam)) throw std::invalid_argument("find_shift_target: family not shifted");
  int s = shift_target_scan(fam, F, a_star);
  if (s == 0)
    throw hypothesis_error("find_shift_target: no landing spot for " + mask_str(F) +
                           " at a_star=" + std::to_string(a_star));
  return s;
}

namespace {

void check_disjoint(const Family& a, const Family& b, const char* la, const char* lb) {
  if (!a.intersects(b)) return;
  Family common = a;
  common &= b;
  std::ostringstream os;
  os << "reduction parts " << la << " and " << lb << " collide:";
  common.for_each([&](std::uint64_t m) { os << " " << mask_str(m); });
  throw reduction_error(os.str());
}

Rational measure_masks(const MeasureTable& mu, const std::vector<std::uint64_t>& masks) {
  Rational sum = 0;
  for (auto m : masks) sum += mu.weight(std::popcount(m));
  return sum;
}

}  // namespace

ReductionStep reduce_step_single(const Family& f, const MeasureTable& mu, int k, int khat) {
  int n = f.n();
  if (mu.n != n) throw std::invalid_argument("reduce_step_single: measure dimension mismatch");
  if (k < 1 || khat < k || khat > n) throw std::invalid_argument("reduce_step_single: bad (k,khat)");
  if (n < k + khat) throw hypothesis_error("reduce_step_single: n >= k + khat violated");
  if (!non_increasing_on(mu, k, khat))
    throw hypothesis_error("reduce_step_single: mu not non-increasing on [k,khat]");
  bool capped = true;
  f.for_each([&](std::uint64_t m) { if (std::popcount(m) > khat) capped = false; });
  if (!capped) throw std::invalid_argument("reduce_step_single: member exceeds khat");
  if (!is_shifted(f)) throw std::invalid_argument("reduce_step_single: family not shifted");

  auto rep = nip_single(f);  // also checks intersecting
  if (!rep.max_point || *rep.max_point <= 1)
    throw std::domain_error("reduce_step_single: step refused, maximal point is already 1");
  int a_star = *rep.max_point;
  std::uint64_t astar_bit = 1ULL << (a_star - 1);

  Family dep = dependent_sets_single(f, a_star);
  dep.for_each([&](std::uint64_t F) {
    if (f.contains(F & ~astar_bit))
      throw reduction_error("reduce_step_single: F \\ {a_star} present for dependent " + mask_str(F));
  });

  // Partition dependents by the prefix trace A = F cap [a_star - 1] and keep
  // the heavier half of each complementary pair (ties keep the side with 1).
  std::map<std::uint64_t, std::vector<std::uint64_t>> groups;
  dep.for_each([&](std::uint64_t F) { groups[F & low(a_star - 1)].push_back(F); });
  auto group_measure = [&](std::uint64_t A) {
    auto it = groups.find(A);
    return it == groups.end() ? Rational(0) : measure_masks(mu, it->second);
  };
  std::vector<std::uint64_t> h_masks;
  for (const auto& [A, masks] : groups) {
    std::uint64_t comp = low(a_star - 1) & ~A;
    Rational mine = measure_masks(mu, masks), theirs = group_measure(comp);
    if (mine > theirs || (mine == theirs && (A & 1)))
      h_masks.insert(h_masks.end(), masks.begin(), masks.end());
  }

  Family h(n), h1(n), h2(n);
  std::vector<std::uint64_t> h1_masks, h2_masks;
  for (auto F : h_masks) {
    h.insert(F);
    if (std::popcount(F) > k) {
      h1_masks.push_back(F & ~astar_bit);
    } else {
      int s = find_shift_target_single(f, F, a_star, k, khat);
      h2_masks.push_back((F & ~astar_bit) | (1ULL << (s - 1)));
    }
  }
  for (auto m : h1_masks) h1.insert(m);
  for (auto m : h2_masks) h2.insert(m);
  if (h1.count() != h1_masks.size())
    throw reduction_error("reduce_step_single: collision inside H+1");
  if (h2.count() != h2_masks.size()) {
    std::ostringstream os;
    os << "reduce_step_single: collision inside H+2, images:";
    for (auto m : h2_masks) os << " " << mask_str(m);
    throw reduction_error(os.str());
  }

  Family rest = f;
  rest.subtract(dep);
  check_disjoint(rest, h, "F\\F(a*)", "H");
  check_disjoint(rest, h1, "F\\F(a*)", "H+1");
  check_disjoint(rest, h2, "F\\F(a*)", "H+2");
  check_disjoint(h, h1, "H", "H+1");
  check_disjoint(h, h2, "H", "H+2");
  check_disjoint(h1, h2, "H+1", "H+2");

  Family updated = rest;
  updated |= h;
  updated |= h1;
  updated |= h2;

  Rational mu_h = measure_family(mu, h);
  Family shed = dep;
  shed.subtract(h);
  if (measure_family(mu, h1) + measure_family(mu, h2) < mu_h)
    throw reduction_error("reduce_step_single: mu(H+1 u H+2) < mu(H)");
  if (mu_h < measure_family(mu, shed))
    throw reduction_error("reduce_step_single: heavier half lighter than its complement");

  Rational before = measure_family(mu, f), after = measure_family(mu, updated);
  if (after < before) throw reduction_error("reduce_step_single: measure decreased");
  if (!is_t_intersecting(updated, 1))
    throw reduction_error("reduce_step_single: updated family not intersecting");
  {
    auto ms = updated.members();
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (std::size_t j = i; j < ms.size(); ++j)
        if ((ms[i] & ms[j] & low(a_star - 1)) == 0)
          throw reduction_error("reduce_step_single: members " + mask_str(ms[i]) + " and " +
                                mask_str(ms[j]) + " do not meet within [a_star-1]");
  }
  auto rep_after = nip_single(updated);
  if (rep_after.max_point && *rep_after.max_point >= a_star)
    throw reduction_error("reduce_step_single: maximal point did not decrease");

  ReductionStep step;
  step.a_star = a_star;
  step.case_tag = "heavier-half";
  step.dependent_sizes = {dep.count()};
  step.part_h = h.count();
  step.part_h1 = h1.count();
  step.part_h2 = h2.count();
  step.before = before;
  step.after = after;
  step.result = {updated};
  return step;
}

namespace {

void require_cross_step_inputs(const CrossInstance& inst) {
  inst.validate(true);
  if (inst.caps.empty() || inst.ks.empty() || inst.measures.empty())
    throw std::invalid_argument("reduce_step_cross: instance lacks caps/ks/measures");
  int r = inst.r();
  if (r < 2) throw std::invalid_argument("reduce_step_cross: r < 2");
  int n = inst.n();
  for (int j = 0; j < r; ++j) {
    auto js = static_cast<std::size_t>(j);
    if (inst.ks[js] < 1 || inst.ks[js] > inst.caps[js])
      throw std::invalid_argument("reduce_step_cross: bad (k,khat) pair");
    if (!non_increasing_on(inst.measures[js], inst.ks[js], inst.caps[js]))
      throw hypothesis_error("reduce_step_cross: mu_" + std::to_string(j + 1) +
                             " not non-increasing on its window");
    if (!is_shifted(inst.families[js]))
      throw std::invalid_argument("reduce_step_cross: family " + std::to_string(j + 1) +
                                  " not shifted");
  }
  int worst = 0;
  for (int i = 0; i < r; ++i) {
    int mincap = n;
    for (int l = 0; l < r; ++l)
      if (l != i) mincap = std::min(mincap, inst.caps[static_cast<std::size_t>(l)]);
    worst = std::max(worst, inst.ks[static_cast<std::size_t>(i)] + mincap);
  }
  if (!(n > worst - inst.t))
    throw hypothesis_error("reduce_step_cross: n > max_i(k_i + min_{j!=i} khat_j) - t violated");
  if (!is_cross_t_intersecting(inst))
    throw std::domain_error("reduce_step_cross: instance not cross-t-intersecting");
}

}  // namespace

ReductionStep reduce_step_cross(const CrossInstance& inst) {
  require_cross_step_inputs(inst);
  int r = inst.r(), n = inst.n();
  auto rep = nip_cross(inst);
  int a_star = *rep.max_point;
  if (a_star <= inst.t)
    throw std::domain_error("reduce_step_cross: step refused, maximal point equals t");
  std::uint64_t astar_bit = 1ULL << (a_star - 1);

  std::vector<Family> dep;
  dep.reserve(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    dep.push_back(dependent_sets(inst, j, a_star));
    if (dep.back().empty())
      throw reduction_error("reduce_step_cross: dependent family " + std::to_string(j + 1) +
                            " empty despite a_star being a necessary point");
    dep.back().for_each([&](std::uint64_t F) {
      if (inst.families[static_cast<std::size_t>(j)].contains(F & ~astar_bit))
        throw reduction_error("reduce_step_cross: F \\ {a_star} present for dependent " +
                              mask_str(F));
    });
  }

  ReductionStep step;
  step.a_star = a_star;
  for (int j = 0; j < r; ++j) step.dependent_sizes.push_back(dep[static_cast<std::size_t>(j)].count());

  Rational before = 0;
  for (int j = 0; j < r; ++j)
    before += measure_family(inst.measures[static_cast<std::size_t>(j)],
                             inst.families[static_cast<std::size_t>(j)]);
  step.before = before;

  // Terminal case: some family consists entirely of dependent sets.
  for (int j = 0; j < r; ++j) {
    auto js = static_cast<std::size_t>(j);
    Family leftovers = inst.families[js];
    leftovers.subtract(dep[js]);
    if (!leftovers.empty()) continue;
    bool block = true;
    inst.families[js].for_each([&](std::uint64_t F) {
      if ((F & low(a_star)) != low(a_star)) block = false;
    });
    if (!block)
      throw reduction_error("reduce_step_cross: fully dependent family not inside B_{n,a*}");
    if (r == 2) {
      const Family& other = inst.families[static_cast<std::size_t>(1 - j)];
      bool scatter = true;
      other.for_each([&](std::uint64_t F) {
        if (std::popcount(F & low(a_star)) < inst.t) scatter = false;
      });
      if (!scatter)
        throw reduction_error("reduce_step_cross: counterpart family not inside A_{n,a*,t}");
    }
    step.case_tag = "terminal-block";
    step.terminal = true;
    step.distinguished = j;
    step.after = before;
    step.result = inst.families;
    return step;
  }

  // All families keep an independent set; the lightest dependent family plays
  // the paper's distinguished index and is shed, the rest grow.
  int loser = 0;
  Rational loser_measure;
  for (int j = 0; j < r; ++j) {
    auto js = static_cast<std::size_t>(j);
    Rational m = measure_family(inst.measures[js], dep[js]);
    if (j == 0 || m <= loser_measure) {
      loser = j;
      loser_measure = m;
    }
  }

  std::vector<Family> updated = inst.families;
  for (int i = 0; i < r; ++i) {
    auto is = static_cast<std::size_t>(i);
    if (i == loser) {
      updated[is].subtract(dep[is]);
      if (updated[is].empty())
        throw reduction_error("reduce_step_cross: shed family became empty");
      continue;
    }
    std::vector<std::uint64_t> added;
    dep[is].for_each([&](std::uint64_t F) {
      if (std::popcount(F) > inst.ks[is]) {
        added.push_back(F & ~astar_bit);
      } else {
        int s = find_shift_target(inst, i, F, a_star);
        added.push_back((F & ~astar_bit) | (1ULL << (s - 1)));
      }
    });
    Family added_fam(n);
    for (auto m : added) {
      if (updated[is].contains(m))
        throw reduction_error("reduce_step_cross: replacement " + mask_str(m) +
                              " already present in family " + std::to_string(i + 1));
      added_fam.insert(m);
    }
    if (added_fam.count() != added.size()) {
      std::ostringstream os;
      os << "reduce_step_cross: replacement collision in family " << i + 1 << ", images:";
      for (auto m : added) os << " " << mask_str(m);
      throw reduction_error(os.str());
    }
    if (measure_family(inst.measures[is], added_fam) <
        measure_family(inst.measures[is], dep[is]))
      throw reduction_error("reduce_step_cross: replacements lighter than the dependents");
    updated[is] |= added_fam;
  }

  CrossInstance out = inst;
  out.families = updated;
  out.validate(true);  // caps still respected
  if (!is_cross_t_intersecting(out))
    throw reduction_error("reduce_step_cross: updated instance not cross-t-intersecting");
  if (max_nip_cross_value(out) >= a_star)
    throw reduction_error("reduce_step_cross: maximal point did not decrease");

  Rational after = 0;
  for (int j = 0; j < r; ++j)
    after += measure_family(inst.measures[static_cast<std::size_t>(j)],
                            updated[static_cast<std::size_t>(j)]);
  if (after < before) throw reduction_error("reduce_step_cross: measure sum decreased");

  step.case_tag = "grow-rest";
  step.distinguished = loser;
  step.after = after;
  step.result = std::move(updated);
  return step;
}

ReductionTrace reduce_to_extremal_single(Family f, const MeasureTable& mu, int k, int khat) {
  ReductionTrace trace;
  trace.initial = measure_family(mu, f);
  int prev_a = khat + static_cast<int>(f.n()) + 1;
  for (;;) {
    f = shift_to_fixpoint({f}).front();
    auto rep = nip_single(f);
    if (!rep.max_point) break;  // no pairs left to pivot on
    int a = *rep.max_point;
    if (a >= prev_a)
      throw reduction_error("reduce_to_extremal_single: maximal point failed to decrease");
    if (a == 1) break;
    auto step = reduce_step_single(f, mu, k, khat);
    f = step.result.front();
    prev_a = a;
    trace.steps.push_back(std::move(step));
  }
  if (!f.empty()) {
    f.for_each([&](std::uint64_t m) {
      if (!(m & 1))
        throw reduction_error("reduce_to_extremal_single: final family member misses element 1");
    });
  }
  trace.final_measure = measure_family(mu, f);
  if (trace.final_measure < trace.initial)
    throw reduction_error("reduce_to_extremal_single: final measure below initial");
  trace.final_families = {std::move(f)};
  return trace;
}

ReductionTrace reduce_to_extremal_cross(CrossInstance inst) {
  ReductionTrace trace;
  trace.initial = 0;
  for (int j = 0; j < inst.r(); ++j)
    trace.initial += measure_family(inst.measures[static_cast<std::size_t>(j)],
                                    inst.families[static_cast<std::size_t>(j)]);
  int prev_a = inst.n() + 1;
  for (;;) {
    inst.families = shift_to_fixpoint(std::move(inst.families));
    auto rep = nip_cross(inst);
    int a = *rep.max_point;
    if (a >= prev_a)
      throw reduction_error("reduce_to_extremal_cross: maximal point failed to decrease");
    if (a == inst.t) {
      for (const auto& fam : inst.families)
        fam.for_each([&](std::uint64_t m) {
          if ((m & low(inst.t)) != low(inst.t))
            throw reduction_error("reduce_to_extremal_cross: member outside B_{n,t} at a* = t");
        });
      break;
    }
    auto step = reduce_step_cross(inst);
    bool terminal = step.terminal;
    inst.families = step.result;
    prev_a = a;
    trace.steps.push_back(std::move(step));
    if (terminal) {
      trace.terminal_block = true;
      break;
    }
  }
  trace.final_measure = 0;
  for (int j = 0; j < inst.r(); ++j)
    trace.final_measure += measure_family(inst.measures[static_cast<std::size_t>(j)],
                                          inst.families[static_cast<std::size_t>(j)]);
  if (trace.final_measure < trace.initial)
    throw reduction_error("reduce_to_extremal_cross: final measure below initial");
  trace.final_families = std::move(inst.families);
  return trace;
}

}  // namespace xfam
