#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xfam/props.hpp"

namespace xfam {

struct NipReport {
  std::vector<int> points;                // ascending
  std::optional<int> max_point;
  std::vector<std::uint64_t> witness;     // one mask per family (pair for single)
};

/// Necessary intersection points of an intersecting family: a such that some
/// F, F' (F = F' allowed) satisfy [a] cap F cap F' = {a}.
NipReport nip_single(const Family& f);

/// Cross version: a such that some tuple has |[a] cap meet| = t and a in meet.
NipReport nip_cross(const CrossInstance& inst);

/// F in family j that participate in a witness for the maximal point a_star.
Family dependent_sets(const CrossInstance& inst, int j, int a_star);
Family dependent_sets_single(const Family& f, int a_star);

/// Smallest s in [n] \ [a_star] with s not in F and sigma_{s a_star}(F) not in
/// the family.  Throws hypothesis_error when none exists (precondition broken).
int find_shift_target_single(const Family& f, std::uint64_t F, int a_star, int k, int khat);
int find_shift_target(const CrossInstance& inst, int j, std::uint64_t F, int a_star);

struct ReductionStep {
  int a_star = 0;
  std::string case_tag;                   // "heavier-half" | "grow-rest" | "terminal-block"
  bool terminal = false;
  int distinguished = -1;                 // family index playing the paper's role r (cross)
  std::vector<std::uint64_t> dependent_sizes;
  std::uint64_t part_h = 0, part_h1 = 0, part_h2 = 0;  // single-family parts
  Rational before, after;                 // sum of measures
  std::vector<Family> result;
};

/// One reduction step on a shifted intersecting family (the heavier-half
/// construction).  All postconditions are re-checked at runtime.
ReductionStep reduce_step_single(const Family& f, const MeasureTable& mu, int k, int khat);

/// One reduction step on a shifted cross-intersecting instance, or the
/// terminal block-family case.  Requires caps/ks/measures on the instance.
ReductionStep reduce_step_cross(const CrossInstance& inst);

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  Rational initial, final_measure;
  std::vector<Family> final_families;
  bool terminal_block = false;            // stopped in the block-family case
};

ReductionTrace reduce_to_extremal_single(Family f, const MeasureTable& mu, int k, int khat);
ReductionTrace reduce_to_extremal_cross(CrossInstance inst);

}  // namespace xfam
