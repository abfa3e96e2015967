#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "xfam/measures.hpp"
#include "xfam/props.hpp"

namespace xfam {

// Exhaustive maximization at desk scale.  Counting-style objectives restrict
// to families up-closed within their truncated lattice (supersets preserve all
// intersection properties and weights are non-negative, so some maximizer is
// up-closed); the last family is completed by best_response.
struct SearchSpec {
  enum class Mode { Uniform, Nonuniform, Truncated, Single };
  enum class Objective { Sum, Product };
  enum class Restriction { UpClosed, Shifted, None };

  Mode mode = Mode::Nonuniform;
  Objective objective = Objective::Sum;
  Restriction restriction = Restriction::UpClosed;
  int n = 0, r = 2, t = 1;
  int k = 0;                           // Uniform
  std::vector<int> caps;               // Truncated (khat_j); Single uses caps[0]
  std::vector<MeasureTable> measures;  // Truncated; Single uses measures[0]
  int threads = 1;
};

struct SearchResult {
  Rational value;
  std::vector<Family> witness;
  std::uint64_t nodes_explored = 0;
  std::uint64_t wall_time_ms = 0;
  bool feasible = true;
};

/// Streams every family up-closed within the (possibly size-capped) Boolean
/// lattice over [n], each exactly once.  n <= 6.
void enumerate_upsets(int n, std::optional<int> cap,
                      const std::function<void(const Family&)>& fn);

/// Inclusion-maximal G such that (fixed..., G) is r-cross t-intersecting:
/// { S : |S cap y| >= t for all y in meet_closure(fixed) }, optionally capped.
Family best_response(std::span<const Family> fixed, int t, std::optional<int> cap);

/// Exact maximum of the objective over non-empty cross-t-intersecting tuples.
SearchResult exhaustive_max(const SearchSpec& spec);

/// Maximum mu over intersecting families within [n]^(<= khat).  n <= 6.
SearchResult exhaustive_max_single(int n, int khat, const MeasureTable& mu, int threads = 1);

}  // namespace xfam
