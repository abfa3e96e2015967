#include "xfam/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "xfam/errors.hpp"

// The searches run on a "small universe": with n <= 6 there are at most 64
// masks, so a whole family fits one 64-bit board (bit m <=> mask m present)
// and best-response propagation is a chain of ANDs.

namespace xfam {
namespace {

constexpr int kHardMaxN = 6;

int soft_n_cap(int base) {
  if (const char* env = std::getenv("XFAM_MAX_N")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > base) return static_cast<int>(std::min<long>(v, kHardMaxN));
  }
  return base;
}

std::uint64_t board_of(const Family& f) {
  std::uint64_t b = 0;
  f.for_each([&](std::uint64_t m) { b |= 1ULL << m; });
  return b;
}

Family family_of(int n, std::uint64_t board) {
  Family f(n);
  while (board) {
    int m = std::countr_zero(board);
    board &= board - 1;
    f.insert(static_cast<std::uint64_t>(m));
  }
  return f;
}

// Lexicographic order on witness tuples: families compared in order, each as
// its ascending member-mask sequence.
bool lex_less(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    std::uint64_t x = a[i], y = b[i];
    if (x == y) continue;
    while (x && y) {
      int mx = std::countr_zero(x), my = std::countr_zero(y);
      if (mx != my) return mx < my;
      x &= x - 1;
      y &= y - 1;
    }
    return x == 0;
  }
  return a.size() < b.size();
}

struct Universe {
  int n = 0;
  int nmasks = 0;
  // respmask[y] = board of S with |S & y| >= t
  std::vector<std::uint64_t> respmask;

  Universe(int n_, int t) : n(n_), nmasks(1 << n_) {
    respmask.assign(static_cast<std::size_t>(nmasks), 0);
    for (int y = 0; y < nmasks; ++y) {
      std::uint64_t b = 0;
      for (int s = 0; s < nmasks; ++s)
        if (std::popcount(static_cast<unsigned>(s & y)) >= t) b |= 1ULL << s;
      respmask[static_cast<std::size_t>(y)] = b;
    }
  }
};

// Mask processing order for up-set enumeration: larger sets first, so that a
// mask may be included only once all its strict supersets inside the universe
// have been decided (and are present).
std::vector<int> upset_order(std::uint64_t universe) {
  std::vector<int> order;
  std::uint64_t u = universe;
  while (u) {
    order.push_back(std::countr_zero(u));
    u &= u - 1;
  }
  std::sort(order.begin(), order.end(), [](int a, int b) {
    int pa = std::popcount(static_cast<unsigned>(a)), pb = std::popcount(static_cast<unsigned>(b));
    return pa != pb ? pa > pb : a < b;
  });
  return order;
}

std::vector<std::uint64_t> superset_boards(int nmasks, std::uint64_t universe) {
  std::vector<std::uint64_t> sup(static_cast<std::size_t>(nmasks), 0);
  for (int m = 0; m < nmasks; ++m) {
    if (!((universe >> m) & 1)) continue;
    std::uint64_t b = 0;
    for (int s = 0; s < nmasks; ++s)
      if (s != m && (s & m) == m && ((universe >> s) & 1)) b |= 1ULL << s;
    sup[static_cast<std::size_t>(m)] = b;
  }
  return sup;
}

bool board_shifted(std::uint64_t board, int n) {
  std::uint64_t u = board;
  while (u) {
    int m = std::countr_zero(u);
    u &= u - 1;
    for (int j = 2; j <= n; ++j) {
      if (!((m >> (j - 1)) & 1)) continue;
      for (int i = 1; i < j; ++i) {
        if ((m >> (i - 1)) & 1) continue;
        int img = (m & ~(1 << (j - 1))) | (1 << (i - 1));
        if (!((board >> img) & 1)) return false;
      }
    }
  }
  return true;
}

template <typename VT>
struct CrossEngine {
  int n, t, r;
  bool product = false;
  bool shifted_only = false;
  Universe uni;
  std::vector<std::uint64_t> universe;              // per family
  std::vector<std::vector<int>> order;              // per enumerated family
  std::vector<std::vector<std::uint64_t>> sup;      // per enumerated family
  std::vector<std::vector<VT>> weights;             // per family, indexed by mask

  struct Best {
    bool has = false;
    VT value{};
    std::vector<std::uint64_t> boards;
  };

  CrossEngine(int n_, int t_, int r_) : n(n_), t(t_), r(r_), uni(n_, t_) {}

  VT board_weight(int fam, std::uint64_t board) const {
    VT v{};
    const auto& w = weights[static_cast<std::size_t>(fam)];
    while (board) {
      int m = std::countr_zero(board);
      board &= board - 1;
      v += w[static_cast<std::size_t>(m)];
    }
    return v;
  }

  static void consider(Best& best, VT value, std::vector<std::uint64_t> boards) {
    if (!best.has || value > best.value ||
        (value == best.value && lex_less(boards, best.boards))) {
      best.has = true;
      best.value = std::move(value);
      best.boards = std::move(boards);
    }
  }

  struct Path {
    std::vector<std::uint64_t> boards;
    std::vector<VT> values;
    std::vector<std::uint64_t> f0members;
  };

  void evaluate(std::uint64_t resp_in, Path& path, Best& best) const {
    std::uint64_t resp = resp_in & universe[static_cast<std::size_t>(r - 1)];
    if (!resp) return;
    VT last = board_weight(r - 1, resp);
    VT total;
    if (product) {
      total = last;
      for (const auto& v : path.values) total *= v;
    } else {
      total = last;
      for (const auto& v : path.values) total += v;
    }
    auto boards = path.boards;
    boards.push_back(resp);
    consider(best, std::move(total), std::move(boards));
  }

  // DFS over family `fam`'s universe in up-set order.  `resp` carries the
  // accumulated best-response board for the final family.
  void dfs(int fam, std::size_t idx, std::uint64_t board, VT value, std::uint64_t resp,
           Path& path, Best& best, std::uint64_t& nodes) const {
    ++nodes;
    const auto& ord = order[static_cast<std::size_t>(fam)];
    if (idx == ord.size()) {
      if (!board) return;  // families must be non-empty
      if (shifted_only && !board_shifted(board, n)) return;
      path.boards.push_back(board);
      path.values.push_back(value);
      if (fam == r - 2) {
        evaluate(resp, path, best);
      } else {
        if (r == 3) {
          std::uint64_t b = board;
          while (b) {
            path.f0members.push_back(static_cast<std::uint64_t>(std::countr_zero(b)));
            b &= b - 1;
          }
        }
        dfs(fam + 1, 0, 0, VT{}, resp, path, best, nodes);
        if (r == 3) path.f0members.clear();
      }
      path.boards.pop_back();
      path.values.pop_back();
      return;
    }
    int m = ord[idx];
    // include m
    if ((sup[static_cast<std::size_t>(fam)][static_cast<std::size_t>(m)] & ~board) == 0) {
      std::uint64_t resp2 = resp;
      if (r == 2) {
        resp2 &= uni.respmask[static_cast<std::size_t>(m)];
      } else if (fam == 1) {
        for (auto x : path.f0members)
          resp2 &= uni.respmask[static_cast<std::size_t>(x & static_cast<std::uint64_t>(m))];
      }
      if (resp2)
        dfs(fam, idx + 1, board | (1ULL << m),
            value + weights[static_cast<std::size_t>(fam)][static_cast<std::size_t>(m)], resp2,
            path, best, nodes);
    }
    // exclude m
    dfs(fam, idx + 1, board, value, resp, path, best, nodes);
  }

  struct Task {
    std::uint64_t board, resp;
    VT value;
  };

  // Split the family-0 DFS at a fixed prefix depth; tasks are the feasible
  // depth-d states.  Node counts are independent of the split.
  void prefix(std::size_t depth, std::size_t idx, std::uint64_t board, VT value,
              std::uint64_t resp, std::vector<Task>& tasks, std::uint64_t& nodes) const {
    if (idx == depth) {
      tasks.push_back(Task{board, resp, value});
      return;
    }
    ++nodes;
    int m = order[0][idx];
    if ((sup[0][static_cast<std::size_t>(m)] & ~board) == 0) {
      std::uint64_t resp2 = resp;
      if (r == 2) resp2 &= uni.respmask[static_cast<std::size_t>(m)];
      if (resp2)
        prefix(depth, idx + 1, board | (1ULL << m), value + weights[0][static_cast<std::size_t>(m)],
               resp2, tasks, nodes);
    }
    prefix(depth, idx + 1, board, value, resp, tasks, nodes);
  }

  SearchResult run(int threads) const {
    auto start = std::chrono::steady_clock::now();
    std::uint64_t all = (n == 6) ? ~0ULL : ((1ULL << (1 << n)) - 1);
    Best best;
    std::uint64_t nodes = 0;

    std::size_t depth = 0;
    if (threads > 1) {
      std::size_t want = 1;
      while ((1ULL << want) < static_cast<std::size_t>(threads) * 8) ++want;
      depth = std::min(order[0].size(), want);
    }
    std::vector<Task> tasks;
    if (depth == 0) {
      tasks.push_back(Task{0, all, VT{}});
    } else {
      prefix(depth, 0, 0, VT{}, all, tasks, nodes);
    }

    if (threads <= 1 || tasks.size() <= 1) {
      Path path;
      for (const auto& task : tasks)
        dfs(0, depth, task.board, task.value, task.resp, path, best, nodes);
    } else {
      std::atomic<std::size_t> next{0};
      std::mutex merge;
      auto worker = [&]() {
        Best local;
        std::uint64_t local_nodes = 0;
        Path path;
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          dfs(0, depth, tasks[i].board, tasks[i].value, tasks[i].resp, path, local, local_nodes);
        }
        std::lock_guard<std::mutex> lock(merge);
        nodes += local_nodes;
        if (local.has) consider(best, std::move(local.value), std::move(local.boards));
      };
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    SearchResult res;
    res.nodes_explored = nodes;
    res.feasible = best.has;
    if (best.has) {
      res.value = to_rational(best.value);
      for (auto b : best.boards) res.witness.push_back(family_of(n, b));
    }
    res.wall_time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              start)
            .count());
    return res;
  }

  Rational scale_sum = 1;      // sum objective: value / scale_sum
  Rational scale_product = 1;  // product objective: value / scale_product

  Rational to_rational(const VT& v) const {
    Rational raw(Int(v));
    return product ? raw / scale_product : raw / scale_sum;
  }
};

Int lcm_int(Int a, Int b) { return a / boost::multiprecision::gcd(a, b) * b; }

struct ScaledWeights {
  std::vector<std::vector<Int>> w;  // per family per mask
  Int sum_scale = 1;                // global denominator for sums
  std::vector<Int> fam_scale;       // per-family denominator for products
};

ScaledWeights scale_weights(int n, const std::vector<MeasureTable>& mus,
                            const std::vector<std::uint64_t>& universes, bool product) {
  int nmasks = 1 << n;
  ScaledWeights sw;
  std::size_t r = mus.size();
  sw.fam_scale.assign(r, 1);
  if (product) {
    for (std::size_t j = 0; j < r; ++j)
      for (int s = 0; s <= n; ++s)
        sw.fam_scale[j] = lcm_int(sw.fam_scale[j], boost::multiprecision::denominator(mus[j].weight(s)));
  } else {
    for (std::size_t j = 0; j < r; ++j)
      for (int s = 0; s <= n; ++s)
        sw.sum_scale = lcm_int(sw.sum_scale, boost::multiprecision::denominator(mus[j].weight(s)));
  }
  sw.w.resize(r);
  for (std::size_t j = 0; j < r; ++j) {
    sw.w[j].assign(static_cast<std::size_t>(nmasks), 0);
    Int scale = product ? sw.fam_scale[j] : sw.sum_scale;
    for (int m = 0; m < nmasks; ++m) {
      if (!((universes[j] >> m) & 1)) continue;
      Rational scaled = mus[j].weight(std::popcount(static_cast<unsigned>(m))) * Rational(scale);
      sw.w[j][static_cast<std::size_t>(m)] = boost::multiprecision::numerator(scaled);
    }
  }
  return sw;
}

template <typename VT>
SearchResult run_cross(int n, int t, int r, bool product, SearchSpec::Restriction restr,
                       const std::vector<std::uint64_t>& universes, const ScaledWeights& sw,
                       int threads) {
  CrossEngine<VT> eng(n, t, r);
  eng.product = product;
  eng.shifted_only = restr == SearchSpec::Restriction::Shifted;
  eng.universe = universes;
  eng.weights.resize(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    auto ju = static_cast<std::size_t>(j);
    eng.weights[ju].resize(sw.w[ju].size());
    for (std::size_t m = 0; m < sw.w[ju].size(); ++m)
      eng.weights[ju][m] = static_cast<VT>(sw.w[ju][m]);
  }
  for (int j = 0; j + 1 < r; ++j) {
    auto ju = static_cast<std::size_t>(j);
    eng.order.push_back(upset_order(universes[ju]));
    eng.sup.push_back(superset_boards(1 << n, universes[ju]));
  }
  eng.scale_sum = Rational(sw.sum_scale);
  eng.scale_product = 1;
  for (const auto& d : sw.fam_scale) eng.scale_product *= Rational(d);
  return eng.run(threads);
}

// Masks of popcount < t can never sit in a valid family; dropping them keeps
// every feasible up-set enumerable and shrinks the search.
std::uint64_t drop_small(std::uint64_t universe, int nmasks, int t) {
  for (int m = 0; m < nmasks; ++m)
    if (std::popcount(static_cast<unsigned>(m)) < t) universe &= ~(1ULL << m);
  return universe;
}

SearchResult dispatch_cross(const SearchSpec& spec, const std::vector<MeasureTable>& mus,
                            const std::vector<std::uint64_t>& universes) {
  bool product = spec.objective == SearchSpec::Objective::Product;
  auto universes_small = universes;
  for (auto& u : universes_small) u = drop_small(u, 1 << spec.n, spec.t);
  ScaledWeights sw = scale_weights(spec.n, mus, universes_small, product);

  Int cap = 0;
  if (product) {
    cap = 1;
    for (std::size_t j = 0; j < sw.w.size(); ++j) {
      Int fam_total = 0;
      for (const auto& x : sw.w[j]) fam_total += x;
      cap *= std::max<Int>(fam_total, 1);
    }
  } else {
    for (std::size_t j = 0; j < sw.w.size(); ++j)
      for (const auto& x : sw.w[j]) cap += x;
  }
  if (cap < (Int(1) << 62))
    return run_cross<std::int64_t>(spec.n, spec.t, spec.r, product, spec.restriction,
                                   universes_small, sw, spec.threads);
  return run_cross<Int>(spec.n, spec.t, spec.r, product, spec.restriction, universes_small, sw,
                        spec.threads);
}

}  // namespace

void enumerate_upsets(int n, std::optional<int> cap,
                      const std::function<void(const Family&)>& fn) {
  if (n < 1 || n > kHardMaxN) throw guard_error("enumerate_upsets: n out of [1,6]");
  int nmasks = 1 << n;
  std::uint64_t universe = (n == 6) ? ~0ULL : ((1ULL << nmasks) - 1);
  if (cap) {
    if (*cap < 0 || *cap > n) throw std::invalid_argument("enumerate_upsets: cap out of [0,n]");
    for (int m = 0; m < nmasks; ++m)
      if (std::popcount(static_cast<unsigned>(m)) > *cap) universe &= ~(1ULL << m);
  }
  auto order = upset_order(universe);
  auto sup = superset_boards(nmasks, universe);
  std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t idx, std::uint64_t board) {
    if (idx == order.size()) {
      fn(family_of(n, board));
      return;
    }
    int m = order[idx];
    if ((sup[static_cast<std::size_t>(m)] & ~board) == 0) walk(idx + 1, board | (1ULL << m));
    walk(idx + 1, board);
  };
  walk(0, 0);
}

Family best_response(std::span<const Family> fixed, int t, std::optional<int> cap) {
  if (fixed.empty()) throw std::invalid_argument("best_response: no fixed families");
  if (t < 1) throw std::invalid_argument("best_response: t < 1");
  int n = fixed.front().n();
  if (n > 20) throw guard_error("best_response: n > 20");
  auto meets = meet_closure(fixed).members();
  Family out(n);
  for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
    if (cap && std::popcount(m) > *cap) continue;
    bool ok = true;
    for (auto y : meets)
      if (std::popcount(m & y) < t) { ok = false; break; }
    if (ok) out.insert(m);
  }
  return out;
}

SearchResult exhaustive_max(const SearchSpec& spec) {
  if (spec.n < 1 || spec.n > kHardMaxN) throw guard_error("exhaustive_max: n out of [1,6]");
  if (spec.t < 1) throw std::invalid_argument("exhaustive_max: t < 1");
  if (spec.threads < 1) throw std::invalid_argument("exhaustive_max: threads < 1");

  if (spec.mode == SearchSpec::Mode::Single) {
    if (spec.caps.empty() || spec.measures.empty())
      throw std::invalid_argument("exhaustive_max: single mode needs caps[0]/measures[0]");
    return exhaustive_max_single(spec.n, spec.caps[0], spec.measures[0], spec.threads);
  }

  if (spec.r < 2) throw std::invalid_argument("exhaustive_max: r < 2");
  int nmasks = 1 << spec.n;
  std::uint64_t full = (spec.n == 6) ? ~0ULL : ((1ULL << nmasks) - 1);
  std::vector<MeasureTable> mus;
  std::vector<std::uint64_t> universes;

  switch (spec.mode) {
    case SearchSpec::Mode::Uniform: {
      if (spec.k < 1 || spec.k > spec.n)
        throw std::invalid_argument("exhaustive_max: uniform k out of [1,n]");
      Int level = binom(spec.n, spec.k);
      if (level > 20) throw guard_error("exhaustive_max: uniform mode needs C(n,k) <= 20");
      if (Int(spec.r - 1) * level > 20)
        throw guard_error("exhaustive_max: uniform mode needs (r-1)*C(n,k) <= 20");
      if (spec.r > 3) throw guard_error("exhaustive_max: r <= 3");
      std::uint64_t u = 0;
      for (int m = 0; m < nmasks; ++m)
        if (std::popcount(static_cast<unsigned>(m)) == spec.k) u |= 1ULL << m;
      MeasureTable mu;
      mu.n = spec.n;
      mu.weights.assign(static_cast<std::size_t>(spec.n) + 1, Rational(0));
      mu.weights[static_cast<std::size_t>(spec.k)] = 1;
      for (int j = 0; j < spec.r; ++j) {
        mus.push_back(mu);
        universes.push_back(u);
      }
      break;
    }
    case SearchSpec::Mode::Nonuniform: {
      if (spec.r > 3) throw guard_error("exhaustive_max: r <= 3");
      int ncap = soft_n_cap(spec.r == 2 ? 5 : 4);
      if (spec.n > ncap)
        throw guard_error("exhaustive_max: nonuniform guard n <= " + std::to_string(ncap) +
                          " for r = " + std::to_string(spec.r) + " (raise with XFAM_MAX_N)");
      for (int j = 0; j < spec.r; ++j) {
        mus.push_back(counting_measure(spec.n));
        universes.push_back(full);
      }
      break;
    }
    case SearchSpec::Mode::Truncated: {
      if (spec.r != 2) throw guard_error("exhaustive_max: truncated mode supports r = 2 only");
      int ncap = soft_n_cap(5);
      if (spec.n > ncap)
        throw guard_error("exhaustive_max: truncated guard n <= " + std::to_string(ncap) +
                          " (raise with XFAM_MAX_N)");
      if (spec.caps.size() != 2 || spec.measures.size() != 2)
        throw std::invalid_argument("exhaustive_max: truncated mode needs 2 caps and 2 measures");
      for (int j = 0; j < 2; ++j) {
        if (spec.caps[static_cast<std::size_t>(j)] < 1 ||
            spec.caps[static_cast<std::size_t>(j)] > spec.n)
          throw std::invalid_argument("exhaustive_max: cap out of [1,n]");
        if (spec.measures[static_cast<std::size_t>(j)].n != spec.n)
          throw std::invalid_argument("exhaustive_max: measure dimension mismatch");
        std::uint64_t u = 0;
        for (int m = 0; m < nmasks; ++m)
          if (std::popcount(static_cast<unsigned>(m)) <= spec.caps[static_cast<std::size_t>(j)])
            u |= 1ULL << m;
        mus.push_back(spec.measures[static_cast<std::size_t>(j)]);
        universes.push_back(u);
      }
      break;
    }
    case SearchSpec::Mode::Single:
      break;  // handled above
  }
  return dispatch_cross(spec, mus, universes);
}

namespace {

template <typename VT>
SearchResult run_single(int n, std::uint64_t universe, const std::vector<Int>& scaled,
                        const Int& denom, int threads) {
  Universe uni(n, 1);
  auto order = upset_order(universe);
  auto sup = superset_boards(1 << n, universe);
  std::vector<VT> w(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) w[i] = static_cast<VT>(scaled[i]);

  struct Best {
    bool has = false;
    VT value{};
    std::uint64_t board = 0;
  };
  auto consider = [](Best& best, VT value, std::uint64_t board) {
    std::vector<std::uint64_t> a{board}, b{best.board};
    if (!best.has || value > best.value || (value == best.value && lex_less(a, b))) {
      best.has = true;
      best.value = std::move(value);
      best.board = board;
    }
  };

  // C = masks meeting every current member (t = 1); include requires the
  // up-set condition and membership in C.
  std::function<void(std::size_t, std::uint64_t, std::uint64_t, VT, Best&, std::uint64_t&)> dfs =
      [&](std::size_t idx, std::uint64_t board, std::uint64_t compat, VT value, Best& best,
          std::uint64_t& nodes) {
        ++nodes;
        if (idx == order.size()) {
          if (board) consider(best, value, board);
          return;
        }
        int m = order[idx];
        if (((sup[static_cast<std::size_t>(m)] & ~board) == 0) && ((compat >> m) & 1))
          dfs(idx + 1, board | (1ULL << m), compat & uni.respmask[static_cast<std::size_t>(m)],
              value + w[static_cast<std::size_t>(m)], best, nodes);
        dfs(idx + 1, board, compat, value, best, nodes);
      };

  auto start = std::chrono::steady_clock::now();
  std::uint64_t all = (n == 6) ? ~0ULL : ((1ULL << (1 << n)) - 1);
  Best best;
  std::uint64_t nodes = 0;

  struct Task {
    std::uint64_t board, compat;
    VT value;
  };
  std::vector<Task> tasks;
  std::size_t depth = 0;
  if (threads > 1) {
    std::size_t want = 1;
    while ((1ULL << want) < static_cast<std::size_t>(threads) * 8) ++want;
    depth = std::min(order.size(), want);
    std::function<void(std::size_t, std::uint64_t, std::uint64_t, VT)> prefix =
        [&](std::size_t idx, std::uint64_t board, std::uint64_t compat, VT value) {
          if (idx == depth) {
            tasks.push_back(Task{board, compat, value});
            return;
          }
          ++nodes;
          int m = order[idx];
          if (((sup[static_cast<std::size_t>(m)] & ~board) == 0) && ((compat >> m) & 1))
            prefix(idx + 1, board | (1ULL << m), compat & uni.respmask[static_cast<std::size_t>(m)],
                   value + w[static_cast<std::size_t>(m)]);
          prefix(idx + 1, board, compat, value);
        };
    prefix(0, 0, all, VT{});
  } else {
    tasks.push_back(Task{0, all, VT{}});
  }

  if (threads <= 1 || tasks.size() <= 1) {
    for (const auto& task : tasks) dfs(depth, task.board, task.compat, task.value, best, nodes);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex merge;
    auto worker = [&]() {
      Best local;
      std::uint64_t local_nodes = 0;
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        dfs(depth, tasks[i].board, tasks[i].compat, tasks[i].value, local, local_nodes);
      }
      std::lock_guard<std::mutex> lock(merge);
      nodes += local_nodes;
      if (local.has) consider(best, local.value, local.board);
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SearchResult res;
  res.nodes_explored = nodes;
  res.feasible = best.has;
  if (best.has) {
    res.value = Rational(Int(best.value)) / Rational(denom);
    res.witness.push_back(family_of(n, best.board));
  }
  res.wall_time_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            start)
          .count());
  return res;
}

}  // namespace

SearchResult exhaustive_max_single(int n, int khat, const MeasureTable& mu, int threads) {
  if (n < 1 || n > kHardMaxN) throw guard_error("exhaustive_max_single: n out of [1,6]");
  if (khat < 1 || khat > n) throw std::invalid_argument("exhaustive_max_single: khat out of [1,n]");
  if (mu.n != n) throw std::invalid_argument("exhaustive_max_single: measure dimension mismatch");
  if (threads < 1) throw std::invalid_argument("exhaustive_max_single: threads < 1");
  int nmasks = 1 << n;
  std::uint64_t universe = 0;
  for (int m = 1; m < nmasks; ++m)  // the empty set never joins an intersecting family
    if (std::popcount(static_cast<unsigned>(m)) <= khat) universe |= 1ULL << m;

  Int denom = 1;
  for (int s = 0; s <= n; ++s)
    denom = lcm_int(denom, boost::multiprecision::denominator(mu.weight(s)));
  std::vector<Int> scaled(static_cast<std::size_t>(nmasks), 0);
  Int total = 0;
  for (int m = 1; m < nmasks; ++m) {
    if (!((universe >> m) & 1)) continue;
    Rational v = mu.weight(std::popcount(static_cast<unsigned>(m))) * Rational(denom);
    scaled[static_cast<std::size_t>(m)] = boost::multiprecision::numerator(v);
    total += scaled[static_cast<std::size_t>(m)];
  }
  if (total < (Int(1) << 62)) return run_single<std::int64_t>(n, universe, scaled, denom, threads);
  return run_single<Int>(n, universe, scaled, denom, threads);
}

}  // namespace xfam
