#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xfam/errors.hpp"
#include "xfam/json_io.hpp"

using nlohmann::json;
using namespace xfam;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitGuard = 3;

void emit(const json& j, const std::string& format) {
  if (format == "human")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << j.dump() << "\n";
}

Family load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open family file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("bad JSON in " + path + ": " + e.what());
  }
  return family_from_json(j);
}

std::vector<Family> load_families(const std::vector<std::string>& paths) {
  std::vector<Family> fams;
  for (const auto& p : paths) fams.push_back(load_family(p));
  return fams;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<int> parse_int_list(const std::string& s, int r, const char* what) {
  std::vector<int> out;
  for (const auto& tok : split_commas(s)) out.push_back(std::stoi(tok));
  if (static_cast<int>(out.size()) == 1 && r > 1) out.assign(static_cast<std::size_t>(r), out[0]);
  if (static_cast<int>(out.size()) != r)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(r) + " entries");
  return out;
}

std::vector<MeasureTable> parse_measure_list(const std::vector<std::string>& specs, int r, int n) {
  std::vector<std::string> flat;
  for (const auto& s : specs)
    for (const auto& tok : split_commas(s)) flat.push_back(tok);
  if (flat.size() == 1 && r > 1) flat.assign(static_cast<std::size_t>(r), flat[0]);
  if (static_cast<int>(flat.size()) != r)
    throw std::invalid_argument("measures: expected " + std::to_string(r) + " specs");
  std::vector<MeasureTable> out;
  for (const auto& s : flat) out.push_back(parse_measure_spec(s, n));
  return out;
}

int default_klow(const MeasureTable& mu) { return mu.window ? mu.window->first : 1; }

void emit_bound_csv(const BoundReport& rep, const std::vector<MeasureTable>& mus) {
  std::cout << "ell,a,value,is_argmax\n";
  for (int ell = 1; ell <= rep.r; ++ell) {
    int amax = rep.n;
    for (int i = 0; i < rep.r; ++i)
      if (i != ell - 1) amax = std::min(amax, rep.caps[static_cast<std::size_t>(i)]);
    for (int a = rep.t; a <= amax; ++a) {
      Rational v = measure_scatter_trunc(mus[static_cast<std::size_t>(ell - 1)], rep.n, a, rep.t,
                                         rep.caps[static_cast<std::size_t>(ell - 1)]);
      for (int j = 0; j < rep.r; ++j)
        if (j != ell - 1)
          v += measure_block_trunc(mus[static_cast<std::size_t>(j)], rep.n, a,
                                   rep.caps[static_cast<std::size_t>(j)]);
      bool is_max = false;
      for (auto [l, aa] : rep.argmax) is_max |= (l == ell && aa == a);
      std::cout << ell << "," << a << "," << rational_str(v) << "," << (is_max ? 1 : 0) << "\n";
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"exact toolkit for cross-intersecting family extremal problems"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();

  // bound
  auto* bound = app.add_subcommand("bound", "evaluate a closed-form maximum");
  std::string bmode;
  int bn = 0, br = 2, bt = 1, bk = 0, bkhat = 0, bklow = 0;
  std::string bcaps, bks;
  std::vector<std::string> bmeasures;
  bound->add_option("--mode", bmode, "main|uniform|nonuniform|single")->required();
  bound->add_option("-n", bn, "ground-set size")->required();
  bound->add_option("-r", br, "number of families");
  bound->add_option("-t", bt, "intersection threshold");
  bound->add_option("-k", bk, "uniformity (uniform mode)");
  bound->add_option("--caps", bcaps, "comma list of khat_j (main mode)");
  bound->add_option("--ks", bks, "comma list of window starts k_j (main mode)");
  bound->add_option("--measure,--measures", bmeasures, "measure spec(s): count|product:p|uniform:k|@file");
  bound->add_option("--khat", bkhat, "size cap (single mode)");
  bound->add_option("--klow", bklow, "window start (single mode; defaults from the measure)");

  // construct
  auto* construct = app.add_subcommand("construct", "emit an extremal family");
  auto* scatter = construct->add_subcommand("scatter", "A_{n,a,t}");
  auto* block = construct->add_subcommand("block", "B_{n,a}");
  construct->require_subcommand(1);
  int cn = 0, ca = 0, ct = 1, cmax = -1;
  bool ccompact = false;
  for (auto* sub : {scatter, block}) {
    sub->add_option("-n", cn, "ground-set size")->required();
    sub->add_option("-a", ca, "prefix length")->required();
    sub->add_option("--max-size", cmax, "keep only sets of size <= max-size");
    sub->add_flag("--compact", ccompact, "emit hex masks instead of element lists");
  }
  scatter->add_option("-t", ct, "intersection threshold");

  // check
  auto* check = app.add_subcommand("check", "test (cross-)intersection; exit 1 when it fails");
  int xt = 1;
  std::vector<std::string> xfiles;
  check->add_option("--t,-t", xt, "threshold");
  check->add_option("--files", xfiles, "family files (1: t-intersecting, 2+: cross)")->required();

  // nip
  auto* nip = app.add_subcommand("nip", "necessary intersection points");
  int pt = 1;
  std::vector<std::string> pfiles;
  nip->add_option("--t,-t", pt, "threshold (cross only)");
  nip->add_option("--files", pfiles, "family files")->required();

  // shift
  auto* shift = app.add_subcommand("shift", "shift families to a common fixpoint");
  std::vector<std::string> sfiles;
  shift->add_option("--files", sfiles, "family files")->required();

  // replay
  auto* replay = app.add_subcommand("replay", "run the intersection-point reduction");
  int yt = 1, yklow = 0, ykhat = 0;
  std::vector<std::string> yfiles, ymeasures;
  std::string yks, ykhats;
  replay->add_option("--files", yfiles, "family files (1: single, 2+: cross)")->required();
  replay->add_option("--t,-t", yt, "threshold (cross)");
  replay->add_option("--measure,--measures", ymeasures, "measure spec(s)");
  replay->add_option("--klow", yklow, "window start (single)");
  replay->add_option("--khat", ykhat, "size cap (single)");
  replay->add_option("--ks", yks, "comma list of window starts (cross)");
  replay->add_option("--khats", ykhats, "comma list of size caps (cross)");

  // search
  auto* search = app.add_subcommand("search", "exhaustive oracle maximization");
  std::string smode, sobjective = "sum", srestr = "up-closed";
  int sn = 0, sr = 2, st = 1, sk = 0, skhat = 0, sthreads = 1;
  std::string scaps;
  std::vector<std::string> smeasures;
  search->add_option("--mode", smode, "uniform|nonuniform|truncated|single")->required();
  search->add_option("-n", sn, "ground-set size")->required();
  search->add_option("-r", sr, "number of families");
  search->add_option("-t", st, "threshold");
  search->add_option("-k", sk, "uniformity (uniform mode)");
  search->add_option("--caps", scaps, "comma list of khat_j (truncated mode)");
  search->add_option("--measures,--measure", smeasures, "measure spec(s) (truncated/single)");
  search->add_option("--khat", skhat, "size cap (single mode)");
  search->add_option("--objective", sobjective, "sum|product")
      ->check(CLI::IsMember({"sum", "product"}));
  search->add_option("--restriction", srestr, "up-closed|shifted|none")
      ->check(CLI::IsMember({"up-closed", "shifted", "none"}));
  search->add_option("--threads", sthreads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }

  if (*bound) {
    if (bmode == "uniform") {
      auto rep = bound_uniform(bn, bk, br, bt);
      if (format == "csv") {
        std::vector<MeasureTable> mus;
        MeasureTable mu;
        mu.n = bn;
        mu.weights.assign(static_cast<std::size_t>(bn) + 1, Rational(0));
        mu.weights[static_cast<std::size_t>(bk)] = 1;
        mus.assign(static_cast<std::size_t>(br), mu);
        emit_bound_csv(rep, mus);
      } else {
        emit(bound_report_to_json(rep), format);
      }
    } else if (bmode == "nonuniform") {
      auto rep = bound_nonuniform(bn, br, bt);
      if (format == "csv") {
        std::vector<MeasureTable> mus(static_cast<std::size_t>(br), counting_measure(bn));
        emit_bound_csv(rep, mus);
      } else {
        emit(bound_report_to_json(rep), format);
      }
    } else if (bmode == "main") {
      auto caps = parse_int_list(bcaps, br, "--caps");
      auto ks = parse_int_list(bks, br, "--ks");
      auto mus = parse_measure_list(bmeasures, br, bn);
      auto rep = bound_main(bn, br, bt, caps, mus, ks);
      if (format == "csv")
        emit_bound_csv(rep, mus);
      else
        emit(bound_report_to_json(rep), format);
    } else if (bmode == "single") {
      if (bmeasures.empty()) throw std::invalid_argument("bound single: --measure required");
      auto mu = parse_measure_spec(bmeasures.front(), bn);
      if (bkhat == 0) throw std::invalid_argument("bound single: --khat required");
      int klow = bklow ? bklow : default_klow(mu);
      Rational v = bound_single(bn, klow, bkhat, mu);
      if (format == "csv") {
        std::cout << "n,klow,khat,value\n"
                  << bn << "," << klow << "," << bkhat << "," << rational_str(v) << "\n";
      } else {
        json j{{"value", rational_str(v)},
               {"params", {{"n", bn}, {"k", klow}, {"khat", bkhat}}}};
        emit(j, format);
      }
    } else {
      throw std::invalid_argument("bound: unknown --mode '" + bmode + "'");
    }
    return 0;
  }

  if (*construct) {
    Family f = (*scatter) ? scatter_family(cn, ca, ct) : block_family(cn, ca);
    if (cmax >= 0) f = slice(f, 0, cmax);
    emit(family_to_json(f, ccompact), format);
    return 0;
  }

  if (*check) {
    auto fams = load_families(xfiles);
    bool holds;
    if (fams.size() == 1) {
      holds = is_t_intersecting(fams.front(), xt);
    } else {
      CrossInstance inst;
      inst.t = xt;
      inst.families = fams;
      holds = is_cross_t_intersecting(inst);
    }
    emit(json{{"holds", holds}}, format);
    return holds ? 0 : kExitCheckFailed;
  }

  if (*nip) {
    auto fams = load_families(pfiles);
    NipReport rep;
    if (fams.size() == 1) {
      rep = nip_single(fams.front());
    } else {
      CrossInstance inst;
      inst.t = pt;
      inst.families = fams;
      rep = nip_cross(inst);
    }
    emit(nip_report_to_json(rep), format);
    return 0;
  }

  if (*shift) {
    auto fams = shift_to_fixpoint(load_families(sfiles));
    json arr = json::array();
    for (const auto& f : fams) arr.push_back(family_to_json(f));
    emit(arr, format);
    return 0;
  }

  if (*replay) {
    auto fams = load_families(yfiles);
    int n = fams.front().n();
    ReductionTrace trace;
    if (fams.size() == 1) {
      MeasureTable mu =
          ymeasures.empty() ? counting_measure(n) : parse_measure_spec(ymeasures.front(), n);
      int khat = ykhat ? ykhat : n;
      int klow = yklow ? yklow : default_klow(mu);
      trace = reduce_to_extremal_single(fams.front(), mu, klow, khat);
    } else {
      int r = static_cast<int>(fams.size());
      CrossInstance inst;
      inst.t = yt;
      inst.families = fams;
      inst.measures = ymeasures.empty()
                          ? std::vector<MeasureTable>(static_cast<std::size_t>(r),
                                                      counting_measure(n))
                          : parse_measure_list(ymeasures, r, n);
      inst.caps = ykhats.empty() ? std::vector<int>(static_cast<std::size_t>(r), n)
                                 : parse_int_list(ykhats, r, "--khats");
      if (yks.empty()) {
        for (const auto& mu : inst.measures) inst.ks.push_back(default_klow(mu));
      } else {
        inst.ks = parse_int_list(yks, r, "--ks");
      }
      trace = reduce_to_extremal_cross(inst);
    }
    emit(trace_to_json(trace), format);
    return 0;
  }

  if (*search) {
    SearchSpec spec;
    spec.n = sn;
    spec.r = sr;
    spec.t = st;
    spec.k = sk;
    spec.threads = sthreads;
    spec.objective =
        sobjective == "product" ? SearchSpec::Objective::Product : SearchSpec::Objective::Sum;
    spec.restriction = srestr == "shifted"
                           ? SearchSpec::Restriction::Shifted
                           : (srestr == "none" ? SearchSpec::Restriction::None
                                               : SearchSpec::Restriction::UpClosed);
    if (smode == "uniform") {
      spec.mode = SearchSpec::Mode::Uniform;
    } else if (smode == "nonuniform") {
      spec.mode = SearchSpec::Mode::Nonuniform;
    } else if (smode == "truncated") {
      spec.mode = SearchSpec::Mode::Truncated;
      spec.caps = parse_int_list(scaps, sr, "--caps");
      spec.measures = parse_measure_list(smeasures, sr, sn);
    } else if (smode == "single") {
      spec.mode = SearchSpec::Mode::Single;
      spec.caps = {skhat ? skhat : sn};
      spec.measures = {smeasures.empty() ? counting_measure(sn)
                                         : parse_measure_spec(smeasures.front(), sn)};
    } else {
      throw std::invalid_argument("search: unknown --mode '" + smode + "'");
    }
    auto res = exhaustive_max(spec);
    if (format == "csv") {
      std::cout << "value,feasible,nodes_explored,wall_time_ms\n"
                << (res.feasible ? rational_str(res.value) : "") << "," << res.feasible << ","
                << res.nodes_explored << "," << res.wall_time_ms << "\n";
    } else {
      emit(search_result_to_json(res), format);
    }
    return 0;
  }

  return kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const guard_error& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const hypothesis_error& e) {
    std::cerr << "hypothesis unmet: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const reduction_error& e) {
    std::cerr << "reduction diagnostic: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}
