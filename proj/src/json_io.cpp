#include "xfam/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace xfam {

using nlohmann::json;

static json set_to_array(std::uint64_t mask) {
  json arr = json::array();
  while (mask) {
    int b = std::countr_zero(mask);
    mask &= mask - 1;
    arr.push_back(b + 1);
  }
  return arr;
}

json family_to_json(const Family& f, bool compact) {
  json j;
  j["n"] = f.n();
  if (compact) {
    json masks = json::array();
    f.for_each([&](std::uint64_t m) {
      std::ostringstream os;
      os << std::hex << m;
      masks.push_back(os.str());
    });
    j["masks"] = masks;
  } else {
    json sets = json::array();
    f.for_each([&](std::uint64_t m) { sets.push_back(set_to_array(m)); });
    j["sets"] = sets;
  }
  return j;
}

Family family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n"))
    throw std::invalid_argument("family JSON: expected object with \"n\"");
  int n = j.at("n").get<int>();
  Family f(n);
  if (j.contains("sets")) {
    for (const auto& set : j.at("sets")) {
      std::uint64_t mask = 0;
      for (const auto& e : set) {
        int v = e.get<int>();
        if (v < 1 || v > n) throw std::invalid_argument("family JSON: element out of [n]");
        mask |= 1ULL << (v - 1);
      }
      f.insert(mask);
    }
  } else if (j.contains("masks")) {
    for (const auto& hex : j.at("masks")) {
      std::string s = hex.get<std::string>();
      std::size_t pos = 0;
      std::uint64_t mask = std::stoull(s, &pos, 16);
      if (pos != s.size()) throw std::invalid_argument("family JSON: bad hex mask '" + s + "'");
      f.insert(mask);
    }
  } else {
    throw std::invalid_argument("family JSON: need \"sets\" or \"masks\"");
  }
  return f;
}

json measure_to_json(const MeasureTable& mu) {
  json j;
  j["n"] = mu.n;
  json ws = json::array();
  for (const auto& w : mu.weights) ws.push_back(rational_str(w));
  j["weights"] = ws;
  if (mu.window)
    j["window"] = json::array({mu.window->first, mu.window->second});
  else
    j["window"] = nullptr;
  return j;
}

MeasureTable measure_from_json(const json& j) {
  MeasureTable mu;
  mu.n = j.at("n").get<int>();
  const auto& ws = j.at("weights");
  if (static_cast<int>(ws.size()) != mu.n + 1)
    throw std::invalid_argument("measure JSON: weights must have n+1 entries");
  for (const auto& w : ws) {
    Rational v = parse_rational(w.get<std::string>());
    if (v < 0) throw std::invalid_argument("measure JSON: negative weight");
    mu.weights.push_back(v);
  }
  if (j.contains("window") && !j.at("window").is_null()) {
    auto win = j.at("window");
    mu.window = {win.at(0).get<int>(), win.at(1).get<int>()};
    if (mu.window->first < 1 || mu.window->first > mu.window->second ||
        mu.window->second > mu.n)
      throw std::invalid_argument("measure JSON: bad window");
  }
  return mu;
}

MeasureTable parse_measure_spec(const std::string& spec, int n) {
  if (spec == "count") return counting_measure(n);
  if (spec.rfind("product:", 0) == 0) return product_measure(n, parse_rational(spec.substr(8)));
  if (spec.rfind("uniform:", 0) == 0) return uniform_measure(n, std::stoi(spec.substr(8)));
  if (!spec.empty() && spec.front() == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw std::invalid_argument("measure spec: cannot open " + spec.substr(1));
    json j;
    in >> j;
    return measure_from_json(j);
  }
  throw std::invalid_argument("measure spec: expected count | product:p | uniform:k | @file, got '" +
                              spec + "'");
}

json nip_report_to_json(const NipReport& rep) {
  json j;
  j["points"] = rep.points;
  if (rep.max_point)
    j["max_point"] = *rep.max_point;
  else
    j["max_point"] = nullptr;
  json ws = json::array();
  for (auto m : rep.witness) ws.push_back(set_to_array(m));
  j["witnesses"] = ws;
  return j;
}

json trace_to_json(const ReductionTrace& trace) {
  json steps = json::array();
  for (const auto& st : trace.steps) {
    json s;
    s["a_star"] = st.a_star;
    s["case"] = st.case_tag;
    s["terminal"] = st.terminal;
    if (st.distinguished >= 0)
      s["distinguished"] = st.distinguished + 1;
    else
      s["distinguished"] = nullptr;
    s["dependent_sizes"] = st.dependent_sizes;
    if (st.case_tag == "heavier-half")
      s["parts"] = {{"H", st.part_h}, {"H+1", st.part_h1}, {"H+2", st.part_h2}};
    s["measure_before"] = rational_str(st.before);
    s["measure_after"] = rational_str(st.after);
    steps.push_back(std::move(s));
  }
  json j;
  j["steps"] = steps;
  j["initial_measure"] = rational_str(trace.initial);
  j["final_measure"] = rational_str(trace.final_measure);
  j["terminal_block"] = trace.terminal_block;
  json fams = json::array();
  for (const auto& f : trace.final_families) fams.push_back(family_to_json(f));
  j["final_families"] = fams;
  return j;
}

json bound_report_to_json(const BoundReport& rep) {
  json j;
  j["value"] = rational_str(rep.value);
  json am = json::array();
  for (auto [ell, a] : rep.argmax) am.push_back(json::array({ell, a}));
  j["argmax"] = am;
  json ws = json::array();
  for (const auto& f : rep.witness) ws.push_back(family_to_json(f));
  j["witness"] = ws;
  j["params"] = {{"n", rep.n}, {"r", rep.r}, {"t", rep.t}, {"caps", rep.caps}, {"ks", rep.ks}};
  return j;
}

json search_result_to_json(const SearchResult& res) {
  json j;
  j["value"] = res.feasible ? rational_str(res.value) : "";
  j["feasible"] = res.feasible;
  json ws = json::array();
  for (const auto& f : res.witness) ws.push_back(family_to_json(f));
  j["witness"] = ws;
  j["nodes_explored"] = res.nodes_explored;
  j["wall_time_ms"] = res.wall_time_ms;
  return j;
}

}  // namespace xfam
