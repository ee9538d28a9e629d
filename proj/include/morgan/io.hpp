#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "morgan/decouple.hpp"

namespace morgan {

using json = nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline Rational rational_from_json(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  throw ParseError("expected an integer or a \"p/q\" string, got " + v.dump());
}

inline json to_json(const Rational& r) { return r.to_string(); }

inline RationalMatrix matrix_from_json(const json& v, const std::string& name) {
  if (!v.is_array()) throw ParseError(name + " must be an array of rows");
  std::size_t rows = v.size(), cols = rows ? v[0].size() : 0;
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) throw ParseError(name + " is not rectangular");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rational_from_json(v[i][j]);
  }
  return m;
}

inline json to_json(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const Poly& p) {
  json c = json::array();
  for (const auto& x : p.coefficients()) c.push_back(to_json(x));
  return c;
}

// Ascending coefficient array, or a display string such as "s^2+3s+2".
inline Poly poly_from_json(const json& v) {
  if (v.is_string()) return Poly::parse(v.get<std::string>());
  if (!v.is_array()) throw ParseError("polynomial must be a coefficient array or a string");
  std::vector<Rational> c;
  for (const auto& x : v) c.push_back(rational_from_json(x));
  return Poly(std::move(c));
}

inline json to_json(const RationalFunction& h) {
  return {{"num", to_json(h.num)}, {"den", to_json(h.den)}, {"display", h.to_string()}};
}

inline RationalFunction rational_function_from_json(const json& v) {
  if (!v.is_object() || !v.contains("num") || !v.contains("den")) throw ParseError("diagonal entry needs num and den");
  return RationalFunction(poly_from_json(v["num"]), poly_from_json(v["den"]));
}

inline StateSpace system_from_json(const json& v) {
  if (!v.is_object()) throw ParseError("system file must be a JSON object");
  for (const char* key : {"A", "B", "C"})
    if (!v.contains(key)) throw ParseError(std::string("system file lacks ") + key);
  StateSpace sys{matrix_from_json(v["A"], "A"), matrix_from_json(v["B"], "B"), matrix_from_json(v["C"], "C")};
  return sys;
}

inline StateSpace load_system(const std::string& path) { return system_from_json(parse_json(read_text(path), path)); }

inline json to_json(const std::vector<std::size_t>& v) { return json(v); }

inline json to_json(const RowConfig& c) {
  std::vector<std::size_t> blocks;
  for (auto b : c.blocks) blocks.push_back(b + 1);
  return {{"blocks", blocks}, {"s_positions", c.positions}};
}

inline json poly_report(const Poly& p, bool hurwitz) {
  return {{"coefficients", to_json(p)}, {"display", p.to_string()}, {"hurwitz", hurwitz}};
}

inline json to_json(const FixedPoleReport& r) {
  json free = json::object();
  for (const auto& id : r.free_params) {
    auto it = r.t_values.find(id);
    free[id.name()] = to_json(it == r.t_values.end() ? Rational() : it->second);
  }
  return {{"input_decoupling_zeros", poly_report(r.input_dz, r.input_dz_stable)},
          {"fixed_decoupling_poles", poly_report(r.fixed_dec, r.fixed_dec_stable)},
          {"free_parameters", free}};
}

inline json to_json(const AuditEntry& a) {
  return {{"ci_tuple", a.config.tuple}, {"row_config", to_json(a.config.rows)}, {"feasible", a.feasible},
          {"reason", a.reason}};
}

inline json solution_core(const DecouplingSolution& s) {
  json diag = json::array();
  for (const auto& h : s.diagonal) diag.push_back(to_json(h));
  return {{"ci_tuple", s.config.tuple},
          {"row_config", to_json(s.config.rows)},
          {"F", to_json(s.F)},
          {"G", to_json(s.G)},
          {"diagonal", diag},
          {"fixed_poles", to_json(s.fixed_poles)}};
}

inline json to_json(const DecouplingSolution& s) {
  json out = solution_core(s);
  json constraints = json::array();
  for (const auto& [id, rhs] : s.constraints.substitutions())
    constraints.push_back({{"param", id.name()}, {"value", rhs.to_string()}});
  json params = json::object();
  for (const auto& [id, v] : s.q_values) params[id.name()] = to_json(v);
  for (const auto& [id, v] : s.t_values) params[id.name()] = to_json(v);
  json mu = json::array();
  for (const auto& r : s.mu_rows) mu.push_back(to_json(r)[0]);
  std::vector<std::string> targets;
  for (const auto& p : s.targets) targets.push_back(p.to_string());
  out["constraints"] = constraints;
  out["degree_deficits"] = s.degree_deficits;
  out["parameters"] = params;
  out["intermediate"] = {{"F0", to_json(s.F0)},
                         {"G0", to_json(s.G0)},
                         {"Q", to_json(s.Q)},
                         {"F_f", to_json(s.F_f)},
                         {"G_f", to_json(s.G_f)},
                         {"A_f", to_json(s.square.A)},
                         {"B_f", to_json(s.square.B)},
                         {"C_f", to_json(s.square.C)},
                         {"relative_degrees", s.square.relative_degrees},
                         {"mu_rows", mu},
                         {"diagonal_targets", targets}};
  return out;
}

inline json solution_file(const SolveResult& res, std::uint64_t seed) {
  json out = res.solved() ? to_json(res.solutions.front()) : json::object();
  out["format"] = "morgan-solution-1";
  out["status"] = res.solved() ? "solved" : "no-solution";
  out["seed"] = seed;
  out["sigma"] = res.sigma;
  out["search_bound"] = res.bound;
  json audit = json::array();
  for (const auto& a : res.audit) audit.push_back(to_json(a));
  out["audit"] = audit;
  if (res.solutions.size() > 1) {
    json alt = json::array();
    for (std::size_t k = 1; k < res.solutions.size(); ++k) alt.push_back(solution_core(res.solutions[k]));
    out["alternatives"] = alt;
  }
  return out;
}

struct Analysis {
  std::size_t states = 0, inputs = 0, outputs = 0;
  std::vector<std::size_t> sigma;
  std::vector<CITuple> tuples;
  std::vector<RowConfig> row_configs;
  std::size_t bound = 0;
};

inline Analysis analyze(const StateSpace& sys) {
  validate(sys);
  Analysis a;
  a.states = sys.states();
  a.inputs = sys.inputs();
  a.outputs = sys.outputs();
  a.sigma = controllability_indices(sys.A, sys.B);
  a.tuples = enumerate_tuples(a.sigma, a.outputs);
  a.row_configs = enumerate_row_configs(a.sigma, a.outputs);
  a.bound = a.tuples.size() * a.row_configs.size();
  return a;
}

inline json to_json(const Analysis& a) {
  json configs = json::array();
  for (const auto& c : a.row_configs) configs.push_back(to_json(c));
  return {{"states", a.states}, {"inputs", a.inputs},  {"outputs", a.outputs},     {"sigma", a.sigma},
          {"tuples", a.tuples}, {"row_configs", configs}, {"search_bound", a.bound}};
}

}  // namespace morgan
