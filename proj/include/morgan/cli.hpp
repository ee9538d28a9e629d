#pragma once

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "morgan/io.hpp"

namespace morgan::cli {

enum ExitCode : int { kOk = 0, kError = 1, kNoSolution = 2 };

inline std::string join(const std::vector<std::size_t>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + std::to_string(v[k]);
  return s;
}

inline std::vector<std::string> split(const std::string& text, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (seps.find(ch) != std::string::npos) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text, ",")) {
    if (part.empty() || part.find_first_not_of("0123456789 ") != std::string::npos)
      throw ParseError("bad index list '" + text + "'");
    out.push_back(std::stoul(part));
  }
  return out;
}

inline std::string diag_display(const std::vector<RationalFunction>& d) {
  std::string s = "diag{";
  for (std::size_t k = 0; k < d.size(); ++k) s += (k ? ", " : "") + d[k].to_string();
  return s + "}";
}

inline int run_analyze(const std::string& system_path, bool as_json, std::ostream& out, std::ostream& err) {
  try {
    Analysis a = analyze(load_system(system_path));
    if (as_json) {
      out << to_json(a).dump(2) << "\n";
      return kOk;
    }
    out << "states " << a.states << ", inputs " << a.inputs << ", outputs " << a.outputs << "\n";
    out << "controllability indices: (" << join(a.sigma) << ")\n";
    out << "admissible index tuples (" << a.tuples.size() << "):";
    for (const auto& t : a.tuples) out << " (" << join(t) << ")";
    out << "\nrow configurations by s-position (" << a.row_configs.size() << "):";
    for (const auto& c : a.row_configs) out << " {" << join(c.positions) << "}";
    out << "\nsearch bound: " << a.bound << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

struct SolveCommand {
  std::string system_path;
  std::uint64_t seed = kDefaultSeed;
  bool all = false;
  std::string diag_polys;
  std::string dz_target;
  std::string out_path;
  unsigned jobs = 1;
  bool as_json = false;
  std::string tuple;
  std::string positions;
};

inline SolveOptions to_options(const SolveCommand& cmd) {
  SolveOptions opt;
  opt.seed = cmd.seed;
  opt.all = cmd.all;
  opt.jobs = cmd.jobs;
  if (!cmd.diag_polys.empty()) {
    std::vector<Poly> p;
    for (const auto& part : split(cmd.diag_polys, ";,")) p.push_back(Poly::parse(part));
    opt.diagonal_targets = p;
  }
  if (!cmd.dz_target.empty()) opt.dz_target = Poly::parse(cmd.dz_target);
  if (!cmd.tuple.empty()) opt.only_tuple = parse_indices(cmd.tuple);
  if (!cmd.positions.empty()) opt.only_positions = parse_indices(cmd.positions);
  return opt;
}

inline int run_solve(const SolveCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    StateSpace sys = load_system(cmd.system_path);
    SolveOptions opt = to_options(cmd);
    SolveResult res = solve(sys, opt);
    json file = solution_file(res, cmd.seed);
    std::string text = file.dump(2) + "\n";
    if (!cmd.out_path.empty()) write_text(cmd.out_path, text);
    if (cmd.as_json) {
      out << text;
    } else {
      out << "controllability indices: (" << join(res.sigma) << ")\n";
      out << "configurations examined: " << res.audit.size() << " of " << res.bound << "\n";
      for (std::size_t k = 0; k < res.solutions.size(); ++k) {
        const auto& s = res.solutions[k];
        out << (k ? "also feasible" : "solution") << ": index tuple (" << join(s.config.tuple)
            << "), feedback rows at s-positions {" << join(s.config.rows.positions) << "}\n";
        if (k) continue;
        out << "  H(s) = " << diag_display(s.diagonal) << "\n";
        out << "  input decoupling zeros: " << s.fixed_poles.input_dz.to_string() << "\n";
        out << "  fixed decoupling poles: " << s.fixed_poles.fixed_dec.to_string() << "\n";
      }
      if (!res.solved())
        out << "no solution: every admissible configuration was rejected (certified within the implemented search)\n";
    }
    return res.solved() ? kOk : kNoSolution;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

struct VerifyReport {
  bool pass = false;
  std::string failure;
  std::vector<RationalFunction> diagonal;
  Poly closed_loop;
  Poly input_dz;
  Poly unobservable;
  std::optional<Poly> remaining;
  std::vector<std::string> notes;
};

inline VerifyReport verify_solution(const StateSpace& sys, const json& sol) {
  VerifyReport rep;
  if (!sol.contains("F") || !sol.contains("G")) throw ParseError("solution file lacks F or G");
  RationalMatrix F = matrix_from_json(sol["F"], "F"), G = matrix_from_json(sol["G"], "G");
  validate(sys);
  if (F.rows() != sys.inputs() || F.cols() != sys.states())
    throw DimensionError("F must be " + std::to_string(sys.inputs()) + "x" + std::to_string(sys.states()));
  if (G.rows() != sys.inputs() || G.cols() != sys.outputs())
    throw DimensionError("G must be " + std::to_string(sys.inputs()) + "x" + std::to_string(sys.outputs()));

  TransferMatrix H = transfer_function(sys.A, sys.B, sys.C, F, G);
  for (std::size_t i = 0; i < H.rows() && rep.failure.empty(); ++i)
    for (std::size_t j = 0; j < H.cols(); ++j) {
      std::string at = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      if (i != j && !H(i, j).is_zero()) {
        rep.failure = "off-diagonal entry " + at + " = " + H(i, j).to_string();
        break;
      }
      if (i == j && H(i, i).is_zero()) {
        rep.failure = "diagonal entry " + at + " is zero";
        break;
      }
    }
  if (!rep.failure.empty()) return rep;
  for (std::size_t i = 0; i < H.rows(); ++i) rep.diagonal.push_back(H(i, i));

  if (sol.contains("diagonal")) {
    const auto& rec = sol["diagonal"];
    if (!rec.is_array() || rec.size() != H.rows()) {
      rep.failure = "recorded diagonal has the wrong length";
      return rep;
    }
    for (std::size_t i = 0; i < H.rows(); ++i) {
      RationalFunction want = rational_function_from_json(rec[i]);
      if (!(want == H(i, i))) {
        rep.failure = "diagonal entry (" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ") = " +
                      H(i, i).to_string() + " but the file records " + want.to_string();
        return rep;
      }
    }
  }

  RationalMatrix Acl = sys.A + sys.B * F;
  rep.closed_loop = charpoly(Acl);
  rep.input_dz = uncontrollable_polynomial(Acl, sys.B * G);
  rep.unobservable = unobservable_polynomial(Acl, sys.C);
  Poly denominators(1);
  for (const auto& h : rep.diagonal) denominators *= h.den;
  auto [q, r] = divmod(rep.closed_loop, denominators * rep.input_dz);
  if (r.is_zero()) rep.remaining = q;

  if (sol.contains("fixed_poles")) {
    const auto& fp = sol["fixed_poles"];
    Poly rec_dz = poly_from_json(fp["input_decoupling_zeros"]["coefficients"]);
    if (!(rec_dz == rep.input_dz)) {
      rep.failure = "closed-loop uncontrollable polynomial " + rep.input_dz.to_string() +
                    " differs from the recorded input decoupling zeros " + rec_dz.to_string();
      return rep;
    }
    Poly rec_fixed = poly_from_json(fp["fixed_decoupling_poles"]["coefficients"]);
    if (rep.remaining)
      rep.notes.push_back(*rep.remaining == rec_fixed ? "remaining closed-loop factor equals the recorded fixed "
                                                        "decoupling poles"
                                                      : "remaining closed-loop factor differs from the recorded fixed "
                                                        "decoupling poles " + rec_fixed.to_string());
  }
  rep.pass = true;
  return rep;
}

inline json to_json(const VerifyReport& rep) {
  json d = json::array();
  for (const auto& h : rep.diagonal) d.push_back(to_json(h));
  json out = {{"status", rep.pass ? "PASS" : "FAIL"}, {"diagonal", d}};
  if (!rep.failure.empty()) out["failure"] = rep.failure;
  if (rep.pass) {
    out["closed_loop_charpoly"] = rep.closed_loop.to_string();
    out["input_decoupling_zeros"] = rep.input_dz.to_string();
    out["unobservable_polynomial"] = rep.unobservable.to_string();
    if (rep.remaining) out["remaining_factor"] = rep.remaining->to_string();
    out["notes"] = rep.notes;
  }
  return out;
}

inline int run_verify(const std::string& system_path, const std::string& solution_path, bool as_json,
                      std::ostream& out, std::ostream& err) {
  try {
    StateSpace sys = load_system(system_path);
    VerifyReport rep = verify_solution(sys, parse_json(read_text(solution_path), solution_path));
    if (as_json) {
      out << to_json(rep).dump(2) << "\n";
    } else if (rep.pass) {
      out << "PASS: H(s) = " << diag_display(rep.diagonal) << "\n";
      out << "closed-loop characteristic polynomial: " << rep.closed_loop.to_string() << "\n";
      out << "input decoupling zeros (uncontrollable part): " << rep.input_dz.to_string() << "\n";
      out << "unobservable polynomial: " << rep.unobservable.to_string() << "\n";
      if (rep.remaining) out << "remaining factor after diagonal and input decoupling zeros: " << rep.remaining->to_string() << "\n";
      for (const auto& note : rep.notes) out << note << "\n";
    } else {
      out << "FAIL: " << rep.failure << "\n";
    }
    return rep.pass ? kOk : kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

inline int run_fixed_poles(const std::string& system_path, const std::string& solution_path, bool as_json,
                           std::ostream& out, std::ostream& err) {
  try {
    StateSpace sys = load_system(system_path);
    json sol = parse_json(read_text(solution_path), solution_path);
    VerifyReport rep = verify_solution(sys, sol);
    if (!rep.pass) {
      err << "error: solution does not decouple the system: " << rep.failure << "\n";
      return kError;
    }
    Poly fixed = rep.remaining ? *rep.remaining : rep.unobservable;
    json report = {{"closed_loop_charpoly", poly_report(rep.closed_loop, is_hurwitz(rep.closed_loop))},
                   {"input_decoupling_zeros", poly_report(rep.input_dz, is_hurwitz(rep.input_dz))},
                   {"remaining_fixed_factor", poly_report(fixed, is_hurwitz(fixed))},
                   {"unobservable_polynomial", poly_report(rep.unobservable, is_hurwitz(rep.unobservable))}};
    if (sol.contains("fixed_poles")) report["recorded"] = sol["fixed_poles"];
    if (as_json) {
      out << report.dump(2) << "\n";
      return kOk;
    }
    auto line = [&](const char* label, const Poly& p) {
      out << label << ": " << p.to_string() << (is_hurwitz(p) ? "  [stable]" : "  [not stable]") << "\n";
    };
    line("closed-loop characteristic polynomial", rep.closed_loop);
    line("input decoupling zeros", rep.input_dz);
    line("fixed decoupling poles", fixed);
    line("unobservable polynomial", rep.unobservable);
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace morgan::cli
