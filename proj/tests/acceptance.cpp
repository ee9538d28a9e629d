// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "morgan/cli.hpp"
#include "oracles.hpp"

using namespace morgan;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(MORGAN_TEST_DATA) + "/" + name; }

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "morgan_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Poly P(const std::string& text) { return Poly::parse(text); }

std::string join(const std::vector<std::size_t>& v) { return "(" + cli::join(v) + ")"; }

// Failure messages accumulate; an empty list means the criterion holds.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int solve_to(const std::string& system, const std::string& out, cli::SolveCommand cmd = {}) {
  cmd.system_path = system;
  cmd.out_path = out;
  std::ostringstream sink, err;
  return cli::run_solve(cmd, sink, err);
}

json load(const std::string& path) { return parse_json(read_text(path), path); }

std::string diag_of(const cli::VerifyReport& rep) { return cli::diag_display(rep.diagonal); }

Poly unobservable_factor(const StateSpace& sys, const DecouplingSolution& sol, Check& c, const std::string& tag) {
  RationalMatrix Acl = sys.A + sys.B * sol.F;
  Poly denominators(1);
  for (const auto& p : sol.targets) denominators *= p;
  auto [u, r] = divmod(charpoly(Acl), denominators * sol.fixed_poles.input_dz);
  c.expect(r.is_zero(), tag + ": charpoly not divisible by prod p_i * input_dz");
  oracle::QPoly brute = oracle::unobservable_poly_of_reachable_part(oracle::grid(Acl), oracle::grid(sys.B * sol.G),
                                                                    oracle::grid(sys.C));
  c.expect(brute == oracle::qpoly(u), tag + ": remaining factor differs from the unobservable oracle");
  return u;
}

void criterion1(Check& c) {
  Analysis a = analyze(load_system(data("example1.json")));
  c.expect(a.sigma == std::vector<std::size_t>{1, 1, 3, 4}, "sigma = " + join(a.sigma));
  std::vector<CITuple> tuples{{1, 1, 3}, {1, 1, 4}, {1, 1, 5}, {1, 1, 6}, {1, 1, 7},
                              {1, 3, 4}, {1, 3, 5}, {1, 4, 4}, {2, 3, 4}};
  c.expect(a.tuples == tuples, "index tuple list differs");
  std::vector<std::vector<std::size_t>> positions;
  for (const auto& r : a.row_configs) positions.push_back(r.positions);
  c.expect(positions == std::vector<std::vector<std::size_t>>{{1}, {2}, {5}, {9}}, "row configurations differ");
  c.expect(a.bound == 36, "bound " + std::to_string(a.bound));
}

void criterion2(Check& c) {
  cli::VerifyReport rep = cli::verify_solution(load_system(data("example1.json")), load(data("example1_published.json")));
  c.expect(rep.pass, "verify failed: " + rep.failure);
  c.expect(diag_of(rep) == "diag{1/(s^4+2s-3), 1/(s+3), 1/(s^4+s-1)}", "diagonal " + diag_of(rep));
}

void criterion3(Check& c) {
  StateSpace sys = load_system(data("example1.json"));
  std::string out = (scratch() / "c3.json").string();
  int code = solve_to(data("example1.json"), out);
  c.expect(code == cli::kOk, "solve exit code " + std::to_string(code));
  if (code != cli::kOk) return;
  json sol = load(out);
  c.expect(sol["ci_tuple"] == json({1, 4, 4}), "chosen tuple " + sol["ci_tuple"].dump());
  cli::VerifyReport rep = cli::verify_solution(sys, sol);
  c.expect(rep.pass, "returned pair fails verify: " + rep.failure);
  std::vector<Poly> defaults = default_diagonal_polys(sol["intermediate"]["relative_degrees"].get<std::vector<long>>());
  for (std::size_t i = 0; i < rep.diagonal.size() && rep.pass; ++i)
    c.expect(rep.diagonal[i] == RationalFunction(Poly(1), defaults[i]), "diagonal entry " + std::to_string(i + 1));

  SolveOptions all;
  all.all = true;
  SolveResult res = solve(sys, all);
  std::map<CITuple, std::size_t> rejected;
  for (const auto& a : res.audit) {
    if (a.feasible) {
      c.expect(a.config.tuple == CITuple{1, 4, 4}, "feasible tuple " + join(a.config.tuple));
    } else {
      c.expect(!a.reason.empty(), "no reason recorded for " + join(a.config.tuple));
      ++rejected[a.config.tuple];
    }
  }
  std::size_t fully = 0;
  for (const auto& [t, k] : rejected) fully += (t != CITuple{1, 4, 4} && k == res.row_configs.size());
  c.expect(fully == 8, std::to_string(fully) + " of the other 8 tuples rejected in every row configuration");
}

void criterion4(Check& c) {
  Analysis a = analyze(load_system(data("example2.json")));
  std::vector<CITuple> tuples{{1, 2, 2}, {1, 2, 3}, {1, 2, 4}, {1, 2, 5}, {1, 2, 6}, {1, 3, 3}, {1, 3, 4}, {1, 3, 5},
                              {1, 4, 4}, {2, 2, 2}, {2, 2, 3}, {2, 2, 4}, {2, 2, 5}, {2, 3, 3}, {2, 3, 4}, {3, 3, 3}};
  c.expect(a.tuples == tuples, "index tuple list differs");
  std::vector<std::vector<std::size_t>> positions;
  for (const auto& r : a.row_configs) positions.push_back(r.positions);
  std::vector<std::vector<std::size_t>> want{{1, 3}, {1, 5}, {1, 7}, {1, 9}, {3, 5},
                                             {3, 7}, {3, 9}, {5, 7}, {5, 9}, {7, 9}};
  c.expect(positions == want, "row configurations differ");
  cli::VerifyReport rep = cli::verify_solution(load_system(data("example2.json")), load(data("example2_published.json")));
  c.expect(rep.pass, "verify failed: " + rep.failure);
  c.expect(diag_of(rep) == "diag{1/(s+10), 1/(s+3), 1/(s+1)}", "diagonal " + diag_of(rep));
}

SolveOptions example2_configuration() {
  SolveOptions opt;
  opt.only_tuple = CITuple{2, 2, 3};
  opt.only_positions = std::vector<std::size_t>{1, 5};
  Assignment q;
  for (auto id : {ParamId::q(4, 1, 1), ParamId::q(5, 2, 1), ParamId::q(5, 3, 2), ParamId::q(1, 1, 1),
                  ParamId::q(2, 2, 1), ParamId::q(3, 3, 1)})
    q[id] = 1;
  opt.q_values = q;
  return opt;
}

void criterion5(Check& c) {
  StateSpace sys = load_system(data("example2.json"));
  Rng rng(derive_seed(kDefaultSeed, {5}));
  for (int k = 0; k < 5; ++k) {
    Assignment t;
    for (int i = 1; i <= 4; ++i) t[ParamId::t(i)] = Rational(rng.uniform(-9, 9), rng.uniform(1, 4));
    SolveOptions opt = example2_configuration();
    opt.t_values = t;
    SolveResult res = solve(sys, opt);
    c.expect(res.solved(), "configuration (2,2,3)/{1,5} not solved");
    if (!res.solved()) return;
    Rational t1 = t[ParamId::t(1)], t2 = t[ParamId::t(2)], t3 = t[ParamId::t(3)], t4 = t[ParamId::t(4)];
    Poly want(std::vector<Rational>{t1 * t4 - t2 * t3, -(t1 + t4), 1});
    Poly got = input_decoupling_zeros(res.solutions[0].square);
    c.expect(got == want, "t = (" + t1.to_string() + "," + t2.to_string() + "," + t3.to_string() + "," +
                              t4.to_string() + "): " + got.to_string() + " vs " + want.to_string());
  }
}

void criterion6(Check& c) {
  StateSpace sys = load_system(data("example2.json"));
  std::string out = (scratch() / "c6.json").string();
  cli::SolveCommand cmd;
  cmd.dz_target = "s^2+3s+2";
  int code = solve_to(data("example2.json"), out, cmd);
  c.expect(code == cli::kOk, "solve exit code " + std::to_string(code));
  if (code != cli::kOk) return;
  json sol = load(out);
  Poly recorded = poly_from_json(sol["fixed_poles"]["input_decoupling_zeros"]["coefficients"]);
  c.expect(recorded == P("s^2+3s+2"), "recorded input decoupling zeros " + recorded.to_string());
  RationalMatrix F = matrix_from_json(sol["F"], "F"), G = matrix_from_json(sol["G"], "G");
  Poly actual = uncontrollable_polynomial(sys.A + sys.B * F, sys.B * G);
  c.expect(actual == P("s^2+3s+2"), "closed-loop uncontrollable polynomial " + actual.to_string());
  c.expect(cli::verify_solution(sys, sol).pass, "solution fails verify");
}

RationalMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, long lo, long hi, int zero_percent) {
  RationalMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng.uniform(0, 99) >= zero_percent) m(i, j) = rng.uniform(lo, hi);
  return m;
}

std::size_t total(const std::vector<std::size_t>& v) {
  std::size_t s = 0;
  for (auto x : v) s += x;
  return s;
}

void criterion7(Check& c) {
  Rng rng(derive_seed(kDefaultSeed, {7}));
  int compared = 0;
  while (compared < 100) {
    std::size_t n = std::size_t(rng.uniform(1, 6)), l = std::size_t(rng.uniform(1, std::min<long>(4, long(n))));
    RationalMatrix A = random_matrix(rng, n, n, -3, 3, 55), B = random_matrix(rng, n, l, -2, 2, 40);
    auto want = oracle::controllability_indices(A, B);
    if (oracle::rank(B) < l || total(want) != n) continue;
    c.expect(controllability_indices(A, B) == want, "indices differ on system " + std::to_string(compared));
    ++compared;
  }
  int square = 0, decouplable = 0;
  while (square < 20) {
    std::size_t n = std::size_t(rng.uniform(2, 6)), m = std::size_t(rng.uniform(1, std::min<long>(4, long(n))));
    StateSpace sys{random_matrix(rng, n, n, -2, 2, 60), random_matrix(rng, n, m, -2, 2, 50),
                   random_matrix(rng, m, n, -2, 2, 65)};
    if (oracle::rank(sys.B) < m || total(oracle::controllability_indices(sys.A, sys.B)) != n) continue;
    PencilForm pf = to_pencil_form(sys);
    QBasis qb = build_QB(pf.sigma, pf.sigma);
    RowConfig none = enumerate_row_configs(pf.sigma, m).at(0);
    bool theorem = check_instance(pf.C_r, pf, qb, none, RationalMatrix::identity(n)).ok();
    auto d = relative_degrees(sys.A, sys.B, sys.C);
    bool bstar = std::find(d.begin(), d.end(), kNoRelativeDegree) == d.end() &&
                 oracle::rank(decoupling_matrix(sys.A, sys.B, sys.C, d)) == m;
    c.expect(theorem == bstar, "square system " + std::to_string(square) + ": controller-form test " +
                                   (theorem ? "succeeds" : "fails") + ", B* " + (bstar ? "invertible" : "singular"));
    decouplable += bstar;
    ++square;
  }
  c.expect(decouplable > 0 && decouplable < 20, "random square systems do not exercise both outcomes");
}

void criterion8(Check& c) {
  StateSpace e1 = load_system(data("example1.json")), e2 = load_system(data("example2.json"));
  SolveResult r1 = solve(e1);
  c.expect(r1.solved(), "example 1 not solved");
  for (const auto& sol : r1.solutions)
    c.expect(unobservable_factor(e1, sol, c, "example 1") == sol.fixed_poles.fixed_dec,
             "example 1: remaining factor differs from fixed decoupling poles");
  SolveOptions all;
  all.all = true;
  all.jobs = 4;
  SolveResult r2 = solve(e2, all);
  c.expect(r2.solved(), "example 2 not solved");
  for (const auto& sol : r2.solutions) {
    std::string tag = "example 2 " + join(sol.config.tuple) + "/{" + cli::join(sol.config.rows.positions) + "}";
    c.expect(unobservable_factor(e2, sol, c, tag) == sol.fixed_poles.fixed_dec,
             tag + ": remaining factor differs from fixed decoupling poles");
  }
  SolveOptions dz;
  dz.dz_target = P("s^2+3s+2");
  for (const auto& sol : solve(e2, dz).solutions)
    c.expect(unobservable_factor(e2, sol, c, "example 2 dz") == sol.fixed_poles.fixed_dec,
             "example 2 dz: remaining factor differs from fixed decoupling poles");
}

void criterion9(Check& c) {
  for (const char* name : {"example1.json", "example2.json"}) {
    std::vector<std::string> texts;
    for (unsigned jobs : {1u, 1u, 4u}) {
      cli::SolveCommand cmd;
      cmd.jobs = jobs;
      cmd.all = std::string(name) == "example2.json";
      std::string out = (scratch() / ("c9_" + std::to_string(texts.size()) + ".json")).string();
      c.expect(solve_to(data(name), out, cmd) == cli::kOk, std::string(name) + ": solve failed");
      texts.push_back(read_text(out));
    }
    c.expect(texts[0] == texts[1], std::string(name) + ": two runs with the same seed differ");
    c.expect(texts[0] == texts[2], std::string(name) + ": --jobs 1 and --jobs 4 differ");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> criteria{
      {1, "example 1 structure", 1, criterion1},
      {2, "example 1 published pair verifies", 5, criterion2},
      {3, "example 1 synthesis selects (1,4,4)", 30, criterion3},
      {4, "example 2 structure and published pair", 5, criterion4},
      {5, "input decoupling zero formula", 0, criterion5},
      {6, "zero assignment s^2+3s+2", 0, criterion6},
      {7, "oracle equivalence", 0, criterion7},
      {8, "closed-loop factorization", 0, criterion8},
      {9, "determinism", 0, criterion9},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0 && secs >= cr.limit_seconds)
      c.failures.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(cr.limit_seconds) + " s");
    std::ostringstream time;
    time.precision(3);
    time << std::fixed << secs;
    std::cout << (c.failures.empty() ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title << " ("
              << time.str() << " s)\n";
    for (const auto& f : c.failures) std::cout << "    " << f << "\n";
    failed += !c.failures.empty();
  }
  fs::remove_all(scratch());
  return failed ? 1 : 0;
}
