#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "morgan/zeros.hpp"

namespace morgan {

struct Configuration {
  std::size_t tuple_index = 0;   // position in the admissible tuple list
  std::size_t config_index = 0;  // position in the row configuration list
  CITuple tuple;
  RowConfig rows;
};

struct DecouplingSolution {
  Configuration config;
  RationalMatrix F, G;
  RationalMatrix F0, G0, Q, F_f, G_f;
  SquareSystem square;
  ConstraintSet constraints;
  std::vector<long> degree_deficits;
  Assignment q_values, t_values;
  std::vector<RationalMatrix> mu_rows;
  std::vector<Poly> targets;
  std::vector<RationalFunction> diagonal;
  FixedPoleReport fixed_poles;
};

struct AuditEntry {
  Configuration config;
  bool feasible = false;
  std::string reason;
};

struct SolveOptions {
  std::uint64_t seed = kDefaultSeed;
  bool all = false;                                     // collect every feasible configuration
  std::optional<std::vector<Poly>> diagonal_targets;    // p_i, monic of degree d_i + 1
  std::optional<Poly> dz_target;                        // input decoupling zero polynomial
  unsigned jobs = 1;
  std::optional<CITuple> only_tuple;
  std::optional<std::vector<std::size_t>> only_positions;  // 1-based s-positions
  std::optional<Assignment> q_values;                   // fixed Q_B instantiation
  std::optional<Assignment> t_values;                   // fixed free feedback parameters
};

struct SolveResult {
  std::vector<std::size_t> sigma;
  std::vector<CITuple> tuples;
  std::vector<RowConfig> row_configs;
  std::size_t bound = 0;
  std::vector<AuditEntry> audit;
  std::vector<DecouplingSolution> solutions;

  bool solved() const { return !solutions.empty(); }
};

// F = G_I (F0 + G0 F_f Q^{-1}) P^{-1}, G = G_I G0 G_f, verified on the original system.
inline DecouplingSolution compose_final(const StateSpace& sys, const PencilForm& pencil, const SquaringData& sq,
                                        const SquareSystem& square, const DecouplingPair& pair,
                                        const std::vector<Poly>& targets) {
  DecouplingSolution sol;
  sol.F = pencil.G_I * (sq.F0 + sq.G0 * pair.F * inverse(sq.Q)) * pencil.P_inv;
  sol.G = pencil.G_I * sq.G0 * pair.G;
  sol.F0 = sq.F0;
  sol.G0 = sq.G0;
  sol.Q = sq.Q;
  sol.F_f = pair.F;
  sol.G_f = pair.G;
  sol.square = square;
  sol.q_values = sq.q_values;
  sol.t_values = sq.t_values;
  sol.mu_rows = sq.mu_rows;
  sol.targets = targets;

  TransferMatrix H = transfer_function(sys.A, sys.B, sys.C, sol.F, sol.G);
  for (std::size_t i = 0; i < H.rows(); ++i)
    for (std::size_t j = 0; j < H.cols(); ++j) {
      if (i != j && !H(i, j).is_zero())
        throw VerificationFailed("closed loop entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ") = " + H(i, j).to_string() + " is not zero");
      if (i == j && !(H(i, i) == RationalFunction(Poly(1), targets[i])))
        throw VerificationFailed("closed loop entry (" + std::to_string(i + 1) + "," + std::to_string(i + 1) +
                                 ") = " + H(i, i).to_string() + ", expected 1/(" + targets[i].to_string() + ")");
    }
  for (std::size_t i = 0; i < H.rows(); ++i) sol.diagonal.push_back(H(i, i));
  if (rank(sol.G) != sys.outputs()) throw VerificationFailed("G does not have full column rank");
  return sol;
}

struct ConfigurationOutcome {
  AuditEntry audit;
  std::optional<DecouplingSolution> solution;
};

inline ConfigurationOutcome evaluate_configuration(const StateSpace& sys, const PencilForm& pencil,
                                                   const Configuration& cfg, const SolveOptions& opt, Rng& rng) {
  ConfigurationOutcome out;
  out.audit.config = cfg;
  auto reject = [&](std::string why) {
    out.audit.reason = std::move(why);
    return out;
  };
  std::size_t n = pencil.states();
  std::size_t f = n - sum(cfg.tuple);
  if (opt.dz_target && opt.dz_target->degree() != long(f))
    return reject("input decoupling zero target has degree " + std::to_string(opt.dz_target->degree()) +
                  " but this configuration leaves " + std::to_string(f) + " uncontrollable modes");

  QBasis qb = build_QB(pencil.sigma, cfg.tuple);
  DecouplabilityReport rep = decouplability_search(pencil.C_r, pencil, qb, cfg.rows, rng);
  if (!rep.success) return reject(rep.diagnostics);

  Instantiation inst;
  if (opt.q_values) {
    inst = instantiate_with(qb, rep.constraints, *opt.q_values);
    if (!check_instance(pencil.C_r, pencil, qb, cfg.rows, inst.QB).ok())
      return reject("supplied parameter values violate a rank condition");
  } else {
    auto found = instantiate_configuration(pencil.C_r, pencil, qb, cfg.rows, rep.constraints, rng);
    if (!found) return reject("no numeric instantiation passed the rank checks in " + std::to_string(kInstanceTries) +
                              " draws");
    inst = std::move(*found);
  }

  MuSolver mu;
  try {
    mu = solve_feedback_rows(qb, pencil.ends, cfg.rows, inst.QB);
  } catch (const NotSolvable& e) {
    return reject(e.what());
  }

  Assignment t_values;
  for (const auto& id : mu.t_params()) t_values[id] = Rational();
  if (opt.t_values)
    for (const auto& [id, v] : *opt.t_values)
      if (t_values.count(id)) t_values[id] = v;
  if (opt.dz_target) {
    SquaringData sq0 = assemble_squaring(pencil, qb, cfg.rows, mu, inst, t_values);
    auto zp = zero_assignment_problem(pencil, cfg.rows, mu, sq0);
    ZeroAssignment za = assign_zeros(zp, *opt.dz_target);
    if (auto* best = std::get_if<BestEffortReport>(&za)) return reject(best->reason);
    for (const auto& [id, v] : std::get<Assignment>(za)) t_values[id] = v;
  }

  SquaringData sq = assemble_squaring(pencil, qb, cfg.rows, mu, inst, t_values);
  SquareSystem square = make_square_system(pencil, sq, cfg.tuple);
  std::vector<Poly> targets;
  if (opt.diagonal_targets) {
    targets = *opt.diagonal_targets;
    if (targets.size() != sys.outputs())
      throw TargetDegreeMismatch("expected " + std::to_string(sys.outputs()) + " diagonal polynomials");
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (targets[i].degree() != square.relative_degrees[i] + 1)
        return reject("diagonal target " + std::to_string(i + 1) + " needs degree " +
                      std::to_string(square.relative_degrees[i] + 1));
  } else {
    targets = default_diagonal_polys(square.relative_degrees);
  }
  DecouplingPair pair = square_decouple(square, targets);
  DecouplingSolution sol = compose_final(sys, pencil, sq, square, pair, targets);
  sol.config = cfg;
  sol.constraints = rep.constraints;
  sol.degree_deficits = rep.degree_deficits;
  sol.fixed_poles = fixed_pole_report(square, mu.t_params(), t_values);
  if (opt.dz_target && !(sol.fixed_poles.input_dz == *opt.dz_target))
    throw VerificationFailed("input decoupling zeros " + sol.fixed_poles.input_dz.to_string() + " differ from target");
  out.audit.feasible = true;
  out.audit.reason = "decouplable";
  out.solution = std::move(sol);
  return out;
}

inline std::vector<Configuration> configuration_grid(const std::vector<CITuple>& tuples,
                                                     const std::vector<RowConfig>& rows, const SolveOptions& opt) {
  std::vector<Configuration> grid;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    if (opt.only_tuple && tuples[i] != *opt.only_tuple) continue;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (opt.only_positions && rows[j].positions != *opt.only_positions) continue;
      grid.push_back({i, j, tuples[i], rows[j]});
    }
  }
  return grid;
}

// Ordered search over tuples x row configurations.  Each configuration has its
// own derived seed, and the first-solution winner is the smallest grid index,
// so the result does not depend on the number of worker threads.
inline SolveResult solve(const StateSpace& sys, const SolveOptions& opt = {}) {
  PencilForm pencil = to_pencil_form(sys);
  SolveResult res;
  res.sigma = pencil.sigma;
  res.tuples = enumerate_tuples(pencil.sigma, sys.outputs());
  res.row_configs = enumerate_row_configs(pencil.sigma, sys.outputs());
  res.bound = res.tuples.size() * res.row_configs.size();
  std::vector<Configuration> grid = configuration_grid(res.tuples, res.row_configs, opt);

  std::vector<std::optional<ConfigurationOutcome>> done(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> winner{grid.size()};
  auto work = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= grid.size() || (!opt.all && k > winner.load())) return;
      try {
        Rng rng(derive_seed(opt.seed, {grid[k].tuple_index, grid[k].config_index}));
        done[k] = evaluate_configuration(sys, pencil, grid[k], opt, rng);
        if (done[k]->solution) {
          std::size_t w = winner.load();
          while (k < w && !winner.compare_exchange_weak(w, k)) {
          }
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned jobs = std::max(1u, opt.jobs);
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::size_t last = opt.all ? grid.size() : std::min(grid.size(), winner.load() + 1);
  for (std::size_t k = 0; k < last; ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    res.audit.push_back(done[k]->audit);
    if (done[k]->solution) res.solutions.push_back(std::move(*done[k]->solution));
  }
  return res;
}

}  // namespace morgan
