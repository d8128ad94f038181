/* Copyright 2026 The qoc-magnus Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qoc/pipeline.hpp"

// Config-driven front end: JSON problem descriptions, the check / build /
// solve / verify / oracle commands, and text or JSON reports.
//
// Exit codes: 0 success, 1 config or usage error, 2 check failed
// (uncontrollable or divergent horizon), 3 size budget exceeded,
// 4 solver stopped before optimality.

namespace qoc::cli {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleParams {
  double drift = 0.0;
  double ramp = 0.0;
  double horizon = 1.0;
  int terms = 5;
  int substeps = 100000;
};

struct ProblemConfig {
  int schema_version = 1;
  bool has_system = false;
  magnus::SystemSpec system;
  std::optional<algebra::CMatrix> target;
  std::vector<std::vector<pipeline::Bounds>> bounds;
  int magnus_order = 2;
  int relax_order = -1;  // -1: follow magnus_order
  double lambda_energy = 0.0;
  std::vector<double> mu;
  double solver_tol = 1e-7;
  int solver_max_iter = 200;
  bool deterministic = true;
  unsigned seed = 1;
  std::optional<OracleParams> oracle;

  pipeline::ControlProblem to_control_problem() const {
    if (!has_system) throw ConfigError("config: missing 'system' section");
    if (!target) throw ConfigError("config: missing 'target' matrix");
    pipeline::ControlProblem p;
    p.system = system;
    p.target = *target;
    p.bounds = bounds;
    p.magnus_order = magnus_order;
    p.relax_order = relax_order > 0 ? relax_order : magnus_order;
    p.lambda_energy = lambda_energy;
    p.mu_weights = mu;
    p.solver_tol = solver_tol;
    p.solver_max_iter = solver_max_iter;
    return p;
  }
};

namespace detail {

inline algebra::CMatrix parse_matrix(const json& node, int dim, const std::string& where) {
  if (!node.is_array() || static_cast<int>(node.size()) != dim) {
    throw ConfigError(where + ": expected " + std::to_string(dim) + " rows");
  }
  algebra::CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = node[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ConfigError(where + ": row " + std::to_string(r) + " must have " +
                        std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) {
      const json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
        throw ConfigError(where + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                          ") must be a [re, im] pair");
      }
      m(r, c) = algebra::Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

inline void reject_unknown(const json& node, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (const auto& [key, value] : node.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

inline double require_number(const json& node, const char* field, const std::string& where) {
  if (!node.contains(field) || !node[field].is_number()) {
    throw ConfigError(where + ": missing numeric field '" + field + "'");
  }
  return node[field].get<double>();
}

}  // namespace detail

inline ProblemConfig parse_config(const json& root) {
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  detail::reject_unknown(root,
                         {"schema_version", "system", "horizon", "magnus_order", "relax_order",
                          "bounds", "target", "lambda_energy", "mu", "solver", "mode", "oracle"},
                         "config");
  ProblemConfig cfg;
  if (!root.contains("schema_version") || !root["schema_version"].is_number_integer()) {
    throw ConfigError("config: missing integer 'schema_version'");
  }
  cfg.schema_version = root["schema_version"].get<int>();
  if (cfg.schema_version != 1) {
    throw ConfigError("config: unsupported schema_version " +
                      std::to_string(cfg.schema_version));
  }

  if (root.contains("system")) {
    const json& sys = root["system"];
    detail::reject_unknown(sys, {"dim", "terms"}, "system");
    if (!sys.contains("dim") || !sys["dim"].is_number_integer()) {
      throw ConfigError("system: missing integer 'dim'");
    }
    cfg.system.dim = sys["dim"].get<int>();
    if (cfg.system.dim < 1) throw ConfigError("system.dim: must be >= 1");
    if (!sys.contains("terms") || !sys["terms"].is_array() || sys["terms"].empty()) {
      throw ConfigError("system.terms: need a non-empty array");
    }
    for (std::size_t j = 0; j < sys["terms"].size(); ++j) {
      const json& term = sys["terms"][j];
      const std::string where = "system.terms[" + std::to_string(j) + "]";
      detail::reject_unknown(term, {"matrix", "pinned"}, where);
      if (!term.contains("matrix")) throw ConfigError(where + ": missing 'matrix'");
      magnus::HamiltonianTerm t;
      t.matrix = detail::parse_matrix(term["matrix"], cfg.system.dim, where + ".matrix");
      if (term.contains("pinned")) {
        if (!term["pinned"].is_number()) throw ConfigError(where + ".pinned: must be a number");
        t.pinned = term["pinned"].get<double>();
      }
      cfg.system.terms.push_back(std::move(t));
    }
    if (!root.contains("horizon")) throw ConfigError("config: missing 'horizon'");
    const json& hor = root["horizon"];
    detail::reject_unknown(hor, {"T", "K"}, "horizon");
    const double t_final = detail::require_number(hor, "T", "horizon");
    if (!hor.contains("K") || !hor["K"].is_number_integer()) {
      throw ConfigError("horizon: missing integer 'K'");
    }
    cfg.system.knots = hor["K"].get<int>();
    if (cfg.system.knots < 1) throw ConfigError("horizon.K: must be >= 1");
    if (!(t_final > 0)) throw ConfigError("horizon.T: must be positive");
    cfg.system.dt = t_final / cfg.system.knots;
    cfg.system.validate();
    cfg.has_system = true;

    const std::size_t n_free = cfg.system.free_term_indices().size();
    if (n_free > 0) {
      if (!root.contains("bounds") || !root["bounds"].is_array() ||
          root["bounds"].size() != n_free) {
        throw ConfigError("bounds: need one entry per free control (" + std::to_string(n_free) +
                          ")");
      }
      for (std::size_t s = 0; s < n_free; ++s) {
        const json& b = root["bounds"][s];
        const std::string where = "bounds[" + std::to_string(s) + "]";
        auto parse_pair = [&](const json& pair, const std::string& w) -> pipeline::Bounds {
          if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
              !pair[1].is_number()) {
            throw ConfigError(w + ": expected [lo, hi]");
          }
          pipeline::Bounds out{pair[0].get<double>(), pair[1].get<double>()};
          if (out.lo > out.hi) throw ConfigError(w + ": lo > hi");
          return out;
        };
        std::vector<pipeline::Bounds> row;
        if (b.is_array() && b.size() == 2 && b[0].is_number()) {
          row.assign(cfg.system.knots, parse_pair(b, where));
        } else if (b.is_array() && static_cast<int>(b.size()) == cfg.system.knots) {
          for (int k = 0; k < cfg.system.knots; ++k) {
            row.push_back(parse_pair(b[k], where + "[" + std::to_string(k) + "]"));
          }
        } else {
          throw ConfigError(where + ": expected [lo, hi] or one pair per knot");
        }
        cfg.bounds.push_back(std::move(row));
      }
    }
    if (root.contains("target")) {
      cfg.target = detail::parse_matrix(root["target"], cfg.system.dim, "target");
      if (!algebra::is_unitary(*cfg.target, 1e-8)) {
        throw ConfigError("target: matrix is not unitary");
      }
    }
  }

  if (root.contains("magnus_order")) {
    if (!root["magnus_order"].is_number_integer()) {
      throw ConfigError("magnus_order: must be an integer");
    }
    cfg.magnus_order = root["magnus_order"].get<int>();
    if (cfg.magnus_order < 1 || cfg.magnus_order > 4) {
      throw ConfigError("magnus_order: supported range is 1..4");
    }
  }
  if (root.contains("relax_order")) {
    if (!root["relax_order"].is_number_integer()) {
      throw ConfigError("relax_order: must be an integer");
    }
    cfg.relax_order = root["relax_order"].get<int>();
  }
  if (root.contains("lambda_energy")) {
    if (!root["lambda_energy"].is_number()) throw ConfigError("lambda_energy: must be a number");
    cfg.lambda_energy = root["lambda_energy"].get<double>();
    if (cfg.lambda_energy < 0) throw ConfigError("lambda_energy: must be >= 0");
  }
  if (root.contains("mu")) {
    if (!root["mu"].is_array()) throw ConfigError("mu: must be an array");
    for (const auto& v : root["mu"]) {
      if (!v.is_number() || !(v.get<double>() > 0)) {
        throw ConfigError("mu: entries must be positive numbers");
      }
      cfg.mu.push_back(v.get<double>());
    }
  }
  if (root.contains("solver")) {
    const json& s = root["solver"];
    detail::reject_unknown(s, {"tol", "max_iter"}, "solver");
    if (s.contains("tol")) {
      if (!s["tol"].is_number() || !(s["tol"].get<double>() > 0)) {
        throw ConfigError("solver.tol: must be positive");
      }
      cfg.solver_tol = s["tol"].get<double>();
    }
    if (s.contains("max_iter")) {
      if (!s["max_iter"].is_number_integer() || s["max_iter"].get<int>() < 1) {
        throw ConfigError("solver.max_iter: must be a positive integer");
      }
      cfg.solver_max_iter = s["max_iter"].get<int>();
    }
  }
  if (root.contains("mode")) {
    const json& m = root["mode"];
    detail::reject_unknown(m, {"deterministic", "seed"}, "mode");
    if (m.contains("deterministic")) {
      if (!m["deterministic"].is_boolean()) throw ConfigError("mode.deterministic: must be bool");
      cfg.deterministic = m["deterministic"].get<bool>();
    }
    if (m.contains("seed")) {
      if (!m["seed"].is_number_integer()) throw ConfigError("mode.seed: must be an integer");
      cfg.seed = m["seed"].get<unsigned>();
    }
  }
  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    detail::reject_unknown(o, {"drift", "ramp", "T", "terms", "substeps"}, "oracle");
    OracleParams op;
    op.drift = detail::require_number(o, "drift", "oracle");
    op.ramp = detail::require_number(o, "ramp", "oracle");
    op.horizon = detail::require_number(o, "T", "oracle");
    if (o.contains("terms")) {
      if (!o["terms"].is_number_integer()) throw ConfigError("oracle.terms: must be an integer");
      op.terms = o["terms"].get<int>();
    }
    if (o.contains("substeps")) {
      if (!o["substeps"].is_number_integer() || o["substeps"].get<int>() < 1) {
        throw ConfigError("oracle.substeps: must be a positive integer");
      }
      op.substeps = o["substeps"].get<int>();
    }
    cfg.oracle = op;
  }
  return cfg;
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(root);
}

struct CommandOptions {
  std::string format = "text";  // "text" | "json"
  std::string out;
};

// --- check ------------------------------------------------------------------

inline int cmd_check(const ProblemConfig& cfg, const CommandOptions& opt, std::ostream& os) {
  if (!cfg.has_system) throw ConfigError("check: config has no 'system' section");
  const lie::LieBasis basis =
      lie::closure(pipeline::system_generators(cfg.system), cfg.system.dim);
  const bool controllable = lie::is_operator_controllable(basis, cfg.system.dim);

  std::vector<std::pair<double, double>> conv_bounds;
  for (const auto& row : cfg.bounds) {
    double lo = 0, hi = 0;
    for (const auto& b : row) {
      lo = std::min(lo, b.lo);
      hi = std::max(hi, b.hi);
    }
    conv_bounds.emplace_back(lo, hi);
  }
  const auto conv = magnus::convergence_bound(cfg.system, conv_bounds);

  if (opt.format == "json") {
    json out;
    out["lie_dimension"] = basis.dimension();
    out["required_dimension"] = cfg.system.dim * cfg.system.dim - 1;
    out["operator_controllable"] = controllable;
    out["convergence_bound"] = conv.value;
    out["convergent"] = conv.convergent;
    json depth = json::array();
    for (const auto& [k, n] : basis.depth_log) {
      depth.push_back({{"depth", k}, {"added", n}});
    }
    out["depth_log"] = depth;
    os << out.dump(2) << "\n";
  } else {
    os << "lie closure dimension: " << basis.dimension() << " of "
       << cfg.system.dim * cfg.system.dim - 1 << " required\n";
    os << "operator controllable: " << (controllable ? "yes" : "no") << "\n";
    os << "depth  new directions\n";
    for (const auto& [k, n] : basis.depth_log) {
      os << "  " << k << "      " << n << "\n";
    }
    os << "convergence bound: " << conv.value << " (pi = " << M_PI << ")\n";
    os << "series convergence guaranteed: " << (conv.convergent ? "yes" : "no") << "\n";
  }
  return (controllable && conv.convergent) ? 0 : 2;
}

// --- build ------------------------------------------------------------------

inline int cmd_build(const ProblemConfig& cfg, const CommandOptions& opt, std::ostream& os) {
  if (opt.out.empty()) throw ConfigError("build: --out FILE is required");
  const pipeline::ControlProblem problem = cfg.to_control_problem();
  problem.validate();
  const auto free_idx = problem.system.free_term_indices();
  if (free_idx.empty()) throw ConfigError("build: no free controls to optimize");

  try {
    const magnus::OperatorPolynomial omega =
        magnus::assemble(problem.system, problem.magnus_order, problem.limits);
    const algebra::CMatrix target_log = algebra::log_unitary(problem.target);
    poly::Polynomial objective = pipeline::assemble_objective(problem, omega, target_log);
    std::map<poly::VarId, double> pins;
    const auto constraints = pipeline::assemble_constraints(problem, &pins);
    objective = objective.substitute_pinned(pins);
    const moment::MomentRelaxation relax = moment::build_relaxation(
        objective, constraints, problem.relax_order, problem.basis_budget);
    const sdp::SdpProblem sdp_problem = moment::to_sdp_problem(relax);

    std::ofstream file(opt.out);
    if (!file) throw ConfigError("build: cannot write " + opt.out);
    file << sdp::export_sdpa(sdp_problem);

    const std::string index_path = opt.out + ".idx";
    std::ofstream index(index_path);
    if (!index) throw ConfigError("build: cannot write " + index_path);
    index << "position\tmonomial\n";
    for (std::size_t i = 0; i < relax.moments.monomials.size(); ++i) {
      index << i << "\t" << relax.moments.monomials[i].str() << "\n";
    }
    os << "wrote " << opt.out << " (" << sdp_problem.num_vars << " moments, "
       << sdp_problem.blocks.size() << " blocks) and " << index_path << "\n";
    return 0;
  } catch (const magnus::ResourceLimitError& e) {
    os << "size budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const moment::BasisBudgetError& e) {
    os << "size budget exceeded: " << e.what() << "\n";
    return 3;
  }
}

// --- solve ------------------------------------------------------------------

inline json report_to_json(const pipeline::SolveReport& rep) {
  const auto& s = *rep.solution;
  const auto& p = *rep.problem;
  json out;
  out["system"] = {{"dim", p.system.dim},
                   {"terms", p.system.terms.size()},
                   {"free_controls", p.system.free_term_indices().size()},
                   {"knots", p.system.knots},
                   {"dt", p.system.dt},
                   {"horizon", p.system.horizon()}};
  {
    json bounds = json::array();
    const auto free_idx = p.system.free_term_indices();
    for (std::size_t slot = 0; slot < free_idx.size(); ++slot) {
      json row = json::array();
      for (const auto& b : p.bounds[slot]) row.push_back({b.lo, b.hi});
      bounds.push_back({{"control", free_idx[slot]}, {"per_knot", row}});
    }
    out["bounds"] = bounds;
  }
  out["orders"] = {{"magnus", p.magnus_order}, {"relaxation", p.relax_order}};
  out["lambda_energy"] = p.lambda_energy;
  out["convergence_bound"] = {{"value", s.convergence_value}, {"convergent", s.convergent}};
  out["lie"] = {{"dimension", rep.lie_dimension}, {"operator_controllable", rep.controllable}};
  out["relaxation"] = {{"moments", s.moment_count}, {"block_sides", s.block_sides}};
  out["solver"] = {{"status", sdp::to_string(s.solver_status)},
                   {"iterations", s.sdp_iterations},
                   {"duality_gap", s.sdp_gap}};
  out["lower_bound"] = s.lower_bound;
  out["achieved"] = s.achieved;
  out["gap"] = s.gap;
  out["certificates"] = {{"rank_one", s.rank_one},
                         {"rank_loop", s.rank_loop},
                         {"extraction", s.extraction}};
  out["target_branch_warning"] = s.target_branch_warning;
  out["metrics"] = {{"trace_distance", s.metrics.trace_distance},
                    {"fidelity", s.metrics.fidelity},
                    {"frobenius_overlap", s.metrics.frobenius_overlap}};
  out["objective_polynomial"] = s.objective_polynomial;
  json pulses = json::object();
  for (const auto& [term, row] : s.pulses) pulses["u" + std::to_string(term)] = row;
  out["pulses"] = pulses;
  return out;
}

inline int cmd_solve(const ProblemConfig& cfg, const CommandOptions& opt, std::ostream& os) {
  if (opt.out.empty()) throw ConfigError("solve: --out DIR is required");
  const pipeline::ControlProblem problem = cfg.to_control_problem();
  problem.validate();

  std::filesystem::create_directories(opt.out);
  pipeline::PulseSolution sol;
  try {
    sol = pipeline::solve_control(problem);
  } catch (const magnus::ResourceLimitError& e) {
    os << "size budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const moment::BasisBudgetError& e) {
    os << "size budget exceeded: " << e.what() << "\n";
    return 3;
  }

  const lie::LieBasis basis =
      lie::closure(pipeline::system_generators(problem.system), problem.system.dim);

  pipeline::SolveReport rep{&problem, &sol, basis.dimension(),
                            lie::is_operator_controllable(basis, problem.system.dim)};

  const std::filesystem::path dir(opt.out);
  {
    std::ofstream csv(dir / "pulses.csv");
    if (!csv) throw ConfigError("solve: cannot write pulses.csv");
    csv << pipeline::pulses_to_csv(sol);
  }
  const std::string report_text = pipeline::render_report_text(rep);
  {
    std::ofstream rf(dir / (opt.format == "json" ? "report.json" : "report.txt"));
    if (!rf) throw ConfigError("solve: cannot write report");
    if (opt.format == "json") {
      rf << report_to_json(rep).dump(2) << "\n";
    } else {
      rf << report_text;
    }
  }
  if (opt.format == "json") {
    os << report_to_json(rep).dump(2) << "\n";
  } else {
    os << report_text;
  }
  return sol.solver_status == sdp::SolveStatus::optimal ? 0 : 4;
}

// --- verify -----------------------------------------------------------------

inline int cmd_verify(const ProblemConfig& cfg, const std::string& pulses_path,
                      const CommandOptions& opt, std::ostream& os) {
  if (!cfg.has_system) throw ConfigError("verify: config has no 'system' section");
  std::ifstream in(pulses_path);
  if (!in) throw ConfigError("verify: cannot open " + pulses_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto grid = pipeline::pulses_from_csv(buf.str(), cfg.system.knots);

  const auto free_idx = cfg.system.free_term_indices();
  std::vector<std::vector<double>> pulses;
  for (int j : free_idx) {
    auto it = grid.find(j);
    if (it == grid.end()) {
      throw ConfigError("verify: pulses file has no rows for control " + std::to_string(j));
    }
    pulses.push_back(it->second);
  }
  for (const auto& [term, row] : grid) {
    bool known = false;
    for (int j : free_idx) known = known || j == term;
    if (!known) throw ConfigError("verify: pulses reference unknown control " +
                                  std::to_string(term));
  }

  const algebra::CMatrix u_ref = pipeline::propagate_reference(cfg.system, pulses);
  algebra::CMatrix omega = algebra::zero(cfg.system.dim);
  json rows = json::array();
  if (opt.format != "json") os << "order  ||exp(sum) - U_ref||_F\n";
  for (int m = 1; m <= cfg.magnus_order; ++m) {
    omega += magnus::evaluate_term_numeric(cfg.system, m, pulses);
    const double err = (algebra::exp_anti_hermitian(omega) - u_ref).norm();
    if (opt.format == "json") {
      rows.push_back({{"order", m}, {"error", err}});
    } else {
      os << "  " << m << "      " << sdp::detail::format_double(err) << "\n";
    }
  }
  if (opt.format == "json") {
    os << json{{"errors", rows}}.dump(2) << "\n";
  }
  return 0;
}

// --- oracle -----------------------------------------------------------------

inline int cmd_oracle(const OracleParams& params, const CommandOptions& opt, std::ostream& os) {
  const algebra::CMatrix omega =
      magnus::linear_drive_oracle(params.drift, params.ramp, params.horizon, params.terms);
  const algebra::CMatrix u_closed = algebra::exp_anti_hermitian(omega);

  const algebra::CMatrix sx = algebra::spin_half('x');
  const algebra::CMatrix sz = algebra::spin_half('z');
  const double ramp = params.ramp;
  const algebra::CMatrix u_ref = pipeline::propagate_profile(
      2,
      {{sz, [&](double) { return params.drift; }}, {sx, [&](double t) { return ramp * t; }}},
      params.horizon, params.substeps);
  const algebra::CMatrix omega_ref = algebra::log_unitary(u_ref);

  const double radius = std::abs(params.drift) * params.horizon / (2.0 * M_PI);
  json out;
  out["omega_error"] = (omega - omega_ref).norm();
  out["propagator_error"] = (u_closed - u_ref).norm();
  out["series_radius_ratio"] = radius;
  json coeffs = json::array();
  double tpow = std::pow(params.horizon, 3), apow = params.drift;
  for (int n = 1; n <= params.terms; ++n) {
    const double c = magnus::kLinearDriveSyCoeff[n - 1] * apow * params.ramp * tpow;
    json row{{"term", 2 * n}, {"coefficient", c}};
    if (n > 1) {
      // Consecutive-coefficient ratio approaches -(aT)^2/(2 pi)^2; the
      // underlying Bernoulli ratio approaches -1/(2 pi)^2 (Salzman 1987).
      row["ratio"] = -magnus::kLinearDriveSyCoeff[n - 1] / magnus::kLinearDriveSyCoeff[n - 2];
      row["ratio_limit"] = -1.0 / (4.0 * M_PI * M_PI);
    }
    coeffs.push_back(row);
    tpow *= params.horizon * params.horizon;
    apow *= params.drift * params.drift;
  }
  out["sy_terms"] = coeffs;
  out["divergence_warning"] = radius >= 1.0;

  if (opt.format == "json") {
    os << out.dump(2) << "\n";
  } else {
    os << "closed-form generator vs numerical reference\n";
    os << "  ||Omega_closed - log U_ref||_F = " << out["omega_error"].get<double>() << "\n";
    os << "  ||exp(Omega_closed) - U_ref||_F = " << out["propagator_error"].get<double>()
       << "\n";
    os << "S_y series coefficients (term, value, consecutive ratio -> -1/(2 pi)^2 = "
       << -1.0 / (4.0 * M_PI * M_PI) << "):\n";
    for (const auto& row : coeffs) {
      os << "  Omega_" << row["term"].get<int>() << ": " << row["coefficient"].get<double>();
      if (row.contains("ratio")) os << "  ratio " << row["ratio"].get<double>();
      os << "\n";
    }
    os << "series radius ratio |a| T / 2 pi = " << radius << "\n";
    if (radius >= 1.0) {
      os << "warning: |a| T / 2 pi >= 1, the series is outside its guaranteed radius\n";
    }
  }
  return 0;
}

}  // namespace qoc::cli
