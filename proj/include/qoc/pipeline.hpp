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

#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoc/algebra.hpp"
#include "qoc/lie.hpp"
#include "qoc/magnus.hpp"
#include "qoc/moment.hpp"
#include "qoc/poly.hpp"
#include "qoc/sdp.hpp"

// End-to-end assembly of a pulse-shaping problem: algebra-space residual
// objective, box constraints, moment relaxation, SDP solve, first-moment
// pulse extraction, and independent verification by product propagation.
//
// The objective compares the truncated generator sum against the principal
// log of the target in the algebra, || Omega(u) - log U* ||_F^2. It is an
// exact real polynomial of degree 2*m in the controls and shares its zero
// set with the group-space distance criteria, which keeps the relaxation
// order finite; trace distance and fidelity are reported as metrics only.

namespace qoc::pipeline {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct ControlProblem {
  magnus::SystemSpec system;
  algebra::CMatrix target;
  // Per free control (in free-term order), per knot.
  std::vector<std::vector<Bounds>> bounds;
  int magnus_order = 2;
  int relax_order = 2;
  double lambda_energy = 0.0;
  std::vector<double> mu_weights;  // energy scale per free control; default 1
  double solver_tol = 1e-7;
  int solver_max_iter = 200;
  magnus::MagnusLimits limits;
  std::size_t basis_budget = moment::kDefaultBasisBudget;

  void set_uniform_bounds(const std::vector<Bounds>& per_control) {
    bounds.clear();
    for (const auto& b : per_control) {
      bounds.emplace_back(system.knots, b);
    }
  }

  void validate() const {
    system.validate();
    const auto free_idx = system.free_term_indices();
    if (!algebra::is_unitary(target, 1e-8) ||
        target.rows() != system.dim) {
      throw std::invalid_argument("ControlProblem: target must be a unitary of system dimension");
    }
    if (bounds.size() != free_idx.size()) {
      throw std::invalid_argument("ControlProblem: need one bounds row per free control");
    }
    for (const auto& row : bounds) {
      if (static_cast<int>(row.size()) != system.knots) {
        throw std::invalid_argument("ControlProblem: bounds row length must equal knot count");
      }
      for (const auto& b : row) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) {
          throw std::invalid_argument("ControlProblem: bounds must be finite");
        }
        if (b.lo > b.hi) throw std::invalid_argument("ControlProblem: lo > hi");
      }
    }
    if (magnus_order < 1 || magnus_order > 4) {
      throw std::invalid_argument("ControlProblem: magnus_order must be in 1..4");
    }
    if (relax_order < magnus_order) {
      throw std::invalid_argument("ControlProblem: relax_order must be >= magnus_order");
    }
    if (lambda_energy < 0) throw std::invalid_argument("ControlProblem: lambda_energy < 0");
    if (!mu_weights.empty() && mu_weights.size() != free_idx.size()) {
      throw std::invalid_argument("ControlProblem: mu_weights size mismatch");
    }
    for (double mu : mu_weights) {
      if (!(mu > 0)) throw std::invalid_argument("ControlProblem: mu weights must be positive");
    }
  }
};

// Generators of the dynamical Lie algebra of a control system: all pinned
// terms act through their fixed weighted sum (one drift generator), each
// free term contributes its own direction.
inline std::vector<algebra::CMatrix> system_generators(const magnus::SystemSpec& sys) {
  std::vector<algebra::CMatrix> out;
  algebra::CMatrix drift = algebra::zero(sys.dim);
  bool has_drift = false;
  for (const auto& term : sys.terms) {
    if (term.pinned) {
      drift += *term.pinned * term.matrix;
      has_drift = true;
    } else {
      out.push_back(term.matrix);
    }
  }
  if (has_drift && drift.norm() > 0) out.insert(out.begin(), drift);
  return out;
}

struct Metrics {
  double trace_distance = 0.0;
  double fidelity = 0.0;
  double frobenius_overlap = 0.0;
};

// Operator-level distance table between a realized propagator and a target:
// (1/2) tr|U - U*| directly on the operators, the state fidelity after
// acting on a reference state, and the phase-insensitive Frobenius overlap.
inline Metrics evaluate_metrics(const algebra::CMatrix& u, const algebra::CMatrix& target,
                                std::optional<algebra::CVector> reference = std::nullopt) {
  if (u.rows() != target.rows()) {
    throw std::invalid_argument("evaluate_metrics: dimension mismatch");
  }
  Metrics out;
  out.trace_distance = 0.5 * algebra::trace_norm(u - target);
  algebra::CVector psi = reference.value_or([&] {
    algebra::CVector e0 = algebra::CVector::Zero(u.rows());
    e0(0) = 1.0;
    return e0;
  }());
  psi.normalize();
  const algebra::CMatrix rho = (u * psi) * (u * psi).adjoint();
  const algebra::CMatrix sigma = (target * psi) * (target * psi).adjoint();
  out.fidelity = algebra::fidelity(rho, sigma);
  out.frobenius_overlap = algebra::frobenius_overlap(u, target);
  return out;
}

// || Omega(u) - L ||_F^2 expanded over the operator-polynomial parts, plus
// the energy regularizer lambda * sum (1/mu_j) u_j(k)^2. Real-valued because
// both Omega(u) and L are anti-Hermitian.
inline poly::Polynomial assemble_objective(const ControlProblem& problem,
                                           const magnus::OperatorPolynomial& omega,
                                           const algebra::CMatrix& target_log) {
  poly::Polynomial j((target_log.adjoint() * target_log).trace().real());
  const int parts = static_cast<int>(omega.parts.size());
  for (int i = 0; i < parts; ++i) {
    const auto& [oi, pi] = omega.parts[i];
    for (int k = i; k < parts; ++k) {
      const auto& [ok, pk] = omega.parts[k];
      const double gram = (oi.adjoint() * ok).trace().real();
      if (gram != 0.0) {
        j += (i == k ? gram : 2.0 * gram) * (pi * pk);
      }
    }
    const double cross = (oi.adjoint() * target_log).trace().real();
    if (cross != 0.0) j += (-2.0 * cross) * pi;
  }
  if (problem.lambda_energy > 0) {
    const auto free_idx = problem.system.free_term_indices();
    for (std::size_t slot = 0; slot < free_idx.size(); ++slot) {
      const double mu = problem.mu_weights.empty() ? 1.0 : problem.mu_weights[slot];
      for (int k = 1; k <= problem.system.knots; ++k) {
        poly::Polynomial u = poly::Polynomial::variable({free_idx[slot], k});
        j += (problem.lambda_energy / mu) * (u * u);
      }
    }
  }
  return j;
}

inline poly::Polynomial assemble_objective(const ControlProblem& problem) {
  problem.validate();
  const magnus::OperatorPolynomial omega =
      magnus::assemble(problem.system, problem.magnus_order, problem.limits);
  const algebra::CMatrix l = algebra::log_unitary(problem.target);
  return assemble_objective(problem, omega, l);
}

// One localizing polynomial (u - lo)(hi - u) per free variable. Degenerate
// lo = hi variables are pinned instead and get no constraint.
inline std::vector<poly::Polynomial> assemble_constraints(const ControlProblem& problem,
                                                          std::map<poly::VarId, double>* pins =
                                                              nullptr) {
  problem.validate();
  std::vector<poly::Polynomial> out;
  const auto free_idx = problem.system.free_term_indices();
  for (std::size_t slot = 0; slot < free_idx.size(); ++slot) {
    for (int k = 1; k <= problem.system.knots; ++k) {
      const Bounds b = problem.bounds[slot][k - 1];
      const poly::VarId var{free_idx[slot], k};
      if (b.lo == b.hi) {
        if (pins) (*pins)[var] = b.lo;
        continue;
      }
      poly::Polynomial u = poly::Polynomial::variable(var);
      out.push_back((u - poly::Polynomial(b.lo)) * (poly::Polynomial(b.hi) - u));
    }
  }
  return out;
}

struct PulseSolution {
  // Pulse grid keyed by absolute Hamiltonian term index, one value per knot.
  std::map<int, std::vector<double>> pulses;
  double lower_bound = 0.0;
  double achieved = 0.0;
  double gap = 0.0;
  bool rank_one = false;
  bool rank_loop = false;
  Metrics metrics;
  sdp::SolveStatus solver_status = sdp::SolveStatus::max_iter;
  int sdp_iterations = 0;
  double sdp_gap = 0.0;
  double convergence_value = 0.0;
  bool convergent = false;
  bool target_branch_warning = false;
  int moment_count = 0;
  std::vector<int> block_sides;
  std::string extraction;  // "certified" or "lower bound + heuristic pulse"
  std::string objective_polynomial;  // canonical sorted rendering
};

using ProgressFn = std::function<void(const std::string&)>;

// Product propagator Prod_k exp(dt A(k)), latest knot applied on the left.
// Piecewise-constant controls make each knot factor exact; subdivision is
// kept for verifying continuous profiles sampled onto the grid.
inline algebra::CMatrix propagate_reference(const magnus::SystemSpec& sys,
                                            const std::vector<std::vector<double>>& pulses,
                                            int substeps = 1) {
  sys.validate();
  if (substeps < 1) throw std::invalid_argument("propagate_reference: substeps must be >= 1");
  algebra::CMatrix u = algebra::identity(sys.dim);
  for (int k = 1; k <= sys.knots; ++k) {
    const algebra::CMatrix gen = magnus::knot_generator_numeric(sys, pulses, k);
    const algebra::CMatrix step = algebra::exp_anti_hermitian((sys.dt / substeps) * gen);
    for (int s = 0; s < substeps; ++s) u = (step * u).eval();
  }
  return u;
}

// Midpoint-sampled product propagation of continuous control profiles
// amp_j(t); the reference for discretization-refinement checks.
inline algebra::CMatrix propagate_profile(
    int dim, const std::vector<std::pair<algebra::CMatrix, std::function<double(double)>>>& terms,
    double horizon, int substeps) {
  if (substeps < 1) throw std::invalid_argument("propagate_profile: substeps must be >= 1");
  const double h = horizon / substeps;
  algebra::CMatrix u = algebra::identity(dim);
  for (int s = 0; s < substeps; ++s) {
    const double t = (s + 0.5) * h;
    algebra::CMatrix gen = algebra::zero(dim);
    for (const auto& [matrix, amp] : terms) {
      gen += algebra::Complex(0, -1) * amp(t) * matrix;
    }
    u = (algebra::exp_anti_hermitian(h * gen) * u).eval();
  }
  return u;
}

// Full pipeline: relax, solve, extract first-order moments as the pulse,
// clamp to bounds, evaluate the achieved objective and propagation metrics.
inline PulseSolution solve_control(const ControlProblem& problem, ProgressFn progress = {}) {
  problem.validate();
  auto report = [&](const std::string& msg) {
    if (progress) progress(msg);
  };

  PulseSolution out;
  const auto free_idx = problem.system.free_term_indices();

  std::vector<std::pair<double, double>> conv_bounds;
  for (std::size_t slot = 0; slot < free_idx.size(); ++slot) {
    double lo = 0, hi = 0;
    for (const auto& b : problem.bounds[slot]) {
      lo = std::min(lo, b.lo);
      hi = std::max(hi, b.hi);
    }
    conv_bounds.emplace_back(lo, hi);
  }
  const auto conv = magnus::convergence_bound(problem.system, conv_bounds);
  out.convergence_value = conv.value;
  out.convergent = conv.convergent;
  report("convergence bound " + std::to_string(conv.value) +
         (conv.convergent ? " (< pi)" : " (>= pi, series not guaranteed)"));

  report("assembling truncated generator, order " + std::to_string(problem.magnus_order));
  const magnus::OperatorPolynomial omega =
      magnus::assemble(problem.system, problem.magnus_order, problem.limits);
  const algebra::CMatrix target_log =
      algebra::log_unitary(problem.target, algebra::kStructuralTol, &out.target_branch_warning);
  poly::Polynomial objective = assemble_objective(problem, omega, target_log);

  out.objective_polynomial = objective.str();

  std::map<poly::VarId, double> pins;
  std::vector<poly::Polynomial> constraints = assemble_constraints(problem, &pins);
  poly::Polynomial reduced = objective.substitute_pinned(pins);

  report("building order-" + std::to_string(problem.relax_order) + " relaxation");
  moment::MomentRelaxation relax =
      moment::build_relaxation(reduced, constraints, problem.relax_order, problem.basis_budget);
  out.moment_count = static_cast<int>(relax.moments.monomials.size());
  for (const auto& b : relax.blocks) out.block_sides.push_back(b.side);

  report("solving SDP with " + std::to_string(out.moment_count) + " moments");
  const sdp::SdpProblem sdp_problem = moment::to_sdp_problem(relax);
  const sdp::SdpSolution sol = sdp::solve(sdp_problem, problem.solver_tol, problem.solver_max_iter);
  out.solver_status = sol.status;
  out.sdp_iterations = sol.iterations;
  out.sdp_gap = sol.gap;
  out.lower_bound = sol.primal_value;

  // Extraction: first-order moments, exact when the moment matrix is rank
  // one; otherwise an honest heuristic pulse alongside the certified bound.
  magnus::Assignment assignment;
  for (std::size_t slot = 0; slot < free_idx.size(); ++slot) {
    std::vector<double> row(problem.system.knots, 0.0);
    for (int k = 1; k <= problem.system.knots; ++k) {
      const poly::VarId var{free_idx[slot], k};
      double value;
      if (auto it = pins.find(var); it != pins.end()) {
        value = it->second;
      } else {
        value = sol.y(relax.moments.at(poly::Monomial(var)));
      }
      const Bounds b = problem.bounds[slot][k - 1];
      value = std::clamp(value, b.lo, b.hi);
      row[k - 1] = value;
      assignment[var] = value;
    }
    out.pulses[free_idx[slot]] = std::move(row);
  }

  const auto cert = moment::rank_certificates(relax, sol.y);
  out.rank_one = cert.rank_one;
  out.rank_loop = cert.rank_loop;
  out.extraction = (cert.rank_one || cert.rank_loop) ? "certified" : "lower bound + heuristic pulse";

  out.achieved = objective.evaluate(assignment);
  out.gap = out.achieved - out.lower_bound;

  const algebra::CMatrix realized = algebra::exp_anti_hermitian(omega.evaluate(assignment));
  out.metrics = evaluate_metrics(realized, problem.target);
  report("achieved " + std::to_string(out.achieved) + ", bound " +
         std::to_string(out.lower_bound));
  return out;
}

// --- report rendering -------------------------------------------------------

// Pulse grid CSV, one row per (control, knot).
inline std::string pulses_to_csv(const PulseSolution& sol) {
  std::ostringstream os;
  os << "control,knot,value\n";
  for (const auto& [term, row] : sol.pulses) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      os << term << "," << (k + 1) << "," << sdp::detail::format_double(row[k]) << "\n";
    }
  }
  return os.str();
}

inline std::map<int, std::vector<double>> pulses_from_csv(const std::string& text, int knots) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("pulse csv: empty file");
  if (line.rfind("control,knot,value", 0) != 0) {
    throw std::runtime_error("pulse csv: bad header '" + line + "'");
  }
  std::map<int, std::vector<double>> grid;
  std::map<int, std::vector<bool>> seen;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    int term, knot;
    double value;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &term, &knot, &value) != 3) {
      throw std::runtime_error("pulse csv: bad row at line " + std::to_string(lineno));
    }
    if (knot < 1 || knot > knots) {
      throw std::runtime_error("pulse csv: knot out of range at line " + std::to_string(lineno));
    }
    auto& row = grid[term];
    auto& mask = seen[term];
    if (row.empty()) {
      row.assign(knots, 0.0);
      mask.assign(knots, false);
    }
    if (mask[knot - 1]) {
      throw std::runtime_error("pulse csv: duplicate row at line " + std::to_string(lineno));
    }
    mask[knot - 1] = true;
    row[knot - 1] = value;
  }
  for (const auto& [term, mask] : seen) {
    for (int k = 0; k < knots; ++k) {
      if (!mask[k]) {
        throw std::runtime_error("pulse csv: control " + std::to_string(term) +
                                 " is missing knot " + std::to_string(k + 1));
      }
    }
  }
  return grid;
}

struct SolveReport {
  const ControlProblem* problem = nullptr;
  const PulseSolution* solution = nullptr;
  int lie_dimension = 0;
  bool controllable = false;
};

inline std::string render_report_text(const SolveReport& rep) {
  const auto& p = *rep.problem;
  const auto& s = *rep.solution;
  std::ostringstream os;
  os << std::setprecision(12);
  os << "system: dim " << p.system.dim << ", " << p.system.terms.size() << " terms ("
     << p.system.free_term_indices().size() << " free), K=" << p.system.knots
     << ", dt=" << p.system.dt << ", T=" << p.system.horizon() << "\n";
  os << "bounds:";
  {
    const auto free_idx = p.system.free_term_indices();
    for (std::size_t slot = 0; slot < free_idx.size(); ++slot) {
      double lo = p.bounds[slot].front().lo, hi = p.bounds[slot].front().hi;
      for (const auto& b : p.bounds[slot]) {
        lo = std::min(lo, b.lo);
        hi = std::max(hi, b.hi);
      }
      os << " u" << free_idx[slot] << " in [" << lo << ", " << hi << "]";
    }
  }
  os << "\n";
  os << "orders: magnus " << p.magnus_order << ", relaxation " << p.relax_order
     << ", lambda_energy " << p.lambda_energy << "\n";
  os << "convergence bound: " << s.convergence_value << " ("
     << (s.convergent ? "convergent" : "not guaranteed") << ")\n";
  os << "lie closure: dimension " << rep.lie_dimension << " ("
     << (rep.controllable ? "operator controllable" : "not operator controllable") << ")\n";
  os << "relaxation: " << s.moment_count << " moments, block sides";
  for (int side : s.block_sides) os << " " << side;
  os << "\n";
  os << "solver: " << sdp::to_string(s.solver_status) << " after " << s.sdp_iterations
     << " iterations, duality gap " << s.sdp_gap << "\n";
  os << "bound: " << s.lower_bound << "\nachieved: " << s.achieved << "\ngap: " << s.gap
     << "\n";
  os << "certificates: rank_one=" << (s.rank_one ? "yes" : "no")
     << " rank_loop=" << (s.rank_loop ? "yes" : "no") << " (" << s.extraction << ")\n";
  if (s.target_branch_warning) {
    os << "warning: target has an eigenphase at the principal-branch boundary (pi)\n";
  }
  os << "metrics: trace_distance " << s.metrics.trace_distance << ", fidelity "
     << s.metrics.fidelity << ", frobenius_overlap " << s.metrics.frobenius_overlap << "\n";
  os << "objective: " << s.objective_polynomial << "\n";
  os << "pulses:\n";
  for (const auto& [term, row] : s.pulses) {
    os << "  u" << term << ":";
    for (double v : row) os << " " << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace qoc::pipeline
