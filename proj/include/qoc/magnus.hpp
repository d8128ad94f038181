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

#include <array>
#include <atomic>
#include <cstdlib>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qoc/algebra.hpp"
#include "qoc/poly.hpp"

// Discretized Magnus terms of a control system as operator-valued
// polynomials in the knot controls, the series convergence bound, and the
// exactly solvable constant-drift / linear-driving generator used as an
// analytic reference.
//
// The generator at knot k is A(k) = sum_j u_j(k) H_j / i with uniform step
// dt; order-m terms are lowered from their nested-integral form to nested
// triangular sums over knot tuples (rectangle rule), so each term is a sum
// of constant anti-Hermitian operators weighted by polynomials in the knot
// controls of total degree m.

namespace qoc::magnus {

// Raised when a symbolic construction would exceed the configured size caps.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HamiltonianTerm {
  algebra::CMatrix matrix;        // Hermitian H_j
  std::optional<double> pinned;   // constant amplitude when not optimized
  bool is_free() const { return !pinned.has_value(); }
};

struct SystemSpec {
  int dim = 0;
  std::vector<HamiltonianTerm> terms;
  int knots = 1;
  double dt = 1.0;

  double horizon() const { return knots * dt; }

  std::vector<int> free_term_indices() const {
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(terms.size()); ++j) {
      if (terms[j].is_free()) out.push_back(j);
    }
    return out;
  }

  void validate(double tol = algebra::kStructuralTol) const {
    if (dim < 1) throw std::invalid_argument("SystemSpec: dim must be >= 1");
    if (terms.empty()) throw std::invalid_argument("SystemSpec: at least one term required");
    if (knots < 1) throw std::invalid_argument("SystemSpec: knots must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("SystemSpec: dt must be positive");
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const auto& m = terms[j].matrix;
      if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument("SystemSpec: term " + std::to_string(j) +
                                    " has wrong dimension");
      }
      if (!algebra::is_hermitian(m, tol)) {
        throw std::invalid_argument("SystemSpec: term " + std::to_string(j) +
                                    " is not Hermitian");
      }
    }
  }
};

using Assignment = std::map<poly::VarId, double>;

// Matching tolerance when collecting parts over repeated constant operators.
inline constexpr double kOperatorMatchTol = 1e-12;

// Finite sum of constant anti-Hermitian matrices weighted by control
// polynomials: value(u) = sum_i P_i(u) * O_i.
struct OperatorPolynomial {
  int dim = 0;
  std::vector<std::pair<algebra::CMatrix, poly::Polynomial>> parts;

  static OperatorPolynomial zero(int dim) { return OperatorPolynomial{dim, {}}; }

  // Collects by matching constant matrices (Frobenius comparison); a part
  // matching -O_i merges with negated coefficient.
  void add_part(const algebra::CMatrix& op, const poly::Polynomial& coeff) {
    if (coeff.is_zero()) return;
    const double nrm = op.norm();
    if (nrm <= kOperatorMatchTol) return;
    const double tol = kOperatorMatchTol * std::max(1.0, nrm);
    for (auto& [existing, p] : parts) {
      if ((existing - op).norm() <= tol) {
        p += coeff;
        return;
      }
      if ((existing + op).norm() <= tol) {
        p -= coeff;
        return;
      }
    }
    parts.emplace_back(op, coeff);
  }

  void prune() {
    std::erase_if(parts, [](const auto& part) { return part.second.is_zero(); });
  }

  OperatorPolynomial& operator+=(const OperatorPolynomial& other) {
    for (const auto& [op, p] : other.parts) add_part(op, p);
    prune();
    return *this;
  }

  friend OperatorPolynomial operator*(double s, const OperatorPolynomial& x) {
    OperatorPolynomial out{x.dim, {}};
    for (const auto& [op, p] : x.parts) out.add_part(op, s * p);
    return out;
  }

  algebra::CMatrix evaluate(const Assignment& u) const {
    algebra::CMatrix out = algebra::zero(dim);
    for (const auto& [op, p] : parts) out += p.evaluate(u) * op;
    return out;
  }

  std::size_t monomial_count() const {
    std::size_t n = 0;
    for (const auto& [op, p] : parts) n += p.terms().size();
    return n;
  }

  int degree() const {
    int d = 0;
    for (const auto& [op, p] : parts) d = std::max(d, p.degree());
    return d;
  }
};

// Bilinearity over parts: [sum P_i O_i, sum Q_j R_j] = sum P_i Q_j [O_i, R_j].
inline OperatorPolynomial commutator(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  OperatorPolynomial out{a.dim, {}};
  for (const auto& [oa, pa] : a.parts) {
    for (const auto& [ob, pb] : b.parts) {
      out.add_part(algebra::commutator(oa, ob), pa * pb);
    }
  }
  out.prune();
  return out;
}

struct MagnusLimits {
  int max_knots_low_order = 16;   // orders 1..2
  int max_knots_high_order = 8;   // orders 3..4
  std::size_t monomial_budget = 200000;
};

namespace detail {

// Worker cap from QOC_THREADS, clamped to [1, hardware_concurrency].
inline int worker_cap() {
  int cap = 1;
  if (const char* env = std::getenv("QOC_THREADS")) {
    cap = std::atoi(env);
  }
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (hw > 0 && cap > hw) cap = hw;
  return cap;
}

// A(k) = sum_j u_j(k) H_j / i as a symbolic operator polynomial; pinned
// amplitudes substitute as constants, free ones as the knot variable.
inline OperatorPolynomial knot_generator(const SystemSpec& sys, int knot) {
  const algebra::Complex minus_i(0, -1);
  OperatorPolynomial out{sys.dim, {}};
  for (int j = 0; j < static_cast<int>(sys.terms.size()); ++j) {
    const auto& term = sys.terms[j];
    poly::Polynomial amp = term.pinned
        ? poly::Polynomial(*term.pinned)
        : poly::Polynomial::variable({j, knot});
    out.add_part(minus_i * term.matrix, amp);
  }
  out.prune();
  return out;
}

// Order-m contribution of all knot tuples with leading index k1, before the
// global dt^m prefactor. Separated out so outer indices can be partitioned
// across workers with a fixed reduction order.
inline OperatorPolynomial term_slice(const std::vector<OperatorPolynomial>& a, int order,
                                     int k1) {
  const int dim = a.empty() ? 0 : a[0].dim;
  OperatorPolynomial acc{dim, {}};
  switch (order) {
    case 1:
      acc += a[k1];
      break;
    case 2:
      for (int k2 = 0; k2 <= k1; ++k2) acc += commutator(a[k1], a[k2]);
      break;
    case 3:
      for (int k2 = 0; k2 <= k1; ++k2) {
        for (int k3 = 0; k3 <= k2; ++k3) {
          acc += commutator(a[k1], commutator(a[k2], a[k3]));
          acc += commutator(commutator(a[k1], a[k2]), a[k3]);
        }
      }
      break;
    case 4:
      for (int k2 = 0; k2 <= k1; ++k2) {
        for (int k3 = 0; k3 <= k2; ++k3) {
          for (int k4 = 0; k4 <= k3; ++k4) {
            acc += commutator(commutator(commutator(a[k1], a[k2]), a[k3]), a[k4]);
            acc += commutator(a[k1], commutator(commutator(a[k2], a[k3]), a[k4]));
            acc += commutator(a[k1], commutator(a[k2], commutator(a[k3], a[k4])));
            acc += commutator(a[k2], commutator(a[k3], commutator(a[k4], a[k1])));
          }
        }
      }
      break;
    default:
      throw std::invalid_argument("magnus: unsupported order " + std::to_string(order));
  }
  return acc;
}

inline double order_prefactor(int order) {
  switch (order) {
    case 1: return 1.0;
    case 2: return 1.0 / 2.0;
    case 3: return 1.0 / 6.0;
    case 4: return 1.0 / 12.0;
    default: throw std::invalid_argument("magnus: unsupported order " + std::to_string(order));
  }
}

}  // namespace detail

// Discretized order-m term as an operator polynomial in the knot controls.
inline OperatorPolynomial discretize_term(const SystemSpec& sys, int order,
                                          const MagnusLimits& limits = {}) {
  sys.validate();
  if (order < 1 || order > 4) {
    throw std::invalid_argument("discretize_term: order must be in 1..4, got " +
                                std::to_string(order));
  }
  const int knot_cap = order <= 2 ? limits.max_knots_low_order : limits.max_knots_high_order;
  if (sys.knots > knot_cap) {
    throw ResourceLimitError("discretize_term: K=" + std::to_string(sys.knots) +
                             " exceeds the symbolic knot cap " + std::to_string(knot_cap) +
                             " for order " + std::to_string(order));
  }

  std::vector<OperatorPolynomial> a;
  a.reserve(sys.knots);
  for (int k = 1; k <= sys.knots; ++k) a.push_back(detail::knot_generator(sys, k));

  // One slice per leading knot index; merged in index order so the result is
  // bitwise identical for any worker count.
  const int workers = std::min(detail::worker_cap(), sys.knots);
  std::vector<OperatorPolynomial> slices(sys.knots);
  if (workers <= 1) {
    for (int k1 = 0; k1 < sys.knots; ++k1) slices[k1] = detail::term_slice(a, order, k1);
  } else {
    std::vector<std::future<void>> jobs;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&]() {
        for (int k1 = next.fetch_add(1); k1 < sys.knots; k1 = next.fetch_add(1)) {
          slices[k1] = detail::term_slice(a, order, k1);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }

  OperatorPolynomial acc{sys.dim, {}};
  for (int k1 = 0; k1 < sys.knots; ++k1) {
    acc += slices[k1];
    if (acc.monomial_count() > limits.monomial_budget) {
      throw ResourceLimitError("discretize_term: monomial budget " +
                               std::to_string(limits.monomial_budget) + " exceeded");
    }
  }

  double scale = detail::order_prefactor(order);
  for (int i = 0; i < order; ++i) scale *= sys.dt;
  OperatorPolynomial out = scale * acc;
  out.prune();
  return out;
}

// Sum of the discretized terms up to max_order.
inline OperatorPolynomial assemble(const SystemSpec& sys, int max_order,
                                   const MagnusLimits& limits = {}) {
  if (max_order < 1 || max_order > 4) {
    throw std::invalid_argument("assemble: order must be in 1..4, got " +
                                std::to_string(max_order));
  }
  OperatorPolynomial out{sys.dim, {}};
  for (int m = 1; m <= max_order; ++m) out += discretize_term(sys, m, limits);
  out.prune();
  return out;
}

struct ConvergenceBound {
  double value = 0.0;
  bool convergent = false;
};

// Upper bound T * sum_j max|u_j| * ||H_j||_2 on the integral of the spectral
// norm of the generator; the series is guaranteed absolutely convergent when
// the bound stays below pi. `free_bounds` lists [lo, hi] per free term in
// free-term order.
inline ConvergenceBound convergence_bound(
    const SystemSpec& sys, const std::vector<std::pair<double, double>>& free_bounds) {
  sys.validate();
  const auto free_idx = sys.free_term_indices();
  if (free_bounds.size() != free_idx.size()) {
    throw std::invalid_argument("convergence_bound: expected " +
                                std::to_string(free_idx.size()) + " bound pairs, got " +
                                std::to_string(free_bounds.size()));
  }
  double rate = 0.0;
  std::size_t slot = 0;
  for (const auto& term : sys.terms) {
    double amp = 0.0;
    if (term.pinned) {
      amp = std::abs(*term.pinned);
    } else {
      const auto [lo, hi] = free_bounds[slot++];
      if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("convergence_bound: unbounded control");
      }
      amp = std::max(std::abs(lo), std::abs(hi));
    }
    rate += amp * algebra::spectral_norm(term.matrix);
  }
  const double value = sys.horizon() * rate;
  return {value, value < M_PI};
}

// S_y series coefficients for the constant-drift, linearly ramped drive
// H(t) = a S_z + b t S_x. Term n contributes coeff[n] * a^(2n-1) * b *
// T^(2n+3-2); derived from Bernoulli numbers (Salzman 1987), magnitudes only
// since consecutive terms carry the same sign here.
inline constexpr std::array<double, 5> kLinearDriveSyCoeff = {
    1.0 / 12.0, 1.0 / 720.0, 1.0 / 30240.0, 1.0 / 1209600.0, 1.0 / 47900160.0};

// Closed-form series value of the full Magnus sum for the linear-driving
// qubit, truncated to n_terms S_y coefficients. The S_y sign follows the
// closed-form term recursion and was cross-checked against high-resolution
// product propagation.
inline algebra::CMatrix linear_drive_oracle(double drift, double ramp, double horizon,
                                            int n_terms) {
  if (n_terms < 0 || n_terms > static_cast<int>(kLinearDriveSyCoeff.size())) {
    throw std::invalid_argument("linear_drive_oracle: n_terms must be in 0..5");
  }
  const algebra::Complex i(0, 1);
  const algebra::CMatrix sx = algebra::spin_half('x');
  const algebra::CMatrix sy = algebra::spin_half('y');
  const algebra::CMatrix sz = algebra::spin_half('z');
  const double t = horizon;
  double sy_coeff = 0.0;
  double tpow = t * t * t;  // T^(2n+1) starting at n=1
  double apow = drift;      // a^(2n-1)
  for (int n = 1; n <= n_terms; ++n) {
    sy_coeff += kLinearDriveSyCoeff[n - 1] * apow * ramp * tpow;
    tpow *= t * t;
    apow *= drift * drift;
  }
  return -i * (drift * t) * sz - i * (0.5 * ramp * t * t) * sx + i * sy_coeff * sy;
}

// Knot samples of a continuous amplitude profile taken at the interval
// midpoints u(k) = u((k - 1/2) dt), the convention that keeps the
// rectangle-rule sums second-order accurate.
template <typename Fn>
std::vector<double> midpoint_samples(Fn&& profile, int knots, double dt) {
  std::vector<double> out;
  out.reserve(knots);
  for (int k = 1; k <= knots; ++k) out.push_back(profile((k - 0.5) * dt));
  return out;
}

// Numeric generator at one knot for a given pulse table (free terms indexed
// in free-term order, knots 1-based in the table columns).
inline algebra::CMatrix knot_generator_numeric(const SystemSpec& sys,
                                               const std::vector<std::vector<double>>& pulses,
                                               int knot) {
  const algebra::Complex minus_i(0, -1);
  algebra::CMatrix out = algebra::zero(sys.dim);
  std::size_t slot = 0;
  for (const auto& term : sys.terms) {
    double amp;
    if (term.pinned) {
      amp = *term.pinned;
    } else {
      if (slot >= pulses.size() ||
          static_cast<int>(pulses[slot].size()) != sys.knots) {
        throw std::invalid_argument("knot_generator_numeric: pulse table shape mismatch");
      }
      amp = pulses[slot++][knot - 1];
    }
    out += minus_i * amp * term.matrix;
  }
  return out;
}

// Order-m discretized term evaluated directly at a numeric pulse table,
// bypassing the symbolic polynomial; used for large knot counts.
inline algebra::CMatrix evaluate_term_numeric(const SystemSpec& sys, int order,
                                              const std::vector<std::vector<double>>& pulses) {
  sys.validate();
  if (order < 1 || order > 4) {
    throw std::invalid_argument("evaluate_term_numeric: order must be in 1..4");
  }
  const int n = sys.knots;
  std::vector<algebra::CMatrix> a;
  a.reserve(n);
  for (int k = 1; k <= n; ++k) a.push_back(knot_generator_numeric(sys, pulses, k));

  using algebra::CMatrix;
  CMatrix acc = algebra::zero(sys.dim);
  if (order == 1) {
    for (const auto& ak : a) acc += ak;
  } else if (order == 2) {
    // Triangular double sum via prefix sums: sum_k1 [A(k1), sum_{k2<=k1} A(k2)].
    CMatrix prefix = algebra::zero(sys.dim);
    for (int k1 = 0; k1 < n; ++k1) {
      prefix += a[k1];
      acc += a[k1] * prefix - prefix * a[k1];
    }
  } else if (order == 3) {
    std::vector<CMatrix> prefix(n, algebra::zero(sys.dim));
    CMatrix run = algebra::zero(sys.dim);
    for (int k = 0; k < n; ++k) {
      run += a[k];
      prefix[k] = run;
    }
    for (int k1 = 0; k1 < n; ++k1) {
      for (int k2 = 0; k2 <= k1; ++k2) {
        const CMatrix inner = algebra::commutator(a[k2], prefix[k2]);
        acc += algebra::commutator(a[k1], inner);
        acc += algebra::commutator(algebra::commutator(a[k1], a[k2]), prefix[k2]);
      }
    }
  } else {
    std::vector<CMatrix> prefix(n, algebra::zero(sys.dim));
    CMatrix run = algebra::zero(sys.dim);
    for (int k = 0; k < n; ++k) {
      run += a[k];
      prefix[k] = run;
    }
    for (int k1 = 0; k1 < n; ++k1) {
      for (int k2 = 0; k2 <= k1; ++k2) {
        const CMatrix c12 = algebra::commutator(a[k1], a[k2]);
        for (int k3 = 0; k3 <= k2; ++k3) {
          acc += algebra::commutator(algebra::commutator(c12, a[k3]), prefix[k3]);
          acc += algebra::commutator(
              a[k1], algebra::commutator(algebra::commutator(a[k2], a[k3]), prefix[k3]));
          acc += algebra::commutator(
              a[k1], algebra::commutator(a[k2], algebra::commutator(a[k3], prefix[k3])));
          acc += algebra::commutator(
              a[k2], algebra::commutator(a[k3], algebra::commutator(prefix[k3], a[k1])));
        }
      }
    }
  }

  double scale = detail::order_prefactor(order);
  for (int i = 0; i < order; ++i) scale *= sys.dt;
  return scale * acc;
}

}  // namespace qoc::magnus
