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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

// Dense complex linear algebra for small Hilbert spaces: operator bases,
// commutators, matrix exponential/logarithm on the unitary group, and the
// standard distance functionals between states and propagators.
//
// Conventions: hbar = 1, Hamiltonians are given in angular-frequency units,
// generators of time evolution are anti-Hermitian (H / i).

namespace qoc::algebra {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Default absolute tolerance for structural predicates.
inline constexpr double kStructuralTol = 1e-9;

inline bool is_square(const CMatrix& a) {
  return a.rows() >= 1 && a.rows() == a.cols();
}

inline bool is_hermitian(const CMatrix& a, double tol = kStructuralTol) {
  return is_square(a) && (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_anti_hermitian(const CMatrix& a, double tol = kStructuralTol) {
  return is_square(a) && (a + a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const CMatrix& a, double tol = kStructuralTol) {
  if (!is_square(a)) return false;
  CMatrix d = a.adjoint() * a - CMatrix::Identity(a.rows(), a.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

inline bool is_traceless(const CMatrix& a, double tol = kStructuralTol) {
  return is_square(a) && std::abs(a.trace()) <= tol;
}

namespace detail {
inline void require_square(const CMatrix& a, const char* where) {
  if (!is_square(a)) {
    throw std::invalid_argument(std::string(where) + ": matrix must be square");
  }
}
inline void require_same_dim(const CMatrix& a, const CMatrix& b, const char* where) {
  require_square(a, where);
  require_square(b, where);
  if (a.rows() != b.rows()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + " vs " +
                                std::to_string(b.rows()) + ")");
  }
}
}  // namespace detail

// AB - BA.
inline CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  detail::require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

// Kronecker product; result dimension is the product of the input dimensions.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  detail::require_square(a, "kron");
  detail::require_square(b, "kron");
  const Eigen::Index na = a.rows(), nb = b.rows();
  CMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
    }
  }
  return out;
}

inline double frobenius_norm(const CMatrix& a) { return a.norm(); }

// Largest singular value.
inline double spectral_norm(const CMatrix& a) {
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

// Sum of singular values, tr|A| for general A.
inline double trace_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().sum();
}

// Unitary exponential of an anti-Hermitian generator, computed by
// eigendecomposition of the Hermitian matrix iA so that the eigenphases are
// exponentiated exactly.
inline CMatrix exp_anti_hermitian(const CMatrix& a, double tol = kStructuralTol) {
  detail::require_square(a, "exp_anti_hermitian");
  if (!is_anti_hermitian(a, tol)) {
    throw std::invalid_argument("exp_anti_hermitian: input is not anti-Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Complex(0, 1) * a);
  const RVector& phase = es.eigenvalues();  // iA = V diag(phase) V^dag
  CVector ex(phase.size());
  for (Eigen::Index k = 0; k < phase.size(); ++k) {
    ex(k) = std::exp(Complex(0, -phase(k)));
  }
  return es.eigenvectors() * ex.asDiagonal() * es.eigenvectors().adjoint();
}

// Principal anti-Hermitian logarithm of a unitary: eigenphases in (-pi, pi].
// An eigenvalue at -1 sits on the branch boundary; it is mapped to phase +pi
// and reported through `branch_boundary` when a caller asks.
inline CMatrix log_unitary(const CMatrix& u, double tol = kStructuralTol,
                           bool* branch_boundary = nullptr) {
  detail::require_square(u, "log_unitary");
  if (!is_unitary(u, std::max(tol, 1e-8))) {
    throw std::invalid_argument("log_unitary: input is not unitary within tolerance");
  }
  if (branch_boundary) *branch_boundary = false;
  // A unitary matrix is normal, so its Schur form is diagonal; the Schur Q is
  // exactly unitary, which keeps the round trip exp(log U) tight.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();
  CVector logs(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    double theta = std::arg(t(k, k));
    if (theta <= -M_PI + 1e-15) theta = M_PI;  // place -1 on the (-pi, pi] branch top
    if (branch_boundary && theta >= M_PI - 1e-9) *branch_boundary = true;
    logs(k) = Complex(0, theta);
  }
  CMatrix out = q * logs.asDiagonal() * q.adjoint();
  // Exact anti-Hermitian symmetrization removes Schur round-off.
  return 0.5 * (out - out.adjoint().eval());
}

// (1/2) tr|rho - sigma| for Hermitian inputs, via the eigenvalues of the
// Hermitian difference.
inline double trace_distance(const CMatrix& rho, const CMatrix& sigma,
                             double tol = kStructuralTol) {
  detail::require_same_dim(rho, sigma, "trace_distance");
  if (!is_hermitian(rho, tol) || !is_hermitian(sigma, tol)) {
    throw std::invalid_argument("trace_distance: inputs must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho - sigma);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// tr sqrt(sqrt(sigma) rho sqrt(sigma)) for density matrices.
inline double fidelity(const CMatrix& rho, const CMatrix& sigma,
                       double tol = kStructuralTol) {
  detail::require_same_dim(rho, sigma, "fidelity");
  const double psd_tol = std::max(tol, 1e-9);
  auto check_state = [&](const CMatrix& s, const char* name) {
    if (!is_hermitian(s, tol)) {
      throw std::invalid_argument(std::string("fidelity: ") + name + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
    if (es.eigenvalues().minCoeff() < -psd_tol) {
      throw std::invalid_argument(std::string("fidelity: ") + name +
                                  " is not positive semidefinite");
    }
    if (std::abs(s.trace().real() - 1.0) > 1e-6) {
      throw std::invalid_argument(std::string("fidelity: ") + name + " does not have unit trace");
    }
  };
  check_state(rho, "rho");
  check_state(sigma, "sigma");

  Eigen::SelfAdjointEigenSolver<CMatrix> es_sigma(sigma);
  RVector sev = es_sigma.eigenvalues().cwiseMax(0.0);
  CMatrix sqrt_sigma = es_sigma.eigenvectors() *
                       sev.cwiseSqrt().cast<Complex>().asDiagonal() *
                       es_sigma.eigenvectors().adjoint();
  CMatrix m = sqrt_sigma * rho * sqrt_sigma;
  Eigen::SelfAdjointEigenSolver<CMatrix> es_m(0.5 * (m + m.adjoint().eval()));
  return es_m.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// sqrt(|tr(V^dag U)|); the modulus makes the functional real and insensitive
// to a global phase on either argument.
inline double frobenius_overlap(const CMatrix& u, const CMatrix& v) {
  detail::require_same_dim(u, v, "frobenius_overlap");
  return std::sqrt(std::abs((v.adjoint() * u).trace()));
}

// --- operator constructors ------------------------------------------------

inline CMatrix identity(int n) { return CMatrix::Identity(n, n); }
inline CMatrix zero(int n) { return CMatrix::Zero(n, n); }

// Pauli matrix for axis 'x' | 'y' | 'z'; '0' gives the 2x2 identity.
inline CMatrix pauli(char axis) {
  CMatrix m(2, 2);
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case '0': m << 1, 0, 0, 1; break;
    default: throw std::invalid_argument(std::string("pauli: unknown axis '") + axis + "'");
  }
  return m;
}

// Spin-1/2 operator S_axis = sigma_axis / 2.
inline CMatrix spin_half(char axis) { return 0.5 * pauli(axis); }

// Two-qubit su(4) generator sigma_a (x) sigma_b / 2, with '0' meaning the
// identity factor. The first index labels the first tensor factor.
inline CMatrix two_qubit_gen(char a, char b) {
  return 0.5 * kron(pauli(a), pauli(b));
}

}  // namespace qoc::algebra
