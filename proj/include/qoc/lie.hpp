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

#include <stdexcept>
#include <string>
#include <vector>

#include "qoc/algebra.hpp"

// Lie-algebra closure under nested commutators and the operator
// controllability dimension test: a system is operator controllable on
// SU(N) iff the algebra generated by its Hamiltonian terms has dimension
// N^2 - 1.

namespace qoc::lie {

// Candidate commutators whose residual after projection onto the current
// span is below this factor times their own norm count as dependent.
inline constexpr double kRankTol = 1e-8;

struct LieBasis {
  int dim = 0;  // Hilbert-space dimension N
  // Orthonormal under Re tr(A^dag B), traceless, anti-Hermitian.
  std::vector<algebra::CMatrix> elements;
  // (depth k, number of independent directions first seen at that depth).
  std::vector<std::pair<int, int>> depth_log;

  int dimension() const { return static_cast<int>(elements.size()); }
};

namespace detail {

// Flatten to a real vector of length 2 N^2 so span arithmetic is real.
inline algebra::RVector vectorize(const algebra::CMatrix& m) {
  const Eigen::Index n2 = m.size();
  algebra::RVector v(2 * n2);
  for (Eigen::Index i = 0; i < n2; ++i) {
    v(2 * i) = m.reshaped()(i).real();
    v(2 * i + 1) = m.reshaped()(i).imag();
  }
  return v;
}

inline algebra::CMatrix devectorize(const algebra::RVector& v, int n) {
  algebra::CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) {
    m.reshaped()(i) = algebra::Complex(v(2 * i), v(2 * i + 1));
  }
  return m;
}

// Normalize a generator to traceless anti-Hermitian form: Hermitian inputs
// are multiplied by i, the trace is removed.
inline algebra::CMatrix to_traceless_anti_hermitian(const algebra::CMatrix& g, int n,
                                                    double tol) {
  algebra::CMatrix x;
  if (algebra::is_anti_hermitian(g, tol)) {
    x = g;
  } else if (algebra::is_hermitian(g, tol)) {
    x = algebra::Complex(0, 1) * g;
  } else {
    throw std::invalid_argument("lie::closure: generator is neither Hermitian nor anti-Hermitian");
  }
  return x - (x.trace() / static_cast<double>(n)) * algebra::identity(n);
}

}  // namespace detail

// Orthonormal basis of the smallest real Lie algebra containing the
// generators, built by bracketing new directions against the generator set
// until a full round adds nothing (left-normed brackets span the generated
// algebra). depth_log records how many directions first appear per round,
// mirroring the generator progression under repeated commutation.
inline LieBasis closure(const std::vector<algebra::CMatrix>& generators, int dim,
                        double rank_tol = kRankTol) {
  if (dim < 1) throw std::invalid_argument("lie::closure: dim must be >= 1");
  if (generators.empty()) return LieBasis{dim, {}, {}};
  for (const auto& g : generators) {
    if (g.rows() != dim || g.cols() != dim) {
      throw std::invalid_argument("lie::closure: generator dimension mismatch");
    }
  }

  const int max_dim = dim * dim - 1;
  std::vector<algebra::CMatrix> normalized;
  for (const auto& g : generators) {
    normalized.push_back(detail::to_traceless_anti_hermitian(g, dim, 1e-9));
  }

  LieBasis basis;
  basis.dim = dim;
  std::vector<algebra::RVector> span;  // vectorized orthonormal elements

  auto try_insert = [&](const algebra::CMatrix& candidate) -> bool {
    if (basis.dimension() >= max_dim) return false;
    algebra::RVector v = detail::vectorize(candidate);
    const double nrm = v.norm();
    if (nrm <= 0.0) return false;
    // Two projection passes keep the basis orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : span) v -= e.dot(v) * e;
    }
    if (v.norm() <= rank_tol * nrm) return false;
    v.normalize();
    span.push_back(v);
    basis.elements.push_back(detail::devectorize(v, dim));
    return true;
  };

  int added = 0;
  for (const auto& g : normalized) added += try_insert(g) ? 1 : 0;
  basis.depth_log.emplace_back(1, added);

  std::size_t frontier_begin = 0;
  int depth = 1;
  // Each productive round grows the dimension, so N^2 rounds always suffice.
  while (added > 0 && basis.dimension() < max_dim && depth <= dim * dim) {
    const std::size_t frontier_end = span.size();
    added = 0;
    ++depth;
    for (std::size_t f = frontier_begin; f < frontier_end; ++f) {
      const algebra::CMatrix elem = basis.elements[f];
      for (const auto& g : normalized) {
        added += try_insert(algebra::commutator(g, elem)) ? 1 : 0;
      }
    }
    frontier_begin = frontier_end;
    basis.depth_log.emplace_back(depth, added);
  }
  while (!basis.depth_log.empty() && basis.depth_log.back().second == 0 &&
         basis.depth_log.size() > 1) {
    basis.depth_log.pop_back();
  }
  return basis;
}

inline bool is_operator_controllable(const LieBasis& basis, int dim) {
  return basis.dimension() == dim * dim - 1;
}

}  // namespace qoc::lie
