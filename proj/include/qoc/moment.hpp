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
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoc/poly.hpp"
#include "qoc/sdp.hpp"

// Order-r moment relaxation of a polynomial optimization problem
//
//   min p(u)  s.t.  q_i(u) >= 0,
//
// lowered to the linear SDP over the moment vector y: minimize sum p_w y_w
// subject to the moment matrix M_r(y) >= 0, one localizing matrix
// M_{r-d_i}(q_i y) >= 0 per constraint, and the normalization y_1 = 1.
// Real commutative variables are the execution path; moments are
// deduplicated by canonical monomial, which collapses the word-indexed
// moment matrix to the classical form.

namespace qoc::moment {

struct BasisBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultBasisBudget = 20000;

struct MomentBasis {
  std::vector<poly::VarId> variables;
  int order = 0;
  std::vector<poly::Monomial> words;          // degree <= order, graded-lex
  std::map<poly::Monomial, int> index;
};

// All canonical monomials of degree <= order over vars, graded-lex; the unit
// monomial sits at position 0. Commutative count is C(n + r, r).
inline MomentBasis enumerate_basis(const std::vector<poly::VarId>& vars, int order,
                                   std::size_t budget = kDefaultBasisBudget) {
  if (order < 0) throw std::invalid_argument("enumerate_basis: order must be >= 0");
  MomentBasis basis;
  basis.variables = vars;
  basis.order = order;
  basis.words.push_back(poly::Monomial::unit());
  std::size_t level_begin = 0;
  for (int d = 1; d <= order; ++d) {
    const std::size_t level_end = basis.words.size();
    for (std::size_t w = level_begin; w < level_end; ++w) {
      // Extend by variables >= the largest variable of the word to produce
      // each multiset exactly once.
      const auto& factors = basis.words[w].factors();
      const poly::VarId least = factors.empty() ? poly::VarId{0, 0} : factors.back().first;
      for (const auto& v : vars) {
        if (!factors.empty() && v < least) continue;
        basis.words.push_back(basis.words[w] * poly::Monomial(v));
        if (basis.words.size() > budget) {
          throw BasisBudgetError("enumerate_basis: basis size exceeds budget " +
                                 std::to_string(budget));
        }
      }
    }
    level_begin = level_end;
  }
  std::sort(basis.words.begin(), basis.words.end());
  basis.words.erase(std::unique(basis.words.begin(), basis.words.end()), basis.words.end());
  for (int i = 0; i < static_cast<int>(basis.words.size()); ++i) {
    basis.index[basis.words[i]] = i;
  }
  return basis;
}

// Word basis for the order-sensitive (non-commutative) formalism: all words
// of length <= order, counted n^0 + ... + n^r. Construction-level only.
inline std::vector<poly::Word> enumerate_word_basis(const std::vector<poly::VarId>& vars,
                                                    int order) {
  if (order < 0) throw std::invalid_argument("enumerate_word_basis: order must be >= 0");
  std::vector<poly::Word> words{poly::Word{}};
  std::size_t level_begin = 0;
  for (int d = 1; d <= order; ++d) {
    const std::size_t level_end = words.size();
    for (std::size_t w = level_begin; w < level_end; ++w) {
      for (const auto& v : vars) {
        words.push_back(words[w] * poly::Word::from_variable(v));
      }
    }
    level_begin = level_end;
  }
  return words;
}

// Moment key of a matrix entry indexed by row word nu and column word omega.
inline poly::Word nc_moment_key(const poly::Word& nu, const poly::Word& omega,
                                bool commutative) {
  return poly::canonicalize(nu.dagger() * omega, commutative);
}

// Enumeration of the moment vector y_w for |w| <= 2r.
struct MomentIndex {
  std::vector<poly::Monomial> monomials;
  std::map<poly::Monomial, int> position;

  int at(const poly::Monomial& m) const {
    auto it = position.find(m);
    if (it == position.end()) {
      throw std::invalid_argument("MomentIndex: monomial " + m.str() + " not indexed");
    }
    return it->second;
  }
};

inline MomentIndex make_moment_index(const std::vector<poly::VarId>& vars, int relax_order,
                                     std::size_t budget = kDefaultBasisBudget) {
  MomentBasis full = enumerate_basis(vars, 2 * relax_order, budget);
  MomentIndex idx;
  idx.monomials = full.words;
  idx.position = full.index;
  return idx;
}

struct LmiEntry {
  int row = 0, col = 0;   // row <= col
  int moment = 0;
  double coeff = 1.0;
};

struct LmiBlock {
  int side = 0;
  std::vector<LmiEntry> entries;
  std::vector<std::string> labels;  // row/column monomials, for printing
};

// Moment matrix block: entry (nu, omega) references y at the canonical
// product nu * omega with unit coefficient.
inline LmiBlock build_moment_block(const MomentBasis& basis, const MomentIndex& moments) {
  LmiBlock block;
  block.side = static_cast<int>(basis.words.size());
  for (const auto& w : basis.words) block.labels.push_back(w.str());
  for (int r = 0; r < block.side; ++r) {
    for (int c = r; c < block.side; ++c) {
      block.entries.push_back({r, c, moments.at(basis.words[r] * basis.words[c]), 1.0});
    }
  }
  return block;
}

// Localizing block for constraint q >= 0 at relaxation order r: side
// |W_{r-d}| with d = ceil(deg q / 2), entry (nu, omega) = sum_mu q_mu
// y_{nu mu omega}.
inline LmiBlock build_localizing_block(const poly::Polynomial& q,
                                       const std::vector<poly::VarId>& vars, int relax_order,
                                       const MomentIndex& moments,
                                       std::size_t budget = kDefaultBasisBudget) {
  const int deg = q.degree();
  if (deg > 2 * relax_order) {
    throw std::invalid_argument("build_localizing_block: constraint degree " +
                                std::to_string(deg) + " exceeds 2r");
  }
  const int d = (deg + 1) / 2;
  MomentBasis sub = enumerate_basis(vars, relax_order - d, budget);
  LmiBlock block;
  block.side = static_cast<int>(sub.words.size());
  for (const auto& w : sub.words) block.labels.push_back(w.str());
  for (int r = 0; r < block.side; ++r) {
    for (int c = r; c < block.side; ++c) {
      const poly::Monomial prod = sub.words[r] * sub.words[c];
      std::map<int, double> accum;
      for (const auto& [mu, coeff] : q.terms()) accum[moments.at(prod * mu)] += coeff;
      for (const auto& [pos, coeff] : accum) {
        if (coeff != 0.0) block.entries.push_back({r, c, pos, coeff});
      }
    }
  }
  return block;
}

struct MomentRelaxation {
  MomentBasis basis;
  MomentIndex moments;
  std::vector<std::pair<int, double>> objective;  // sparse over moment positions
  std::vector<LmiBlock> blocks;                   // [0] is the moment block
  std::vector<int> localizing_orders;             // d_i per constraint
};

// Order-r relaxation: moment block, one localizing block per constraint,
// y_1 = 1 pinned in the SDP lowering.
inline MomentRelaxation build_relaxation(const poly::Polynomial& objective,
                                         const std::vector<poly::Polynomial>& constraints,
                                         int relax_order,
                                         std::size_t budget = kDefaultBasisBudget) {
  if (relax_order < 0) throw std::invalid_argument("build_relaxation: order must be >= 0");
  int max_deg = objective.degree();
  for (const auto& q : constraints) max_deg = std::max(max_deg, q.degree());
  if (2 * relax_order < max_deg) {
    throw std::invalid_argument("build_relaxation: order " + std::to_string(relax_order) +
                                " too small for degree " + std::to_string(max_deg));
  }

  // Variable set: union over objective and constraints, sorted.
  std::vector<poly::VarId> vars = objective.variables();
  for (const auto& q : constraints) {
    auto qv = q.variables();
    vars.insert(vars.end(), qv.begin(), qv.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  MomentRelaxation relax;
  relax.basis = enumerate_basis(vars, relax_order, budget);
  relax.moments = make_moment_index(vars, relax_order, budget);
  for (const auto& [mono, coeff] : objective.terms()) {
    relax.objective.emplace_back(relax.moments.at(mono), coeff);
  }
  relax.blocks.push_back(build_moment_block(relax.basis, relax.moments));
  for (const auto& q : constraints) {
    relax.blocks.push_back(build_localizing_block(q, vars, relax_order, relax.moments, budget));
    relax.localizing_orders.push_back((q.degree() + 1) / 2);
  }
  return relax;
}

inline sdp::SdpProblem to_sdp_problem(const MomentRelaxation& relax) {
  sdp::SdpProblem p;
  p.num_vars = static_cast<int>(relax.moments.monomials.size());
  p.objective.assign(p.num_vars, 0.0);
  for (const auto& [pos, coeff] : relax.objective) p.objective[pos] += coeff;
  for (const auto& block : relax.blocks) {
    sdp::SdpBlock b;
    b.side = block.side;
    for (const auto& e : block.entries) {
      b.linear.push_back({e.moment, sdp::BlockEntry{e.row, e.col, e.coeff}});
    }
    p.blocks.push_back(std::move(b));
  }
  p.pinned.emplace_back(0, 1.0);  // y_1 = 1
  p.normalize();
  return p;
}

// Dense value of an LMI block at a moment vector.
inline Eigen::MatrixXd block_value(const LmiBlock& block, const Eigen::VectorXd& y) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(block.side, block.side);
  for (const auto& e : block.entries) {
    m(e.row, e.col) += e.coeff * y(e.moment);
    if (e.row != e.col) m(e.col, e.row) += e.coeff * y(e.moment);
  }
  return m;
}

// Rank at a relative eigenvalue tolerance; eigenvalues below
// rel_tol * max|eig| count as zero.
inline int numeric_rank(const Eigen::MatrixXd& sym, double rel_tol = 1e-6) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (scale <= 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i)) > rel_tol * scale) ++rank;
  }
  return rank;
}

struct RankCertificates {
  bool rank_one = false;
  bool rank_loop = false;
  int moment_rank = 0;
  int truncated_rank = 0;
};

// Flat-extension check: rank M_r(y) equals rank M_{r-d}(y) with d the
// largest localizing order (at least 1). Graded enumeration makes M_{r-d}
// the leading principal submatrix of the moment block.
inline RankCertificates rank_certificates(const MomentRelaxation& relax,
                                          const Eigen::VectorXd& y, double rel_tol = 1e-6) {
  RankCertificates cert;
  const Eigen::MatrixXd m = block_value(relax.blocks.front(), y);
  cert.moment_rank = numeric_rank(m, rel_tol);
  cert.rank_one = cert.moment_rank == 1;
  int d = 1;
  for (int di : relax.localizing_orders) d = std::max(d, di);
  const int sub_order = relax.basis.order - d;
  if (sub_order >= 0) {
    int sub_side = 0;
    for (const auto& w : relax.basis.words) {
      if (w.degree() <= sub_order) ++sub_side;
    }
    cert.truncated_rank = numeric_rank(m.topLeftCorner(sub_side, sub_side), rel_tol);
    cert.rank_loop = cert.moment_rank == cert.truncated_rank;
  }
  return cert;
}

// Debugging pretty-printer with monomial labels on rows and columns.
inline std::string pretty_print(const MomentRelaxation& relax) {
  std::ostringstream os;
  os << "moments (" << relax.moments.monomials.size() << "):";
  for (std::size_t i = 0; i < relax.moments.monomials.size(); ++i) {
    os << " y[" << i << "]=" << relax.moments.monomials[i].str();
  }
  os << "\nobjective:";
  for (const auto& [pos, coeff] : relax.objective) os << " " << coeff << "*y[" << pos << "]";
  os << "\n";
  for (std::size_t b = 0; b < relax.blocks.size(); ++b) {
    const auto& blk = relax.blocks[b];
    os << (b == 0 ? "moment block" : "localizing block") << " side " << blk.side << "\n";
    for (int r = 0; r < blk.side; ++r) {
      os << "  [" << blk.labels[r] << "]";
      for (int c = 0; c < blk.side; ++c) {
        bool first = true;
        os << " (";
        for (const auto& e : blk.entries) {
          if ((e.row == r && e.col == c) || (e.row == c && e.col == r)) {
            if (!first) os << "+";
            if (e.coeff != 1.0) os << e.coeff << "*";
            os << "y[" << e.moment << "]";
            first = false;
          }
        }
        os << (first ? "0)" : ")");
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace qoc::moment
