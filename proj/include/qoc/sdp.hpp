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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Linear objectives under linear-matrix-inequality constraints:
//
//   minimize  c^T y   subject to   A_0[b] + sum_a y_a A_a[b]  >= 0  per block,
//                                  y_j = v_j on the pinned list.
//
// Solved with a dense infeasible-start primal-dual path-following method
// (HKM search direction, Mehrotra predictor-corrector, fraction-to-boundary
// 0.98). The SDPA sparse exchange format is supported for cross-checking
// against external solvers.

namespace qoc::sdp {

struct BlockEntry {
  int row = 0;  // 0-based, row <= col
  int col = 0;
  double value = 0.0;
};

struct SdpBlock {
  int side = 0;
  std::vector<BlockEntry> constant;                 // A_0
  std::vector<std::pair<int, BlockEntry>> linear;   // (variable, entry)
};

struct SdpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<SdpBlock> blocks;
  std::vector<std::pair<int, double>> pinned;  // (variable, value)

  void validate() const {
    if (num_vars < 0) throw std::invalid_argument("SdpProblem: negative num_vars");
    if (static_cast<int>(objective.size()) != num_vars) {
      throw std::invalid_argument("SdpProblem: objective size != num_vars");
    }
    if (blocks.empty()) throw std::invalid_argument("SdpProblem: no blocks");
    for (const auto& b : blocks) {
      if (b.side < 1) throw std::invalid_argument("SdpProblem: block side < 1");
      auto check = [&](const BlockEntry& e) {
        if (e.row < 0 || e.col < 0 || e.row >= b.side || e.col >= b.side || e.row > e.col) {
          throw std::invalid_argument("SdpProblem: entry out of range");
        }
      };
      for (const auto& e : b.constant) check(e);
      for (const auto& [var, e] : b.linear) {
        if (var < 0 || var >= num_vars) {
          throw std::invalid_argument("SdpProblem: entry references unknown variable");
        }
        check(e);
      }
    }
    for (const auto& [var, value] : pinned) {
      if (var < 0 || var >= num_vars) {
        throw std::invalid_argument("SdpProblem: pinned variable out of range");
      }
      (void)value;
    }
  }

  // Canonical entry order (block, row, col, var); used by the exporter and
  // by equality comparison.
  void normalize() {
    for (auto& b : blocks) {
      std::sort(b.constant.begin(), b.constant.end(), [](const auto& x, const auto& y) {
        return std::tie(x.row, x.col) < std::tie(y.row, y.col);
      });
      std::sort(b.linear.begin(), b.linear.end(), [](const auto& x, const auto& y) {
        return std::tie(x.second.row, x.second.col, x.first) <
               std::tie(y.second.row, y.second.col, y.first);
      });
    }
  }

  friend bool operator==(const SdpProblem& a, const SdpProblem& b) {
    auto key = [](const SdpProblem& p) {
      std::ostringstream os;
      os << p.num_vars << ";";
      for (double c : p.objective) os << c << ",";
      for (const auto& blk : p.blocks) {
        os << "|" << blk.side << ":";
        for (const auto& e : blk.constant) os << e.row << "." << e.col << "." << e.value << ",";
        os << "/";
        for (const auto& [v, e] : blk.linear) {
          os << v << "." << e.row << "." << e.col << "." << e.value << ",";
        }
      }
      os << "#";
      for (const auto& [v, x] : p.pinned) os << v << "=" << x << ",";
      return os.str();
    };
    SdpProblem an = a, bn = b;
    an.normalize();
    bn.normalize();
    return key(an) == key(bn);
  }
};

enum class SolveStatus { optimal, max_iter, infeasible_suspected };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible_suspected: return "infeasible_suspected";
  }
  return "unknown";
}

struct IterRecord {
  int iter = 0;
  double primal = 0, dual = 0, gap_rel = 0, feas_p = 0, feas_d = 0, mu = 0;
};

struct SdpSolution {
  Eigen::VectorXd y;                              // full vector, pins included
  double primal_value = 0;
  double dual_value = 0;
  double gap = 0;                                 // primal - dual, certified
  std::vector<Eigen::MatrixXd> dual_certificate;  // PSD multiplier per block
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  bool schur_regularized = false;
  std::vector<IterRecord> trace;
};

namespace detail {

struct DenseBlock {
  int side = 0;
  Eigen::MatrixXd a0;
  std::vector<std::vector<BlockEntry>> by_var;  // per active variable
};

inline void add_sym(Eigen::MatrixXd& m, const BlockEntry& e, double scale) {
  m(e.row, e.col) += scale * e.value;
  if (e.row != e.col) m(e.col, e.row) += scale * e.value;
}

// tr(F_a M) for symmetric M and upper-stored sparse F_a.
inline double sparse_dot(const std::vector<BlockEntry>& entries, const Eigen::MatrixXd& m) {
  double s = 0;
  for (const auto& e : entries) {
    s += e.value * (e.row == e.col ? m(e.row, e.row) : 2.0 * m(e.row, e.col));
  }
  return s;
}

// Largest alpha with M + alpha*dM psd, scaled by the boundary fraction.
inline double step_length(const Eigen::MatrixXd& m, const Eigen::MatrixXd& dm,
                          double boundary_fraction) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd w = llt.matrixL().solve(dm);
  w = llt.matrixL().solve(w.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().minCoeff();
  if (lam >= 0) return 1.0;
  return std::min(1.0, -boundary_fraction / lam);
}

}  // namespace detail

// Path-following solve. Free variables are handled in dual LMI form
// directly; pinned variables are folded into the constant block before the
// iteration and re-inserted in the reported solution.
inline SdpSolution solve(const SdpProblem& problem, double tol = 1e-7, int max_iter = 100) {
  problem.validate();
  if (!(tol > 0)) throw std::invalid_argument("sdp::solve: tol must be positive");

  std::map<int, double> pins(problem.pinned.begin(), problem.pinned.end());
  std::vector<int> active;  // old index per new index
  std::vector<int> to_new(problem.num_vars, -1);
  for (int v = 0; v < problem.num_vars; ++v) {
    if (!pins.count(v)) {
      to_new[v] = static_cast<int>(active.size());
      active.push_back(v);
    }
  }
  const int m = static_cast<int>(active.size());
  const int nblocks = static_cast<int>(problem.blocks.size());

  std::vector<detail::DenseBlock> blocks(nblocks);
  for (int b = 0; b < nblocks; ++b) {
    const auto& src = problem.blocks[b];
    auto& dst = blocks[b];
    dst.side = src.side;
    dst.a0 = Eigen::MatrixXd::Zero(src.side, src.side);
    dst.by_var.assign(m, {});
    for (const auto& e : src.constant) detail::add_sym(dst.a0, e, 1.0);
    for (const auto& [var, e] : src.linear) {
      auto it = pins.find(var);
      if (it != pins.end()) {
        detail::add_sym(dst.a0, e, it->second);
      } else {
        dst.by_var[to_new[var]].push_back(e);
      }
    }
  }

  Eigen::VectorXd c(m);
  for (int a = 0; a < m; ++a) c(a) = problem.objective[active[a]];

  SdpSolution sol;
  auto finalize = [&](const Eigen::VectorXd& y_red, const std::vector<Eigen::MatrixXd>& x,
                      double pobj, double dobj) {
    Eigen::VectorXd full(problem.num_vars);
    for (int v = 0; v < problem.num_vars; ++v) {
      full(v) = pins.count(v) ? pins[v] : y_red(to_new[v]);
    }
    sol.y = full;
    double pin_term = 0;
    for (const auto& [v, val] : problem.pinned) pin_term += problem.objective[v] * val;
    sol.primal_value = pobj + pin_term;
    sol.dual_value = dobj + pin_term;
    sol.gap = sol.primal_value - sol.dual_value;
    sol.dual_certificate = x;
  };

  // All variables pinned: nothing to optimize, report feasibility of A(y).
  if (m == 0) {
    std::vector<Eigen::MatrixXd> x;
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.a0, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      x.push_back(Eigen::MatrixXd::Zero(b.side, b.side));
    }
    finalize(Eigen::VectorXd(0), x, 0, 0);
    sol.status = min_eig >= -tol ? SolveStatus::optimal : SolveStatus::infeasible_suspected;
    return sol;
  }

  // Initial iterate: y = 0 with the slack inflated to strict feasibility by
  // an adaptive identity shift; the multiplier starts as a scaled identity.
  std::vector<Eigen::MatrixXd> S(nblocks), X(nblocks);
  int total_side = 0;
  double a0_scale = 1.0;
  for (int b = 0; b < nblocks; ++b) {
    total_side += blocks[b].side;
    a0_scale = std::max(a0_scale, blocks[b].a0.cwiseAbs().maxCoeff());
  }
  for (int b = 0; b < nblocks; ++b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[b].a0, Eigen::EigenvaluesOnly);
    const double lam = std::max(1.0, -1.5 * es.eigenvalues().minCoeff());
    S[b] = blocks[b].a0 + lam * Eigen::MatrixXd::Identity(blocks[b].side, blocks[b].side);
    X[b] = std::max(1.0, c.cwiseAbs().maxCoeff()) *
           Eigen::MatrixXd::Identity(blocks[b].side, blocks[b].side);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  const double c_scale = 1.0 + c.cwiseAbs().maxCoeff();
  double best_err = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_y = y;
  std::vector<Eigen::MatrixXd> best_x = X;
  double best_p = 0, best_d = 0;
  sol.status = SolveStatus::max_iter;

  auto apply_adjoint = [&](const std::vector<Eigen::MatrixXd>& mats) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int b = 0; b < nblocks; ++b) {
      for (int a = 0; a < m; ++a) {
        if (!blocks[b].by_var[a].empty()) {
          out(a) += detail::sparse_dot(blocks[b].by_var[a], mats[b]);
        }
      }
    }
    return out;
  };
  auto apply_map = [&](const Eigen::VectorXd& dy, int b) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(blocks[b].side, blocks[b].side);
    for (int a = 0; a < m; ++a) {
      for (const auto& e : blocks[b].by_var[a]) detail::add_sym(out, e, dy(a));
    }
    return out;
  };

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    // Residuals and merit quantities.
    std::vector<Eigen::MatrixXd> Rd(nblocks);
    double dfeas = 0;
    for (int b = 0; b < nblocks; ++b) {
      Rd[b] = blocks[b].a0 + apply_map(y, b) - S[b];
      dfeas = std::max(dfeas, Rd[b].cwiseAbs().maxCoeff() / (1.0 + a0_scale));
    }
    Eigen::VectorXd rp = c - apply_adjoint(X);
    const double pfeas = rp.cwiseAbs().maxCoeff() / c_scale;

    double mu = 0, dobj = 0;
    for (int b = 0; b < nblocks; ++b) {
      mu += (X[b].array() * S[b].array()).sum();
      dobj -= (blocks[b].a0.array() * X[b].array()).sum();
    }
    mu /= total_side;
    const double pobj = c.dot(y);
    const double gap_rel = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    sol.trace.push_back({iter, pobj, dobj, gap_rel, pfeas, dfeas, mu});
    const double err = std::max({gap_rel, pfeas, dfeas});
    if (err < best_err) {
      best_err = err;
      best_y = y;
      best_x = X;
      best_p = pobj;
      best_d = dobj;
    }
    if (err <= tol) {
      sol.status = SolveStatus::optimal;
      break;
    }
    double norms = y.cwiseAbs().maxCoeff();
    for (int b = 0; b < nblocks; ++b) norms = std::max(norms, X[b].cwiseAbs().maxCoeff());
    if (norms > 1e14 || (mu < 1e-16 && err > 1e3 * tol)) {
      sol.status = SolveStatus::infeasible_suspected;
      break;
    }

    // Factor the current iterate.
    std::vector<Eigen::LLT<Eigen::MatrixXd>> slt;
    slt.reserve(nblocks);
    bool fail = false;
    for (int b = 0; b < nblocks; ++b) {
      slt.emplace_back(S[b]);
      if (slt.back().info() != Eigen::Success) fail = true;
    }
    if (fail) break;

    // Schur complement M_ab = tr(F_a sym(X F_b S^-1)), symmetric positive
    // definite for a strictly feasible iterate.
    std::vector<std::vector<Eigen::MatrixXd>> symw(nblocks);
    for (int b = 0; b < nblocks; ++b) {
      symw[b].resize(m);
      for (int a = 0; a < m; ++a) {
        if (blocks[b].by_var[a].empty()) continue;
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(blocks[b].side, blocks[b].side);
        for (const auto& e : blocks[b].by_var[a]) detail::add_sym(f, e, 1.0);
        Eigen::MatrixXd w = X[b] * slt[b].solve(f).transpose();
        symw[b][a] = 0.5 * (w + w.transpose());
      }
    }
    Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
    for (int b = 0; b < nblocks; ++b) {
      for (int bcol = 0; bcol < m; ++bcol) {
        if (blocks[b].by_var[bcol].empty() || symw[b][bcol].size() == 0) continue;
        for (int arow = 0; arow < m; ++arow) {
          if (blocks[b].by_var[arow].empty()) continue;
          schur(arow, bcol) += detail::sparse_dot(blocks[b].by_var[arow], symw[b][bcol]);
        }
      }
    }
    schur = 0.5 * (schur + schur.transpose()).eval();

    Eigen::LLT<Eigen::MatrixXd> mlt(schur);
    double ridge = 1e-12 * (1.0 + schur.diagonal().cwiseAbs().maxCoeff());
    while (mlt.info() != Eigen::Success && ridge < 1e-4) {
      sol.schur_regularized = true;
      mlt.compute(schur + ridge * Eigen::MatrixXd::Identity(m, m));
      ridge *= 100;
    }
    if (mlt.info() != Eigen::Success) break;

    auto solve_direction = [&](double mu_target, const std::vector<Eigen::MatrixXd>* corr,
                               Eigen::VectorXd& dy, std::vector<Eigen::MatrixXd>& dS,
                               std::vector<Eigen::MatrixXd>& dX) {
      std::vector<Eigen::MatrixXd> rhs_mats(nblocks);
      for (int b = 0; b < nblocks; ++b) {
        Eigen::MatrixXd t = -X[b] * slt[b].solve(Rd[b]).transpose();
        if (mu_target > 0) {
          t += mu_target * slt[b].solve(Eigen::MatrixXd::Identity(blocks[b].side, blocks[b].side));
        }
        if (corr) t -= (*corr)[b] * slt[b].solve(Eigen::MatrixXd::Identity(blocks[b].side, blocks[b].side));
        rhs_mats[b] = 0.5 * (t + t.transpose());
      }
      Eigen::VectorXd rhs = apply_adjoint(rhs_mats) - c;
      dy = mlt.solve(rhs);
      dS.resize(nblocks);
      dX.resize(nblocks);
      for (int b = 0; b < nblocks; ++b) {
        dS[b] = apply_map(dy, b) + Rd[b];
        Eigen::MatrixXd t = -X[b] - X[b] * slt[b].solve(dS[b]).transpose();
        if (mu_target > 0) {
          t += mu_target * slt[b].solve(Eigen::MatrixXd::Identity(blocks[b].side, blocks[b].side));
        }
        if (corr) t -= (*corr)[b] * slt[b].solve(Eigen::MatrixXd::Identity(blocks[b].side, blocks[b].side));
        dX[b] = 0.5 * (t + t.transpose());
      }
    };

    // Predictor (affine direction).
    Eigen::VectorXd dy_a;
    std::vector<Eigen::MatrixXd> dS_a, dX_a;
    solve_direction(0.0, nullptr, dy_a, dS_a, dX_a);
    double ax = 1.0, as = 1.0;
    for (int b = 0; b < nblocks; ++b) {
      ax = std::min(ax, detail::step_length(X[b], dX_a[b], 0.98));
      as = std::min(as, detail::step_length(S[b], dS_a[b], 0.98));
    }
    double mu_aff = 0;
    for (int b = 0; b < nblocks; ++b) {
      mu_aff += ((X[b] + ax * dX_a[b]).array() * (S[b] + as * dS_a[b]).array()).sum();
    }
    mu_aff /= total_side;
    const double sigma = mu > 0 ? std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3) : 0.0;

    // Corrector with the second-order term dX_a dS_a.
    std::vector<Eigen::MatrixXd> corr(nblocks);
    for (int b = 0; b < nblocks; ++b) corr[b] = dX_a[b] * dS_a[b];
    Eigen::VectorXd dy;
    std::vector<Eigen::MatrixXd> dS, dX;
    solve_direction(sigma * mu, &corr, dy, dS, dX);

    ax = 1.0;
    as = 1.0;
    for (int b = 0; b < nblocks; ++b) {
      ax = std::min(ax, detail::step_length(X[b], dX[b], 0.98));
      as = std::min(as, detail::step_length(S[b], dS[b], 0.98));
    }
    if (ax < 1e-10 && as < 1e-10) break;  // stalled

    for (int b = 0; b < nblocks; ++b) {
      X[b] = (X[b] + ax * dX[b]).eval();
      S[b] = (S[b] + as * dS[b]).eval();
      X[b] = 0.5 * (X[b] + X[b].transpose()).eval();
      S[b] = 0.5 * (S[b] + S[b].transpose()).eval();
    }
    y += as * dy;
  }

  sol.iterations = iter;
  finalize(best_y, best_x, best_p, best_d);
  return sol;
}

// --- SDPA sparse exchange format -------------------------------------------
//
// The file encodes  min c^T x  s.t.  X = sum_i x_i F_i - F_0 >= 0, so our
// constant block maps to F_0 = -A_0 and the variable coefficients map
// one-to-one. Pinned equalities are lowered to an auxiliary trailing
// diagonal block holding the inequality pair y_j - v >= 0, v - y_j >= 0.

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SdpaEntry {
  int matno, blkno, i, j;  // 1-based indices, i <= j
  double value;
  friend bool operator<(const SdpaEntry& a, const SdpaEntry& b) {
    return std::tie(a.blkno, a.i, a.j, a.matno) < std::tie(b.blkno, b.i, b.j, b.matno);
  }
};

}  // namespace detail

inline std::string export_sdpa(const SdpProblem& problem) {
  problem.validate();
  const int nblock = static_cast<int>(problem.blocks.size()) + (problem.pinned.empty() ? 0 : 1);

  std::vector<detail::SdpaEntry> entries;
  for (int b = 0; b < static_cast<int>(problem.blocks.size()); ++b) {
    const auto& blk = problem.blocks[b];
    for (const auto& e : blk.constant) {
      if (e.value != 0.0) entries.push_back({0, b + 1, e.row + 1, e.col + 1, -e.value});
    }
    for (const auto& [var, e] : blk.linear) {
      if (e.value != 0.0) entries.push_back({var + 1, b + 1, e.row + 1, e.col + 1, e.value});
    }
  }
  if (!problem.pinned.empty()) {
    const int aux = nblock;
    for (int p = 0; p < static_cast<int>(problem.pinned.size()); ++p) {
      const auto& [var, value] = problem.pinned[p];
      const int r1 = 2 * p + 1, r2 = 2 * p + 2;
      entries.push_back({var + 1, aux, r1, r1, 1.0});
      entries.push_back({var + 1, aux, r2, r2, -1.0});
      if (value != 0.0) {
        entries.push_back({0, aux, r1, r1, value});
        entries.push_back({0, aux, r2, r2, -value});
      }
    }
  }
  std::sort(entries.begin(), entries.end());

  std::ostringstream os;
  os << problem.num_vars << "\n" << nblock << "\n";
  for (int b = 0; b < static_cast<int>(problem.blocks.size()); ++b) {
    os << (b ? " " : "") << problem.blocks[b].side;
  }
  if (!problem.pinned.empty()) {
    os << (problem.blocks.empty() ? "" : " ") << -2 * static_cast<int>(problem.pinned.size());
  }
  os << "\n";
  for (int v = 0; v < problem.num_vars; ++v) {
    os << (v ? " " : "") << detail::format_double(problem.objective[v]);
  }
  os << "\n";
  for (const auto& e : entries) {
    os << e.matno << " " << e.blkno << " " << e.i << " " << e.j << " "
       << detail::format_double(e.value) << "\n";
  }
  return os.str();
}

inline SdpProblem import_sdpa(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& msg) -> std::runtime_error {
    return std::runtime_error("sdpa parse error at line " + std::to_string(lineno) + ": " + msg);
  };
  // Comment lines begin with '"' or '*'; separators {},() are whitespace.
  auto next_tokens = [&]() -> std::vector<std::string> {
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
      for (char& ch : line) {
        if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
      }
      std::istringstream ls(line);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    return {};
  };
  auto to_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      throw fail("expected integer, got '" + s + "'");
    }
    if (pos != s.size()) throw fail("expected integer, got '" + s + "'");
    return v;
  };
  auto to_double = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw fail("expected number, got '" + s + "'");
    }
    if (pos != s.size()) throw fail("expected number, got '" + s + "'");
    return v;
  };

  auto toks = next_tokens();
  if (toks.empty()) throw fail("missing mDIM header");
  const int mdim = to_int(toks[0]);
  if (mdim < 0) throw fail("negative mDIM");

  toks = next_tokens();
  if (toks.empty()) throw fail("missing nBLOCK header");
  const int nblock = to_int(toks[0]);
  if (nblock < 1) throw fail("nBLOCK must be >= 1");

  std::vector<int> sizes;
  while (static_cast<int>(sizes.size()) < nblock) {
    toks = next_tokens();
    if (toks.empty()) throw fail("missing block size list");
    for (const auto& t : toks) sizes.push_back(to_int(t));
  }
  if (static_cast<int>(sizes.size()) != nblock) throw fail("too many block sizes");

  std::vector<double> objective;
  while (static_cast<int>(objective.size()) < mdim) {
    toks = next_tokens();
    if (toks.empty()) throw fail("missing objective vector");
    for (const auto& t : toks) objective.push_back(to_double(t));
  }
  if (static_cast<int>(objective.size()) != mdim) throw fail("objective vector too long");

  struct RawEntry {
    int matno, blkno, i, j;
    double value;
  };
  std::vector<RawEntry> raw;
  while (!(toks = next_tokens()).empty()) {
    if (toks.size() != 5) throw fail("entry must have 5 fields");
    RawEntry e{to_int(toks[0]), to_int(toks[1]), to_int(toks[2]), to_int(toks[3]),
               to_double(toks[4])};
    if (e.matno < 0 || e.matno > mdim) throw fail("matrix index out of range");
    if (e.blkno < 1 || e.blkno > nblock) throw fail("block index out of range");
    const int side = std::abs(sizes[e.blkno - 1]);
    if (e.i < 1 || e.j < 1 || e.i > side || e.j > side) throw fail("entry index out of range");
    if (sizes[e.blkno - 1] < 0 && e.i != e.j) throw fail("off-diagonal entry in diagonal block");
    if (e.i > e.j) std::swap(e.i, e.j);
    raw.push_back(e);
  }

  SdpProblem p;
  p.num_vars = mdim;
  p.objective = objective;
  p.blocks.resize(nblock);
  for (int b = 0; b < nblock; ++b) p.blocks[b].side = std::abs(sizes[b]);
  for (const auto& e : raw) {
    auto& blk = p.blocks[e.blkno - 1];
    if (e.matno == 0) {
      blk.constant.push_back({e.i - 1, e.j - 1, -e.value});
    } else {
      blk.linear.push_back({e.matno - 1, BlockEntry{e.i - 1, e.j - 1, e.value}});
    }
  }

  // Recognize the exporter's pinned-equality block: a trailing diagonal
  // block made of rows pairing y_j - v >= 0 with v - y_j >= 0.
  if (nblock >= 1 && sizes[nblock - 1] < 0 && sizes[nblock - 1] % 2 == 0) {
    const auto& blk = p.blocks[nblock - 1];
    const int pairs = blk.side / 2;
    std::vector<int> var_of(blk.side, -1);
    std::vector<double> coeff_of(blk.side, 0), const_of(blk.side, 0);
    bool pattern = pairs > 0;
    for (const auto& e : blk.constant) {
      if (e.row != e.col) { pattern = false; break; }
      const_of[e.row] = -e.value;  // back to F_0 convention
    }
    if (pattern) {
      for (const auto& [var, e] : blk.linear) {
        if (e.row != e.col || var_of[e.row] != -1) { pattern = false; break; }
        var_of[e.row] = var;
        coeff_of[e.row] = e.value;
      }
    }
    if (pattern) {
      for (int q = 0; q < pairs && pattern; ++q) {
        const int r1 = 2 * q, r2 = 2 * q + 1;
        pattern = var_of[r1] >= 0 && var_of[r1] == var_of[r2] && coeff_of[r1] == 1.0 &&
                  coeff_of[r2] == -1.0 && const_of[r1] == -const_of[r2];
      }
    }
    if (pattern) {
      for (int q = 0; q < pairs; ++q) p.pinned.emplace_back(var_of[2 * q], const_of[2 * q]);
      p.blocks.pop_back();
    }
  }
  p.normalize();
  p.validate();
  return p;
}

}  // namespace qoc::sdp
