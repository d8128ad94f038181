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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Sparse multivariate polynomials over indexed real control variables
// u_j(k), plus a word/involution layer for order-sensitive monomial keys.

namespace qoc::poly {

// Coefficients whose magnitude falls below this are pruned after arithmetic.
inline constexpr double kCoeffEps = 1e-15;

// A discretized control variable: control channel j at time knot k.
struct VarId {
  std::int32_t control = 0;  // >= 0
  std::int32_t knot = 1;     // in [1, K]
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

inline std::string to_string(VarId v) {
  return "u" + std::to_string(v.control) + "(" + std::to_string(v.knot) + ")";
}

// Commutative monomial in canonical form: factors sorted by variable,
// exponents >= 1. The empty factor list is the unit monomial.
class Monomial {
 public:
  using Factor = std::pair<VarId, int>;

  Monomial() = default;
  explicit Monomial(VarId v, int exponent = 1) {
    if (exponent < 0) throw std::invalid_argument("Monomial: negative exponent");
    if (exponent > 0) factors_.emplace_back(v, exponent);
  }

  static Monomial unit() { return Monomial(); }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_unit() const { return factors_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [v, e] : factors_) d += e;
    return d;
  }

  int exponent_of(VarId v) const {
    for (const auto& [var, e] : factors_) {
      if (var == v) return e;
    }
    return 0;
  }

  Monomial operator*(const Monomial& other) const {
    Monomial out;
    auto a = factors_.begin(), b = other.factors_.begin();
    while (a != factors_.end() || b != other.factors_.end()) {
      if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
        out.factors_.push_back(*a++);
      } else if (a == factors_.end() || b->first < a->first) {
        out.factors_.push_back(*b++);
      } else {
        out.factors_.emplace_back(a->first, a->second + b->second);
        ++a;
        ++b;
      }
    }
    return out;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

  // Graded-lexicographic: lower total degree first, ties broken by the
  // variable sequence. Fixes a deterministic moment-basis enumeration.
  friend bool operator<(const Monomial& x, const Monomial& y) {
    const int dx = x.degree(), dy = y.degree();
    if (dx != dy) return dx < dy;
    auto a = x.factors_.begin(), b = y.factors_.begin();
    while (a != x.factors_.end() && b != y.factors_.end()) {
      if (a->first != b->first) return a->first < b->first;
      if (a->second != b->second) {
        // Larger exponent on the earlier variable sorts first.
        return a->second > b->second;
      }
      ++a;
      ++b;
    }
    return false;  // equal degree and identical factor runs
  }

  std::string str() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, e] : factors_) {
      if (!first) os << "*";
      os << to_string(v);
      if (e > 1) os << "^" << e;
      first = false;
    }
    return os.str();
  }

 private:
  std::vector<Factor> factors_;
};

// Sparse real-coefficient polynomial, keyed by canonical monomials.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(double constant) {  // NOLINT: implicit by design, mirrors ring use
    if (std::abs(constant) > kCoeffEps) terms_[Monomial::unit()] = constant;
  }

  static Polynomial variable(VarId v) { return term(Monomial(v), 1.0); }

  static Polynomial term(const Monomial& m, double coeff) {
    Polynomial p;
    if (std::abs(coeff) > kCoeffEps) p.terms_[m] = coeff;
    return p;
  }

  const std::map<Monomial, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  double coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
  }

  Polynomial& operator+=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) {
      double& slot = terms_[m];
      slot += c;
      if (std::abs(slot) <= kCoeffEps) terms_.erase(m);
    }
    return *this;
  }

  Polynomial& operator-=(const Polynomial& other) { return *this += -other; }

  Polynomial operator-() const {
    Polynomial out;
    for (const auto& [m, c] : terms_) out.terms_[m] = -c;
    return out;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        const Monomial m = ma * mb;
        double& slot = out.terms_[m];
        slot += ca * cb;
        if (std::abs(slot) <= kCoeffEps) out.terms_.erase(m);
      }
    }
    return out;
  }

  friend Polynomial operator*(double s, const Polynomial& p) {
    Polynomial out;
    for (const auto& [m, c] : p.terms_) {
      const double v = s * c;
      if (std::abs(v) > kCoeffEps) out.terms_[m] = v;
    }
    return out;
  }
  friend Polynomial operator*(const Polynomial& p, double s) { return s * p; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  // Partial evaluation at the pinned variables; the rest stay symbolic.
  Polynomial substitute_pinned(const std::map<VarId, double>& pins) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      double scale = c;
      Monomial rest;
      for (const auto& [v, e] : m.factors()) {
        auto it = pins.find(v);
        if (it == pins.end()) {
          rest = rest * Monomial(v, e);
        } else {
          double p = 1.0;
          for (int i = 0; i < e; ++i) p *= it->second;
          scale *= p;
        }
      }
      out += term(rest, scale);
    }
    return out;
  }

  // Full numeric evaluation; every variable of the polynomial must be
  // assigned.
  double evaluate(const std::map<VarId, double>& point) const {
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
      double v = c;
      for (const auto& [var, e] : m.factors()) {
        auto it = point.find(var);
        if (it == point.end()) {
          throw std::invalid_argument("Polynomial::evaluate: missing assignment for " +
                                      to_string(var));
        }
        for (int i = 0; i < e; ++i) v *= it->second;
      }
      total += v;
    }
    return total;
  }

  std::vector<VarId> variables() const {
    std::vector<VarId> vars;
    for (const auto& [m, c] : terms_) {
      for (const auto& [v, e] : m.factors()) vars.push_back(v);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  // Sorted "coefficient * monomial" rendering, reproducible across runs.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      os << c;
      if (!m.is_unit()) os << " * " << m.str();
      first = false;
    }
    return os.str();
  }

 private:
  std::map<Monomial, double> terms_;
};

// --- word layer -------------------------------------------------------------
//
// Words are order-sensitive monomials over the variables and their daggered
// copies. Over real scalar controls the involution acts as the identity on
// letters; the word form is kept for order-sensitive moment indexing.

struct Letter {
  VarId var;
  bool daggered = false;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  static Word from_variable(VarId v) { return Word({Letter{v, false}}); }

  static Word from_monomial(const Monomial& m) {
    Word w;
    for (const auto& [v, e] : m.factors()) {
      for (int i = 0; i < e; ++i) w.letters_.push_back(Letter{v, false});
    }
    return w;
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  // Involution: reverse the word and dagger every letter.
  Word dagger() const {
    Word out;
    out.letters_.assign(letters_.rbegin(), letters_.rend());
    for (auto& l : out.letters_) l.daggered = !l.daggered;
    return out;
  }

  Word operator*(const Word& other) const {
    Word out = *this;
    out.letters_.insert(out.letters_.end(), other.letters_.begin(), other.letters_.end());
    return out;
  }

  Monomial to_monomial() const {
    Monomial m;
    for (const auto& l : letters_) m = m * Monomial(l.var);
    return m;
  }

  friend bool operator==(const Word&, const Word&) = default;

  // Length first, then lexicographic on letters.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
    return a.letters_ < b.letters_;
  }

  std::string str() const {
    if (letters_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& l : letters_) {
      if (!first) os << "*";
      os << to_string(l.var);
      if (l.daggered) os << "+";
      first = false;
    }
    return os.str();
  }

 private:
  std::vector<Letter> letters_;
};

// Canonical key of a word. Real variables are self-adjoint, so dagger flags
// drop out; in commutative mode the letters additionally sort, collapsing the
// key to the classical monomial. In non-commutative mode the letter order is
// preserved, so u1*u2 and u2*u1 stay distinct keys.
inline Word canonicalize(const Word& w, bool commutative) {
  std::vector<Letter> letters = w.letters();
  for (auto& l : letters) l.daggered = false;
  if (commutative) std::sort(letters.begin(), letters.end());
  return Word(std::move(letters));
}

}  // namespace qoc::poly
