#include <catch2/catch.hpp>
#include <random>

#include "qoc/algebra.hpp"

using namespace qoc::algebra;

namespace {

std::mt19937& rng() {
  static std::mt19937 gen(20260808);
  return gen;
}

CMatrix random_matrix(int n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = Complex(dist(rng()), dist(rng()));
  }
  return m;
}

CMatrix random_hermitian(int n) {
  CMatrix m = random_matrix(n);
  return 0.5 * (m + m.adjoint().eval());
}

CMatrix random_anti_hermitian(int n) {
  CMatrix m = random_matrix(n);
  return 0.5 * (m - m.adjoint().eval());
}

CMatrix random_unitary(int n) {
  return exp_anti_hermitian(random_anti_hermitian(n));
}

CMatrix random_density(int n) {
  CMatrix a = random_matrix(n);
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

// Plain triple-loop product, independent of the library multiply path.
CMatrix slow_commutator(const CMatrix& a, const CMatrix& b) {
  const int n = static_cast<int>(a.rows());
  CMatrix out = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex s = 0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j) - b(i, k) * a(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("commutator basics", "[algebra]") {
  const CMatrix sx = spin_half('x'), sy = spin_half('y'), sz = spin_half('z');
  CHECK((commutator(sx, sy) - Complex(0, 1) * sz).norm() == Approx(0).margin(1e-15));
  CHECK(commutator(sx, sx).norm() == 0.0);
  CHECK_THROWS_AS(commutator(sx, identity(3)), std::invalid_argument);
}

TEST_CASE("two-qubit generator commutator against direct multiplication", "[algebra]") {
  const CMatrix tx0 = two_qubit_gen('x', '0');
  const CMatrix tyy = two_qubit_gen('y', 'y');
  const CMatrix tzy = two_qubit_gen('z', 'y');
  const CMatrix expected = slow_commutator(tx0, tyy);
  CHECK((commutator(tx0, tyy) - expected).norm() < 1e-14);
  CHECK((expected - Complex(0, 1) * tzy).norm() < 1e-14);
}

TEST_CASE("commutator antisymmetry and Jacobi identity", "[algebra]") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    CMatrix a = random_matrix(n), b = random_matrix(n), c = random_matrix(n);
    CHECK((commutator(a, b) + commutator(b, a)).cwiseAbs().maxCoeff() < 1e-12);
    CMatrix jacobi = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                     commutator(c, commutator(a, b));
    CHECK(jacobi.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("kron dimensions and generators", "[algebra]") {
  CHECK((kron(identity(2), identity(2)) - identity(4)).norm() == 0.0);
  CHECK((0.5 * kron(pauli('x'), identity(2)) - two_qubit_gen('x', '0')).norm() == 0.0);
  CHECK((0.5 * kron(pauli('z'), pauli('z')) - two_qubit_gen('z', 'z')).norm() == 0.0);
  CHECK(kron(random_matrix(2), random_matrix(3)).rows() == 6);
}

TEST_CASE("exp of anti-Hermitian generators", "[algebra]") {
  CHECK((exp_anti_hermitian(zero(3)) - identity(3)).norm() == Approx(0).margin(1e-15));

  // Closed form: exp(-i theta sigma_x) = cos(theta) I - i sin(theta) sigma_x.
  const CMatrix a = Complex(0, -1) * M_PI_2 * spin_half('x');
  const CMatrix expected = std::cos(M_PI_4) * identity(2) -
                           Complex(0, 1) * std::sin(M_PI_4) * pauli('x');
  CHECK((exp_anti_hermitian(a) - expected).norm() < 1e-14);

  for (int trial = 0; trial < 10; ++trial) {
    CMatrix u = exp_anti_hermitian(random_anti_hermitian(4));
    CHECK((u.adjoint() * u - identity(4)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(exp_anti_hermitian(random_hermitian(3) + identity(3)), std::invalid_argument);
}

TEST_CASE("principal log of unitaries", "[algebra]") {
  CHECK(log_unitary(identity(4)).norm() == Approx(0).margin(1e-12));

  const CMatrix u = Complex(0, -1) * pauli('x');  // exp(-i pi/2 sigma_x)
  const CMatrix expected = Complex(0, -1) * M_PI * spin_half('x');
  CHECK((log_unitary(u) - expected).norm() < 1e-10);

  for (int trial = 0; trial < 10; ++trial) {
    CMatrix v = random_unitary(3);
    CMatrix l = log_unitary(v);
    CHECK(is_anti_hermitian(l, 1e-10));
    CHECK((exp_anti_hermitian(l) - v).norm() < 1e-10);
  }
  CHECK_THROWS_AS(log_unitary(2.0 * identity(2)), std::invalid_argument);

  bool branch = false;
  log_unitary(-identity(2), kStructuralTol, &branch);
  CHECK(branch);
  branch = false;
  log_unitary(identity(2), kStructuralTol, &branch);
  CHECK_FALSE(branch);
}

TEST_CASE("log then exp round trip inside principal branch", "[algebra]") {
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix a = random_anti_hermitian(3);
    const double radius = spectral_norm(a);
    a *= (0.9 * M_PI / std::max(radius, 1e-12)) * 0.5;  // keep well inside (-pi, pi)
    CMatrix back = log_unitary(exp_anti_hermitian(a));
    CHECK((back - a).norm() < 1e-10);
  }
}

TEST_CASE("trace distance", "[algebra]") {
  CMatrix rho = random_density(3);
  CHECK(trace_distance(rho, rho) == Approx(0).margin(1e-14));

  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK(trace_distance(p0, p1) == Approx(1.0));

  CMatrix sigma = random_density(3);
  CHECK(trace_distance(rho, sigma) == Approx(trace_distance(sigma, rho)));
  CHECK_THROWS_AS(trace_distance(random_matrix(3), rho), std::invalid_argument);
}

TEST_CASE("trace distance triangle inequality", "[algebra]") {
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix a = random_hermitian(3), b = random_hermitian(3), c = random_hermitian(3);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
  }
}

TEST_CASE("fidelity", "[algebra]") {
  CMatrix rho = random_density(3);
  CHECK(fidelity(rho, rho) == Approx(1.0).margin(1e-10));

  CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK(fidelity(p0, p1) == Approx(0).margin(1e-10));

  for (int trial = 0; trial < 20; ++trial) {
    CMatrix a = random_density(3), b = random_density(3);
    const double f = fidelity(a, b);
    CHECK(f == Approx(fidelity(b, a)).margin(1e-10));
    CHECK(f >= -1e-10);
    CHECK(f <= 1 + 1e-10);
  }
  CHECK_THROWS_AS(fidelity(random_hermitian(3), random_density(3)), std::invalid_argument);
}

TEST_CASE("frobenius overlap", "[algebra]") {
  CMatrix u = random_unitary(4);
  CHECK(frobenius_overlap(u, u) == Approx(2.0));  // sqrt(N) with N = 4

  CHECK(frobenius_overlap(pauli('x'), pauli('z')) == Approx(0).margin(1e-12));

  CMatrix v = random_unitary(4);
  const double base = frobenius_overlap(u, v);
  const Complex phase = std::exp(Complex(0, 1.234));
  CHECK(frobenius_overlap(phase * u, v) == Approx(base).margin(1e-12));
}

TEST_CASE("structural predicates", "[algebra]") {
  CHECK(is_hermitian(random_hermitian(3)));
  CHECK(is_anti_hermitian(random_anti_hermitian(3)));
  CHECK(is_unitary(random_unitary(3)));
  CHECK(is_traceless(spin_half('z')));
  CHECK_FALSE(is_traceless(identity(2)));
  CHECK_FALSE(is_hermitian(random_anti_hermitian(3) + 0.5 * identity(3) * Complex(0, 1)));
}
