#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "thermoqfi/errors.hpp"
#include "thermoqfi/operators.hpp"

using namespace thermoqfi;
using testkit::random_hermitian;
using testkit::random_hermitian_op;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, 1), Complex(0, -1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}

PauliTerm term(double coeff, std::vector<PauliFactor> factors, int n) {
  return {coeff, {std::move(factors), n}};
}

} // namespace

TEST_CASE("single-site pauli strings produce the standard matrices") {
  auto z = build_pauli_operator({term(1.0, {{0, PauliAxis::Z}}, 1)}, 1);
  CHECK((z.matrix() - pauli_z()).norm() == 0.0);

  auto x = build_pauli_operator({term(1.0, {{0, PauliAxis::X}}, 1)}, 1);
  CHECK((x.matrix() - pauli_x()).norm() == 0.0);

  auto y = build_pauli_operator({term(1.0, {{0, PauliAxis::Y}}, 1)}, 1);
  CHECK((y.matrix() - pauli_y()).norm() == 0.0);
}

TEST_CASE("pauli algebra holds for the generated matrices") {
  Matrix xy = pauli_x() * pauli_y();
  Matrix expected = Complex(0, 1) * pauli_z();
  CHECK((xy - expected).norm() < 1e-15);

  CHECK((pauli_x() * pauli_x() - Matrix::Identity(2, 2)).norm() == 0.0);
  CHECK((pauli_y() * pauli_y() - Matrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((pauli_z() * pauli_z() - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("sum of single-site z terms gives the expected two-qubit diagonal") {
  double mu = 0.7;
  auto op = build_pauli_operator(
      {term(mu, {{0, PauliAxis::Z}}, 2), term(mu, {{1, PauliAxis::Z}}, 2)}, 2);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = -2.0 * mu;
  expected(3, 3) = 2.0 * mu;
  CHECK((op.matrix() - expected).norm() < 1e-15);
}

TEST_CASE("xx coupling fills the anti-diagonal") {
  double lambda = 1.3;
  auto op = build_pauli_operator(
      {term(lambda, {{0, PauliAxis::X}, {1, PauliAxis::X}}, 2)}, 2);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 3) = lambda;
  expected(1, 2) = lambda;
  expected(2, 1) = lambda;
  expected(3, 0) = lambda;
  CHECK((op.matrix() - expected).norm() < 1e-15);
}

TEST_CASE("site zero acts on the leftmost tensor factor") {
  // Z on site 0 of two qubits is sigma_z (x) I: diag(-1, -1, +1, +1).
  auto op = build_pauli_operator({term(1.0, {{0, PauliAxis::Z}}, 2)}, 2);
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << -1, -1, 1, 1;
  CHECK((op.matrix() - expected).norm() == 0.0);

  auto op1 = build_pauli_operator({term(1.0, {{1, PauliAxis::Z}}, 2)}, 2);
  Matrix expected1 = Matrix::Zero(4, 4);
  expected1.diagonal() << -1, 1, -1, 1;
  CHECK((op1.matrix() - expected1).norm() == 0.0);
}

TEST_CASE("random pauli sums are hermitian") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> axis(0, 2);
  int n = 4;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<PauliTerm> terms;
    for (int t = 0; t < 5; ++t) {
      std::vector<PauliFactor> factors;
      std::uniform_int_distribution<int> site(0, n - 1);
      int s1 = site(rng);
      int s2 = site(rng);
      factors.push_back({s1, static_cast<PauliAxis>(axis(rng))});
      if (s2 != s1) factors.push_back({s2, static_cast<PauliAxis>(axis(rng))});
      terms.push_back(term(coeff(rng), std::move(factors), n));
    }
    auto op = build_pauli_operator(terms, n);
    CHECK((op.matrix() - op.matrix().adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("pauli builder rejects malformed input") {
  CHECK_THROWS_AS(build_pauli_operator({term(1.0, {{0, PauliAxis::Z}}, 1)}, 15),
                  ConfigError);
  CHECK_THROWS_AS(build_pauli_operator({term(1.0, {{2, PauliAxis::Z}}, 2)}, 2),
                  ConfigError);
  CHECK_THROWS_AS(build_pauli_operator({term(1.0, {{-1, PauliAxis::Z}}, 2)}, 2),
                  ConfigError);
  CHECK_THROWS_AS(
      build_pauli_operator(
          {term(1.0, {{0, PauliAxis::Z}, {0, PauliAxis::X}}, 2)}, 2),
      ConfigError);
  CHECK_THROWS_AS(build_pauli_operator({term(1.0, {{0, PauliAxis::Z}}, 3)}, 2),
                  DimensionError);
  CHECK_THROWS_AS(build_pauli_operator({}, 0), ConfigError);
}

TEST_CASE("hermitian operator constructor validates its input") {
  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(HermitianOperator{bad}, ConfigError);

  Matrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(HermitianOperator{rect}, DimensionError);

  Matrix inf(2, 2);
  inf.setZero();
  inf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(HermitianOperator{inf}, ConfigError);

  // Near-hermitian input within tolerance is symmetrized, not rejected.
  Matrix nearly = pauli_x();
  nearly(0, 1) += Complex(0, 1e-15);
  HermitianOperator op(nearly);
  CHECK((op.matrix() - op.matrix().adjoint()).norm() == 0.0);
}

TEST_CASE("eigendecompose sorts eigenvalues ascending") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  auto spec = eigendecompose(HermitianOperator(d));
  CHECK(spec.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spec.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(spec.eigenvalues(2) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("eigendecompose reproduces the qubit spectrum") {
  double wx = 1.1, wz = 0.4, mu = 0.25;
  Matrix h = wx * pauli_x() + (wz + mu) * pauli_z();
  double v = std::hypot(wx, wz + mu);
  auto spec = eigendecompose(HermitianOperator(h));
  CHECK(spec.eigenvalues(0) == doctest::Approx(-v).epsilon(1e-14));
  CHECK(spec.eigenvalues(1) == doctest::Approx(v).epsilon(1e-14));
}

TEST_CASE("eigendecompose reconstructs the input across sizes") {
  std::mt19937_64 rng(7);
  for (int dim : {2, 3, 8, 17, 64}) {
    Matrix a = random_hermitian(rng, dim);
    auto spec = eigendecompose(HermitianOperator(a));
    Matrix rebuilt = spec.eigenvectors *
                     spec.eigenvalues.cast<Complex>().asDiagonal() *
                     spec.eigenvectors.adjoint();
    CHECK((rebuilt - 0.5 * (a + a.adjoint())).norm() < 1e-12 * std::max(a.norm(), 1.0));
    CHECK((spec.eigenvectors.adjoint() * spec.eigenvectors -
           Matrix::Identity(dim, dim))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("commutator norm matches hand computation") {
  // [sigma_x, sigma_z] = -2i sigma_y, squared Frobenius norm 8.
  HermitianOperator x(pauli_x());
  HermitianOperator z(pauli_z());
  CHECK(commutator_frobenius_sq(x, z) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(commutator_frobenius_sq(z, z) == 0.0);

  Matrix d1 = Matrix::Zero(3, 3);
  d1.diagonal() << 1, 2, 3;
  Matrix d2 = Matrix::Zero(3, 3);
  d2.diagonal() << -1, 5, 0;
  CHECK(commutator_frobenius_sq(HermitianOperator(d1), HermitianOperator(d2)) == 0.0);
}

TEST_CASE("commutator norm is symmetric and unitarily invariant") {
  std::mt19937_64 rng(23);
  Matrix a = random_hermitian(rng, 8);
  Matrix b = random_hermitian(rng, 8);
  HermitianOperator oa(a), ob(b);
  double ab = commutator_frobenius_sq(oa, ob);
  double ba = commutator_frobenius_sq(ob, oa);
  CHECK(ab == doctest::Approx(ba).epsilon(1e-12));

  Matrix u = eigendecompose(random_hermitian_op(rng, 8)).eigenvectors;
  HermitianOperator ua((u * a * u.adjoint()).eval());
  HermitianOperator ub((u * b * u.adjoint()).eval());
  CHECK(commutator_frobenius_sq(ua, ub) == doctest::Approx(ab).epsilon(1e-10));

  Matrix c = random_hermitian(rng, 5);
  CHECK_THROWS_AS(commutator_frobenius_sq(oa, HermitianOperator(c)), DimensionError);
}
