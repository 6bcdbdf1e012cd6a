#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "thermoqfi/bounds.hpp"
#include "thermoqfi/errors.hpp"
#include "thermoqfi/models.hpp"

using namespace thermoqfi;
using testkit::random_hermitian;
using testkit::random_hermitian_op;
using testkit::random_param_hamiltonian;

namespace {

HermitianOperator diag_op(std::initializer_list<double> values) {
  int n = static_cast<int>(values.size());
  Matrix m = Matrix::Zero(n, n);
  int i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return HermitianOperator(std::move(m));
}

} // namespace

TEST_CASE("c1 matches its closed form and limits") {
  CHECK(c1_const(1.0, 0.0) == 0.25);
  CHECK(c1_const(0.0, 3.0) == 0.25);
  CHECK(c1_const(1e-9, 1.0) == 0.25);

  double t = std::tanh(1.0);
  CHECK(c1_const(2.0, 1.0) == doctest::Approx(t * t / 4.0).epsilon(1e-14));
  CHECK(c1_const(1.0, 50.0) * 2500.0 == doctest::Approx(1.0).epsilon(1e-6));

  double prev = 0.25;
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0, 40.0}) {
    double c = c1_const(1.0, x);
    CHECK(c > 0.0);
    CHECK(c < prev);
    prev = c;
  }
  CHECK_THROWS_AS(c1_const(-1.0, 1.0), ConfigError);
}

TEST_CASE("c2 matches its closed form, floor, and overflow guard") {
  CHECK(c2_const(1.0, 0.0) == 0.5);
  CHECK(c2_const(1e-10, 2.0) == 0.5);

  double x = 3.0;
  double expected = 2.0 * std::sinh(1.5) * std::tanh(1.5) / 9.0;
  CHECK(c2_const(1.0, x) == doctest::Approx(expected).epsilon(1e-14));

  // The floor of c2 over all arguments is above 0.42.
  double min_seen = 1e300;
  for (double lx = std::log(1e-6); lx <= std::log(200.0); lx += 0.01) {
    min_seen = std::min(min_seen, c2_const(1.0, std::exp(lx)));
  }
  CHECK(min_seen > 0.42);
  CHECK(min_seen < 0.5);

  // The asymptotic branch agrees with the exact form where both evaluate,
  // and survives past the point where sinh alone overflows.
  double exact_at_1339 = c2_const(1.0, 1339.0);
  double asym_at_1339 = std::exp(0.5 * 1339.0 - 2.0 * std::log(1339.0));
  CHECK(testkit::rel_err(asym_at_1339, exact_at_1339) < 1e-12);
  CHECK(std::isfinite(c2_const(1.0, 1430.0)));
  CHECK(c2_const(1.0, 1430.0) > 1e290);
}

TEST_CASE("variance bounds order correctly and tighten at high temperature") {
  double beta = 1.3, var = 0.8, dvar = 0.3;
  double s = 2.0, g = 0.5;
  auto vb = qfi_bounds_variance(beta, var, dvar, c1_const(beta, s), c1_const(beta, g));
  CHECK(vb.eq6_upper == doctest::Approx(beta * beta * var).epsilon(1e-14));
  CHECK(vb.eq6_lower <= vb.eq6_upper_refined);
  CHECK(vb.eq6_upper_refined <= vb.eq6_upper);

  // Commuting case: the diagonal-block variance equals the full variance and
  // the refined bound collapses onto the plain one.
  auto vb_comm = qfi_bounds_variance(beta, var, var, c1_const(beta, s), c1_const(beta, g));
  CHECK(vb_comm.eq6_upper_refined == doctest::Approx(vb_comm.eq6_upper).epsilon(1e-14));

  // At beta * seminorm = 1e-4 the two-sided variance bound pinches shut.
  double c1_tiny = c1_const(1e-4, 1.0);
  auto vb_hot = qfi_bounds_variance(1e-4, var, dvar, c1_tiny, c1_tiny);
  CHECK(vb_hot.eq6_lower / vb_hot.eq6_upper == doctest::Approx(1.0).epsilon(1e-3));

  auto vb_zero = qfi_bounds_variance(0.0, var, dvar, 0.25, 0.25);
  CHECK(vb_zero.eq6_upper == 0.0);
  CHECK(vb_zero.eq6_lower == 0.0);
}

TEST_CASE("skew bounds reproduce the qubit limits") {
  double wx = 0.9, wz = 0.2, mu = 0.15;
  QubitModel model{wx, wz, mu};
  double v = model.v();

  // Low temperature: upper bound approaches 19.2 wx^2 / s^4 with s = 2v.
  // The classical share is ~ sech(beta v) * variance here, far below the
  // resolution of the direct subtraction, so it must come from the stable
  // pairwise form.
  {
    double beta = 50.0 / v;
    auto rho = thermal_state(qubit_model(model), beta);
    double classical = classical_fluctuation(rho, diag_op({-1.0, 1.0}));
    double c2 = c2_const(beta, 2.0 * v);
    auto sb = skew_bounds_from_classical(beta, classical, c2);
    double s = 2.0 * v;
    CHECK(testkit::rel_err(sb.eq7_upper, 19.2 * wx * wx / (s * s * s * s)) < 1e-8);
  }

  // High temperature: eq7_upper -> 1.2 beta^2 and eq7_lower -> 0.8 beta^2.
  {
    double beta = 5e-3 / v;
    auto rho = thermal_state(qubit_model(model), beta);
    double var = variance(rho, diag_op({-1.0, 1.0}));
    double skew = skew_information(rho, diag_op({-1.0, 1.0}));
    double c2 = c2_const(beta, 2.0 * v);
    auto sb = qfi_bounds_skew(beta, var, skew, c2);
    CHECK(sb.eq7_upper / (beta * beta) > 1.19);
    CHECK(sb.eq7_upper / (beta * beta) < 1.21);
    CHECK(sb.eq7_lower / (beta * beta) > 0.79);
    CHECK(sb.eq7_lower / (beta * beta) < 0.81);
    CHECK(testkit::rel_err(sb.eq7_upper / sb.eq7_lower, 3.0 * c2) < 1e-12);
    CHECK(testkit::rel_err(3.0 * c2, 1.5) < 1e-3);
  }

  // Fully quantum fluctuations: both bounds collapse to zero.
  auto sb0 = qfi_bounds_skew(2.0, 0.7, 0.7, 0.5);
  CHECK(sb0.eq7_upper == 0.0);
  CHECK(sb0.eq7_lower == 0.0);
}

TEST_CASE("diagonal block variance interpolates between commuting and generic") {
  std::mt19937_64 rng(211);
  auto h = diag_op({0.0, 0.8, 1.7, 2.9});
  auto rho = thermal_state(h, 1.1);

  auto a_diag = diag_op({0.4, -0.2, 1.0, 0.1});
  CHECK(testkit::rel_err(diagonal_block_variance(rho, a_diag), variance(rho, a_diag)) <
        1e-12);

  auto a = random_hermitian_op(rng, 4);
  double dvar = diagonal_block_variance(rho, a);
  CHECK(dvar >= 0.0);
  CHECK(dvar <= variance(rho, a) * (1.0 + 1e-12));

  // With a fully degenerate spectrum every pair is in-block.
  auto rho_flat = thermal_state(diag_op({1.0, 1.0, 1.0, 1.0}), 2.0);
  CHECK(testkit::rel_err(diagonal_block_variance(rho_flat, a), variance(rho_flat, a)) <
        1e-12);
}

TEST_CASE("miller bound reduces to the variance bound in the commuting case") {
  auto h = diag_op({0.1, 0.9, 2.0});
  auto a = diag_op({1.0, -0.4, 0.3});
  double beta = 1.7;
  auto rho = thermal_state(h, beta);
  CHECK(testkit::rel_err(miller_bound(rho, a), beta * beta * variance(rho, a)) < 1e-12);
}

TEST_CASE("miller bound matches independent quadrature") {
  std::mt19937_64 rng(223);
  for (int rep = 0; rep < 5; ++rep) {
    int dim = (rep < 3) ? 4 : 6;
    auto h = random_hermitian_op(rng, dim);
    auto a = random_hermitian_op(rng, dim);
    double beta = 0.4 + 0.8 * rep;
    auto rho = thermal_state(h, beta);
    double closed = miller_bound(rho, a);
    double quad = testkit::miller_quadrature(rho, a);
    CHECK(testkit::rel_err(closed, quad) < 1e-8);
  }
}

TEST_CASE("miller bound never exceeds the plain variance bound") {
  std::mt19937_64 rng(227);
  for (int rep = 0; rep < 40; ++rep) {
    int dim = 2 + static_cast<int>(rng() % 9);
    auto H = random_param_hamiltonian(rng, dim, 1);
    double target = std::exp(std::log(1e-2) + (std::log(30.0) - std::log(1e-2)) *
                                                  (rep / 39.0));
    double beta = testkit::beta_for_seminorm(H, target);
    auto rho = thermal_state(H, beta);
    const auto& a = H.terms()[0].generator;
    double m = miller_bound(rho, a);
    double upper = beta * beta * variance(rho, a);
    double f = qfi_matrix(rho, {a}).values(0, 0);
    CHECK(m <= upper * (1.0 + 1e-9));
    CHECK(f <= m * (1.0 + 1e-9));
  }
}

TEST_CASE("skew and miller upper bounds cross along the chain sweep") {
  auto H = spin_chain(5, 0.2, 1.0);
  int skew_tighter = 0;
  int miller_tighter = 0;
  for (int i = 0; i < 12; ++i) {
    double beta = std::exp(std::log(1e-2) + (std::log(10.0) - std::log(1e-2)) * (i / 11.0));
    auto rho = thermal_state(H, beta);
    auto report = bound_report(rho, H, 1.0, 0.1);
    for (const auto& p : report.params) {
      if (p.eq7_upper < p.miller_upper) ++skew_tighter;
      if (p.miller_upper < p.eq7_upper) ++miller_tighter;
      CHECK(p.miller_upper <= p.eq6_upper * (1.0 + 1e-9));
    }
  }
  CHECK(skew_tighter > 0);
  CHECK(miller_tighter > 0);
}

TEST_CASE("relative error bounds bracket the exact optimum") {
  std::mt19937_64 rng(229);
  for (int rep = 0; rep < 20; ++rep) {
    int dim = 2 + static_cast<int>(rng() % 7);
    auto H = random_param_hamiltonian(rng, dim, 1);
    double beta = testkit::beta_for_seminorm(H, 0.3 + 0.25 * rep);
    auto rho = thermal_state(H, beta);
    const auto& term = H.terms()[0];
    double f = qfi_matrix(rho, {term.generator}).values(0, 0);
    if (f <= 0.0) continue;

    double n_samples = 7.0;
    double var_H = term.mu * term.mu * variance(rho, term.generator);
    double skew_H = term.mu * term.mu * skew_information(rho, term.generator);
    auto sq = spectral_quantities(rho.spectrum);
    auto re = relative_error_bounds(beta, n_samples, term.mu, var_H, skew_H,
                                    c1_const(beta, sq.seminorm), c2_const(beta, sq.seminorm));
    REQUIRE(re.estimable);

    double exact = 1.0 / (std::abs(term.mu) * std::sqrt(n_samples * f));
    CHECK(exact >= re.eq9_lower * (1.0 - 1e-9));
    CHECK(exact <= re.eq9_upper * (1.0 + 1e-9));
    CHECK(exact >= re.eq10_lower * (1.0 - 1e-9));
    CHECK(exact <= re.eq10_upper * (1.0 + 1e-9));
  }
}

TEST_CASE("relative error bounds scale as the square root of the sample count") {
  auto re1 = relative_error_bounds(1.2, 1.0, 0.4, 0.9, 0.2, 0.2, 0.45);
  auto re9 = relative_error_bounds(1.2, 9.0, 0.4, 0.9, 0.2, 0.2, 0.45);
  CHECK(re9.eq9_lower == doctest::Approx(re1.eq9_lower / 3.0).epsilon(1e-14));
  CHECK(re9.eq9_upper == doctest::Approx(re1.eq9_upper / 3.0).epsilon(1e-14));
  CHECK(re9.eq10_lower == doctest::Approx(re1.eq10_lower / 3.0).epsilon(1e-14));
  CHECK(re9.eq10_upper == doctest::Approx(re1.eq10_upper / 3.0).epsilon(1e-14));
}

TEST_CASE("relative error bounds pinch onto 1/(mu beta dH) at high temperature") {
  QubitModel model{0.9, 0.2, 0.15};
  double v = model.v();
  double beta = 1e-4 / v;
  auto H = qubit_model(model);
  auto rho = thermal_state(H, beta);
  double f = qfi_matrix(rho, H).values(0, 0);
  double exact = 1.0 / (model.mu * std::sqrt(f));
  double var_H = model.mu * model.mu * variance(rho, diag_op({-1.0, 1.0}));
  double dH = std::sqrt(var_H);
  CHECK(testkit::rel_err(exact, 1.0 / (beta * dH)) < 1e-3);
}

TEST_CASE("relative error bounds reject or flag degenerate input") {
  CHECK_THROWS_AS(relative_error_bounds(1.0, 1.0, 0.0, 0.5, 0.1, 0.2, 0.45), ConfigError);
  CHECK_THROWS_AS(relative_error_bounds(1.0, 0.5, 0.3, 0.5, 0.1, 0.2, 0.45), ConfigError);
  auto re = relative_error_bounds(1.0, 1.0, 0.3, 0.0, 0.0, 0.2, 0.45);
  CHECK_FALSE(re.estimable);
  CHECK(std::isnan(re.eq9_lower));
  CHECK(std::isnan(re.eq10_upper));
}

TEST_CASE("multiparameter bounds reproduce hand-computed values") {
  QfiMatrix F;
  F.labels = {"a", "b"};
  F.values = Eigen::MatrixXd::Zero(2, 2);
  F.values << 2.0, 0.0, 0.0, 5.0;
  double eps = 0.05, beta = 1.5, c2 = 0.45;
  auto mb = multiparam_bounds(F, eps, beta, {0.7, 0.7}, {0.2, 0.2}, c2, 1.0);
  REQUIRE(mb.positive_definite);
  CHECK(mb.trace_inv_qfi == doctest::Approx(0.5 + 0.2).epsilon(1e-14));
  CHECK(mb.sum_inv_diag == doctest::Approx(0.5 + 0.2).epsilon(1e-14));

  double prefactor = 1.0 / (beta * beta * eps * eps);
  double classical = 0.7 - 0.2;
  CHECK(mb.sample_lower_eq13a ==
        doctest::Approx(prefactor * 2.0 * (0.5 / c2) / classical).epsilon(1e-12));
  CHECK(mb.sample_lower_eq13b ==
        doctest::Approx(prefactor * 2.0 / 0.7).epsilon(1e-12));
  CHECK(mb.sample_lower_eq14 ==
        doctest::Approx(prefactor * 2.0 / 0.7).epsilon(1e-12));
}

TEST_CASE("multiparameter bounds flag non positive definite input") {
  QfiMatrix F;
  F.labels = {"a", "b"};
  F.values = Eigen::MatrixXd::Zero(2, 2);
  auto mb = multiparam_bounds(F, 0.1, 1.0, {0.5, 0.5}, {0.1, 0.1}, 0.45, 1.0);
  CHECK_FALSE(mb.positive_definite);
  CHECK(std::isnan(mb.trace_inv_qfi));
  CHECK(std::isnan(mb.sum_inv_diag));

  CHECK_THROWS_AS(multiparam_bounds(F, 0.1, 1.0, {0.5}, {0.1, 0.1}, 0.45, 1.0),
                  DimensionError);
  CHECK_THROWS_AS(multiparam_bounds(F, 0.0, 1.0, {0.5, 0.5}, {0.1, 0.1}, 0.45, 1.0),
                  ConfigError);
}

TEST_CASE("bound report satisfies every sandwich on random instances") {
  std::mt19937_64 rng(233);
  for (int rep = 0; rep < 60; ++rep) {
    int dim = 2 + static_cast<int>(rng() % 15);
    int n_terms = 1 + static_cast<int>(rng() % 3);
    auto H = random_param_hamiltonian(rng, dim, n_terms);
    double target = std::exp(std::log(1e-3) + (std::log(50.0) - std::log(1e-3)) *
                                                  (rep / 59.0));
    double beta = testkit::beta_for_seminorm(H, target);
    auto rho = thermal_state(H, beta);
    BoundReport report;
    REQUIRE_NOTHROW(report = bound_report(rho, H, 4.0, 0.05));
    REQUIRE(report.params.size() == static_cast<size_t>(n_terms));
    for (const auto& p : report.params) {
      CHECK(p.eq6_lower <= p.qfi_exact * (1.0 + 1e-9) + 1e-12);
      CHECK(p.qfi_exact <= p.eq6_upper * (1.0 + 1e-9) + 1e-12);
      CHECK(p.qfi_exact <= p.eq6_upper_refined * (1.0 + 1e-9) + 1e-12);
      CHECK(p.eq7_lower <= p.qfi_exact * (1.0 + 1e-9) + 1e-12);
      CHECK(p.qfi_exact <= p.eq7_upper * (1.0 + 1e-9) + 1e-12);
      CHECK(p.qfi_exact <= p.miller_upper * (1.0 + 1e-9) + 1e-12);
      CHECK(p.rel_err.estimable);
      CHECK(p.rel_err.eq9_lower <= p.rel_err.eq9_upper);
      CHECK(p.rel_err.eq10_lower <= p.rel_err.eq10_upper);
    }
    CHECK(report.context.c2 >= 0.42);
    CHECK(report.context.c1_seminorm <= 0.25);
  }
}

TEST_CASE("bound report handles the infinite temperature corner") {
  std::mt19937_64 rng(239);
  auto H = random_param_hamiltonian(rng, 4, 2);
  auto rho = thermal_state(H, 0.0);
  auto report = bound_report(rho, H, 1.0, 0.1);
  for (const auto& p : report.params) {
    CHECK(p.qfi_exact == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.eq6_upper == 0.0);
    CHECK_FALSE(p.rel_err.estimable);
  }
  CHECK_FALSE(report.multi.positive_definite);
}
