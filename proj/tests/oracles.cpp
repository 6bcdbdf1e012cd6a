#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace testkit {

Matrix random_hermitian(std::mt19937_64& rng, int dim, double scale) {
  std::normal_distribution<double> gauss(0.0, scale);
  Matrix a(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      a(j, k) = thermoqfi::Complex(gauss(rng), gauss(rng));
    }
  }
  return 0.5 * (a + a.adjoint()).eval();
}

HermitianOperator random_hermitian_op(std::mt19937_64& rng, int dim, double scale) {
  return HermitianOperator(random_hermitian(rng, dim, scale));
}

ParamHamiltonian random_param_hamiltonian(std::mt19937_64& rng, int dim, int n_terms,
                                          bool with_fixed) {
  std::uniform_real_distribution<double> mu_mag(0.3, 1.5);
  std::bernoulli_distribution sign(0.5);
  std::vector<ParamTerm> terms;
  terms.reserve(static_cast<size_t>(n_terms));
  for (int l = 0; l < n_terms; ++l) {
    double mu = mu_mag(rng) * (sign(rng) ? 1.0 : -1.0);
    terms.push_back({"t" + std::to_string(l), mu, random_hermitian_op(rng, dim)});
  }
  std::optional<HermitianOperator> fixed;
  if (with_fixed) fixed = random_hermitian_op(rng, dim);
  return ParamHamiltonian(std::move(fixed), std::move(terms));
}

double beta_for_seminorm(const ParamHamiltonian& H, double target) {
  double s = thermoqfi::spectral_quantities(H.total()).seminorm;
  if (s <= 0.0) throw std::runtime_error("degenerate test Hamiltonian");
  return target / s;
}

namespace {

double adaptive_simpson_step(const std::function<double(double)>& f, double a, double b,
                             double fa, double fm, double fb, double whole, double tol,
                             int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  double fa = f(a);
  double fb = f(b);
  double fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

double miller_quadrature(const ThermalState& rho, const HermitianOperator& A,
                         double tol) {
  Matrix tilde = thermoqfi::to_eigenbasis(rho.spectrum, A);
  double mean = thermoqfi::expectation(rho, A);
  int dim = static_cast<int>(tilde.rows());
  const RealVector& lp = rho.log_populations;

  auto integrand = [&](double a) {
    double sum = 0.0;
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        double usq;
        if (j == k) {
          double c = tilde(j, j).real() - mean;
          usq = c * c;
        } else {
          usq = std::norm(tilde(j, k));
        }
        sum += std::exp(a * lp(j) + (1.0 - a) * lp(k)) * usq;
      }
    }
    return sum;
  };

  double integral = adaptive_simpson(integrand, 0.0, 1.0, tol * std::max(integrand(0.0), 1e-300));
  return rho.beta * rho.beta * integral;
}

Matrix drho_fd(const ParamHamiltonian& H, int term, double beta, double step) {
  double mu0 = H.terms().at(static_cast<size_t>(term)).mu;
  auto rho_at = [&](double mu) {
    return thermoqfi::density_matrix(thermoqfi::thermal_state(H.with_mu(term, mu), beta));
  };
  auto central = [&](double h) {
    return ((rho_at(mu0 + h) - rho_at(mu0 - h)) / (2.0 * h)).eval();
  };
  Matrix coarse = central(step);
  Matrix fine = central(0.5 * step);
  return ((4.0 * fine - coarse) / 3.0).eval();
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::runtime_error("slope fit needs at least two points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]);
    double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

} // namespace testkit
