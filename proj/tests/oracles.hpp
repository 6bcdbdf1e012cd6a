#pragma once

#include <random>
#include <vector>

#include "thermoqfi/bounds.hpp"
#include "thermoqfi/gibbs.hpp"
#include "thermoqfi/qfi.hpp"

namespace testkit {

using thermoqfi::HermitianOperator;
using thermoqfi::Matrix;
using thermoqfi::ParamHamiltonian;
using thermoqfi::ParamTerm;
using thermoqfi::RealVector;
using thermoqfi::ThermalState;

Matrix random_hermitian(std::mt19937_64& rng, int dim, double scale = 1.0);
HermitianOperator random_hermitian_op(std::mt19937_64& rng, int dim, double scale = 1.0);

// Random H = H0 + sum_l mu_l A_l with mu_l drawn away from zero so relative
// error bounds stay well defined.
ParamHamiltonian random_param_hamiltonian(std::mt19937_64& rng, int dim, int n_terms,
                                          bool with_fixed = true);

// Beta that realizes a target beta * seminorm for the given Hamiltonian.
double beta_for_seminorm(const ParamHamiltonian& H, double target);

// Numerical quadrature of beta^2 integral_0^1 tr(rho^a dA rho^(1-a) dA) da
// by adaptive Simpson; the independent check for the closed-form bound.
double miller_quadrature(const ThermalState& rho, const HermitianOperator& A,
                         double tol = 1e-11);

// Richardson-extrapolated central difference of the density matrix in
// parameter `term`.
Matrix drho_fd(const ParamHamiltonian& H, int term, double beta, double step);

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

double rel_err(double value, double reference);

} // namespace testkit
