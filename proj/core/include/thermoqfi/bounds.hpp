#pragma once

#include <string>
#include <vector>

#include "thermoqfi/qfi.hpp"

namespace thermoqfi {

// c1(beta, gap) = tanh^2(beta gap / 2) / (beta gap)^2, in (0, 1/4].
// Returns the series limit 1/4 exactly when beta * gap < 1e-8.
double c1_const(double beta, double gap);

// c2(beta, s) = 2 sinh(beta s / 2) tanh(beta s / 2) / (beta s)^2, >= 0.42.
// Returns the series limit 1/2 exactly when beta * s < 1e-8.
double c2_const(double beta, double seminorm);

struct VarianceBounds {
    double eq6_upper = 0.0;         // beta^2 (dA)^2
    double eq6_upper_refined = 0.0; // 4 c1(g_min) beta^2 (dA)^2 + (1 - 4 c1(g_min)) beta^2 (dA^D)^2
    double eq6_lower = 0.0;         // 4 c1(seminorm) beta^2 (dA)^2
};

VarianceBounds qfi_bounds_variance(double beta, double variance, double diag_variance,
                                   double c1_seminorm, double c1_mingap);

struct SkewBounds {
    double eq7_upper = 0.0; // 2.4 c2 beta^2 (variance - skew)
    double eq7_lower = 0.0; // 0.8 beta^2 (variance - skew)
};

SkewBounds qfi_bounds_skew(double beta, double variance, double skew, double c2);

// Same bounds with the classical share variance - skew supplied directly,
// e.g. from classical_fluctuation, which stays exact where the subtraction
// above loses all digits.
SkewBounds skew_bounds_from_classical(double beta, double classical, double c2);

// Variance of A restricted to its energy-diagonal blocks: cross-cluster
// matrix elements are zeroed in the eigenbasis before taking moments.
double diagonal_block_variance(const ThermalState& rho, const HermitianOperator& A,
                               double degeneracy_tol = -1.0);

// beta^2 integral_0^1 tr(rho^a dA rho^(1-a) dA) da in closed form:
// the pair (j, k) integrates to the logarithmic mean of (p_j, p_k), computed
// as p_j expm1(d)/d with d = log p_k - log p_j, which degrades gracefully to
// p_j as d -> 0. Equal populations (same degeneracy cluster) contribute p_j.
double miller_bound(const ThermalState& rho, const HermitianOperator& A,
                    double degeneracy_tol = -1.0);

struct RelativeErrorBounds {
    double eq9_lower = 0.0;  // 1 / (beta sqrt(N) dH_l)
    double eq9_upper = 0.0;  // 1 / (2 beta sqrt(c1) sqrt(N) dH_l)
    double eq10_lower = 0.0; // 1 / (beta sqrt(2.4 c2 N ((dH_l)^2 - skew_Hl)))
    double eq10_upper = 0.0; // 1 / (beta sqrt(0.8 N ((dH_l)^2 - skew_Hl)))
    bool estimable = true;   // false when the variance vanishes
};

// Bounds on the optimal relative error sqrt(var(mu_hat))/|mu_l| from N
// copies. variance_Hl and skew_Hl are in energy units: (dH_l)^2 = mu_l^2 (dA_l)^2.
// classical_Hl, when nonnegative, replaces variance_Hl - skew_Hl in the
// eq10 bounds (pass mu_l^2 * classical_fluctuation to avoid cancellation).
RelativeErrorBounds relative_error_bounds(double beta, double n_samples, double mu_l,
                                          double variance_Hl, double skew_Hl,
                                          double c1_seminorm, double c2,
                                          double classical_Hl = -1.0);

struct MultiparamBounds {
    double trace_inv_qfi = 0.0;      // (1/N) tr(F^-1), NaN when F is not positive definite
    double sum_inv_diag = 0.0;       // (1/N) sum_l 1/F_ll
    double sample_lower_eq13a = 0.0; // (1/(beta^2 eps^2)) sum_l (c2^-1/2)/((dA_l)^2 - skew_l)
    double sample_lower_eq13b = 0.0; // (1/(beta^2 eps^2)) sum_l 1/(dA_l)^2
    double sample_lower_eq14 = 0.0;  // M/(beta^2 eps^2) min_l 1/(dA_l)^2
    bool positive_definite = false;
};

// classicals, when nonempty, replaces variances[l] - skews[l] in the eq13a
// sum; it must then match the parameter count.
MultiparamBounds multiparam_bounds(const QfiMatrix& F, double eps_err, double beta,
                                   const std::vector<double>& variances,
                                   const std::vector<double>& skews, double c2,
                                   double n_samples = 1.0,
                                   const std::vector<double>& classicals = {});

struct ParamBounds {
    std::string label;
    double mu = 0.0;
    double qfi_exact = 0.0;
    double variance = 0.0;
    double skew = 0.0;
    double diag_variance = 0.0;
    double eq6_upper = 0.0;
    double eq6_upper_refined = 0.0;
    double eq6_lower = 0.0;
    double eq7_upper = 0.0;
    double eq7_lower = 0.0;
    double miller_upper = 0.0;
    RelativeErrorBounds rel_err;
};

struct BoundContext {
    double beta = 0.0;
    double seminorm = 0.0;
    double min_gap = 0.0;
    double c1_seminorm = 0.0;
    double c1_mingap = 0.0;
    double c2 = 0.0;
    double n_samples = 1.0;
    double eps_err = 0.0;
};

struct BoundReport {
    std::vector<ParamBounds> params;
    MultiparamBounds multi;
    BoundContext context;
};

// Full per-parameter and multiparameter report. The sandwich relations
// eq6_lower <= F_ll <= eq6_upper, eq7_lower <= F_ll <= eq7_upper,
// F_ll <= miller_upper and eq6_upper_refined <= eq6_upper are verified with
// 1e-9 relative slack; a violation is a bug and raises NumericalError.
BoundReport bound_report(const ThermalState& rho, const ParamHamiltonian& H, double n_samples,
                         double eps_err, double degeneracy_tol = -1.0);

} // namespace thermoqfi
