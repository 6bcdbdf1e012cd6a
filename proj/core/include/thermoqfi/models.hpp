#pragma once

#include "thermoqfi/gibbs.hpp"

namespace thermoqfi {

// H = omega_x sigma_x + (omega_z + mu) sigma_z on one qubit; the estimated
// parameter mu multiplies sigma_z. v is half the spectral width.
struct QubitModel {
    double omega_x = 0.0;
    double omega_z = 0.0;
    double mu = 0.0;

    double v() const;
};

ParamHamiltonian qubit_model(const QubitModel& m);

// F_mumu = tanh^2(beta v) omega_x^2 / v^4
//        + beta^2 (omega_z + mu)^2 / v^2 (1 - tanh^2(beta v)).
// v = 0 leaves the formula indeterminate; the direction-independent limit
// beta^2 is returned and *degenerate_limit is set when provided.
double qubit_qfi_closed_form(const QubitModel& m, double beta, bool* degenerate_limit = nullptr);

// Skew information of sigma_z: (1 - sech(beta v)) omega_x^2 / v^2.
double qubit_skew_closed_form(const QubitModel& m, double beta, bool* degenerate_limit = nullptr);

// n qubits with H = mu sum_j (sigma_z^j + 1) - lambda n prod_j sigma_x^j.
// The global flip pairs each bit string with its complement, so H splits
// into 2^(n-1) two-dimensional blocks indexed by Hamming weight:
// [[mu z, -lambda n], [-lambda n, -mu z]] + mu n with z = 2k - n.
struct GhzModel {
    int n = 2;
    double mu = 0.0;
    double lambda = 0.0;
    double beta = 0.0;
};

struct GhzResult {
    double log_Z = 0.0;    // log Z_beta of the full (unshifted) Hamiltonian
    double mean_Hmu = 0.0; // <mu sum_j (sigma_z^j + 1)>
    double var_Hmu = 0.0;
    double qfi_mu = 0.0;
    double skew_Hmu = 0.0; // skew information of the mu-term, energy units
};

// Exact block solver: O(n) over Hamming-weight classes with log-gamma
// binomial weights and log-sum-exp partition sums, valid to n = 64 at any
// beta that fits in a double.
GhzResult ghz_exact(const GhzModel& m);

// Dense 2^n realization of the same Hamiltonian, for cross-checks.
ParamHamiltonian ghz_dense_model(int n, double mu, double lambda, int qubit_cap = kDefaultQubitCap);

// Open chain H = mu sum_j sigma_z^j + lambda sum_j sigma_x^j sigma_x^(j+1)
// with parameters labeled "mu" and "lambda".
ParamHamiltonian spin_chain(int n, double mu, double lambda, int qubit_cap = kDefaultQubitCap);

// Generalized Gibbs model H0 + sum_l mu_l Q_l. Every charge must commute
// with H0 (relative commutator Frobenius norm <= 1e-10); charges need not
// commute with each other.
ParamHamiltonian charge_model(const HermitianOperator& h0, const std::vector<ParamTerm>& charges);

// True when all pairs of charges mutually commute within the same tolerance.
bool charges_commute(const std::vector<ParamTerm>& charges);

} // namespace thermoqfi
