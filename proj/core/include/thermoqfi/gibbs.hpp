#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermoqfi/operators.hpp"

namespace thermoqfi {

// Degeneracy tolerance defaults to this fraction of the spectral seminorm.
// Passing a negative tolerance to any routine below selects the default.
inline constexpr double kDegeneracyTolScale = 1e-10;

struct ParamTerm {
    std::string label;
    double mu = 0.0;
    HermitianOperator generator;
};

// H(mu) = H0 + sum_l mu_l A_l with uniquely labeled generators A_l.
class ParamHamiltonian {
public:
    ParamHamiltonian(std::optional<HermitianOperator> fixed_term, std::vector<ParamTerm> terms);

    int dim() const { return dim_; }
    const std::optional<HermitianOperator>& fixed_term() const { return fixed_term_; }
    const std::vector<ParamTerm>& terms() const { return terms_; }
    int term_index(const std::string& label) const; // -1 when absent

    HermitianOperator total() const;
    ParamHamiltonian with_mu(int term, double mu) const;

private:
    std::optional<HermitianOperator> fixed_term_;
    std::vector<ParamTerm> terms_;
    int dim_ = 0;
};

// Populations are kept in log-domain: log p_j = -beta(w_j - w_min) - log S,
// so beta * seminorm up to at least 700 never overflows or silently
// denormalizes the state.
struct ThermalState {
    double beta = 0.0;
    SpectralDecomposition spectrum;
    RealVector log_populations;
    double partition_log = 0.0; // log Z_beta of the undecorated Hamiltonian
};

struct SpectralQuantities {
    double seminorm = 0.0; // max_j w_j - min_j w_j
    double min_gap = 0.0;  // smallest gap above the degeneracy tolerance, 0 if none
    bool fully_degenerate = false;
};

ThermalState thermal_state(const ParamHamiltonian& H, double beta);
ThermalState thermal_state(const HermitianOperator& H, double beta);

RealVector populations(const ThermalState& rho);
Matrix density_matrix(const ThermalState& rho);

// A rotated into the energy eigenbasis: V^dagger A V.
Matrix to_eigenbasis(const SpectralDecomposition& spectrum, const HermitianOperator& A);

// Cluster indices of the ascending eigenvalues; consecutive levels closer
// than tol land in the same cluster.
std::vector<int> degeneracy_groups(const RealVector& eigenvalues, double tol);

double expectation(const ThermalState& rho, const HermitianOperator& A);
double variance(const ThermalState& rho, const HermitianOperator& A);

// Wigner-Yanase skew information (1/2)||[sqrt(rho), A]||_2^2, evaluated in
// the eigenbasis with sqrt(rho) = diag(exp(log_p / 2)).
double skew_information(const ThermalState& rho, const HermitianOperator& A);

// variance(rho, A) - skew_information(rho, A), which equals
// sum_jk sqrt(p_j p_k) |dA_jk|^2 termwise. The direct subtraction cancels
// catastrophically once the classical share drops below variance * 1e-16
// (deep in the ordered phase); this form stays exact there.
double classical_fluctuation(const ThermalState& rho, const HermitianOperator& A);

SpectralQuantities spectral_quantities(const HermitianOperator& H, double degeneracy_tol = -1.0);
SpectralQuantities spectral_quantities(const SpectralDecomposition& spectrum,
                                       double degeneracy_tol = -1.0);

double resolve_degeneracy_tol(const RealVector& eigenvalues, double degeneracy_tol);

} // namespace thermoqfi
