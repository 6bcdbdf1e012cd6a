#pragma once

#include <functional>
#include <string>
#include <vector>

#include "thermoqfi/gibbs.hpp"

namespace thermoqfi {

struct QfiMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd values; // symmetric, positive semidefinite
};

struct SldOperator {
    std::string label;
    HermitianOperator op;
};

// Quantum Fisher information matrix of the thermal state in the energy
// eigenbasis. Pairs in distinct degeneracy clusters contribute
//   2 (p_j + p_k) tanh^2(beta (w_k - w_j)/2) / (w_j - w_k)^2,
// which equals 2 (p_j - p_k)^2 / ((p_j + p_k)(w_j - w_k)^2) exactly but
// survives large beta where the raw population difference underflows.
// Pairs inside one cluster (including j = k) contribute beta^2 (p_j + p_k)/2.
QfiMatrix qfi_matrix(const ThermalState& rho, const std::vector<HermitianOperator>& generators,
                     const std::vector<std::string>& labels = {}, double degeneracy_tol = -1.0);
QfiMatrix qfi_matrix(const ThermalState& rho, const ParamHamiltonian& H,
                     double degeneracy_tol = -1.0);

// Symmetric logarithmic derivative for one generator:
// 2 tanh(beta (w_k - w_j)/2)/(w_j - w_k) * dA_jk across clusters and
// -beta * dA_jk inside a cluster (diagonal included), rotated back.
SldOperator sld(const ThermalState& rho, const HermitianOperator& generator,
                std::string label = {}, double degeneracy_tol = -1.0);

// tr(rho [L_l, L_m]) evaluated directly from the populations:
//   4 sum_{w_j != w_k} (p_j + p_k) tanh^3(beta (w_k - w_j)/2) / (w_j - w_k)^2
//     * <j|A_l|k><k|A_m|j>.
// The commutator of two Hermitian operators is anti-Hermitian, so the trace
// is purely imaginary; the returned real number is its imaginary part, and
// the residual real part is asserted negligible. Antisymmetric in (l, m);
// zero exactly when the quantum Cramer-Rao bound for the pair is saturable.
double saturability(const ThermalState& rho, const HermitianOperator& A_l,
                    const HermitianOperator& A_m, double degeneracy_tol = -1.0);

using DensityMap = std::function<Matrix(const RealVector&)>;

// mu -> density matrix of the thermal state of H(mu) at fixed beta.
DensityMap thermal_density_map(const ParamHamiltonian& H, double beta);

struct CfiOptions {
    double step = -1.0; // default 1e-5 * max(1, |mu_l|)
    bool richardson = false;
};

struct CfiDetail {
    double excluded_mass = 0.0; // total probability of outcomes below the floor
    int excluded_count = 0;
};

// Classical Fisher information of the projective measurement defined by the
// columns of `basis`, with central finite differences in parameter l.
// Outcomes with probability below 1e-14 are excluded and reported.
double classical_fisher_projective(const DensityMap& rho_fn, const RealVector& mu0, int l,
                                   const Matrix& basis, CfiOptions opts = {},
                                   CfiDetail* detail = nullptr);

// Uhlmann fidelity tr|sqrt(rho_b) sqrt(rho_a)|, computed as the sum of the
// singular values of sqrt(rho_b) sqrt(rho_a). The eigendecomposition form
// sqrt(eig(...)) amplifies roundoff on near-zero populations; the singular
// value form does not.
double uhlmann_fidelity(const ThermalState& a, const ThermalState& b);

// Independent verification oracle: 8 (1 - Fid(rho(mu), rho(mu + eps)))/eps^2.
// The fidelity expansion carries a cubic term, so the raw value has a bias
// linear in eps; the companion _richardson form cancels it with one halving.
// Requires eps in [1e-5, 2e-2] * max(1, |mu_l|). The fidelity drop per step
// is F eps^2 / 8, so nearly parameter-insensitive states (small F) need the
// top of that window to lift the drop above the fidelity's roundoff floor;
// eps ~ sqrt(1e-6 / F) keeps both truncation and noise near 1e-7 relative.
double qfi_fidelity_oracle(const ParamHamiltonian& H, int term, double beta, double eps);

// 2 G(eps/2) - G(eps); requires eps in [2e-5, 2e-2] * max(1, |mu_l|) so the
// halved step stays inside the oracle's validated window.
double qfi_fidelity_oracle_richardson(const ParamHamiltonian& H, int term, double beta,
                                      double eps);

} // namespace thermoqfi
