#include "thermoqfi/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace thermoqfi {

ParamHamiltonian::ParamHamiltonian(std::optional<HermitianOperator> fixed_term,
                                   std::vector<ParamTerm> terms)
    : fixed_term_(std::move(fixed_term)), terms_(std::move(terms)) {
    if (!fixed_term_ && terms_.empty()) {
        throw ConfigError("parameterized Hamiltonian needs a fixed term or at least one generator");
    }
    dim_ = fixed_term_ ? fixed_term_->dim() : terms_.front().generator.dim();
    std::set<std::string> labels;
    for (const ParamTerm& t : terms_) {
        if (t.generator.dim() != dim_) {
            throw DimensionError("generator '" + t.label + "' has dim " +
                                 std::to_string(t.generator.dim()) + ", expected " +
                                 std::to_string(dim_));
        }
        if (!labels.insert(t.label).second) {
            throw ConfigError("duplicate parameter label '" + t.label + "'");
        }
    }
}

int ParamHamiltonian::term_index(const std::string& label) const {
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].label == label) return static_cast<int>(i);
    }
    return -1;
}

HermitianOperator ParamHamiltonian::total() const {
    Matrix sum = fixed_term_ ? fixed_term_->matrix() : Matrix::Zero(dim_, dim_).eval();
    for (const ParamTerm& t : terms_) {
        sum += t.mu * t.generator.matrix();
    }
    return HermitianOperator(std::move(sum));
}

ParamHamiltonian ParamHamiltonian::with_mu(int term, double mu) const {
    if (term < 0 || term >= static_cast<int>(terms_.size())) {
        throw ConfigError("term index " + std::to_string(term) + " out of range");
    }
    std::vector<ParamTerm> updated = terms_;
    updated[static_cast<size_t>(term)].mu = mu;
    return ParamHamiltonian(fixed_term_, std::move(updated));
}

ThermalState thermal_state(const HermitianOperator& H, double beta) {
    if (beta < 0.0 || !std::isfinite(beta)) {
        throw ConfigError("inverse temperature must be finite and nonnegative, got " +
                          std::to_string(beta));
    }
    ThermalState rho;
    rho.beta = beta;
    rho.spectrum = eigendecompose(H);

    const RealVector& w = rho.spectrum.eigenvalues;
    const double w_min = w(0);
    // Shift by the ground energy before exponentiating; the largest exponent
    // is then 0 and the sum S sits in [1, d].
    RealVector shifted = -beta * (w.array() - w_min);
    const double S = shifted.array().exp().sum();
    rho.log_populations = shifted.array() - std::log(S);
    rho.partition_log = -beta * w_min + std::log(S);

    if (!rho.log_populations.allFinite() || !std::isfinite(rho.partition_log)) {
        throw NumericalError("thermal state populations are non-finite at beta = " +
                             std::to_string(beta));
    }
    return rho;
}

ThermalState thermal_state(const ParamHamiltonian& H, double beta) {
    return thermal_state(H.total(), beta);
}

RealVector populations(const ThermalState& rho) {
    return rho.log_populations.array().exp();
}

Matrix density_matrix(const ThermalState& rho) {
    const RealVector p = populations(rho);
    return rho.spectrum.eigenvectors * p.asDiagonal() * rho.spectrum.eigenvectors.adjoint();
}

Matrix to_eigenbasis(const SpectralDecomposition& spectrum, const HermitianOperator& A) {
    if (A.dim() != spectrum.eigenvalues.size()) {
        throw DimensionError("operator dim " + std::to_string(A.dim()) +
                             " does not match spectrum dim " +
                             std::to_string(spectrum.eigenvalues.size()));
    }
    return spectrum.eigenvectors.adjoint() * A.matrix() * spectrum.eigenvectors;
}

std::vector<int> degeneracy_groups(const RealVector& eigenvalues, double tol) {
    std::vector<int> groups(static_cast<size_t>(eigenvalues.size()));
    int g = 0;
    for (long j = 1; j < eigenvalues.size(); ++j) {
        if (eigenvalues(j) - eigenvalues(j - 1) > tol) ++g;
        groups[static_cast<size_t>(j)] = g;
    }
    return groups;
}

double resolve_degeneracy_tol(const RealVector& eigenvalues, double degeneracy_tol) {
    if (degeneracy_tol >= 0.0) return degeneracy_tol;
    const double seminorm = eigenvalues(eigenvalues.size() - 1) - eigenvalues(0);
    return kDegeneracyTolScale * seminorm;
}

double expectation(const ThermalState& rho, const HermitianOperator& A) {
    const Matrix At = to_eigenbasis(rho.spectrum, A);
    const RealVector p = populations(rho);
    return (p.array() * At.diagonal().real().array()).sum();
}

double variance(const ThermalState& rho, const HermitianOperator& A) {
    const Matrix At = to_eigenbasis(rho.spectrum, A);
    const RealVector p = populations(rho);
    const double mean = (p.array() * At.diagonal().real().array()).sum();
    // <A^2> = sum_j p_j sum_k |At_jk|^2, the row sums of the squared moduli.
    const RealVector row_sq = At.cwiseAbs2().rowwise().sum();
    const double second = (p.array() * row_sq.array()).sum();
    const double var = second - mean * mean;
    const double scale = std::max(1.0, second + mean * mean);
    if (var < -1e-12 * scale) {
        throw NumericalError("variance came out negative beyond tolerance: " +
                             std::to_string(var));
    }
    return std::max(var, 0.0);
}

double skew_information(const ThermalState& rho, const HermitianOperator& A) {
    const Matrix At = to_eigenbasis(rho.spectrum, A);
    const RealVector sqrt_p = (rho.log_populations.array() / 2.0).exp();
    double skew = 0.0;
    const long d = sqrt_p.size();
    for (long j = 0; j < d; ++j) {
        for (long k = 0; k < d; ++k) {
            const double diff = sqrt_p(j) - sqrt_p(k);
            skew += 0.5 * diff * diff * std::norm(At(j, k));
        }
    }
    return skew;
}

double classical_fluctuation(const ThermalState& rho, const HermitianOperator& A) {
    const Matrix At = to_eigenbasis(rho.spectrum, A);
    const RealVector p = populations(rho);
    const RealVector& lp = rho.log_populations;
    const double mean = (p.array() * At.diagonal().real().array()).sum();
    double total = 0.0;
    const long d = lp.size();
    for (long j = 0; j < d; ++j) {
        for (long k = 0; k < d; ++k) {
            const double elem_sq =
                (j == k) ? std::norm(At(j, j) - mean) : std::norm(At(j, k));
            if (elem_sq == 0.0) continue;
            total += std::exp(0.5 * (lp(j) + lp(k))) * elem_sq;
        }
    }
    return total;
}

SpectralQuantities spectral_quantities(const SpectralDecomposition& spectrum,
                                       double degeneracy_tol) {
    const RealVector& w = spectrum.eigenvalues;
    const double tol = resolve_degeneracy_tol(w, degeneracy_tol);
    SpectralQuantities out;
    out.seminorm = w(w.size() - 1) - w(0);
    out.min_gap = std::numeric_limits<double>::infinity();
    for (long j = 1; j < w.size(); ++j) {
        const double gap = w(j) - w(j - 1);
        if (gap > tol) out.min_gap = std::min(out.min_gap, gap);
    }
    if (!std::isfinite(out.min_gap)) {
        out.min_gap = 0.0;
        out.fully_degenerate = true;
    }
    return out;
}

SpectralQuantities spectral_quantities(const HermitianOperator& H, double degeneracy_tol) {
    SpectralDecomposition spectrum = eigendecompose(H);
    return spectral_quantities(spectrum, degeneracy_tol);
}

} // namespace thermoqfi
