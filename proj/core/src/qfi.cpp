#include "thermoqfi/qfi.hpp"

#include <algorithm>
#include <cmath>

namespace thermoqfi {

namespace {

struct EigenbasisGenerators {
    std::vector<Matrix> delta; // V^dagger A_l V with <A_l> removed from the diagonal
    std::vector<double> means;
};

EigenbasisGenerators rotate_and_center(const ThermalState& rho,
                                       const std::vector<HermitianOperator>& generators) {
    EigenbasisGenerators out;
    const RealVector p = populations(rho);
    for (const HermitianOperator& A : generators) {
        Matrix At = to_eigenbasis(rho.spectrum, A);
        const double mean = (p.array() * At.diagonal().real().array()).sum();
        At.diagonal().array() -= mean;
        out.delta.push_back(std::move(At));
        out.means.push_back(mean);
    }
    return out;
}

// Shared pair-weight assembly for the QFI sum. Inside a degeneracy cluster
// (including j = k) the weight is beta^2 (p_j + p_k)/2; across clusters it is
// 2 (p_j + p_k) tanh^2(beta (w_k - w_j)/2)/(w_j - w_k)^2. The tanh form equals
// (p_j - p_k)/(p_j + p_k) analytically and never underflows at large beta.
Eigen::MatrixXd qfi_pair_weights(const ThermalState& rho, double tol, double* skipped_weight) {
    const RealVector& w = rho.spectrum.eigenvalues;
    const RealVector p = populations(rho);
    const std::vector<int> groups = degeneracy_groups(w, tol);
    const long d = w.size();
    const double beta = rho.beta;

    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(d, d);
    double skipped = 0.0;
    for (long j = 0; j < d; ++j) {
        for (long k = j; k < d; ++k) {
            const double psum = p(j) + p(k);
            if (psum < 1e-300) {
                skipped += beta * beta * psum * 0.5;
                continue;
            }
            double weight;
            if (groups[static_cast<size_t>(j)] == groups[static_cast<size_t>(k)]) {
                weight = beta * beta * psum * 0.5;
            } else {
                const double gap = w(j) - w(k);
                const double t = std::tanh(0.5 * beta * (w(k) - w(j)));
                weight = 2.0 * psum * t * t / (gap * gap);
            }
            weights(j, k) = weight;
            weights(k, j) = weight;
        }
    }
    if (skipped_weight) *skipped_weight = skipped;
    return weights;
}

std::vector<std::string> default_labels(size_t count, const std::vector<std::string>& labels) {
    if (!labels.empty()) {
        if (labels.size() != count) {
            throw ConfigError("got " + std::to_string(labels.size()) + " labels for " +
                              std::to_string(count) + " generators");
        }
        return labels;
    }
    std::vector<std::string> out;
    for (size_t i = 0; i < count; ++i) out.push_back(std::to_string(i));
    return out;
}

} // namespace

QfiMatrix qfi_matrix(const ThermalState& rho, const std::vector<HermitianOperator>& generators,
                     const std::vector<std::string>& labels, double degeneracy_tol) {
    if (generators.empty()) {
        throw ConfigError("QFI matrix needs at least one generator");
    }
    const int M = static_cast<int>(generators.size());
    QfiMatrix out;
    out.labels = default_labels(generators.size(), labels);

    const double tol = resolve_degeneracy_tol(rho.spectrum.eigenvalues, degeneracy_tol);
    const EigenbasisGenerators gen = rotate_and_center(rho, generators);
    double skipped_weight = 0.0;
    const Eigen::MatrixXd weights = qfi_pair_weights(rho, tol, &skipped_weight);

    out.values.resize(M, M);
    for (int l = 0; l < M; ++l) {
        for (int m = l; m < M; ++m) {
            const Eigen::ArrayXXd cross =
                (gen.delta[static_cast<size_t>(l)].array() *
                 gen.delta[static_cast<size_t>(m)].array().conjugate())
                    .real();
            const double value = (weights.array() * cross).sum();
            out.values(l, m) = value;
            out.values(m, l) = value;
        }
    }

    if (!out.values.allFinite()) {
        // Locate the offending pair for the error report.
        for (int l = 0; l < M; ++l) {
            const Matrix& dA = gen.delta[static_cast<size_t>(l)];
            for (long j = 0; j < weights.rows(); ++j) {
                for (long k = 0; k < weights.cols(); ++k) {
                    if (!std::isfinite(weights(j, k) * std::norm(dA(j, k)))) {
                        throw NumericalError("non-finite QFI summand at eigenpair (j=" +
                                             std::to_string(j) + ", k=" + std::to_string(k) +
                                             ") for generator " + out.labels[static_cast<size_t>(l)]);
                    }
                }
            }
        }
        throw NumericalError("QFI matrix has non-finite entries");
    }

    // The skipped sub-1e-300 population pairs must be irrelevant.
    for (int l = 0; l < M; ++l) {
        const double max_elem_sq = gen.delta[static_cast<size_t>(l)].cwiseAbs2().maxCoeff();
        const double bound = skipped_weight * max_elem_sq;
        if (bound > 1e-12 * out.values(l, l) + 1e-280) {
            throw NumericalError("skipped near-zero populations could contribute " +
                                 std::to_string(bound) + " to F_" +
                                 out.labels[static_cast<size_t>(l)]);
        }
    }

    if (M > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.values);
        const double trace = std::max(out.values.trace(), 1e-300);
        if (es.eigenvalues()(0) < -1e-10 * trace) {
            throw NumericalError("QFI matrix is not positive semidefinite: min eigenvalue " +
                                 std::to_string(es.eigenvalues()(0)));
        }
    }
    return out;
}

QfiMatrix qfi_matrix(const ThermalState& rho, const ParamHamiltonian& H, double degeneracy_tol) {
    std::vector<HermitianOperator> generators;
    std::vector<std::string> labels;
    for (const ParamTerm& t : H.terms()) {
        generators.push_back(t.generator);
        labels.push_back(t.label);
    }
    return qfi_matrix(rho, generators, labels, degeneracy_tol);
}

SldOperator sld(const ThermalState& rho, const HermitianOperator& generator, std::string label,
                double degeneracy_tol) {
    const RealVector& w = rho.spectrum.eigenvalues;
    const double tol = resolve_degeneracy_tol(w, degeneracy_tol);
    const std::vector<int> groups = degeneracy_groups(w, tol);
    const double beta = rho.beta;

    const EigenbasisGenerators gen = rotate_and_center(rho, {generator});
    const Matrix& dA = gen.delta[0];
    const long d = w.size();

    Matrix Lt(d, d);
    for (long j = 0; j < d; ++j) {
        for (long k = 0; k < d; ++k) {
            if (groups[static_cast<size_t>(j)] == groups[static_cast<size_t>(k)]) {
                Lt(j, k) = -beta * dA(j, k);
            } else {
                const double factor =
                    2.0 * std::tanh(0.5 * beta * (w(k) - w(j))) / (w(j) - w(k));
                Lt(j, k) = factor * dA(j, k);
            }
        }
    }
    Matrix L = rho.spectrum.eigenvectors * Lt * rho.spectrum.eigenvectors.adjoint();
    return SldOperator{std::move(label), HermitianOperator(std::move(L))};
}

double saturability(const ThermalState& rho, const HermitianOperator& A_l,
                    const HermitianOperator& A_m, double degeneracy_tol) {
    const RealVector& w = rho.spectrum.eigenvalues;
    const double tol = resolve_degeneracy_tol(w, degeneracy_tol);
    const std::vector<int> groups = degeneracy_groups(w, tol);
    const RealVector p = populations(rho);
    const double beta = rho.beta;

    const Matrix Al = to_eigenbasis(rho.spectrum, A_l);
    const Matrix Am = to_eigenbasis(rho.spectrum, A_m);
    const long d = w.size();

    // (p_j - p_k)^3 / (p_j + p_k)^2 = (p_j + p_k) tanh^3(beta (w_k - w_j)/2).
    Complex trace(0.0, 0.0);
    double magnitude = 0.0;
    for (long j = 0; j < d; ++j) {
        for (long k = 0; k < d; ++k) {
            if (groups[static_cast<size_t>(j)] == groups[static_cast<size_t>(k)]) continue;
            const double gap = w(j) - w(k);
            const double t = std::tanh(0.5 * beta * (w(k) - w(j)));
            const double weight = 4.0 * (p(j) + p(k)) * t * t * t / (gap * gap);
            const Complex term = weight * Al(j, k) * Am(k, j);
            trace += term;
            magnitude += std::abs(term);
        }
    }
    if (!std::isfinite(trace.real()) || !std::isfinite(trace.imag())) {
        throw NumericalError("saturability trace is non-finite");
    }
    // tr(rho [L_l, L_m]) is the trace of rho times an anti-Hermitian operator,
    // hence purely imaginary; the ordered sum cancels its real part pairwise.
    if (std::abs(trace.real()) > 1e-9 * magnitude + 1e-300) {
        throw NumericalError("saturability trace has an unexpected real part " +
                             std::to_string(trace.real()));
    }
    return trace.imag();
}

DensityMap thermal_density_map(const ParamHamiltonian& H, double beta) {
    return [H, beta](const RealVector& mu) {
        if (mu.size() != static_cast<long>(H.terms().size())) {
            throw DimensionError("parameter vector has size " + std::to_string(mu.size()) +
                                 ", expected " + std::to_string(H.terms().size()));
        }
        ParamHamiltonian shifted = H;
        for (long l = 0; l < mu.size(); ++l) {
            shifted = shifted.with_mu(static_cast<int>(l), mu(l));
        }
        return density_matrix(thermal_state(shifted, beta));
    };
}

namespace {

RealVector outcome_probabilities(const DensityMap& rho_fn, const RealVector& mu,
                                 const Matrix& basis) {
    const Matrix rho = rho_fn(mu);
    return (basis.adjoint() * rho * basis).diagonal().real();
}

RealVector central_difference(const DensityMap& rho_fn, const RealVector& mu0, int l,
                              const Matrix& basis, double h) {
    RealVector plus = mu0;
    RealVector minus = mu0;
    plus(l) += h;
    minus(l) -= h;
    return (outcome_probabilities(rho_fn, plus, basis) -
            outcome_probabilities(rho_fn, minus, basis)) /
           (2.0 * h);
}

} // namespace

double classical_fisher_projective(const DensityMap& rho_fn, const RealVector& mu0, int l,
                                   const Matrix& basis, CfiOptions opts, CfiDetail* detail) {
    if (l < 0 || l >= mu0.size()) {
        throw ConfigError("parameter index " + std::to_string(l) + " out of range");
    }
    const long d = basis.rows();
    const double unitarity =
        (basis.adjoint() * basis - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (unitarity > 1e-10) {
        throw ConfigError("measurement basis is not unitary: residual " +
                          std::to_string(unitarity));
    }
    const double h = opts.step > 0.0 ? opts.step : 1e-5 * std::max(1.0, std::abs(mu0(l)));

    RealVector dq = central_difference(rho_fn, mu0, l, basis, h);
    if (opts.richardson) {
        const RealVector half = central_difference(rho_fn, mu0, l, basis, h / 2.0);
        dq = (4.0 * half - dq) / 3.0;
    }
    const RealVector q = outcome_probabilities(rho_fn, mu0, basis);

    double cfi = 0.0;
    CfiDetail local;
    for (long i = 0; i < q.size(); ++i) {
        if (q(i) < 1e-14) {
            local.excluded_mass += std::max(q(i), 0.0);
            ++local.excluded_count;
            continue;
        }
        cfi += dq(i) * dq(i) / q(i);
    }
    if (detail) *detail = local;
    if (!std::isfinite(cfi)) {
        throw NumericalError("classical Fisher information is non-finite");
    }
    return cfi;
}

double uhlmann_fidelity(const ThermalState& a, const ThermalState& b) {
    const RealVector sa = (a.log_populations.array() / 2.0).exp();
    const RealVector sb = (b.log_populations.array() / 2.0).exp();
    const Matrix sqrt_a =
        a.spectrum.eigenvectors * sa.asDiagonal() * a.spectrum.eigenvectors.adjoint();
    const Matrix sqrt_b =
        b.spectrum.eigenvectors * sb.asDiagonal() * b.spectrum.eigenvectors.adjoint();
    Eigen::JacobiSVD<Matrix> svd(sqrt_b * sqrt_a);
    const double fid = svd.singularValues().sum();
    if (fid > 1.0 + 1e-10) {
        throw NumericalError("fidelity " + std::to_string(fid) + " exceeds 1 beyond tolerance");
    }
    return fid;
}

namespace {

double fidelity_oracle_unchecked(const ParamHamiltonian& H, int term, double beta, double eps) {
    const ThermalState rho0 = thermal_state(H, beta);
    const double mu = H.terms()[static_cast<size_t>(term)].mu;
    const ThermalState rho1 = thermal_state(H.with_mu(term, mu + eps), beta);
    const double fid = uhlmann_fidelity(rho0, rho1);
    return std::max(0.0, 8.0 * (1.0 - fid) / (eps * eps));
}

void check_oracle_eps(const ParamHamiltonian& H, int term, double eps, double lo_factor) {
    if (term < 0 || term >= static_cast<int>(H.terms().size())) {
        throw ConfigError("term index " + std::to_string(term) + " out of range");
    }
    const double scale = std::max(1.0, std::abs(H.terms()[static_cast<size_t>(term)].mu));
    if (eps < lo_factor * scale * 0.999 || eps > 2e-2 * scale * 1.001) {
        throw ConfigError("oracle step " + std::to_string(eps) + " outside [" +
                          std::to_string(lo_factor) + ", 2e-2] of the parameter scale " +
                          std::to_string(scale));
    }
}

} // namespace

double qfi_fidelity_oracle(const ParamHamiltonian& H, int term, double beta, double eps) {
    check_oracle_eps(H, term, eps, 1e-5);
    return fidelity_oracle_unchecked(H, term, beta, eps);
}

double qfi_fidelity_oracle_richardson(const ParamHamiltonian& H, int term, double beta,
                                      double eps) {
    check_oracle_eps(H, term, eps, 2e-5);
    const double coarse = fidelity_oracle_unchecked(H, term, beta, eps);
    const double fine = fidelity_oracle_unchecked(H, term, beta, eps / 2.0);
    return std::max(0.0, 2.0 * fine - coarse);
}

} // namespace thermoqfi
