#include "thermoqfi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thermoqfi {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0)) {
        throw ConfigError(std::string(name) + " must be nonnegative, got " + std::to_string(x));
    }
}

} // namespace

double c1_const(double beta, double gap) {
    require_nonnegative(beta, "beta");
    require_nonnegative(gap, "gap");
    const double x = beta * gap;
    if (x < 1e-8) return 0.25;
    const double t = std::tanh(0.5 * x);
    return t * t / (x * x);
}

double c2_const(double beta, double seminorm) {
    require_nonnegative(beta, "beta");
    require_nonnegative(seminorm, "seminorm");
    const double x = beta * seminorm;
    if (x < 1e-8) return 0.5;
    if (x > 1340.0) {
        // sinh overflows; by then c2 = e^(x/2)/x^2 to within e^(-x) relative.
        return std::exp(0.5 * x - 2.0 * std::log(x));
    }
    return 2.0 * std::sinh(0.5 * x) * std::tanh(0.5 * x) / (x * x);
}

VarianceBounds qfi_bounds_variance(double beta, double variance, double diag_variance,
                                   double c1_seminorm, double c1_mingap) {
    require_nonnegative(beta, "beta");
    require_nonnegative(variance, "variance");
    diag_variance = std::clamp(diag_variance, 0.0, variance);
    const double b2 = beta * beta;
    VarianceBounds out;
    out.eq6_upper = b2 * variance;
    out.eq6_lower = 4.0 * c1_seminorm * b2 * variance;
    out.eq6_upper_refined =
        4.0 * c1_mingap * b2 * variance + (1.0 - 4.0 * c1_mingap) * b2 * diag_variance;
    return out;
}

SkewBounds qfi_bounds_skew(double beta, double variance, double skew, double c2) {
    require_nonnegative(variance, "variance");
    require_nonnegative(skew, "skew");
    return skew_bounds_from_classical(beta, std::max(variance - skew, 0.0), c2);
}

SkewBounds skew_bounds_from_classical(double beta, double classical, double c2) {
    require_nonnegative(beta, "beta");
    require_nonnegative(classical, "classical fluctuation");
    SkewBounds out;
    out.eq7_upper = 2.4 * c2 * beta * beta * classical;
    out.eq7_lower = 0.8 * beta * beta * classical;
    return out;
}

double diagonal_block_variance(const ThermalState& rho, const HermitianOperator& A,
                               double degeneracy_tol) {
    const RealVector& w = rho.spectrum.eigenvalues;
    const double tol = resolve_degeneracy_tol(w, degeneracy_tol);
    const std::vector<int> groups = degeneracy_groups(w, tol);
    const Matrix At = to_eigenbasis(rho.spectrum, A);
    const RealVector p = populations(rho);

    const long d = w.size();
    const double mean = (p.array() * At.diagonal().real().array()).sum();
    double second = 0.0;
    for (long j = 0; j < d; ++j) {
        double row = 0.0;
        for (long k = 0; k < d; ++k) {
            if (groups[static_cast<size_t>(j)] == groups[static_cast<size_t>(k)]) {
                row += std::norm(At(j, k));
            }
        }
        second += p(j) * row;
    }
    return std::max(second - mean * mean, 0.0);
}

double miller_bound(const ThermalState& rho, const HermitianOperator& A, double degeneracy_tol) {
    const RealVector& w = rho.spectrum.eigenvalues;
    const double tol = resolve_degeneracy_tol(w, degeneracy_tol);
    const std::vector<int> groups = degeneracy_groups(w, tol);
    const Matrix At = to_eigenbasis(rho.spectrum, A);
    const RealVector p = populations(rho);
    const RealVector& lp = rho.log_populations;

    const long d = w.size();
    const double mean = (p.array() * At.diagonal().real().array()).sum();
    double total = 0.0;
    for (long j = 0; j < d; ++j) {
        for (long k = 0; k < d; ++k) {
            const double elem_sq =
                (j == k) ? std::norm(At(j, j) - mean) : std::norm(At(j, k));
            if (elem_sq == 0.0) continue;
            double log_mean;
            if (groups[static_cast<size_t>(j)] == groups[static_cast<size_t>(k)]) {
                log_mean = p(j);
            } else {
                const double delta = lp(k) - lp(j);
                log_mean = std::abs(delta) < 1e-14 ? p(j) : p(j) * std::expm1(delta) / delta;
            }
            total += log_mean * elem_sq;
        }
    }
    return rho.beta * rho.beta * total;
}

RelativeErrorBounds relative_error_bounds(double beta, double n_samples, double mu_l,
                                          double variance_Hl, double skew_Hl, double c1_seminorm,
                                          double c2, double classical_Hl) {
    if (mu_l == 0.0) {
        throw ConfigError("relative error is undefined at mu_l = 0");
    }
    if (n_samples < 1.0) {
        throw ConfigError("sample count must be >= 1, got " + std::to_string(n_samples));
    }
    require_nonnegative(variance_Hl, "variance");
    require_nonnegative(skew_Hl, "skew");

    RelativeErrorBounds out;
    if (variance_Hl <= 0.0) {
        out.estimable = false;
        out.eq9_lower = out.eq9_upper = out.eq10_lower = out.eq10_upper = kNan;
        return out;
    }
    const double dH = std::sqrt(variance_Hl);
    const double root_n = std::sqrt(n_samples);
    out.eq9_lower = 1.0 / (beta * root_n * dH);
    out.eq9_upper = 1.0 / (2.0 * beta * std::sqrt(c1_seminorm) * root_n * dH);

    const double classical =
        classical_Hl >= 0.0 ? classical_Hl : std::max(variance_Hl - skew_Hl, 0.0);
    out.eq10_lower = 1.0 / (beta * std::sqrt(2.4 * c2 * n_samples * classical));
    out.eq10_upper = 1.0 / (beta * std::sqrt(0.8 * n_samples * classical));
    return out;
}

MultiparamBounds multiparam_bounds(const QfiMatrix& F, double eps_err, double beta,
                                   const std::vector<double>& variances,
                                   const std::vector<double>& skews, double c2,
                                   double n_samples, const std::vector<double>& classicals) {
    const long M = F.values.rows();
    if (static_cast<long>(variances.size()) != M || static_cast<long>(skews.size()) != M) {
        throw DimensionError("variances/skews size does not match the " + std::to_string(M) +
                             " QFI parameters");
    }
    if (!classicals.empty() && static_cast<long>(classicals.size()) != M) {
        throw DimensionError("classicals size does not match the " + std::to_string(M) +
                             " QFI parameters");
    }
    if (!(eps_err > 0.0)) {
        throw ConfigError("target error eps_err must be positive");
    }

    MultiparamBounds out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F.values);
    const Eigen::VectorXd evals = es.eigenvalues();
    out.positive_definite = evals(0) > 0.0;
    if (out.positive_definite) {
        out.trace_inv_qfi = evals.cwiseInverse().sum() / n_samples;
    } else {
        out.trace_inv_qfi = kNan;
    }

    double sum_inv = 0.0;
    bool diag_ok = true;
    for (long l = 0; l < M; ++l) {
        if (F.values(l, l) > 0.0) {
            sum_inv += 1.0 / F.values(l, l);
        } else {
            diag_ok = false;
        }
    }
    out.sum_inv_diag = diag_ok ? sum_inv / n_samples : kNan;

    const double prefactor = 1.0 / (beta * beta * eps_err * eps_err);
    double eq13a = 0.0;
    double eq13b = 0.0;
    double max_var = 0.0;
    for (long l = 0; l < M; ++l) {
        const double var = variances[static_cast<size_t>(l)];
        const double classical =
            classicals.empty() ? std::max(var - skews[static_cast<size_t>(l)], 0.0)
                               : classicals[static_cast<size_t>(l)];
        eq13a += (0.5 / c2) / classical;
        eq13b += 1.0 / var;
        max_var = std::max(max_var, var);
    }
    out.sample_lower_eq13a = prefactor * eq13a;
    out.sample_lower_eq13b = prefactor * eq13b;
    out.sample_lower_eq14 = prefactor * static_cast<double>(M) / max_var;
    return out;
}

namespace {

void check_sandwich(const ParamBounds& b) {
    const double slack = 1e-9;
    const auto violated = [slack](double lower, double upper) {
        const double scale = std::max({std::abs(lower), std::abs(upper), 1e-300});
        return lower > upper + slack * scale;
    };
    const char* name = nullptr;
    if (violated(b.eq6_lower, b.qfi_exact)) name = "eq6_lower";
    else if (violated(b.qfi_exact, b.eq6_upper)) name = "eq6_upper";
    else if (violated(b.qfi_exact, b.eq6_upper_refined)) name = "eq6_upper_refined";
    else if (violated(b.eq7_lower, b.qfi_exact)) name = "eq7_lower";
    else if (violated(b.qfi_exact, b.eq7_upper)) name = "eq7_upper";
    else if (violated(b.qfi_exact, b.miller_upper)) name = "miller_upper";
    else if (violated(b.eq6_upper_refined, b.eq6_upper)) name = "refined_vs_plain";
    if (name) {
        throw NumericalError("bound sandwich violated for parameter '" + b.label + "': " + name +
                             " (F = " + std::to_string(b.qfi_exact) + ")");
    }
}

} // namespace

BoundReport bound_report(const ThermalState& rho, const ParamHamiltonian& H, double n_samples,
                         double eps_err, double degeneracy_tol) {
    BoundReport report;
    const SpectralQuantities sq = spectral_quantities(rho.spectrum, degeneracy_tol);
    report.context.beta = rho.beta;
    report.context.seminorm = sq.seminorm;
    report.context.min_gap = sq.min_gap;
    report.context.c1_seminorm = c1_const(rho.beta, sq.seminorm);
    report.context.c1_mingap = c1_const(rho.beta, sq.min_gap);
    report.context.c2 = c2_const(rho.beta, sq.seminorm);
    report.context.n_samples = n_samples;
    report.context.eps_err = eps_err;

    const QfiMatrix F = qfi_matrix(rho, H, degeneracy_tol);
    std::vector<double> variances;
    std::vector<double> skews;
    std::vector<double> classicals;

    for (size_t l = 0; l < H.terms().size(); ++l) {
        const ParamTerm& term = H.terms()[l];
        ParamBounds b;
        b.label = term.label;
        b.mu = term.mu;
        b.qfi_exact = F.values(static_cast<long>(l), static_cast<long>(l));
        b.variance = variance(rho, term.generator);
        b.skew = skew_information(rho, term.generator);
        b.diag_variance = diagonal_block_variance(rho, term.generator, degeneracy_tol);
        const double classical = classical_fluctuation(rho, term.generator);

        const VarianceBounds vb =
            qfi_bounds_variance(rho.beta, b.variance, b.diag_variance, report.context.c1_seminorm,
                                report.context.c1_mingap);
        b.eq6_upper = vb.eq6_upper;
        b.eq6_upper_refined = vb.eq6_upper_refined;
        b.eq6_lower = vb.eq6_lower;
        const SkewBounds sb = skew_bounds_from_classical(rho.beta, classical, report.context.c2);
        b.eq7_upper = sb.eq7_upper;
        b.eq7_lower = sb.eq7_lower;
        b.miller_upper = miller_bound(rho, term.generator, degeneracy_tol);

        if (term.mu != 0.0 && b.variance > 0.0 && rho.beta > 0.0) {
            const double mu_sq = term.mu * term.mu;
            b.rel_err = relative_error_bounds(rho.beta, n_samples, term.mu, mu_sq * b.variance,
                                              mu_sq * b.skew, report.context.c1_seminorm,
                                              report.context.c2, mu_sq * classical);
        } else {
            b.rel_err.estimable = false;
            b.rel_err.eq9_lower = b.rel_err.eq9_upper = kNan;
            b.rel_err.eq10_lower = b.rel_err.eq10_upper = kNan;
        }

        check_sandwich(b);
        variances.push_back(b.variance);
        skews.push_back(b.skew);
        classicals.push_back(classical);
        report.params.push_back(std::move(b));
    }

    report.multi = multiparam_bounds(F, eps_err, rho.beta, variances, skews, report.context.c2,
                                     n_samples, classicals);
    return report;
}

} // namespace thermoqfi
