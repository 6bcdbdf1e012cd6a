#include "thermoqfi/models.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace thermoqfi {

namespace {

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_z() {
    // sigma_z |1> = +|1> in the (|0>, |1>) ordering used throughout.
    Matrix m(2, 2);
    m << -1, 0, 0, 1;
    return m;
}

double logsumexp(const std::vector<double>& a) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : a) m = std::max(m, x);
    double s = 0.0;
    for (double x : a) s += std::exp(x - m);
    return m + std::log(s);
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace

double QubitModel::v() const {
    return std::hypot(omega_x, omega_z + mu);
}

ParamHamiltonian qubit_model(const QubitModel& m) {
    HermitianOperator fixed(m.omega_x * sigma_x() + m.omega_z * sigma_z());
    std::vector<ParamTerm> terms;
    terms.push_back(ParamTerm{"mu", m.mu, HermitianOperator(sigma_z())});
    return ParamHamiltonian(std::move(fixed), std::move(terms));
}

double qubit_qfi_closed_form(const QubitModel& m, double beta, bool* degenerate_limit) {
    if (degenerate_limit) *degenerate_limit = false;
    const double v = m.v();
    if (v == 0.0) {
        // Fully degenerate H = 0: every approach direction gives beta^2.
        if (degenerate_limit) *degenerate_limit = true;
        return beta * beta;
    }
    const double t = std::tanh(beta * v);
    const double a = m.omega_z + m.mu;
    return t * t * m.omega_x * m.omega_x / (v * v * v * v) +
           beta * beta * a * a / (v * v) * (1.0 - t * t);
}

double qubit_skew_closed_form(const QubitModel& m, double beta, bool* degenerate_limit) {
    if (degenerate_limit) *degenerate_limit = false;
    const double v = m.v();
    if (v == 0.0) {
        if (degenerate_limit) *degenerate_limit = true;
        return 0.0;
    }
    // 1 - sech(beta v), kept accurate at small beta v via the cosh form.
    const double sech = 1.0 / std::cosh(beta * v);
    return (1.0 - sech) * m.omega_x * m.omega_x / (v * v);
}

GhzResult ghz_exact(const GhzModel& m) {
    if (m.n < 2 || m.n > 64) {
        throw ConfigError("block solver supports 2 <= n <= 64, got " + std::to_string(m.n));
    }
    if (!(m.mu > 0.0) || !(m.lambda > 0.0) || !(m.beta > 0.0)) {
        throw ConfigError("block solver requires mu, lambda, beta > 0");
    }
    const int n = m.n;
    const double beta = m.beta;
    const double r_max = n * std::hypot(m.mu, m.lambda);

    // Enumerating Hamming weights k = 0..n with multiplicity binom(n, k)
    // counts every two-dimensional {s, complement(s)} block exactly twice,
    // uniformly, so normalized sums over (k, sigma) reproduce sums over
    // physical eigenstates.
    const int count = 2 * (n + 1);
    std::vector<double> log_weight(count);
    std::vector<double> r_of(n + 1), q_of(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double z = 2.0 * k - n;
        const double r = std::hypot(m.mu * z, m.lambda * n);
        r_of[k] = r;
        q_of[k] = z * z * m.lambda * m.lambda * n * n / (r * r); // |<+|A|->|^2
        const double lb = log_binomial(n, k);
        // Shifted block eigenvalues are -r (sigma = -1) and +r (sigma = +1);
        // exponents are offset by the global minimum -r_max.
        log_weight[2 * k] = lb - beta * (-r + r_max);
        log_weight[2 * k + 1] = lb - beta * (r + r_max);
    }
    const double log_norm = logsumexp(log_weight);

    // log Z of the shifted Hamiltonian, undoing the double count; then the
    // constant shift mu*n restores the full Hamiltonian's partition function.
    const double log_Z_shifted = beta * r_max + log_norm - std::log(2.0);
    GhzResult out;
    out.log_Z = log_Z_shifted - beta * m.mu * n;

    double mean_A = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double z = 2.0 * k - n;
        for (int sigma_idx = 0; sigma_idx < 2; ++sigma_idx) {
            const double sigma = sigma_idx == 0 ? -1.0 : 1.0;
            const double P = std::exp(log_weight[2 * k + sigma_idx] - log_norm);
            // In-block eigenstate expectation of A = sum_j sigma_z^j + n.
            const double d = n + sigma * m.mu * z * z / r_of[k];
            mean_A += P * d;
        }
    }

    double second_A = 0.0;
    double qfi = 0.0;
    double skew_A = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double z = 2.0 * k - n;
        const double r = r_of[k];
        const double q = q_of[k];
        const double P_minus = std::exp(log_weight[2 * k] - log_norm);
        const double P_plus = std::exp(log_weight[2 * k + 1] - log_norm);
        const double sqrtP_minus = std::exp(0.5 * (log_weight[2 * k] - log_norm));
        const double sqrtP_plus = std::exp(0.5 * (log_weight[2 * k + 1] - log_norm));

        for (int sigma_idx = 0; sigma_idx < 2; ++sigma_idx) {
            const double sigma = sigma_idx == 0 ? -1.0 : 1.0;
            const double P = sigma_idx == 0 ? P_minus : P_plus;
            const double d = n + sigma * m.mu * z * z / r;
            second_A += P * (d * d + q);
            // Diagonal (population) part of the information.
            qfi += beta * beta * P * (d - mean_A) * (d - mean_A);
        }
        // Off-diagonal part: the in-block pair has gap 2r; both orders of the
        // ordered pair sum give (p_+ + p_-) tanh^2(beta r) q / r^2.
        const double t = std::tanh(beta * r);
        qfi += (P_minus + P_plus) * t * t * q / (r * r);
        const double sdiff = sqrtP_plus - sqrtP_minus;
        skew_A += sdiff * sdiff * q;
    }

    const double var_A = second_A - mean_A * mean_A;
    out.mean_Hmu = m.mu * mean_A;
    out.var_Hmu = m.mu * m.mu * var_A;
    out.qfi_mu = qfi;
    out.skew_Hmu = m.mu * m.mu * skew_A;

    if (!std::isfinite(out.log_Z) || !std::isfinite(out.var_Hmu) || !std::isfinite(out.qfi_mu)) {
        throw NumericalError("block solver produced non-finite output at n = " +
                             std::to_string(n));
    }
    return out;
}

ParamHamiltonian ghz_dense_model(int n, double mu, double lambda, int qubit_cap) {
    if (n < 2) {
        throw ConfigError("need at least 2 qubits, got " + std::to_string(n));
    }
    PauliString all_x;
    all_x.n_qubits = n;
    for (int j = 0; j < n; ++j) all_x.factors.push_back({j, PauliAxis::X});
    const HermitianOperator fixed =
        build_pauli_operator({{-lambda * n, all_x}}, n, qubit_cap);

    std::vector<PauliTerm> z_terms;
    for (int j = 0; j < n; ++j) {
        z_terms.push_back({1.0, PauliString{{{j, PauliAxis::Z}}, n}});
    }
    const HermitianOperator sum_z = build_pauli_operator(z_terms, n, qubit_cap);
    const long dim = sum_z.dim();
    HermitianOperator generator(sum_z.matrix() +
                                static_cast<double>(n) * Matrix::Identity(dim, dim));

    std::vector<ParamTerm> terms;
    terms.push_back(ParamTerm{"mu", mu, std::move(generator)});
    return ParamHamiltonian(fixed, std::move(terms));
}

ParamHamiltonian spin_chain(int n, double mu, double lambda, int qubit_cap) {
    if (n < 2) {
        throw ConfigError("chain needs at least 2 sites, got " + std::to_string(n));
    }
    std::vector<PauliTerm> z_terms;
    for (int j = 0; j < n; ++j) {
        z_terms.push_back({1.0, PauliString{{{j, PauliAxis::Z}}, n}});
    }
    std::vector<PauliTerm> xx_terms;
    for (int j = 0; j + 1 < n; ++j) {
        xx_terms.push_back({1.0, PauliString{{{j, PauliAxis::X}, {j + 1, PauliAxis::X}}, n}});
    }
    std::vector<ParamTerm> terms;
    terms.push_back(ParamTerm{"mu", mu, build_pauli_operator(z_terms, n, qubit_cap)});
    terms.push_back(ParamTerm{"lambda", lambda, build_pauli_operator(xx_terms, n, qubit_cap)});
    return ParamHamiltonian(std::nullopt, std::move(terms));
}

namespace {

bool commutes(const HermitianOperator& A, const HermitianOperator& B) {
    const double comm = std::sqrt(commutator_frobenius_sq(A, B));
    const double scale = A.matrix().norm() * B.matrix().norm();
    return comm <= 1e-10 * std::max(scale, 1e-300);
}

} // namespace

ParamHamiltonian charge_model(const HermitianOperator& h0, const std::vector<ParamTerm>& charges) {
    for (const ParamTerm& charge : charges) {
        if (!commutes(h0, charge.generator)) {
            throw ConfigError("charge '" + charge.label +
                              "' does not commute with the base Hamiltonian");
        }
    }
    return ParamHamiltonian(h0, charges);
}

bool charges_commute(const std::vector<ParamTerm>& charges) {
    for (size_t a = 0; a < charges.size(); ++a) {
        for (size_t b = a + 1; b < charges.size(); ++b) {
            if (!commutes(charges[a].generator, charges[b].generator)) return false;
        }
    }
    return true;
}

} // namespace thermoqfi
