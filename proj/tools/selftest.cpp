#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "commands.hpp"
#include "thermoqfi/bounds.hpp"
#include "thermoqfi/errors.hpp"
#include "thermoqfi/models.hpp"
#include "thermoqfi/qfi.hpp"

namespace thermoqfi::cli {

namespace {

Matrix random_hermitian(std::mt19937_64& rng, int dim, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    Matrix a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) a(r, c) = Complex(gauss(rng), gauss(rng));
    }
    return 0.5 * (a + a.adjoint()).eval();
}

ParamHamiltonian random_hamiltonian(std::mt19937_64& rng, int dim, int n_terms) {
    std::uniform_real_distribution<double> mag(0.3, 1.5);
    std::bernoulli_distribution coin(0.5);
    std::vector<ParamTerm> terms;
    for (int t = 0; t < n_terms; ++t) {
        const double mu = (coin(rng) ? 1.0 : -1.0) * mag(rng);
        terms.push_back(
            ParamTerm{"t" + std::to_string(t), mu, HermitianOperator(random_hermitian(rng, dim, 1.0))});
    }
    return ParamHamiltonian(HermitianOperator(random_hermitian(rng, dim, 1.0)), std::move(terms));
}

double beta_for_width(const ParamHamiltonian& H, double target) {
    const double s = spectral_quantities(H.total()).seminorm;
    return s > 0.0 ? target / s : 1.0;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

bool leq_slack(double a, double b) {
    return a <= b + 1e-9 * (std::abs(a) + std::abs(b)) + 1e-300;
}

// Everything the sandwich properties need from one random thermal instance,
// computed once and shared across the per-bound checks.
struct SandwichCase {
    std::string tag;
    double beta = 0.0;
    double qfi = 0.0;
    double var = 0.0;
    double skew = 0.0;
    double classical = 0.0;
    double diag_var = 0.0;
    double c1s = 0.0;
    double c1g = 0.0;
    double c2 = 0.0;
    double miller = 0.0;
};

std::vector<SandwichCase> build_sandwich_cases(std::mt19937_64& rng) {
    std::vector<SandwichCase> cases;

    auto add_case = [&](const ParamHamiltonian& H, double beta, const std::string& tag) {
        const ThermalState rho = thermal_state(H, beta);
        const QfiMatrix F = qfi_matrix(rho, H);
        const SpectralQuantities sq = spectral_quantities(rho.spectrum);
        for (std::size_t l = 0; l < H.terms().size(); ++l) {
            const HermitianOperator& A = H.terms()[l].generator;
            SandwichCase c;
            c.tag = tag + " term " + std::to_string(l);
            c.beta = beta;
            c.qfi = F.values(static_cast<long>(l), static_cast<long>(l));
            c.var = variance(rho, A);
            c.skew = skew_information(rho, A);
            c.classical = classical_fluctuation(rho, A);
            c.diag_var = diagonal_block_variance(rho, A);
            c.c1s = c1_const(beta, sq.seminorm);
            c.c1g = sq.min_gap > 0.0 ? c1_const(beta, sq.min_gap) : 0.25;
            c.c2 = c2_const(beta, sq.seminorm);
            c.miller = miller_bound(rho, A);
            cases.push_back(std::move(c));
        }
    };

    // A deterministic high-temperature qubit first: with beta*seminorm tiny,
    // c2 is at its 0.5 limit, which is the regime where a perturbed c2 is
    // guaranteed to break the eq7_upper sandwich.
    QubitModel qm;
    qm.omega_x = 1.0;
    qm.omega_z = 0.3;
    qm.mu = 0.2;
    add_case(qubit_model(qm), 1e-3, "high-T qubit");

    std::uniform_int_distribution<int> dim_pick(2, 8);
    std::uniform_int_distribution<int> term_pick(1, 2);
    std::uniform_real_distribution<double> logw(std::log(1e-3), std::log(30.0));
    for (int i = 0; i < 40; ++i) {
        const int dim = dim_pick(rng);
        const ParamHamiltonian H = random_hamiltonian(rng, dim, term_pick(rng));
        const double beta = beta_for_width(H, std::exp(logw(rng)));
        add_case(H, beta, "random instance " + std::to_string(i));
    }
    return cases;
}

struct Property {
    std::string name;
    std::function<std::string()> run; // empty string means pass
};

} // namespace

int cmd_selftest(const SelftestOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::vector<Property> props;

    props.push_back({"qubit closed form vs dense pipeline (25 instances, 1e-10)", [&] {
        std::uniform_real_distribution<double> omega(-1.5, 1.5);
        std::uniform_real_distribution<double> logbv(std::log(1e-3), std::log(100.0));
        for (int i = 0; i < 25; ++i) {
            QubitModel m;
            m.omega_x = omega(rng);
            m.omega_z = omega(rng);
            m.mu = omega(rng);
            if (m.v() < 1e-3) continue;
            const double beta = std::exp(logbv(rng)) / m.v();
            const ParamHamiltonian H = qubit_model(m);
            const ThermalState rho = thermal_state(H, beta);
            const double dense = qfi_matrix(rho, H).values(0, 0);
            const double closed = qubit_qfi_closed_form(m, beta);
            const double rel = std::abs(dense - closed) / std::max(std::abs(closed), 1e-300);
            if (rel > 1e-10) {
                return "instance " + std::to_string(i) + ": dense " + fmt(dense) +
                       " vs closed form " + fmt(closed) + " (rel " + fmt(rel) + ")";
            }
        }
        return std::string();
    }});

    props.push_back({"qubit regime limits (F/beta^2 near 1 hot, F v^4/omega_x^2 near 1 cold)", [&] {
        QubitModel m;
        m.omega_x = 0.8;
        m.omega_z = 0.5;
        m.mu = 0.1;
        const double v = m.v();
        {
            const double beta = 5e-3 / v;
            const ThermalState rho = thermal_state(qubit_model(m), beta);
            const double ratio = qfi_matrix(rho, qubit_model(m)).values(0, 0) / (beta * beta);
            if (ratio < 0.99 || ratio > 1.01) return "hot ratio " + fmt(ratio);
        }
        {
            const double beta = 50.0 / v;
            const ThermalState rho = thermal_state(qubit_model(m), beta);
            const double ratio = qfi_matrix(rho, qubit_model(m)).values(0, 0) * v * v * v * v /
                                 (m.omega_x * m.omega_x);
            if (ratio < 0.95 || ratio > 1.05) return "cold ratio " + fmt(ratio);
        }
        return std::string();
    }});

    props.push_back({"thermal state basics (uniform at beta=0, shift invariance, skew in [0, var])",
                     [&] {
        for (int i = 0; i < 10; ++i) {
            const int dim = 2 + static_cast<int>(i % 5);
            const ParamHamiltonian H = random_hamiltonian(rng, dim, 1);
            const ThermalState flat = thermal_state(H, 0.0);
            const RealVector p = populations(flat);
            for (long j = 0; j < p.size(); ++j) {
                if (std::abs(p(j) - 1.0 / dim) > 1e-12) {
                    return "beta=0 population " + fmt(p(j)) + " at dim " + std::to_string(dim);
                }
            }

            const double beta = beta_for_width(H, 2.0);
            const ThermalState rho = thermal_state(H, beta);
            const Matrix shifted_m =
                H.total().matrix() + 3.7 * Matrix::Identity(H.dim(), H.dim());
            const ThermalState rho_shift = thermal_state(HermitianOperator(shifted_m), beta);
            if ((populations(rho) - populations(rho_shift)).cwiseAbs().maxCoeff() > 1e-12) {
                return "populations moved under a constant shift (instance " +
                       std::to_string(i) + ")";
            }

            const HermitianOperator& A = H.terms()[0].generator;
            const double var = variance(rho, A);
            const double skew = skew_information(rho, A);
            if (skew < -1e-12 || skew > var * (1.0 + 1e-9) + 1e-12) {
                return "skew " + fmt(skew) + " outside [0, var=" + fmt(var) + "]";
            }
        }
        return std::string();
    }});

    props.push_back({"fidelity oracle agreement (8 instances, 1e-4)", [&] {
        std::uniform_int_distribution<int> dim_pick(2, 6);
        std::uniform_real_distribution<double> logw(std::log(0.1), std::log(10.0));
        for (int i = 0; i < 8; ++i) {
            const ParamHamiltonian H = random_hamiltonian(rng, dim_pick(rng), 1);
            const double beta = beta_for_width(H, std::exp(logw(rng)));
            const ThermalState rho = thermal_state(H, beta);
            const double F = qfi_matrix(rho, H).values(0, 0);
            const double mu_scale = std::max(1.0, std::abs(H.terms()[0].mu));
            const double eps = std::clamp(std::sqrt(8e-7 / std::max(F, 1e-12)), 2e-5, 2e-2) *
                               mu_scale;
            const double oracle = qfi_fidelity_oracle_richardson(H, 0, beta, eps);
            const double rel = std::abs(F - oracle) / std::max(std::abs(F), 1e-12);
            if (rel > 1e-4) {
                return "instance " + std::to_string(i) + ": qfi " + fmt(F) + " vs oracle " +
                       fmt(oracle) + " (rel " + fmt(rel) + ")";
            }
        }
        return std::string();
    }});

    // The sandwich suite shares its instances across the per-bound
    // properties so a failure names the exact violated bound.
    const std::vector<SandwichCase> cases = build_sandwich_cases(rng);
    const double perturb = opt.perturb_c2;

    auto sandwich_prop = [&](const std::string& name,
                             std::function<std::string(const SandwichCase&)> check) {
        props.push_back({name + " (" + std::to_string(cases.size()) + " instances)",
                         [&cases, check] {
            for (const auto& c : cases) {
                std::string detail = check(c);
                if (!detail.empty()) return c.tag + ": " + detail;
            }
            return std::string();
        }});
    };

    sandwich_prop("eq6_lower sandwich: eq6_lower <= F", [](const SandwichCase& c) {
        const double lo =
            qfi_bounds_variance(c.beta, c.var, c.diag_var, c.c1s, c.c1g).eq6_lower;
        return leq_slack(lo, c.qfi) ? ""
                                    : "eq6_lower " + fmt(lo) + " > F " + fmt(c.qfi);
    });
    sandwich_prop("eq6_upper sandwich: F <= eq6_upper", [](const SandwichCase& c) {
        const double up =
            qfi_bounds_variance(c.beta, c.var, c.diag_var, c.c1s, c.c1g).eq6_upper;
        return leq_slack(c.qfi, up) ? ""
                                    : "F " + fmt(c.qfi) + " > eq6_upper " + fmt(up);
    });
    sandwich_prop("eq6_refined sandwich: F <= refined <= eq6_upper", [](const SandwichCase& c) {
        const VarianceBounds vb = qfi_bounds_variance(c.beta, c.var, c.diag_var, c.c1s, c.c1g);
        if (!leq_slack(c.qfi, vb.eq6_upper_refined)) {
            return "F " + fmt(c.qfi) + " > eq6_refined " + fmt(vb.eq6_upper_refined);
        }
        if (!leq_slack(vb.eq6_upper_refined, vb.eq6_upper)) {
            return "eq6_refined " + fmt(vb.eq6_upper_refined) + " > eq6_upper " +
                   fmt(vb.eq6_upper);
        }
        return std::string();
    });
    sandwich_prop("eq7_lower sandwich: eq7_lower <= F", [perturb](const SandwichCase& c) {
        const double lo =
            skew_bounds_from_classical(c.beta, c.classical, c.c2 * perturb).eq7_lower;
        return leq_slack(lo, c.qfi) ? ""
                                    : "eq7_lower " + fmt(lo) + " > F " + fmt(c.qfi);
    });
    sandwich_prop("eq7_upper sandwich: F <= eq7_upper", [perturb](const SandwichCase& c) {
        const double up =
            skew_bounds_from_classical(c.beta, c.classical, c.c2 * perturb).eq7_upper;
        return leq_slack(c.qfi, up) ? ""
                                    : "F " + fmt(c.qfi) + " > eq7_upper " + fmt(up);
    });
    sandwich_prop("miller sandwich: F <= miller <= eq6_upper", [](const SandwichCase& c) {
        if (!leq_slack(c.qfi, c.miller)) {
            return "F " + fmt(c.qfi) + " > miller " + fmt(c.miller);
        }
        const double eq6_up = c.beta * c.beta * c.var;
        if (!leq_slack(c.miller, eq6_up)) {
            return "miller " + fmt(c.miller) + " > eq6_upper " + fmt(eq6_up);
        }
        return std::string();
    });

    props.push_back({"saturability two-path agreement (5 instances, 1e-9)", [&] {
        std::uniform_int_distribution<int> dim_pick(3, 6);
        for (int i = 0; i < 5; ++i) {
            const ParamHamiltonian H = random_hamiltonian(rng, dim_pick(rng), 2);
            const double beta = beta_for_width(H, 3.0);
            const ThermalState rho = thermal_state(H, beta);
            const HermitianOperator& A = H.terms()[0].generator;
            const HermitianOperator& B = H.terms()[1].generator;
            const double direct = saturability(rho, A, B);
            const Matrix La = sld(rho, A).op.matrix();
            const Matrix Lb = sld(rho, B).op.matrix();
            const Matrix rho_m = density_matrix(rho);
            const Complex tr = (rho_m * (La * Lb - Lb * La)).trace();
            const double scale = std::max({1.0, std::abs(direct), std::abs(tr.imag())});
            if (std::abs(direct - tr.imag()) > 1e-9 * scale) {
                return "instance " + std::to_string(i) + ": direct " + fmt(direct) +
                       " vs SLD path " + fmt(tr.imag());
            }
        }
        return std::string();
    }});

    props.push_back({"ghz block solver vs dense pipeline (n in {2,3}, 1e-9)", [&] {
        for (int n : {2, 3}) {
            for (double beta : {0.1, 1.0}) {
                GhzModel gm;
                gm.n = n;
                gm.mu = 0.4;
                gm.lambda = 0.75;
                gm.beta = beta;
                const GhzResult blocks = ghz_exact(gm);
                const ParamHamiltonian H = ghz_dense_model(n, gm.mu, gm.lambda);
                const ThermalState rho = thermal_state(H, beta);
                const HermitianOperator& A = H.terms()[0].generator;
                const double dense[5] = {rho.partition_log, gm.mu * expectation(rho, A),
                                         gm.mu * gm.mu * variance(rho, A),
                                         qfi_matrix(rho, H).values(0, 0),
                                         gm.mu * gm.mu * skew_information(rho, A)};
                const double block[5] = {blocks.log_Z, blocks.mean_Hmu, blocks.var_Hmu,
                                         blocks.qfi_mu, blocks.skew_Hmu};
                const char* names[5] = {"log_Z", "mean_Hmu", "var_Hmu", "qfi_mu", "skew_Hmu"};
                for (int k = 0; k < 5; ++k) {
                    const double diff = std::abs(dense[k] - block[k]);
                    if (diff > 1e-9 * std::max(1.0, std::abs(dense[k]))) {
                        return std::string(names[k]) + " at n=" + std::to_string(n) +
                               " beta=" + fmt(beta) + ": block " + fmt(block[k]) + " vs dense " +
                               fmt(dense[k]);
                    }
                }
            }
        }
        return std::string();
    }});

    props.push_back({"beta = 0 corner (zero QFI, zero bounds, not estimable)", [&] {
        QubitModel m;
        m.omega_x = 1.0;
        m.omega_z = 0.5;
        m.mu = 0.3;
        const ParamHamiltonian H = qubit_model(m);
        const ThermalState rho = thermal_state(H, 0.0);
        const double F = qfi_matrix(rho, H).values(0, 0);
        if (std::abs(F) > 1e-14) return "F " + fmt(F) + " at beta = 0";
        const BoundReport report = bound_report(rho, H, 1.0, 1e-2);
        const ParamBounds& b = report.params.at(0);
        if (b.eq6_upper != 0.0 || b.miller_upper != 0.0 || b.eq7_upper != 0.0) {
            return "bounds not all zero: eq6 " + fmt(b.eq6_upper) + ", miller " +
                   fmt(b.miller_upper) + ", eq7 " + fmt(b.eq7_upper);
        }
        if (b.rel_err.estimable) return std::string("rel_err claims estimable at beta = 0");
        return std::string();
    }});

    std::cout << "selftest (seed " << opt.seed;
    if (perturb != 1.0) std::cout << ", c2 perturbed x" << perturb;
    std::cout << ")\n";

    std::string first_failure;
    for (const auto& p : props) {
        std::string detail;
        try {
            detail = p.run();
        } catch (const Error& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            std::cout << "  [ok]   " << p.name << "\n";
        } else {
            std::cout << "  [FAIL] " << p.name << ": " << detail << "\n";
            if (first_failure.empty()) first_failure = p.name;
        }
    }

    if (first_failure.empty()) {
        std::cout << "selftest: PASS (" << props.size() << " properties)\n";
        return 0;
    }
    std::cout << "selftest: FAIL, first failing property: " << first_failure << "\n";
    return 4;
}

} // namespace thermoqfi::cli
