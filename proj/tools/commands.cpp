#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "thermoqfi/bounds.hpp"
#include "thermoqfi/errors.hpp"
#include "thermoqfi/models.hpp"
#include "thermoqfi/qfi.hpp"

namespace thermoqfi::cli {

namespace {

// Reasons land in a CSV cell, so they must not introduce separators.
std::string sanitize_reason(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

struct RowOut {
    std::vector<std::string> cells;
    bool failed = false;
};

// Evaluates rows 0..count-1 concurrently and returns them in index order.
// eval must write only its own row's state; NumericalError is expected to be
// handled inside eval, anything else propagates.
std::vector<RowOut> run_rows(std::size_t count, int threads,
                             const std::function<RowOut(std::size_t)>& eval) {
    std::size_t n_threads = threads > 0 ? static_cast<std::size_t>(threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, count);

    std::vector<RowOut> rows(count);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) rows[i] = eval(i);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) {
                    rows[i] = eval(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
                next = count; // stop handing out work
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

int write_csv(const std::string& out_path, const std::vector<std::string>& header,
              const std::vector<RowOut>& rows, const std::vector<std::string>& footers) {
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw ConfigError("cannot open output file: " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    CsvWriter csv(out);
    csv.header(header);
    bool any_failed = false;
    for (const auto& r : rows) {
        csv.row(r.cells);
        any_failed = any_failed || r.failed;
    }
    for (const auto& f : footers) csv.footer(f);

    out.flush();
    if (!out) throw ConfigError("failed writing output" +
                                (out_path.empty() ? std::string() : ": " + out_path));
    return any_failed ? 3 : 0;
}

// Sweep plumbing shared by cmd_qfi and cmd_bounds: the list of points, the
// leading column names, and the per-row prefix cells.
struct SweepPlan {
    std::string variable; // "beta" when the config has no sweep
    std::vector<double> values;
    bool extra_beta_column = false;
};

SweepPlan plan_sweep(const ModelConfig& m) {
    SweepPlan plan;
    if (m.sweep) {
        plan.variable = m.sweep->variable;
        plan.values = m.sweep->values;
        plan.extra_beta_column = plan.variable != "beta";
    } else {
        plan.variable = "beta";
        plan.values = {m.beta};
    }
    return plan;
}

ModelPoint realize_point(const ModelConfig& m, const SweepPlan& plan, std::size_t i) {
    if (!m.sweep) return realize(m);
    return realize(m, plan.variable, plan.values[i]);
}

std::vector<std::string> prefix_cells(const SweepPlan& plan, std::size_t i, double beta) {
    std::vector<std::string> cells = {format_double(plan.values[i])};
    if (plan.extra_beta_column) cells.push_back(format_double(beta));
    return cells;
}

RowOut nan_row(std::vector<std::string> prefix, std::size_t width, const std::string& reason) {
    RowOut row;
    row.cells = std::move(prefix);
    while (row.cells.size() + 1 < width) row.cells.push_back("nan");
    row.cells.push_back(sanitize_reason(reason));
    row.failed = true;
    return row;
}

std::string join_reasons(const std::vector<std::string>& reasons) {
    std::string out;
    for (const auto& r : reasons) out += (out.empty() ? "" : "; ") + r;
    return sanitize_reason(out);
}

} // namespace

int cmd_qfi(const QfiOptions& opt) {
    const ModelConfig model = load_config(opt.config_path).model;
    const std::vector<std::string> labels = term_labels(model);
    const std::size_t M = labels.size();
    const SweepPlan plan = plan_sweep(model);

    std::vector<std::string> header = {plan.variable};
    if (plan.extra_beta_column) header.push_back("beta");
    for (const auto& la : labels) {
        for (const auto& lb : labels) header.push_back("qfi_" + la + "_" + lb);
    }
    for (const auto& l : labels) header.push_back("var_" + l);
    for (const auto& l : labels) header.push_back("skew_" + l);
    for (std::size_t a = 0; a < M; ++a) {
        for (std::size_t b = a + 1; b < M; ++b) {
            header.push_back("sat_" + labels[a] + "_" + labels[b]);
        }
    }
    header.push_back("reason");

    auto eval = [&](std::size_t i) -> RowOut {
        const ModelPoint pt = realize_point(model, plan, i);
        auto prefix = prefix_cells(plan, i, pt.beta);
        try {
            const ThermalState rho = thermal_state(pt.H, pt.beta);
            const QfiMatrix F = qfi_matrix(rho, pt.H);

            RowOut row;
            row.cells = std::move(prefix);
            for (std::size_t a = 0; a < M; ++a) {
                for (std::size_t b = 0; b < M; ++b) {
                    row.cells.push_back(
                        format_double(F.values(static_cast<long>(a), static_cast<long>(b))));
                }
            }
            const auto& terms = pt.H.terms();
            for (const auto& t : terms) {
                row.cells.push_back(format_double(variance(rho, t.generator)));
            }
            for (const auto& t : terms) {
                row.cells.push_back(format_double(skew_information(rho, t.generator)));
            }
            for (std::size_t a = 0; a < M; ++a) {
                for (std::size_t b = a + 1; b < M; ++b) {
                    row.cells.push_back(format_double(
                        saturability(rho, terms[a].generator, terms[b].generator)));
                }
            }
            row.cells.push_back("");
            return row;
        } catch (const NumericalError& e) {
            return nan_row(std::move(prefix), header.size(), e.what());
        }
    };

    const auto rows = run_rows(plan.values.size(), opt.threads, eval);
    return write_csv(opt.out_path, header, rows, {"schema = 1"});
}

int cmd_bounds(const BoundsOptions& opt) {
    if (opt.n_samples < 1.0) throw ConfigError("--samples must be >= 1");
    if (!(opt.eps_err > 0.0)) throw ConfigError("--eps-err must be > 0");

    const ModelConfig model = load_config(opt.config_path).model;
    const std::vector<std::string> labels = term_labels(model);
    const SweepPlan plan = plan_sweep(model);

    std::vector<std::string> header = {plan.variable};
    if (plan.extra_beta_column) header.push_back("beta");
    for (const char* name : {"seminorm", "min_gap", "c1_seminorm", "c1_mingap", "c2"}) {
        header.push_back(name);
    }
    for (const auto& l : labels) {
        for (const char* stem :
             {"qfi_", "var_", "skew_", "diag_var_", "eq6_lower_", "eq6_upper_", "eq6_refined_",
              "eq7_lower_", "eq7_upper_", "miller_", "eq9_lower_", "eq9_upper_", "eq10_lower_",
              "eq10_upper_", "estimable_"}) {
            header.push_back(stem + l);
        }
    }
    for (const char* name : {"trace_inv_qfi", "sum_inv_diag", "sample_lower_eq13a",
                             "sample_lower_eq13b", "sample_lower_eq14", "positive_definite",
                             "reason"}) {
        header.push_back(name);
    }

    auto eval = [&](std::size_t i) -> RowOut {
        const ModelPoint pt = realize_point(model, plan, i);
        auto prefix = prefix_cells(plan, i, pt.beta);
        try {
            const ThermalState rho = thermal_state(pt.H, pt.beta);
            const BoundReport report = bound_report(rho, pt.H, opt.n_samples, opt.eps_err);

            RowOut row;
            row.cells = std::move(prefix);
            const BoundContext& ctx = report.context;
            for (double v : {ctx.seminorm, ctx.min_gap, ctx.c1_seminorm, ctx.c1_mingap, ctx.c2}) {
                row.cells.push_back(format_double(v));
            }
            std::vector<std::string> reasons;
            for (const auto& p : report.params) {
                for (double v : {p.qfi_exact, p.variance, p.skew, p.diag_variance, p.eq6_lower,
                                 p.eq6_upper, p.eq6_upper_refined, p.eq7_lower, p.eq7_upper,
                                 p.miller_upper, p.rel_err.eq9_lower, p.rel_err.eq9_upper,
                                 p.rel_err.eq10_lower, p.rel_err.eq10_upper}) {
                    row.cells.push_back(format_double(v));
                }
                row.cells.push_back(p.rel_err.estimable ? "1" : "0");
                if (!p.rel_err.estimable) {
                    reasons.push_back("term " + p.label +
                                      " not estimable (mu = 0, zero variance, or beta = 0)");
                }
            }
            const MultiparamBounds& mp = report.multi;
            for (double v : {mp.trace_inv_qfi, mp.sum_inv_diag, mp.sample_lower_eq13a,
                             mp.sample_lower_eq13b, mp.sample_lower_eq14}) {
                row.cells.push_back(format_double(v));
            }
            row.cells.push_back(mp.positive_definite ? "1" : "0");
            if (!mp.positive_definite) {
                reasons.push_back("qfi matrix not positive definite; trace_inv_qfi is nan");
            }
            row.cells.push_back(join_reasons(reasons));
            return row;
        } catch (const NumericalError& e) {
            return nan_row(std::move(prefix), header.size(), e.what());
        }
    };

    const auto rows = run_rows(plan.values.size(), opt.threads, eval);
    return write_csv(opt.out_path, header, rows,
                     {"n_samples = " + format_double(opt.n_samples),
                      "eps_err = " + format_double(opt.eps_err), "schema = 1"});
}

namespace {

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

int cmd_fig2(const Fig2Options& opt) {
    if (!(opt.mu_beta > 0.0) || !std::isfinite(opt.mu_beta)) {
        throw ConfigError("--mu-beta must be a positive finite number");
    }
    if (!(opt.lambda_beta > 0.0) || !std::isfinite(opt.lambda_beta)) {
        throw ConfigError("--lambda-beta must be a positive finite number");
    }
    if (opt.n_min < 2 || opt.n_max < opt.n_min || opt.n_max > 64) {
        throw ConfigError("need 2 <= n_min <= n_max <= 64, got [" + std::to_string(opt.n_min) +
                          ", " + std::to_string(opt.n_max) + "]");
    }

    const std::vector<std::string> header = {"n",          "relerr_exact", "eq9_lower",
                                             "eq9_upper",  "eq10_lower",   "eq10_upper",
                                             "sql",        "reason"};
    const std::size_t count = static_cast<std::size_t>(opt.n_max - opt.n_min + 1);
    std::vector<double> relerr(count, std::numeric_limits<double>::quiet_NaN());

    auto eval = [&](std::size_t i) -> RowOut {
        const int n = opt.n_min + static_cast<int>(i);
        std::vector<std::string> prefix = {format_double(static_cast<double>(n))};
        try {
            GhzModel gm;
            gm.n = n;
            gm.mu = opt.mu_beta;
            gm.lambda = opt.lambda_beta;
            gm.beta = 1.0;
            const GhzResult r = ghz_exact(gm);
            relerr[i] = 1.0 / (gm.mu * std::sqrt(r.qfi_mu));

            // Spectrum is mu*n +- sqrt(mu^2 z^2 + lambda^2 n^2) over
            // z = -n..n, so the width is exactly 2 n hypot(mu, lambda).
            const double seminorm = 2.0 * n * std::hypot(gm.mu, gm.lambda);
            const double c1 = c1_const(gm.beta, seminorm);
            const double c2 = c2_const(gm.beta, seminorm);
            const double classical = std::max(r.var_Hmu - r.skew_Hmu, 0.0);
            const RelativeErrorBounds rb = relative_error_bounds(
                gm.beta, 1.0, gm.mu, r.var_Hmu, r.skew_Hmu, c1, c2, classical);

            RowOut row;
            row.cells = std::move(prefix);
            for (double v : {relerr[i], rb.eq9_lower, rb.eq9_upper, rb.eq10_lower,
                             rb.eq10_upper, 1.0 / std::sqrt(static_cast<double>(n))}) {
                row.cells.push_back(format_double(v));
            }
            row.cells.push_back("");
            return row;
        } catch (const NumericalError& e) {
            return nan_row(std::move(prefix), header.size(), e.what());
        }
    };

    const auto rows = run_rows(count, opt.threads, eval);

    std::vector<double> fit_n, fit_e;
    for (std::size_t i = 0; i < count; ++i) {
        const int n = opt.n_min + static_cast<int>(i);
        if (n >= 10 && n <= 24 && std::isfinite(relerr[i])) {
            fit_n.push_back(n);
            fit_e.push_back(relerr[i]);
        }
    }
    std::string slope_note;
    if (fit_n.size() >= 2) {
        slope_note = "slope_fit_n10_24 = " + format_double(fit_loglog_slope(fit_n, fit_e)) +
                     " (log-log fit of relerr_exact vs n over n in [10, 24]; SQL slope is -0.5)";
    } else {
        slope_note = "slope_fit_n10_24 = nan (need at least 2 rows with n in [10, 24])";
    }

    return write_csv(opt.out_path, header, rows,
                     {"convention: beta = 1, mu = " + format_double(opt.mu_beta) +
                          ", lambda = " + format_double(opt.lambda_beta) +
                          "; relerr_exact = 1/(mu sqrt(F_mu_mu)) assumes N = 1 sample",
                      slope_note, "schema = 1"});
}

} // namespace thermoqfi::cli
