#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "thermoqfi/errors.hpp"

namespace cli = thermoqfi::cli;

int main(int argc, char** argv) {
    CLI::App app{"Thermal-state quantum Fisher information and metrology bounds"};
    app.require_subcommand(1);

    cli::QfiOptions qfi_opt;
    auto* qfi = app.add_subcommand(
        "qfi", "QFI matrix, variances, skews and saturability for a configured model");
    qfi->add_option("--config", qfi_opt.config_path, "JSON model config path")->required();
    qfi->add_option("--out", qfi_opt.out_path, "output CSV path (default stdout)");
    qfi->add_option("--threads", qfi_opt.threads, "sweep worker threads, 0 = auto")
        ->check(CLI::NonNegativeNumber);

    cli::BoundsOptions bounds_opt;
    auto* bounds = app.add_subcommand(
        "bounds", "QFI bound report with relative-error and sample-count bounds");
    bounds->add_option("--config", bounds_opt.config_path, "JSON model config path")->required();
    bounds->add_option("--samples", bounds_opt.n_samples, "sample count N in the error bounds")
        ->capture_default_str();
    bounds->add_option("--eps-err", bounds_opt.eps_err,
                       "target relative error in the sample-count bounds")
        ->capture_default_str();
    bounds->add_option("--out", bounds_opt.out_path, "output CSV path (default stdout)");
    bounds->add_option("--threads", bounds_opt.threads, "sweep worker threads, 0 = auto")
        ->check(CLI::NonNegativeNumber);

    cli::Fig2Options fig2_opt;
    auto* fig2 = app.add_subcommand(
        "fig2", "GHZ sensor relative error vs qubit count at beta = 1");
    fig2->add_option("--mu-beta", fig2_opt.mu_beta, "mu at beta = 1")->capture_default_str();
    fig2->add_option("--lambda-beta", fig2_opt.lambda_beta, "lambda at beta = 1")
        ->capture_default_str();
    fig2->add_option("--n-min", fig2_opt.n_min, "smallest qubit count")->capture_default_str();
    fig2->add_option("--n-max", fig2_opt.n_max, "largest qubit count")->capture_default_str();
    fig2->add_option("--out", fig2_opt.out_path, "output CSV path (default stdout)");
    fig2->add_option("--threads", fig2_opt.threads, "worker threads, 0 = auto")
        ->check(CLI::NonNegativeNumber);

    cli::SelftestOptions self_opt;
    auto* selftest = app.add_subcommand(
        "selftest", "run the oracle-agreement and bound-sandwich property suite");
    selftest->add_option("--seed", self_opt.seed, "random instance seed")->capture_default_str();
    selftest
        ->add_option("--debug-perturb-c2", self_opt.perturb_c2,
                     "fault injection: scale the c2 constant in the sandwich checks")
        ->group(""); // hidden from --help; only for verifying the checks can fail

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the diagnostic
        return 2;
    }

    try {
        if (qfi->parsed()) return cli::cmd_qfi(qfi_opt);
        if (bounds->parsed()) return cli::cmd_bounds(bounds_opt);
        if (fig2->parsed()) return cli::cmd_fig2(fig2_opt);
        return cli::cmd_selftest(self_opt);
    } catch (const thermoqfi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const thermoqfi::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
