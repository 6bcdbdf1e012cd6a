#pragma once

#include <string>

namespace thermoqfi::cli {

struct QfiOptions {
    std::string config_path;
    std::string out_path; // empty writes to stdout
    int threads = 0;      // 0 picks the hardware thread count
};

struct BoundsOptions {
    std::string config_path;
    std::string out_path;
    int threads = 0;
    double n_samples = 1.0;
    double eps_err = 1e-2;
};

struct Fig2Options {
    double mu_beta = 3.0;
    double lambda_beta = 6.0;
    int n_min = 2;
    int n_max = 24;
    std::string out_path;
    int threads = 0;
};

struct SelftestOptions {
    unsigned long long seed = 0;
    // Debug fault injection: scales the c2 constant inside the sandwich
    // checks. Any value != 1 must make the suite fail; used to prove the
    // checks can actually detect a broken bound.
    double perturb_c2 = 1.0;
};

// Each command returns the process exit code: 0 on success, 3 when any
// emitted row recorded a numerical failure (the CSV is still complete, with
// "nan" cells and a reason). Config problems throw ConfigError.
int cmd_qfi(const QfiOptions& opt);
int cmd_bounds(const BoundsOptions& opt);
int cmd_fig2(const Fig2Options& opt);
int cmd_selftest(const SelftestOptions& opt);

} // namespace thermoqfi::cli
