#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermoqfi/models.hpp"

namespace thermoqfi::cli {

// Largest dense matrix dimension accepted from a config file. Keeps a typo
// in "dim" from allocating gigabytes before the eigensolver ever runs.
inline constexpr int kDenseDimCap = 4096;

// Qubit ceiling for config-driven models, below the core cap: a 12-qubit
// dense operator is 4096^2 complex entries (256 MB), already the practical
// edge for repeated eigendecompositions in a sweep.
inline constexpr int kCliQubitCap = 12;

struct SweepSpec {
    std::string variable;
    std::vector<double> values; // expanded and sorted ascending
};

// One parsed model block. The payload fields for the five named kinds are
// kept as plain values so the Hamiltonian can be rebuilt at any sweep point;
// pauli / dense / charges payloads are stored as finished operator pieces.
struct ModelConfig {
    std::string kind; // pauli | dense | qubit | ghz | spin_chain | charges
    double beta = 0.0;
    std::optional<SweepSpec> sweep;

    QubitModel qubit;

    int n = 0;
    double mu = 0.0;
    double lambda = 0.0;

    std::optional<HermitianOperator> fixed;
    std::vector<ParamTerm> terms;
};

struct AppConfig {
    ModelConfig model;
};

// Reads and validates a JSON config. Throws ConfigError with the JSON path
// of the offending field (or the line/column of a syntax error).
AppConfig load_config(const std::string& path);

// Labels of the parameters the model exposes to the QFI pipeline.
std::vector<std::string> term_labels(const ModelConfig& m);

// Sweep variables load_config accepts for this model: "beta" always, "n"
// for the qubit-count models, and every term label.
std::vector<std::string> sweep_variables(const ModelConfig& m);

struct ModelPoint {
    ParamHamiltonian H;
    double beta = 0.0;
};

// The Hamiltonian and inverse temperature with `variable` set to `value`.
ModelPoint realize(const ModelConfig& m, const std::string& variable, double value);
ModelPoint realize(const ModelConfig& m);

} // namespace thermoqfi::cli
