#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "thermoqfi/errors.hpp"

namespace thermoqfi::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json& require_key(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double as_finite_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
}

double get_number(const json& j, const std::string& key, const std::string& path) {
    return as_finite_number(require_key(j, key, path), path + "." + key);
}

int get_int(const json& j, const std::string& key, const std::string& path) {
    const json& v = require_key(j, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
    const json& v = require_key(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

PauliAxis parse_axis(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected \"x\", \"y\" or \"z\"");
    const std::string s = j.get<std::string>();
    if (s == "x") return PauliAxis::X;
    if (s == "y") return PauliAxis::Y;
    if (s == "z") return PauliAxis::Z;
    fail(path, "expected \"x\", \"y\" or \"z\", got \"" + s + "\"");
}

std::vector<PauliTerm> parse_pauli_terms(const json& j, int n_qubits, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of Pauli terms");
    std::vector<PauliTerm> out;
    for (std::size_t t = 0; t < j.size(); ++t) {
        const std::string tpath = path + "[" + std::to_string(t) + "]";
        const json& jt = j[t];
        PauliTerm term;
        term.coefficient = get_number(jt, "coefficient", tpath);
        term.string.n_qubits = n_qubits;
        const json& ops = require_key(jt, "ops", tpath);
        if (!ops.is_array()) fail(tpath + ".ops", "expected an array of {site, axis}");
        for (std::size_t f = 0; f < ops.size(); ++f) {
            const std::string fpath = tpath + ".ops[" + std::to_string(f) + "]";
            const json& jf = ops[f];
            PauliFactor factor;
            factor.site = get_int(jf, "site", fpath);
            factor.axis = parse_axis(require_key(jf, "axis", fpath), fpath + ".axis");
            term.string.factors.push_back(factor);
        }
        out.push_back(std::move(term));
    }
    return out;
}

HermitianOperator parse_dense_entries(const json& j, int dim, const std::string& path) {
    if (!j.is_array()) fail(path, "expected a row-major array of [re, im] pairs");
    const std::size_t need = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
    if (j.size() != need) {
        fail(path, "expected " + std::to_string(need) + " [re, im] entries for dim " +
                       std::to_string(dim) + ", got " + std::to_string(j.size()));
    }
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < need; ++i) {
        const std::string epath = path + "[" + std::to_string(i) + "]";
        const json& e = j[i];
        if (!e.is_array() || e.size() != 2) fail(epath, "expected an [re, im] pair");
        const double re = as_finite_number(e[0], epath + "[0]");
        const double im = as_finite_number(e[1], epath + "[1]");
        m(static_cast<long>(i / dim), static_cast<long>(i % dim)) = Complex(re, im);
    }
    try {
        return HermitianOperator(std::move(m));
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
}

int get_dense_dim(const json& j, const std::string& path) {
    const int dim = get_int(j, "dim", path);
    if (dim < 1 || dim > kDenseDimCap) {
        fail(path + ".dim", "must be in [1, " + std::to_string(kDenseDimCap) + "], got " +
                                std::to_string(dim));
    }
    return dim;
}

int get_qubit_count(const json& j, const std::string& key, const std::string& path) {
    const int n = get_int(j, key, path);
    if (n < 1 || n > kCliQubitCap) {
        fail(path + "." + key, "must be in [1, " + std::to_string(kCliQubitCap) +
                                   "], got " + std::to_string(n));
    }
    return n;
}

// Either {"pauli": {...}} or {"dense": {...}}.
HermitianOperator parse_operator_spec(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object with a \"pauli\" or \"dense\" key");
    const bool has_pauli = j.contains("pauli");
    const bool has_dense = j.contains("dense");
    if (has_pauli == has_dense) {
        fail(path, "expected exactly one of \"pauli\" or \"dense\"");
    }
    if (has_pauli) {
        const json& p = j["pauli"];
        const std::string ppath = path + ".pauli";
        const int n_qubits = get_qubit_count(p, "n_qubits", ppath);
        const auto terms =
            parse_pauli_terms(require_key(p, "terms", ppath), n_qubits, ppath + ".terms");
        try {
            return build_pauli_operator(terms, n_qubits);
        } catch (const ConfigError& e) {
            fail(ppath, e.what());
        }
    }
    const json& d = j["dense"];
    const std::string dpath = path + ".dense";
    const int dim = get_dense_dim(d, dpath);
    return parse_dense_entries(require_key(d, "entries", dpath), dim, dpath + ".entries");
}

// Shared shape of the labeled-term lists in the pauli / dense / charges
// payloads; `parse_op` maps the per-term JSON to the generator.
template <typename ParseOp>
std::vector<ParamTerm> parse_labeled_terms(const json& j, const std::string& path,
                                           ParseOp&& parse_op) {
    if (!j.is_array()) fail(path, "expected an array of labeled terms");
    if (j.empty()) fail(path, "needs at least one term");
    std::vector<ParamTerm> out;
    std::set<std::string> seen;
    for (std::size_t t = 0; t < j.size(); ++t) {
        const std::string tpath = path + "[" + std::to_string(t) + "]";
        const json& jt = j[t];
        std::string label = get_string(jt, "label", tpath);
        if (label.empty()) fail(tpath + ".label", "must be nonempty");
        if (!seen.insert(label).second) {
            fail(tpath + ".label", "duplicate label \"" + label + "\"");
        }
        const double mu = get_number(jt, "mu", tpath);
        out.push_back(ParamTerm{std::move(label), mu, parse_op(jt, tpath)});
    }
    return out;
}

void parse_sweep(const json& j, const std::string& path, ModelConfig& m) {
    SweepSpec sweep;
    sweep.variable = get_string(j, "variable", path);
    const auto allowed = sweep_variables(m);
    if (std::find(allowed.begin(), allowed.end(), sweep.variable) == allowed.end()) {
        std::string names;
        for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
        fail(path + ".variable",
             "\"" + sweep.variable + "\" is not a parameter of this model (have: " + names + ")");
    }

    const bool has_values = j.contains("values");
    const bool has_range = j.contains("start") || j.contains("stop") || j.contains("count") ||
                           j.contains("scale");
    if (has_values == has_range) {
        fail(path, "expected either \"values\" or \"start\"/\"stop\"/\"count\"");
    }
    if (has_values) {
        const json& vals = j["values"];
        if (!vals.is_array() || vals.empty()) {
            fail(path + ".values", "expected a nonempty array of numbers");
        }
        for (std::size_t i = 0; i < vals.size(); ++i) {
            sweep.values.push_back(
                as_finite_number(vals[i], path + ".values[" + std::to_string(i) + "]"));
        }
    } else {
        const double start = get_number(j, "start", path);
        const double stop = get_number(j, "stop", path);
        const int count = get_int(j, "count", path);
        if (count < 1) fail(path + ".count", "must be >= 1");
        std::string scale = j.contains("scale") ? get_string(j, "scale", path) : "linear";
        if (scale != "linear" && scale != "log") {
            fail(path + ".scale", "expected \"linear\" or \"log\", got \"" + scale + "\"");
        }
        if (scale == "log" && (start <= 0.0 || stop <= 0.0)) {
            fail(path, "log scale needs start > 0 and stop > 0");
        }
        if (count == 1) {
            sweep.values.push_back(start);
        } else if (scale == "linear") {
            for (int i = 0; i < count; ++i) {
                sweep.values.push_back(start + (stop - start) * i / (count - 1));
            }
        } else {
            const double ls = std::log(start);
            const double le = std::log(stop);
            for (int i = 0; i < count; ++i) {
                sweep.values.push_back(std::exp(ls + (le - ls) * i / (count - 1)));
            }
        }
    }

    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        const std::string vpath = path + " value [" + std::to_string(i) + "]";
        const double v = sweep.values[i];
        if (sweep.variable == "beta") {
            if (v < 0.0) fail(vpath, "beta must be >= 0, got " + std::to_string(v));
        } else if (sweep.variable == "n") {
            if (v != std::floor(v) || v < 2 || v > kCliQubitCap) {
                fail(vpath, "n must be an integer in [2, " + std::to_string(kCliQubitCap) +
                                "], got " + std::to_string(v));
            }
        }
    }
    // Emission walks the values in index order, so sorting here is what
    // keeps output rows ordered by sweep value.
    std::sort(sweep.values.begin(), sweep.values.end());
    m.sweep = std::move(sweep);
}

void parse_model(const json& j, const std::string& path, ModelConfig& m) {
    m.kind = get_string(j, "kind", path);
    static const std::vector<std::string> kinds = {"pauli",     "dense",      "qubit",
                                                   "ghz",       "spin_chain", "charges"};
    if (std::find(kinds.begin(), kinds.end(), m.kind) == kinds.end()) {
        fail(path + ".kind", "unknown model kind \"" + m.kind + "\"");
    }
    for (const auto& other : kinds) {
        if (other != m.kind && j.contains(other)) {
            fail(path + "." + other,
                 "payload does not match kind \"" + m.kind + "\"; remove it or change kind");
        }
    }
    m.beta = get_number(j, "beta", path);
    if (m.beta < 0.0) fail(path + ".beta", "must be >= 0");

    const json& payload = require_key(j, m.kind, path);
    const std::string ppath = path + "." + m.kind;

    if (m.kind == "qubit") {
        m.qubit.omega_x = get_number(payload, "omega_x", ppath);
        m.qubit.omega_z = get_number(payload, "omega_z", ppath);
        m.qubit.mu = get_number(payload, "mu", ppath);
    } else if (m.kind == "ghz" || m.kind == "spin_chain") {
        m.n = get_qubit_count(payload, "n", ppath);
        if (m.n < 2) fail(ppath + ".n", "must be >= 2");
        m.mu = get_number(payload, "mu", ppath);
        m.lambda = get_number(payload, "lambda", ppath);
    } else if (m.kind == "pauli") {
        const int n_qubits = get_qubit_count(payload, "n_qubits", ppath);
        if (payload.contains("fixed")) {
            const auto fixed_terms =
                parse_pauli_terms(payload["fixed"], n_qubits, ppath + ".fixed");
            try {
                m.fixed = build_pauli_operator(fixed_terms, n_qubits);
            } catch (const ConfigError& e) {
                fail(ppath + ".fixed", e.what());
            }
        }
        m.terms = parse_labeled_terms(
            require_key(payload, "terms", ppath), ppath + ".terms",
            [&](const json& jt, const std::string& tpath) {
                const auto strings =
                    parse_pauli_terms(require_key(jt, "strings", tpath), n_qubits,
                                      tpath + ".strings");
                try {
                    return build_pauli_operator(strings, n_qubits);
                } catch (const ConfigError& e) {
                    fail(tpath + ".strings", e.what());
                }
            });
    } else if (m.kind == "dense") {
        const int dim = get_dense_dim(payload, ppath);
        if (payload.contains("fixed")) {
            m.fixed = parse_dense_entries(payload["fixed"], dim, ppath + ".fixed");
        }
        m.terms = parse_labeled_terms(require_key(payload, "terms", ppath), ppath + ".terms",
                                      [&](const json& jt, const std::string& tpath) {
                                          return parse_dense_entries(
                                              require_key(jt, "entries", tpath), dim,
                                              tpath + ".entries");
                                      });
    } else { // charges
        m.fixed = parse_operator_spec(require_key(payload, "h0", ppath), ppath + ".h0");
        m.terms = parse_labeled_terms(require_key(payload, "charges", ppath), ppath + ".charges",
                                      [&](const json& jt, const std::string& tpath) {
                                          return parse_operator_spec(
                                              require_key(jt, "operator", tpath),
                                              tpath + ".operator");
                                      });
    }

    // Surface dimension mismatches and broken charge commutation now, with a
    // config path, instead of later inside a sweep row.
    try {
        realize(m);
    } catch (const ConfigError& e) {
        fail(ppath, e.what());
    }

    if (j.contains("sweep")) {
        parse_sweep(j["sweep"], path + ".sweep", m);
    }
}

} // namespace

std::vector<std::string> term_labels(const ModelConfig& m) {
    if (m.kind == "qubit") return {"mu"};
    if (m.kind == "ghz") return {"mu"};
    if (m.kind == "spin_chain") return {"mu", "lambda"};
    std::vector<std::string> out;
    for (const auto& t : m.terms) out.push_back(t.label);
    return out;
}

std::vector<std::string> sweep_variables(const ModelConfig& m) {
    std::vector<std::string> out = {"beta"};
    if (m.kind == "ghz" || m.kind == "spin_chain") out.push_back("n");
    for (auto& label : term_labels(m)) out.push_back(std::move(label));
    // lambda scales the GHZ fixed term rather than a generator, but it is
    // still a model parameter worth sweeping.
    if (m.kind == "ghz") out.push_back("lambda");
    return out;
}

ModelPoint realize(const ModelConfig& m, const std::string& variable, double value) {
    double beta = m.beta;
    QubitModel qubit = m.qubit;
    int n = m.n;
    double mu = m.mu;
    double lambda = m.lambda;

    const bool named_kind = m.kind == "qubit" || m.kind == "ghz" || m.kind == "spin_chain";
    bool term_sweep = false;
    if (variable == "beta") {
        beta = value;
    } else if (!variable.empty()) {
        if (variable == "n" && (m.kind == "ghz" || m.kind == "spin_chain")) {
            n = static_cast<int>(std::lround(value));
        } else if (m.kind == "qubit" && variable == "mu") {
            qubit.mu = value;
        } else if ((m.kind == "ghz" || m.kind == "spin_chain") &&
                   (variable == "mu" || variable == "lambda")) {
            (variable == "mu" ? mu : lambda) = value;
        } else if (!named_kind) {
            term_sweep = true;
        } else {
            throw ConfigError("\"" + variable + "\" is not a parameter of this model");
        }
    }

    if (m.kind == "qubit") {
        return {qubit_model(qubit), beta};
    }
    if (m.kind == "ghz") {
        return {ghz_dense_model(n, mu, lambda), beta};
    }
    if (m.kind == "spin_chain") {
        return {spin_chain(n, mu, lambda), beta};
    }

    std::vector<ParamTerm> terms = m.terms;
    if (term_sweep) {
        bool found = false;
        for (auto& t : terms) {
            if (t.label == variable) {
                t.mu = value;
                found = true;
            }
        }
        if (!found) {
            throw ConfigError("sweep variable \"" + variable + "\" is not a term label");
        }
    }
    if (m.kind == "charges") {
        return {charge_model(*m.fixed, std::move(terms)), beta};
    }
    return {ParamHamiltonian(m.fixed, std::move(terms)), beta};
}

ModelPoint realize(const ModelConfig& m) { return realize(m, "", 0.0); }

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.what() already carries line/column diagnostics.
        throw ConfigError(path + ": " + e.what());
    }

    if (!j.is_object()) throw ConfigError("$: expected a JSON object");
    const json& schema = require_key(j, "schema", "$");
    if (!schema.is_number_integer() || schema.get<int>() != 1) {
        fail("$.schema", "unsupported schema version (expected 1)");
    }

    AppConfig cfg;
    parse_model(require_key(j, "model", "$"), "$.model", cfg.model);
    return cfg;
}

} // namespace thermoqfi::cli
