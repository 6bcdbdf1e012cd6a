#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thermoqfi/errors.hpp"

namespace thermoqfi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Dense operators only; 2^14 is plenty for desk-scale exact diagonalization
// and keeps accidental exponential blowups from looking like hangs.
inline constexpr int kDefaultQubitCap = 14;

// Checked on construction against the max absolute entry, so the tolerance
// scales with the operator instead of with an arbitrary unit choice.
inline constexpr double kHermiticityTol = 1e-12;

class HermitianOperator {
public:
    // Validates finiteness and Hermiticity within kHermiticityTol * max|entry|,
    // then stores (A + A^dagger)/2 so downstream solvers see an exactly
    // Hermitian matrix.
    explicit HermitianOperator(Matrix entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }

private:
    Matrix entries_;
};

enum class PauliAxis { X, Y, Z };

struct PauliFactor {
    int site = 0;
    PauliAxis axis = PauliAxis::Z;
};

// Product of single-site Paulis on distinct sites, identity elsewhere.
struct PauliString {
    std::vector<PauliFactor> factors;
    int n_qubits = 0;
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;
};

// Basis convention: site 0 is the leftmost tensor factor (most significant
// bit of the basis index), and sigma_z |1> = +|1>, sigma_z |0> = -|0>.
HermitianOperator build_pauli_operator(const std::vector<PauliTerm>& terms, int n_qubits,
                                       int qubit_cap = kDefaultQubitCap);

struct SpectralDecomposition {
    RealVector eigenvalues; // ascending
    Matrix eigenvectors;    // column j is |j>
};

// Ascending eigenvalues with deterministic ordering. The unitarity and
// reconstruction residuals are verified (1e-10) before returning.
SpectralDecomposition eigendecompose(const HermitianOperator& A);

// ||[A,B]||_2^2 = tr([A,B][A,B]^dagger), the squared Schatten-2 norm.
double commutator_frobenius_sq(const HermitianOperator& A, const HermitianOperator& B);

} // namespace thermoqfi
