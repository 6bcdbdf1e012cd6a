#include "thermoqfi/operators.hpp"

#include <cmath>

namespace thermoqfi {

HermitianOperator::HermitianOperator(Matrix entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1) {
        throw DimensionError("operator must be a nonempty square matrix, got " +
                             std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
    }
    if (!entries.allFinite()) {
        throw ConfigError("operator has non-finite entries");
    }
    const double scale = entries.cwiseAbs().maxCoeff();
    const double deviation = (entries - entries.adjoint().eval()).cwiseAbs().maxCoeff();
    if (deviation > kHermiticityTol * scale) {
        throw ConfigError("matrix is not Hermitian: max |A - A^dagger| = " +
                          std::to_string(deviation) + " exceeds tolerance " +
                          std::to_string(kHermiticityTol * scale));
    }
    entries_ = 0.5 * (entries + entries.adjoint().eval());
}

HermitianOperator build_pauli_operator(const std::vector<PauliTerm>& terms, int n_qubits,
                                       int qubit_cap) {
    if (n_qubits < 1) {
        throw ConfigError("n_qubits must be positive, got " + std::to_string(n_qubits));
    }
    if (n_qubits > qubit_cap) {
        throw ConfigError("n_qubits = " + std::to_string(n_qubits) +
                          " exceeds the dimension cap of " + std::to_string(qubit_cap) +
                          " qubits");
    }
    const long dim = 1L << n_qubits;
    Matrix out = Matrix::Zero(dim, dim);

    for (const PauliTerm& term : terms) {
        if (term.string.n_qubits != n_qubits) {
            throw DimensionError("Pauli string declared for " +
                                 std::to_string(term.string.n_qubits) + " qubits in a " +
                                 std::to_string(n_qubits) + "-qubit operator");
        }
        unsigned long seen = 0;
        for (const PauliFactor& f : term.string.factors) {
            if (f.site < 0 || f.site >= n_qubits) {
                throw ConfigError("Pauli factor site " + std::to_string(f.site) +
                                  " outside [0, " + std::to_string(n_qubits) + ")");
            }
            const unsigned long mask = 1UL << f.site;
            if (seen & mask) {
                throw ConfigError("duplicate site " + std::to_string(f.site) +
                                  " in a Pauli string");
            }
            seen |= mask;
        }
        // Each Pauli string is a monomial: exactly one nonzero per column.
        for (long col = 0; col < dim; ++col) {
            long row = col;
            Complex factor(term.coefficient, 0.0);
            for (const PauliFactor& f : term.string.factors) {
                const long mask = 1L << (n_qubits - 1 - f.site); // site 0 = most significant bit
                const bool bit = (col & mask) != 0;
                switch (f.axis) {
                case PauliAxis::X:
                    row ^= mask;
                    break;
                case PauliAxis::Y:
                    row ^= mask;
                    factor *= bit ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
                    break;
                case PauliAxis::Z:
                    factor *= bit ? 1.0 : -1.0;
                    break;
                }
            }
            out(row, col) += factor;
        }
    }
    return HermitianOperator(std::move(out));
}

SpectralDecomposition eigendecompose(const HermitianOperator& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(A.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed to converge for a dim " +
                             std::to_string(A.dim()) + " operator");
    }
    SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

    const long d = out.eigenvalues.size();
    const double unitarity =
        (out.eigenvectors.adjoint() * out.eigenvectors - Matrix::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
    if (unitarity > 1e-10) {
        throw NumericalError("eigenvector matrix is not unitary: residual " +
                             std::to_string(unitarity));
    }
    const Matrix recon =
        out.eigenvectors * out.eigenvalues.asDiagonal() * out.eigenvectors.adjoint();
    const double scale = A.matrix().norm();
    const double residual = (recon - A.matrix()).norm();
    if (residual > 1e-10 * std::max(scale, 1e-300)) {
        throw NumericalError("spectral reconstruction residual " + std::to_string(residual) +
                             " exceeds 1e-10 relative");
    }
    return out;
}

double commutator_frobenius_sq(const HermitianOperator& A, const HermitianOperator& B) {
    if (A.dim() != B.dim()) {
        throw DimensionError("commutator of dim " + std::to_string(A.dim()) + " with dim " +
                             std::to_string(B.dim()));
    }
    const Matrix C = A.matrix() * B.matrix() - B.matrix() * A.matrix();
    return C.squaredNorm();
}

} // namespace thermoqfi
