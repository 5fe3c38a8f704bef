#pragma once

// Dense complex linear algebra for small multiqubit systems (dimension <= 256).
//
// Qubits are numbered 1..N in the public API. Qubit 1 is the most significant
// bit of a computational-basis index, i.e. |q1 q2 ... qN>.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ccshare {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr int kMinQubits = 2;
inline constexpr int kMaxQubits = 8;

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
} // namespace pauli

// Hermitian, positive semidefinite, unit-trace matrix over a tensor product of
// subsystems with the given dimensions.
class DensityMatrix {
public:
    // Validates all invariants; throws ArgumentError on violation.
    DensityMatrix(std::vector<int> dims, ComplexMatrix matrix);

    // Skips the spectral checks. For callers whose construction guarantees the
    // invariants (Gram matrices of normalized vectors, partial traces).
    static DensityMatrix trusted(std::vector<int> dims, ComplexMatrix matrix);

    static DensityMatrix from_pure(std::span<const int> dims, const ComplexVector &amplitudes);

    const std::vector<int> &dims() const noexcept { return dims_; }
    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    int dimension() const noexcept { return static_cast<int>(matrix_.rows()); }

private:
    DensityMatrix() = default;
    std::vector<int> dims_;
    ComplexMatrix matrix_;
};

class PureState {
public:
    // Requires 2 <= N <= 8, length 2^N and unit norm within 1e-12.
    explicit PureState(ComplexVector amplitudes);

    // Normalizes first; throws on a zero vector.
    static PureState normalized(ComplexVector amplitudes);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const ComplexVector &amplitudes() const noexcept { return amplitudes_; }

    DensityMatrix density_matrix() const;

private:
    int num_qubits_ = 0;
    ComplexVector amplitudes_;
};

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);

// Reduced state on the subsystems in `keep` (1-based, any order; the result
// keeps them in ascending order).
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep);

// Two-qubit reduction rho_{ij} of a pure state, with qubit i as the first
// subsystem. Built from amplitudes without forming the full projector.
DensityMatrix reduce_pair(const PureState &psi, int i, int j);

// Single-qubit reduction rho_i.
DensityMatrix reduce_single(const PureState &psi, int i);

// Real eigenvalues in ascending order.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix &h);

// Entropy in bits of a probability spectrum; entries <= 1e-12 contribute zero.
double entropy_of_spectrum(std::span<const double> spectrum);

// S(rho) = -tr(rho log2 rho).
double von_neumann_entropy(const DensityMatrix &rho);

// Binary entropy h(p) in bits.
double binary_entropy(double p);

// Entropy of a qubit state with Bloch vector length r: h((1 + r) / 2).
double qubit_entropy_from_bloch_length(double r);

ComplexMatrix conjugate(const ComplexMatrix &m, const ComplexMatrix &unitary);

// Applies a single-qubit unitary to qubit `qubit` (1-based) of a pure state.
PureState apply_single_qubit(const PureState &psi, int qubit, const ComplexMatrix &unitary);

} // namespace ccshare
