#include "ccshare/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "ccshare/errors.hpp"

namespace ccshare {

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

ComplexMatrix z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
} // namespace pauli

namespace {

int product_of(std::span<const int> dims) {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

void check_dims(const std::vector<int> &dims, const ComplexMatrix &m) {
    if (dims.empty()) {
        throw ArgumentError("density matrix needs at least one subsystem");
    }
    for (int d : dims) {
        if (d < 2) {
            throw ArgumentError("subsystem dimension must be >= 2, got " + std::to_string(d));
        }
    }
    const int total = product_of(dims);
    if (m.rows() != total || m.cols() != total) {
        throw ArgumentError("matrix shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            " does not match subsystem dimensions (" + std::to_string(total) + ")");
    }
}

double max_hermitian_defect(const ComplexMatrix &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Insert a zero bit at `pos` (0 = least significant) into `value`.
std::size_t insert_zero_bit(std::size_t value, int pos) {
    const std::size_t low = value & ((std::size_t{1} << pos) - 1);
    const std::size_t high = value >> pos;
    return (high << (pos + 1)) | low;
}

} // namespace

DensityMatrix::DensityMatrix(std::vector<int> dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
    check_dims(dims_, matrix_);
    if (max_hermitian_defect(matrix_) > kHermitianTolerance) {
        throw ArgumentError("density matrix is not Hermitian within 1e-10");
    }
    if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > kTraceTolerance) {
        throw ArgumentError("density matrix trace differs from 1 by more than 1e-10");
    }
    const auto eig = hermitian_eigenvalues(matrix_);
    if (eig.front() < -kPsdTolerance) {
        throw ArgumentError("density matrix has eigenvalue " + std::to_string(eig.front()) + " below -1e-10");
    }
}

DensityMatrix DensityMatrix::trusted(std::vector<int> dims, ComplexMatrix matrix) {
    DensityMatrix rho;
    rho.dims_ = std::move(dims);
    rho.matrix_ = std::move(matrix);
    return rho;
}

DensityMatrix DensityMatrix::from_pure(std::span<const int> dims, const ComplexVector &amplitudes) {
    std::vector<int> d(dims.begin(), dims.end());
    if (amplitudes.size() != product_of(d)) {
        throw ArgumentError("amplitude count does not match subsystem dimensions");
    }
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw ArgumentError("state vector is not normalized");
    }
    ComplexMatrix m = amplitudes * amplitudes.adjoint();
    return trusted(std::move(d), std::move(m));
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    const auto size = static_cast<std::size_t>(amplitudes_.size());
    if (size < 4 || (size & (size - 1)) != 0) {
        throw ArgumentError("pure state length must be 2^N with N >= 2, got " + std::to_string(size));
    }
    num_qubits_ = std::countr_zero(size);
    if (num_qubits_ < kMinQubits || num_qubits_ > kMaxQubits) {
        throw ArgumentError("number of qubits must be in [2, 8], got " + std::to_string(num_qubits_));
    }
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
        throw ArgumentError("pure state is not normalized within 1e-12");
    }
}

PureState PureState::normalized(ComplexVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ArgumentError("cannot normalize a zero or non-finite vector");
    }
    amplitudes /= norm;
    return PureState(std::move(amplitudes));
}

DensityMatrix PureState::density_matrix() const {
    std::vector<int> dims(static_cast<std::size_t>(num_qubits_), 2);
    return DensityMatrix::from_pure(dims, amplitudes_);
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep) {
    const auto &dims = rho.dims();
    const int n = static_cast<int>(dims.size());
    if (keep.empty()) {
        throw ArgumentError("partial_trace: keep set must be non-empty");
    }
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int k : keep) {
        if (k < 1 || k > n) {
            throw ArgumentError("partial_trace: subsystem index " + std::to_string(k) + " out of range [1, " +
                                std::to_string(n) + "]");
        }
        if (kept[static_cast<std::size_t>(k - 1)]) {
            throw ArgumentError("partial_trace: duplicate subsystem index " + std::to_string(k));
        }
        kept[static_cast<std::size_t>(k - 1)] = true;
    }

    std::vector<int> keep_dims;
    std::vector<int> trace_dims;
    for (int s = 0; s < n; ++s) {
        (kept[static_cast<std::size_t>(s)] ? keep_dims : trace_dims).push_back(dims[static_cast<std::size_t>(s)]);
    }
    const int keep_total = product_of(keep_dims);
    const int trace_total = trace_dims.empty() ? 1 : product_of(trace_dims);

    // Strides of each subsystem in the full index (subsystem 0 most significant).
    std::vector<int> stride(static_cast<std::size_t>(n));
    int acc = 1;
    for (int s = n - 1; s >= 0; --s) {
        stride[static_cast<std::size_t>(s)] = acc;
        acc *= dims[static_cast<std::size_t>(s)];
    }

    // full_index(kept multi-index k, traced multi-index t)
    auto offsets = [&](bool want_kept, int total) {
        std::vector<int> off(static_cast<std::size_t>(total), 0);
        for (int idx = 0; idx < total; ++idx) {
            int rem = idx;
            int value = 0;
            for (int s = n - 1; s >= 0; --s) {
                if (kept[static_cast<std::size_t>(s)] != want_kept) continue;
                const int d = dims[static_cast<std::size_t>(s)];
                value += (rem % d) * stride[static_cast<std::size_t>(s)];
                rem /= d;
            }
            off[static_cast<std::size_t>(idx)] = value;
        }
        return off;
    };
    const auto keep_off = offsets(true, keep_total);
    const auto trace_off = offsets(false, trace_total);

    const ComplexMatrix &m = rho.matrix();
    ComplexMatrix out = ComplexMatrix::Zero(keep_total, keep_total);
    for (int r = 0; r < keep_total; ++r) {
        for (int c = 0; c < keep_total; ++c) {
            Complex sum = 0.0;
            for (int t : trace_off) {
                sum += m(keep_off[static_cast<std::size_t>(r)] + t, keep_off[static_cast<std::size_t>(c)] + t);
            }
            out(r, c) = sum;
        }
    }
    return DensityMatrix::trusted(std::move(keep_dims), std::move(out));
}

DensityMatrix reduce_pair(const PureState &psi, int i, int j) {
    const int n = psi.num_qubits();
    if (i < 1 || i > n || j < 1 || j > n) {
        throw ArgumentError("reduce_pair: qubit index out of range [1, " + std::to_string(n) + "]");
    }
    if (i == j) {
        throw ArgumentError("reduce_pair: qubit indices must differ");
    }
    const int pos_i = n - i; // bit position of qubit i
    const int pos_j = n - j;
    const int lo = std::min(pos_i, pos_j);
    const int hi = std::max(pos_i, pos_j);
    const std::size_t bit_i = std::size_t{1} << pos_i;
    const std::size_t bit_j = std::size_t{1} << pos_j;
    const auto &amp = psi.amplitudes();
    const std::size_t rest_count = psi.dimension() >> 2;

    Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
    for (std::size_t r = 0; r < rest_count; ++r) {
        const std::size_t base = insert_zero_bit(insert_zero_bit(r, lo), hi);
        Eigen::Vector4cd v;
        v(0) = amp(static_cast<Eigen::Index>(base));
        v(1) = amp(static_cast<Eigen::Index>(base | bit_j));
        v(2) = amp(static_cast<Eigen::Index>(base | bit_i));
        v(3) = amp(static_cast<Eigen::Index>(base | bit_i | bit_j));
        acc.noalias() += v * v.adjoint();
    }
    return DensityMatrix::trusted({2, 2}, ComplexMatrix(acc));
}

DensityMatrix reduce_single(const PureState &psi, int i) {
    const int n = psi.num_qubits();
    if (i < 1 || i > n) {
        throw ArgumentError("reduce_single: qubit index out of range [1, " + std::to_string(n) + "]");
    }
    const int pos = n - i;
    const std::size_t bit = std::size_t{1} << pos;
    const auto &amp = psi.amplitudes();
    const std::size_t rest_count = psi.dimension() >> 1;
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (std::size_t r = 0; r < rest_count; ++r) {
        const std::size_t base = insert_zero_bit(r, pos);
        Eigen::Vector2cd v(amp(static_cast<Eigen::Index>(base)), amp(static_cast<Eigen::Index>(base | bit)));
        acc.noalias() += v * v.adjoint();
    }
    return DensityMatrix::trusted({2}, ComplexMatrix(acc));
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix &h) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw ArgumentError("hermitian_eigenvalues: matrix must be square and non-empty");
    }
    if (max_hermitian_defect(h) > 1e-8) {
        throw ArgumentError("hermitian_eigenvalues: matrix is not Hermitian within 1e-8");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(h), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eigenvalues: eigensolver did not converge");
    }
    const auto &ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double entropy_of_spectrum(std::span<const double> spectrum) {
    double s = 0.0;
    for (double lambda : spectrum) {
        if (lambda < -1e-8) {
            throw NumericalError("entropy: eigenvalue " + std::to_string(lambda) + " below -1e-8");
        }
        if (lambda > 1e-12) {
            s -= lambda * std::log2(lambda);
        }
    }
    return s;
}

double von_neumann_entropy(const DensityMatrix &rho) {
    const auto eig = hermitian_eigenvalues(rho.matrix());
    return entropy_of_spectrum(eig);
}

double binary_entropy(double p) {
    double s = 0.0;
    if (p > 1e-12) s -= p * std::log2(p);
    const double q = 1.0 - p;
    if (q > 1e-12) s -= q * std::log2(q);
    return s;
}

double qubit_entropy_from_bloch_length(double r) {
    r = std::clamp(r, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + r));
}

ComplexMatrix conjugate(const ComplexMatrix &m, const ComplexMatrix &unitary) {
    return unitary * m * unitary.adjoint();
}

PureState apply_single_qubit(const PureState &psi, int qubit, const ComplexMatrix &unitary) {
    const int n = psi.num_qubits();
    if (qubit < 1 || qubit > n) {
        throw ArgumentError("apply_single_qubit: qubit index out of range");
    }
    if (unitary.rows() != 2 || unitary.cols() != 2) {
        throw ArgumentError("apply_single_qubit: expected a 2x2 unitary");
    }
    const int pos = n - qubit;
    const std::size_t bit = std::size_t{1} << pos;
    ComplexVector out = psi.amplitudes();
    const std::size_t rest_count = psi.dimension() >> 1;
    for (std::size_t r = 0; r < rest_count; ++r) {
        const auto i0 = static_cast<Eigen::Index>(insert_zero_bit(r, pos));
        const auto i1 = static_cast<Eigen::Index>(static_cast<std::size_t>(i0) | bit);
        const Complex a0 = psi.amplitudes()(i0);
        const Complex a1 = psi.amplitudes()(i1);
        out(i0) = unitary(0, 0) * a0 + unitary(0, 1) * a1;
        out(i1) = unitary(1, 0) * a0 + unitary(1, 1) * a1;
    }
    return PureState::normalized(std::move(out));
}

} // namespace ccshare
