#include "ccshare/random_states.hpp"

#include <string>

#include <Eigen/QR>

#include "ccshare/errors.hpp"

namespace ccshare {

std::mt19937_64 make_engine(const SampleSeed &seed) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed.master_seed), hi(seed.master_seed), lo(seed.sample_index), hi(seed.sample_index),
                      0x68617272u};
    return std::mt19937_64(seq);
}

PureState haar_random_pure(int n_qubits, std::mt19937_64 &engine) {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
        throw ArgumentError("haar_random_pure: number of qubits must be in [2, 8], got " + std::to_string(n_qubits));
    }
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector amps(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double re = normal(engine);
        const double im = normal(engine);
        amps(k) = Complex(re, im);
    }
    return PureState::normalized(std::move(amps));
}

PureState haar_random_pure(int n_qubits, const SampleSeed &seed) {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
        throw ArgumentError("haar_random_pure: number of qubits must be in [2, 8], got " + std::to_string(n_qubits));
    }
    auto engine = make_engine(seed);
    return haar_random_pure(n_qubits, engine);
}

ComplexMatrix haar_random_unitary(int dim, std::mt19937_64 &engine) {
    if (dim < 1) {
        throw ArgumentError("haar_random_unitary: dimension must be positive");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const double re = normal(engine);
            const double im = normal(engine);
            g(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        const Complex d = rmat(c, c);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(c) *= d / mag;
    }
    return ComplexMatrix(q);
}

} // namespace ccshare
