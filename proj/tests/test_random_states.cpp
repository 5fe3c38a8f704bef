#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ccshare/errors.hpp"
#include "ccshare/linalg.hpp"
#include "ccshare/measures.hpp"
#include "ccshare/random_states.hpp"

using namespace ccshare;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

double sum_cxx(const PureState &psi) {
    double s = 0.0;
    for (int i = 2; i <= psi.num_qubits(); ++i) {
        s += classical_correlator(reduce_pair(psi, 1, i), Direction::x(), Direction::x(), CorrelatorVariant::absolute);
    }
    return s;
}

} // namespace

TEST_CASE("samples are normalized") {
    for (int n = 2; n <= 8; ++n) {
        for (std::uint64_t k = 0; k < 10; ++k) {
            const auto psi = haar_random_pure(n, SampleSeed{1, k});
            CHECK(psi.num_qubits() == n);
            CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("qubit count is validated") {
    CHECK_THROWS_AS(haar_random_pure(1, SampleSeed{1, 0}), ArgumentError);
    CHECK_THROWS_AS(haar_random_pure(9, SampleSeed{1, 0}), ArgumentError);
}

TEST_CASE("same seed gives the same state bit for bit") {
    const auto a = haar_random_pure(5, SampleSeed{42, 1234});
    const auto b = haar_random_pure(5, SampleSeed{42, 1234});
    CHECK(a.amplitudes() == b.amplitudes());
    const auto c = haar_random_pure(5, SampleSeed{42, 1235});
    const auto d = haar_random_pure(5, SampleSeed{43, 1234});
    CHECK(a.amplitudes() != c.amplitudes());
    CHECK(a.amplitudes() != d.amplitudes());
}

TEST_CASE("mean marginal purity of two-qubit states") {
    // E[tr rho_A^2] = (dA + dB) / (dA dB + 1) = 4/5
    constexpr std::uint64_t samples = 1'000'000;
    double total = 0.0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        const auto psi = haar_random_pure(2, SampleSeed{2024, k});
        const auto &v = psi.amplitudes();
        // rho_A = M M^dagger with M the 2x2 reshaping of the amplitudes
        const Complex a = std::norm(v[0]) + std::norm(v[1]);
        const Complex d = std::norm(v[2]) + std::norm(v[3]);
        const Complex b = v[0] * std::conj(v[2]) + v[1] * std::conj(v[3]);
        total += (a * a + d * d).real() + 2.0 * std::norm(b);
    }
    CHECK(std::abs(total / samples - 0.8) < 0.002);
}

TEST_CASE("haar unitaries are unitary") {
    auto engine = make_engine({3, 0});
    for (int dim : {2, 4, 8}) {
        const auto u = haar_random_unitary(dim, engine);
        CHECK((u * u.adjoint() - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("distribution is invariant under a fixed local unitary") {
    constexpr std::uint64_t samples = 10'000;
    auto engine = make_engine({99, 0});
    const auto u = haar_random_unitary(2, engine);
    std::vector<double> plain, rotated;
    for (std::uint64_t k = 0; k < samples; ++k) {
        plain.push_back(sum_cxx(haar_random_pure(3, SampleSeed{7, k})));
        rotated.push_back(sum_cxx(apply_single_qubit(haar_random_pure(3, SampleSeed{8, k}), 2, u)));
    }
    // 1% critical value for equal sample sizes: 1.628 * sqrt(2 / n)
    CHECK(ks_statistic(plain, rotated) < 1.628 * std::sqrt(2.0 / samples));
}
