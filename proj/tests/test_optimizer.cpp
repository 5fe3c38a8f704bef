#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ccshare/errors.hpp"
#include "ccshare/fixtures.hpp"
#include "ccshare/measures.hpp"
#include "ccshare/optimizer.hpp"
#include "ccshare/random_states.hpp"
#include "oracles.hpp"

using namespace ccshare;

namespace {

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

// Conditional entropy after measuring party 2, computed from 4x4 matrices.
double conditional_entropy_dense(const DensityMatrix &rho, const BlochMeasurement &m) {
    const auto [p0, p1] = bloch_projectors(m);
    double total = 0.0;
    for (const auto &p : {p0, p1}) {
        const ComplexMatrix proj = oracle::kron(ComplexMatrix::Identity(2, 2), p);
        const ComplexMatrix post = proj * rho.matrix() * proj;
        const double prob = post.trace().real();
        if (prob < 1e-14) continue;
        ComplexMatrix r1 = ComplexMatrix::Zero(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) r1(a, b) = post(2 * a, 2 * b) + post(2 * a + 1, 2 * b + 1);
        total += prob * oracle::qubit_entropy(r1 / prob);
    }
    return total;
}

} // namespace

TEST_CASE("bloch projectors") {
    const auto [z0, z1] = bloch_projectors({0.0, 0.0});
    ComplexMatrix up = ComplexMatrix::Zero(2, 2), down = ComplexMatrix::Zero(2, 2);
    up(0, 0) = 1.0;
    down(1, 1) = 1.0;
    CHECK(max_abs_diff(z0, up) < 1e-15);
    CHECK(max_abs_diff(z1, down) < 1e-15);

    const auto [x0, x1] = bloch_projectors({std::numbers::pi / 2, 0.0});
    CHECK(max_abs_diff(x0, 0.5 * (pauli::identity() + pauli::x())) < 1e-15);
    CHECK(max_abs_diff(x1, 0.5 * (pauli::identity() - pauli::x())) < 1e-15);

    for (int k = 0; k < 50; ++k) {
        const BlochMeasurement m{0.03 * k, 0.13 * k};
        const auto [p0, p1] = bloch_projectors(m);
        CHECK((p0 * p1).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(max_abs_diff(p0 + p1, pauli::identity()) < 1e-12);
        CHECK(max_abs_diff(p0 * p0, p0) < 1e-12);
    }
}

TEST_CASE("canonical angles describe the same projector pair") {
    for (int k = 0; k < 40; ++k) {
        const double theta = -3.0 + 0.37 * k;
        const double phi = 5.0 - 0.61 * k;
        const auto c = BlochMeasurement::canonical(theta, phi);
        CHECK(c.theta >= 0.0);
        CHECK(c.theta <= std::numbers::pi / 2 + 1e-15);
        CHECK(c.phi >= 0.0);
        CHECK(c.phi < 2 * std::numbers::pi);
        const Eigen::Vector3d raw(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
        CHECK(std::abs(std::abs(raw.dot(c.axis())) - 1.0) < 1e-12);
    }
}

TEST_CASE("settings validation") {
    OptimizerSettings s;
    CHECK_NOTHROW(s.validate());
    s.grid_points_theta = 7;
    CHECK_THROWS_AS(s.validate(), ArgumentError);
    s = {};
    s.refine_tolerance = 0.0;
    CHECK_THROWS_AS(s.validate(), ArgumentError);
}

TEST_CASE("constant objective") {
    const auto r = minimize_over_qubit_basis([](const BlochMeasurement &) { return 0.375; });
    CHECK(r.value == 0.375);
    const auto p = maximize_over_product_bases([](const BlochMeasurement &, const BlochMeasurement &) { return -2.5; });
    CHECK(p.value == -2.5);
}

TEST_CASE("non-finite objective raises with the offending angles") {
    const auto bad = [](const BlochMeasurement &m) {
        return m.theta > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    };
    try {
        minimize_over_qubit_basis(bad);
        FAIL("expected OptimizationError");
    } catch (const OptimizationError &e) {
        CHECK(e.theta() > 0.5);
    }
}

TEST_CASE("GHZ pair: conditional entropy vanishes in the z basis") {
    const auto bloch = TwoQubitBloch::from(reduce_pair(ghz_state(3), 1, 2));
    const auto r = minimize_over_qubit_basis([&](const BlochMeasurement &m) { return conditional_entropy_after(bloch, m); });
    CHECK(std::abs(r.value) < 1e-9);
    CHECK(r.basis.theta < 1e-3);
}

TEST_CASE("optimizer is at least as good as a fine grid") {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto rho = reduce_pair(haar_random_pure(3, SampleSeed{31, k}), 1, 2);
        const auto objective = [&](const BlochMeasurement &m) { return conditional_entropy_dense(rho, m); };
        const double found = minimize_over_qubit_basis(objective).value;
        double fine = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 180; ++i)
            for (int j = 0; j < 360; ++j)
                fine = std::min(fine, objective({std::numbers::pi * i / 180.0, 2 * std::numbers::pi * j / 360.0}));
        CHECK(found <= fine + 1e-4);
    }
}

TEST_CASE("product-basis maximization") {
    const auto product = DensityMatrix(
        {2, 2}, oracle::kron(reduce_single(haar_random_pure(2, SampleSeed{1, 0}), 1).matrix(),
                             reduce_single(haar_random_pure(2, SampleSeed{1, 1}), 2).matrix()));
    const auto pb = TwoQubitBloch::from(product);
    const auto zero = maximize_over_product_bases(
        [&](const BlochMeasurement &a, const BlochMeasurement &b) { return outcome_mutual_information(pb, a, b); });
    CHECK(std::abs(zero.value) < 1e-9);

    ComplexVector bell = ComplexVector::Zero(4);
    bell[0] = bell[3] = 1.0 / std::numbers::sqrt2;
    const auto bb = TwoQubitBloch::from(PureState(bell).density_matrix());
    const auto one = maximize_over_product_bases(
        [&](const BlochMeasurement &a, const BlochMeasurement &b) { return outcome_mutual_information(bb, a, b); });
    CHECK(std::abs(one.value - 1.0) < 1e-6);
}

TEST_CASE("optimizer is deterministic") {
    const auto rho = reduce_pair(haar_random_pure(4, SampleSeed{5, 5}), 1, 4);
    CHECK(cqd(rho) == cqd(rho));
    CHECK(local_work(rho) == local_work(rho));
    CHECK(measured_mutual_information(rho) == measured_mutual_information(rho));
}

TEST_CASE("nelder-mead finds a shifted quadratic minimum") {
    const auto f = [](const std::array<double, 2> &x) {
        return (x[0] - 1.0) * (x[0] - 1.0) + 3.0 * (x[1] + 0.5) * (x[1] + 0.5) + 2.0;
    };
    const auto r = nelder_mead<2>(f, {0.0, 0.0}, {0.5, 0.5}, 1e-12, 1000);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
    CHECK(std::abs(r.x[1] + 0.5) < 1e-4);
    CHECK(std::abs(r.value - 2.0) < 1e-10);
}

TEST_CASE("product grid size") {
    CHECK(product_grid_points(31) == 8);
    CHECK(product_grid_points(61) == 16);
}
