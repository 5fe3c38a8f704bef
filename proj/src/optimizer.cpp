#include "ccshare/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ccshare/errors.hpp"

namespace ccshare {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double checked(double value, const BlochMeasurement &m) {
    if (!std::isfinite(value)) {
        throw OptimizationError("objective returned a non-finite value at theta=" + std::to_string(m.theta) +
                                    ", phi=" + std::to_string(m.phi),
                                m.theta, m.phi);
    }
    return value;
}

// Hemisphere grid; the pole appears once.
std::vector<BlochMeasurement> hemisphere_grid(int points_theta, int points_phi) {
    std::vector<BlochMeasurement> grid;
    grid.reserve(static_cast<std::size_t>(points_theta * points_phi));
    grid.push_back({0.0, 0.0});
    for (int t = 1; t < points_theta; ++t) {
        const double theta = kHalfPi * t / (points_theta - 1);
        for (int p = 0; p < points_phi; ++p) {
            grid.push_back({theta, kTwoPi * p / points_phi});
        }
    }
    return grid;
}

} // namespace

Eigen::Vector3d BlochMeasurement::axis() const {
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

BlochMeasurement BlochMeasurement::canonical(double theta, double phi) {
    const double st = std::sin(theta);
    double x = st * std::cos(phi);
    double y = st * std::sin(phi);
    double z = std::cos(theta);
    if (z < 0.0) {
        x = -x;
        y = -y;
        z = -z;
    }
    const double t = std::acos(std::min(1.0, z));
    double p = std::atan2(y, x);
    if (p < 0.0) p += kTwoPi;
    if (p >= kTwoPi) p -= kTwoPi;
    return {t, p};
}

void OptimizerSettings::validate() const {
    if (grid_points_theta < 8 || grid_points_phi < 8) {
        throw ArgumentError("optimizer grid needs at least 8 points per angle");
    }
    if (!(refine_tolerance > 0.0)) {
        throw ArgumentError("optimizer refine tolerance must be positive");
    }
    if (max_refine_iterations < 0) {
        throw ArgumentError("optimizer iteration cap must be non-negative");
    }
}

std::pair<ComplexMatrix, ComplexMatrix> bloch_projectors(const BlochMeasurement &m) {
    const Eigen::Vector3d n = m.axis();
    const ComplexMatrix n_sigma = n.x() * pauli::x() + n.y() * pauli::y() + n.z() * pauli::z();
    const ComplexMatrix id = pauli::identity();
    return {0.5 * (id + n_sigma), 0.5 * (id - n_sigma)};
}

int product_grid_points(int grid_points) { return std::max(8, (grid_points + 3) / 4); }

BasisOptimum minimize_over_qubit_basis(const BasisObjective &objective, const OptimizerSettings &settings) {
    settings.validate();
    BasisOptimum best{{0.0, 0.0}, 0.0};
    bool first = true;
    for (const auto &m : hemisphere_grid(settings.grid_points_theta, settings.grid_points_phi)) {
        const double v = checked(objective(m), m);
        if (first || v < best.value) {
            best = {m, v};
            first = false;
        }
    }

    auto f = [&](const std::array<double, 2> &x) {
        const auto m = BlochMeasurement::canonical(x[0], x[1]);
        return checked(objective(m), m);
    };
    const std::array<double, 2> step{kHalfPi / (settings.grid_points_theta - 1), kTwoPi / settings.grid_points_phi};
    const auto refined = nelder_mead<2>(f, {best.basis.theta, best.basis.phi}, step, settings.refine_tolerance,
                                        settings.max_refine_iterations);
    if (refined.value < best.value) {
        best = {BlochMeasurement::canonical(refined.x[0], refined.x[1]), refined.value};
    }
    return best;
}

ProductBasisOptimum maximize_over_product_bases(const ProductBasisObjective &objective,
                                                const OptimizerSettings &settings) {
    settings.validate();
    const int pt = product_grid_points(settings.grid_points_theta);
    const int pp = product_grid_points(settings.grid_points_phi);
    const auto grid = hemisphere_grid(pt, pp);

    ProductBasisOptimum best{};
    bool first = true;
    for (const auto &a : grid) {
        for (const auto &b : grid) {
            const double v = objective(a, b);
            if (!std::isfinite(v)) {
                throw OptimizationError("objective returned a non-finite value", a.theta, a.phi);
            }
            if (first || v > best.value) {
                best = {a, b, v};
                first = false;
            }
        }
    }

    auto f = [&](const std::array<double, 4> &x) {
        const auto a = BlochMeasurement::canonical(x[0], x[1]);
        const auto b = BlochMeasurement::canonical(x[2], x[3]);
        const double v = objective(a, b);
        if (!std::isfinite(v)) {
            throw OptimizationError("objective returned a non-finite value", a.theta, a.phi);
        }
        return -v;
    };
    const double st = kHalfPi / (pt - 1);
    const double sp = kTwoPi / pp;
    const auto refined = nelder_mead<4>(
        f, {best.first.theta, best.first.phi, best.second.theta, best.second.phi}, {st, sp, st, sp},
        settings.refine_tolerance, settings.max_refine_iterations);
    if (-refined.value > best.value) {
        best = {BlochMeasurement::canonical(refined.x[0], refined.x[1]),
                BlochMeasurement::canonical(refined.x[2], refined.x[3]), -refined.value};
    }
    return best;
}

} // namespace ccshare
