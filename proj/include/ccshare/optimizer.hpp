#pragma once

// Derivative-free optimization over rank-1 projective qubit measurements.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>

#include <Eigen/Core>

#include "ccshare/linalg.hpp"

namespace ccshare {

// Measurement basis given by the Bloch angles of its "+" axis. The axis n and
// -n define the same unordered projector pair, so theta is restricted to
// [0, pi/2].
struct BlochMeasurement {
    double theta = 0.0;
    double phi = 0.0;

    Eigen::Vector3d axis() const;

    // Canonical representative (theta in [0, pi/2], phi in [0, 2pi)) of the
    // projector pair for arbitrary angles.
    static BlochMeasurement canonical(double theta, double phi);
};

struct OptimizerSettings {
    int grid_points_theta = 31;
    int grid_points_phi = 31;
    double refine_tolerance = 1e-7;
    int max_refine_iterations = 200;

    // Throws ArgumentError unless grid points >= 8 and tolerance > 0.
    void validate() const;
};

// {P_0, P_1} = {(I + n.sigma)/2, (I - n.sigma)/2}.
std::pair<ComplexMatrix, ComplexMatrix> bloch_projectors(const BlochMeasurement &m);

struct BasisOptimum {
    BlochMeasurement basis;
    double value = 0.0;
};

struct ProductBasisOptimum {
    BlochMeasurement first;
    BlochMeasurement second;
    double value = 0.0;
};

using BasisObjective = std::function<double(const BlochMeasurement &)>;
using ProductBasisObjective = std::function<double(const BlochMeasurement &, const BlochMeasurement &)>;

// Coarse theta x phi grid over the hemisphere, then Nelder-Mead from the best
// grid point. The returned value never exceeds the best grid value.
BasisOptimum minimize_over_qubit_basis(const BasisObjective &objective, const OptimizerSettings &settings = {});

// Product grid of hemisphere directions for both parties, then a joint
// four-angle Nelder-Mead. The returned value is never below the best grid value.
ProductBasisOptimum maximize_over_product_bases(const ProductBasisObjective &objective,
                                                const OptimizerSettings &settings = {});

// Points per angle of the per-party grid used by maximize_over_product_bases.
int product_grid_points(int grid_points);

template <std::size_t D>
struct NelderMeadResult {
    std::array<double, D> x{};
    double value = 0.0;
    int iterations = 0;
};

// Downhill simplex minimization in D dimensions. Stops when the spread of
// simplex values is within `tolerance` and the simplex diameter is within
// sqrt(tolerance), or after `max_iterations`.
template <std::size_t D, class F>
NelderMeadResult<D> nelder_mead(F &&f, const std::array<double, D> &start, const std::array<double, D> &step,
                                double tolerance, int max_iterations) {
    using Point = std::array<double, D>;
    constexpr double alpha = 1.0;
    constexpr double gamma = 2.0;
    constexpr double rho = 0.5;
    constexpr double sigma = 0.5;

    std::array<Point, D + 1> simplex{};
    std::array<double, D + 1> values{};
    simplex[0] = start;
    for (std::size_t k = 0; k < D; ++k) {
        simplex[k + 1] = start;
        simplex[k + 1][k] += step[k];
    }
    for (std::size_t k = 0; k <= D; ++k) values[k] = f(simplex[k]);

    std::array<std::size_t, D + 1> order{};
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::array<Point, D + 1> s2{};
        std::array<double, D + 1> v2{};
        for (std::size_t k = 0; k <= D; ++k) {
            s2[k] = simplex[order[k]];
            v2[k] = values[order[k]];
        }
        simplex = s2;
        values = v2;
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t k = 1; k <= D; ++k) {
            for (std::size_t c = 0; c < D; ++c) d = std::max(d, std::abs(simplex[k][c] - simplex[0][c]));
        }
        return d;
    };
    auto affine = [](const Point &a, const Point &b, double t) {
        Point p{};
        for (std::size_t c = 0; c < D; ++c) p[c] = a[c] + t * (b[c] - a[c]);
        return p;
    };

    const double size_tolerance = std::sqrt(tolerance);
    int iter = 0;
    sort_simplex();
    for (; iter < max_iterations; ++iter) {
        if (values[D] - values[0] <= tolerance && diameter() <= size_tolerance) break;

        Point centroid{};
        for (std::size_t k = 0; k < D; ++k) {
            for (std::size_t c = 0; c < D; ++c) centroid[c] += simplex[k][c] / static_cast<double>(D);
        }
        const Point reflected = affine(centroid, simplex[D], -alpha);
        const double fr = f(reflected);
        if (fr < values[0]) {
            const Point expanded = affine(centroid, simplex[D], -gamma);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[D] = expanded;
                values[D] = fe;
            } else {
                simplex[D] = reflected;
                values[D] = fr;
            }
        } else if (fr < values[D - 1]) {
            simplex[D] = reflected;
            values[D] = fr;
        } else {
            const bool outside = fr < values[D];
            const Point contracted = outside ? affine(centroid, reflected, rho) : affine(centroid, simplex[D], rho);
            const double fc = f(contracted);
            if (fc < (outside ? fr : values[D])) {
                simplex[D] = contracted;
                values[D] = fc;
            } else {
                for (std::size_t k = 1; k <= D; ++k) {
                    simplex[k] = affine(simplex[0], simplex[k], sigma);
                    values[k] = f(simplex[k]);
                }
            }
        }
        sort_simplex();
    }
    return {simplex[0], values[0], iter};
}

} // namespace ccshare
