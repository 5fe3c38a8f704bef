#include "ccshare/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "ccshare/experiments.hpp"
#include "ccshare/fixtures.hpp"
#include "ccshare/measures.hpp"
#include "ccshare/random_states.hpp"

namespace ccshare {

namespace {

std::string describe(double worst, double tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max deviation %.3g (tolerance %.1g)", worst, tol);
    return buf;
}

SelftestCheck within(std::string name, double worst, double tol) {
    return {std::move(name), worst <= tol, describe(worst, tol)};
}

SelftestCheck guarded(const std::string &name, const std::function<SelftestCheck()> &body) {
    try {
        return body();
    } catch (const std::exception &e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

constexpr std::uint64_t kSelftestSeed = 20240611;

SelftestCheck check_ghz() {
    double worst = 0.0;
    for (int n = 3; n <= 5; ++n) {
        const auto psi = ghz_state(n);
        worst = std::max(worst, std::abs(sum_pairwise(psi, Measure::czz).sum - (n - 1)));
        worst = std::max(worst, std::abs(sum_pairwise(psi, Measure::discord).sum - (n - 1)));
    }
    return within("ghz_pairwise_sums", worst, 1e-6);
}

SelftestCheck check_product_lw() {
    double worst = 0.0;
    for (int n = 3; n <= 5; ++n) {
        worst = std::max(worst, std::abs(sum_pairwise(product_state(n), Measure::local_work).sum - (n - 1)));
    }
    return within("product_local_work", worst, 1e-6);
}

SelftestCheck check_covariance_product() {
    const auto rho = reduce_pair(product_state(2), 1, 2);
    const double v = classical_correlator(rho, Direction::z(), Direction::z(), CorrelatorVariant::covariance);
    return within("covariance_of_product", std::abs(v), 1e-12);
}

SelftestCheck check_ggm_fixtures() {
    double worst = 0.0;
    for (int n = 3; n <= 5; ++n) {
        worst = std::max(worst, std::abs(ggm(ghz_state(n)) - 0.5));
        worst = std::max(worst, std::abs(ggm(product_state(n))));
    }
    worst = std::max(worst, std::abs(ggm(w_state(3)) - 1.0 / 3.0));
    return within("ggm_fixtures", worst, 1e-9);
}

SelftestCheck check_local_unitary_invariance() {
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 5; ++k) {
        auto engine = make_engine({kSelftestSeed, k});
        const auto psi = haar_random_pure(3, engine);
        auto moved = psi;
        for (int q = 1; q <= 3; ++q) moved = apply_single_qubit(moved, q, haar_random_unitary(2, engine));
        const auto a = reduce_pair(psi, 1, 2);
        const auto b = reduce_pair(moved, 1, 2);
        for (auto m : {Measure::discord, Measure::local_work, Measure::mutual_information}) {
            worst = std::max(worst, std::abs(pair_measure(a, m) - pair_measure(b, m)));
        }
        worst = std::max(worst, std::abs(ggm(psi) - ggm(moved)));
    }
    return within("local_unitary_invariance", worst, 2e-4);
}

SelftestCheck check_pure_discord() {
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto engine = make_engine({kSelftestSeed + 1, k});
        const auto two = haar_random_pure(2, engine);
        const auto rho = two.density_matrix();
        worst = std::max(worst, std::abs(cqd(rho) - von_neumann_entropy(reduce_single(two, 1))));
    }
    return within("pure_state_discord_equals_entropy", worst, 1e-4);
}

SelftestCheck check_mixture_identity() {
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto engine = make_engine({kSelftestSeed + 2, k});
        const auto psi = haar_random_pure(3, engine);
        const auto rho = reduce_pair(psi, 1, 2);
        const int keep[] = {1};
        const auto rho1 = partial_trace(rho, keep).matrix();
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const BlochMeasurement m{std::acos(1.0 - 2.0 * unit(engine)), 2.0 * std::numbers::pi * unit(engine)};
        const auto branches = conditional_states(rho, m);
        ComplexMatrix mix = ComplexMatrix::Zero(2, 2);
        for (const auto &b : branches) mix += b.probability * b.state.matrix();
        worst = std::max(worst, (mix - rho1).cwiseAbs().maxCoeff());
    }
    return within("conditional_mixture_identity", worst, 1e-10);
}

SelftestCheck check_optimizer_vs_grid() {
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto psi = haar_random_pure(3, SampleSeed{kSelftestSeed + 3, k});
        const auto bloch = TwoQubitBloch::from(reduce_pair(psi, 1, 2));
        const auto objective = [&](const BlochMeasurement &m) { return conditional_entropy_after(bloch, m); };
        const double found = minimize_over_qubit_basis(objective).value;
        double fine = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 180; ++i) {
            for (int j = 0; j < 360; ++j) {
                const double theta = std::numbers::pi * i / 180.0;
                const double phi = 2.0 * std::numbers::pi * j / 360.0;
                fine = std::min(fine, objective(BlochMeasurement{theta, phi}));
            }
        }
        worst = std::max(worst, found - fine);
    }
    return within("optimizer_not_worse_than_fine_grid", std::max(worst, 0.0), 1e-4);
}

SelftestCheck check_determinism(int workers) {
    const RecordOptions options{MeasureSet{Measure::cxx, Measure::czz, Measure::discord, Measure::local_work}, true, {}};
    const auto one = generate_records(3, 1000, 1, options, 1);
    const auto many = generate_records(3, 1000, 1, options, std::max(4, workers));
    bool same = one.size() == many.size();
    for (std::size_t i = 0; same && i < one.size(); ++i) same = bitwise_equal(one[i], many[i]);

    std::vector<double> a, b;
    for (const auto &r : one) a.push_back(r.sum(Measure::discord));
    for (const auto &r : many) b.push_back(r.sum(Measure::discord));
    const auto ha = build_histogram(a, 0.01);
    const auto hb = build_histogram(b, 0.01);
    bool counts = ha.bins().size() == hb.bins().size();
    for (std::size_t i = 0; counts && i < ha.bins().size(); ++i) counts = ha.bins()[i].count == hb.bins()[i].count;
    return {"determinism_across_thread_counts", same && counts,
            same && counts ? "1000 records bit-identical" : "records differ between worker counts"};
}

} // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions &options) {
    std::vector<SelftestCheck> out;
    out.push_back(guarded("ghz_pairwise_sums", check_ghz));
    out.push_back(guarded("product_local_work", check_product_lw));
    out.push_back(guarded("covariance_of_product", check_covariance_product));
    out.push_back(guarded("ggm_fixtures", check_ggm_fixtures));
    out.push_back(guarded("local_unitary_invariance", check_local_unitary_invariance));
    out.push_back(guarded("pure_state_discord_equals_entropy", check_pure_discord));
    out.push_back(guarded("conditional_mixture_identity", check_mixture_identity));
    out.push_back(guarded("optimizer_not_worse_than_fine_grid", check_optimizer_vs_grid));
    out.push_back(guarded("determinism_across_thread_counts", [&] { return check_determinism(options.workers); }));
    return out;
}

} // namespace ccshare
