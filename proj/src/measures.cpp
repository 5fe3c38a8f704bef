#include "ccshare/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "ccshare/errors.hpp"

namespace ccshare {

namespace {

constexpr double kBranchCutoff = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::array<ComplexMatrix, 3> &paulis() {
    static const std::array<ComplexMatrix, 3> p{pauli::x(), pauli::y(), pauli::z()};
    return p;
}

// Re tr(A rho) for Hermitian A.
double expectation(const ComplexMatrix &a, const ComplexMatrix &rho) {
    return (a.cwiseProduct(rho.transpose())).sum().real();
}

void require_two_qubits(const DensityMatrix &rho, const char *who) {
    if (rho.dims().size() != 2 || rho.dims()[0] != 2 || rho.dims()[1] != 2) {
        throw ArgumentError(std::string(who) + ": expected a two-qubit density matrix");
    }
}

double shannon(double p) { return p > kBranchCutoff ? -p * std::log2(p) : 0.0; }

std::size_t compress_bits(std::size_t value, std::size_t mask) {
    std::size_t out = 0;
    std::size_t bit_out = 1;
    while (mask != 0) {
        const std::size_t low = mask & (~mask + 1);
        if (value & low) out |= bit_out;
        bit_out <<= 1;
        mask &= mask - 1;
    }
    return out;
}

} // namespace

Direction::Direction(double x, double y, double z) : v_(x, y, z) {
    if (std::abs(v_.norm() - 1.0) > 1e-12) {
        throw ArgumentError("direction must be a unit vector");
    }
}

Direction Direction::in_xy_plane(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

ComplexMatrix Direction::observable() const {
    return v_.x() * pauli::x() + v_.y() * pauli::y() + v_.z() * pauli::z();
}

TwoQubitBloch TwoQubitBloch::from(const DensityMatrix &rho) {
    require_two_qubits(rho, "TwoQubitBloch");
    static const auto ops = [] {
        struct Ops {
            std::array<ComplexMatrix, 3> first;
            std::array<ComplexMatrix, 3> second;
            std::array<std::array<ComplexMatrix, 3>, 3> both;
        } o;
        const ComplexMatrix id = pauli::identity();
        for (std::size_t k = 0; k < 3; ++k) {
            o.first[k] = tensor_product(paulis()[k], id);
            o.second[k] = tensor_product(id, paulis()[k]);
            for (std::size_t l = 0; l < 3; ++l) o.both[k][l] = tensor_product(paulis()[k], paulis()[l]);
        }
        return o;
    }();
    TwoQubitBloch out;
    const auto &m = rho.matrix();
    for (int k = 0; k < 3; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        out.a(k) = expectation(ops.first[uk], m);
        out.b(k) = expectation(ops.second[uk], m);
        for (int l = 0; l < 3; ++l) out.t(k, l) = expectation(ops.both[uk][static_cast<std::size_t>(l)], m);
    }
    return out;
}

double classical_correlator(const DensityMatrix &rho, const Direction &first, const Direction &second,
                            CorrelatorVariant variant) {
    require_two_qubits(rho, "classical_correlator");
    const auto bloch = TwoQubitBloch::from(rho);
    const Eigen::Vector3d &u = first.vector();
    const Eigen::Vector3d &v = second.vector();
    const double correlation = u.dot(bloch.t * v);
    switch (variant) {
    case CorrelatorVariant::signed_value:
        return correlation;
    case CorrelatorVariant::absolute:
        return std::abs(correlation);
    case CorrelatorVariant::squared:
        return correlation * correlation;
    case CorrelatorVariant::covariance:
        return std::abs(correlation - u.dot(bloch.a) * v.dot(bloch.b));
    }
    throw ArgumentError("classical_correlator: unknown variant");
}

std::array<ConditionalBranch, 2> conditional_states(const DensityMatrix &rho, const BlochMeasurement &m) {
    require_two_qubits(rho, "conditional_states");
    const auto [p0, p1] = bloch_projectors(m);
    const ComplexMatrix id = pauli::identity();
    auto branch = [&](const ComplexMatrix &proj) {
        const ComplexMatrix lifted = tensor_product(id, proj);
        const ComplexMatrix post = lifted * rho.matrix() * lifted;
        const double p = post.trace().real();
        if (p < kBranchCutoff) {
            return ConditionalBranch{p, DensityMatrix::trusted({2}, 0.5 * id)};
        }
        const auto reduced = partial_trace(DensityMatrix::trusted({2, 2}, post / p), std::array{1});
        return ConditionalBranch{p, reduced};
    };
    return {branch(p0), branch(p1)};
}

DensityMatrix dephase_second(const DensityMatrix &rho, const BlochMeasurement &m) {
    require_two_qubits(rho, "dephase_second");
    const auto [p0, p1] = bloch_projectors(m);
    const ComplexMatrix id = pauli::identity();
    const ComplexMatrix l0 = tensor_product(id, p0);
    const ComplexMatrix l1 = tensor_product(id, p1);
    ComplexMatrix out = l0 * rho.matrix() * l0 + l1 * rho.matrix() * l1;
    return DensityMatrix::trusted({2, 2}, std::move(out));
}

std::array<double, 4> outcome_table(const DensityMatrix &rho, const BlochMeasurement &first,
                                    const BlochMeasurement &second) {
    require_two_qubits(rho, "outcome_table");
    const auto [a0, a1] = bloch_projectors(first);
    const auto [b0, b1] = bloch_projectors(second);
    const std::array<const ComplexMatrix *, 2> pa{&a0, &a1};
    const std::array<const ComplexMatrix *, 2> pb{&b0, &b1};
    std::array<double, 4> table{};
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t t = 0; t < 2; ++t) {
            table[2 * s + t] = expectation(tensor_product(*pa[s], *pb[t]), rho.matrix());
        }
    }
    return table;
}

// p_+- = (1 +- b.n)/2 and rho_{1|+-} has Bloch vector (a +- T n) / (2 p_+-).
double conditional_entropy_after(const TwoQubitBloch &bloch, const BlochMeasurement &m) {
    const Eigen::Vector3d n = m.axis();
    const double bn = bloch.b.dot(n);
    const Eigen::Vector3d tn = bloch.t * n;
    double total = 0.0;
    for (const double sign : {1.0, -1.0}) {
        const double p = 0.5 * (1.0 + sign * bn);
        if (p < kBranchCutoff) continue;
        const double r = (bloch.a + sign * tn).norm() / (2.0 * p);
        total += p * qubit_entropy_from_bloch_length(r);
    }
    return total;
}

// The dephased state is block diagonal: sum_i p_i rho_{1|i} x P_i.
double dephased_entropy_after(const TwoQubitBloch &bloch, const BlochMeasurement &m) {
    const double bn = bloch.b.dot(m.axis());
    const double p = 0.5 * (1.0 + bn);
    return shannon(p) + shannon(1.0 - p) + conditional_entropy_after(bloch, m);
}

double outcome_mutual_information(const TwoQubitBloch &bloch, const BlochMeasurement &first,
                                  const BlochMeasurement &second) {
    const Eigen::Vector3d na = first.axis();
    const Eigen::Vector3d nb = second.axis();
    const double ma = bloch.a.dot(na);
    const double mb = bloch.b.dot(nb);
    const double corr = na.dot(bloch.t * nb);
    double joint = 0.0;
    for (const double s : {1.0, -1.0}) {
        for (const double t : {1.0, -1.0}) {
            joint += shannon(std::max(0.0, 0.25 * (1.0 + s * ma + t * mb + s * t * corr)));
        }
    }
    const double ha = shannon(0.5 * (1.0 + ma)) + shannon(0.5 * (1.0 - ma));
    const double hb = shannon(0.5 * (1.0 + mb)) + shannon(0.5 * (1.0 - mb));
    return ha + hb - joint;
}

double cqd(const DensityMatrix &rho, const OptimizerSettings &settings) {
    require_two_qubits(rho, "cqd");
    const auto bloch = TwoQubitBloch::from(rho);
    const double s1 = qubit_entropy_from_bloch_length(bloch.a.norm());
    const auto best = minimize_over_qubit_basis(
        [&](const BlochMeasurement &m) { return conditional_entropy_after(bloch, m); }, settings);
    return std::clamp(s1 - best.value, 0.0, 1.0);
}

double local_work(const DensityMatrix &rho, const OptimizerSettings &settings) {
    require_two_qubits(rho, "local_work");
    const auto bloch = TwoQubitBloch::from(rho);
    const auto best = minimize_over_qubit_basis(
        [&](const BlochMeasurement &m) { return dephased_entropy_after(bloch, m); }, settings);
    return std::clamp((2.0 - best.value) / 2.0, 0.0, 1.0);
}

double measured_mutual_information(const DensityMatrix &rho, const OptimizerSettings &settings) {
    require_two_qubits(rho, "measured_mutual_information");
    const auto bloch = TwoQubitBloch::from(rho);
    const auto best = maximize_over_product_bases(
        [&](const BlochMeasurement &a, const BlochMeasurement &b) { return outcome_mutual_information(bloch, a, b); },
        settings);
    return std::clamp(best.value, 0.0, 1.0);
}

double ggm(const PureState &psi) {
    const int n = psi.num_qubits();
    const std::size_t dim = psi.dimension();
    const std::size_t full = dim - 1;
    const auto &amp = psi.amplitudes();
    const std::size_t qubit1 = std::size_t{1} << (n - 1);
    double max_lambda = 0.0;
    // Every bipartition up to complement has exactly one side containing qubit 1.
    for (std::size_t rest = 0; rest < (qubit1 >> 0); ++rest) {
        const std::size_t side = qubit1 | rest;
        if (side == full) continue;
        const std::size_t other = full & ~side;
        const int rows = 1 << std::popcount(side);
        const int cols = 1 << std::popcount(other);
        Eigen::MatrixXcd reshaped(rows, cols);
        for (std::size_t k = 0; k < dim; ++k) {
            reshaped(static_cast<Eigen::Index>(compress_bits(k, side)),
                     static_cast<Eigen::Index>(compress_bits(k, other))) = amp(static_cast<Eigen::Index>(k));
        }
        const Eigen::MatrixXcd gram =
            rows <= cols ? Eigen::MatrixXcd(reshaped * reshaped.adjoint()) : Eigen::MatrixXcd(reshaped.adjoint() * reshaped);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
        max_lambda = std::max(max_lambda, solver.eigenvalues().maxCoeff());
    }
    return std::clamp(1.0 - max_lambda, 0.0, 1.0);
}

std::string_view measure_name(Measure m) {
    switch (m) {
    case Measure::cxx: return "Cxx";
    case Measure::cyy: return "Cyy";
    case Measure::czz: return "Czz";
    case Measure::cxx_covariance: return "Cxx_cov";
    case Measure::cxx_squared: return "Cxx_sq";
    case Measure::discord: return "CD";
    case Measure::local_work: return "CLW";
    case Measure::mutual_information: return "CI";
    }
    return "?";
}

Measure parse_measure(std::string_view name) {
    for (auto m : kAllMeasures) {
        if (measure_name(m) == name) return m;
    }
    throw ArgumentError("unknown measure '" + std::string(name) + "'");
}

bool needs_optimizer(Measure m) {
    return m == Measure::discord || m == Measure::local_work || m == Measure::mutual_information;
}

double pair_measure(const DensityMatrix &rho, Measure measure, const OptimizerSettings &settings) {
    switch (measure) {
    case Measure::cxx:
        return classical_correlator(rho, Direction::x(), Direction::x(), CorrelatorVariant::absolute);
    case Measure::cyy:
        return classical_correlator(rho, Direction::y(), Direction::y(), CorrelatorVariant::absolute);
    case Measure::czz:
        return classical_correlator(rho, Direction::z(), Direction::z(), CorrelatorVariant::absolute);
    case Measure::cxx_covariance:
        return classical_correlator(rho, Direction::x(), Direction::x(), CorrelatorVariant::covariance);
    case Measure::cxx_squared:
        return classical_correlator(rho, Direction::x(), Direction::x(), CorrelatorVariant::squared);
    case Measure::discord:
        return cqd(rho, settings);
    case Measure::local_work:
        return local_work(rho, settings);
    case Measure::mutual_information:
        return measured_mutual_information(rho, settings);
    }
    throw ArgumentError("pair_measure: unknown measure");
}

PairwiseSum sum_pairwise(const PureState &psi, Measure measure, const OptimizerSettings &settings) {
    PairwiseSum out;
    const int n = psi.num_qubits();
    out.per_pair.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 2; i <= n; ++i) {
        const double v = pair_measure(reduce_pair(psi, 1, i), measure, settings);
        out.per_pair.push_back(v);
        out.sum += v;
    }
    return out;
}

double czz_one_rest(const PureState &psi) {
    const int n = psi.num_qubits();
    const std::size_t rest_dim = psi.dimension() >> 1;
    const double two_s = static_cast<double>(rest_dim - 1); // 2s = 2^{N-1} - 1
    const auto &amp = psi.amplitudes();
    double expectation_value = 0.0;
    for (std::size_t k = 0; k < psi.dimension(); ++k) {
        const double weight = std::norm(amp(static_cast<Eigen::Index>(k)));
        const double z1 = (k >> (n - 1)) & 1u ? -1.0 : 1.0;
        const std::size_t rest = k & (rest_dim - 1);
        const double lambda = two_s - 2.0 * static_cast<double>(rest);
        expectation_value += weight * z1 * lambda;
    }
    return std::abs(expectation_value) / two_s;
}

double cc_one_rest_pure(const PureState &psi, OneRestMeasure measure) {
    const double s1 = von_neumann_entropy(reduce_single(psi, 1));
    switch (measure) {
    case OneRestMeasure::discord:
        return std::clamp(s1, 0.0, 1.0);
    case OneRestMeasure::local_work:
        return std::clamp(1.0 - s1 / psi.num_qubits(), 0.0, 1.0);
    }
    throw ArgumentError("cc_one_rest_pure: unknown measure");
}

double incompatibility_bound(double theta) {
    if (!(theta >= 0.0) || theta > std::numbers::pi / 2.0 + 1e-12) {
        throw ArgumentError("incompatibility_bound: theta must lie in [0, pi/2]");
    }
    const double c = std::max(0.0, std::cos(theta));
    return std::sqrt(1.0 + std::sqrt(1.0 + 8.0 * c));
}

double directional_pair_sum(const PureState &psi, double theta) {
    if (psi.num_qubits() != 3) {
        throw ArgumentError("directional_pair_sum: requires exactly 3 qubits");
    }
    const auto rho12 = reduce_pair(psi, 1, 2);
    const auto rho13 = reduce_pair(psi, 1, 3);
    return classical_correlator(rho12, Direction::in_xy_plane(theta), Direction::x(), CorrelatorVariant::absolute) +
           classical_correlator(rho13, Direction::x(), Direction::x(), CorrelatorVariant::absolute);
}

MeasureSet MeasureSet::parse(std::string_view list) {
    MeasureSet out;
    if (list == "all") return all();
    while (!list.empty()) {
        const auto comma = list.find(',');
        auto token = list.substr(0, comma);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty()) out.insert(parse_measure(token));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ArgumentError("measure list is empty");
    return out;
}

std::vector<Measure> MeasureSet::members() const {
    std::vector<Measure> out;
    for (auto m : kAllMeasures) {
        if (contains(m)) out.push_back(m);
    }
    return out;
}

std::string MeasureSet::to_string() const {
    std::string out;
    for (auto m : members()) {
        if (!out.empty()) out += ',';
        out += measure_name(m);
    }
    return out;
}

SampleRecord compute_record(const PureState &psi, std::uint64_t sample_index, const RecordOptions &options) {
    SampleRecord rec;
    rec.sample_index = sample_index;
    rec.n_qubits = psi.num_qubits();
    rec.sums.fill(kNaN);

    const int n = psi.num_qubits();
    for (int i = 2; i <= n; ++i) {
        const auto rho = reduce_pair(psi, 1, i);
        const auto bloch = TwoQubitBloch::from(rho);
        for (auto m : options.measures.members()) {
            double v = 0.0;
            switch (m) {
            case Measure::cxx: v = std::abs(bloch.t(0, 0)); break;
            case Measure::cyy: v = std::abs(bloch.t(1, 1)); break;
            case Measure::czz: v = std::abs(bloch.t(2, 2)); break;
            case Measure::cxx_covariance: v = std::abs(bloch.t(0, 0) - bloch.a(0) * bloch.b(0)); break;
            case Measure::cxx_squared: v = bloch.t(0, 0) * bloch.t(0, 0); break;
            default: v = pair_measure(rho, m, options.optimizer); break;
            }
            rec.per_pair[static_cast<std::size_t>(m)].push_back(v);
        }
    }
    for (auto m : options.measures.members()) {
        double s = 0.0;
        for (double v : rec.pairs(m)) s += v;
        rec.sums[static_cast<std::size_t>(m)] = s;
    }

    rec.ggm = options.with_ggm ? ggm(psi) : kNaN;
    rec.czz_one_rest = czz_one_rest(psi);
    rec.cd_one_rest = cc_one_rest_pure(psi, OneRestMeasure::discord);
    rec.clw_one_rest = cc_one_rest_pure(psi, OneRestMeasure::local_work);
    rec.delta_czz = monogamy_score(rec.czz_one_rest, rec.sum(Measure::czz));
    rec.delta_cd = monogamy_score(rec.cd_one_rest, rec.sum(Measure::discord));
    rec.delta_clw = monogamy_score(rec.clw_one_rest, rec.sum(Measure::local_work));
    return rec;
}

namespace {
bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }
} // namespace

bool bitwise_equal(const SampleRecord &lhs, const SampleRecord &rhs) {
    if (lhs.sample_index != rhs.sample_index || lhs.n_qubits != rhs.n_qubits) return false;
    for (std::size_t k = 0; k < lhs.per_pair.size(); ++k) {
        if (lhs.per_pair[k].size() != rhs.per_pair[k].size()) return false;
        for (std::size_t i = 0; i < lhs.per_pair[k].size(); ++i) {
            if (!same_bits(lhs.per_pair[k][i], rhs.per_pair[k][i])) return false;
        }
        if (!same_bits(lhs.sums[k], rhs.sums[k])) return false;
    }
    return same_bits(lhs.ggm, rhs.ggm) && same_bits(lhs.czz_one_rest, rhs.czz_one_rest) &&
           same_bits(lhs.cd_one_rest, rhs.cd_one_rest) && same_bits(lhs.clw_one_rest, rhs.clw_one_rest) &&
           same_bits(lhs.delta_czz, rhs.delta_czz) && same_bits(lhs.delta_cd, rhs.delta_cd) &&
           same_bits(lhs.delta_clw, rhs.delta_clw);
}

} // namespace ccshare
