#pragma once

// Classical-correlation measures on two-qubit reductions, the generalized
// geometric measure, 1:rest quantities and monogamy scores.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ccshare/linalg.hpp"
#include "ccshare/optimizer.hpp"

namespace ccshare {

// Unit vector on the Bloch sphere, used to pick local spin observables a.sigma.
class Direction {
public:
    // Throws ArgumentError unless |(x, y, z)| = 1 within 1e-12.
    Direction(double x, double y, double z);

    static Direction x() { return {1.0, 0.0, 0.0}; }
    static Direction y() { return {0.0, 1.0, 0.0}; }
    static Direction z() { return {0.0, 0.0, 1.0}; }
    // (cos theta, sin theta, 0)
    static Direction in_xy_plane(double theta);

    const Eigen::Vector3d &vector() const noexcept { return v_; }
    ComplexMatrix observable() const;

private:
    Eigen::Vector3d v_;
};

enum class CorrelatorVariant { absolute, signed_value, covariance, squared };

// Bloch decomposition of a two-qubit state:
// rho = (I + a.sigma x I + I x b.sigma + sum_kl T_kl sigma_k x sigma_l) / 4.
struct TwoQubitBloch {
    Eigen::Vector3d a;
    Eigen::Vector3d b;
    Eigen::Matrix3d t;

    static TwoQubitBloch from(const DensityMatrix &rho);
};

double classical_correlator(const DensityMatrix &rho, const Direction &first, const Direction &second,
                            CorrelatorVariant variant);

// Post-measurement outcome of a projective measurement on party 2.
struct ConditionalBranch {
    double probability = 0.0;
    DensityMatrix state; // rho_{1|i}; maximally mixed placeholder when probability < 1e-12
};

// Conditional states of party 1 after measuring party 2 in basis m.
std::array<ConditionalBranch, 2> conditional_states(const DensityMatrix &rho, const BlochMeasurement &m);

// sum_i (I x P_i) rho (I x P_i)
DensityMatrix dephase_second(const DensityMatrix &rho, const BlochMeasurement &m);

// Outcome table p(s, t) for measuring party 1 in `first` and party 2 in `second`,
// row-major [s][t] with s, t in {+, -}.
std::array<double, 4> outcome_table(const DensityMatrix &rho, const BlochMeasurement &first,
                                    const BlochMeasurement &second);

// Objectives on the Bloch representation; these are what the optimizers see.
double conditional_entropy_after(const TwoQubitBloch &bloch, const BlochMeasurement &m);
double dephased_entropy_after(const TwoQubitBloch &bloch, const BlochMeasurement &m);
double outcome_mutual_information(const TwoQubitBloch &bloch, const BlochMeasurement &first,
                                  const BlochMeasurement &second);

// Classical part of quantum discord, measurement on party 2.
double cqd(const DensityMatrix &rho, const OptimizerSettings &settings = {});

// Local work scaled to [0, 1]: (2 - min S(dephased rho)) / 2.
double local_work(const DensityMatrix &rho, const OptimizerSettings &settings = {});

// Maximal mutual information of product projective measurement outcomes.
double measured_mutual_information(const DensityMatrix &rho, const OptimizerSettings &settings = {});

// 1 - max over bipartitions A:B of the largest eigenvalue of rho_A.
double ggm(const PureState &psi);

enum class Measure : std::uint8_t {
    cxx,
    cyy,
    czz,
    cxx_covariance,
    cxx_squared,
    discord,
    local_work,
    mutual_information,
};

inline constexpr std::array<Measure, 8> kAllMeasures{Measure::cxx,         Measure::cyy,
                                                     Measure::czz,         Measure::cxx_covariance,
                                                     Measure::cxx_squared, Measure::discord,
                                                     Measure::local_work,  Measure::mutual_information};

// Short column name: Cxx, Cyy, Czz, Cxx_cov, Cxx_sq, CD, CLW, CI.
std::string_view measure_name(Measure m);
Measure parse_measure(std::string_view name);
bool needs_optimizer(Measure m);

double pair_measure(const DensityMatrix &rho, Measure measure, const OptimizerSettings &settings = {});

struct PairwiseSum {
    double sum = 0.0;
    std::vector<double> per_pair; // index 0 is pair (1, 2)
};

// sum_{i=2..N} C(rho_{1i})
PairwiseSum sum_pairwise(const PureState &psi, Measure measure, const OptimizerSettings &settings = {});

// |tr(rho sigma^z_1 x Lambda^z(s))| / (2s) with s = (2^{N-1} - 1) / 2.
double czz_one_rest(const PureState &psi);

enum class OneRestMeasure { discord, local_work };

// Pure-state 1:rest values: discord -> S(rho_1); local work -> 1 - S(rho_1)/N.
double cc_one_rest_pure(const PureState &psi, OneRestMeasure measure);

inline double monogamy_score(double one_rest, double pairwise_sum) { return one_rest - pairwise_sum; }

// sqrt(1 + sqrt(1 + 8 cos theta)), theta in [0, pi/2].
double incompatibility_bound(double theta);

// C_12^{kx} + C_13^{xx} with k = (cos theta, sin theta, 0); three qubits only.
double directional_pair_sum(const PureState &psi, double theta);

// Set of pairwise measures to evaluate per sample.
class MeasureSet {
public:
    MeasureSet() = default;
    MeasureSet(std::initializer_list<Measure> measures) {
        for (auto m : measures) insert(m);
    }
    static MeasureSet all() { return MeasureSet(kAllMeasures.begin(), kAllMeasures.end()); }
    // Comma-separated names, e.g. "Cxx,CD,CLW"; "all" selects everything.
    static MeasureSet parse(std::string_view list);

    void insert(Measure m) { bits_ |= bit(m); }
    bool contains(Measure m) const { return (bits_ & bit(m)) != 0; }
    bool empty() const { return bits_ == 0; }
    std::vector<Measure> members() const;
    std::string to_string() const;
    bool operator==(const MeasureSet &) const = default;

private:
    template <class It>
    MeasureSet(It first, It last) {
        for (; first != last; ++first) insert(*first);
    }
    static std::uint16_t bit(Measure m) { return static_cast<std::uint16_t>(1u << static_cast<unsigned>(m)); }
    std::uint16_t bits_ = 0;
};

struct RecordOptions {
    MeasureSet measures;
    bool with_ggm = true;
    OptimizerSettings optimizer;
};

// Everything computed for one sampled state. Measures that were not requested
// have empty per-pair vectors and NaN sums; the same holds for monogamy
// scores whose pairwise sum is missing.
struct SampleRecord {
    std::uint64_t sample_index = 0;
    int n_qubits = 0;
    std::array<std::vector<double>, kAllMeasures.size()> per_pair;
    std::array<double, kAllMeasures.size()> sums{};
    double ggm = 0.0;
    double czz_one_rest = 0.0;
    double cd_one_rest = 0.0;
    double clw_one_rest = 0.0;
    double delta_czz = 0.0;
    double delta_cd = 0.0;
    double delta_clw = 0.0;

    bool has(Measure m) const { return !per_pair[static_cast<std::size_t>(m)].empty(); }
    double sum(Measure m) const { return sums[static_cast<std::size_t>(m)]; }
    const std::vector<double> &pairs(Measure m) const { return per_pair[static_cast<std::size_t>(m)]; }
};

SampleRecord compute_record(const PureState &psi, std::uint64_t sample_index, const RecordOptions &options);

// Bit-for-bit comparison; NaN placeholders compare equal to themselves.
bool bitwise_equal(const SampleRecord &lhs, const SampleRecord &rhs);

} // namespace ccshare
