#pragma once

// Frequency distributions, summary statistics and binned conditional profiles.
//
// All binning uses half-open intervals (lower, lower + width] anchored at 0,
// so a value v falls in bin k = ceil(v / width) - 1.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace ccshare {

// Index of the half-open bin (k*width, (k+1)*width] containing `value`.
std::int64_t bin_index(double value, double width);

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    void merge(const CompensatedSum &other);
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t count = 0;
    double fraction = 0.0;
};

class Histogram {
public:
    explicit Histogram(double bin_size);

    // Throws DataError (naming `sample_index`) if value is not finite.
    void add(double value, std::uint64_t sample_index = 0);
    // Count-additive merge; bin sizes must match.
    void merge(const Histogram &other);

    double bin_size() const { return bin_size_; }
    double origin() const { return 0.0; }
    std::uint64_t total() const { return total_; }

    // Contiguous bins from the lowest to the highest populated one, including
    // empty bins in between.
    std::vector<HistogramBin> bins() const;

private:
    double bin_size_;
    std::map<std::int64_t, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// Throws DataError on an empty stream or non-finite values.
Histogram build_histogram(std::span<const double> values, double bin_size);

struct SummaryStats {
    double mean = 0.0;
    double sd = 0.0; // population standard deviation
    double max = 0.0;
    double min = 0.0;
    std::uint64_t count = 0;
};

// Streaming, mergeable accumulator behind summarize().
class SummaryAccumulator {
public:
    void add(double value);
    void merge(const SummaryAccumulator &other);
    std::uint64_t count() const { return count_; }
    // Throws DataError with fewer than two values.
    SummaryStats result() const;

private:
    std::uint64_t count_ = 0;
    CompensatedSum sum_;
    CompensatedSum sum_squares_;
    double min_ = 0.0;
    double max_ = 0.0;
};

SummaryStats summarize(std::span<const double> values);

struct ProfileBin {
    double lower = 0.0;
    std::uint64_t count = 0;
    std::optional<double> target_avg; // absent for empty bins
    std::optional<double> target_max;
};

class ProfileAccumulator {
public:
    explicit ProfileAccumulator(double bin_size);
    void add(double constraint, double target);
    void merge(const ProfileAccumulator &other);
    double bin_size() const { return bin_size_; }
    std::uint64_t total() const { return total_; }
    std::vector<ProfileBin> bins() const;

private:
    struct Cell {
        std::uint64_t count = 0;
        CompensatedSum sum;
        double max = 0.0;
    };
    double bin_size_;
    std::map<std::int64_t, Cell> cells_;
    std::uint64_t total_ = 0;
};

struct BinnedProfile {
    double bin_size = 0.0;
    std::vector<ProfileBin> bins;
};

// Average and maximum of `target` within each bin of `constraint`.
BinnedProfile conditional_profile(std::span<const double> constraint, std::span<const double> target,
                                  double bin_size);

// Percentage of scores that are >= 0.
double nonnegative_fraction(std::span<const double> scores);

} // namespace ccshare
