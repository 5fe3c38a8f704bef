#include "ccshare/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccshare/errors.hpp"

namespace ccshare {

std::int64_t bin_index(double value, double width) {
    double q = value / width;
    // Values on a bin edge (up to rounding in the division) belong to the lower bin.
    const double nearest = std::round(q);
    if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, std::abs(q))) q = nearest;
    return static_cast<std::int64_t>(std::ceil(q)) - 1;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

void CompensatedSum::merge(const CompensatedSum &other) {
    add(other.sum_);
    add(other.compensation_);
}

Histogram::Histogram(double bin_size) : bin_size_(bin_size) {
    if (!(bin_size > 0.0) || !std::isfinite(bin_size)) {
        throw DataError("histogram bin size must be positive");
    }
}

void Histogram::add(double value, std::uint64_t sample_index) {
    if (!std::isfinite(value)) {
        throw DataError("non-finite value at sample " + std::to_string(sample_index));
    }
    ++counts_[bin_index(value, bin_size_)];
    ++total_;
}

void Histogram::merge(const Histogram &other) {
    if (other.bin_size_ != bin_size_) {
        throw DataError("cannot merge histograms with different bin sizes");
    }
    for (const auto &[k, c] : other.counts_) counts_[k] += c;
    total_ += other.total_;
}

std::vector<HistogramBin> Histogram::bins() const {
    std::vector<HistogramBin> out;
    if (counts_.empty()) return out;
    const auto first = counts_.begin()->first;
    const auto last = counts_.rbegin()->first;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (auto k = first; k <= last; ++k) {
        const auto it = counts_.find(k);
        const std::uint64_t c = it == counts_.end() ? 0 : it->second;
        out.push_back({static_cast<double>(k) * bin_size_, static_cast<double>(k + 1) * bin_size_, c,
                       static_cast<double>(c) / static_cast<double>(total_)});
    }
    return out;
}

Histogram build_histogram(std::span<const double> values, double bin_size) {
    if (values.empty()) {
        throw DataError("no samples");
    }
    Histogram h(bin_size);
    for (std::size_t i = 0; i < values.size(); ++i) h.add(values[i], i);
    return h;
}

void SummaryAccumulator::add(double value) {
    if (!std::isfinite(value)) {
        throw DataError("non-finite value in summary");
    }
    if (count_ == 0) {
        min_ = max_ = value;
    } else {
        min_ = std::min(min_, value);
        max_ = std::max(max_, value);
    }
    ++count_;
    sum_.add(value);
    sum_squares_.add(value * value);
}

void SummaryAccumulator::merge(const SummaryAccumulator &other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    count_ += other.count_;
    sum_.merge(other.sum_);
    sum_squares_.merge(other.sum_squares_);
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
}

SummaryStats SummaryAccumulator::result() const {
    if (count_ < 2) {
        throw DataError("summary needs at least two values");
    }
    const double n = static_cast<double>(count_);
    const double mean = sum_.value() / n;
    const double variance = std::max(0.0, sum_squares_.value() / n - mean * mean);
    // Rounding can push the mean a hair outside [min, max] for constant input.
    return {std::clamp(mean, min_, max_), std::sqrt(variance), max_, min_, count_};
}

SummaryStats summarize(std::span<const double> values) {
    SummaryAccumulator acc;
    for (double v : values) acc.add(v);
    return acc.result();
}

ProfileAccumulator::ProfileAccumulator(double bin_size) : bin_size_(bin_size) {
    if (!(bin_size > 0.0) || !std::isfinite(bin_size)) {
        throw DataError("profile bin size must be positive");
    }
}

void ProfileAccumulator::add(double constraint, double target) {
    if (!std::isfinite(constraint) || !std::isfinite(target)) {
        throw DataError("non-finite value in profile");
    }
    auto &cell = cells_[bin_index(constraint, bin_size_)];
    cell.max = cell.count == 0 ? target : std::max(cell.max, target);
    ++cell.count;
    cell.sum.add(target);
    ++total_;
}

void ProfileAccumulator::merge(const ProfileAccumulator &other) {
    if (other.bin_size_ != bin_size_) {
        throw DataError("cannot merge profiles with different bin sizes");
    }
    for (const auto &[k, c] : other.cells_) {
        auto &cell = cells_[k];
        cell.max = cell.count == 0 ? c.max : std::max(cell.max, c.max);
        cell.count += c.count;
        cell.sum.merge(c.sum);
    }
    total_ += other.total_;
}

std::vector<ProfileBin> ProfileAccumulator::bins() const {
    std::vector<ProfileBin> out;
    if (cells_.empty()) return out;
    const auto first = cells_.begin()->first;
    const auto last = cells_.rbegin()->first;
    for (auto k = first; k <= last; ++k) {
        ProfileBin bin;
        bin.lower = static_cast<double>(k) * bin_size_;
        const auto it = cells_.find(k);
        if (it != cells_.end() && it->second.count > 0) {
            const auto &c = it->second;
            bin.count = c.count;
            bin.target_avg = std::min(c.sum.value() / static_cast<double>(c.count), c.max);
            bin.target_max = c.max;
        }
        out.push_back(bin);
    }
    return out;
}

BinnedProfile conditional_profile(std::span<const double> constraint, std::span<const double> target,
                                  double bin_size) {
    if (constraint.size() != target.size()) {
        throw DataError("conditional_profile: constraint and target lengths differ (" +
                        std::to_string(constraint.size()) + " vs " + std::to_string(target.size()) + ")");
    }
    ProfileAccumulator acc(bin_size);
    for (std::size_t i = 0; i < constraint.size(); ++i) acc.add(constraint[i], target[i]);
    return {bin_size, acc.bins()};
}

double nonnegative_fraction(std::span<const double> scores) {
    if (scores.empty()) {
        throw DataError("no scores");
    }
    const auto monogamous = std::count_if(scores.begin(), scores.end(), [](double d) { return d >= 0.0; });
    return 100.0 * static_cast<double>(monogamous) / static_cast<double>(scores.size());
}

} // namespace ccshare
