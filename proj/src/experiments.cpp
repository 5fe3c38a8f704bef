#include "ccshare/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "ccshare/errors.hpp"
#include "ccshare/random_states.hpp"

namespace ccshare {

namespace {

constexpr std::uint64_t kChunk = 16;

// Runs body(i) for every i in [0, count) on `workers` threads. Work is handed
// out in fixed chunks; the result of body(i) must depend on i only.
template <class Body>
void parallel_for(std::uint64_t count, int workers, Body &&body, const ProgressFn &progress) {
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> done{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::uint64_t begin = next.fetch_add(kChunk);
            if (begin >= count) break;
            const std::uint64_t end = std::min(count, begin + kChunk);
            try {
                for (std::uint64_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                failed = true;
                break;
            }
            const std::uint64_t finished = done.fetch_add(end - begin) + (end - begin);
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(finished, count);
            }
        }
    };

    const int n = std::max(1, workers);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<double> column(const std::vector<SampleRecord> &records, Measure m) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        if (!r.has(m)) {
            throw ConfigError("records lack measure " + std::string(measure_name(m)));
        }
        out.push_back(r.sum(m));
    }
    return out;
}

std::vector<double> ggm_column(const std::vector<SampleRecord> &records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto &r : records) {
        if (std::isnan(r.ggm)) throw ConfigError("records lack GGM values");
        out.push_back(r.ggm);
    }
    return out;
}

std::string bin_label(double bin) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", bin);
    return buf;
}

ExperimentResult make_result(const ExperimentConfig &cfg, std::vector<SampleRecord> records) {
    ExperimentResult result;
    result.config = cfg;
    result.samples = records.size();
    result.records = std::move(records);
    return result;
}

} // namespace

std::string_view experiment_name(ExperimentId id) {
    switch (id) {
    case ExperimentId::E1: return "E1";
    case ExperimentId::E2: return "E2";
    case ExperimentId::E3: return "E3";
    case ExperimentId::E4: return "E4";
    case ExperimentId::E5: return "E5";
    case ExperimentId::E6: return "E6";
    }
    return "?";
}

ExperimentId parse_experiment(std::string_view name) {
    for (int k = 1; k <= 6; ++k) {
        const auto id = static_cast<ExperimentId>(k);
        if (experiment_name(id) == name) return id;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "' (expected E1..E6)");
}

void ExperimentConfig::validate() const {
    if (n_qubits < kMinExperimentQubits || n_qubits > kMaxExperimentQubits) {
        throw ConfigError("qubits must be in [3, 6], got " + std::to_string(n_qubits));
    }
    if (experiment == ExperimentId::E2 && n_qubits != 3) {
        throw ConfigError("experiment E2 requires qubits = 3");
    }
    if (samples && *samples < kMinSamples) {
        throw ConfigError("samples must be >= 100, got " + std::to_string(*samples));
    }
    if (bin_size && !(*bin_size > 0.0 && std::isfinite(*bin_size))) {
        throw ConfigError("bin size must be positive");
    }
    for (double t : theta_grid) {
        if (!(t >= 0.0) || t > std::numbers::pi / 2.0 + 1e-12) {
            throw ConfigError("theta grid values must lie in [0, pi/2]");
        }
    }
    if (measures && measures->empty()) {
        throw ConfigError("measure selection is empty");
    }
    if (workers < 0) {
        throw ConfigError("threads must be >= 0");
    }
    try {
        optimizer.validate();
    } catch (const ArgumentError &e) {
        throw ConfigError(e.what());
    }
}

MeasureSet ExperimentConfig::effective_measures() const {
    if (experiment == ExperimentId::E1 && measures) return *measures;
    MeasureSet required = required_measures(experiment);
    if (measures) {
        for (auto m : measures->members()) required.insert(m);
    }
    return required;
}

MeasureSet required_measures(ExperimentId experiment) {
    switch (experiment) {
    case ExperimentId::E1:
        return {Measure::cxx, Measure::cxx_covariance, Measure::cxx_squared, Measure::discord, Measure::local_work,
                Measure::mutual_information};
    case ExperimentId::E2: return {Measure::cxx};
    case ExperimentId::E3: return {Measure::cxx, Measure::cyy};
    case ExperimentId::E4: return {Measure::cxx, Measure::discord, Measure::local_work};
    case ExperimentId::E5: return {Measure::discord, Measure::local_work};
    case ExperimentId::E6: return {Measure::czz, Measure::discord, Measure::local_work};
    }
    return {};
}

std::uint64_t ExperimentConfig::effective_samples() const {
    if (samples) return *samples;
    const auto set = effective_measures();
    const bool heavy = std::ranges::any_of(set.members(), needs_optimizer);
    return heavy && n_qubits >= 5 ? 10'000 : 100'000;
}

double ExperimentConfig::effective_bin_size() const {
    if (bin_size) return *bin_size;
    switch (experiment) {
    case ExperimentId::E3:
    case ExperimentId::E5: return 0.1;
    case ExperimentId::E4: return 0.05;
    default: return 0.01;
    }
}

std::vector<double> ExperimentConfig::effective_theta_grid() const {
    if (!theta_grid.empty()) return theta_grid;
    std::vector<double> grid;
    constexpr int points = 10;
    for (int k = 0; k < points; ++k) grid.push_back(std::numbers::pi / 2.0 * k / (points - 1));
    return grid;
}

bool ExperimentConfig::needs_ggm() const {
    return experiment == ExperimentId::E4 || experiment == ExperimentId::E6;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<SampleRecord> generate_records(int n_qubits, std::uint64_t samples, std::uint64_t master_seed,
                                           const RecordOptions &options, int workers,
                                           const ProgressFn &progress) {
    std::vector<SampleRecord> records(samples);
    parallel_for(
        samples, resolve_workers(workers),
        [&](std::uint64_t i) {
            const auto psi = haar_random_pure(n_qubits, SampleSeed{master_seed, i});
            records[i] = compute_record(psi, i, options);
        },
        progress);
    return records;
}

ExperimentResult run_unconstrained(const ExperimentConfig &cfg, std::vector<SampleRecord> records) {
    auto result = make_result(cfg, std::move(records));
    const double bin = cfg.effective_bin_size();
    for (auto m : cfg.effective_measures().members()) {
        const auto values = column(result.records, m);
        const std::string name(measure_name(m));
        result.histograms.push_back({name, build_histogram(values, bin)});
        result.summaries.push_back({name, cfg.n_qubits, values.size(), summarize(values), std::nullopt});
    }
    return result;
}

ExperimentResult run_constrained_ccc(const ExperimentConfig &cfg, std::vector<SampleRecord> records) {
    auto result = make_result(cfg, std::move(records));
    const auto xx = column(result.records, Measure::cxx);
    const auto yy = column(result.records, Measure::cyy);
    result.profiles.push_back({"Cyy_by_Cxx", conditional_profile(xx, yy, cfg.effective_bin_size())});
    return result;
}

ExperimentResult run_constrained_ggm(const ExperimentConfig &cfg, std::vector<SampleRecord> records) {
    auto result = make_result(cfg, std::move(records));
    const auto g = ggm_column(result.records);
    const double bin = cfg.effective_bin_size();
    for (auto m : {Measure::cxx, Measure::discord, Measure::local_work}) {
        if (!cfg.effective_measures().contains(m)) continue;
        const auto target = column(result.records, m);
        result.profiles.push_back({std::string(measure_name(m)) + "_by_GGM", conditional_profile(g, target, bin)});
    }
    return result;
}

ExperimentResult run_cqd_vs_lw(const ExperimentConfig &cfg, std::vector<SampleRecord> records) {
    auto result = make_result(cfg, std::move(records));
    const auto lw = column(result.records, Measure::local_work);
    const auto cd = column(result.records, Measure::discord);
    std::vector<double> bins{cfg.effective_bin_size(), 0.01};
    if (bins[0] == bins[1]) bins.pop_back();
    for (double bin : bins) {
        result.profiles.push_back({"CD_by_CLW_bin" + bin_label(bin), conditional_profile(lw, cd, bin)});
    }
    return result;
}

ExperimentResult run_monogamy(const ExperimentConfig &cfg, std::vector<SampleRecord> records) {
    auto result = make_result(cfg, std::move(records));
    const double bin = cfg.effective_bin_size();
    struct Score {
        const char *name;
        Measure source;
        double SampleRecord::*field;
    };
    const Score scores[] = {{"delta_Czz", Measure::czz, &SampleRecord::delta_czz},
                            {"delta_CD", Measure::discord, &SampleRecord::delta_cd},
                            {"delta_CLW", Measure::local_work, &SampleRecord::delta_clw}};
    for (const auto &s : scores) {
        if (!cfg.effective_measures().contains(s.source)) continue;
        std::vector<double> values;
        values.reserve(result.records.size());
        for (const auto &r : result.records) values.push_back(r.*(s.field));
        result.histograms.push_back({s.name, build_histogram(values, bin)});
        result.summaries.push_back(
            {s.name, cfg.n_qubits, values.size(), summarize(values), nonnegative_fraction(values)});
    }
    const auto g = ggm_column(result.records);
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        result.scatter.push_back({g[i], result.records[i].delta_cd, result.records[i].delta_clw});
    }
    return result;
}

ExperimentResult run_incompatibility_sweep(const ExperimentConfig &cfg, const ProgressFn &progress) {
    if (cfg.n_qubits != 3) {
        throw ConfigError("experiment E2 requires qubits = 3");
    }
    const auto thetas = cfg.effective_theta_grid();
    if (thetas.empty()) throw ConfigError("theta grid is empty");
    const std::uint64_t samples = cfg.effective_samples();
    const std::size_t width = thetas.size();
    std::vector<double> values(samples * width);
    parallel_for(
        samples, resolve_workers(cfg.workers),
        [&](std::uint64_t i) {
            const auto psi = haar_random_pure(3, SampleSeed{cfg.master_seed, i});
            for (std::size_t t = 0; t < width; ++t) values[i * width + t] = directional_pair_sum(psi, thetas[t]);
        },
        progress);

    ExperimentResult result;
    result.config = cfg;
    result.samples = samples;
    for (std::size_t t = 0; t < width; ++t) {
        SummaryAccumulator acc;
        SweepRow row;
        row.theta = thetas[t];
        row.bound = incompatibility_bound(thetas[t]);
        for (std::uint64_t i = 0; i < samples; ++i) {
            const double v = values[i * width + t];
            acc.add(v);
            if (v > row.bound + 1e-9) ++row.violations;
        }
        const auto stats = acc.result();
        row.empirical_max = stats.max;
        row.mean = stats.mean;
        row.sd = stats.sd;
        result.sweep.push_back(row);
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg, const ProgressFn &progress) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    if (cfg.experiment == ExperimentId::E2) {
        result = run_incompatibility_sweep(cfg, progress);
    } else {
        RecordOptions options{cfg.effective_measures(), cfg.needs_ggm(), cfg.optimizer};
        auto records = generate_records(cfg.n_qubits, cfg.effective_samples(), cfg.master_seed, options, cfg.workers,
                                        progress);
        switch (cfg.experiment) {
        case ExperimentId::E1: result = run_unconstrained(cfg, std::move(records)); break;
        case ExperimentId::E3: result = run_constrained_ccc(cfg, std::move(records)); break;
        case ExperimentId::E4: result = run_constrained_ggm(cfg, std::move(records)); break;
        case ExperimentId::E5: result = run_cqd_vs_lw(cfg, std::move(records)); break;
        case ExperimentId::E6: result = run_monogamy(cfg, std::move(records)); break;
        case ExperimentId::E2: break;
        }
    }
    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace ccshare
