#pragma once

// Experiment pipelines over a deterministic stream of Haar-random states.
//
//   E1  unconstrained distributions of pairwise sums
//   E2  incompatibility sweep of C_12^{kx} + C_13^{xx} against its bound
//   E3  sum Cyy profiled against sum Cxx
//   E4  sums of Cxx, CD, CLW profiled against GGM
//   E5  sum CD profiled against sum CLW
//   E6  monogamy scores, their distributions and a GGM scatter

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccshare/measures.hpp"
#include "ccshare/optimizer.hpp"
#include "ccshare/statistics.hpp"

namespace ccshare {

enum class ExperimentId { E1 = 1, E2, E3, E4, E5, E6 };

std::string_view experiment_name(ExperimentId id);
ExperimentId parse_experiment(std::string_view name);

inline constexpr int kMinExperimentQubits = 3;
inline constexpr int kMaxExperimentQubits = 6;
inline constexpr std::uint64_t kMinSamples = 100;

struct ExperimentConfig {
    ExperimentId experiment = ExperimentId::E1;
    int n_qubits = 3;
    std::optional<std::uint64_t> samples;
    std::uint64_t master_seed = 1;
    std::optional<double> bin_size;
    std::vector<double> theta_grid; // E2 only; empty -> 10 points over [0, pi/2]
    std::optional<MeasureSet> measures;
    std::filesystem::path output_dir = "results";
    int workers = 0; // 0 -> hardware concurrency
    bool emit_records = false;
    bool quiet = false;
    OptimizerSettings optimizer;

    // Throws ConfigError describing the first invalid field.
    void validate() const;

    // Defaults applied per experiment. For E1 `measures` replaces the default
    // selection; for the other experiments it adds to the measures they need.
    std::uint64_t effective_samples() const;
    double effective_bin_size() const;
    MeasureSet effective_measures() const;
    std::vector<double> effective_theta_grid() const;
    bool needs_ggm() const;
};

// Measures an experiment reads (for E1: its default selection).
MeasureSet required_measures(ExperimentId experiment);

// Called with (completed, total) as samples finish; may be called from any
// worker thread but never concurrently.
using ProgressFn = std::function<void(std::uint64_t, std::uint64_t)>;

int resolve_workers(int requested);

// Records for sample indices [0, samples), computed in parallel. The output is
// identical for every worker count.
std::vector<SampleRecord> generate_records(int n_qubits, std::uint64_t samples, std::uint64_t master_seed,
                                           const RecordOptions &options, int workers,
                                           const ProgressFn &progress = {});

struct NamedHistogram {
    std::string name;
    Histogram histogram;
};

struct SummaryRow {
    std::string measure;
    int n_qubits = 0;
    std::uint64_t samples = 0;
    SummaryStats stats;
    std::optional<double> monogamous_pct;
};

struct NamedProfile {
    std::string name;
    BinnedProfile profile;
};

struct SweepRow {
    double theta = 0.0;
    double empirical_max = 0.0;
    double bound = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    std::uint64_t violations = 0; // samples exceeding the bound by more than 1e-9
};

struct ScatterPoint {
    double ggm = 0.0;
    double delta_cd = 0.0;
    double delta_clw = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::uint64_t samples = 0;
    std::vector<NamedHistogram> histograms;
    std::vector<SummaryRow> summaries;
    std::vector<NamedProfile> profiles;
    std::vector<SweepRow> sweep;
    std::vector<ScatterPoint> scatter;
    std::vector<SampleRecord> records;
    double elapsed_seconds = 0.0;
};

// Views over an existing record stream. Each requires the measures it reads
// to be present in the records.
ExperimentResult run_unconstrained(const ExperimentConfig &cfg, std::vector<SampleRecord> records);
ExperimentResult run_constrained_ccc(const ExperimentConfig &cfg, std::vector<SampleRecord> records);
ExperimentResult run_constrained_ggm(const ExperimentConfig &cfg, std::vector<SampleRecord> records);
ExperimentResult run_cqd_vs_lw(const ExperimentConfig &cfg, std::vector<SampleRecord> records);
ExperimentResult run_monogamy(const ExperimentConfig &cfg, std::vector<SampleRecord> records);

// E2 works on raw states rather than records.
ExperimentResult run_incompatibility_sweep(const ExperimentConfig &cfg, const ProgressFn &progress = {});

// Validates, samples and dispatches on cfg.experiment.
ExperimentResult run_experiment(const ExperimentConfig &cfg, const ProgressFn &progress = {});

// Writes CSV files and a JSON manifest into cfg.output_dir; returns the paths.
std::vector<std::filesystem::path> write_outputs(const ExperimentResult &result);

// Version string recorded in manifests.
std::string version_string();

} // namespace ccshare
