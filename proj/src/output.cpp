#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ccshare/errors.hpp"
#include "ccshare/experiments.hpp"

#ifndef CCSHARE_GIT_DESCRIBE
#define CCSHARE_GIT_DESCRIBE "unknown"
#endif

namespace ccshare {

namespace {

constexpr const char *kLibraryVersion = "0.1.0";

// 9 significant digits; empty for NaN (missing values).
std::string fmt(double v) {
    if (std::isnan(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

class CsvFile {
public:
    explicit CsvFile(std::filesystem::path path) : path_(std::move(path)), out_(path_, std::ios::binary) {
        if (!out_) throw IoError("cannot open " + path_.string() + " for writing");
    }
    CsvFile &operator<<(const std::string &s) {
        out_ << s;
        return *this;
    }
    void close() {
        out_.close();
        if (!out_) throw IoError("failed writing " + path_.string());
    }
    const std::filesystem::path &path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::string prefix(const ExperimentResult &r) {
    return std::string(experiment_name(r.config.experiment)) + "_N" + std::to_string(r.config.n_qubits);
}

void write_records(CsvFile &f, const std::vector<SampleRecord> &records, int n) {
    std::string header = "sample_index,n_qubits";
    for (auto m : kAllMeasures) {
        for (int i = 2; i <= n; ++i) header += "," + std::string(measure_name(m)) + "_1" + std::to_string(i);
        header += ",sum_" + std::string(measure_name(m));
    }
    header += ",ggm,Czz_1rest,CD_1rest,CLW_1rest,delta_Czz,delta_CD,delta_CLW\n";
    f << header;
    for (const auto &r : records) {
        std::string line = std::to_string(r.sample_index) + "," + std::to_string(r.n_qubits);
        for (auto m : kAllMeasures) {
            const auto &pairs = r.pairs(m);
            for (int i = 0; i < n - 1; ++i) {
                line += ",";
                if (static_cast<std::size_t>(i) < pairs.size()) line += fmt(pairs[static_cast<std::size_t>(i)]);
            }
            line += "," + fmt(r.sum(m));
        }
        for (double v : {r.ggm, r.czz_one_rest, r.cd_one_rest, r.clw_one_rest, r.delta_czz, r.delta_cd, r.delta_clw}) {
            line += "," + fmt(v);
        }
        f << line << "\n";
    }
}

} // namespace

std::string version_string() { return std::string("ccshare ") + kLibraryVersion + " (" + CCSHARE_GIT_DESCRIBE + ")"; }

std::vector<std::filesystem::path> write_outputs(const ExperimentResult &result) {
    namespace fs = std::filesystem;
    const fs::path dir = result.config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<fs::path> written;
    const std::string base = prefix(result);
    auto open = [&](const std::string &name) { return CsvFile(dir / (base + "_" + name + ".csv")); };
    auto finish = [&](CsvFile &f) {
        f.close();
        written.push_back(f.path());
    };

    for (const auto &h : result.histograms) {
        auto f = open("hist_" + h.name);
        f << "bin_lower,bin_upper,count,fraction\n";
        for (const auto &b : h.histogram.bins()) {
            f << fmt(b.lower) + "," + fmt(b.upper) + "," + std::to_string(b.count) + "," + fmt(b.fraction) + "\n";
        }
        finish(f);
    }

    if (!result.summaries.empty()) {
        const bool with_pct = result.summaries.front().monogamous_pct.has_value();
        auto f = open("summary");
        f << std::string("measure,n_qubits,samples,mean,sd,max,min") + (with_pct ? ",monogamous_pct" : "") + "\n";
        for (const auto &s : result.summaries) {
            std::string line = s.measure + "," + std::to_string(s.n_qubits) + "," + std::to_string(s.samples) + "," +
                               fmt(s.stats.mean) + "," + fmt(s.stats.sd) + "," + fmt(s.stats.max) + "," +
                               fmt(s.stats.min);
            if (with_pct) line += "," + fmt(s.monogamous_pct.value_or(std::nan("")));
            f << line + "\n";
        }
        finish(f);
    }

    for (const auto &p : result.profiles) {
        auto f = open("profile_" + p.name);
        f << "constraint_bin_lower,count,target_avg,target_max\n";
        for (const auto &b : p.profile.bins) {
            f << fmt(b.lower) + "," + std::to_string(b.count) + "," + (b.target_avg ? fmt(*b.target_avg) : "") + "," +
                     (b.target_max ? fmt(*b.target_max) : "") + "\n";
        }
        finish(f);
    }

    if (!result.sweep.empty()) {
        auto f = open("incompatibility");
        f << "theta,empirical_max,bound,mean,sd,violations\n";
        for (const auto &r : result.sweep) {
            f << fmt(r.theta) + "," + fmt(r.empirical_max) + "," + fmt(r.bound) + "," + fmt(r.mean) + "," + fmt(r.sd) +
                     "," + std::to_string(r.violations) + "\n";
        }
        finish(f);
    }

    if (!result.scatter.empty()) {
        auto f = open("ggm_scatter");
        f << "ggm,delta_CD,delta_CLW\n";
        for (const auto &p : result.scatter) f << fmt(p.ggm) + "," + fmt(p.delta_cd) + "," + fmt(p.delta_clw) + "\n";
        finish(f);
    }

    if (result.config.emit_records && !result.records.empty()) {
        auto f = open("records");
        write_records(f, result.records, result.config.n_qubits);
        finish(f);
    }

    const auto &cfg = result.config;
    nlohmann::ordered_json manifest;
    manifest["experiment"] = experiment_name(cfg.experiment);
    manifest["n_qubits"] = cfg.n_qubits;
    manifest["samples"] = result.samples;
    manifest["master_seed"] = cfg.master_seed;
    manifest["bin_size"] = cfg.effective_bin_size();
    manifest["versions"] = {{"ccshare", kLibraryVersion}, {"git", CCSHARE_GIT_DESCRIBE}};
    manifest["elapsed_seconds"] = result.elapsed_seconds;
    manifest["measures"] = cfg.effective_measures().to_string();
    if (cfg.experiment == ExperimentId::E2) manifest["theta_grid"] = cfg.effective_theta_grid();
    manifest["optimizer"] = {{"grid_points_theta", cfg.optimizer.grid_points_theta},
                             {"grid_points_phi", cfg.optimizer.grid_points_phi},
                             {"refine_tolerance", cfg.optimizer.refine_tolerance},
                             {"max_refine_iterations", cfg.optimizer.max_refine_iterations}};
    const fs::path manifest_path = dir / (base + "_manifest.json");
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + manifest_path.string() + " for writing");
    out << manifest.dump(2) << "\n";
    out.close();
    if (!out) throw IoError("failed writing " + manifest_path.string());
    written.push_back(manifest_path);
    return written;
}

} // namespace ccshare
