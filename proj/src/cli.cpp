#include "ccshare/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ccshare/errors.hpp"
#include "ccshare/fixtures.hpp"
#include "ccshare/measures.hpp"
#include "ccshare/selftest.hpp"

namespace ccshare {

namespace {

// Keys accepted in a config file for `run`, in flag spelling.
const std::set<std::string> &run_keys() {
    static const std::set<std::string> keys{"experiment", "qubits",      "samples",     "seed",      "bin-size",
                                            "out",        "threads",     "emit-records", "quiet",    "measures",
                                            "theta-points", "grid-theta", "grid-phi"};
    return keys;
}

const std::set<std::string> &flag_keys() {
    static const std::set<std::string> keys{"emit-records", "quiet"};
    return keys;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_bool(const std::string &key, const std::string &value) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("config file: key '" + key + "' expects true/false, got '" + value + "'");
}

// Splices config-file entries in front of the command-line flags so the
// latter win under take-last semantics.
std::vector<std::string> expand_config(const std::vector<std::string> &args) {
    std::optional<std::string> path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto &a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config: missing file name");
            path = args[++i];
        } else if (a.starts_with("--config=")) {
            path = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (!path) return rest;
    if (rest.empty() || rest.front() != "run") {
        throw UsageError("--config is only supported by the run subcommand");
    }
    std::ifstream in(*path);
    if (!in) throw UsageError("--config: cannot read '" + *path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto entries = parse_config_text(buffer.str());

    std::vector<std::string> out{rest.front()};
    for (const auto &[key, value] : entries) {
        if (!run_keys().contains(key)) {
            throw UsageError("config file: unknown key '" + key + "'");
        }
        if (flag_keys().contains(key)) {
            if (parse_bool(key, value)) out.push_back("--" + key);
        } else {
            out.push_back("--" + key);
            out.push_back(value);
        }
    }
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

std::string fmt6(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::map<std::string, std::string> parse_config_text(std::string_view text) {
    std::map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config file line " + std::to_string(number) + ": expected key=value");
        }
        std::string key = trim(std::string_view(content).substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty()) {
            throw UsageError("config file line " + std::to_string(number) + ": empty key");
        }
        out[key] = value;
    }
    return out;
}

CliInvocation parse_cli(const std::vector<std::string> &raw_args) {
    auto args = expand_config(raw_args);

    CLI::App app{"Monte Carlo statistics of classical correlations in Haar-random multiqubit states", "ccshare"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    CliInvocation inv;
    std::string experiment = "E1";
    int qubits = 3;
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;
    double bin_size = 0.0;
    std::string out_dir = "results";
    int threads = 0;
    bool emit_records = false;
    bool quiet = false;
    std::string measures;
    int theta_points = 10;
    int grid_theta = OptimizerSettings{}.grid_points_theta;
    int grid_phi = OptimizerSettings{}.grid_points_phi;
    std::string state_file;

    auto *run = app.add_subcommand("run", "Run one experiment (E1..E6) and write CSV/JSON outputs");
    run->add_option("--experiment", experiment, "Experiment id")
        ->check(CLI::IsMember({"E1", "E2", "E3", "E4", "E5", "E6"}));
    auto *qubits_opt = run->add_option("--qubits", qubits, "Number of qubits")->check(CLI::Range(3, 6));
    auto *samples_opt = run->add_option("--samples", samples, "Number of sampled states")->check(CLI::Range(
        static_cast<std::uint64_t>(kMinSamples), std::numeric_limits<std::uint64_t>::max()));
    run->add_option("--seed", seed, "Master seed");
    auto *bin_opt = run->add_option("--bin-size", bin_size, "Histogram / profile bin width")
                        ->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    run->add_flag("--emit-records", emit_records, "Also write one CSV row per sample");
    run->add_flag("--quiet", quiet, "No progress output");
    auto *measures_opt = run->add_option("--measures", measures, "Comma list of Cxx,Cyy,Czz,Cxx_cov,Cxx_sq,CD,CLW,CI");
    auto *theta_opt = run->add_option("--theta-points", theta_points, "E2: grid points over [0, pi/2]")
                          ->check(CLI::Range(2, 10000));
    run->add_option("--grid-theta", grid_theta, "Optimizer grid points in theta")->check(CLI::Range(8, 1000));
    run->add_option("--grid-phi", grid_phi, "Optimizer grid points in phi")->check(CLI::Range(8, 1000));
    run->add_option("--config", state_file, "key=value config file (command-line flags take precedence)");

    auto *meas = app.add_subcommand("measures", "Print every measure for a single state");
    meas->add_option("fixture", inv.fixture, "ghzN | wN | productN | product N");
    auto *state_opt = meas->add_option("--state", state_file, "Amplitude file: one 're,im' per line");
    meas->add_option("--grid-theta", grid_theta, "Optimizer grid points in theta")->check(CLI::Range(8, 1000));
    meas->add_option("--grid-phi", grid_phi, "Optimizer grid points in phi")->check(CLI::Range(8, 1000));

    auto *self = app.add_subcommand("selftest", "Run fixture oracles and invariant spot-checks");
    self->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    self->add_flag("--quiet", quiet, "Only print the final verdict");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested{app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help()};
    } catch (const CLI::CallForAllHelp &) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }

    auto &cfg = inv.config;
    cfg.workers = threads;
    cfg.quiet = quiet;
    cfg.optimizer.grid_points_theta = grid_theta;
    cfg.optimizer.grid_points_phi = grid_phi;

    if (run->parsed()) {
        inv.subcommand = Subcommand::run;
        cfg.experiment = parse_experiment(experiment);
        cfg.n_qubits = qubits;
        if (samples_opt->count() > 0) cfg.samples = samples;
        cfg.master_seed = seed;
        if (bin_opt->count() > 0) cfg.bin_size = bin_size;
        cfg.output_dir = out_dir;
        cfg.emit_records = emit_records;
        if (measures_opt->count() > 0) {
            try {
                cfg.measures = MeasureSet::parse(measures);
            } catch (const ArgumentError &e) {
                throw UsageError(std::string("--measures: ") + e.what());
            }
        }
        if (theta_opt->count() > 0) {
            cfg.theta_grid.clear();
            for (int k = 0; k < theta_points; ++k) {
                cfg.theta_grid.push_back(std::numbers::pi / 2.0 * k / (theta_points - 1));
            }
        }
        if (cfg.experiment == ExperimentId::E2 && qubits_opt->count() > 0 && qubits != 3) {
            throw UsageError("--qubits: experiment E2 requires 3 qubits");
        }
        try {
            cfg.validate();
        } catch (const ConfigError &e) {
            throw UsageError(e.what());
        }
    } else if (meas->parsed()) {
        inv.subcommand = Subcommand::measures;
        if (state_opt->count() > 0) inv.state_file = state_file;
        if (inv.fixture.empty() == !inv.state_file.has_value()) {
            throw UsageError("measures: give exactly one of a fixture name or --state FILE");
        }
        if (inv.fixture.size() > 2) throw UsageError("measures: too many positional arguments");
    } else {
        inv.subcommand = Subcommand::selftest;
    }
    return inv;
}

PureState resolve_state(const CliInvocation &inv) {
    if (inv.state_file) return load_amplitudes(*inv.state_file);
    if (inv.fixture.empty()) throw UsageError("measures: no state given");
    std::string name = inv.fixture.front();
    if (inv.fixture.size() == 2) name += inv.fixture[1];
    return named_fixture(name);
}

void print_measure_report(std::ostream &out, const PureState &psi, const OptimizerSettings &settings) {
    const auto rec = compute_record(psi, 0, RecordOptions{MeasureSet::all(), true, settings});
    const int n = psi.num_qubits();
    out << "qubits " << n << "\n";
    out << std::left << std::setw(8) << "pair";
    for (auto m : kAllMeasures) out << std::setw(11) << measure_name(m);
    out << "\n";
    for (int i = 2; i <= n; ++i) {
        out << std::setw(8) << ("1-" + std::to_string(i));
        for (auto m : kAllMeasures) out << std::setw(11) << fmt6(rec.pairs(m)[static_cast<std::size_t>(i - 2)]);
        out << "\n";
    }
    out << std::setw(8) << "sum";
    for (auto m : kAllMeasures) out << std::setw(11) << fmt6(rec.sum(m));
    out << "\n\n";
    out << "GGM        " << fmt6(rec.ggm) << "\n";
    out << "Czz_1rest  " << fmt6(rec.czz_one_rest) << "   delta_Czz " << fmt6(rec.delta_czz) << "\n";
    out << "CD_1rest   " << fmt6(rec.cd_one_rest) << "   delta_CD  " << fmt6(rec.delta_cd) << "\n";
    out << "CLW_1rest  " << fmt6(rec.clw_one_rest) << "   delta_CLW " << fmt6(rec.delta_clw) << "\n";
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CliInvocation inv;
    try {
        inv = parse_cli(args);
    } catch (const HelpRequested &help) {
        out << help.text;
        return 0;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        switch (inv.subcommand) {
        case Subcommand::run: {
            const auto &cfg = inv.config;
            int last_step = -1;
            ProgressFn progress;
            if (!cfg.quiet) {
                progress = [&](std::uint64_t done, std::uint64_t total) {
                    const int step = static_cast<int>(20 * done / total);
                    if (step != last_step) {
                        last_step = step;
                        err << "[" << experiment_name(cfg.experiment) << " N=" << cfg.n_qubits << "] " << 5 * step
                            << "% (" << done << "/" << total << ")\n";
                    }
                };
            }
            const auto result = run_experiment(cfg, progress);
            for (const auto &path : write_outputs(result)) out << path.string() << "\n";
            if (!cfg.quiet) err << "done in " << result.elapsed_seconds << " s\n";
            return 0;
        }
        case Subcommand::measures: {
            const auto psi = resolve_state(inv);
            print_measure_report(out, psi, inv.config.optimizer);
            return 0;
        }
        case Subcommand::selftest: {
            SelftestOptions options;
            options.workers = inv.config.workers;
            const auto report = run_selftest(options);
            for (const auto &check : report) {
                if (!inv.config.quiet || !check.passed) {
                    out << (check.passed ? "PASS " : "FAIL ") << check.name << "  " << check.detail << "\n";
                }
            }
            const bool ok = std::ranges::all_of(report, [](const auto &c) { return c.passed; });
            out << (ok ? "selftest: all checks passed\n" : "selftest: FAILED\n");
            return ok ? 0 : 1;
        }
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace ccshare
