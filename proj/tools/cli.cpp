#include "cli.hpp"

#include "thermimic/error.hpp"
#include "thermimic/rng.hpp"
#include "thermimic/serialize.hpp"
#include "thermimic/version.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <memory>

namespace thermimic::cli {

namespace {

using json = io::json;
namespace fs = std::filesystem;

// Raised for anything wrong with the user's configuration; maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct Override {
    CLI::Option* option;
    std::function<void(json&)> apply;
};

struct Command {
    CLI::App* app = nullptr;
    json defaults;
    std::string config_path;
    std::vector<Override> overrides;
};

template <typename T>
void add_flag(Command& cmd, const std::string& flag, const std::string& key, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = cmd.app->add_option(flag, *value, help);
    cmd.overrides.push_back({opt, [value, key](json& cfg) { cfg[key] = *value; }});
}

bool same_kind(const json& expected, const json& actual) {
    if (expected.is_number_integer()) {
        return actual.is_number_integer();
    }
    if (expected.is_number()) {
        return actual.is_number();
    }
    if (expected.is_array()) {
        if (!actual.is_array()) {
            return false;
        }
        if (expected.empty()) {
            return true;
        }
        return std::all_of(actual.begin(), actual.end(), [&](const json& v) { return same_kind(expected.front(), v); });
    }
    return expected.type() == actual.type();
}

// defaults <- config file <- command-line flags, with unknown keys and type changes rejected
json resolve_config(const Command& cmd) {
    json cfg = cmd.defaults;
    if (!cmd.config_path.empty()) {
        json file;
        try {
            file = json::parse(io::read_file(cmd.config_path));
        } catch (const json::parse_error& e) {
            throw ConfigError(cmd.config_path + ": " + e.what());
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
        if (!file.is_object()) {
            throw ConfigError(cmd.config_path + ": config must be a JSON object");
        }
        for (const auto& [key, value] : file.items()) {
            if (!cmd.defaults.contains(key)) {
                throw ConfigError(cmd.config_path + ": unknown key '" + key + "'");
            }
            if (!same_kind(cmd.defaults.at(key), value)) {
                throw ConfigError(cmd.config_path + ": key '" + key + "' has the wrong type");
            }
            cfg[key] = value;
        }
    }
    for (const auto& ov : cmd.overrides) {
        if (ov.option->count() > 0) {
            ov.apply(cfg);
        }
    }
    return cfg;
}

std::string config_hash(const json& cfg) {
    // FNV-1a over the canonical (key-sorted) dump
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : cfg.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json provenance(const json& cfg) {
    return {{"toolkit_version", kVersion}, {"config_hash", config_hash(cfg)}};
}

json with_provenance(json body, const json& cfg) {
    body["toolkit_version"] = kVersion;
    body["config_hash"] = config_hash(cfg);
    return body;
}

void write_json(const fs::path& path, const json& j) {
    io::write_file(path, j.dump(2) + "\n");
}

template <typename T>
T get(const json& cfg, const char* key) {
    return cfg.at(key).get<T>();
}

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ConfigError(what);
    }
}

// ---------------------------------------------------------------- mimic-sweep

int mimic_sweep(const json& cfg, std::ostream& out) {
    const auto nbars = get<std::vector<double>>(cfg, "nbars");
    const auto ms = get<std::vector<int>>(cfg, "Ms");
    const Scheme scheme = parse_scheme(get<std::string>(cfg, "scheme"));
    const int cutoff = get<int>(cfg, "cutoff");
    const int trials = get<int>(cfg, "trials");
    const double tail_tol = get<double>(cfg, "tail_tol");
    require(tail_tol > 0.0 && tail_tol < 1.0, "tail_tol must lie in (0, 1)");
    require(!nbars.empty() && !ms.empty(), "sweep needs at least one nbar and one M");
    require(std::all_of(nbars.begin(), nbars.end(), [](double n) { return n > 0.0; }), "nbars must be > 0");
    require(cutoff >= 0, "cutoff must be >= 0");
    require(trials >= 1, "trials must be >= 1");
    for (const int m : ms) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(std::max(m, 0)))));
        require(m >= 1 && side * side == m, "M=" + std::to_string(m) + " is not a perfect square");
    }

    const auto rows = mimic::sweep_fidelity(nbars, ms, scheme, cutoff, trials, get<std::uint64_t>(cfg, "seed"), tail_tol);
    const fs::path dir = get<std::string>(cfg, "out_dir");
    io::write_file(dir / "mimic_sweep.csv", io::to_csv(rows));

    json table = json::array();
    double worst = 1.0;
    for (const auto& r : rows) {
        table.push_back({{"nbar", r.nbar}, {"M", r.samples}, {"fidelity_mean", r.fidelity_mean},
                         {"fidelity_std", r.fidelity_std}});
        worst = std::min(worst, r.fidelity_mean);
    }
    json summary = provenance(cfg);
    summary["config"] = cfg;
    summary["csv"] = "mimic_sweep.csv";
    summary["rows"] = std::move(table);
    summary["min_fidelity"] = worst;
    write_json(dir / "mimic_sweep_summary.json", summary);

    out << "mimic-sweep: " << rows.size() << " rows, min fidelity " << std::setprecision(6) << worst << " -> "
        << (dir / "mimic_sweep.csv").string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------- tomo-end2end

struct ArmResult {
    ReconstructionEnsemble ensemble;
    std::vector<MleResult> runs;
};

ArmResult run_arm(const FockDensityMatrix& source, const json& cfg, std::uint64_t arm_seed) {
    const auto phases = homodyne::equispaced_phases(get<int>(cfg, "phases"));
    const homodyne::QuadratureSampler sampler(source, phases);
    const Convention convention = parse_convention(get<std::string>(cfg, "convention"));
    MleConfig mle;
    mle.cutoff = get<int>(cfg, "cutoff");
    mle.max_iterations = get<int>(cfg, "max_iterations");
    mle.stop_tol = get<double>(cfg, "stop_tol");
    mle.dilution = get<double>(cfg, "dilution");

    std::vector<MleResult> results;
    std::vector<FockDensityMatrix> matrices;
    const int runs = get<int>(cfg, "runs");
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = rng::derive(arm_seed, static_cast<std::uint64_t>(r));
        const RawRun raw = homodyne::simulate_raw(sampler, get<int>(cfg, "samples_per_phase"), get<double>(cfg, "gain"),
                                                  get<double>(cfg, "offset"), seed);
        const QuadratureDataset data =
            homodyne::convert(homodyne::calibrate(raw.samples, raw.stats, convention, seed), Convention::half);
        results.push_back(tomo::mle_reconstruct(data, mle));
        matrices.push_back(results.back().rho);
    }
    return {tomo::average(matrices), std::move(results)};
}

json arm_report(const ArmResult& arm, const json& cfg) {
    json report = io::to_json(arm.ensemble);
    bool converged = true;
    int iterations = 0;
    double total_ll = 0.0;
    json runs = json::array();
    for (const auto& r : arm.runs) {
        converged = converged && r.converged;
        iterations = std::max(iterations, r.iterations);
        total_ll += r.log_likelihood;
        runs.push_back({{"converged", r.converged},
                        {"iterations", r.iterations},
                        {"final_log_likelihood", r.log_likelihood},
                        {"mean_photon", fock::mean_photon(r.rho)}});
    }
    report["converged"] = converged;
    report["iterations"] = iterations;
    report["final_log_likelihood"] = total_ll;
    report["runs"] = std::move(runs);
    report["config"] = cfg;
    return with_provenance(std::move(report), cfg);
}

int tomo_end2end(const json& cfg, std::ostream& out) {
    const std::string source_kind = get<std::string>(cfg, "source");
    const double nbar = get<double>(cfg, "nbar");
    const int state_cutoff = get<int>(cfg, "state_cutoff");
    const int cutoff = get<int>(cfg, "cutoff");
    require(source_kind == "thermal" || source_kind == "artificial" || source_kind == "vacuum",
            "source must be thermal, artificial or vacuum");
    require(nbar > 0.0 || source_kind == "vacuum", "nbar must be > 0");
    require(state_cutoff >= 0 && cutoff >= 0, "cutoffs must be >= 0");
    require(cutoff <= state_cutoff, "reconstruction cutoff must not exceed state_cutoff");
    require(get<int>(cfg, "phases") >= 1, "phases must be >= 1");
    require(get<int>(cfg, "samples_per_phase") >= 1, "samples_per_phase must be >= 1");
    require(get<int>(cfg, "runs") >= 1, "runs must be >= 1");
    require(get<double>(cfg, "gain") > 0.0, "gain must be > 0");
    require(get<int>(cfg, "max_iterations") >= 1, "max_iterations must be >= 1");
    require(get<double>(cfg, "stop_tol") > 0.0, "stop_tol must be > 0");
    const double dilution = get<double>(cfg, "dilution");
    require(dilution > 0.0 && dilution <= 1.0, "dilution must lie in (0, 1]");
    parse_convention(get<std::string>(cfg, "convention"));

    const std::uint64_t seed = get<std::uint64_t>(cfg, "seed");
    const fs::path dir = get<std::string>(cfg, "out_dir");

    FockDensityMatrix source = FockDensityMatrix::number_state(0, state_cutoff);
    FockDensityMatrix reference = FockDensityMatrix::number_state(0, cutoff);
    if (source_kind != "vacuum") {
        // the theoretical thermal state seen through the reconstruction cutoff (tail mass left out)
        reference = fock::thermal(nbar, cutoff, 1.0);
        if (source_kind == "thermal") {
            source = fock::thermal(nbar, state_cutoff);
        } else {
            const Scheme scheme = parse_scheme(get<std::string>(cfg, "scheme"));
            require(get<int>(cfg, "L") >= 1 && get<int>(cfg, "Q") >= 1, "L and Q must be >= 1");
            const Codebook cb = mimic::build_codebook(nbar, get<int>(cfg, "L"), get<int>(cfg, "Q"), scheme, seed);
            source = mimic::assemble(cb, state_cutoff);
        }
    }

    const ArmResult arm = run_arm(source, cfg, rng::derive(seed, 0));
    write_json(dir / "reconstruction.json", arm_report(arm, cfg));
    io::write_file(dir / "reconstruction_matrix.csv", io::to_csv(arm.ensemble));
    write_json(dir / "reconstruction_mean.json", with_provenance(io::to_json(arm.ensemble.mean), cfg));
    const auto vs_reference = metrics::compare(reference, arm.ensemble.mean);
    write_json(dir / "metrics.json", with_provenance(io::to_json(vs_reference), cfg));

    out << "tomo-end2end: source=" << source_kind << " runs=" << arm.runs.size() << std::setprecision(6)
        << " fidelity=" << vs_reference.fidelity << " entropy=" << vs_reference.entropy_b
        << " mean_photon=" << vs_reference.mean_photon_b << "\n";

    if (source_kind == "artificial") {
        const ArmResult thermal_arm = run_arm(fock::thermal(nbar, state_cutoff), cfg, rng::derive(seed, 1));
        write_json(dir / "thermal_reconstruction.json", arm_report(thermal_arm, cfg));
        io::write_file(dir / "thermal_reconstruction_matrix.csv", io::to_csv(thermal_arm.ensemble));
        write_json(dir / "thermal_reconstruction_mean.json",
                   with_provenance(io::to_json(thermal_arm.ensemble.mean), cfg));
        const auto pair = metrics::compare(thermal_arm.ensemble.mean, arm.ensemble.mean);
        write_json(dir / "metrics_vs_thermal_reconstruction.json", with_provenance(io::to_json(pair), cfg));
        out << "tomo-end2end: vs thermal reconstruction fidelity=" << pair.fidelity
            << " helstrom_error=" << pair.helstrom_error << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- codebook-export

int codebook_export(const json& cfg, std::ostream& out) {
    Codebook cb;
    const std::string input = get<std::string>(cfg, "codebook");
    if (!input.empty()) {
        try {
            cb = io::codebook_from_json(json::parse(io::read_file(input)));
        } catch (const json::parse_error& e) {
            throw ConfigError(input + ": " + e.what());
        } catch (const InvalidArgument& e) {
            throw ConfigError(input + ": " + e.what());
        }
    } else {
        require(get<double>(cfg, "nbar") > 0.0, "nbar must be > 0");
        require(get<int>(cfg, "L") >= 1 && get<int>(cfg, "Q") >= 1, "L and Q must be >= 1");
        cb = mimic::build_codebook(get<double>(cfg, "nbar"), get<int>(cfg, "L"), get<int>(cfg, "Q"),
                                   parse_scheme(get<std::string>(cfg, "scheme")), get<std::uint64_t>(cfg, "seed"));
    }
    ModePhysics physics{get<double>(cfg, "wavelength"), get<double>(cfg, "tau")};
    ModulatorSpec spec{get<double>(cfg, "extinction_db"), get<bool>(cfg, "ideal")};
    try {
        physics.validate();
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }

    const DriveTable table = physical::codebook_to_drive(cb, physics, spec);
    const fs::path dir = get<std::string>(cfg, "out_dir");
    write_json(dir / "codebook.json", with_provenance(io::to_json(cb), cfg));
    io::write_file(dir / "drive.csv", io::to_csv(table));
    json summary = provenance(cfg);
    summary["config"] = cfg;
    summary["symbols"] = table.rows.size();
    summary["required_db"] = table.required_db;
    summary["available_db"] = table.available_db;
    summary["csv"] = "drive.csv";
    write_json(dir / "drive_summary.json", summary);

    out << "codebook-export: " << table.rows.size() << " symbols, needs " << std::setprecision(4)
        << table.required_db << " dB of " << table.available_db << " dB available\n";
    return kOk;
}

// ---------------------------------------------------------------- metrics

int metrics_cmd(const json& cfg, std::ostream& out) {
    const std::string a_path = get<std::string>(cfg, "a");
    const std::string b_path = get<std::string>(cfg, "b");
    require(!a_path.empty() && !b_path.empty(), "metrics needs two density matrices (--a and --b)");
    FockDensityMatrix a = FockDensityMatrix::number_state(0, 0);
    FockDensityMatrix b = a;
    try {
        a = io::read_density(a_path);
        b = io::read_density(b_path);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (a.cutoff() != b.cutoff()) {
        throw ConfigError("matrices have different cutoffs: " + std::to_string(a.cutoff()) + " vs " +
                          std::to_string(b.cutoff()));
    }
    const json report = with_provenance(io::to_json(metrics::compare(a, b)), cfg);
    const std::string out_path = get<std::string>(cfg, "out");
    if (out_path.empty()) {
        out << report.dump(2) << "\n";
    } else {
        write_json(out_path, report);
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"thermimic: artificial thermal light engineering and homodyne tomography"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Command sweep;
    sweep.app = app.add_subcommand("mimic-sweep", "fidelity of coherent-state mixtures vs thermal states over (nbar, M)");
    sweep.defaults = {{"nbars", {0.5, 1.0, 1.5, 2.0}}, {"Ms", {4, 16, 36, 64, 100}},
                      {"scheme", "stratified"},       {"cutoff", 30},
                      {"tail_tol", 1e-5},
                      {"trials", 1},                  {"seed", 1},
                      {"out_dir", "thermimic_out"}};
    add_flag<std::vector<double>>(sweep, "--nbar", "nbars", "mean photon numbers (repeatable)");
    add_flag<std::vector<int>>(sweep, "--M", "Ms", "sample counts M = L*Q with L = Q (repeatable)");
    add_flag<std::string>(sweep, "--scheme", "scheme", "stratified, random or optimized");
    add_flag<int>(sweep, "--cutoff", "cutoff", "Fock cutoff");
    add_flag<double>(sweep, "--tail-tol", "tail_tol", "largest Fock mass allowed beyond the cutoff");
    add_flag<int>(sweep, "--trials", "trials", "random draws averaged per cell");
    add_flag<std::uint64_t>(sweep, "--seed", "seed", "base seed");
    add_flag<std::string>(sweep, "--out-dir", "out_dir", "output directory");

    Command tomo;
    tomo.app = app.add_subcommand("tomo-end2end", "state -> homodyne sampling -> MLE ensemble -> metrics");
    tomo.defaults = {{"source", "thermal"},
                     {"nbar", 1.35},
                     {"L", 8},
                     {"Q", 8},
                     {"scheme", "stratified"},
                     {"state_cutoff", 30},
                     {"cutoff", 12},
                     {"phases", 50},
                     {"samples_per_phase", 40},
                     {"runs", 10},
                     {"seed", 1},
                     {"convention", "quarter"},
                     {"gain", 1.0},
                     {"offset", 0.0},
                     {"max_iterations", 2000},
                     {"stop_tol", 1e-7},
                     {"dilution", 0.5},
                     {"out_dir", "thermimic_out"}};
    add_flag<std::string>(tomo, "--source", "source", "thermal, artificial or vacuum");
    add_flag<double>(tomo, "--nbar", "nbar", "target mean photon number");
    add_flag<int>(tomo, "--L", "L", "amplitude levels of the artificial source");
    add_flag<int>(tomo, "--Q", "Q", "phase levels of the artificial source");
    add_flag<std::string>(tomo, "--scheme", "scheme", "codebook scheme of the artificial source");
    add_flag<int>(tomo, "--state-cutoff", "state_cutoff", "Fock cutoff of the simulated source");
    add_flag<int>(tomo, "--cutoff", "cutoff", "Fock cutoff of the reconstruction");
    add_flag<int>(tomo, "--phases", "phases", "number of LO phases");
    add_flag<int>(tomo, "--samples-per-phase", "samples_per_phase", "quadratures per LO phase");
    add_flag<int>(tomo, "--runs", "runs", "independent reconstructions to average");
    add_flag<std::uint64_t>(tomo, "--seed", "seed", "base seed");
    add_flag<std::string>(tomo, "--convention", "convention", "calibration convention, half or quarter");
    add_flag<double>(tomo, "--gain", "gain", "synthetic detector gain");
    add_flag<double>(tomo, "--offset", "offset", "synthetic detector offset");
    add_flag<int>(tomo, "--max-iterations", "max_iterations", "MLE iteration cap");
    add_flag<double>(tomo, "--stop-tol", "stop_tol", "MLE stopping tolerance");
    add_flag<double>(tomo, "--dilution", "dilution", "MLE step dilution");
    add_flag<std::string>(tomo, "--out-dir", "out_dir", "output directory");

    Command exporter;
    exporter.app = app.add_subcommand("codebook-export", "codebook JSON and modulator drive table");
    exporter.defaults = {{"nbar", 1.5},           {"L", 8},
                         {"Q", 8},                {"scheme", "stratified"},
                         {"seed", 1},             {"codebook", ""},
                         {"wavelength", 1560.625e-9}, {"tau", 13e-9},
                         {"extinction_db", 25.0}, {"ideal", false},
                         {"out_dir", "thermimic_out"}};
    add_flag<double>(exporter, "--nbar", "nbar", "target mean photon number");
    add_flag<int>(exporter, "--L", "L", "amplitude levels");
    add_flag<int>(exporter, "--Q", "Q", "phase levels");
    add_flag<std::string>(exporter, "--scheme", "scheme", "stratified, random or optimized");
    add_flag<std::uint64_t>(exporter, "--seed", "seed", "seed for the random scheme");
    add_flag<std::string>(exporter, "--codebook", "codebook", "export an existing codebook JSON instead");
    add_flag<double>(exporter, "--wavelength", "wavelength", "optical wavelength in meters");
    add_flag<double>(exporter, "--tau", "tau", "temporal mode duration in seconds");
    add_flag<double>(exporter, "--extinction-db", "extinction_db", "intensity modulator extinction ratio");
    add_flag<bool>(exporter, "--ideal", "ideal", "allow zero-amplitude symbols");
    add_flag<std::string>(exporter, "--out-dir", "out_dir", "output directory");

    Command compare;
    compare.app = app.add_subcommand("metrics", "compare two serialized density matrices");
    compare.defaults = {{"a", ""}, {"b", ""}, {"out", ""}};
    add_flag<std::string>(compare, "--a", "a", "first density matrix (.json or .csv)");
    add_flag<std::string>(compare, "--b", "b", "second density matrix (.json or .csv)");
    add_flag<std::string>(compare, "--out", "out", "write the report here instead of stdout");

    for (Command* cmd : {&sweep, &tomo, &exporter, &compare}) {
        cmd->app->add_option("--config", cmd->config_path, "JSON config file; flags override its values");
    }

    if (args.size() <= 1) {
        err << app.help();
        return kUsage;
    }

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        for (Command* cmd : {&sweep, &tomo, &exporter, &compare}) {
            if (!cmd->app->parsed()) {
                continue;
            }
            const json cfg = resolve_config(*cmd);
            if (cmd == &sweep) {
                return mimic_sweep(cfg, out);
            }
            if (cmd == &tomo) {
                return tomo_end2end(cfg, out);
            }
            if (cmd == &exporter) {
                return codebook_export(cfg, out);
            }
            return metrics_cmd(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const FeasibilityError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kFeasibilityError;
    } catch (const NumericError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericError;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return kUsage;
}

}  // namespace thermimic::cli
