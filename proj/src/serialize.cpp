#include "thermimic/serialize.hpp"

#include "thermimic/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace thermimic::io {

std::string format_double(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidArgument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidArgument("cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

namespace {

std::vector<std::vector<std::string_view>> split_csv(std::string_view text, std::string_view expected_header) {
    std::vector<std::vector<std::string_view>> rows;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            if (line != expected_header) {
                throw InvalidArgument("expected CSV header '" + std::string(expected_header) + "', got '" +
                                      std::string(line) + "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    if (!header_seen) {
        throw InvalidArgument("empty CSV, expected header '" + std::string(expected_header) + "'");
    }
    return rows;
}

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw InvalidArgument(std::string("missing key '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

json to_json(const FockDensityMatrix& rho) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index m = 0; m < rho.dim(); ++m) {
        json row_re = json::array();
        json row_im = json::array();
        for (Eigen::Index n = 0; n < rho.dim(); ++n) {
            row_re.push_back(rho(m, n).real());
            row_im.push_back(rho(m, n).imag());
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    return {{"cutoff", rho.cutoff()}, {"entries_real", std::move(re)}, {"entries_imag", std::move(im)}};
}

FockDensityMatrix density_from_json(const json& j) {
    const int cutoff = require<int>(j, "cutoff");
    const auto re = require<std::vector<std::vector<double>>>(j, "entries_real");
    const auto im = require<std::vector<std::vector<double>>>(j, "entries_imag");
    const auto d = static_cast<std::size_t>(cutoff + 1);
    if (cutoff < 0 || re.size() != d || im.size() != d) {
        throw InvalidArgument("density matrix JSON rows do not match cutoff " + std::to_string(cutoff));
    }
    ComplexMatrix m(cutoff + 1, cutoff + 1);
    for (std::size_t r = 0; r < d; ++r) {
        if (re[r].size() != d || im[r].size() != d) {
            throw InvalidArgument("density matrix JSON row " + std::to_string(r) + " has the wrong length");
        }
        for (std::size_t c = 0; c < d; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re[r][c], im[r][c]);
        }
    }
    return FockDensityMatrix(std::move(m));
}

std::string to_csv(const FockDensityMatrix& rho) {
    std::string out = "row,col,re,im\n";
    for (Eigen::Index m = 0; m < rho.dim(); ++m) {
        for (Eigen::Index n = 0; n < rho.dim(); ++n) {
            out += std::to_string(m) + ',' + std::to_string(n) + ',' + format_double(rho(m, n).real()) + ',' +
                   format_double(rho(m, n).imag()) + '\n';
        }
    }
    return out;
}

FockDensityMatrix density_from_csv(std::string_view text) {
    const auto rows = split_csv(text, "row,col,re,im");
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(rows.size()))));
    if (d == 0 || static_cast<std::size_t>(d * d) != rows.size()) {
        throw InvalidArgument("density matrix CSV must hold a square number of entries, got " +
                              std::to_string(rows.size()));
    }
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(d, d);
    for (const auto& f : rows) {
        if (f.size() != 4) {
            throw InvalidArgument("density matrix CSV rows need 4 fields");
        }
        const auto r = static_cast<Eigen::Index>(parse_double(f[0]));
        const auto c = static_cast<Eigen::Index>(parse_double(f[1]));
        if (r < 0 || c < 0 || r >= d || c >= d || seen(r, c)) {
            throw InvalidArgument("density matrix CSV has an out-of-range or repeated index");
        }
        seen(r, c) = 1;
        m(r, c) = Complex(parse_double(f[2]), parse_double(f[3]));
    }
    return FockDensityMatrix(std::move(m));
}

FockDensityMatrix read_density(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    if (path.extension() == ".csv") {
        return density_from_csv(text);
    }
    try {
        return density_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

void write_density(const std::filesystem::path& path, const FockDensityMatrix& rho) {
    if (path.extension() == ".csv") {
        write_file(path, to_csv(rho));
    } else {
        write_file(path, to_json(rho).dump(2) + "\n");
    }
}

json to_json(const Codebook& codebook) {
    json weights = json::array();
    for (Eigen::Index l = 0; l < codebook.weights.rows(); ++l) {
        json row = json::array();
        for (Eigen::Index q = 0; q < codebook.weights.cols(); ++q) {
            row.push_back(codebook.weights(l, q));
        }
        weights.push_back(std::move(row));
    }
    json j = {{"nbar_target", codebook.nbar_target},
              {"amplitudes", codebook.amplitudes},
              {"phases", codebook.phases},
              {"weights", std::move(weights)},
              {"scheme", std::string(to_string(codebook.scheme))}};
    j["seed"] = codebook.seed ? json(*codebook.seed) : json(nullptr);
    return j;
}

Codebook codebook_from_json(const json& j) {
    Codebook cb;
    cb.nbar_target = require<double>(j, "nbar_target");
    cb.amplitudes = require<std::vector<double>>(j, "amplitudes");
    cb.phases = require<std::vector<double>>(j, "phases");
    cb.scheme = parse_scheme(require<std::string>(j, "scheme"));
    if (j.contains("seed") && !j.at("seed").is_null()) {
        cb.seed = require<std::uint64_t>(j, "seed");
    }
    const auto w = require<std::vector<std::vector<double>>>(j, "weights");
    if (w.size() != cb.amplitudes.size()) {
        throw InvalidArgument("codebook weights need one row per amplitude");
    }
    cb.weights.resize(static_cast<Eigen::Index>(cb.amplitudes.size()), static_cast<Eigen::Index>(cb.phases.size()));
    for (std::size_t l = 0; l < w.size(); ++l) {
        if (w[l].size() != cb.phases.size()) {
            throw InvalidArgument("codebook weights need one column per phase");
        }
        for (std::size_t q = 0; q < w[l].size(); ++q) {
            cb.weights(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(q)) = w[l][q];
        }
    }
    cb.validate();
    return cb;
}

std::string to_csv(const QuadratureDataset& data) {
    std::string out = "theta,x\n";
    for (const auto& r : data.records()) {
        out += format_double(r.theta) + ',' + format_double(r.x) + '\n';
    }
    return out;
}

json sidecar(const QuadratureDataset& data) {
    json j = {{"convention", std::string(to_string(data.convention()))}, {"count", data.size()}};
    j["seed"] = data.seed() ? json(*data.seed()) : json(nullptr);
    return j;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_extension(".json");
    return p;
}

void write_dataset(const std::filesystem::path& csv_path, const QuadratureDataset& data) {
    write_file(csv_path, to_csv(data));
    write_file(sidecar_path(csv_path), sidecar(data).dump(2) + "\n");
}

QuadratureDataset read_dataset(const std::filesystem::path& csv_path) {
    const auto meta_path = sidecar_path(csv_path);
    if (!std::filesystem::exists(meta_path)) {
        throw InvalidArgument("dataset " + csv_path.string() + " has no sidecar " + meta_path.string() +
                              "; the quadrature convention is unknown");
    }
    json meta;
    try {
        meta = json::parse(read_file(meta_path));
    } catch (const json::parse_error& e) {
        throw InvalidArgument(meta_path.string() + ": " + e.what());
    }
    if (!meta.contains("convention")) {
        throw InvalidArgument("dataset sidecar " + meta_path.string() + " lacks the convention tag");
    }
    const Convention convention = parse_convention(require<std::string>(meta, "convention"));
    std::optional<std::uint64_t> seed;
    if (meta.contains("seed") && !meta.at("seed").is_null()) {
        seed = require<std::uint64_t>(meta, "seed");
    }

    const std::string text = read_file(csv_path);
    std::vector<QuadratureRecord> records;
    for (const auto& f : split_csv(text, "theta,x")) {
        if (f.size() != 2) {
            throw InvalidArgument("dataset CSV rows need 2 fields");
        }
        records.push_back({parse_double(f[1]), parse_double(f[0])});
    }
    if (meta.contains("count") && require<std::size_t>(meta, "count") != records.size()) {
        throw InvalidArgument("dataset sidecar count does not match the CSV");
    }
    return QuadratureDataset(std::move(records), convention, seed);
}

std::string to_csv(const std::vector<mimic::SweepRow>& rows) {
    std::string out = "nbar,M,scheme,fidelity_mean,fidelity_std\n";
    for (const auto& r : rows) {
        out += format_double(r.nbar) + ',' + std::to_string(r.samples) + ',' + std::string(to_string(r.scheme)) +
               ',' + format_double(r.fidelity_mean) + ',' + format_double(r.fidelity_std) + '\n';
    }
    return out;
}

std::string to_csv(const DriveTable& table) {
    std::string out = "index,alpha_sq,power_w,intensity_level,phase_rad\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.index) + ',' + format_double(r.alpha_sq) + ',' + format_double(r.power_w) + ',' +
               format_double(r.intensity_level) + ',' + format_double(r.phase_rad) + '\n';
    }
    return out;
}

std::string to_csv(const ReconstructionEnsemble& ensemble) {
    std::string out = "row,col,re,im,std\n";
    const auto& m = ensemble.mean;
    for (Eigen::Index r = 0; r < m.dim(); ++r) {
        for (Eigen::Index c = 0; c < m.dim(); ++c) {
            out += std::to_string(r) + ',' + std::to_string(c) + ',' + format_double(m(r, c).real()) + ',' +
                   format_double(m(r, c).imag()) + ',' + format_double(ensemble.elementwise_std(r, c)) + '\n';
        }
    }
    return out;
}

json to_json(const metrics::MetricReport& report) {
    return {{"fidelity", report.fidelity},
            {"trace_distance", report.trace_distance},
            {"helstrom_error", report.helstrom_error},
            {"entropy_a", report.entropy_a},
            {"entropy_b", report.entropy_b},
            {"mean_photon_a", report.mean_photon_a},
            {"mean_photon_b", report.mean_photon_b}};
}

json to_json(const MleResult& result) {
    return {{"converged", result.converged},
            {"iterations", result.iterations},
            {"final_log_likelihood", result.log_likelihood},
            {"cutoff", result.rho.cutoff()},
            {"matrix", to_json(result.rho)},
            {"mean_photon", fock::mean_photon(result.rho)}};
}

json to_json(const ReconstructionEnsemble& ensemble) {
    json std_rows = json::array();
    for (Eigen::Index r = 0; r < ensemble.elementwise_std.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < ensemble.elementwise_std.cols(); ++c) {
            row.push_back(ensemble.elementwise_std(r, c));
        }
        std_rows.push_back(std::move(row));
    }
    return {{"cutoff", ensemble.mean.cutoff()},
            {"matrix", to_json(ensemble.mean)},
            {"mean_photon", fock::mean_photon(ensemble.mean)},
            {"elementwise_std", std::move(std_rows)},
            {"n_runs", ensemble.n_runs}};
}

}  // namespace thermimic::io
