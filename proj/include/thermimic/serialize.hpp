#pragma once

#include "thermimic/fock.hpp"
#include "thermimic/homodyne.hpp"
#include "thermimic/metrics.hpp"
#include "thermimic/mimic.hpp"
#include "thermimic/physical.hpp"
#include "thermimic/tomo.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace thermimic::io {

using json = nlohmann::json;

// Shortest text that parses back to the same double ("%.17g").
std::string format_double(double v);
double parse_double(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// --- density matrices --------------------------------------------------------
// JSON: {"cutoff": n, "entries_real": [[...]], "entries_imag": [[...]]}
// CSV:  header "row,col,re,im", one line per entry in row-major order.

json to_json(const FockDensityMatrix& rho);
FockDensityMatrix density_from_json(const json& j);
std::string to_csv(const FockDensityMatrix& rho);
FockDensityMatrix density_from_csv(std::string_view text);

// Format chosen by extension (.json or .csv).
FockDensityMatrix read_density(const std::filesystem::path& path);
void write_density(const std::filesystem::path& path, const FockDensityMatrix& rho);

// --- codebooks ---------------------------------------------------------------
// {"nbar_target", "amplitudes": [], "phases": [], "weights": [[...]], "scheme", "seed"}

json to_json(const Codebook& codebook);
Codebook codebook_from_json(const json& j);

// --- quadrature datasets -----------------------------------------------------
// CSV with header "theta,x" plus a JSON sidecar {convention, seed, count} next
// to it (same path, .json extension).

std::string to_csv(const QuadratureDataset& data);
json sidecar(const QuadratureDataset& data);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);
void write_dataset(const std::filesystem::path& csv_path, const QuadratureDataset& data);
// Throws InvalidArgument when the sidecar or its convention tag is missing.
QuadratureDataset read_dataset(const std::filesystem::path& csv_path);

// --- tables and reports ------------------------------------------------------

// header "nbar,M,scheme,fidelity_mean,fidelity_std"
std::string to_csv(const std::vector<mimic::SweepRow>& rows);
// header "index,alpha_sq,power_w,intensity_level,phase_rad"
std::string to_csv(const DriveTable& table);
// header "row,col,re,im,std"
std::string to_csv(const ReconstructionEnsemble& ensemble);

json to_json(const metrics::MetricReport& report);
// {converged, iterations, final_log_likelihood, cutoff, matrix, mean_photon}
json to_json(const MleResult& result);
// {cutoff, matrix, mean_photon, elementwise_std, n_runs}
json to_json(const ReconstructionEnsemble& ensemble);

}  // namespace thermimic::io
