#pragma once

#include "thermimic/mimic.hpp"

#include <vector>

namespace thermimic {

inline constexpr double kPlanck = 6.62607015e-34;     // J s, exact SI
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact SI

// One spatio-temporal optical mode.
struct ModePhysics {
    double wavelength = 1560.625e-9;  // m
    double tau = 13e-9;               // s, temporal mode duration

    void validate() const;
    double frequency() const { return kSpeedOfLight / wavelength; }
    // Power carried by one photon per mode, h f / tau.
    double photon_power() const { return kPlanck * frequency() / tau; }
};

struct ModulatorSpec {
    double extinction_db = 25.0;
    // An ideal modulator reaches zero transmission, so zero-amplitude symbols are allowed.
    bool ideal = false;

    void validate() const;
};

struct DriveRow {
    int index = 0;          // l * Q + q
    double alpha_sq = 0.0;  // |alpha|^2 = mean photon number of the symbol
    double power_w = 0.0;
    double intensity_level = 0.0;  // power / max power, in [0, 1]
    double phase_rad = 0.0;
};

struct DriveTable {
    std::vector<DriveRow> rows;
    double required_db = 0.0;   // 10 log10(P_max / P_min) over non-zero symbols
    double available_db = 0.0;
};

namespace physical {

// P = nbar h f / tau
double nbar_to_power(double nbar, const ModePhysics& physics);

// Dynamic range needed to produce every non-zero amplitude of the codebook, in dB.
double required_extinction_db(const Codebook& codebook);

// Per-symbol power and normalized modulator levels. Throws FeasibilityError when
// the required range exceeds spec.extinction_db, or when a zero-amplitude symbol
// meets a non-ideal modulator.
DriveTable codebook_to_drive(const Codebook& codebook, const ModePhysics& physics, const ModulatorSpec& spec);

}  // namespace physical
}  // namespace thermimic
