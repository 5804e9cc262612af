#include "thermimic/physical.hpp"

#include "thermimic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace thermimic {

void ModePhysics::validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw InvalidArgument("wavelength must be positive");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("temporal mode duration must be positive");
    }
}

void ModulatorSpec::validate() const {
    if (!(extinction_db > 0.0) || !std::isfinite(extinction_db)) {
        throw InvalidArgument("extinction ratio must be positive");
    }
}

namespace physical {

double nbar_to_power(double nbar, const ModePhysics& physics) {
    physics.validate();
    if (!(nbar >= 0.0)) {
        throw InvalidArgument("mean photon number must be >= 0");
    }
    return nbar * kPlanck * physics.frequency() / physics.tau;
}

double required_extinction_db(const Codebook& codebook) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const double a : codebook.amplitudes) {
        if (a > 0.0) {
            lo = std::min(lo, a * a);
            hi = std::max(hi, a * a);
        }
    }
    if (hi == 0.0) {
        throw InvalidArgument("codebook has no non-zero amplitude");
    }
    return 10.0 * std::log10(hi / lo);
}

DriveTable codebook_to_drive(const Codebook& codebook, const ModePhysics& physics, const ModulatorSpec& spec) {
    codebook.validate();
    physics.validate();
    spec.validate();

    DriveTable table;
    table.available_db = spec.extinction_db;
    table.required_db = required_extinction_db(codebook);

    if (!spec.ideal) {
        for (int l = 0; l < codebook.num_amplitudes(); ++l) {
            if (codebook.amplitudes[l] == 0.0) {
                std::ostringstream msg;
                msg << "symbols " << l * codebook.num_phases() << ".." << (l + 1) * codebook.num_phases() - 1
                    << " (amplitude index " << l << ") have zero amplitude, which needs infinite extinction; "
                    << "mark the modulator ideal to allow them";
                throw FeasibilityError(msg.str());
            }
        }
    }
    if (table.required_db > spec.extinction_db) {
        std::ostringstream msg;
        msg << "constellation needs " << table.required_db << " dB of intensity range but the modulator offers "
            << spec.extinction_db << " dB";
        throw FeasibilityError(msg.str());
    }

    double max_power = 0.0;
    for (const double a : codebook.amplitudes) {
        max_power = std::max(max_power, nbar_to_power(a * a, physics));
    }
    for (int l = 0; l < codebook.num_amplitudes(); ++l) {
        const double alpha_sq = codebook.amplitudes[l] * codebook.amplitudes[l];
        const double power = nbar_to_power(alpha_sq, physics);
        for (int q = 0; q < codebook.num_phases(); ++q) {
            table.rows.push_back(
                {l * codebook.num_phases() + q, alpha_sq, power, power / max_power, codebook.phases[q]});
        }
    }
    return table;
}

}  // namespace physical
}  // namespace thermimic
