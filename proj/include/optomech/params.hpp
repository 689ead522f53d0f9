#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace optomech {

/// One mechanical mode coupled to the cavity. All rates in rad/s.
struct MechanicalMode {
    double omega_m = 0.0;  // angular resonance frequency
    double gamma = 0.0;    // energy damping rate
    double g0 = 0.0;       // vacuum optomechanical coupling rate
    std::optional<double> mass;   // effective mass, kg
    std::optional<double> x_zpf;  // zero-point fluctuation, m

    /// Builds a mode whose x_zpf follows from the mass.
    static MechanicalMode from_mass(double omega_m, double gamma, double g0, double mass);

    /// Cavity frequency pull per metre, g0 / x_zpf. Requires x_zpf.
    double coupling_gradient() const;

    /// Throws FieldError on violated invariants. `prefix` is prepended to field names.
    void validate(const std::string& prefix = "") const;
};

double zero_point_fluctuation(double mass, double omega_m);

/// Device description. All rates in rad/s.
struct SystemParams {
    double kappa = 0.0;    // intrinsic optical linewidth
    double omega_c = 0.0;  // optical resonance frequency
    std::vector<MechanicalMode> modes;
    double eta = 1.0;       // cavity coupling efficiency
    double fano_c = 0.0;    // non-resonant reflection amplitude
    double fano_phi = 0.0;  // non-resonant reflection phase, rad

    void validate() const;

    /// Energy of one photon, hbar * omega_c, in J.
    double photon_energy() const;
};

// Operations. Temperatures in K.
double thermal_occupancy(double temperature, const MechanicalMode& mode);
double frequency_variance(const SystemParams& params, double temperature);
double rms_frequency_fluctuation(const SystemParams& params, double temperature);
double single_photon_cooperativity(double g0, double kappa, double gamma);
double effective_quadratic_coupling(double g0, double kappa);

/// Temperature at which rms_frequency_fluctuation(params, T) equals `target` (rad/s).
double temperature_for_rms_fluctuation(const SystemParams& params, double target);

/// Parameter sets of the two characterized nanobeam devices.
namespace presets {
SystemParams device1();
SystemParams device2();
inline constexpr double device1_wavelength = 1457.5e-9;  // m
}

// JSON document in Hz / K / kg / m (see docs/params-schema.md).
nlohmann::json to_json(const SystemParams& params);
SystemParams params_from_json(const nlohmann::json& doc);

} // namespace optomech
