#include "optomech/params.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

double zero_point_fluctuation(double mass, double omega_m)
{
    return std::sqrt(PhysicalConstants::hbar / (2.0 * mass * omega_m));
}

MechanicalMode MechanicalMode::from_mass(double omega_m, double gamma, double g0, double mass)
{
    MechanicalMode mode;
    mode.omega_m = omega_m;
    mode.gamma = gamma;
    mode.g0 = g0;
    mode.mass = mass;
    mode.x_zpf = zero_point_fluctuation(mass, omega_m);
    return mode;
}

double MechanicalMode::coupling_gradient() const
{
    if (!x_zpf || *x_zpf <= 0.0)
        throw FieldError("x_zpf", "required to convert g0 into a coupling gradient");
    return g0 / *x_zpf;
}

void MechanicalMode::validate(const std::string& prefix) const
{
    if (!(omega_m > 0.0) || !std::isfinite(omega_m))
        throw FieldError(prefix + "omega_m", "must be positive and finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw FieldError(prefix + "gamma", "must be positive and finite");
    if (!(gamma < omega_m))
        throw FieldError(prefix + "gamma", "must be below omega_m (underdamped mode)");
    if (!(g0 >= 0.0) || !std::isfinite(g0))
        throw FieldError(prefix + "g0", "must be non-negative and finite");
    if (mass) {
        if (!(*mass > 0.0) || !std::isfinite(*mass))
            throw FieldError(prefix + "mass", "must be positive and finite");
        if (x_zpf) {
            const double expected = zero_point_fluctuation(*mass, omega_m);
            if (std::abs(*x_zpf - expected) > 1e-12 * expected)
                throw FieldError(prefix + "x_zpf", "inconsistent with mass and omega_m");
        }
    }
    if (x_zpf && (!(*x_zpf > 0.0) || !std::isfinite(*x_zpf)))
        throw FieldError(prefix + "x_zpf", "must be positive and finite");
}

void SystemParams::validate() const
{
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw FieldError("kappa", "must be positive and finite");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw FieldError("omega_c", "must be positive and finite");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw FieldError("eta", "must lie in [0, 1]");
    if (!(fano_c >= 0.0) || !std::isfinite(fano_c))
        throw FieldError("fano_c", "must be non-negative and finite");
    if (!std::isfinite(fano_phi))
        throw FieldError("fano_phi", "must be finite");
    if (modes.empty())
        throw FieldError("modes", "at least one mechanical mode is required");
    for (std::size_t j = 0; j < modes.size(); ++j)
        modes[j].validate("modes[" + std::to_string(j) + "].");
}

double SystemParams::photon_energy() const { return PhysicalConstants::hbar * omega_c; }

double thermal_occupancy(double temperature, const MechanicalMode& mode)
{
    if (!(temperature >= 0.0))
        throw FieldError("temperature", "must be non-negative");
    return PhysicalConstants::kB * temperature / (PhysicalConstants::hbar * mode.omega_m);
}

double frequency_variance(const SystemParams& params, double temperature)
{
    double variance = 0.0;
    for (const auto& mode : params.modes)
        variance += 2.0 * thermal_occupancy(temperature, mode) * mode.g0 * mode.g0;
    return variance;
}

double rms_frequency_fluctuation(const SystemParams& params, double temperature)
{
    return std::sqrt(frequency_variance(params, temperature));
}

double single_photon_cooperativity(double g0, double kappa, double gamma)
{
    if (!(g0 > 0.0) || !(kappa > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("single_photon_cooperativity: rates must be positive");
    return 4.0 * g0 * g0 / (kappa * gamma);
}

double effective_quadratic_coupling(double g0, double kappa)
{
    if (!(kappa > 0.0))
        throw FieldError("kappa", "must be positive");
    return g0 * g0 / kappa;
}

double temperature_for_rms_fluctuation(const SystemParams& params, double target)
{
    const double per_kelvin = frequency_variance(params, 1.0);
    if (!(per_kelvin > 0.0))
        throw std::invalid_argument("temperature_for_rms_fluctuation: all modes have g0 = 0");
    return target * target / per_kelvin;
}

namespace presets {

SystemParams device1()
{
    SystemParams p;
    p.kappa = hz_to_rad(20.4e9);
    p.omega_c = kTwoPi * PhysicalConstants::c / device1_wavelength;
    p.eta = 0.013;
    const double mass = 1.5e-15;
    p.modes.push_back(MechanicalMode::from_mass(hz_to_rad(3.27e6), hz_to_rad(100.0), hz_to_rad(24.7e6), mass));
    p.modes.push_back(MechanicalMode::from_mass(hz_to_rad(3.36e6), hz_to_rad(100.0), hz_to_rad(25.4e6), mass));
    return p;
}

SystemParams device2()
{
    // Mechanical frequency, damping and mass are not reported for this device;
    // device-1-like values are assumed. No outcoupling grating: eta ~ 0.1 %.
    SystemParams p;
    p.kappa = hz_to_rad(9.0e9);
    p.omega_c = kTwoPi * PhysicalConstants::c / device1_wavelength;
    p.eta = 0.001;
    p.modes.push_back(MechanicalMode::from_mass(hz_to_rad(3.3e6), hz_to_rad(100.0), hz_to_rad(10.8e6), 1.5e-15));
    return p;
}

} // namespace presets

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

double number_at(const json& obj, const std::string& key, const std::string& path)
{
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw FieldError(path + key, "must be a number");
    return v.get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path)
{
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key))
            throw FieldError(path + key, "unknown field");
}

MechanicalMode mode_from_json(const json& doc, const std::string& path)
{
    if (!doc.is_object())
        throw FieldError(path.substr(0, path.size() - 1), "must be an object");
    reject_unknown(doc, {"omega_m", "gamma", "g0", "mass", "x_zpf"}, path);
    for (const char* key : {"omega_m", "gamma", "g0"})
        if (!doc.contains(key))
            throw FieldError(path + key, "missing required field");
    MechanicalMode mode;
    mode.omega_m = hz_to_rad(number_at(doc, "omega_m", path));
    mode.gamma = hz_to_rad(number_at(doc, "gamma", path));
    mode.g0 = hz_to_rad(number_at(doc, "g0", path));
    if (doc.contains("mass"))
        mode.mass = number_at(doc, "mass", path);
    if (doc.contains("x_zpf"))
        mode.x_zpf = number_at(doc, "x_zpf", path);
    if (mode.mass && !mode.x_zpf && *mode.mass > 0.0 && mode.omega_m > 0.0)
        mode.x_zpf = zero_point_fluctuation(*mode.mass, mode.omega_m);
    return mode;
}

} // namespace

json to_json(const SystemParams& params)
{
    json doc;
    doc["kappa"] = rad_to_hz(params.kappa);
    doc["omega_c"] = rad_to_hz(params.omega_c);
    doc["eta"] = params.eta;
    doc["fano_c"] = params.fano_c;
    doc["fano_phi"] = params.fano_phi;
    doc["modes"] = json::array();
    for (const auto& mode : params.modes) {
        json m;
        m["omega_m"] = rad_to_hz(mode.omega_m);
        m["gamma"] = rad_to_hz(mode.gamma);
        m["g0"] = rad_to_hz(mode.g0);
        if (mode.mass)
            m["mass"] = *mode.mass;
        if (mode.x_zpf)
            m["x_zpf"] = *mode.x_zpf;
        doc["modes"].push_back(m);
    }
    return doc;
}

SystemParams params_from_json(const json& doc)
{
    if (!doc.is_object())
        throw FieldError("", "parameter document must be an object");
    reject_unknown(doc, {"preset", "kappa", "omega_c", "wavelength", "eta", "fano_c", "fano_phi", "modes"}, "");

    SystemParams p;
    bool from_preset = false;
    if (doc.contains("preset")) {
        const auto& name = doc.at("preset");
        if (name == "device1")
            p = presets::device1();
        else if (name == "device2")
            p = presets::device2();
        else
            throw FieldError("preset", "unknown preset (expected device1 or device2)");
        from_preset = true;
    }

    auto require = [&](const char* key) {
        if (!from_preset && !doc.contains(key))
            throw FieldError(key, "missing required field");
    };

    require("kappa");
    if (doc.contains("kappa"))
        p.kappa = hz_to_rad(number_at(doc, "kappa", ""));
    if (doc.contains("omega_c") && doc.contains("wavelength"))
        throw FieldError("wavelength", "give either omega_c or wavelength, not both");
    if (doc.contains("omega_c")) {
        p.omega_c = hz_to_rad(number_at(doc, "omega_c", ""));
    } else if (doc.contains("wavelength")) {
        const double lambda = number_at(doc, "wavelength", "");
        if (!(lambda > 0.0))
            throw FieldError("wavelength", "must be positive");
        p.omega_c = kTwoPi * PhysicalConstants::c / lambda;
    } else if (!from_preset) {
        throw FieldError("omega_c", "missing required field (or give wavelength)");
    }
    if (doc.contains("eta"))
        p.eta = number_at(doc, "eta", "");
    if (doc.contains("fano_c"))
        p.fano_c = number_at(doc, "fano_c", "");
    if (doc.contains("fano_phi"))
        p.fano_phi = number_at(doc, "fano_phi", "");

    require("modes");
    if (doc.contains("modes")) {
        const auto& modes = doc.at("modes");
        if (!modes.is_array())
            throw FieldError("modes", "must be an array");
        p.modes.clear();
        for (std::size_t j = 0; j < modes.size(); ++j)
            p.modes.push_back(mode_from_json(modes[j], "modes[" + std::to_string(j) + "]."));
    }

    p.validate();
    return p;
}

} // namespace optomech
