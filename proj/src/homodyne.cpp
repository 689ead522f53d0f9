#include "optomech/homodyne.hpp"

#include <cmath>
#include <sstream>

#include "optomech/constants.hpp"
#include "optomech/parallel.hpp"
#include "optomech/rng.hpp"

namespace optomech {

void HomodyneConfig::validate() const
{
    if (!(p_in >= 0.0) || !std::isfinite(p_in))
        throw FieldError("p_in", "must be non-negative");
    if (!(p_lo >= 0.0) || !std::isfinite(p_lo))
        throw FieldError("p_lo", "must be non-negative");
    if (!std::isfinite(theta))
        throw FieldError("theta", "must be finite");
    if (!std::isfinite(delta_bar))
        throw FieldError("delta_bar", "must be finite");
    if (!std::isfinite(gain))
        throw FieldError("gain", "must be finite");
    if (phase_averaged && n_theta < 8)
        throw FieldError("n_theta", "must be at least 8 for phase averaging");
}

std::complex<double> cavity_reflection(double delta, const SystemParams& params)
{
    const std::complex<double> background = std::polar(params.fano_c, params.fano_phi);
    return background - params.eta * params.kappa / std::complex<double>(0.5 * params.kappa, delta);
}

double homodyne_output(double delta, double theta, const SystemParams& params, const HomodyneConfig& config)
{
    const double k = params.kappa;
    const double resonant =
        params.eta * k * (2.0 * delta * std::cos(theta) + k * std::sin(theta)) / (delta * delta + 0.25 * k * k);
    const double background = -2.0 * params.fano_c * std::sin(theta - params.fano_phi);
    return config.gain * std::sqrt(config.p_in * config.p_lo) * (background + resonant);
}

double shot_noise_psd(const SystemParams& params, double p_lo) { return params.photon_energy() * p_lo; }

OutputTrace transduce_trace(const MotionTrace& trace, const SystemParams& params, const HomodyneConfig& config,
                            Diagnostics* diag, std::uint64_t noise_stream)
{
    config.validate();
    const std::size_t n = trace.size();
    if (trace.delta_omega.size() != n || n == 0)
        throw FieldError("delta_omega", "trace has no cavity-shift series");

    double omega_max = 0.0;
    for (const auto& m : params.modes)
        omega_max = std::max(omega_max, m.omega_m);
    if (params.kappa < 100.0 * omega_max) {
        std::ostringstream msg;
        msg << "transduce_trace: kappa / Omega_m = " << params.kappa / omega_max
            << " < 100; the instantaneous cavity response is only approximate";
        warn(diag, msg.str());
    }

    OutputTrace out;
    out.sample_rate = trace.sample_rate;
    out.power.resize(n);
    // Same expression as homodyne_output with the theta-dependent factors hoisted.
    const double k = params.kappa;
    const double scale = config.gain * std::sqrt(config.p_in * config.p_lo);
    const double background = -2.0 * params.fano_c * std::sin(config.theta - params.fano_phi);
    const double a = params.eta * k * 2.0 * std::cos(config.theta);
    const double b = params.eta * k * k * std::sin(config.theta);
    for (std::size_t i = 0; i < n; ++i) {
        const double delta = config.delta_bar + trace.delta_omega[i];
        out.power[i] = scale * (background + (a * delta + b) / (delta * delta + 0.25 * k * k));
    }

    if (config.shot_noise) {
        const double sigma = config.gain * std::sqrt(shot_noise_psd(params, config.p_lo) * 0.5 * trace.sample_rate);
        RandomStream rng(config.noise_seed, noise_stream);
        for (double& p : out.power)
            p += sigma * rng.normal();
    }
    return out;
}

Spectrum phase_averaged_psd(const MotionTrace& trace, const SystemParams& params, const HomodyneConfig& config,
                            const PsdOptions& psd, Diagnostics* diag)
{
    if (!config.phase_averaged)
        throw FieldError("phase_averaged", "phase_averaged_psd requires the phase_averaged flag");
    config.validate();

    const auto n_theta = static_cast<std::size_t>(config.n_theta);
    std::vector<Spectrum> parts(n_theta);
    std::vector<Diagnostics> part_diag(n_theta);
    parallel_for(n_theta, [&](std::size_t i) {
        HomodyneConfig c = config;
        c.theta = kTwoPi * static_cast<double>(i) / static_cast<double>(n_theta);
        const auto out = transduce_trace(trace, params, c, &part_diag[i], i);
        parts[i] = estimate_psd(out.power, out.sample_rate, psd);
    });
    if (diag != nullptr && !part_diag.front().empty())
        for (const auto& w : part_diag.front().warnings)
            diag->warn(w);

    Spectrum mean = parts.front();
    for (std::size_t i = 1; i < n_theta; ++i)
        for (std::size_t k = 0; k < mean.size(); ++k)
            mean.psd[k] += parts[i].psd[k];
    for (double& v : mean.psd)
        v /= static_cast<double>(n_theta);
    return mean;
}

} // namespace optomech
