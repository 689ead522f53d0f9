#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "optomech/errors.hpp"
#include "optomech/motion.hpp"
#include "optomech/params.hpp"
#include "optomech/spectral.hpp"

namespace optomech {

struct HomodyneConfig {
    double theta = 0.0;            // local-oscillator phase, rad
    bool phase_averaged = false;
    int n_theta = 8;               // phases on [0, 2 pi) when averaging
    double p_in = 0.0;             // W incident on the cavity
    double p_lo = 0.0;             // W in the local oscillator
    double delta_bar = 0.0;        // mean detuning, rad/s
    double gain = 1.0;             // detector gain, pass-through scale
    bool shot_noise = false;       // add white noise of one-sided PSD hbar omega_c P_LO
    std::uint64_t noise_seed = 0;

    void validate() const;
};

/// Output power time series, W (times gain).
struct OutputTrace {
    double sample_rate = 0.0;
    std::vector<double> power;
};

/// Reflection coefficient r = c e^{i phi} - eta kappa / (i delta + kappa / 2).
std::complex<double> cavity_reflection(double delta, const SystemParams& params);

/// Balanced-homodyne virtual power at detuning `delta` and LO phase `theta`:
/// sqrt(P_in P_LO) (-2c sin(theta - phi) + eta kappa (2 delta cos theta + kappa sin theta) / (delta^2 + kappa^2/4)),
/// scaled by config.gain. config.theta is ignored.
double homodyne_output(double delta, double theta, const SystemParams& params, const HomodyneConfig& config);

/// Instantaneous (bad-cavity) response to delta(t) = delta_bar + trace.delta_omega(t) at
/// config.theta. `noise_stream` selects the shot-noise RNG stream.
OutputTrace transduce_trace(const MotionTrace& trace, const SystemParams& params, const HomodyneConfig& config,
                            Diagnostics* diag = nullptr, std::uint64_t noise_stream = 0);

/// Mean of the output PSDs at theta_i = 2 pi i / n_theta. Each phase uses noise stream i.
Spectrum phase_averaged_psd(const MotionTrace& trace, const SystemParams& params, const HomodyneConfig& config,
                            const PsdOptions& psd, Diagnostics* diag = nullptr);

/// One-sided shot-noise PSD hbar omega_c P_LO, W^2/Hz, before gain.
double shot_noise_psd(const SystemParams& params, double p_lo);

} // namespace optomech
