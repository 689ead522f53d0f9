#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "optomech/fitting.hpp"
#include "optomech/params.hpp"

namespace optomech {

struct SpringConfig {
    double n_c_max = 0.0;        // intracavity photons on resonance
    double G = 0.0;              // d omega_c / dx, rad/s/m
    double mass = 0.0;           // kg
    double omega_m = 0.0;        // rad/s
    double measured_fwhm = 0.0;  // Hz, mechanical linewidth used for the averaged lineshape
    int n_amplitude_samples = 10000;
    int quadrature_points = 64;  // initial Simpson intervals over half a period
    std::uint64_t seed = 0;

    void validate() const;
    double x_zpf() const;

    /// Spring model for `mode`, which must carry a mass.
    static SpringConfig from_mode(const MechanicalMode& mode, double n_c_max, double measured_fwhm,
                                  std::uint64_t seed = 0);
};

struct SpringSpectrogram {
    std::vector<double> detunings;         // rad/s
    std::vector<double> freqs;             // Hz
    std::vector<std::vector<double>> psd;  // psd[row][col], 1/Hz before rescaling
};

/// Resonant intracavity photon number 4 eta P_in / (hbar omega_c kappa).
double intracavity_photons(const SystemParams& params, double p_in);

/// F = hbar G n_c_max / (1 + u^2), u = (2/kappa)(delta_bar + G x).
double radiation_force(double x, double delta_bar, const SpringConfig& cfg, double kappa);

/// a1 = (Omega/pi) int_0^{2pi/Omega} F(x0 sin(Omega t)) sin(Omega t) dt, by Simpson's rule on the
/// half period (the two halves folded together), doubling the grid until successive estimates
/// agree to 1e-8 relative. Throws ConvergenceError past 2^18 intervals.
double first_fourier_coefficient(double delta_bar, double x0, const SpringConfig& cfg, double kappa);

/// Amplitude-dependent frequency shift (-a1 / x0) / (2 m Omega_m), rad/s. Requires x0 > 0.
double spring_shift(double delta_bar, double x0, const SpringConfig& cfg, double kappa);

/// Small-amplitude limit -(dF/dx) / (2 m Omega_m) with
/// dF/dx = -hbar G^2 n_c_max (4/kappa) u / (1 + u^2)^2, u = 2 delta_bar / kappa.
/// Positive delta_bar gives a positive (upward, "blue") shift.
double linearized_spring_shift(double delta_bar, const SpringConfig& cfg, double kappa);

/// Shifts (rad/s) for n_amplitude_samples thermal amplitudes, drawn from RNG stream (seed, stream).
std::vector<double> thermal_spring_shifts(double delta_bar, double temperature, const SystemParams& params,
                                          const SpringConfig& cfg, std::uint64_t stream = 0);

/// Average of unit-area Lorentzians (FWHM measured_fwhm) centred at (omega_m + shift) / 2 pi,
/// evaluated on `freqs` (Hz).
std::vector<double> thermal_spring_spectrum(double delta_bar, double temperature, const SystemParams& params,
                                            const SpringConfig& cfg, std::span<const double> freqs,
                                            std::uint64_t stream = 0);

/// Same, from precomputed shifts.
std::vector<double> lorentzian_average(std::span<const double> shifts, double omega_m, double fwhm_hz,
                                       std::span<const double> freqs);

/// Uniform axis of `n` frequencies centred on omega_m / 2 pi spanning +/- half_span Hz.
std::vector<double> spring_frequency_axis(const SpringConfig& cfg, double half_span, std::size_t n);

/// One thermal_spring_spectrum row per detuning (row i uses stream i). If reference_max is set,
/// every row is multiplied by reference_max / (max of the row closest to zero detuning).
SpringSpectrogram spring_spectrogram(std::span<const double> detunings, double temperature, const SystemParams& params,
                                     const SpringConfig& cfg, std::span<const double> freqs,
                                     std::optional<double> reference_max = std::nullopt);

/// Standardized third moment of a spectrum treated as a density over its grid.
double spectral_skewness(std::span<const double> freqs, std::span<const double> psd);

struct SpringPoint {
    double delta_bar = 0.0;  // rad/s
    double f_center = 0.0;   // Hz
};

/// Least-squares coupling efficiency from peak frequencies versus detuning using the
/// small-amplitude shift with n_c_max = 4 eta P_in / (hbar omega_c kappa). cfg supplies
/// G, mass and omega_m. Parameters: eta and, if fit_offset, f_offset (Hz; otherwise
/// omega_m / 2 pi is assumed).
FitResult fit_linearized_spring(std::span<const SpringPoint> points, double p_in, const SystemParams& params,
                                const SpringConfig& cfg, bool fit_offset = true, const LmOptions& options = {});

} // namespace optomech
