#pragma once

#include <limits>

#include "optomech/errors.hpp"
#include "optomech/params.hpp"

namespace optomech::analytic {

/// Highest harmonic order accepted by the order-by-order formulas.
inline constexpr int kMaxOrder = 32;

/// Sentinel returned by min_phonons when nothing can be detected (eta = 0, g0 = 0 or no light).
inline constexpr double kUndetectable = std::numeric_limits<double>::infinity();

/// k! in floating point; exact for k <= 20, lgamma beyond.
double factorial(int k);

struct OrderByOrderInputs {
    int k = 1;
    double delta_omega_var = 0.0;  // <dw^2>, (rad/s)^2
    double kappa = 0.0;            // rad/s
    double a_sq = 0.0;             // W^2, 8 P_in P_LO eta^2
};

/// Prefactor A^2 = 8 P_in P_LO eta^2 of the small-signal homodyne response.
double homodyne_prefactor(double p_in, double p_lo, double eta);

/// Phase-averaged band power at k * Omega_m in the order-by-order approximation:
/// 2 A^2 k! (2 <dw^2> / kappa^2)^k.
double order_by_order_band_power(const OrderByOrderInputs& in);

/// Maximum (on resonance) phase-averaged squared k-th detuning derivative of the output,
/// A^2 (k!)^2 (2/kappa)^(2k).
double taylor_coefficient_power(int k, double kappa, double a_sq);

/// Variance of the k * Omega component of x^k for thermal motion: k!/2^(k-1) <x^2>^k.
double higher_moment_variance(int k, double x_var);

/// Empirical Voigt FWHM for a Lorentzian of FWHM `kappa` convolved with a Gaussian
/// of standard deviation `delta_omega_rms`.
double voigt_fwhm(double kappa, double delta_omega_rms);

/// Gaussian FWHM 2 sqrt(2 ln 2) sigma.
double gaussian_fwhm(double sigma);

/// Normalized detuning u = (2/kappa)(delta_bar + delta_omega).
double expansion_parameter(double delta_bar, double delta_omega, double kappa);

/// Power series of the intracavity field in u converges only inside the unit disk.
bool converges(double u);

/// Shot-noise-limited SNR of the 2 Omega_m peak,
/// 256 (P_in / hbar omega_c / Gamma) eta^2 (g0/kappa)^4 nth^2.
/// Warns when the device's total rms fluctuation exceeds 10 % of kappa.
double quadratic_snr(const SystemParams& params, const MechanicalMode& mode, double temperature,
                     double p_in, double eta, Diagnostics* diag = nullptr);

/// Smallest occupancy detectable at unit SNR with a quadratic measurement.
/// Returns kUndetectable instead of throwing when the sensitivity vanishes.
double min_phonons(const SystemParams& params, double p_in, double eta, const MechanicalMode& mode);

/// Threshold on rms(dw)/kappa above which the order-by-order formulas are unreliable.
inline constexpr double kOrderByOrderLimit = 0.1;

} // namespace optomech::analytic
