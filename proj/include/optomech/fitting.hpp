#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "optomech/errors.hpp"
#include "optomech/spectral.hpp"

namespace optomech {

/// Outcome of a least-squares fit. Parameters are kept in a fixed, documented order.
struct FitResult {
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> std_errors;  // from s^2 (J^T J)^-1; NaN when not identifiable
    double residual_norm = 0.0;      // ||y - model||_2 in data units
    double gradient_norm = 0.0;      // ||J^T r||_inf at the solution, normalized units
    bool converged = false;
    int n_iterations = 0;

    double value(std::string_view name) const;
    double error(std::string_view name) const;
    std::size_t index(std::string_view name) const;  // throws std::out_of_range
};

struct LmOptions {
    double step_tol = 1e-10;  // relative step
    double grad_tol = 1e-12;  // infinity norm of J^T r
    int max_iterations = 500;
};

/// Residual vector as a function of the (scaled) parameter vector.
using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Damped least squares with Marquardt diagonal scaling and a central-difference
/// Jacobian. The solver works on p = x / scale, so `scale` should carry the
/// magnitude of each parameter. Never throws on non-convergence.
FitResult levenberg_marquardt(const ResidualFunction& residuals, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& scale, std::vector<std::string> names,
                              const LmOptions& options = {});

/// offset + area * (fwhm / 2 pi) / ((f - f0)^2 + (fwhm / 2)^2)
double lorentzian_model(double f, double f0, double fwhm, double area, double offset);

/// Lorentzian plus constant offset. Parameters: f0, fwhm, area, offset.
FitResult fit_lorentzian(std::span<const double> f, std::span<const double> y, const LmOptions& options = {});

/// Same, restricted to bins with f_lo <= f <= f_hi.
FitResult fit_lorentzian(const Spectrum& spectrum, double f_lo, double f_hi, const LmOptions& options = {});

/// Lorentzian fit to the line near f_center over f_center +/- half_widths * fwhm, with each
/// side capped at the midpoint to the nearest entry of `neighbors` (other than f_center
/// itself) and at the grid edge. The fitted area is the line power with its tails restored.
FitResult fit_spectral_line(const Spectrum& spectrum, double f_center, double fwhm,
                            std::span<const double> neighbors = {}, double half_widths = 5.0,
                            const LmOptions& options = {});

struct DetuningPoint {
    double detuning = 0.0;    // any consistent unit; widths come back in the same unit
    double band_power = 0.0;
};

/// amplitude * V(x - center)^2 with V a unit-peak Voigt profile.
/// Parameters: center, amplitude, lorentz_fwhm, gaussian_sigma, voigt_fwhm.
/// voigt_fwhm is derived from the two widths by the empirical Voigt formula.
FitResult fit_voigt_squared(std::span<const DetuningPoint> points, const LmOptions& options = {},
                            Diagnostics* diag = nullptr);

struct LinewidthPoint {
    double temperature = 0.0;  // K
    double fwhm = 0.0;         // rad/s
};

/// Fits fwhm(T) = voigt_fwhm(kappa, sqrt(S T)) with relative residuals, then splits
/// S = sum_j 2 kB g0_j^2 / (hbar Omega_j) according to `mode_weights` (relative
/// variance contributions, normalized internally).
/// Parameters: kappa, variance_slope (S, (rad/s)^2/K), g0_1 .. g0_n (rad/s).
FitResult fit_linewidth_vs_temperature(std::span<const LinewidthPoint> points, std::span<const double> mode_omegas,
                                       std::span<const double> mode_weights, const LmOptions& options = {},
                                       Diagnostics* diag = nullptr);

/// amplitude * sin(2 pi x / period + phase) + offset, with amplitude >= 0 and phase in
/// (-pi, pi]. The period is seeded by a scan over linear fits. Parameters: amplitude,
/// period, phase, offset.
FitResult fit_sinusoid(std::span<const double> x, std::span<const double> y, const LmOptions& options = {});

} // namespace optomech
