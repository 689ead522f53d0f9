#include "optomech/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "optomech/constants.hpp"

namespace optomech::analytic {

namespace {

void check_order(int k)
{
    if (k < 1 || k > kMaxOrder)
        throw std::invalid_argument("harmonic order must lie in [1, " + std::to_string(kMaxOrder) + "]");
}

} // namespace

double factorial(int k)
{
    if (k < 0)
        throw std::invalid_argument("factorial of a negative number");
    if (k <= 20) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i)
            f *= i;
        return f;
    }
    return std::exp(std::lgamma(static_cast<double>(k) + 1.0));
}

double homodyne_prefactor(double p_in, double p_lo, double eta)
{
    return 8.0 * p_in * p_lo * eta * eta;
}

double order_by_order_band_power(const OrderByOrderInputs& in)
{
    check_order(in.k);
    if (!(in.delta_omega_var >= 0.0))
        throw std::invalid_argument("frequency variance must be non-negative");
    if (!(in.kappa > 0.0))
        throw std::invalid_argument("kappa must be positive");
    const double x = 2.0 * in.delta_omega_var / (in.kappa * in.kappa);
    return 2.0 * in.a_sq * factorial(in.k) * std::pow(x, in.k);
}

double taylor_coefficient_power(int k, double kappa, double a_sq)
{
    check_order(k);
    if (!(kappa > 0.0))
        throw std::invalid_argument("kappa must be positive");
    const double f = factorial(k);
    return a_sq * f * f * std::pow(2.0 / kappa, 2 * k);
}

double higher_moment_variance(int k, double x_var)
{
    check_order(k);
    if (!(x_var >= 0.0))
        throw std::invalid_argument("variance must be non-negative");
    return factorial(k) / std::ldexp(1.0, k - 1) * std::pow(x_var, k);
}

double voigt_fwhm(double kappa, double delta_omega_rms)
{
    if (!(kappa >= 0.0) || !(delta_omega_rms >= 0.0))
        throw std::invalid_argument("voigt_fwhm: widths must be non-negative");
    return 0.5346 * kappa
           + std::sqrt(0.2166 * kappa * kappa + 8.0 * std::numbers::ln2 * delta_omega_rms * delta_omega_rms);
}

double gaussian_fwhm(double sigma) { return 2.0 * std::sqrt(2.0 * std::numbers::ln2) * sigma; }

double expansion_parameter(double delta_bar, double delta_omega, double kappa)
{
    if (!(kappa > 0.0))
        throw std::invalid_argument("kappa must be positive");
    return 2.0 * (delta_bar + delta_omega) / kappa;
}

bool converges(double u) { return std::abs(u) < 1.0; }

double quadratic_snr(const SystemParams& params, const MechanicalMode& mode, double temperature,
                     double p_in, double eta, Diagnostics* diag)
{
    const double relative = rms_frequency_fluctuation(params, temperature) / params.kappa;
    if (relative > kOrderByOrderLimit) {
        std::ostringstream msg;
        msg << "quadratic_snr: rms(dw)/kappa = " << relative
            << " exceeds the order-by-order regime (" << kOrderByOrderLimit << ")";
        warn(diag, msg.str());
    }
    const double nth = thermal_occupancy(temperature, mode);
    const double photon_rate = p_in / params.photon_energy();
    const double ratio = mode.g0 / params.kappa;
    return 256.0 * (photon_rate / mode.gamma) * eta * eta * std::pow(ratio, 4) * nth * nth;
}

double min_phonons(const SystemParams& params, double p_in, double eta, const MechanicalMode& mode)
{
    const double photon_rate = p_in / params.photon_energy();
    const double ratio = mode.g0 / params.kappa;
    const double inverse = 16.0 * ratio * ratio * eta * std::sqrt(photon_rate / mode.gamma);
    if (!(inverse > 0.0))
        return kUndetectable;
    return 1.0 / inverse;
}

} // namespace optomech::analytic
