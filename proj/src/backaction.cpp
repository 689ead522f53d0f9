#include "optomech/backaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/motion.hpp"
#include "optomech/parallel.hpp"
#include "optomech/rng.hpp"

namespace optomech {

void SpringConfig::validate() const
{
    if (!(n_c_max > 0.0) || !std::isfinite(n_c_max))
        throw FieldError("n_c_max", "must be positive");
    if (!(G > 0.0) || !std::isfinite(G))
        throw FieldError("G", "must be positive");
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw FieldError("mass", "must be positive");
    if (!(omega_m > 0.0) || !std::isfinite(omega_m))
        throw FieldError("omega_m", "must be positive");
    if (!(measured_fwhm > 0.0) || !std::isfinite(measured_fwhm))
        throw FieldError("measured_fwhm", "must be positive");
    if (n_amplitude_samples < 1)
        throw FieldError("n_amplitude_samples", "must be positive");
    if (quadrature_points < 64 || quadrature_points % 2 != 0)
        throw FieldError("quadrature_points", "must be an even number of at least 64");
}

double SpringConfig::x_zpf() const { return zero_point_fluctuation(mass, omega_m); }

SpringConfig SpringConfig::from_mode(const MechanicalMode& mode, double n_c_max, double measured_fwhm,
                                     std::uint64_t seed)
{
    if (!mode.mass)
        throw FieldError("mass", "the spring model needs the effective mass of the mode");
    SpringConfig cfg;
    cfg.n_c_max = n_c_max;
    cfg.mass = *mode.mass;
    cfg.omega_m = mode.omega_m;
    cfg.G = mode.g0 / zero_point_fluctuation(*mode.mass, mode.omega_m);
    cfg.measured_fwhm = measured_fwhm;
    cfg.seed = seed;
    return cfg;
}

double intracavity_photons(const SystemParams& params, double p_in)
{
    if (!(p_in >= 0.0))
        throw FieldError("p_in", "must be non-negative");
    return 4.0 * params.eta * p_in / (params.photon_energy() * params.kappa);
}

double radiation_force(double x, double delta_bar, const SpringConfig& cfg, double kappa)
{
    const double u = 2.0 * (delta_bar + cfg.G * x) / kappa;
    return PhysicalConstants::hbar * cfg.G * cfg.n_c_max / (1.0 + u * u);
}

namespace {

constexpr double kQuadratureTol = 1e-8;
constexpr long kMaxIntervals = 1L << 18;
// Refinement budget beyond the amplitude-based starting grid.
constexpr long kRefinements = 4;
constexpr long kMaxStartIntervals = 1L << 24;

// (1/pi) int_0^pi [f(ub + u0 sin s) - f(ub - u0 sin s)] sin s ds with f(u) = 1 / (1 + u^2).
// Multiplying by hbar G n_c_max gives a1. The folded form makes the result exactly zero at
// ub = 0 and exactly odd in ub.
double normalized_a1(double ub, double u0, int base_points)
{
    const auto g = [&](double s) {
        const double y = u0 * std::sin(s);
        const double p = ub + y;
        const double m = ub - y;
        return (1.0 / (1.0 + p * p) - 1.0 / (1.0 + m * m)) * std::sin(s);
    };

    // Sharp features have width ~ 1/u0 in s; start fine enough to see them.
    long n = base_points;
    while (n < kMaxStartIntervals && static_cast<double>(n) < 16.0 * static_cast<double>(base_points) * u0 / 64.0)
        n *= 2;

    // Endpoint samples vanish (sin 0 = sin pi = 0).
    double h = std::numbers::pi / static_cast<double>(n);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (long i = 1; i < n; ++i) {
        const double v = g(static_cast<double>(i) * h);
        sum += v;
        abs_sum += std::abs(v);
    }
    double trap = h * sum;
    const long max_n = std::max(kMaxIntervals, n << kRefinements);
    double previous = std::numeric_limits<double>::quiet_NaN();
    while (n < max_n) {
        double mid = 0.0;
        for (long i = 0; i < n; ++i) {
            const double v = g((static_cast<double>(i) + 0.5) * h);
            mid += v;
            abs_sum += std::abs(v);
        }
        const double trap2 = 0.5 * trap + 0.5 * h * mid;
        const double simpson = (4.0 * trap2 - trap) / 3.0;
        n *= 2;
        h *= 0.5;
        trap = trap2;
        const double floor = 1e-14 * abs_sum * h;
        if (std::abs(simpson - previous) <= kQuadratureTol * std::abs(simpson) + floor)
            return simpson / std::numbers::pi;
        previous = simpson;
    }
    throw ConvergenceError("first_fourier_coefficient",
                           "Simpson quadrature did not reach 1e-8 within " + std::to_string(max_n) + " intervals");
}

} // namespace

double first_fourier_coefficient(double delta_bar, double x0, const SpringConfig& cfg, double kappa)
{
    if (!(x0 >= 0.0))
        throw FieldError("x0", "must be non-negative");
    if (!(kappa > 0.0))
        throw FieldError("kappa", "must be positive");
    if (x0 == 0.0)
        return 0.0;
    const double ub = 2.0 * delta_bar / kappa;
    const double u0 = 2.0 * cfg.G * x0 / kappa;
    return PhysicalConstants::hbar * cfg.G * cfg.n_c_max * normalized_a1(ub, u0, cfg.quadrature_points);
}

double spring_shift(double delta_bar, double x0, const SpringConfig& cfg, double kappa)
{
    if (!(x0 > 0.0))
        throw FieldError("x0", "must be positive");
    const double a1 = first_fourier_coefficient(delta_bar, x0, cfg, kappa);
    return (-a1 / x0) / (2.0 * cfg.mass * cfg.omega_m);
}

double linearized_spring_shift(double delta_bar, const SpringConfig& cfg, double kappa)
{
    const double u = 2.0 * delta_bar / kappa;
    const double dF_dx = -PhysicalConstants::hbar * cfg.G * cfg.G * cfg.n_c_max * (4.0 / kappa) * u
                         / ((1.0 + u * u) * (1.0 + u * u));
    return -dF_dx / (2.0 * cfg.mass * cfg.omega_m);
}

std::vector<double> thermal_spring_shifts(double delta_bar, double temperature, const SystemParams& params,
                                          const SpringConfig& cfg, std::uint64_t stream)
{
    cfg.validate();
    if (!(temperature >= 0.0))
        throw FieldError("temperature", "must be non-negative");
    MechanicalMode mode;
    mode.omega_m = cfg.omega_m;
    const double nth = thermal_occupancy(temperature, mode);
    const double x_zpf = cfg.x_zpf();

    RandomStream rng(cfg.seed, stream);
    std::vector<double> shifts(static_cast<std::size_t>(cfg.n_amplitude_samples));
    for (double& s : shifts) {
        const double energy = draw_thermal_energy(rng, nth);
        const double x0 = 2.0 * std::sqrt(energy) * x_zpf;
        s = x0 > 0.0 ? spring_shift(delta_bar, x0, cfg, params.kappa) : linearized_spring_shift(delta_bar, cfg, params.kappa);
    }
    return shifts;
}

std::vector<double> lorentzian_average(std::span<const double> shifts, double omega_m, double fwhm_hz,
                                       std::span<const double> freqs)
{
    std::vector<double> psd(freqs.size(), 0.0);
    if (shifts.empty())
        return psd;
    const double hw = 0.5 * fwhm_hz;
    const double norm = hw / std::numbers::pi / static_cast<double>(shifts.size());
    for (double shift : shifts) {
        const double fc = rad_to_hz(omega_m + shift);
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            const double d = freqs[k] - fc;
            psd[k] += norm / (d * d + hw * hw);
        }
    }
    return psd;
}

std::vector<double> thermal_spring_spectrum(double delta_bar, double temperature, const SystemParams& params,
                                            const SpringConfig& cfg, std::span<const double> freqs,
                                            std::uint64_t stream)
{
    const auto shifts = thermal_spring_shifts(delta_bar, temperature, params, cfg, stream);
    return lorentzian_average(shifts, cfg.omega_m, cfg.measured_fwhm, freqs);
}

std::vector<double> spring_frequency_axis(const SpringConfig& cfg, double half_span, std::size_t n)
{
    if (n < 2 || !(half_span > 0.0))
        throw std::invalid_argument("spring_frequency_axis: need n >= 2 and a positive span");
    const double f0 = rad_to_hz(cfg.omega_m);
    std::vector<double> f(n);
    for (std::size_t k = 0; k < n; ++k)
        f[k] = f0 - half_span + 2.0 * half_span * static_cast<double>(k) / static_cast<double>(n - 1);
    return f;
}

SpringSpectrogram spring_spectrogram(std::span<const double> detunings, double temperature, const SystemParams& params,
                                     const SpringConfig& cfg, std::span<const double> freqs,
                                     std::optional<double> reference_max)
{
    if (detunings.empty())
        throw FieldError("detunings", "grid must not be empty");
    SpringSpectrogram out;
    out.detunings.assign(detunings.begin(), detunings.end());
    out.freqs.assign(freqs.begin(), freqs.end());
    out.psd.resize(detunings.size());
    parallel_for(detunings.size(), [&](std::size_t i) {
        out.psd[i] = thermal_spring_spectrum(detunings[i], temperature, params, cfg, freqs, i);
    });

    if (reference_max) {
        std::size_t ref = 0;
        for (std::size_t i = 1; i < detunings.size(); ++i)
            if (std::abs(detunings[i]) < std::abs(detunings[ref]))
                ref = i;
        const double row_max = *std::max_element(out.psd[ref].begin(), out.psd[ref].end());
        if (row_max > 0.0) {
            const double factor = *reference_max / row_max;
            for (auto& row : out.psd)
                for (double& v : row)
                    v *= factor;
        }
    }
    return out;
}

double spectral_skewness(std::span<const double> freqs, std::span<const double> psd)
{
    if (freqs.size() != psd.size() || freqs.empty())
        throw std::invalid_argument("spectral_skewness: axis and values differ in length");
    double w = 0.0;
    double m1 = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        w += psd[k];
        m1 += psd[k] * freqs[k];
    }
    if (!(w > 0.0))
        return 0.0;
    m1 /= w;
    double m2 = 0.0;
    double m3 = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double d = freqs[k] - m1;
        m2 += psd[k] * d * d;
        m3 += psd[k] * d * d * d;
    }
    m2 /= w;
    m3 /= w;
    return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

FitResult fit_linearized_spring(std::span<const SpringPoint> points, double p_in, const SystemParams& params,
                                const SpringConfig& cfg, bool fit_offset, const LmOptions& options)
{
    const std::size_t n_params = fit_offset ? 2 : 1;
    if (points.size() <= n_params)
        throw std::invalid_argument("fit_linearized_spring: not enough points");
    bool negative = false;
    bool positive = false;
    for (const auto& p : points) {
        negative = negative || p.delta_bar < 0.0;
        positive = positive || p.delta_bar > 0.0;
    }
    if (!(negative && positive))
        throw FieldError("points", "detunings must include both signs");

    // Shift per unit eta, in Hz.
    SpringConfig unit = cfg;
    unit.n_c_max = 4.0 * p_in / (params.photon_energy() * params.kappa);
    std::vector<double> basis(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        basis[i] = rad_to_hz(linearized_spring_shift(points[i].delta_bar, unit, params.kappa));

    const double f_nominal = rad_to_hz(cfg.omega_m);
    double ys = 0.0;
    for (const auto& p : points)
        ys = std::max(ys, std::abs(p.f_center - f_nominal));
    if (!(ys > 0.0))
        ys = 1.0;

    // Linear least squares gives the starting point; the model is linear in eta and offset.
    double eta0 = 0.0;
    double offset0 = f_nominal;
    {
        Eigen::MatrixXd A(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(n_params));
        Eigen::VectorXd b(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            A(r, 0) = basis[i];
            if (fit_offset)
                A(r, 1) = 1.0;
            b[r] = points[i].f_center - f_nominal;
        }
        const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
        eta0 = sol[0];
        if (fit_offset)
            offset0 = f_nominal + sol[1];
    }

    double basis_scale = 0.0;
    for (double v : basis)
        basis_scale = std::max(basis_scale, std::abs(v));
    const double eta_scale = std::max(std::abs(eta0), basis_scale > 0.0 ? ys / basis_scale : 1.0);

    Eigen::VectorXd x0(static_cast<Eigen::Index>(n_params));
    Eigen::VectorXd scale(static_cast<Eigen::Index>(n_params));
    x0[0] = eta0;
    scale[0] = eta_scale > 0.0 ? eta_scale : 1.0;
    std::vector<std::string> names{"eta"};
    if (fit_offset) {
        x0[1] = offset0;
        scale[1] = std::max(std::abs(f_nominal), 1.0);
        names.emplace_back("f_offset");
    }
    const ResidualFunction res = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
        const double offset = fit_offset ? p[1] : f_nominal;
        for (std::size_t i = 0; i < points.size(); ++i)
            r[static_cast<Eigen::Index>(i)] = (offset + p[0] * basis[i] - points[i].f_center) / ys;
        return r;
    };
    FitResult out = levenberg_marquardt(res, x0, scale, names, options);
    out.residual_norm *= ys;
    return out;
}

} // namespace optomech
