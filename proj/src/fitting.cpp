#include "optomech/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "optomech/analytic.hpp"
#include "optomech/constants.hpp"
#include "optomech/voigt.hpp"

namespace optomech {

std::size_t FitResult::index(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return i;
    throw std::out_of_range("FitResult: no parameter named " + std::string(name));
}

double FitResult::value(std::string_view name) const { return values.at(index(name)); }
double FitResult::error(std::string_view name) const { return std_errors.at(index(name)); }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd jacobian(const ResidualFunction& f, const Eigen::VectorXd& p, Eigen::Index m)
{
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    Eigen::MatrixXd J(m, p.size());
    Eigen::VectorXd q = p;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        const double h = base * std::max(std::abs(p[j]), 1.0);
        q[j] = p[j] + h;
        const Eigen::VectorXd up = f(q);
        q[j] = p[j] - h;
        const Eigen::VectorXd down = f(q);
        q[j] = p[j];
        J.col(j) = (up - down) / (2.0 * h);
    }
    return J;
}

double cost_of(const Eigen::VectorXd& r)
{
    const double c = 0.5 * r.squaredNorm();
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

double max_abs(std::span<const double> y)
{
    double m = 0.0;
    for (double v : y)
        m = std::max(m, std::abs(v));
    return m > 0.0 ? m : 1.0;
}

void require_same_size(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": x and y differ in length");
}

// Standard error of a derived quantity g(x) by forward propagation through the covariance.
double propagate(const std::function<double(const Eigen::VectorXd&)>& g, const Eigen::VectorXd& x,
                 const Eigen::MatrixXd& cov)
{
    const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    Eigen::VectorXd grad(x.size());
    Eigen::VectorXd q = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = base * std::max(std::abs(x[j]), 1e-300);
        q[j] = x[j] + h;
        const double up = g(q);
        q[j] = x[j] - h;
        const double down = g(q);
        q[j] = x[j];
        grad[j] = (up - down) / (2.0 * h);
    }
    const double v = grad.dot(cov * grad);
    return v >= 0.0 ? std::sqrt(v) : kNaN;
}

struct LmCore {
    FitResult result;
    Eigen::VectorXd x;    // solution in original units
    Eigen::MatrixXd cov;  // covariance in original units
};

LmCore run_lm(const ResidualFunction& residuals, const Eigen::VectorXd& x0, const Eigen::VectorXd& scale,
              std::vector<std::string> names, const LmOptions& options)
{
    const Eigen::Index n = x0.size();
    if (scale.size() != n || static_cast<Eigen::Index>(names.size()) != n)
        throw std::invalid_argument("levenberg_marquardt: parameter, scale and name counts differ");
    for (Eigen::Index j = 0; j < n; ++j)
        if (!(scale[j] > 0.0) || !std::isfinite(scale[j]))
            throw std::invalid_argument("levenberg_marquardt: scales must be positive and finite");

    const ResidualFunction f = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        return residuals(p.cwiseProduct(scale));
    };

    Eigen::VectorXd p = x0.cwiseQuotient(scale);
    Eigen::VectorXd r = f(p);
    const Eigen::Index m = r.size();
    if (m < n)
        throw std::invalid_argument("levenberg_marquardt: fewer residuals than parameters");
    double cost = cost_of(r);
    if (!std::isfinite(cost))
        throw std::invalid_argument("levenberg_marquardt: non-finite residuals at the initial guess");

    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    Eigen::MatrixXd J = jacobian(f, p, m);
    Eigen::VectorXd g = J.transpose() * r;

    while (iter < options.max_iterations) {
        if (g.lpNorm<Eigen::Infinity>() < options.grad_tol) {
            converged = true;
            break;
        }
        ++iter;
        const Eigen::MatrixXd A = J.transpose() * J;
        Eigen::VectorXd d = A.diagonal();
        for (Eigen::Index j = 0; j < n; ++j)
            if (!(d[j] > 0.0))
                d[j] = 1.0;

        bool accepted = false;
        bool tiny_step = false;
        while (!accepted) {
            Eigen::MatrixXd damped = A;
            damped.diagonal() += lambda * d;
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            tiny_step = step.norm() <= options.step_tol * (p.norm() + options.step_tol);
            const Eigen::VectorXd trial = p + step;
            const Eigen::VectorXd r_trial = f(trial);
            const double cost_trial = cost_of(r_trial);
            if (cost_trial < cost) {
                p = trial;
                r = r_trial;
                cost = cost_trial;
                lambda = std::max(lambda / 3.0, 1e-15);
                accepted = true;
            } else {
                lambda *= 4.0;
                if (tiny_step || lambda > 1e20)
                    break;
            }
        }
        J = jacobian(f, p, m);
        g = J.transpose() * r;
        if (tiny_step) {
            // Either a step that no longer moves the parameters or a minimum the
            // cost cannot resolve further; both count as convergence.
            converged = true;
            break;
        }
        if (!accepted)
            break;
    }

    LmCore core;
    core.x = p.cwiseProduct(scale);
    core.result.names = std::move(names);
    core.result.values.assign(core.x.data(), core.x.data() + n);
    core.result.residual_norm = r.norm();
    core.result.gradient_norm = g.lpNorm<Eigen::Infinity>();
    core.result.converged = converged;
    core.result.n_iterations = iter;

    core.cov = Eigen::MatrixXd::Constant(n, n, kNaN);
    core.result.std_errors.assign(static_cast<std::size_t>(n), kNaN);
    const Eigen::MatrixXd A = J.transpose() * J;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (m > n && lu.isInvertible()) {
        const double s2 = r.squaredNorm() / static_cast<double>(m - n);
        const Eigen::MatrixXd cov_p = s2 * lu.inverse();
        core.cov = scale.asDiagonal() * cov_p * scale.asDiagonal();
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = core.cov(j, j);
            core.result.std_errors[static_cast<std::size_t>(j)] = v >= 0.0 ? std::sqrt(v) : kNaN;
        }
    }
    return core;
}

double wrap_phase(double phi)
{
    phi = std::remainder(phi, kTwoPi);
    if (phi <= -std::numbers::pi)
        phi += kTwoPi;
    return phi;
}

} // namespace

FitResult levenberg_marquardt(const ResidualFunction& residuals, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& scale, std::vector<std::string> names,
                              const LmOptions& options)
{
    return run_lm(residuals, x0, scale, std::move(names), options).result;
}

double lorentzian_model(double f, double f0, double fwhm, double area, double offset)
{
    const double hw = 0.5 * fwhm;
    return offset + area * hw / (std::numbers::pi * ((f - f0) * (f - f0) + hw * hw));
}

FitResult fit_lorentzian(std::span<const double> f, std::span<const double> y, const LmOptions& options)
{
    require_same_size(f.size(), y.size(), "fit_lorentzian");
    if (f.size() < 5)
        throw std::invalid_argument("fit_lorentzian: need at least 5 points");
    const double ys = max_abs(y);

    // Moment-style initial guess: peak location, baseline from the lowest sample,
    // area from the baseline-subtracted sum, width from area and height.
    const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double offset0 = *std::min_element(y.begin(), y.end());
    double area0 = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        area0 += 0.5 * ((y[i] - offset0) + (y[i + 1] - offset0)) * (f[i + 1] - f[i]);
    const double span = f.back() - f.front();
    const double height = y[peak] - offset0;
    double fwhm0 = height > 0.0 ? 2.0 * area0 / (std::numbers::pi * height) : 0.1 * span;
    if (!(fwhm0 > 0.0) || fwhm0 > span)
        fwhm0 = 0.1 * span;
    if (!(area0 > 0.0))
        area0 = ys * fwhm0;

    Eigen::VectorXd x0(4);
    x0 << f[peak], fwhm0, area0, offset0;
    Eigen::VectorXd scale(4);
    scale << std::max(std::abs(f[peak]), fwhm0), fwhm0, std::abs(area0), ys;

    const ResidualFunction res = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(f.size()));
        for (std::size_t i = 0; i < f.size(); ++i)
            r[static_cast<Eigen::Index>(i)] = (lorentzian_model(f[i], x[0], std::abs(x[1]), x[2], x[3]) - y[i]) / ys;
        return r;
    };
    FitResult out = levenberg_marquardt(res, x0, scale, {"f0", "fwhm", "area", "offset"}, options);
    out.values[1] = std::abs(out.values[1]);
    out.residual_norm *= ys;
    return out;
}

FitResult fit_lorentzian(const Spectrum& spectrum, double f_lo, double f_hi, const LmOptions& options)
{
    std::vector<double> f;
    std::vector<double> y;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        if (spectrum.freqs[k] >= f_lo && spectrum.freqs[k] <= f_hi) {
            f.push_back(spectrum.freqs[k]);
            y.push_back(spectrum.psd[k]);
        }
    }
    return fit_lorentzian(f, y, options);
}

FitResult fit_spectral_line(const Spectrum& spectrum, double f_center, double fwhm, std::span<const double> neighbors,
                            double half_widths, const LmOptions& options)
{
    if (!(fwhm > 0.0) || !(half_widths > 0.0))
        throw std::invalid_argument("fit_spectral_line: widths must be positive");
    double lo = f_center - half_widths * fwhm;
    double hi = f_center + half_widths * fwhm;
    for (double n : neighbors) {
        if (n < f_center)
            lo = std::max(lo, 0.5 * (n + f_center));
        else if (n > f_center)
            hi = std::min(hi, 0.5 * (n + f_center));
    }
    lo = std::max(lo, spectrum.freqs.front());
    hi = std::min(hi, spectrum.freqs.back());
    return fit_lorentzian(spectrum, lo, hi, options);
}

FitResult fit_voigt_squared(std::span<const DetuningPoint> points, const LmOptions& options, Diagnostics* diag)
{
    if (points.size() < 7)
        throw std::invalid_argument("fit_voigt_squared: need at least 7 points");
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& p : points) {
        x.push_back(p.detuning);
        y.push_back(p.band_power);
    }
    const double ys = max_abs(y);
    const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    if (peak == 0 || peak + 1 == y.size())
        warn(diag, "fit_voigt_squared: maximum lies at the edge of the detuning range");

    // Width of the squared curve at half maximum, from the outermost samples above it.
    double lo = x[peak];
    double hi = x[peak];
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] >= 0.5 * y[peak]) {
            lo = std::min(lo, x[i]);
            hi = std::max(hi, x[i]);
        }
    }
    const double span = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
    double width = hi - lo;
    if (!(width > 0.0))
        width = 0.1 * span;
    // Squaring narrows a Voigt by a factor between 0.64 (Lorentzian) and 0.71 (Gaussian).
    const double fwhm0 = width / 0.67;

    Eigen::VectorXd x0(4);
    x0 << x[peak], y[peak], 0.25 * fwhm0, 0.25 * fwhm0;
    Eigen::VectorXd scale(4);
    scale << std::max(std::abs(x[peak]), fwhm0), ys, fwhm0, fwhm0;

    const ResidualFunction res = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
        const double gamma = std::abs(p[2]);
        const double sigma = std::abs(p[3]);
        if (gamma == 0.0 && sigma == 0.0) {
            r.setConstant(1e10);
            return r;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double v = voigt_unit_peak(x[i] - p[0], sigma, gamma);
            r[static_cast<Eigen::Index>(i)] = (p[1] * v * v - y[i]) / ys;
        }
        return r;
    };
    auto core = run_lm(res, x0, scale, {"center", "amplitude", "gamma", "sigma"}, options);

    const auto fwhm_of = [](const Eigen::VectorXd& p) {
        return analytic::voigt_fwhm(2.0 * std::abs(p[2]), std::abs(p[3]));
    };
    FitResult out;
    out.names = {"center", "amplitude", "lorentz_fwhm", "gaussian_sigma", "voigt_fwhm"};
    out.values = {core.x[0], core.x[1], 2.0 * std::abs(core.x[2]), std::abs(core.x[3]), fwhm_of(core.x)};
    const auto& e = core.result.std_errors;
    out.std_errors = {e[0], e[1], 2.0 * e[2], e[3], propagate(fwhm_of, core.x, core.cov)};
    out.residual_norm = core.result.residual_norm * ys;
    out.gradient_norm = core.result.gradient_norm;
    out.converged = core.result.converged;
    out.n_iterations = core.result.n_iterations;
    return out;
}

FitResult fit_linewidth_vs_temperature(std::span<const LinewidthPoint> points, std::span<const double> mode_omegas,
                                       std::span<const double> mode_weights, const LmOptions& options,
                                       Diagnostics* diag)
{
    if (points.size() < 3)
        throw std::invalid_argument("fit_linewidth_vs_temperature: need at least 3 points");
    if (mode_omegas.empty() || mode_omegas.size() != mode_weights.size())
        throw std::invalid_argument("fit_linewidth_vs_temperature: one weight per mode frequency is required");
    double weight_sum = 0.0;
    for (double w : mode_weights) {
        if (!(w >= 0.0))
            throw FieldError("mode_weights", "must be non-negative");
        weight_sum += w;
    }
    if (!(weight_sum > 0.0))
        throw FieldError("mode_weights", "must not all be zero");
    for (const auto& p : points)
        if (!(p.temperature > 0.0) || !(p.fwhm > 0.0))
            throw std::invalid_argument("fit_linewidth_vs_temperature: temperatures and widths must be positive");
    if (points.size() < 5)
        warn(diag, "fit_linewidth_vs_temperature: fewer than 5 temperatures");

    auto lowest = points.front();
    auto highest = points.front();
    for (const auto& p : points) {
        if (p.temperature < lowest.temperature)
            lowest = p;
        if (p.temperature > highest.temperature)
            highest = p;
    }

    // Lowest point approximates kappa; invert the Voigt formula at the highest point for S.
    const double kappa0 = 0.9 * lowest.fwhm;
    const double a = highest.fwhm - 0.5346 * kappa0;
    double var_hi = (a * a - 0.2166 * kappa0 * kappa0) / (8.0 * std::numbers::ln2);
    if (!(var_hi > 0.0))
        var_hi = std::pow(highest.fwhm / analytic::gaussian_fwhm(1.0), 2);
    const double slope0 = var_hi / highest.temperature;

    Eigen::VectorXd x0(2);
    x0 << kappa0, slope0;
    const Eigen::VectorXd scale = x0.cwiseAbs();
    const ResidualFunction res = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double model =
                analytic::voigt_fwhm(std::abs(p[0]), std::sqrt(std::abs(p[1]) * points[i].temperature));
            r[static_cast<Eigen::Index>(i)] = model / points[i].fwhm - 1.0;
        }
        return r;
    };
    const auto core = run_lm(res, x0, scale, {"kappa", "variance_slope"}, options);
    const double kappa = std::abs(core.x[0]);
    const double slope = std::abs(core.x[1]);

    const double rms_lo = std::sqrt(slope * lowest.temperature);
    const double rms_hi = std::sqrt(slope * highest.temperature);
    if (rms_lo > 0.5 * kappa)
        warn(diag, "fit_linewidth_vs_temperature: lowest temperature is far from the Lorentzian limit; "
                   "kappa is poorly constrained");
    if (rms_hi < kappa)
        warn(diag, "fit_linewidth_vs_temperature: highest temperature does not reach the Gaussian limit; "
                   "the couplings are poorly constrained");

    FitResult out;
    out.names = {"kappa", "variance_slope"};
    out.values = {kappa, slope};
    out.std_errors = core.result.std_errors;
    const double rel_slope_err = core.result.std_errors[1] / slope;
    for (std::size_t j = 0; j < mode_omegas.size(); ++j) {
        const double w = mode_weights[j] / weight_sum;
        const double g0 = std::sqrt(w * slope * PhysicalConstants::hbar * mode_omegas[j] / (2.0 * PhysicalConstants::kB));
        out.names.push_back("g0_" + std::to_string(j + 1));
        out.values.push_back(g0);
        out.std_errors.push_back(0.5 * g0 * rel_slope_err);
    }
    out.residual_norm = core.result.residual_norm;
    out.gradient_norm = core.result.gradient_norm;
    out.converged = core.result.converged;
    out.n_iterations = core.result.n_iterations;
    return out;
}

FitResult fit_sinusoid(std::span<const double> x, std::span<const double> y, const LmOptions& options)
{
    require_same_size(x.size(), y.size(), "fit_sinusoid");
    const std::size_t n = x.size();
    if (n < 5)
        throw std::invalid_argument("fit_sinusoid: need at least 5 points");
    const double x_min = *std::min_element(x.begin(), x.end());
    const double x_max = *std::max_element(x.begin(), x.end());
    const double span = x_max - x_min;
    if (!(span > 0.0))
        throw std::invalid_argument("fit_sinusoid: x values must not all coincide");
    const double ys = max_abs(y);

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    double min_dx = span;
    for (std::size_t i = 1; i < n; ++i)
        if (sorted[i] > sorted[i - 1])
            min_dx = std::min(min_dx, sorted[i] - sorted[i - 1]);

    // Period scan: linear least squares in (sin, cos, 1) on a fine grid of spatial frequencies.
    Eigen::VectorXd yv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        yv[static_cast<Eigen::Index>(i)] = y[i];
    const double nu_lo = 0.5 / span;
    const double nu_hi = 0.5 / min_dx;
    const double d_nu = 0.125 / span;
    double best_rss = std::numeric_limits<double>::infinity();
    Eigen::Vector3d best_coef = Eigen::Vector3d::Zero();
    double best_nu = 1.0 / span;
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), 3);
    for (double nu = nu_lo; nu <= nu_hi; nu += d_nu) {
        for (std::size_t i = 0; i < n; ++i) {
            const double arg = kTwoPi * nu * (x[i] - x_min);
            basis(static_cast<Eigen::Index>(i), 0) = std::sin(arg);
            basis(static_cast<Eigen::Index>(i), 1) = std::cos(arg);
            basis(static_cast<Eigen::Index>(i), 2) = 1.0;
        }
        const Eigen::Vector3d coef = basis.colPivHouseholderQr().solve(yv);
        const double rss = (basis * coef - yv).squaredNorm();
        if (rss < best_rss) {
            best_rss = rss;
            best_coef = coef;
            best_nu = nu;
        }
    }

    // The scan used x - x_min as origin; convert to the phase at x = 0.
    const double amp0 = std::hypot(best_coef[0], best_coef[1]);
    const double phase0 = std::atan2(best_coef[1], best_coef[0]) - kTwoPi * best_nu * x_min;
    Eigen::VectorXd x0(4);
    x0 << (amp0 > 0.0 ? amp0 : ys), 1.0 / best_nu, wrap_phase(phase0), best_coef[2];
    Eigen::VectorXd scale(4);
    scale << std::abs(x0[0]), x0[1], 1.0, ys;

    const ResidualFunction res = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            r[static_cast<Eigen::Index>(i)] = (p[0] * std::sin(kTwoPi * x[i] / p[1] + p[2]) + p[3] - y[i]) / ys;
        return r;
    };
    FitResult out = levenberg_marquardt(res, x0, scale, {"amplitude", "period", "phase", "offset"}, options);
    if (out.values[0] < 0.0) {
        out.values[0] = -out.values[0];
        out.values[2] += std::numbers::pi;
    }
    out.values[2] = wrap_phase(out.values[2]);
    out.residual_norm *= ys;
    return out;
}

} // namespace optomech
