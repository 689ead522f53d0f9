#include "optomech/voigt.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace optomech {

namespace {

constexpr int kTerms = 32;

struct WeidemanTable {
    double L = 0.0;
    std::array<double, kTerms> a{};  // a[n-1] multiplies Z^(n-1)

    WeidemanTable()
    {
        constexpr int M = 2 * kTerms;
        constexpr int M2 = 2 * M;
        L = std::sqrt(kTerms / std::numbers::sqrt2);
        // Samples of exp(-t^2)(L^2 + t^2) at t = L tan(k pi / 2M), arranged in FFT order
        // (k = 0 .. M-1, then -M .. -1) with the k = -M sample set to zero.
        std::array<double, M2> g{};
        for (int i = 0; i < M2; ++i) {
            const int k = i < M ? i : i - M2;
            if (k == -M)
                continue;
            const double t = L * std::tan(k * std::numbers::pi / (2.0 * M));
            g[i] = std::exp(-t * t) * (L * L + t * t);
        }
        // The samples are even in k, so the transform is real.
        for (int n = 1; n <= kTerms; ++n) {
            double s = 0.0;
            for (int i = 0; i < M2; ++i)
                s += g[i] * std::cos(2.0 * std::numbers::pi * n * i / M2);
            a[n - 1] = s / M2;
        }
    }
};

const WeidemanTable& table()
{
    static const WeidemanTable t;
    return t;
}

std::complex<double> weideman(std::complex<double> z)
{
    const auto& tab = table();
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> denom = tab.L - i * z;
    const std::complex<double> Z = (tab.L + i * z) / denom;
    std::complex<double> p = 0.0;
    for (int n = kTerms - 1; n >= 0; --n)
        p = p * Z + tab.a[n];
    return 2.0 * p / (denom * denom) + 1.0 / (std::sqrt(std::numbers::pi) * denom);
}

// Laplace continued fraction, accurate in the upper half plane far from the origin.
std::complex<double> continued_fraction(std::complex<double> z)
{
    std::complex<double> tail = z;
    for (int k = 40; k >= 1; --k)
        tail = z - (0.5 * k) / tail;
    return std::complex<double>(0.0, 1.0 / std::sqrt(std::numbers::pi)) / tail;
}

} // namespace

std::complex<double> faddeeva(std::complex<double> z)
{
    if (z.imag() < 0.0)
        return 2.0 * std::exp(-z * z) - faddeeva(-z);
    if (std::abs(z) > 30.0)
        return continued_fraction(z);
    return weideman(z);
}

double voigt_profile(double x, double sigma, double gamma)
{
    if (sigma < 0.0 || gamma < 0.0 || (sigma == 0.0 && gamma == 0.0))
        throw std::invalid_argument("voigt_profile: widths must be non-negative and not both zero");
    if (sigma == 0.0)
        return gamma / (std::numbers::pi * (x * x + gamma * gamma));
    const double s = sigma * std::numbers::sqrt2;
    if (gamma == 0.0)
        return std::exp(-(x * x) / (s * s)) / (s * std::sqrt(std::numbers::pi));
    const std::complex<double> z(x / s, gamma / s);
    return faddeeva(z).real() / (s * std::sqrt(std::numbers::pi));
}

double voigt_unit_peak(double x, double sigma, double gamma)
{
    return voigt_profile(x, sigma, gamma) / voigt_profile(0.0, sigma, gamma);
}

} // namespace optomech
