#pragma once

#include <complex>

namespace optomech {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
/// Weideman's 32-term rational approximation in the upper half plane (about 1e-13
/// relative near the real axis), a continued fraction for |z| > 30, and the
/// reflection formula below the real axis.
std::complex<double> faddeeva(std::complex<double> z);

/// Area-normalized Voigt profile: Gaussian of standard deviation `sigma` convolved
/// with a Lorentzian of half width `gamma`. Either width may be zero, not both.
double voigt_profile(double x, double sigma, double gamma);

/// Voigt profile divided by its value at x = 0, so the peak is 1.
double voigt_unit_peak(double x, double sigma, double gamma);

} // namespace optomech
