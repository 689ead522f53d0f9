#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace optomech {

enum class Window { hann, rect };

/// One-sided power spectral density on a uniform grid f_k = k * df, k = 0 .. N/2.
///
/// psd[k] * df summed over all bins equals the window-corrected mean square of the
/// source (exactly, for a rect window and a single segment).
struct Spectrum {
    std::vector<double> freqs;  // Hz
    std::vector<double> psd;    // units^2 / Hz
    double resolution_bw = 0.0; // equivalent noise bandwidth, Hz
    std::size_t n_averages = 0;

    double bin_width() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
    std::size_t size() const { return psd.size(); }
};

struct PsdOptions {
    std::size_t segment_length = 4096;
    Window window = Window::hann;
    double overlap = 0.5;  // fraction of segment_length, in [0, 1)
};

/// Welch estimate with the given window; segments that do not fit entirely are dropped.
Spectrum estimate_psd(std::span<const double> samples, double sample_rate, const PsdOptions& options);

/// Smallest power of two giving at least `bins_per_width` bins across a line of width `fwhm`.
std::size_t segment_length_for(double sample_rate, double fwhm, double bins_per_width = 4.0);

/// Integral of the PSD over [f_center - bw/2, f_center + bw/2], treating bin k as
/// constant over [f_k - df/2, f_k + df/2]. Throws std::out_of_range outside the grid.
double band_power(const Spectrum& spectrum, double f_center, double bandwidth);

/// Sum of psd * df over all bins, optionally excluding the DC bin.
double total_power(const Spectrum& spectrum, bool include_dc = true);

/// Band power around each of `centers` with width min(multiple * fwhm, gap to the
/// nearest entry of `neighbors`), i.e. bands never cross the midpoint to another peak.
std::vector<double> peak_band_powers(const Spectrum& spectrum, std::span<const double> centers, double fwhm,
                                     std::span<const double> neighbors, double multiple = 10.0);

/// A frequency |j f1 + k f2| with every (j, k) label that lands on it.
struct MixingProduct {
    double freq = 0.0;
    std::vector<std::pair<int, int>> labels;  // j >= 0; k signed

    int order() const;  // smallest j + |k| among the labels
};

/// All distinct |j f1 + k f2| with 1 <= j + |k| <= max_order (including 0 for f1 = f2),
/// ascending. Coinciding frequencies (relative 1e-12) are merged into one entry.
std::vector<MixingProduct> mixing_frequencies(double f1, double f2, int max_order);

} // namespace optomech
