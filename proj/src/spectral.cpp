#include "optomech/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace optomech {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n)
    {
        in_ = fftw_alloc_real(n);
        out_ = fftw_alloc_complex(n / 2 + 1);
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    }
    ~RealFft()
    {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    double* input() { return in_; }
    const fftw_complex* output() const { return out_; }
    void execute() { fftw_execute(plan_); }

private:
    std::size_t n_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

std::vector<double> make_window(Window window, std::size_t n)
{
    std::vector<double> w(n, 1.0);
    if (window == Window::hann) {
        // Periodic Hann, the usual choice for spectral estimation.
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}

} // namespace

Spectrum estimate_psd(std::span<const double> samples, double sample_rate, const PsdOptions& options)
{
    const std::size_t n = options.segment_length;
    if (samples.empty())
        throw std::invalid_argument("estimate_psd: empty trace");
    if (n < 2)
        throw std::invalid_argument("estimate_psd: segment_length must be at least 2");
    if (n > samples.size())
        throw std::invalid_argument("estimate_psd: segment_length exceeds trace length");
    if (!(sample_rate > 0.0))
        throw std::invalid_argument("estimate_psd: sample_rate must be positive");
    if (!(options.overlap >= 0.0 && options.overlap < 1.0))
        throw std::invalid_argument("estimate_psd: overlap must lie in [0, 1)");

    const auto window = make_window(options.window, n);
    double sum_w = 0.0;
    double sum_w2 = 0.0;
    for (double w : window) {
        sum_w += w;
        sum_w2 += w * w;
    }

    const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n * (1.0 - options.overlap))));
    const std::size_t n_bins = n / 2 + 1;

    Spectrum spec;
    spec.freqs.resize(n_bins);
    spec.psd.assign(n_bins, 0.0);
    for (std::size_t k = 0; k < n_bins; ++k)
        spec.freqs[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n);

    RealFft fft(n);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + n <= samples.size(); start += step) {
        double* in = fft.input();
        for (std::size_t i = 0; i < n; ++i)
            in[i] = samples[start + i] * window[i];
        fft.execute();
        const fftw_complex* out = fft.output();
        for (std::size_t k = 0; k < n_bins; ++k)
            spec.psd[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
        ++segments;
    }

    const double scale = 1.0 / (sample_rate * sum_w2 * static_cast<double>(segments));
    for (std::size_t k = 0; k < n_bins; ++k) {
        const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
        spec.psd[k] *= (unpaired ? 1.0 : 2.0) * scale;
    }
    spec.resolution_bw = sample_rate * sum_w2 / (sum_w * sum_w);
    spec.n_averages = segments;
    return spec;
}

std::size_t segment_length_for(double sample_rate, double fwhm, double bins_per_width)
{
    if (!(fwhm > 0.0) || !(sample_rate > 0.0))
        throw std::invalid_argument("segment_length_for: rates must be positive");
    const double wanted = bins_per_width * sample_rate / fwhm;
    std::size_t n = 2;
    while (static_cast<double>(n) < wanted)
        n *= 2;
    return n;
}

double band_power(const Spectrum& spectrum, double f_center, double bandwidth)
{
    if (spectrum.size() < 2)
        throw std::invalid_argument("band_power: spectrum needs at least two bins");
    if (!(bandwidth >= 0.0))
        throw std::invalid_argument("band_power: bandwidth must be non-negative");
    const double df = spectrum.bin_width();
    const double grid_lo = spectrum.freqs.front() - 0.5 * df;
    const double grid_hi = spectrum.freqs.back() + 0.5 * df;
    const double lo = f_center - 0.5 * bandwidth;
    const double hi = f_center + 0.5 * bandwidth;
    const double slack = 1e-9 * df;
    if (lo < grid_lo - slack || hi > grid_hi + slack)
        throw std::out_of_range("band_power: band lies outside the frequency grid");

    const auto first = static_cast<std::ptrdiff_t>(std::floor((lo - grid_lo) / df));
    const auto last = static_cast<std::ptrdiff_t>(std::floor((hi - grid_lo) / df));
    const auto n = static_cast<std::ptrdiff_t>(spectrum.size());
    double total = 0.0;
    for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(first, 0); k <= std::min(last, n - 1); ++k) {
        const double bin_lo = grid_lo + static_cast<double>(k) * df;
        const double overlap = std::min(hi, bin_lo + df) - std::max(lo, bin_lo);
        if (overlap > 0.0)
            total += spectrum.psd[static_cast<std::size_t>(k)] * overlap;
    }
    return total;
}

double total_power(const Spectrum& spectrum, bool include_dc)
{
    const double df = spectrum.bin_width();
    double total = 0.0;
    for (std::size_t k = include_dc ? 0 : 1; k < spectrum.size(); ++k)
        total += spectrum.psd[k];
    return total * df;
}

std::vector<double> peak_band_powers(const Spectrum& spectrum, std::span<const double> centers, double fwhm,
                                     std::span<const double> neighbors, double multiple)
{
    const double df = spectrum.bin_width();
    const double grid_lo = spectrum.freqs.front() - 0.5 * df;
    const double grid_hi = spectrum.freqs.back() + 0.5 * df;
    std::vector<double> out;
    out.reserve(centers.size());
    for (double c : centers) {
        double half = 0.5 * multiple * fwhm;
        for (double other : neighbors) {
            const double gap = std::abs(other - c);
            if (gap > 1e-9 * std::max(1.0, std::abs(c)))
                half = std::min(half, 0.5 * gap);
        }
        half = std::min({half, c - grid_lo, grid_hi - c});
        out.push_back(band_power(spectrum, c, 2.0 * half));
    }
    return out;
}

int MixingProduct::order() const
{
    int best = std::numeric_limits<int>::max();
    for (const auto& [j, k] : labels)
        best = std::min(best, j + std::abs(k));
    return best;
}

std::vector<MixingProduct> mixing_frequencies(double f1, double f2, int max_order)
{
    if (!(f1 > 0.0) || !(f2 > 0.0))
        throw std::invalid_argument("mixing_frequencies: frequencies must be positive");
    if (max_order < 1)
        throw std::invalid_argument("mixing_frequencies: max_order must be at least 1");

    struct Raw {
        double freq;
        int j;
        int k;
    };
    std::vector<Raw> raw;
    for (int j = 0; j <= max_order; ++j) {
        for (int k = -(max_order - j); k <= max_order - j; ++k) {
            if (j == 0 && k <= 0)
                continue;  // (0, -k) duplicates (0, k); (0, 0) is DC
            raw.push_back({std::abs(j * f1 + k * f2), j, k});
        }
    }
    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        if (a.freq != b.freq)
            return a.freq < b.freq;
        if (a.j + std::abs(a.k) != b.j + std::abs(b.k))
            return a.j + std::abs(a.k) < b.j + std::abs(b.k);
        return a.j != b.j ? a.j < b.j : a.k < b.k;
    });

    const double tol = 1e-12 * std::max(f1, f2);
    std::vector<MixingProduct> out;
    for (const auto& r : raw) {
        if (!out.empty() && std::abs(r.freq - out.back().freq) <= tol) {
            out.back().labels.emplace_back(r.j, r.k);
        } else {
            out.push_back({r.freq, {{r.j, r.k}}});
        }
    }
    return out;
}

} // namespace optomech
