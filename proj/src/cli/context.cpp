#include "context.hpp"

#include <algorithm>
#include <cstdio>

#include "optomech/rng.hpp"

namespace optomech::cli {

Context::Context(std::string scenario, std::string digest, std::ostream* progress)
    : scenario_(std::move(scenario)), digest_(std::move(digest)), progress_(progress),
      start_(std::chrono::steady_clock::now())
{
}

std::vector<std::string> Context::provenance() const
{
    return {std::string(kToolName) + " " + std::string(kToolVersion), "scenario=" + scenario_,
            "config_sha256=" + digest_};
}

void Context::add_csv(const std::string& name, io::CsvTable table)
{
    auto comments = provenance();
    comments.insert(comments.end(), table.comments.begin(), table.comments.end());
    table.comments = std::move(comments);
    add_text(name, table.str());
}

void Context::add_text(const std::string& name, std::string content)
{
    for (const auto& f : files_)
        if (f.name == name)
            throw std::logic_error("duplicate output " + name);
    files_.push_back({name, std::move(content)});
}

void Context::add_json(const std::string& name, const nlohmann::json& doc) { add_text(name, doc.dump(2) + "\n"); }

void Context::record_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }

void Context::progress(const std::string& message) const
{
    if (progress_ == nullptr)
        return;
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%.1fs", t);
    std::lock_guard lock(progress_mutex_);
    *progress_ << "[" << scenario_ << " " << stamp << "] " << message << std::endl;
}

void Context::merge(const std::vector<Diagnostics>& parts)
{
    for (const auto& part : parts)
        for (const auto& w : part.warnings)
            diag.warn(w);
}

void Context::require_converged(const FitResult& fit, const std::string& fit_name)
{
    if (!fit.converged)
        throw ConvergenceError(fit_name, "did not converge after " + std::to_string(fit.n_iterations) + " iterations");
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed + index); }

LinePower line_power(const Spectrum& spectrum, double f, double fwhm, std::span<const double> neighbors)
{
    LinePower out;
    out.frequency = f;
    double lo = f - 5.0 * fwhm;
    double hi = f + 5.0 * fwhm;
    for (double n : neighbors) {
        if (n < f && n > lo)
            lo = std::max(lo, 0.5 * (n + f));
        else if (n > f && n < hi)
            hi = std::min(hi, 0.5 * (n + f));
    }
    const double df = spectrum.bin_width();
    lo = std::max(lo, spectrum.freqs.front() - 0.5 * df);
    hi = std::min(hi, spectrum.freqs.back() + 0.5 * df);
    try {
        const auto fit = fit_spectral_line(spectrum, f, fwhm, neighbors);
        const double w = fit.value("fwhm");
        if (fit.converged && fit.value("area") > 0.0 && w > 0.25 * fwhm && w < 4.0 * fwhm) {
            out.power = fit.value("area");
            out.fitted = true;
            return out;
        }
    } catch (const std::exception&) {
        // too few bins or a degenerate window; use the band power below
    }
    out.power = band_power(spectrum, 0.5 * (lo + hi), hi - lo);
    return out;
}

} // namespace optomech::cli
