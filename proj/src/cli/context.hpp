#pragma once

#include <chrono>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "optomech/cli.hpp"
#include "optomech/errors.hpp"
#include "optomech/fitting.hpp"
#include "optomech/io.hpp"
#include "optomech/spectral.hpp"

namespace optomech::cli {

// Collects a scenario's outputs in memory; the runner writes them once the scenario succeeds.
class Context {
public:
    Context(std::string scenario, std::string digest, std::ostream* progress);

    const std::string& scenario() const { return scenario_; }
    const std::string& digest() const { return digest_; }

    void add_csv(const std::string& name, io::CsvTable table);
    void add_text(const std::string& name, std::string content);
    void add_json(const std::string& name, const nlohmann::json& doc);

    // Provenance comments placed at the top of every CSV.
    std::vector<std::string> provenance() const;

    void record_seed(const std::string& name, std::uint64_t seed);
    // Thread-safe; writes nothing when no progress stream was given.
    void progress(const std::string& message) const;
    // Appends per-point warnings in point order.
    void merge(const std::vector<Diagnostics>& parts);

    // Throws ConvergenceError naming `fit` unless the fit converged.
    static void require_converged(const FitResult& fit, const std::string& fit_name);

    struct File {
        std::string name;
        std::string content;
    };
    const std::vector<File>& files() const { return files_; }
    const nlohmann::json& seeds() const { return seeds_; }

    Diagnostics diag;
    nlohmann::json summary = nlohmann::json::object();

private:
    std::string scenario_;
    std::string digest_;
    std::ostream* progress_;
    mutable std::mutex progress_mutex_;
    std::chrono::steady_clock::time_point start_;
    std::vector<File> files_;
    nlohmann::json seeds_ = nlohmann::json::object();
};

// Per-point seeds derived from one configured seed: splitmix64(seed + index).
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index);

struct LinePower {
    double frequency = 0.0;  // Hz
    double power = 0.0;      // fitted Lorentzian area, or window band power when the fit fails
    bool fitted = false;
};

// Line power from a Lorentzian fit over +/- 5 FWHM capped at the midpoint to neighbouring
// lines. Falls back to the band power of the same window if the fit does not converge or
// returns a width outside [0.25, 4] x the expected FWHM.
LinePower line_power(const Spectrum& spectrum, double f, double fwhm, std::span<const double> neighbors);

} // namespace optomech::cli
