#include <algorithm>
#include <cmath>

#include "optomech/analytic.hpp"
#include "optomech/backaction.hpp"
#include "optomech/constants.hpp"
#include "optomech/parallel.hpp"
#include "optomech/rng.hpp"
#include "scenarios.hpp"

namespace optomech::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) { return io::format_number(v); }

void require_non_negative(Block& b, const std::string& key, const std::vector<double>& v, bool strictly = false)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        if (strictly ? !(v[i] > 0.0) : !(v[i] >= 0.0))
            throw b.error(key + "[" + std::to_string(i) + "]", strictly ? "must be positive" : "must be non-negative");
}

// Linear-interpolated quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q)
{
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

// ---------------------------------------------------------------------------

void run_temperature_sweep(Block& b, const SystemParams& params, Context& ctx)
{
    const auto seed = b.seed("seed");
    ctx.record_seed("seed", seed);
    const auto temperatures = b.grid("temperatures_k");
    require_non_negative(b, "temperatures_k", temperatures, true);
    if (temperatures.size() < params.modes.size() + 2)
        throw b.error("temperatures_k", "needs at least " + std::to_string(params.modes.size() + 2) + " points");
    const double noise = b.non_negative("relative_noise", 0.03);
    b.finish();

    // Each mode contributes 2 kB T g0^2 / (hbar Omega) to the frequency variance.
    std::vector<double> omegas, weights;
    for (const auto& m : params.modes) {
        omegas.push_back(m.omega_m);
        weights.push_back(m.g0 * m.g0 / m.omega_m);
    }

    RandomStream rng(seed);
    std::vector<LinewidthPoint> points;
    std::vector<double> truth, measured;
    for (double t : temperatures) {
        const double w = analytic::voigt_fwhm(params.kappa, rms_frequency_fluctuation(params, t));
        truth.push_back(rad_to_hz(w));
        points.push_back({t, w * (1.0 + noise * rng.normal())});
        measured.push_back(rad_to_hz(points.back().fwhm));
    }

    Diagnostics fit_diag;
    const auto fit = fit_linewidth_vs_temperature(points, omegas, weights, {}, &fit_diag);
    for (const auto& w : fit_diag.warnings)
        ctx.diag.warn(w);
    Context::require_converged(fit, "fit_linewidth_vs_temperature");

    std::vector<double> model;
    const double slope = fit.value("variance_slope");
    for (double t : temperatures)
        model.push_back(rad_to_hz(analytic::voigt_fwhm(fit.value("kappa"), std::sqrt(slope * t))));

    io::CsvTable table;
    table.comments = {"relative_noise=" + fmt(noise), "linewidths in Hz"};
    table.add_column("temperature_k", temperatures);
    table.add_column("fwhm_hz", measured);
    table.add_column("true_fwhm_hz", truth);
    table.add_column("fitted_fwhm_hz", model);
    ctx.add_csv("linewidths.csv", std::move(table));

    json comparison = json::object();
    comparison["kappa_hz"] = {{"input", rad_to_hz(params.kappa)},
                              {"fitted", rad_to_hz(fit.value("kappa"))},
                              {"std_error", rad_to_hz(fit.error("kappa"))},
                              {"relative_error", fit.value("kappa") / params.kappa - 1.0}};
    json g0s = json::array();
    for (std::size_t j = 0; j < params.modes.size(); ++j) {
        const std::string name = "g0_" + std::to_string(j + 1);
        g0s.push_back({{"input", rad_to_hz(params.modes[j].g0)},
                       {"fitted", rad_to_hz(fit.value(name))},
                       {"std_error", rad_to_hz(fit.error(name))},
                       {"relative_error", fit.value(name) / params.modes[j].g0 - 1.0}});
    }
    comparison["g0_hz"] = g0s;

    auto doc = io::fit_json(fit, {{"fit", "fit_linewidth_vs_temperature"}, {"units", "rad/s"}});
    doc["comparison"] = comparison;
    ctx.add_json("linewidth_fit.json", doc);
    ctx.summary = comparison;
}

// ---------------------------------------------------------------------------

void run_spring_spectrogram(Block& b, const SystemParams& params, Context& ctx)
{
    const auto seed = b.seed("seed");
    ctx.record_seed("seed", seed);
    const double temperature = b.non_negative("temperature_k");
    const double fwhm = b.positive("measured_fwhm_hz");
    const int mode_index = b.integer("mode_index", 0, 0);
    if (static_cast<std::size_t>(mode_index) >= params.modes.size())
        throw b.error("mode_index", "must name one of the " + std::to_string(params.modes.size()) + " modes");
    std::optional<double> p_in;
    double n_c_max = 0.0;
    if (b.has("p_in_w") == b.has("n_c_max"))
        throw b.error("p_in_w", "give exactly one of p_in_w and n_c_max");
    if (b.has("p_in_w")) {
        p_in = b.non_negative("p_in_w");
        n_c_max = intracavity_photons(params, *p_in);
    } else {
        n_c_max = b.non_negative("n_c_max");
    }
    const auto detunings_hz = b.grid("detunings_hz");
    const auto half_span = b.optional_number("half_span_hz");
    if (half_span && !(*half_span > 0.0))
        throw b.error("half_span_hz", "must be positive");
    const int n_freqs_given = b.integer("n_freqs", 0, 3);
    const int samples = b.integer("amplitude_samples", 10000, 1);
    const int quadrature = b.integer("quadrature_points", 64, 2);
    const auto reference_max = b.optional_number("reference_max");
    if (reference_max && !(*reference_max > 0.0))
        throw b.error("reference_max", "must be positive");
    const bool fit_eta = b.flag("fit_eta", false);
    const bool fit_offset = b.flag("fit_offset", true);
    if (fit_eta && !p_in)
        throw b.error("fit_eta", "needs p_in_w to convert the fitted shifts into a coupling efficiency");
    b.finish();

    const auto& mode = params.modes[static_cast<std::size_t>(mode_index)];
    SpringConfig cfg;
    try {
        cfg = SpringConfig::from_mode(mode, n_c_max, fwhm, seed);
    } catch (const FieldError& e) {
        throw e.prefixed("params.modes[" + std::to_string(mode_index) + "].");
    }
    cfg.n_amplitude_samples = samples;
    cfg.quadrature_points = quadrature;

    std::vector<double> detunings;
    double max_linear = 0.0;
    for (double d : detunings_hz) {
        detunings.push_back(hz_to_rad(d));
        max_linear = std::max(max_linear, std::abs(rad_to_hz(linearized_spring_shift(detunings.back(), cfg, params.kappa))));
    }
    const double span = half_span ? *half_span : std::max(20.0 * fwhm, 2.0 * max_linear + 5.0 * fwhm);
    // Default axis: at least 1001 points and at least 4 per line width.
    const auto n_freqs = n_freqs_given > 0 ? static_cast<std::size_t>(n_freqs_given)
                                           : std::max<std::size_t>(1001, static_cast<std::size_t>(std::ceil(8.0 * span / fwhm)) + 1);
    const auto freqs = spring_frequency_axis(cfg, span, n_freqs);
    const double f0 = rad_to_hz(cfg.omega_m);

    const std::size_t n = detunings.size();
    SpringSpectrogram sg;
    sg.detunings = detunings;
    sg.freqs = freqs;
    sg.psd.resize(n);
    std::vector<double> mean(n), median(n), iqr(n), skew(n), peak(n), linear(n);
    parallel_for(n, [&](std::size_t i) {
        // Same stream per row as spring_spectrogram.
        auto shifts = thermal_spring_shifts(detunings[i], temperature, params, cfg, i);
        sg.psd[i] = lorentzian_average(shifts, cfg.omega_m, fwhm, freqs);
        for (double& s : shifts)
            s = rad_to_hz(s);
        double sum = 0.0;
        for (double s : shifts)
            sum += s;
        mean[i] = sum / static_cast<double>(shifts.size());
        std::sort(shifts.begin(), shifts.end());
        median[i] = quantile(shifts, 0.5);
        iqr[i] = quantile(shifts, 0.75) - quantile(shifts, 0.25);
        skew[i] = spectral_skewness(freqs, sg.psd[i]);
        const auto k = std::max_element(sg.psd[i].begin(), sg.psd[i].end()) - sg.psd[i].begin();
        peak[i] = freqs[static_cast<std::size_t>(k)];
        linear[i] = rad_to_hz(linearized_spring_shift(detunings[i], cfg, params.kappa));
        ctx.progress("detuning " + fmt(detunings_hz[i]) + " Hz done");
    });

    if (reference_max) {
        std::size_t ref = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(detunings[i]) < std::abs(detunings[ref]))
                ref = i;
        const double scale = *reference_max / *std::max_element(sg.psd[ref].begin(), sg.psd[ref].end());
        for (auto& row : sg.psd)
            for (double& v : row)
                v *= scale;
    }

    auto comments = ctx.provenance();
    comments.push_back("temperature_k=" + fmt(temperature));
    comments.push_back("measured_fwhm_hz=" + fmt(fwhm));
    comments.push_back("n_c_max=" + fmt(n_c_max));
    comments.push_back(reference_max ? "psd rescaled so the row nearest zero detuning peaks at " + fmt(*reference_max)
                                     : "psd_unit=1/Hz (unit-area rows)");
    ctx.add_text("spectrogram.csv", io::spectrogram_csv(sg, comments));
    ctx.add_json("spectrogram.json", io::spectrogram_json(sg));

    std::vector<double> offset_peak;
    for (double p : peak)
        offset_peak.push_back(p - f0);
    io::CsvTable rows;
    rows.comments = {"shifts in Hz relative to " + fmt(f0) + " Hz", "temperature_k=" + fmt(temperature)};
    rows.add_column("detuning_hz", detunings_hz);
    rows.add_column("mean_shift_hz", mean);
    rows.add_column("median_shift_hz", median);
    rows.add_column("iqr_hz", iqr);
    rows.add_column("linearized_shift_hz", linear);
    rows.add_column("peak_shift_hz", offset_peak);
    rows.add_column("skewness", skew);
    ctx.add_csv("spring_rows.csv", std::move(rows));

    ctx.summary["n_c_max"] = n_c_max;
    ctx.summary["mean_shift_hz"] = mean;
    ctx.summary["linearized_shift_hz"] = linear;
    ctx.summary["skewness"] = skew;

    if (fit_eta) {
        std::vector<SpringPoint> pts;
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back({detunings[i], peak[i]});
        const auto fit = fit_linearized_spring(pts, *p_in, params, cfg, fit_offset);
        Context::require_converged(fit, "fit_linearized_spring");
        ctx.add_json("spring_fit.json", io::fit_json(fit, {{"fit", "fit_linearized_spring"}, {"peak", "argmax"}}));
        ctx.summary["eta"] = fit.value("eta");
    }
}

// ---------------------------------------------------------------------------

void run_quadratic_sensitivity(Block& b, const SystemParams& params, Context& ctx)
{
    const auto temperatures = b.grid("temperatures_k", {3.0, 10.0, 30.0, 100.0, 295.0});
    require_non_negative(b, "temperatures_k", temperatures);
    const double p_in = b.non_negative("p_in_w", 12.8e-9);
    const double eta = b.non_negative("eta", params.eta);
    if (eta > 1.0)
        throw b.error("eta", "must not exceed 1");

    struct Improvement {
        double g0_scale = 1.0;
        double kappa_scale = 1.0;
        double eta = 0.0;
    };
    std::optional<Improvement> improvement;
    if (auto c = b.optional_child("improvement")) {
        Improvement im;
        im.g0_scale = c->positive("g0_scale", 1.0);
        im.kappa_scale = c->positive("kappa_scale", 1.0);
        im.eta = c->non_negative("eta", eta);
        if (im.eta > 1.0)
            throw c->error("eta", "must not exceed 1");
        c->finish();
        improvement = im;
    }
    b.finish();

    Diagnostics snr_diag;
    io::CsvTable table;
    table.comments = {"p_in_w=" + fmt(p_in), "eta=" + fmt(eta), "snr of the 2 Omega_m peak per mode"};
    table.add_column("temperature_k", temperatures);
    std::vector<double> rms_ratio;
    for (double t : temperatures)
        rms_ratio.push_back(rms_frequency_fluctuation(params, t) / params.kappa);
    table.add_column("rms_over_kappa", rms_ratio);

    json modes = json::array();
    for (std::size_t j = 0; j < params.modes.size(); ++j) {
        const auto& m = params.modes[j];
        std::vector<double> nth, snr;
        for (double t : temperatures) {
            nth.push_back(thermal_occupancy(t, m));
            snr.push_back(analytic::quadratic_snr(params, m, t, p_in, eta, j == 0 ? &snr_diag : nullptr));
        }
        const std::string s = std::to_string(j + 1);
        table.add_column("nth_" + s, nth);
        table.add_column("snr_" + s, snr);

        json doc = {{"omega_m_hz", rad_to_hz(m.omega_m)},
                    {"g0_hz", rad_to_hz(m.g0)},
                    {"c0", single_photon_cooperativity(m.g0, params.kappa, m.gamma)},
                    {"g0_sq_over_kappa_hz", rad_to_hz(effective_quadratic_coupling(m.g0, params.kappa))}};
        const double n_min = analytic::min_phonons(params, p_in, eta, m);
        doc["n_min"] = std::isfinite(n_min) ? json(n_min) : json(nullptr);
        if (improvement) {
            auto better = params;
            better.kappa *= improvement->kappa_scale;
            auto bm = m;
            bm.g0 *= improvement->g0_scale;
            const double n2 = analytic::min_phonons(better, p_in, improvement->eta, bm);
            doc["n_min_improved"] = std::isfinite(n2) ? json(n2) : json(nullptr);
        }
        modes.push_back(doc);
    }
    for (const auto& w : snr_diag.warnings)
        ctx.diag.warn(w);
    ctx.add_csv("sensitivity.csv", std::move(table));

    const double rms295 = rms_frequency_fluctuation(params, 295.0);
    json doc = {{"p_in_w", p_in},
                {"eta", eta},
                {"rms_295k_hz", rad_to_hz(rms295)},
                {"rms_295k_over_kappa", rms295 / params.kappa},
                {"modes", modes}};
    if (improvement)
        doc["improvement"] = {{"g0_scale", improvement->g0_scale},
                              {"kappa_scale", improvement->kappa_scale},
                              {"eta", improvement->eta}};
    ctx.add_json("sensitivity.json", doc);
    ctx.summary = doc;
}

} // namespace optomech::cli
