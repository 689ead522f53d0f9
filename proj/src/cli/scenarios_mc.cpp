#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "optomech/analytic.hpp"
#include "optomech/constants.hpp"
#include "optomech/homodyne.hpp"
#include "optomech/motion.hpp"
#include "optomech/parallel.hpp"
#include "scenarios.hpp"

namespace optomech::cli {

namespace {

using nlohmann::json;

// Products up to this order cap the fit windows even when they are not reported.
constexpr int kNeighborOrder = 10;

HomodyneConfig homodyne_block(Block& block, bool default_averaged, std::initializer_list<const char*> reserved)
{
    static const json empty = json::object();
    auto child = block.optional_child("homodyne");
    Block b = child ? *child : Block(empty, block.path() + ".homodyne");
    for (const char* key : reserved)
        if (b.has(key))
            throw b.error(key, "is set by the scenario grid");
    auto h = read_homodyne(b, default_averaged);
    b.finish();
    return h;
}

MotionTrace thermal_trace(const std::vector<MechanicalMode>& modes, const MotionSettings& motion, double temperature,
                          std::uint64_t seed, Diagnostics* diag)
{
    JumpProcessConfig jump;
    jump.mean_dwell = motion.mean_dwell;
    jump.rng_seed = seed;
    return generate_thermal_trace(modes, temperature, motion.duration_for(modes), motion.rate_for(modes), jump, diag);
}

PsdOptions psd_options(double sample_rate, double fwhm, int bins_per_fwhm, std::size_t n_samples, Diagnostics* diag)
{
    PsdOptions o;
    o.segment_length = segment_length_for(sample_rate, fwhm, bins_per_fwhm);
    if (o.segment_length > n_samples) {
        o.segment_length = std::bit_floor(n_samples);
        warn(diag, "trace shorter than one PSD segment at the requested resolution; using " +
                       std::to_string(o.segment_length) + " samples");
    }
    return o;
}

Spectrum output_spectrum(const MotionTrace& trace, const SystemParams& params, const HomodyneConfig& h,
                         const PsdOptions& psd, Diagnostics* diag)
{
    if (h.phase_averaged)
        return phase_averaged_psd(trace, params, h, psd, diag);
    const auto out = transduce_trace(trace, params, h, diag);
    return estimate_psd(out.power, out.sample_rate, psd);
}

std::vector<MixingProduct> products_for(const std::vector<MechanicalMode>& modes, int max_order, Diagnostics* diag)
{
    if (modes.size() > 2)
        warn(diag, "mixing products are labelled for the first two modes only");
    const double f1 = rad_to_hz(modes[0].omega_m);
    const double f2 = modes.size() > 1 ? rad_to_hz(modes[1].omega_m) : f1;
    auto all = mixing_frequencies(f1, f2, max_order);
    std::erase_if(all, [](const MixingProduct& p) { return !(p.freq > 0.0); });
    return all;
}

// Harmonic group of a product: n if some label (j, k) has j, k >= 0 and j + k = n, else 0.
int group_of(const MixingProduct& p)
{
    int best = 0;
    for (const auto& [j, k] : p.labels)
        if (j >= 0 && k >= 0 && (best == 0 || j + k < best))
            best = j + k;
    return best;
}

struct GroupedLines {
    std::vector<MixingProduct> products;  // fitted products below Nyquist
    std::vector<LinePower> lines;
    std::vector<double> group;  // group[n - 1]
};

GroupedLines grouped_lines(const Spectrum& spectrum, const std::vector<MechanicalMode>& modes, int max_group,
                           double fwhm, Diagnostics* diag, bool all_products = false)
{
    const auto neighbors_src = products_for(modes, std::max(max_group, kNeighborOrder), nullptr);
    std::vector<double> neighbors;
    for (const auto& p : neighbors_src)
        neighbors.push_back(p.freq);

    GroupedLines out;
    out.group.assign(static_cast<std::size_t>(max_group), 0.0);
    const double top = spectrum.freqs.back();
    bool clipped = false;
    for (const auto& p : products_for(modes, max_group, nullptr)) {
        const int g = group_of(p);
        if (!all_products && (g < 1 || g > max_group))
            continue;
        if (p.freq >= top) {
            clipped = true;
            continue;
        }
        const auto line = line_power(spectrum, p.freq, fwhm, neighbors);
        out.products.push_back(p);
        out.lines.push_back(line);
        if (g >= 1 && g <= max_group)
            out.group[static_cast<std::size_t>(g - 1)] += line.power;
    }
    if (clipped)
        warn(diag, "harmonic lines above the Nyquist frequency were left out of the group powers");
    return out;
}

double mean_of(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double standard_error(std::span<const double> v)
{
    if (v.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double sample_rms(std::span<const double> v)
{
    double ss = 0.0;
    for (double x : v)
        ss += x * x;
    return std::sqrt(ss / static_cast<double>(v.size()));
}

std::string fmt(double v) { return io::format_number(v); }

} // namespace

// ---------------------------------------------------------------------------

void run_spectrum(Block& b, const SystemParams& params, Context& ctx)
{
    const auto seed = b.seed("seed");
    ctx.record_seed("seed", seed);
    const auto motion = read_motion(b, true);
    const int max_order = b.integer("max_order", 10, 1);
    const int bins = b.integer("bins_per_fwhm", 4, 1);
    const auto trace_output = b.text("trace_output", "none", {"none", "csv", "binary"});
    const auto h = homodyne_block(b, true, {});
    if (h.shot_noise)
        ctx.record_seed("noise_seed", h.noise_seed);
    b.finish();

    const auto modes = motion.modes(params);
    const double fwhm = motion.line_fwhm(modes);
    ctx.progress("generating thermal trace");
    const auto trace = thermal_trace(modes, motion, motion.temperature, seed, &ctx.diag);
    ctx.progress("transducing " + std::to_string(trace.size()) + " samples");
    const auto psd = psd_options(trace.sample_rate, fwhm, bins, trace.size(), &ctx.diag);
    const auto spectrum = output_spectrum(trace, params, h, psd, &ctx.diag);

    ctx.progress("fitting harmonic lines");
    const auto lines = grouped_lines(spectrum, modes, max_order, fwhm, &ctx.diag, true);

    io::CsvTable peaks;
    peaks.comments = {"line_power_unit=W^2", "fit_window=+-5 fwhm capped at neighbouring products",
                      "line_fwhm_hz=" + fmt(fwhm)};
    std::vector<double> freq, order, group, j, k, power, fitted;
    for (std::size_t i = 0; i < lines.products.size(); ++i) {
        const auto& p = lines.products[i];
        freq.push_back(p.freq);
        order.push_back(p.order());
        group.push_back(group_of(p));
        const auto best = *std::min_element(p.labels.begin(), p.labels.end(), [](auto a, auto b) {
            return a.first + std::abs(a.second) < b.first + std::abs(b.second);
        });
        j.push_back(best.first);
        k.push_back(best.second);
        power.push_back(lines.lines[i].power);
        fitted.push_back(lines.lines[i].fitted ? 1.0 : 0.0);
    }
    peaks.add_column("freq_hz", freq);
    peaks.add_column("order", order);
    peaks.add_column("group", group);
    peaks.add_column("j", j);
    peaks.add_column("k", k);
    peaks.add_column("line_power_w2", power);
    peaks.add_column("fitted", fitted);

    auto table = io::spectrum_table(spectrum, "W^2/Hz");
    table.comments.push_back("temperature_k=" + fmt(motion.temperature));
    table.comments.push_back("phase_averaged=" + std::string(h.phase_averaged ? "true" : "false"));
    ctx.add_csv("spectrum.csv", std::move(table));
    ctx.add_csv("peaks.csv", std::move(peaks));
    if (trace_output == "csv")
        ctx.add_csv("trace.csv", io::trace_table(trace));
    else if (trace_output == "binary")
        ctx.add_text("trace.omnl", io::encode_trace(trace));

    ctx.summary["n_samples"] = trace.size();
    ctx.summary["sample_rate_hz"] = trace.sample_rate;
    ctx.summary["rms_over_kappa"] = rms_frequency_fluctuation(params, motion.temperature) / params.kappa;
    ctx.summary["sample_rms_over_kappa"] = sample_rms(trace.delta_omega) / params.kappa;
    ctx.summary["group_power_w2"] = lines.group;
}

// ---------------------------------------------------------------------------

void run_detuning_sweep(Block& b, const SystemParams& params, Context& ctx)
{
    const auto seed = b.seed("seed");
    ctx.record_seed("seed", seed);
    const auto temperatures = b.grid("temperatures_k");
    for (std::size_t i = 0; i < temperatures.size(); ++i)
        if (!(temperatures[i] >= 0.0))
            throw b.error("temperatures_k[" + std::to_string(i) + "]", "must be non-negative");
    const auto detunings = b.grid("detunings_hz");
    if (detunings.size() < 7)
        throw b.error("detunings_hz", "needs at least 7 points for the lineshape fit");
    const auto motion = read_motion(b, false);
    const int bins = b.integer("bins_per_fwhm", 4, 1);
    const auto h0 = homodyne_block(b, true, {"delta_bar_hz"});
    b.finish();

    const auto modes = motion.modes(params);
    const double fwhm = motion.line_fwhm(modes);
    const std::size_t nt = temperatures.size();
    const std::size_t nd = detunings.size();

    std::vector<MotionTrace> traces(nt);
    std::vector<Diagnostics> trace_diag(nt);
    parallel_for(nt, [&](std::size_t i) {
        traces[i] = thermal_trace(modes, motion, temperatures[i], point_seed(seed, i), &trace_diag[i]);
        ctx.progress("trace at T = " + fmt(temperatures[i]) + " K ready");
    });
    ctx.merge(trace_diag);

    std::vector<double> power(nt * nd);
    std::vector<Diagnostics> point_diag(nt * nd);
    parallel_for(nt * nd, [&](std::size_t idx) {
        const std::size_t i = idx / nd;
        HomodyneConfig h = h0;
        h.delta_bar = hz_to_rad(detunings[idx % nd]);
        h.noise_seed = point_seed(h0.noise_seed, idx);
        const auto psd = psd_options(traces[i].sample_rate, fwhm, bins, traces[i].size(), &point_diag[idx]);
        const auto spectrum = output_spectrum(traces[i], params, h, psd, &point_diag[idx]);
        power[idx] = grouped_lines(spectrum, modes, 1, fwhm, &point_diag[idx]).group[0];
        if (idx % nd == nd - 1)
            ctx.progress("detuning sweep at T = " + fmt(temperatures[i]) + " K done");
    });
    ctx.merge(point_diag);

    io::CsvTable sweep;
    sweep.comments = {"band_power_unit=W^2", "band power of the fundamental group, phase averaged=" +
                                                 std::string(h0.phase_averaged ? "true" : "false")};
    std::vector<double> col_t, col_d;
    for (std::size_t idx = 0; idx < nt * nd; ++idx) {
        col_t.push_back(temperatures[idx / nd]);
        col_d.push_back(detunings[idx % nd]);
    }
    sweep.add_column("temperature_k", col_t);
    sweep.add_column("detuning_hz", col_d);
    sweep.add_column("band_power_w2", power);
    ctx.add_csv("detuning_sweep.csv", std::move(sweep));

    io::CsvTable fits;
    fits.comments = {"widths in Hz; predicted_voigt_fwhm_hz from the empirical Voigt formula"};
    std::vector<double> c_t, c_rms, c_sample_rms, c_fit, c_err, c_pred, c_rel, c_lor, c_sig, c_center;
    json fit_docs = json::array();
    for (std::size_t i = 0; i < nt; ++i) {
        std::vector<DetuningPoint> pts;
        for (std::size_t d = 0; d < nd; ++d)
            pts.push_back({detunings[d], power[i * nd + d]});
        const std::string name = "fit_voigt_squared[T=" + fmt(temperatures[i]) + "]";
        Diagnostics fit_diag;
        const auto fit = fit_voigt_squared(pts, {}, &fit_diag);
        for (const auto& w : fit_diag.warnings)
            ctx.diag.warn(name + ": " + w);
        Context::require_converged(fit, name);
        const double rms = rms_frequency_fluctuation(params, temperatures[i]);
        const double predicted = rad_to_hz(analytic::voigt_fwhm(params.kappa, rms));
        c_t.push_back(temperatures[i]);
        c_rms.push_back(rad_to_hz(rms));
        c_sample_rms.push_back(rad_to_hz(sample_rms(traces[i].delta_omega)));
        c_fit.push_back(fit.value("voigt_fwhm"));
        c_err.push_back(fit.error("voigt_fwhm"));
        c_pred.push_back(predicted);
        c_rel.push_back(fit.value("voigt_fwhm") / predicted - 1.0);
        c_lor.push_back(fit.value("lorentz_fwhm"));
        c_sig.push_back(fit.value("gaussian_sigma"));
        c_center.push_back(fit.value("center"));
        fit_docs.push_back(io::fit_json(fit, {{"fit", name}, {"temperature_k", temperatures[i]}}));
    }
    fits.add_column("temperature_k", c_t);
    fits.add_column("rms_hz", c_rms);
    fits.add_column("sample_rms_hz", c_sample_rms);
    fits.add_column("voigt_fwhm_hz", c_fit);
    fits.add_column("voigt_fwhm_std_error_hz", c_err);
    fits.add_column("predicted_voigt_fwhm_hz", c_pred);
    fits.add_column("relative_error", c_rel);
    fits.add_column("lorentz_fwhm_hz", c_lor);
    fits.add_column("gaussian_sigma_hz", c_sig);
    fits.add_column("center_hz", c_center);
    ctx.add_csv("voigt_fits.csv", std::move(fits));
    ctx.add_json("voigt_fits.json", fit_docs);

    ctx.summary["voigt_fwhm_hz"] = c_fit;
    ctx.summary["predicted_voigt_fwhm_hz"] = c_pred;
}

// ---------------------------------------------------------------------------

namespace {

struct RatioSweep {
    std::vector<double> ratios;          // rms / kappa
    std::vector<double> temperatures;    // K
    int realizations = 1;
    int max_group = 2;
    HomodyneConfig homodyne;
    // power[(i * realizations + r) * max_group + (n - 1)]
    std::vector<double> power;

    double at(std::size_t i, int r, int n) const
    {
        return power[(i * static_cast<std::size_t>(realizations) + static_cast<std::size_t>(r)) *
                         static_cast<std::size_t>(max_group) + static_cast<std::size_t>(n - 1)];
    }
};

RatioSweep run_ratio_sweep(Block& b, const SystemParams& params, Context& ctx, int default_group, bool group_key)
{
    RatioSweep s;
    const auto seed = b.seed("seed");
    ctx.record_seed("seed", seed);
    s.ratios = b.grid("rms_over_kappa", {0.03, 0.1, 0.3, 1.0, 3.4});
    for (std::size_t i = 0; i < s.ratios.size(); ++i)
        if (!(s.ratios[i] > 0.0))
            throw b.error("rms_over_kappa[" + std::to_string(i) + "]", "must be positive");
    s.realizations = b.integer("realizations", 1, 1);
    s.max_group = group_key ? b.integer("max_group", default_group, 1) : default_group;
    const auto motion = read_motion(b, false);
    const int bins = b.integer("bins_per_fwhm", 4, 1);
    s.homodyne = homodyne_block(b, true, {});
    if (s.homodyne.shot_noise)
        ctx.record_seed("noise_seed", s.homodyne.noise_seed);
    b.finish();

    const auto modes = motion.modes(params);
    const double fwhm = motion.line_fwhm(modes);
    for (double r : s.ratios)
        s.temperatures.push_back(temperature_for_rms_fluctuation(params, r * params.kappa));

    const std::size_t reps = static_cast<std::size_t>(s.realizations);
    const std::size_t n = s.ratios.size() * reps;
    s.power.assign(n * static_cast<std::size_t>(s.max_group), 0.0);
    std::vector<Diagnostics> diag(n);
    parallel_for(n, [&](std::size_t idx) {
        const std::size_t i = idx / reps;
        const auto trace = thermal_trace(modes, motion, s.temperatures[i], point_seed(seed, idx), &diag[idx]);
        HomodyneConfig h = s.homodyne;
        h.noise_seed = point_seed(s.homodyne.noise_seed, idx);
        const auto psd = psd_options(trace.sample_rate, fwhm, bins, trace.size(), &diag[idx]);
        const auto spectrum = output_spectrum(trace, params, h, psd, &diag[idx]);
        const auto lines = grouped_lines(spectrum, modes, s.max_group, fwhm, &diag[idx]);
        std::copy(lines.group.begin(), lines.group.end(),
                  s.power.begin() + static_cast<std::ptrdiff_t>(idx * static_cast<std::size_t>(s.max_group)));
        ctx.progress("rms/kappa = " + fmt(s.ratios[i]) + " realization " + std::to_string(idx % reps + 1) + "/" +
                     std::to_string(reps) + " done");
    });
    ctx.merge(diag);
    return s;
}

} // namespace

void run_harmonic_ratios(Block& b, const SystemParams& params, Context& ctx)
{
    const auto s = run_ratio_sweep(b, params, ctx, 2, false);
    const std::size_t nr = s.ratios.size();

    io::CsvTable table;
    table.comments = {"ratio = group 2 / group 1 line power, mean over realizations",
                      "order_by_order_ratio = (2 rms / kappa)^2"};
    std::vector<double> g1, g2, ratio, ratio_se, obo;
    io::CsvTable raw;
    std::vector<double> raw_r, raw_k, raw_g1, raw_g2, raw_ratio;
    for (std::size_t i = 0; i < nr; ++i) {
        std::vector<double> p1, p2, q;
        for (int r = 0; r < s.realizations; ++r) {
            p1.push_back(s.at(i, r, 1));
            p2.push_back(s.at(i, r, 2));
            q.push_back(p2.back() / p1.back());
            raw_r.push_back(s.ratios[i]);
            raw_k.push_back(r);
            raw_g1.push_back(p1.back());
            raw_g2.push_back(p2.back());
            raw_ratio.push_back(q.back());
        }
        g1.push_back(mean_of(p1));
        g2.push_back(mean_of(p2));
        ratio.push_back(mean_of(q));
        ratio_se.push_back(standard_error(q));
        obo.push_back(4.0 * s.ratios[i] * s.ratios[i]);
    }
    table.add_column("rms_over_kappa", s.ratios);
    table.add_column("temperature_k", s.temperatures);
    table.add_column("group1_w2", g1);
    table.add_column("group2_w2", g2);
    table.add_column("ratio", ratio);
    table.add_column("ratio_std_error", ratio_se);
    table.add_column("order_by_order_ratio", obo);
    ctx.add_csv("harmonic_ratios.csv", std::move(table));

    raw.add_column("rms_over_kappa", raw_r);
    raw.add_column("realization", raw_k);
    raw.add_column("group1_w2", raw_g1);
    raw.add_column("group2_w2", raw_g2);
    raw.add_column("ratio", raw_ratio);
    ctx.add_csv("harmonic_ratios_realizations.csv", std::move(raw));

    ctx.summary["rms_over_kappa"] = s.ratios;
    ctx.summary["ratio"] = ratio;
    ctx.summary["ratio_std_error"] = ratio_se;
}

void run_band_power_curve(Block& b, const SystemParams& params, Context& ctx)
{
    const auto s = run_ratio_sweep(b, params, ctx, 3, true);
    const std::size_t nr = s.ratios.size();
    const auto& h = s.homodyne;
    const double a_sq = analytic::homodyne_prefactor(h.p_in, h.p_lo, params.eta) * h.gain * h.gain;

    io::CsvTable table;
    table.comments = {"power_unit=W^2", "order_by_order valid for rms/kappa <= " + fmt(analytic::kOrderByOrderLimit)};
    table.add_column("rms_over_kappa", s.ratios);
    table.add_column("temperature_k", s.temperatures);
    json groups = json::array();
    for (int n = 1; n <= s.max_group; ++n) {
        std::vector<double> mean, se, obo;
        for (std::size_t i = 0; i < nr; ++i) {
            std::vector<double> v;
            for (int r = 0; r < s.realizations; ++r)
                v.push_back(s.at(i, r, n));
            mean.push_back(mean_of(v));
            se.push_back(standard_error(v));
            analytic::OrderByOrderInputs in;
            in.k = n;
            in.delta_omega_var = std::pow(s.ratios[i] * params.kappa, 2);
            in.kappa = params.kappa;
            in.a_sq = a_sq;
            obo.push_back(analytic::order_by_order_band_power(in));
        }
        const std::string g = "group" + std::to_string(n);
        table.add_column(g + "_w2", mean);
        table.add_column(g + "_std_error_w2", se);
        table.add_column("order_by_order" + std::to_string(n) + "_w2", obo);
        const auto peak = std::max_element(mean.begin(), mean.end()) - mean.begin();
        groups.push_back({{"group", n},
                          {"power_w2", mean},
                          {"order_by_order_w2", obo},
                          {"interior_maximum", peak > 0 && static_cast<std::size_t>(peak) + 1 < nr}});
    }
    std::vector<double> valid;
    for (double r : s.ratios)
        valid.push_back(r <= analytic::kOrderByOrderLimit ? 1.0 : 0.0);
    table.add_column("order_by_order_valid", valid);
    ctx.add_csv("band_power_curve.csv", std::move(table));

    ctx.summary["rms_over_kappa"] = s.ratios;
    ctx.summary["groups"] = groups;
}

// ---------------------------------------------------------------------------

void run_quadrature_select(Block& b, const SystemParams& params, Context& ctx)
{
    const auto seed = b.seed("seed");
    ctx.record_seed("seed", seed);
    const auto motion = read_motion(b, true);
    const auto thetas = b.grid("thetas_rad", [] {
        std::vector<double> v;
        for (int i = 0; i <= 24; ++i)
            v.push_back(2.0 * std::numbers::pi * i / 24.0);
        return v;
    }());
    if (thetas.size() < 5)
        throw b.error("thetas_rad", "needs at least 5 phases for the sinusoid fits");
    const int bins = b.integer("bins_per_fwhm", 4, 1);
    const auto h0 = homodyne_block(b, false, {"theta_rad", "phase_averaged", "n_theta"});
    if (h0.shot_noise)
        ctx.record_seed("noise_seed", h0.noise_seed);
    b.finish();

    const auto modes = motion.modes(params);
    const double fwhm = motion.line_fwhm(modes);
    ctx.progress("generating thermal trace");
    const auto trace = thermal_trace(modes, motion, motion.temperature, seed, &ctx.diag);
    const auto psd = psd_options(trace.sample_rate, fwhm, bins, trace.size(), &ctx.diag);

    const std::size_t n = thetas.size();
    std::vector<double> p1(n), p2(n);
    std::vector<Diagnostics> diag(n);
    parallel_for(n, [&](std::size_t i) {
        HomodyneConfig h = h0;
        h.theta = thetas[i];
        const auto out = transduce_trace(trace, params, h, &diag[i], i);
        const auto spectrum = estimate_psd(out.power, out.sample_rate, psd);
        const auto lines = grouped_lines(spectrum, modes, 2, fwhm, &diag[i]);
        p1[i] = lines.group[0];
        p2[i] = lines.group[1];
    });
    ctx.merge(diag);

    // Phase of the first maximum, in units of theta, folded into [0, period).
    auto peak_theta = [](const FitResult& fit) {
        const double period = fit.value("period");
        double t = (0.25 - fit.value("phase") / (2.0 * std::numbers::pi)) * period;
        t = std::fmod(t, period);
        return t < 0.0 ? t + period : t;
    };
    json fits = json::object();
    std::vector<double> peaks;
    for (int g = 1; g <= 2; ++g) {
        const std::string name = "fit_sinusoid[group" + std::to_string(g) + "]";
        const auto fit = fit_sinusoid(thetas, g == 1 ? p1 : p2);
        Context::require_converged(fit, name);
        fits["group" + std::to_string(g)] = io::fit_json(fit, {{"fit", name}});
        peaks.push_back(peak_theta(fit));
    }
    const double period = fits["group1"]["parameters"]["period"]["value"].get<double>();
    double sep = std::remainder(peaks[1] - peaks[0], period);
    fits["peak_theta_rad"] = peaks;
    fits["phase_separation_rad"] = std::abs(sep);

    io::CsvTable table;
    table.comments = {"power_unit=W^2", "temperature_k=" + fmt(motion.temperature),
                      "delta_bar_hz=" + fmt(rad_to_hz(h0.delta_bar))};
    table.add_column("theta_rad", thetas);
    table.add_column("group1_w2", p1);
    table.add_column("group2_w2", p2);
    ctx.add_csv("quadrature.csv", std::move(table));
    ctx.add_json("quadrature_fits.json", fits);

    ctx.summary["peak_theta_rad"] = peaks;
    ctx.summary["phase_separation_rad"] = std::abs(sep);
}

} // namespace optomech::cli
