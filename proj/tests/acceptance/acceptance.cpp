// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits non-zero if any fails.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/analytic.hpp"
#include "optomech/backaction.hpp"
#include "optomech/cli.hpp"
#include "optomech/constants.hpp"
#include "optomech/fitting.hpp"
#include "optomech/homodyne.hpp"
#include "optomech/io.hpp"
#include "optomech/motion.hpp"
#include "optomech/params.hpp"
#include "optomech/rng.hpp"
#include "optomech/spectral.hpp"
#include "optomech/voigt.hpp"
#include "support.hpp"

using namespace optomech;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& note)
    {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok " : "NO ") + note);
    }
    void info(const std::string& note) { notes.push_back("-- " + note); }
};

struct Criterion {
    int number;
    std::string title;
    double time_limit_s;  // 0 for none
    std::function<Outcome()> run;
};

std::string num(double v, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double rel_err(double a, double b) { return std::abs(a / b - 1.0); }

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / "optomech_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

cli::RunResult run_scenario(const json& config, const fs::path& dir, std::optional<unsigned> threads = std::nullopt)
{
    cli::RunOptions opts;
    opts.out_dir = dir;
    opts.threads = threads;
    return cli::run_config(config, opts);
}

// Single 1 MHz mode on the device-1 cavity; the Monte-Carlo criteria use it with a reduced Q.
json single_mode_params()
{
    return {{"kappa", 20.4e9},
            {"wavelength", 1457.5e-9},
            {"eta", 0.013},
            {"modes", json::array({{{"omega_m", 1e6}, {"gamma", 100}, {"g0", 25e6}, {"mass", 1.5e-15}}})}};
}

const std::vector<double> kRatioGrid{0.03, 0.1, 0.3, 1.0, 3.4};

// ---------------------------------------------------------------------------

Outcome voigt_limits()
{
    Outcome o;
    const double kappa = hz_to_rad(20.4e9);
    const double lor = analytic::voigt_fwhm(kappa, 0.0);
    o.check(rel_err(lor, kappa) <= 1e-3, "voigt_fwhm(kappa, 0) / kappa - 1 = " + num(lor / kappa - 1.0));
    double worst = 0.0;
    for (double d : {1.0, 1e3, hz_to_rad(69e9), 1e15}) {
        const double g = analytic::voigt_fwhm(0.0, d);
        worst = std::max(worst, rel_err(g, 2.0 * std::sqrt(2.0 * std::log(2.0)) * d));
    }
    o.check(worst <= 1e-12, "voigt_fwhm(0, d) vs 2 sqrt(2 ln 2) d, worst relative error " + num(worst));

    // Independent check of the empirical formula between the limits: half-maximum of the
    // Faddeeva-based profile found by bisection.
    double mid_worst = 0.0;
    for (double ratio : {0.1, 0.5, 1.0, 3.4}) {
        const double sigma = ratio * kappa;
        const double gamma = 0.5 * kappa;
        const double peak = voigt_profile(0.0, sigma, gamma);
        double lo = 0.0, hi = 10.0 * (sigma + gamma);
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (lo + hi);
            (voigt_profile(m, sigma, gamma) > 0.5 * peak ? lo : hi) = m;
        }
        mid_worst = std::max(mid_worst, rel_err(analytic::voigt_fwhm(kappa, sigma), 2.0 * lo));
    }
    o.info("empirical formula vs numerical FWHM in between, worst " + num(mid_worst));
    return o;
}

// ---------------------------------------------------------------------------

Outcome order_by_order_agreement()
{
    Outcome o;
    const auto dir = scratch("c2");
    const double damping_times = 4000.0;
    const json config = {{"scenario", "band_power_curve"},
                         {"params", single_mode_params()},
                         {"band_power_curve",
                          {{"seed", 20260101},
                           {"rms_over_kappa", {0.03}},
                           {"max_group", 2},
                           {"gamma_override_hz", 2000},
                           {"damping_times", damping_times},
                           {"homodyne", {{"p_in_w", 10e-9}, {"p_lo_w", 1e-3}, {"delta_bar_hz", 0}, {"n_theta", 8}}}}}};
    const auto r = run_scenario(config, dir);
    const auto& groups = r.summary["result"]["groups"];
    const double p1 = groups[0]["power_w2"][0];
    const double p2 = groups[1]["power_w2"][0];
    const double e1 = groups[0]["order_by_order_w2"][0];
    const double e2 = groups[1]["order_by_order_w2"][0];
    o.info("trace length " + num(damping_times) + " / Gamma, Delta_bar = 0, c = 0, rms/kappa = 0.03");
    o.check(rel_err(p1, e1) <= 0.15, "band power at f vs order-by-order: " + num(p1 / e1 - 1.0, 3));
    o.check(rel_err(p2, e2) <= 0.15, "band power at 2f vs order-by-order: " + num(p2 / e2 - 1.0, 3));
    const double expected = std::pow(2.0 * 0.03, 2);
    o.check(rel_err(p2 / p1, expected) <= 0.20, "ratio " + num(p2 / p1) + " vs (2 rms/kappa)^2 = " + num(expected));

    // Oracle cross-check of the closed form itself: 2 A^2 k! (2 var / kappa^2)^k.
    const double kappa = hz_to_rad(20.4e9);
    const double a_sq = 8.0 * 10e-9 * 1e-3 * 0.013 * 0.013;
    const double x = 2.0 * std::pow(0.03, 2);
    o.check(rel_err(e1, 2.0 * a_sq * x) < 1e-12 && rel_err(e2, 2.0 * a_sq * 2.0 * x * x) < 1e-12,
            "order-by-order values equal the hand-evaluated closed form");
    (void)kappa;
    return o;
}

// ---------------------------------------------------------------------------

json ratio_config(const std::string& scenario, std::uint64_t seed, int realizations)
{
    json block = {{"seed", seed},
                  {"rms_over_kappa", kRatioGrid},
                  {"realizations", realizations},
                  {"gamma_override_hz", 2000},
                  {"damping_times", 200},
                  {"sample_rate_hz", 64e6},
                  {"homodyne", {{"n_theta", 8}}}};
    if (scenario == "band_power_curve")
        block["max_group"] = 3;
    return {{"scenario", scenario}, {"params", single_mode_params()}, {scenario, block}};
}

Outcome saturation()
{
    Outcome o;
    const auto dir = scratch("c3");
    const int realizations = 32;
    const auto r = run_scenario(ratio_config("harmonic_ratios", 31337, realizations), dir);
    const auto ratio = r.summary["result"]["ratio"].get<std::vector<double>>();
    const auto se = r.summary["result"]["ratio_std_error"].get<std::vector<double>>();
    std::string curve;
    for (std::size_t i = 0; i < ratio.size(); ++i)
        curve += (i ? ", " : "") + num(kRatioGrid[i], 2) + ": " + num(ratio[i], 3) + " +- " + num(se[i], 2);
    o.info("fs = 64 f (alias-free to Monte-Carlo precision), " + std::to_string(realizations) +
           " traces of 200 / Gamma per point");
    o.info("ratio curve " + curve);
    const double last = ratio.back();
    o.check(last >= 0.6 && last <= 1.4, "ratio at rms/kappa = 3.4 is " + num(last, 3) + " (window [0.6, 1.4])");
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < ratio.size(); ++i)
        monotone = monotone && ratio[i + 1] >= ratio[i] - 2.0 * std::hypot(se[i], se[i + 1]);
    o.check(monotone, "non-decreasing within 2 combined standard errors");
    return o;
}

// ---------------------------------------------------------------------------

Outcome band_power_maximum()
{
    Outcome o;
    const auto dir = scratch("c4");
    const auto r = run_scenario(ratio_config("band_power_curve", 4242, 8), dir);
    const auto& g1 = r.summary["result"]["groups"][0];
    const auto p = g1["power_w2"].get<std::vector<double>>();
    const auto e = g1["order_by_order_w2"].get<std::vector<double>>();
    const auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    std::string curve;
    for (std::size_t i = 0; i < p.size(); ++i)
        curve += (i ? ", " : "") + num(kRatioGrid[i], 2) + ": " + num(p[i], 3);
    o.info("group-1 power (W^2) " + curve);
    o.check(peak > 0 && peak + 1 < p.size(), "interior maximum at rms/kappa = " + num(kRatioGrid[peak], 2));
    o.check(p.back() < e.back() / 10.0,
            "at 3.4 simulated / order-by-order = " + num(p.back() / e.back(), 3) + " (< 0.1 required)");
    return o;
}

// ---------------------------------------------------------------------------

Outcome parameter_roundtrip()
{
    Outcome o;
    const auto dir = scratch("c5");
    std::vector<double> temps;
    for (int i = 0; i < 8; ++i)
        temps.push_back(3.0 * std::pow(100.0, i / 7.0));
    const json params = {{"kappa", 20.4e9},
                         {"wavelength", 1457.5e-9},
                         {"eta", 0.013},
                         {"modes",
                          json::array({{{"omega_m", 3.27e6}, {"gamma", 100}, {"g0", 24.7e6}},
                                       {{"omega_m", 3.36e6}, {"gamma", 100}, {"g0", 25.4e6}}})}};
    const json config = {{"scenario", "temperature_sweep"},
                         {"params", params},
                         {"temperature_sweep", {{"seed", 1}, {"temperatures_k", temps}, {"relative_noise", 0.03}}}};
    const auto r = run_scenario(config, dir);
    const auto& s = r.summary["result"];
    const double ek = s["kappa_hz"]["relative_error"];
    o.info("8 log-spaced temperatures on [3, 300] K, 3 % noise, seed 1");
    o.check(std::abs(ek) <= 0.05, "kappa relative error " + num(ek, 3) + " (fit std error " +
                                      num(s["kappa_hz"]["std_error"].get<double>() / 20.4e9, 2) + ")");
    int j = 1;
    for (const auto& g : s["g0_hz"]) {
        const double eg = g["relative_error"];
        o.check(std::abs(eg) <= 0.05, "g0_" + std::to_string(j++) + " relative error " + num(eg, 3));
    }

    // How often a single 3 % dataset meets the 5 % bound (same design, other seeds).
    const auto dev = params_from_json(params);
    std::vector<double> omegas, weights;
    for (const auto& m : dev.modes) {
        omegas.push_back(m.omega_m);
        weights.push_back(m.g0 * m.g0 / m.omega_m);
    }
    int hits = 0;
    const int draws = 400;
    for (int s2 = 0; s2 < draws; ++s2) {
        RandomStream rng(100000 + s2);
        std::vector<LinewidthPoint> pts;
        for (double t : temps)
            pts.push_back({t, analytic::voigt_fwhm(dev.kappa, rms_frequency_fluctuation(dev, t)) * (1.0 + 0.03 * rng.normal())});
        const auto fit = fit_linewidth_vs_temperature(pts, omegas, weights);
        hits += rel_err(fit.value("kappa"), dev.kappa) <= 0.05 && rel_err(fit.value("g0_1"), dev.modes[0].g0) <= 0.05 &&
                rel_err(fit.value("g0_2"), dev.modes[1].g0) <= 0.05;
    }
    o.info("fraction of " + std::to_string(draws) + " independent datasets within 5 %: " + num(double(hits) / draws, 3));
    return o;
}

// ---------------------------------------------------------------------------

Outcome derived_quantities()
{
    Outcome o;
    const auto dir = scratch("c6");
    const json config = {{"scenario", "quadratic_sensitivity"},
                         {"params", {{"preset", "device1"}}},
                         {"quadratic_sensitivity",
                          {{"p_in_w", 12.8e-9},
                           {"improvement", {{"g0_scale", std::numbers::sqrt2}, {"kappa_scale", 0.5}, {"eta", 0.40}}}}}};
    const auto r = run_scenario(config, dir);
    const auto& s = r.summary["result"];
    const auto& m1 = s["modes"][0];

    // Oracle: C0 = 4 g0^2 / (kappa Gamma) from the quoted rates.
    const double c0_oracle = 4.0 * 24.7e6 * 24.7e6 / (20.4e9 * 100.0);
    const double c0 = m1["c0"];
    o.check(rel_err(c0, c0_oracle) < 1e-12, "C0 pipeline " + num(c0) + " equals 4 g0^2 / (kappa Gamma)");
    o.check(rel_err(c0, 1.1e3) <= 0.15, "C0 = " + num(c0) + " vs 1.1e3");

    // Oracle: rms = sqrt(sum 2 g0^2 kB T / (hbar Omega)).
    double var = 0.0;
    for (auto [f, g] : {std::pair{3.27e6, 24.7e6}, std::pair{3.36e6, 25.4e6}})
        var += 2.0 * g * g * PhysicalConstants::kB * 295.0 / (PhysicalConstants::hbar * kTwoPi * f);
    const double rms = s["rms_295k_hz"];
    o.check(rel_err(rms, std::sqrt(var)) < 1e-12, "rms(295 K) pipeline equals the closed form");
    o.check(rel_err(rms, 69e9) <= 0.02, "rms(295 K) / 2 pi = " + num(rms / 1e9) + " GHz vs 69 GHz");

    for (std::size_t j = 0; j < 2; ++j) {
        const double q = s["modes"][j]["g0_sq_over_kappa_hz"];
        o.check(rel_err(q, 32e3) <= 0.10, "g0^2/kappa mode " + std::to_string(j + 1) + " = " + num(q) + " Hz vs 32 kHz");
    }
    for (std::size_t j = 0; j < 2; ++j) {
        const double n = s["modes"][j]["n_min_improved"];
        o.check(n >= 0.5 && n <= 2.0, "improved n_min mode " + std::to_string(j + 1) + " = " + num(n, 3));
    }
    return o;
}

// ---------------------------------------------------------------------------

Outcome spring_symmetries()
{
    Outcome o;
    const auto dev = presets::device1();
    const auto& mode = dev.modes[0];
    const double kappa = dev.kappa;
    const auto cfg = SpringConfig::from_mode(mode, intracavity_photons(dev, 124e-9), 100.0, 1);
    const double x_zpf = cfg.x_zpf();

    bool zero = true;
    for (double x0 : {1e-3, 1.0, 1e3, 1e5, 1e7})
        zero = zero && spring_shift(0.0, x0 * x_zpf, cfg, kappa) == 0.0;
    o.check(zero, "shift at zero detuning is exactly 0 for x0 = 1e-3 .. 1e7 x_zpf");

    double worst = 0.0;
    for (double d : {0.05, 0.3, 0.5, 1.0, 3.0})
        for (double x0 : {1.0, 1e4, 1e6}) {
            const double a = spring_shift(d * kappa, x0 * x_zpf, cfg, kappa);
            const double b = spring_shift(-d * kappa, x0 * x_zpf, cfg, kappa);
            worst = std::max(worst, std::abs(a + b) / std::abs(a));
        }
    o.check(worst <= 1e-10, "antisymmetry in detuning, worst relative " + num(worst));

    // Oracle: derivative of F = hbar G n / (1 + u^2), u = (2/kappa)(Delta + G x), at x = 0.
    const double hbar = PhysicalConstants::hbar;
    double small = 0.0;
    for (double d : {-1.0, -0.3, 0.1, 0.5, 2.0}) {
        const double delta = d * kappa;
        const double u = 2.0 * delta / kappa;
        const double dF = -hbar * cfg.G * cfg.n_c_max * 2.0 * u * (2.0 * cfg.G / kappa) / std::pow(1.0 + u * u, 2);
        const double expected = -dF / (2.0 * cfg.mass * cfg.omega_m);
        const double x0 = 1e-4 * kappa / (2.0 * cfg.G);
        small = std::max(small, rel_err(spring_shift(delta, x0, cfg, kappa), expected));
    }
    o.check(small <= 1e-6, "small-amplitude shift vs analytic force derivative, worst " + num(small));
    return o;
}

// ---------------------------------------------------------------------------

Outcome spring_phenomenology()
{
    Outcome o;
    const auto dir = scratch("c8");
    const double half = 0.5 * 20.4e9;
    const json config = {{"scenario", "spring_spectrogram"},
                         {"params", {{"preset", "device1"}}},
                         {"spring_spectrogram",
                          {{"seed", 295},
                           {"temperature_k", 295},
                           {"measured_fwhm_hz", 100},
                           {"p_in_w", 124e-9},
                           {"mode_index", 0},
                           {"detunings_hz", {-half, -0.5 * half, 0.0, 0.5 * half, half}},
                           {"amplitude_samples", 10000}}}};
    const auto r = run_scenario(config, dir);
    const auto& s = r.summary["result"];
    const auto skew = s["skewness"].get<std::vector<double>>();
    const auto mean = s["mean_shift_hz"].get<std::vector<double>>();
    const auto lin = s["linearized_shift_hz"].get<std::vector<double>>();

    o.check(skew[0] * skew[4] < 0.0 && std::abs(skew[0]) > 0.1 && std::abs(skew[4]) > 0.1,
            "skewness " + num(skew[0], 3) + " at -kappa/2 and " + num(skew[4], 3) + " at +kappa/2");
    bool smaller = true;
    std::string shifts;
    for (std::size_t i : {0u, 1u, 3u, 4u}) {
        smaller = smaller && std::abs(mean[i]) < std::abs(lin[i]);
        shifts += (shifts.empty() ? "" : ", ") + num(mean[i], 4) + "/" + num(lin[i], 4);
    }
    o.check(smaller, "|mean shift| < |linearized shift| (Hz, mean/linear): " + shifts);

    const auto sg = json::parse(io::read_file(dir / "spectrogram.json"));
    const auto freqs = sg["freqs_hz"].get<std::vector<double>>();
    const auto row = sg["psd"][2].get<std::vector<double>>();
    const double f0 = 3.27e6;
    const double hw = 50.0;
    double peak = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double ref = hw / std::numbers::pi / ((freqs[k] - f0) * (freqs[k] - f0) + hw * hw);
        peak = std::max(peak, ref);
        diff = std::max(diff, std::abs(row[k] - ref));
    }
    o.check(diff / peak <= 1e-6, "zero-detuning row vs unshifted Lorentzian, max deviation / peak " + num(diff / peak));
    return o;
}

// ---------------------------------------------------------------------------

Outcome signal_processing()
{
    using testing_support::ks_p_value;
    using testing_support::ks_statistic;
    Outcome o;
    const auto dev = presets::device1();

    // Parseval on a deterministic transduced trace: rect window, one segment.
    {
        const auto trace = [&] {
            auto t = harmonic_trace(1.0, hz_to_rad(1.0e3), 0.3, 1.0, 65536.0);
            t.delta_omega.assign(t.xi[0].size(), 0.0);
            for (std::size_t i = 0; i < t.delta_omega.size(); ++i)
                t.delta_omega[i] = 0.4 * dev.kappa * t.xi[0][i];
            return t;
        }();
        HomodyneConfig h;
        h.p_in = 10e-9;
        h.p_lo = 1e-3;
        h.theta = 0.7;
        const auto out = transduce_trace(trace, dev, h);
        PsdOptions psd{out.power.size(), Window::rect, 0.0};
        const auto spec = estimate_psd(out.power, out.sample_rate, psd);
        const double ms = testing_support::mean_square(out.power);
        const double err = rel_err(total_power(spec), ms);
        o.check(err <= 1e-6, "Parseval on a transduced harmonic trace, relative error " + num(err));
    }

    // Zero-noise roundtrips of every fitter.
    {
        double worst = 0.0;
        auto track = [&](double got, double want) { worst = std::max(worst, rel_err(got, want)); };

        std::vector<double> f, y;
        for (int i = 0; i <= 400; ++i) {
            f.push_back(3.27e6 - 1000.0 + 5.0 * i);
            y.push_back(lorentzian_model(f.back(), 3.27e6 + 12.5, 100.0, 2.5e-9, 1e-14));
        }
        const auto lf = fit_lorentzian(f, y);
        track(lf.value("f0"), 3.27e6 + 12.5);
        track(lf.value("fwhm"), 100.0);
        track(lf.value("area"), 2.5e-9);

        const double kappa = dev.kappa;
        std::vector<DetuningPoint> pts;
        for (int i = 0; i < 41; ++i) {
            const double x = 0.1 * kappa - 4.0 * kappa + 8.0 * kappa * i / 40.0;
            const double v = voigt_unit_peak(x - 0.1 * kappa, 0.7 * kappa, 0.5 * kappa);
            pts.push_back({x, 3e-12 * v * v});
        }
        const auto vf = fit_voigt_squared(pts);
        track(vf.value("lorentz_fwhm"), kappa);
        track(vf.value("gaussian_sigma"), 0.7 * kappa);
        track(vf.value("amplitude"), 3e-12);

        std::vector<double> x, s;
        for (int i = 0; i < 60; ++i) {
            x.push_back(0.05 * i);
            s.push_back(2.0 * std::sin(kTwoPi * x.back() / 1.3 + 0.7) + 0.5);
        }
        const auto sf = fit_sinusoid(x, s);
        track(sf.value("amplitude"), 2.0);
        track(sf.value("period"), 1.3);
        track(sf.value("phase"), 0.7);

        std::vector<double> omegas, weights;
        for (const auto& m : dev.modes) {
            omegas.push_back(m.omega_m);
            weights.push_back(m.g0 * m.g0 / m.omega_m);
        }
        std::vector<LinewidthPoint> lw;
        for (int i = 0; i < 8; ++i) {
            const double t = 3.0 * std::pow(100.0, i / 7.0);
            lw.push_back({t, analytic::voigt_fwhm(kappa, rms_frequency_fluctuation(dev, t))});
        }
        const auto wf = fit_linewidth_vs_temperature(lw, omegas, weights);
        track(wf.value("kappa"), kappa);
        track(wf.value("g0_1"), dev.modes[0].g0);
        track(wf.value("g0_2"), dev.modes[1].g0);

        const double p_in = 20.6e-9;
        const auto cfg = SpringConfig::from_mode(dev.modes[0], intracavity_photons(dev, p_in), 100.0);
        const double f0 = rad_to_hz(cfg.omega_m);
        std::vector<SpringPoint> sp;
        for (int i = -8; i <= 8; ++i) {
            const double d = 0.15 * i * kappa;
            sp.push_back({d, f0 + 12.0 + rad_to_hz(linearized_spring_shift(d, cfg, kappa))});
        }
        const auto spf = fit_linearized_spring(sp, p_in, dev, cfg);
        track(spf.value("eta"), dev.eta);
        track(spf.value("f_offset"), f0 + 12.0);

        const bool converged = lf.converged && vf.converged && sf.converged && wf.converged && spf.converged;
        o.check(converged && worst <= 1e-6, "five fitters, zero-noise roundtrip worst relative error " + num(worst));
    }

    // Thermal trace second moment: <xi^2> = 2 nth.
    {
        MechanicalMode m;
        m.omega_m = hz_to_rad(1.0e3);
        m.gamma = hz_to_rad(10.0);
        m.g0 = hz_to_rad(1.0e6);
        const std::vector<MechanicalMode> modes{m};
        const double temperature = 1e-3;
        const double nth = thermal_occupancy(temperature, m);
        JumpProcessConfig jump;
        jump.rng_seed = 9;
        const auto trace = generate_thermal_trace(modes, temperature, 20000.0 / m.gamma, 16e3, jump);
        const double ms = testing_support::mean_square(trace.xi[0]);
        o.check(rel_err(ms, 2.0 * nth) <= 0.05, "<xi^2> / (2 nth) - 1 = " + num(ms / (2.0 * nth) - 1.0, 3) +
                                                    " over 20000 damping times");
    }

    // Segment energies against the exponential law.
    {
        const double nth = 1234.5;
        ThermalJumpProcess process(nth, 1e-3, RandomStream(77, 0));
        std::vector<double> energies;
        for (int i = 0; i < 20000; ++i)
            energies.push_back(process.next().energy);
        const double p = ks_p_value(ks_statistic(energies, [&](double e) { return 1.0 - std::exp(-e / nth); }),
                                    energies.size());
        o.check(p > 0.01, "segment-energy KS test p = " + num(p, 3));
    }
    return o;
}

// ---------------------------------------------------------------------------

std::vector<json> determinism_configs()
{
    const json params = single_mode_params();
    const json mc = {{"gamma_override_hz", 5000}, {"damping_times", 40}};
    auto with = [](json block, const json& extra) {
        for (auto& [k, v] : extra.items())
            block[k] = v;
        return block;
    };
    return {
        {{"scenario", "spectrum"},
         {"params", params},
         {"spectrum", with(mc, {{"seed", 1}, {"temperature_k", 30}, {"max_order", 4}, {"trace_output", "binary"}})}},
        {{"scenario", "detuning_sweep"},
         {"params", params},
         {"detuning_sweep",
          with(mc, {{"seed", 2}, {"temperatures_k", {3, 300}}, {"detunings_hz", {{"start", -60e9}, {"stop", 60e9}, {"count", 9}}}})}},
        {{"scenario", "temperature_sweep"},
         {"params", {{"preset", "device1"}}},
         {"temperature_sweep", {{"seed", 3}, {"temperatures_k", {{"start", 3}, {"stop", 300}, {"count", 8}}}}}},
        {{"scenario", "harmonic_ratios"},
         {"params", params},
         {"harmonic_ratios", with(mc, {{"seed", 4}, {"realizations", 2}})}},
        {{"scenario", "band_power_curve"},
         {"params", params},
         {"band_power_curve", with(mc, {{"seed", 5}, {"realizations", 2}})}},
        {{"scenario", "quadrature_select"},
         {"params", params},
         {"quadrature_select", with(mc, {{"seed", 6}, {"temperature_k", 3}, {"homodyne", {{"shot_noise", true}, {"noise_seed", 61}}}})}},
        {{"scenario", "spring_spectrogram"},
         {"params", {{"preset", "device1"}}},
         {"spring_spectrogram",
          {{"seed", 7},
           {"temperature_k", 3},
           {"measured_fwhm_hz", 100},
           {"p_in_w", 20.6e-9},
           {"detunings_hz", {{"start", -20e9}, {"stop", 20e9}, {"count", 9}}},
           {"amplitude_samples", 2000},
           {"fit_eta", true}}}},
        {{"scenario", "quadratic_sensitivity"}, {"params", {{"preset", "device1"}}}, {"quadratic_sensitivity", json::object()}},
    };
}

Outcome determinism()
{
    Outcome o;
    for (const auto& config : determinism_configs()) {
        const std::string name = config["scenario"];
        const auto a = scratch("c10/" + name + "/a");
        const auto b = scratch("c10/" + name + "/b");
        run_scenario(config, a, 1u);
        run_scenario(config, b, 4u);
        std::size_t files = 0;
        bool same = true;
        for (const auto& e : fs::directory_iterator(a)) {
            const auto n = e.path().filename();
            if (n == "manifest.json")
                continue;
            ++files;
            same = same && fs::exists(b / n) && io::read_file(a / n) == io::read_file(b / n);
        }
        o.check(same && files > 0, name + ": " + std::to_string(files) + " data files byte-identical (1 vs 4 threads)");
    }
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "Voigt limits", 1.0, voigt_limits},
        {2, "order-by-order agreement", 120.0, order_by_order_agreement},
        {3, "Fig. 3c saturation", 600.0, saturation},
        {4, "Fig. 3d non-monotonicity", 0.0, band_power_maximum},
        {5, "parameter-extraction roundtrip", 10.0, parameter_roundtrip},
        {6, "derived-quantity regressions", 0.0, derived_quantities},
        {7, "optical-spring symmetries", 0.0, spring_symmetries},
        {8, "Fig. 5 phenomenology", 300.0, spring_phenomenology},
        {9, "signal-processing invariants", 0.0, signal_processing},
        {10, "determinism", 0.0, determinism},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failures = 0;
    std::ostringstream table;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.contains(c.number))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0)
            outcome.check(secs < c.time_limit_s, "runtime " + num(secs, 3) + " s < " + num(c.time_limit_s) + " s");
        for (const auto& note : outcome.notes)
            std::cout << "    criterion " << c.number << ": " << note << "\n";
        const std::string line = "criterion " + std::to_string(c.number) + " " + (outcome.pass ? "PASS" : "FAIL") +
                                 "  " + c.title + "  (" + num(secs, 3) + " s)";
        std::cout << line << "\n" << std::flush;
        table << line << "\n";
        failures += outcome.pass ? 0 : 1;
    }
    std::cout << "\nsummary\n" << table.str() << failures << " criteria failed\n";
    return failures == 0 ? 0 : 1;
}
