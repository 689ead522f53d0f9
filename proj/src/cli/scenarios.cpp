#include "scenarios.hpp"

namespace optomech::cli {

namespace {

// Keys shared by the Monte-Carlo scenarios.
constexpr const char* kMotionKeys = R"(  duration_s         number   trace length (exclusive with damping_times)
  damping_times      number   trace length in units of 1/Gamma of the slowest mode (default 200)
  sample_rate_hz     number   default 16 x the highest mechanical frequency
  gamma_override_hz  number   replaces every mode's damping rate (reduced-Q surrogate)
  mean_dwell_s       number   jump-process dwell time (default 1/Gamma)
  bins_per_fwhm      integer  PSD bins across one line width (default 4)
)";

constexpr const char* kHomodyneKeys = R"(  homodyne           object   p_in_w (10e-9), p_lo_w (1e-3), delta_bar_hz (0), phase_averaged,
                              theta_rad (0), n_theta (8), gain (1), shot_noise (false), noise_seed
)";

std::string text(const char* head, const char* body, bool monte_carlo)
{
    std::string s = head;
    s += "\nBlock keys:\n";
    s += body;
    if (monte_carlo) {
        s += kMotionKeys;
        s += kHomodyneKeys;
    }
    return s;
}

std::vector<Scenario> build_table()
{
    std::vector<Scenario> t;
    t.push_back({"spectrum", "Fig. 3a",
                 text("spectrum: homodyne PSD of a thermal trace with every mixing product of the two modes\n"
                      "labelled and its line power fitted (Fig. 3a).\n"
                      "Outputs: spectrum.csv (freq_hz, psd in W^2/Hz), peaks.csv (freq_hz, order, group, j, k,\n"
                      "line_power_w2, fitted), optionally trace.csv or trace.omnl.",
                      R"(  seed               integer  required
  temperature_k      number   required
  max_order          integer  highest mixing order reported (default 10)
  trace_output       string   none | csv | binary (default none)
)",
                      true),
                 run_spectrum});
    t.push_back({"detuning_sweep", "Fig. 2b",
                 text("detuning_sweep: fundamental band power versus mean detuning at each temperature, fitted\n"
                      "with a squared Voigt profile whose width is compared to voigt_fwhm(kappa, rms) (Fig. 2b).\n"
                      "Axes: detuning (Hz) against band power (W^2).\n"
                      "Outputs: detuning_sweep.csv, voigt_fits.csv, voigt_fits.json.",
                      R"(  seed               integer  required; trace i uses splitmix64(seed + i)
  temperatures_k     grid     required; list or {start, stop, count}
  detunings_hz       grid     required, at least 7 points (homodyne.delta_bar_hz is not allowed)
)",
                      true),
                 run_detuning_sweep});
    t.push_back({"temperature_sweep", "Fig. 2d",
                 text("temperature_sweep: synthetic linewidth-versus-temperature data from the Voigt width formula\n"
                      "with multiplicative Gaussian noise, fitted back for kappa and every g0 (Fig. 2d).\n"
                      "Axes: temperature (K) against linewidth (Hz).\n"
                      "Outputs: linewidths.csv, linewidth_fit.json (fit plus input comparison).",
                      R"(  seed               integer  required
  temperatures_k     grid     required, positive, at least n_modes + 2 points
  relative_noise     number   standard deviation of the multiplicative noise (default 0.03)
)",
                      false),
                 run_temperature_sweep});
    t.push_back({"harmonic_ratios", "Fig. 3c",
                 text("harmonic_ratios: second-to-first harmonic power ratio versus rms(delta omega)/kappa from\n"
                      "simulated traces, next to the order-by-order value (2 rms / kappa)^2 (Fig. 3c).\n"
                      "Axes: rms/kappa (log) against the ratio (log). The sample rate must resolve the\n"
                      "harmonics that strong fluctuations generate, or they alias onto the lines.\n"
                      "Outputs: harmonic_ratios.csv, harmonic_ratios_realizations.csv.",
                      R"(  seed               integer  required; point i uses splitmix64(seed + i)
  rms_over_kappa     grid     default [0.03, 0.1, 0.3, 1, 3.4]
  realizations       integer  independent traces per point (default 1)
)",
                      true),
                 run_harmonic_ratios});
    t.push_back({"band_power_curve", "Fig. 3d",
                 text("band_power_curve: simulated harmonic group powers versus rms(delta omega)/kappa together\n"
                      "with the order-by-order predictions, which hold only for rms/kappa <= 0.1 (Fig. 3d).\n"
                      "Axes: rms/kappa (log) against band power (W^2, log).\n"
                      "Outputs: band_power_curve.csv.",
                      R"(  seed               integer  required; point i uses splitmix64(seed + i)
  rms_over_kappa     grid     default [0.03, 0.1, 0.3, 1, 3.4]
  realizations       integer  independent traces per point (default 1)
  max_group          integer  highest harmonic group (default 3)
)",
                      true),
                 run_band_power_curve});
    t.push_back({"quadrature_select", "Fig. 4a",
                 text("quadrature_select: first and second harmonic power versus local-oscillator phase for one\n"
                      "trace, each fitted with a sinusoid; the peaks are a quarter turn of theta apart (Fig. 4a).\n"
                      "Axes: theta (rad) against band power (W^2).\n"
                      "Outputs: quadrature.csv, quadrature_fits.json.",
                      R"(  seed               integer  required
  temperature_k      number   required
  thetas_rad         grid     default 25 points on [0, 2 pi]
  (homodyne.theta_rad, phase_averaged and n_theta are not allowed)
)",
                      true),
                 run_quadrature_select});
    t.push_back({"spring_spectrogram", "Fig. 5",
                 text("spring_spectrogram: optical-spring spectrogram of one mode averaged over thermal\n"
                      "amplitudes (Fig. 5). Axes: laser detuning (Hz, rows) against mechanical frequency (Hz,\n"
                      "columns), colour = PSD. Positive detuning shifts the resonance up.\n"
                      "The measured mechanical linewidth is not derivable and must be given as measured_fwhm_hz.\n"
                      "Outputs: spectrogram.csv, spectrogram.json, spring_rows.csv, optionally spring_fit.json.",
                      R"(  seed               integer  required; row i uses stream i
  temperature_k      number   required
  measured_fwhm_hz   number   required, linewidth of every averaged Lorentzian
  p_in_w | n_c_max   number   exactly one; p_in_w gives n_c_max = 4 eta P_in / (hbar omega_c kappa)
  detunings_hz       grid     required
  mode_index         integer  default 0
  half_span_hz       number   frequency axis half width (default from the linearized shifts)
  n_freqs            integer  default max(1001, 4 points per measured_fwhm)
  amplitude_samples  integer  default 10000
  quadrature_points  integer  default 64
  reference_max      number   rescale so the row nearest zero detuning peaks here
  fit_eta            bool     fit the coupling efficiency to the peak positions (needs p_in_w)
  fit_offset         bool     fit a frequency offset along with eta (default true)
)",
                      false),
                 run_spring_spectrogram});
    t.push_back({"quadratic_sensitivity", "phonon detection limit",
                 text("quadratic_sensitivity: shot-noise-limited SNR of the 2 Omega_m peak versus temperature,\n"
                      "the minimum detectable occupancy, C0 and g0^2/kappa of every mode.\n"
                      "Outputs: sensitivity.csv, sensitivity.json.",
                      R"(  temperatures_k     grid     default [3, 10, 30, 100, 295]
  p_in_w             number   default 12.8e-9
  eta                number   default params.eta
  improvement        object   g0_scale, kappa_scale, eta for a modified device
)",
                      false),
                 run_quadratic_sensitivity});
    return t;
}

} // namespace

const std::vector<Scenario>& scenario_table()
{
    static const std::vector<Scenario> table = build_table();
    return table;
}

const Scenario* find_scenario(std::string_view name)
{
    for (const auto& s : scenario_table())
        if (s.name == name)
            return &s;
    return nullptr;
}

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : scenario_table())
            v.push_back(s.name);
        return v;
    }();
    return names;
}

std::string describe(std::string_view scenario)
{
    const auto* s = find_scenario(scenario);
    if (s == nullptr)
        throw FieldError("scenario", "unknown scenario '" + std::string(scenario) + "'");
    return s->description + "\nConfig: {\"scenario\": \"" + s->name + "\", \"params\": {...}, \"" + s->name +
           "\": {block}}\n";
}

} // namespace optomech::cli
