#include "optomech/motion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "optomech/constants.hpp"

namespace optomech {

double JumpSegment::amplitude() const { return 2.0 * std::sqrt(energy); }

double draw_thermal_energy(RandomStream& rng, double mean_occupancy)
{
    return rng.exponential(mean_occupancy);
}

ThermalJumpProcess::ThermalJumpProcess(double mean_occupancy, double mean_dwell, RandomStream rng)
    : mean_occupancy_(mean_occupancy), mean_dwell_(mean_dwell), rng_(rng)
{
    if (!(mean_occupancy >= 0.0))
        throw std::invalid_argument("ThermalJumpProcess: occupancy must be non-negative");
    if (!(mean_dwell > 0.0))
        throw FieldError("mean_dwell", "must be positive");
}

JumpSegment ThermalJumpProcess::next()
{
    JumpSegment seg;
    seg.start = clock_;
    seg.dwell = rng_.exponential(mean_dwell_);
    seg.energy = draw_thermal_energy(rng_, mean_occupancy_);
    seg.phase = kTwoPi * rng_.uniform();
    clock_ += seg.dwell;
    return seg;
}

double default_sample_rate(std::span<const MechanicalMode> modes)
{
    double f_max = 0.0;
    for (const auto& m : modes)
        f_max = std::max(f_max, rad_to_hz(m.omega_m));
    return 16.0 * f_max;
}

namespace {

std::size_t sample_count(double duration, double sample_rate)
{
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw FieldError("duration", "must be positive");
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw FieldError("sample_rate", "must be positive");
    const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
    if (n == 0)
        throw FieldError("duration", "shorter than one sample");
    return n;
}

void check_nyquist(double sample_rate, double f_max)
{
    if (!(sample_rate > 2.0 * f_max))
        throw FieldError("sample_rate", "must exceed twice the highest mechanical frequency");
}

} // namespace

MotionTrace generate_thermal_trace(std::span<const MechanicalMode> modes, double temperature, double duration,
                                   double sample_rate, const JumpProcessConfig& config, Diagnostics* diag)
{
    if (modes.empty())
        throw FieldError("modes", "at least one mode is required");
    if (!(temperature >= 0.0))
        throw FieldError("temperature", "must be non-negative");
    if (config.mean_dwell && !(*config.mean_dwell > 0.0))
        throw FieldError("mean_dwell", "must be positive");

    double f_max = 0.0;
    double slowest_gamma = modes.front().gamma;
    for (const auto& m : modes) {
        m.validate();
        f_max = std::max(f_max, rad_to_hz(m.omega_m));
        slowest_gamma = std::min(slowest_gamma, m.gamma);
    }
    check_nyquist(sample_rate, f_max);
    const std::size_t n = sample_count(duration, sample_rate);
    if (duration < 10.0 / slowest_gamma) {
        std::ostringstream msg;
        msg << "thermal trace spans only " << duration * slowest_gamma
            << " damping times; ensemble averages will be noisy";
        warn(diag, msg.str());
    }

    MotionTrace trace;
    trace.sample_rate = sample_rate;
    trace.seed = config.rng_seed;
    trace.duration = duration;
    trace.xi.resize(modes.size());

    for (std::size_t j = 0; j < modes.size(); ++j) {
        const auto& mode = modes[j];
        const double dwell = config.mean_dwell.value_or(1.0 / mode.gamma);
        ThermalJumpProcess process(thermal_occupancy(temperature, mode), dwell,
                                   RandomStream(config.rng_seed, j));
        auto& xi = trace.xi[j];
        xi.resize(n);
        JumpSegment seg = process.next();
        double amplitude = seg.amplitude();
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate;
            while (t >= seg.start + seg.dwell) {
                seg = process.next();
                amplitude = seg.amplitude();
            }
            xi[i] = amplitude * std::cos(mode.omega_m * t + seg.phase);
        }
    }
    trace.delta_omega = combined_cavity_shift(trace, modes);
    return trace;
}

MotionTrace harmonic_trace(double amplitude, double omega, double phase, double duration, double sample_rate)
{
    if (!std::isfinite(amplitude) || !std::isfinite(omega) || !std::isfinite(phase))
        throw std::invalid_argument("harmonic_trace: non-finite argument");
    check_nyquist(sample_rate, rad_to_hz(std::abs(omega)));
    const std::size_t n = sample_count(duration, sample_rate);

    MotionTrace trace;
    trace.sample_rate = sample_rate;
    trace.duration = duration;
    trace.xi.assign(1, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        trace.xi[0][i] = amplitude * std::cos(omega * t + phase);
    }
    return trace;
}

std::vector<double> combined_cavity_shift(const MotionTrace& trace, std::span<const MechanicalMode> modes)
{
    if (trace.xi.size() != modes.size())
        throw FieldError("modes", "trace has " + std::to_string(trace.xi.size()) + " mode series but "
                                      + std::to_string(modes.size()) + " modes were given");
    const std::size_t n = trace.size();
    std::vector<double> shift(n, 0.0);
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const double g0 = modes[j].g0;
        const auto& xi = trace.xi[j];
        for (std::size_t i = 0; i < n; ++i)
            shift[i] += g0 * xi[i];
    }
    return shift;
}

} // namespace optomech
