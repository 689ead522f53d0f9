#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "optomech/errors.hpp"
#include "optomech/params.hpp"
#include "optomech/rng.hpp"

namespace optomech {

/// Uniformly sampled motion of one or more modes.
///
/// xi[j][n] is the displacement of mode j in units of its x_zpf at t = n / sample_rate;
/// delta_omega[n] is the resulting cavity frequency shift in rad/s (empty until
/// computed with combined_cavity_shift for traces not produced by the thermal generator).
struct MotionTrace {
    double sample_rate = 0.0;  // Hz
    std::vector<std::vector<double>> xi;
    std::vector<double> delta_omega;
    std::uint64_t seed = 0;
    double duration = 0.0;  // s

    std::size_t n_modes() const { return xi.size(); }
    std::size_t size() const { return xi.empty() ? delta_omega.size() : xi.front().size(); }
};

struct JumpProcessConfig {
    /// Mean time between amplitude/phase jumps in s; 1/Gamma of each mode when unset.
    std::optional<double> mean_dwell;
    std::uint64_t rng_seed = 0;
};

/// One constant-amplitude stretch of the jump process.
struct JumpSegment {
    double start = 0.0;   // s
    double dwell = 0.0;   // s
    double energy = 0.0;  // A^2 / 4 in quanta
    double phase = 0.0;   // rad, uniform on [0, 2 pi)

    double amplitude() const;  // A = 2 sqrt(E), in x_zpf units
};

/// Thermal energy draw shared by every module that samples "a thermal amplitude":
/// E ~ Exponential(mean nth), so <xi^2> = <A^2>/2 = 2 nth.
double draw_thermal_energy(RandomStream& rng, double mean_occupancy);

/// Sequence of jump segments for a single mode.
class ThermalJumpProcess {
public:
    ThermalJumpProcess(double mean_occupancy, double mean_dwell, RandomStream rng);

    JumpSegment next();

private:
    double mean_occupancy_;
    double mean_dwell_;
    double clock_ = 0.0;
    RandomStream rng_;
};

/// 16 x the highest mechanical frequency, keeping the 10th mixing order below Nyquist.
double default_sample_rate(std::span<const MechanicalMode> modes);

/// Piecewise-harmonic thermal motion xi_j(t) = A cos(Omega_j t + phi), with (A, phi)
/// redrawn at exponentially distributed epochs. Mode j uses RNG stream (seed, j).
MotionTrace generate_thermal_trace(std::span<const MechanicalMode> modes, double temperature, double duration,
                                   double sample_rate, const JumpProcessConfig& config,
                                   Diagnostics* diag = nullptr);

/// Deterministic single-mode trace xi(t) = amplitude cos(omega t + phase).
MotionTrace harmonic_trace(double amplitude, double omega, double phase, double duration, double sample_rate);

/// Elementwise sum_j g0_j xi_j(t), in rad/s.
std::vector<double> combined_cavity_shift(const MotionTrace& trace, std::span<const MechanicalMode> modes);

} // namespace optomech
