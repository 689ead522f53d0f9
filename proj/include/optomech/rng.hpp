#pragma once

#include <cstdint>
#include <random>

namespace optomech {

/// Reproducible random stream keyed by (seed, stream id).
///
/// Algorithm "mt19937_64/splitmix64-key v1": the engine is std::mt19937_64,
/// whose output sequence is fixed by the C++ standard, seeded with
/// splitmix64(seed ^ splitmix64(stream + golden)). Variates are derived here
/// rather than through <random> distributions, which are implementation
/// defined, so streams are bit-identical across standard libraries.
class RandomStream {
public:
    static constexpr const char* algorithm = "mt19937_64/splitmix64-key v1";

    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Exponential with the given mean; mean 0 yields exactly 0.
    double exponential(double mean);
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace optomech
