#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "optomech/errors.hpp"
#include "optomech/homodyne.hpp"
#include "optomech/motion.hpp"
#include "optomech/params.hpp"

namespace optomech::cli {

// Typed access to one JSON object with dotted error paths and unknown-key rejection.
class Block {
public:
    Block(const nlohmann::json& doc, std::string path);

    const std::string& path() const { return path_; }
    bool has(const std::string& key) const;

    double number(const std::string& key);
    double number(const std::string& key, double fallback);
    std::optional<double> optional_number(const std::string& key);
    double positive(const std::string& key);
    double positive(const std::string& key, double fallback);
    double non_negative(const std::string& key);
    double non_negative(const std::string& key, double fallback);
    int integer(const std::string& key, int fallback, int min_value);
    std::uint64_t seed(const std::string& key);
    bool flag(const std::string& key, bool fallback);
    std::string text(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed);

    /// Either a list of numbers or {"start", "stop", "count"} (inclusive, uniform).
    std::vector<double> grid(const std::string& key);
    std::vector<double> grid(const std::string& key, std::vector<double> fallback);

    Block child(const std::string& key);
    std::optional<Block> optional_child(const std::string& key);

    /// Rejects keys that were never read.
    void finish() const;

    FieldError error(const std::string& key, const std::string& what) const;

private:
    const nlohmann::json* doc_;
    std::string path_;
    mutable std::set<std::string> used_;

    const nlohmann::json& at(const std::string& key);
};

// Thermal-motion settings shared by the Monte-Carlo scenarios.
struct MotionSettings {
    double temperature = 0.0;             // K
    std::optional<double> duration;       // s
    double damping_times = 0.0;           // used when duration is unset
    std::optional<double> sample_rate;    // Hz
    std::optional<double> gamma_override; // rad/s, replaces every mode's damping
    std::optional<double> mean_dwell;     // s
    std::string path;                     // config block, for error messages

    // Modes with the damping override applied.
    std::vector<MechanicalMode> modes(const SystemParams& params) const;
    double duration_for(const std::vector<MechanicalMode>& modes) const;
    double rate_for(const std::vector<MechanicalMode>& modes) const;
    // Jump-process line FWHM in Hz (1 / (pi * dwell)), the widest over modes.
    double line_fwhm(const std::vector<MechanicalMode>& modes) const;
};

MotionSettings read_motion(Block& block, bool needs_temperature);

HomodyneConfig read_homodyne(Block& block, bool default_averaged);

} // namespace optomech::cli
