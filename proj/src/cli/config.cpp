#include "config.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "optomech/constants.hpp"

namespace optomech::cli {

Block::Block(const nlohmann::json& doc, std::string path) : doc_(&doc), path_(std::move(path))
{
    if (!doc.is_object())
        throw FieldError(path_, "must be an object");
}

FieldError Block::error(const std::string& key, const std::string& what) const
{
    return FieldError(path_.empty() ? key : path_ + "." + key, what);
}

bool Block::has(const std::string& key) const { return doc_->contains(key); }

const nlohmann::json& Block::at(const std::string& key)
{
    used_.insert(key);
    if (!doc_->contains(key))
        throw error(key, "missing required field");
    return doc_->at(key);
}

double Block::number(const std::string& key)
{
    const auto& v = at(key);
    if (!v.is_number())
        throw error(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw error(key, "must be finite");
    return x;
}

double Block::number(const std::string& key, double fallback) { return has(key) ? number(key) : (used_.insert(key), fallback); }

std::optional<double> Block::optional_number(const std::string& key)
{
    used_.insert(key);
    if (!has(key) || doc_->at(key).is_null())
        return std::nullopt;
    return number(key);
}

double Block::positive(const std::string& key)
{
    const double x = number(key);
    if (!(x > 0.0))
        throw error(key, "must be positive");
    return x;
}

double Block::positive(const std::string& key, double fallback) { return has(key) ? positive(key) : (used_.insert(key), fallback); }

double Block::non_negative(const std::string& key)
{
    const double x = number(key);
    if (!(x >= 0.0))
        throw error(key, "must be non-negative");
    return x;
}

double Block::non_negative(const std::string& key, double fallback)
{
    return has(key) ? non_negative(key) : (used_.insert(key), fallback);
}

int Block::integer(const std::string& key, int fallback, int min_value)
{
    used_.insert(key);
    if (!has(key))
        return fallback;
    const auto& v = doc_->at(key);
    if (!v.is_number_integer())
        throw error(key, "must be an integer");
    const auto x = v.get<long long>();
    if (x < min_value || x > std::numeric_limits<int>::max())
        throw error(key, "must be at least " + std::to_string(min_value));
    return static_cast<int>(x);
}

std::uint64_t Block::seed(const std::string& key)
{
    const auto& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw error(key, "must be an explicit non-negative integer seed");
    return v.get<std::uint64_t>();
}

bool Block::flag(const std::string& key, bool fallback)
{
    used_.insert(key);
    if (!has(key))
        return fallback;
    const auto& v = doc_->at(key);
    if (!v.is_boolean())
        throw error(key, "must be true or false");
    return v.get<bool>();
}

std::string Block::text(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed)
{
    used_.insert(key);
    if (!has(key))
        return fallback;
    const auto& v = doc_->at(key);
    if (!v.is_string() || !allowed.contains(v.get<std::string>())) {
        std::string options;
        for (const auto& a : allowed)
            options += (options.empty() ? "" : ", ") + a;
        throw error(key, "must be one of: " + options);
    }
    return v.get<std::string>();
}

std::vector<double> Block::grid(const std::string& key)
{
    const auto& v = at(key);
    std::vector<double> out;
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
                throw error(key + "[" + std::to_string(i) + "]", "must be a finite number");
            out.push_back(v[i].get<double>());
        }
    } else if (v.is_object()) {
        Block g(v, path_.empty() ? key : path_ + "." + key);
        const double start = g.number("start");
        const double stop = g.number("stop");
        const int count = g.integer("count", 0, 1);
        if (count == 0)
            throw g.error("count", "missing required field");
        g.finish();
        if (count == 1 && start != stop)
            throw g.error("count", "a single point needs start == stop");
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    } else {
        throw error(key, "must be a list of numbers or {start, stop, count}");
    }
    if (out.empty())
        throw error(key, "must not be empty");
    return out;
}

std::vector<double> Block::grid(const std::string& key, std::vector<double> fallback)
{
    if (!has(key)) {
        used_.insert(key);
        return fallback;
    }
    return grid(key);
}

Block Block::child(const std::string& key) { return Block(at(key), path_.empty() ? key : path_ + "." + key); }

std::optional<Block> Block::optional_child(const std::string& key)
{
    used_.insert(key);
    if (!has(key))
        return std::nullopt;
    return child(key);
}

void Block::finish() const
{
    for (const auto& [key, value] : doc_->items())
        if (!used_.contains(key))
            throw error(key, "unknown field");
}

// ---------------------------------------------------------------------------

std::vector<MechanicalMode> MotionSettings::modes(const SystemParams& params) const
{
    auto out = params.modes;
    if (gamma_override) {
        for (auto& m : out) {
            m.gamma = *gamma_override;
            if (!(m.gamma < m.omega_m))
                throw FieldError(path + ".gamma_override_hz", "must be below every mechanical frequency");
        }
    }
    return out;
}

double MotionSettings::duration_for(const std::vector<MechanicalMode>& modes) const
{
    if (duration)
        return *duration;
    double slowest = std::numeric_limits<double>::infinity();
    for (const auto& m : modes)
        slowest = std::min(slowest, m.gamma);
    return damping_times / slowest;
}

double MotionSettings::rate_for(const std::vector<MechanicalMode>& modes) const
{
    return sample_rate ? *sample_rate : default_sample_rate(modes);
}

double MotionSettings::line_fwhm(const std::vector<MechanicalMode>& modes) const
{
    if (mean_dwell)
        return 1.0 / (std::numbers::pi * *mean_dwell);
    double widest = 0.0;
    for (const auto& m : modes)
        widest = std::max(widest, m.gamma / std::numbers::pi);
    return widest;
}

MotionSettings read_motion(Block& block, bool needs_temperature)
{
    MotionSettings s;
    s.path = block.path();
    if (needs_temperature)
        s.temperature = block.non_negative("temperature_k");
    if (block.has("duration_s")) {
        s.duration = block.positive("duration_s");
        if (block.has("damping_times"))
            throw block.error("damping_times", "give either duration_s or damping_times, not both");
    } else {
        s.damping_times = block.positive("damping_times", 200.0);
    }
    if (auto fs = block.optional_number("sample_rate_hz")) {
        if (!(*fs > 0.0))
            throw block.error("sample_rate_hz", "must be positive");
        s.sample_rate = *fs;
    }
    if (auto g = block.optional_number("gamma_override_hz")) {
        if (!(*g > 0.0))
            throw block.error("gamma_override_hz", "must be positive");
        s.gamma_override = hz_to_rad(*g);
    }
    if (auto d = block.optional_number("mean_dwell_s")) {
        if (!(*d > 0.0))
            throw block.error("mean_dwell_s", "must be positive");
        s.mean_dwell = *d;
    }
    return s;
}

HomodyneConfig read_homodyne(Block& block, bool default_averaged)
{
    HomodyneConfig h;
    h.p_in = block.non_negative("p_in_w", 10e-9);
    h.p_lo = block.non_negative("p_lo_w", 1e-3);
    h.delta_bar = hz_to_rad(block.number("delta_bar_hz", 0.0));
    h.phase_averaged = block.flag("phase_averaged", default_averaged);
    h.theta = block.number("theta_rad", 0.0);
    h.n_theta = block.integer("n_theta", 8, 1);
    h.gain = block.number("gain", 1.0);
    h.shot_noise = block.flag("shot_noise", false);
    if (h.shot_noise)
        h.noise_seed = block.seed("noise_seed");
    else
        block.optional_number("noise_seed");
    try {
        h.validate();
    } catch (const FieldError& e) {
        throw block.error(e.field(), e.detail());
    }
    return h;
}

} // namespace optomech::cli
