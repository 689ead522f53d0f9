#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "context.hpp"
#include "optomech/params.hpp"

namespace optomech::cli {

struct Scenario {
    std::string name;
    std::string figure;
    std::string description;  // block schema and outputs
    void (*run)(Block& block, const SystemParams& params, Context& ctx);
};

const std::vector<Scenario>& scenario_table();

// Monte-Carlo scenarios (scenarios_mc.cpp).
void run_spectrum(Block& block, const SystemParams& params, Context& ctx);
void run_detuning_sweep(Block& block, const SystemParams& params, Context& ctx);
void run_harmonic_ratios(Block& block, const SystemParams& params, Context& ctx);
void run_band_power_curve(Block& block, const SystemParams& params, Context& ctx);
void run_quadrature_select(Block& block, const SystemParams& params, Context& ctx);

// Analytic and semi-analytic scenarios (scenarios_model.cpp).
void run_temperature_sweep(Block& block, const SystemParams& params, Context& ctx);
void run_spring_spectrogram(Block& block, const SystemParams& params, Context& ctx);
void run_quadratic_sensitivity(Block& block, const SystemParams& params, Context& ctx);

// nullptr if unknown.
const Scenario* find_scenario(std::string_view name);

} // namespace optomech::cli
