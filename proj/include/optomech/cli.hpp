#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace optomech::cli {

inline constexpr std::string_view kToolName = "optomech-nl";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,         // I/O or other runtime failure
    kExitConfigError = 2,     // unreadable, malformed or invalid configuration
    kExitNonConvergence = 3,  // a fit or quadrature did not converge
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed_override;
    std::ostream* progress = nullptr;  // progress lines; nullptr silences them
};

struct RunResult {
    std::vector<std::filesystem::path> outputs;  // data files, manifest last
    nlohmann::json summary;                      // machine-readable result of the scenario
    nlohmann::json manifest;
};

/// The eight scenario names, in a fixed order.
const std::vector<std::string>& scenario_names();

/// Human-readable schema and purpose of a scenario. Throws FieldError("scenario") if unknown.
std::string describe(std::string_view scenario);

/// Runs one configuration document. `config_text` is the exact file content and feeds the
/// digest; when empty the digest is taken over the canonical dump of `config`.
RunResult run_config(const nlohmann::json& config, const RunOptions& options, std::string_view config_text = {});

/// Reads, parses and runs a configuration file. Parse errors are FieldError with the line
/// and column in the message.
RunResult run_file(const std::filesystem::path& path, const RunOptions& options);

/// Hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Full command-line entry point: run / describe / list-scenarios. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace optomech::cli
