#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include "optomech/cli.hpp"
#include "optomech/parallel.hpp"
#include "optomech/params.hpp"
#include "optomech/rng.hpp"
#include "scenarios.hpp"

namespace optomech::cli {

namespace {

using nlohmann::json;

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

unsigned resolve_threads(const RunOptions& options)
{
    if (options.threads)
        return *options.threads;
    const char* env = std::getenv("OPTOMECH_NL_THREADS");
    if (env == nullptr || *env == '\0')
        return 0;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 0 || n > 4096)
        throw FieldError("OPTOMECH_NL_THREADS", "must be a non-negative integer");
    return static_cast<unsigned>(n);
}

// Restores the process-wide worker count when a run ends.
class ThreadScope {
public:
    explicit ThreadScope(unsigned n) { set_default_threads(n); }
    ~ThreadScope() { set_default_threads(0); }
    ThreadScope(const ThreadScope&) = delete;
    ThreadScope& operator=(const ThreadScope&) = delete;
};

json library_versions()
{
    return {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"openssl", OPENSSL_VERSION_TEXT}};
}

std::string line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

RunResult run_config(const json& config, const RunOptions& options, std::string_view config_text)
{
    const auto started = std::chrono::steady_clock::now();
    const std::string digest = sha256_hex(config_text.empty() ? std::string_view(config.dump()) : config_text);
    if (!config.is_object())
        throw FieldError("config", "must be a JSON object");
    if (!config.contains("scenario") || !config.at("scenario").is_string())
        throw FieldError("scenario", "missing required field (one of the list-scenarios names)");
    const std::string name = config.at("scenario").get<std::string>();
    const auto* scenario = find_scenario(name);
    if (scenario == nullptr)
        throw FieldError("scenario", "unknown scenario '" + name + "'");

    json doc = config;
    if (options.seed_override && doc.contains(name) && doc[name].is_object())
        doc[name]["seed"] = *options.seed_override;

    Block top(doc, "");
    SystemParams params;
    if (!doc.contains("params"))
        throw FieldError("params", "missing required field");
    try {
        params = params_from_json(doc.at("params"));
    } catch (const FieldError& e) {
        throw e.field().empty() ? FieldError("params", e.detail()) : e.prefixed("params.");
    }
    top.text("scenario", name, {name});
    top.optional_child("params");
    auto block = top.child(name);
    top.finish();

    const unsigned threads = resolve_threads(options);
    ThreadScope scope(threads);
    Context ctx(name, digest, options.progress);
    ctx.progress("starting with " + std::to_string(default_threads()) + " worker thread(s)");
    scenario->run(block, params, ctx);

    RunResult result;
    json outputs = json::array();
    for (const auto& f : ctx.files()) {
        const auto path = options.out_dir / f.name;
        io::write_file_atomic(path, f.content);
        result.outputs.push_back(path);
        outputs.push_back({{"file", f.name}, {"sha256", sha256_hex(f.content)}, {"bytes", f.content.size()}});
    }

    std::vector<std::string> warnings;
    std::set<std::string> seen;
    for (const auto& w : ctx.diag.warnings)
        if (seen.insert(w).second)
            warnings.push_back(w);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"scenario", name},
                     {"figure", scenario->figure},
                     {"config_sha256", digest},
                     {"seeds", ctx.seeds()},
                     {"seed_override", options.seed_override ? json(*options.seed_override) : json(nullptr)},
                     {"rng_algorithm", RandomStream::algorithm},
                     {"point_seed_rule", "splitmix64(seed + point index)"},
                     {"threads", default_threads()},
                     {"libraries", library_versions()},
                     {"params", to_json(params)},
                     {"outputs", outputs},
                     {"warnings", warnings},
                     {"wall_time_s", wall},
                     {"timestamp", utc_timestamp()}};
    const auto manifest_path = options.out_dir / "manifest.json";
    io::write_file_atomic(manifest_path, manifest.dump(2) + "\n");
    result.outputs.push_back(manifest_path);

    json names = json::array();
    for (const auto& f : ctx.files())
        names.push_back(f.name);
    result.summary = {{"scenario", name},
                      {"config_sha256", digest},
                      {"outputs", names},
                      {"warnings", warnings.size()},
                      {"result", ctx.summary}};
    result.manifest = std::move(manifest);
    return result;
}

RunResult run_file(const std::filesystem::path& path, const RunOptions& options)
{
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception& e) {
        throw FieldError("config", "cannot read " + path.string() + ": " + e.what());
    }
    json config;
    try {
        config = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FieldError("config", "parse error at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + " of " +
                                       path.string());
    }
    return run_config(config, options, text);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Nonlinear optomechanical transduction simulator", std::string(kToolName)};
    app.set_version_flag("--version", std::string(kToolName) + " " + std::string(kToolVersion));
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the scenario described by a JSON config");
    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 0;
    std::uint64_t seed_override = 0;
    bool quiet = false;
    run->add_option("config", config_path, "Config file (JSON)")->required();
    auto* threads_opt = run->add_option("--threads", threads, "Worker threads (default: OPTOMECH_NL_THREADS, else all cores)");
    run->add_option("--out", out_dir, "Output directory (default: current directory)");
    auto* seed_opt = run->add_option("--seed-override", seed_override, "Replace the scenario block seed");
    run->add_flag("--quiet", quiet, "No progress lines on standard error");

    auto* desc = app.add_subcommand("describe", "Print the config schema and figure of a scenario");
    std::string scenario;
    desc->add_option("scenario", scenario, "Scenario name")->required();

    auto* list = app.add_subcommand("list-scenarios", "Print the scenario names, one per line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (list->parsed()) {
            for (const auto& n : scenario_names())
                out << n << "\n";
            return kExitOk;
        }
        if (desc->parsed()) {
            out << describe(scenario);
            return kExitOk;
        }
        RunOptions options;
        options.out_dir = out_dir;
        if (threads_opt->count() > 0)
            options.threads = threads;
        if (seed_opt->count() > 0)
            options.seed_override = seed_override;
        options.progress = quiet ? nullptr : &err;
        const auto result = run_file(config_path, options);
        out << result.summary.dump() << "\n";
        return kExitOk;
    } catch (const FieldError& e) {
        err << kToolName << ": config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ConvergenceError& e) {
        err << kToolName << ": non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::invalid_argument& e) {
        err << kToolName << ": invalid input: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const json::exception& e) {
        err << kToolName << ": config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << kToolName << ": error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace optomech::cli
