#include "optomech/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "optomech/constants.hpp"

namespace optomech::io {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// CSV

void CsvTable::add_column(std::string name, std::vector<double> values)
{
    if (!data.empty() && values.size() != data.front().size())
        throw std::invalid_argument("CsvTable: column " + name + " has a different length");
    columns.push_back(std::move(name));
    data.push_back(std::move(values));
}

std::size_t CsvTable::rows() const { return data.empty() ? 0 : data.front().size(); }

std::string CsvTable::str() const
{
    std::string out;
    for (const auto& c : comments)
        out += "# " + c + "\n";
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j > 0)
            out += ',';
        out += columns[j];
    }
    out += '\n';
    for (std::size_t i = 0; i < rows(); ++i) {
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (j > 0)
                out += ',';
            out += format_number(data[j][i]);
        }
        out += '\n';
    }
    return out;
}

CsvTable trace_table(const MotionTrace& trace)
{
    CsvTable t;
    t.comments.push_back("sample_rate_hz=" + format_number(trace.sample_rate));
    t.comments.push_back("seed=" + std::to_string(trace.seed));
    std::vector<double> time(trace.size());
    for (std::size_t i = 0; i < time.size(); ++i)
        time[i] = static_cast<double>(i) / trace.sample_rate;
    t.add_column("t_s", std::move(time));
    for (std::size_t j = 0; j < trace.n_modes(); ++j)
        t.add_column("xi_" + std::to_string(j + 1), trace.xi[j]);
    if (!trace.delta_omega.empty()) {
        std::vector<double> hz(trace.delta_omega.size());
        for (std::size_t i = 0; i < hz.size(); ++i)
            hz[i] = rad_to_hz(trace.delta_omega[i]);
        t.add_column("delta_omega_hz", std::move(hz));
    }
    return t;
}

CsvTable spectrum_table(const Spectrum& spectrum, std::string_view psd_unit)
{
    CsvTable t;
    t.comments.push_back("psd_unit=" + std::string(psd_unit));
    t.comments.push_back("resolution_bw_hz=" + format_number(spectrum.resolution_bw));
    t.comments.push_back("averages=" + std::to_string(spectrum.n_averages));
    t.add_column("freq_hz", spectrum.freqs);
    t.add_column("psd", spectrum.psd);
    return t;
}

std::string spectrogram_csv(const SpringSpectrogram& spectrogram, std::span<const std::string> comments)
{
    std::string out;
    for (const auto& c : comments)
        out += "# " + c + "\n";
    out += "detuning_hz\\freq_hz";
    for (double f : spectrogram.freqs)
        out += "," + format_number(f);
    out += '\n';
    for (std::size_t i = 0; i < spectrogram.detunings.size(); ++i) {
        out += format_number(rad_to_hz(spectrogram.detunings[i]));
        for (double v : spectrogram.psd[i])
            out += "," + format_number(v);
        out += '\n';
    }
    return out;
}

nlohmann::json spectrogram_json(const SpringSpectrogram& spectrogram)
{
    std::vector<double> detunings_hz(spectrogram.detunings.size());
    for (std::size_t i = 0; i < detunings_hz.size(); ++i)
        detunings_hz[i] = rad_to_hz(spectrogram.detunings[i]);
    return {{"detunings_hz", detunings_hz}, {"freqs_hz", spectrogram.freqs}, {"psd", spectrogram.psd}};
}

nlohmann::json fit_json(const FitResult& fit, const nlohmann::json& provenance)
{
    const auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json params = nlohmann::json::object();
    for (std::size_t i = 0; i < fit.names.size(); ++i)
        params[fit.names[i]] = {{"value", number(fit.values[i])}, {"std_error", number(fit.std_errors[i])}};
    return {{"parameters", params},
            {"residual_norm", number(fit.residual_norm)},
            {"gradient_norm", number(fit.gradient_norm)},
            {"converged", fit.converged},
            {"iterations", fit.n_iterations},
            {"provenance", provenance}};
}

// ---------------------------------------------------------------------------
// Binary traces

namespace {

template <class T>
void put(std::string& out, T value)
{
    auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bits.begin(), bits.end());
    out.append(reinterpret_cast<const char*>(bits.data()), bits.size());
}

template <class T>
T get(std::string_view bytes, std::size_t offset)
{
    std::array<unsigned char, sizeof(T)> bits;
    std::memcpy(bits.data(), bytes.data() + offset, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bits.begin(), bits.end());
    return std::bit_cast<T>(bits);
}

constexpr std::uint32_t kHasShift = 1u;

} // namespace

std::string encode_trace(const MotionTrace& trace)
{
    const std::uint64_t n = trace.size();
    for (const auto& xi : trace.xi)
        if (xi.size() != n)
            throw FormatError("encode_trace: modes have different lengths");
    const bool has_shift = !trace.delta_omega.empty();
    if (has_shift && trace.delta_omega.size() != n)
        throw FormatError("encode_trace: cavity shift length differs from the modes");

    std::string out;
    out.reserve(kTraceHeaderSize + 8 * n * (trace.n_modes() + (has_shift ? 1 : 0)));
    out.append(kTraceMagic);
    put<std::uint32_t>(out, kTraceVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(trace.n_modes()));
    put<std::uint64_t>(out, n);
    put<std::uint64_t>(out, trace.seed);
    put<double>(out, trace.sample_rate);
    put<std::uint32_t>(out, has_shift ? kHasShift : 0u);
    put<std::uint32_t>(out, 0u);
    for (const auto& xi : trace.xi)
        for (double v : xi)
            put<double>(out, v);
    if (has_shift)
        for (double v : trace.delta_omega)
            put<double>(out, rad_to_hz(v));
    return out;
}

MotionTrace decode_trace(std::string_view bytes)
{
    if (bytes.size() < kTraceHeaderSize || bytes.substr(0, 8) != kTraceMagic)
        throw FormatError("decode_trace: not an OMNLTRC1 container");
    const auto version = get<std::uint32_t>(bytes, 8);
    if (version != kTraceVersion)
        throw FormatError("decode_trace: unsupported version " + std::to_string(version));
    const auto n_modes = get<std::uint32_t>(bytes, 12);
    const auto n = get<std::uint64_t>(bytes, 16);
    const auto flags = get<std::uint32_t>(bytes, 40);
    const bool has_shift = (flags & kHasShift) != 0;
    const std::uint64_t series = n_modes + (has_shift ? 1u : 0u);
    if (n > (bytes.size() - kTraceHeaderSize) / 8 || bytes.size() != kTraceHeaderSize + 8 * n * series)
        throw FormatError("decode_trace: payload size does not match the header");

    MotionTrace tr;
    tr.seed = get<std::uint64_t>(bytes, 24);
    tr.sample_rate = get<double>(bytes, 32);
    tr.duration = static_cast<double>(n) / tr.sample_rate;
    std::size_t offset = kTraceHeaderSize;
    tr.xi.assign(n_modes, std::vector<double>(n));
    for (auto& xi : tr.xi)
        for (auto& v : xi) {
            v = get<double>(bytes, offset);
            offset += 8;
        }
    if (has_shift) {
        tr.delta_omega.resize(n);
        for (auto& v : tr.delta_omega) {
            v = hz_to_rad(get<double>(bytes, offset));
            offset += 8;
        }
    }
    return tr;
}

void write_trace(const std::filesystem::path& path, const MotionTrace& trace)
{
    write_file_atomic(path, encode_trace(trace));
}

MotionTrace read_trace(const std::filesystem::path& path) { return decode_trace(read_file(path)); }

} // namespace optomech::io
