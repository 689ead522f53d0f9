#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "optomech/backaction.hpp"
#include "optomech/fitting.hpp"
#include "optomech/motion.hpp"
#include "optomech/spectral.hpp"

namespace optomech::io {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal form that reads back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_number(double v);

/// Writes `content` to `path` via a sibling temporary file and a rename, so readers never
/// see a partial file. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Column-major table rendered as CSV with '#'-prefixed comment lines first.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[column][row]

    void add_column(std::string name, std::vector<double> values);
    std::size_t rows() const;
    std::string str() const;
};

/// Columns t_s, xi_1 .. xi_n and, when present, delta_omega_hz (cavity shift / 2 pi).
CsvTable trace_table(const MotionTrace& trace);

/// Columns freq_hz, psd; resolution bandwidth and averages go into the comments.
CsvTable spectrum_table(const Spectrum& spectrum, std::string_view psd_unit);

/// First line "detuning_hz\freq_hz,f_0,f_1,...", then one line per detuning: "d_i,psd_i0,psd_i1,...".
std::string spectrogram_csv(const SpringSpectrogram& spectrogram, std::span<const std::string> comments);

/// {"detunings_hz": [...], "freqs_hz": [...], "psd": [[...], ...]}
nlohmann::json spectrogram_json(const SpringSpectrogram& spectrogram);

/// {"parameters": {name: {"value", "std_error"}}, "residual_norm", "gradient_norm", "converged",
///  "iterations", "provenance"}. Non-finite errors are written as null.
nlohmann::json fit_json(const FitResult& fit, const nlohmann::json& provenance);

/// Binary trace container, little endian:
///   0  char[8] "OMNLTRC1"
///   8  u32 version (1)        12 u32 n_modes
///  16  u64 n_samples          24 u64 seed
///  32  f64 sample_rate (Hz)   40 u32 flags (bit 0: cavity shift present)   44 u32 reserved (0)
///  48  f64 xi[n_modes][n_samples], then f64 delta_omega_hz[n_samples] if flagged.
inline constexpr std::string_view kTraceMagic = "OMNLTRC1";
inline constexpr std::uint32_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderSize = 48;

std::string encode_trace(const MotionTrace& trace);
MotionTrace decode_trace(std::string_view bytes);

void write_trace(const std::filesystem::path& path, const MotionTrace& trace);
MotionTrace read_trace(const std::filesystem::path& path);

} // namespace optomech::io
