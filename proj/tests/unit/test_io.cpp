#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>

#include "optomech/constants.hpp"
#include "optomech/io.hpp"
#include "optomech/rng.hpp"

using namespace optomech;

namespace {

std::filesystem::path scratch_dir(const char* name)
{
    auto dir = std::filesystem::temp_directory_path() / "optomech_io_tests" / name;
    std::filesystem::remove_all(dir);
    return dir;
}

MotionTrace small_trace(bool with_shift)
{
    MotionTrace tr;
    tr.sample_rate = 1e6;
    tr.seed = 0xDEADBEEFCAFEULL;
    tr.xi = {{0.5, -1.25, 3.0}, {1e-300, -0.0, 7.0e12}};
    if (with_shift)
        tr.delta_omega = {hz_to_rad(1.0), hz_to_rad(-2.5e9), 0.0};
    tr.duration = 3e-6;
    return tr;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("numbers round-trip through their shortest form")
{
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(3.0) == "3");
    CHECK(io::format_number(-2.5e-300) == "-2.5e-300");
    CHECK(io::format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(io::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    RandomStream rng(4);
    for (int i = 0; i < 2000; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, 40.0 * rng.uniform() - 20.0);
        CHECK(std::stod(io::format_number(v)) == v);
    }
}

TEST_CASE("atomic writes leave only the final file")
{
    const auto dir = scratch_dir("atomic");
    const auto path = dir / "nested" / "out.csv";
    io::write_file_atomic(path, "a,b\n1,2\n");
    io::write_file_atomic(path, "a,b\n3,4\n");
    CHECK(io::read_file(path) == "a,b\n3,4\n");
    std::size_t count = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(path.parent_path()))
        ++count;
    CHECK(count == 1);
    CHECK_THROWS(io::read_file(dir / "missing"));
}

TEST_CASE("csv tables")
{
    io::CsvTable t;
    t.comments = {"digest=abc"};
    t.add_column("x", {1.0, 2.5});
    t.add_column("y", {-0.125, 1e20});
    CHECK(t.str() == "# digest=abc\nx,y\n1,-0.125\n2.5,1e+20\n");
    CHECK_THROWS(t.add_column("z", {1.0}));

    const auto trace = io::trace_table(small_trace(true));
    REQUIRE(trace.columns == std::vector<std::string>{"t_s", "xi_1", "xi_2", "delta_omega_hz"});
    CHECK(trace.data[3][1] == doctest::Approx(-2.5e9));
    CHECK(trace.data[0][2] == doctest::Approx(2e-6));
    CHECK(io::trace_table(small_trace(false)).columns.size() == 3);

    Spectrum s;
    s.freqs = {0.0, 1.0};
    s.psd = {2.0, 3.0};
    s.resolution_bw = 1.5;
    s.n_averages = 4;
    const auto spec = io::spectrum_table(s, "W^2/Hz").str();
    CHECK(spec.find("# resolution_bw_hz=1.5\n") != std::string::npos);
    CHECK(spec.find("freq_hz,psd\n0,2\n1,3\n") != std::string::npos);
}

TEST_CASE("spectrogram exports")
{
    SpringSpectrogram sg;
    sg.detunings = {hz_to_rad(-1e9), hz_to_rad(2e9)};
    sg.freqs = {10.0, 20.0, 30.0};
    sg.psd = {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
    const std::vector<std::string> comments{"digest=x"};
    CHECK(io::spectrogram_csv(sg, comments) == "# digest=x\ndetuning_hz\\freq_hz,10,20,30\n-1e+09,1,2,3\n2e+09,4,5,6\n");
    const auto j = io::spectrogram_json(sg);
    CHECK(j.at("detunings_hz")[1].get<double>() == doctest::Approx(2e9));
    CHECK(j.at("psd")[1][2].get<double>() == 6.0);
}

TEST_CASE("fit results as json")
{
    FitResult f;
    f.names = {"kappa", "g0_1"};
    f.values = {1.0, 2.0};
    f.std_errors = {0.1, std::numeric_limits<double>::quiet_NaN()};
    f.converged = true;
    f.n_iterations = 7;
    const auto j = io::fit_json(f, {{"seed", 3}});
    CHECK(j.at("parameters").at("kappa").at("std_error").get<double>() == 0.1);
    CHECK(j.at("parameters").at("g0_1").at("std_error").is_null());
    CHECK(j.at("converged").get<bool>());
    CHECK(j.at("provenance").at("seed").get<int>() == 3);
}

TEST_CASE("binary trace container layout")
{
    const auto tr = small_trace(true);
    const auto bytes = io::encode_trace(tr);
    REQUIRE(bytes.size() == io::kTraceHeaderSize + 8 * 3 * 3);
    CHECK(bytes.substr(0, 8) == "OMNLTRC1");
    const auto u8 = [&](std::size_t i) { return static_cast<unsigned char>(bytes[i]); };
    CHECK(u8(8) == 1);   // version, little endian
    CHECK(u8(12) == 2);  // modes
    CHECK(u8(16) == 3);  // samples
    CHECK(u8(24) == 0xFE);
    CHECK(u8(25) == 0xCA);
    CHECK(u8(40) == 1);  // flags
    for (std::size_t i = 44; i < 48; ++i)
        CHECK(u8(i) == 0);
    // 1e6 as an IEEE double is 0x412E848000000000.
    CHECK(u8(32 + 7) == 0x41);
    CHECK(u8(32 + 6) == 0x2E);
    CHECK(u8(32 + 5) == 0x84);
    CHECK(u8(32 + 4) == 0x80);
}

TEST_CASE("binary trace round trip")
{
    const auto dir = scratch_dir("binary");
    for (bool shift : {true, false}) {
        const auto tr = small_trace(shift);
        io::write_trace(dir / "t.omtr", tr);
        const auto back = io::read_trace(dir / "t.omtr");
        CHECK(back.xi == tr.xi);
        CHECK(std::signbit(back.xi[1][1]));
        CHECK(back.seed == tr.seed);
        CHECK(back.sample_rate == tr.sample_rate);
        CHECK(back.duration == doctest::Approx(3e-6));
        REQUIRE(back.delta_omega.size() == tr.delta_omega.size());
        for (std::size_t i = 0; i < tr.delta_omega.size(); ++i)
            CHECK(back.delta_omega[i] == doctest::Approx(tr.delta_omega[i]).epsilon(1e-15));
    }
}

TEST_CASE("corrupt containers are rejected")
{
    const auto bytes = io::encode_trace(small_trace(true));
    CHECK_THROWS_AS(io::decode_trace(bytes.substr(0, 40)), io::FormatError);
    CHECK_THROWS_AS(io::decode_trace(bytes.substr(0, bytes.size() - 1)), io::FormatError);
    auto wrong_magic = bytes;
    wrong_magic[0] = 'X';
    CHECK_THROWS_AS(io::decode_trace(wrong_magic), io::FormatError);
    auto wrong_version = bytes;
    wrong_version[8] = 2;
    CHECK_THROWS_AS(io::decode_trace(wrong_version), io::FormatError);
    auto huge = bytes;
    huge[23] = 0x7F;
    CHECK_THROWS_AS(io::decode_trace(huge), io::FormatError);
}

}
