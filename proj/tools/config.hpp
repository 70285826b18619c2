#pragma once

#include <complex>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>

namespace sp4::cli {

using cplx = std::complex<double>;

struct RunConfig {
    // [run]
    std::string command;
    std::uint64_t seed = 20240917;
    std::string zero_root = "a1";
    bool allow_degenerate = false;
    // [grid]
    int n = 64;
    cplx tau{0.0, 1.0};
    double area = 4.0 * 3.14159265358979323846;
    // [higgs]
    cplx mu{1.0, 0.0};
    cplx nu{0.0, 0.0};
    cplx q2{0.0, 0.0};
    int genus = 2;
    int degree = 2;
    bool degree_set = false;
    std::string preset = "constant";
    // [solver]
    double tol = 1e-10;
    int max_iter = 80;
    bool full = false;
    std::string init = "zero";
    std::string background = "degree";
    // [output]
    std::string dir = ".";
    std::string file;
    std::string format;
    std::string dump_fields;
};

struct ConfigError : std::runtime_error {
    int line;
    std::string field;
    ConfigError(int line, std::string field, const std::string& what)
        : std::runtime_error(what), line(line), field(std::move(field))
    {
    }
};

// Accepts "a", "a+bi", "a-bi", "bi" and "re,im".
cplx parse_complex(const std::string& s);

// Flat key=value file with [run], [grid], [higgs], [solver], [output] sections.
// Unknown sections or keys are errors.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Sets one key as if read from the given section of a config file.
void set_value(RunConfig& c, const std::string& section, const std::string& key, const std::string& value);

// Throws std::invalid_argument on out-of-range values.
void validate(const RunConfig& c);

// Output directory, overridden by SP4_OUTPUT_DIR when set.
std::string output_dir(const RunConfig& c);
// Relative paths are placed in output_dir.
std::string resolve_output(const RunConfig& c, const std::string& path);

}  // namespace sp4::cli
