// config.hpp: run configuration for the command-line front end.
//
// The file format is INI-style: `[section]` headers, `key = value` lines,
// `#` or `;` comments. Unknown sections or keys are rejected.

#pragma once

#include "fourjj/analysis.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace fourjj::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
    CircuitParams circuit{};
    std::optional<double> ec_ghz;  // E_C / h, GHz

    std::string basis_kind{"cube"};  // cube | ellipsoid
    int kmax{8};
    double e_cut{400.0};

    double f_start{0.40};
    double f_end{0.60};
    int f_steps{81};
    int levels{6};
    int jobs{1};

    SolverOptions solver{};

    double ip_point{0.45};
    double ip_step{1e-4};
    double xi_threshold{1e-3};
    double qutrit_t12{0.1};
    double two_level_window{0.01};
    int two_level_points{21};
    double phi_a0{1.0};
    double converge_tol{1e-6};
    int converge_levels{4};
    int converge_cap{14};

    double phi3{0.0};
    int resolution{120};  // even, so phi = 0 lies on the grid

    std::string out{"-"};  // "-" writes to standard output
    OutputFormat format{OutputFormat::Csv};

    BasisSpec basis_spec() const;
    std::vector<double> flux_grid() const;
};

// Parses the text of a configuration file into `base`. `origin` names the
// source in error messages.
RunConfig parse_config(const std::string& text, RunConfig base = {}, const std::string& origin = "config");
RunConfig load_config(const std::string& path, RunConfig base = {});

// Cross-field checks; throws ConfigError.
void check_config(const RunConfig& c);

// Every key with its effective value, in a form parse_config accepts.
std::string render_config(const RunConfig& c);

std::string to_string(OutputFormat f);

}  // namespace fourjj::cli
