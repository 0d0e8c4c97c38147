// analysis.hpp: qubit parameters, two-level model, three-level classification
// and the adiabaticity check of the loop oscillator.

#pragma once

#include "fourjj/oscillator.hpp"
#include "fourjj/spectrum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fourjj {

struct QubitParams {
    double delta{};          // E1 - E0 at f_e = 1/2, E_C units
    double i_p{};            // persistent current, I_c units
    double epsilon_slope{};  // E_C units per unit f_e: eps = slope * (f_e - 1/2)
    double ip_point{};       // f_e where i_p was evaluated
    double i_p_expectation{};  // -<0| I/I_c |0> at ip_point

    double epsilon(double f_e) const { return epsilon_slope * (f_e - 0.5); }
};

struct QubitOptions {
    double ip_point{0.45};
    double step{1e-4};
    SolverOptions solver{};
};

QubitParams extract_qubit(const CircuitParams& params, const BasisSpec& basis, const QubitOptions& options = {});

// sqrt(eps^2 + delta^2), E_C units.
double two_level_gap(const QubitParams& q, double f_e);

struct TwoLevelComparison {
    QubitParams qubit;
    std::vector<double> f_values;
    std::vector<double> exact_gap;
    std::vector<double> model_gap;
    double max_relative_deviation{};
};

// Compares the model gap with E1 - E0 on `points` evenly spaced values of
// |f_e - 1/2| <= half_width.
TwoLevelComparison compare_two_level(const CircuitParams& params, const BasisSpec& basis, double half_width = 0.01,
                                     int points = 21, const QubitOptions& options = {}, int jobs = 1);

enum class LevelType { XiType, DeltaType };
std::string to_string(LevelType t);

struct ClassificationThresholds {
    double xi{1e-3};       // XiType iff |t02| < xi * |t01|
    double qutrit_t12{0.1};  // qutrit rule: max |t12|/|t01| above this
};

struct LevelClassification {
    std::vector<double> f_values;
    std::vector<LevelType> labels;
    std::vector<double> leakage;     // max(|t02|, |t12|) / |t01| per point
    double leakage_figure{};         // max over the grid
    bool three_levels_isolated{};    // E3 - E2 > E2 - E1 at every point
    double max_t12_ratio{};
    std::string verdict;             // "qubit-suited" or "qutrit-suited"
    ClassificationThresholds thresholds;
};

// The sweep needs at least four levels; both tables must share the flux grid.
LevelClassification classify_levels(const SweepTable& sweep, const TransitionTable& transitions,
                                    const ClassificationThresholds& thresholds = {});

enum class AdiabaticVerdict { Valid, Borderline, Invalid };
std::string to_string(AdiabaticVerdict v);

struct AdiabaticReport {
    double gap_ghz{};
    double oscillator_ghz{};
    double ratio{};
    double threshold{};
    AdiabaticVerdict verdict{AdiabaticVerdict::Invalid};
    bool valid() const noexcept { return verdict == AdiabaticVerdict::Valid; }
};

inline constexpr double kAdiabaticThreshold = 1e-2;

// Ratio of a gap given in GHz to the oscillator frequency. The ratio counts as
// Borderline within a relative 1e-9 of the threshold.
AdiabaticReport adiabatic_check_ghz(const CircuitParams& params, std::optional<double> capacitance,
                                    std::optional<double> inductance, double gap_ghz,
                                    double threshold = kAdiabaticThreshold);

// Same with the gap in E_C units; ec_ghz is E_C / h in GHz.
AdiabaticReport adiabatic_check(const CircuitParams& params, std::optional<double> capacitance,
                                std::optional<double> inductance, double gap_ec, std::optional<double> ec_ghz,
                                double threshold = kAdiabaticThreshold);

}  // namespace fourjj
