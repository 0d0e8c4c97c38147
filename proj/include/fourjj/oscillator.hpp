#pragma once

#include "fourjj/circuit.hpp"

#include <optional>

namespace fourjj {

namespace constants {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kReducedPlanck = kPlanck / kTwoPi;
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);  // Wb
}  // namespace constants

struct OscillatorReport {
    double omega{};      // rad/s
    double freq_hz{};    // omega / 2pi
    double freq_ghz{};
    std::optional<double> adiabaticity_ratio;  // gap / (omega / 2pi), when a gap is supplied
};

// Loop-inductance oscillator of the flux coordinate xi.
//   4J: omega = 2 pi / sqrt(Gamma_xi C L)
//   3J: omega = sqrt((1 + 2 alpha) / (alpha C L))
// gap_hz, when given, is compared against omega / 2pi.
OscillatorReport oscillator_frequency(const CircuitParams& params, std::optional<double> capacitance,
                                      std::optional<double> inductance,
                                      std::optional<double> gap_hz = std::nullopt);

}  // namespace fourjj
