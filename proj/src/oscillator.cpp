#include "fourjj/oscillator.hpp"

#include <cmath>

namespace fourjj {

OscillatorReport oscillator_frequency(const CircuitParams& params, std::optional<double> capacitance,
                                      std::optional<double> inductance, std::optional<double> gap_hz) {
    if (!capacitance || !inductance)
        throw DomainError("oscillator_frequency: capacitance and inductance are required");
    const double c = *capacitance;
    const double l = *inductance;
    if (!(c > 0.0) || !(l > 0.0))
        throw DomainError("oscillator_frequency: capacitance and inductance must be positive");

    OscillatorReport r;
    if (params.variant == Variant::FourJunction) {
        const auto t = compute_transform(params.alpha, params.beta);
        // Kinetic 4E_C/Gamma_xi P_xi^2 against Phi0^2/(2L) xi^2 with E_C = e^2/2C.
        r.omega = kTwoPi / std::sqrt(t.gamma_xi * c * l);
    } else {
        const double a = params.alpha;
        if (!(a > 0.0)) throw DomainError("oscillator_frequency: alpha must be positive");
        r.omega = std::sqrt((1.0 + 2.0 * a) / (a * c * l));
    }
    r.freq_hz = r.omega / kTwoPi;
    r.freq_ghz = r.freq_hz * 1e-9;
    if (gap_hz) r.adiabaticity_ratio = *gap_hz / r.freq_hz;
    return r;
}

}  // namespace fourjj
