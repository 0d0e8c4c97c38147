// circuit.hpp: circuit parameters, phase transformation and closed-form
// Josephson potentials / loop currents for the three- and four-junction loops.
//
// Energies are in units of E_J, currents in units of I_c = 2*pi*E_J/Phi0.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fourjj {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Variant { FourJunction, ThreeJunction };

std::string to_string(Variant v);

struct CircuitParams {
    Variant variant{Variant::FourJunction};
    double alpha{1.0};
    double beta{0.6};           // ignored for ThreeJunction
    double ej_over_ec{50.0};
    double f_e{0.5};
    std::optional<double> capacitance;  // farads
    std::optional<double> inductance;   // henries

    int dimension() const noexcept { return variant == Variant::FourJunction ? 3 : 2; }

    static CircuitParams four_junction(double alpha, double beta, double ej_over_ec = 50.0,
                                       double f_e = 0.5);
    static CircuitParams three_junction(double alpha, double ej_over_ec = 50.0, double f_e = 0.5);
};

// Throws DomainError unless alpha in (0,1], beta in (0,1] (4J), ej_over_ec > 0,
// f_e finite, and C, L > 0 when present.
void validate(const CircuitParams& p);

// Coefficients of the phase transformation to (phi, phi_+, phi_-, xi) that
// diagonalizes the electrostatic energy of the four-junction loop.
struct TransformCoefficients {
    double alpha{};
    double beta{};
    double lambda_plus{};
    double lambda_minus{};
    double b_plus{};
    double b_minus{};
    double b{};
    double gamma_plus{};
    double gamma_minus{};
    double gamma_xi{};
    // phi_3 = c_plus*phi_+ + c_minus*phi_- + b*xi, with c = -2*beta*b_pm/(alpha+beta-lambda_pm)
    double c_plus{};
    double c_minus{};
    // Largest |Gamma_printed - Gamma_numeric| seen at construction; when it exceeds
    // kTransformTolerance the numeric values replace the closed forms.
    double discrepancy{};
    std::optional<std::string> diagnostic;
};

inline constexpr double kTransformTolerance = 1e-9;

TransformCoefficients compute_transform(double alpha, double beta);

// phases: (phi_1, phi_2, phi_3) for 4J or (phi_1, phi_2) for 3J, radians.
struct PhasePoint {
    Eigen::VectorXd phases;

    PhasePoint() = default;
    explicit PhasePoint(Eigen::VectorXd v) : phases(std::move(v)) {}
    PhasePoint(std::initializer_list<double> v);

    Eigen::Index size() const noexcept { return phases.size(); }
    double operator[](Eigen::Index i) const { return phases[i]; }
};

struct MappedPhases {
    PhasePoint point;   // phi_1, phi_2, phi_3
    double phi4{};      // fixed by fluxoid quantization with f_tot = f_e + xi
};

MappedPhases map_phases(const TransformCoefficients& t, double f_e, double varphi,
                        double varphi_plus, double varphi_minus, double xi);

// T / [(C/2)(Phi0/2pi)^2] in original and transformed velocities.
double kinetic_form_original(double alpha, double beta, const Eigen::Vector3d& phase_velocity,
                             double flux_velocity);
double kinetic_form_transformed(const TransformCoefficients& t, double varphi_dot,
                                double varphi_plus_dot, double varphi_minus_dot, double xi_dot);

double potential_4j(const PhasePoint& p, double alpha, double beta, double f_tot);
double potential_3j(const PhasePoint& p, double alpha, double f_tot);
double potential(const CircuitParams& params, const PhasePoint& p);

// Potential with a flux excursion xi at fixed transformed coordinates, i.e. the
// xi-dependent forms entering the time-dependent Hamiltonians.
double potential_4j_xi(const PhasePoint& p, const TransformCoefficients& t, double f_e, double xi);
double potential_3j_xi(const PhasePoint& p, double alpha, double f_e, double xi);

double current_4j(const PhasePoint& p, double alpha, double beta, double f_e);
double current_3j(const PhasePoint& p, double alpha, double f_e);
double current(const CircuitParams& params, const PhasePoint& p);

// Prefactor of the loop current in units of I_c.
double current_prefactor(const CircuitParams& params);

struct MassMatrix {
    Eigen::MatrixXd entries;
};

// Quadratic velocity form in original phases at static flux. Accepts beta = 0
// for the four-junction loop (decoupled junctions).
MassMatrix mass_matrix(const CircuitParams& params);

// One harmonic of the Josephson landscape: weight * trig(u . phi + phase).
struct HarmonicTerm {
    std::array<int, 3> u{};
    double weight{};
    double phase{};
};

// Where the static flux phase is placed. Shifting it onto junction 3 (4J) or
// junction 1 (3J) is a constant translation of one phase coordinate.
enum class FluxGauge { LastJunction, ShiftedJunction };

// U/E_J = josephson_constant(params) - sum_k weight_k * cos(u_k . phi + phase_k)
std::vector<HarmonicTerm> josephson_terms(const CircuitParams& params,
                                          FluxGauge gauge = FluxGauge::LastJunction);
double josephson_constant(const CircuitParams& params);

// I/I_c = sum_k weight_k * sin(u_k . phi + phase_k), prefactor included.
std::vector<HarmonicTerm> current_terms(const CircuitParams& params);

}  // namespace fourjj
