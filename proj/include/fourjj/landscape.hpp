#pragma once

#include "fourjj/circuit.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace fourjj {

enum class WellRegime { DoubleWell, SingleWell };

std::string to_string(WellRegime r);

struct WellReport {
    std::vector<PhasePoint> minima;          // canonical, in [-pi, pi) per component
    WellRegime regime{WellRegime::SingleWell};
    std::vector<double> potential_at_minima; // E_J units
    std::optional<double> barrier_estimate;  // E_J units, height above the deepest minimum
};

class MinimizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Nonzero minimum phase of the alpha = 1, f_e = 1/2 four-junction potential.
double phase_star(double beta);

// Gradient and Hessian of the potential (E_J units) at p.
Eigen::VectorXd potential_gradient(const CircuitParams& params, const PhasePoint& p);
Eigen::MatrixXd potential_hessian(const CircuitParams& params, const PhasePoint& p);

struct MinimaOptions {
    double gradient_tolerance{1e-10};
    int max_iterations{200};
    double dedup_tolerance{1e-6};
};

WellReport find_minima(const CircuitParams& params, const MinimaOptions& options = {});

// Wraps into [-pi, pi).
double wrap_phase(double x);

}  // namespace fourjj
