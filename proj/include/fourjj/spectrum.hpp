// spectrum.hpp: flux sweeps, transition matrix elements and basis convergence.
//
// All energies are in E_C units; transition elements in units of I_c * Phi_a.

#pragma once

#include "fourjj/eigensolver.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fourjj {

struct SweepTable {
    std::vector<double> f_values;
    Eigen::MatrixXd energies;   // rows: flux points, cols: levels
    CircuitParams params;       // f_e holds the last value solved; see f_values
    BasisSpec basis;
};

class SweepError : public std::runtime_error {
public:
    SweepError(const std::string& what, double f) : std::runtime_error(what), f_(f) {}
    double f() const noexcept { return f_; }

private:
    double f_;
};

// Shared inputs of a sweep. jobs <= 0 means one worker per hardware thread.
struct SweepOptions {
    SolverOptions solver{};
    int jobs{1};
    FluxGauge gauge{FluxGauge::LastJunction};
};

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Rethrows the
// exception of the lowest failing index.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

std::shared_ptr<const Basis> make_basis(const CircuitParams& params, const BasisSpec& spec);

SpectrumResult solve_spectrum(const CircuitParams& params, const std::shared_ptr<const Basis>& basis, int m,
                              const SolverOptions& solver = {}, FluxGauge gauge = FluxGauge::LastJunction);

// One eigensolve per flux point; rows follow f_grid order.
SweepTable sweep_flux(const CircuitParams& params, const std::vector<double>& f_grid, int m,
                      const BasisSpec& basis, const SweepOptions& options = {});

// Pairs closer than this are flagged: their transition elements depend on the
// arbitrary basis chosen inside the degenerate subspace.
inline constexpr double kQuasiDegenerate = 1e-8;

struct TransitionElements {
    Eigen::MatrixXd magnitude;                         // |<i| I Phi_a |j>|, levels x levels
    std::vector<std::pair<int, int>> quasi_degenerate; // i < j
    double t01() const { return magnitude(0, 1); }
    double t02() const { return magnitude(0, 2); }
    double t12() const { return magnitude(1, 2); }
};

// Needs eigenvectors for at least three levels.
TransitionElements transition_elements(const SpectrumResult& spectrum, const HermitianOperator& current,
                                       double phi_a0 = 1.0);

struct TransitionTable {
    SweepTable spectrum;
    Eigen::MatrixXd t;   // rows: flux points; cols: t01, t02, t12
    std::vector<std::vector<std::pair<int, int>>> quasi_degenerate;
    double phi_a0{1.0};
};

TransitionTable transition_sweep(const CircuitParams& params, const std::vector<double>& f_grid, int m,
                                 const BasisSpec& basis, const SweepOptions& options = {},
                                 double phi_a0 = 1.0);

struct ConvergenceReport {
    bool converged{false};
    int k_max{-1};                           // chosen cutoff, -1 when not converged
    std::vector<int> k_values;               // cutoffs solved, ascending
    std::vector<Eigen::VectorXd> eigenvalues;  // per entry of k_values
    // deltas[i] = |E(k_values[i] + 2) - E(k_values[i])| per level
    std::vector<Eigen::VectorXd> deltas;
    bool ground_monotone{true};              // ground energy non-increasing in k
    bool deltas_monotone{true};              // every level's delta sequence non-increasing
};

struct ConvergenceOptions {
    SolverOptions solver{};
    int k_cap{14};
    // Allowed upward wiggle when checking monotonicity, E_C units.
    double monotone_slack{1e-9};
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, ConvergenceReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const ConvergenceReport& report() const noexcept { return report_; }

private:
    ConvergenceReport report_;
};

// Smallest cube cutoff k for which |E_n(k + 2) - E_n(k)| < tol for the lowest
// m levels. Throws ConvergenceError when k + 2 would pass k_cap.
ConvergenceReport converge(const CircuitParams& params, int m, double tol, const ConvergenceOptions& options = {});

// Grid of `steps` points from start to end inclusive (one point when steps = 1).
std::vector<double> linear_grid(double start, double end, int steps);

}  // namespace fourjj
