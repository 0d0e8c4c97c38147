#pragma once

#include "fourjj/hamiltonian.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace fourjj {

enum class SolverMethod { Auto, Dense, Iterative };

std::string to_string(SolverMethod m);

struct SolverOptions {
    SolverMethod method{SolverMethod::Auto};
    double tolerance{1e-10};          // residual norm, E_C units
    int max_iterations{4000};
    bool want_vectors{true};
    std::size_t dense_limit{2000};    // largest basis the dense path accepts
    std::size_t auto_dense_below{1000};
};

struct SpectrumResult {
    Eigen::VectorXd eigenvalues;                    // ascending
    std::optional<Eigen::MatrixXcd> eigenvectors;   // columns a_K, unit norm
    Eigen::VectorXd residuals;                      // ||H v - lambda v||
    SolverMethod method_used{SolverMethod::Dense};
    int iterations{0};
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, Eigen::VectorXd residuals = {})
        : std::runtime_error(what), residuals_(std::move(residuals)) {}
    const Eigen::VectorXd& residuals() const noexcept { return residuals_; }

private:
    Eigen::VectorXd residuals_;
};

// Lowest m eigenpairs. The iterative path is a block Davidson method with a
// diagonal preconditioner and thick restarts; it falls back to the dense path
// on failure when the basis is no larger than dense_limit.
SpectrumResult eigensolve(const HermitianOperator& op, int m, const SolverOptions& options = {});

SpectrumResult eigensolve_dense(const HermitianOperator& op, int m, bool want_vectors = true);
SpectrumResult eigensolve_iterative(const HermitianOperator& op, int m, const SolverOptions& options = {});

}  // namespace fourjj
