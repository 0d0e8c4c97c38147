// hamiltonian.hpp: sparse Hermitian operators over a plane-wave basis.
//
// In original phases the kinetic term is diagonal, 4 E_C K^T A^{-1} K, and each
// Josephson harmonic w cos(u.phi + theta) couples K to K + u with amplitude
// (w/2) e^{i theta}. Only the lower triangle (row > column) is stored; the
// upper triangle is its conjugate transpose.

#pragma once

#include "fourjj/basis.hpp"
#include "fourjj/circuit.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace fourjj {

using Complex = std::complex<double>;

struct Coupling {
    std::uint32_t row{};
    std::uint32_t col{};
    Complex amplitude{};
};

class HermitianOperator {
public:
    HermitianOperator(std::shared_ptr<const Basis> basis, Eigen::VectorXd diagonal,
                      std::vector<Coupling> couplings);

    std::size_t size() const noexcept { return static_cast<std::size_t>(diagonal_.size()); }
    const Basis& basis() const noexcept { return *basis_; }
    std::shared_ptr<const Basis> shared_basis() const noexcept { return basis_; }
    const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }
    const std::vector<Coupling>& couplings() const noexcept { return couplings_; }

    // y = Op x
    void apply(const Eigen::Ref<const Eigen::VectorXcd>& x, Eigen::Ref<Eigen::VectorXcd> y) const;
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const;

    Eigen::MatrixXcd to_dense() const;

    // <a| Op |b>
    Complex matrix_element(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const;

private:
    std::shared_ptr<const Basis> basis_;
    Eigen::VectorXd diagonal_;
    std::vector<Coupling> couplings_;
};

// Static-flux Hamiltonian in E_C units. alpha in (0,1]; beta in [0,1] for the
// four-junction loop (beta = 0 decouples the axes).
HermitianOperator assemble_hamiltonian(const CircuitParams& params, std::shared_ptr<const Basis> basis,
                                       FluxGauge gauge = FluxGauge::LastJunction);

// Loop current operator I/I_c.
HermitianOperator assemble_current(const CircuitParams& params, std::shared_ptr<const Basis> basis);

}  // namespace fourjj
