// basis.hpp: truncated reciprocal-lattice (plane-wave) bases e^{iK.phi}.

#pragma once

#include "fourjj/circuit.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace fourjj {

// Unused trailing components are zero for two-dimensional bases.
using LatticeVector = std::array<int, 3>;

struct CubeCutoff {
    int k_max{8};
};

// Keeps K with 4 K^T A^{-1} K <= e_cut (E_C units).
struct EllipsoidCutoff {
    double e_cut{};
};

struct BasisSpec {
    int dimension{3};
    std::variant<CubeCutoff, EllipsoidCutoff> cutoff{CubeCutoff{}};

    static BasisSpec cube(int dimension, int k_max) { return {dimension, CubeCutoff{k_max}}; }
    static BasisSpec ellipsoid(int dimension, double e_cut) { return {dimension, EllipsoidCutoff{e_cut}}; }
};

std::string describe(const BasisSpec& spec);

class Basis {
public:
    static constexpr std::ptrdiff_t npos = -1;

    // vectors must be sorted lexicographically and unique.
    Basis(int dimension, std::vector<LatticeVector> vectors);

    int dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return vectors_.size(); }
    const LatticeVector& operator[](std::size_t i) const { return vectors_[i]; }
    const std::vector<LatticeVector>& vectors() const noexcept { return vectors_; }
    int radius() const noexcept { return radius_; }

    std::ptrdiff_t index_of(const LatticeVector& k) const noexcept;

private:
    int dimension_;
    std::vector<LatticeVector> vectors_;
    int radius_{0};
    std::vector<std::ptrdiff_t> lookup_;  // dense box [-radius, radius]^dimension
};

// Canonical lexicographic ordering (k1 slowest). Throws DomainError for an
// empty basis or a dimension that disagrees with the mass matrix.
Basis enumerate_basis(const BasisSpec& spec, const MassMatrix& mass);

// 4 K^T A^{-1} K for a vector of the basis dimension.
double kinetic_energy(const LatticeVector& k, const Eigen::MatrixXd& inverse_mass, int dimension);

}  // namespace fourjj
