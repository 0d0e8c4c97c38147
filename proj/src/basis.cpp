#include "fourjj/basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fourjj {

std::string describe(const BasisSpec& spec) {
    std::ostringstream os;
    if (const auto* c = std::get_if<CubeCutoff>(&spec.cutoff)) {
        os << "cube(kmax=" << c->k_max << ",dim=" << spec.dimension << ")";
    } else {
        const auto& e = std::get<EllipsoidCutoff>(spec.cutoff);
        os << "ellipsoid(e_cut=" << e.e_cut << ",dim=" << spec.dimension << ")";
    }
    return os.str();
}

Basis::Basis(int dimension, std::vector<LatticeVector> vectors)
    : dimension_(dimension), vectors_(std::move(vectors)) {
    for (const auto& k : vectors_)
        for (int i = 0; i < dimension_; ++i) radius_ = std::max(radius_, std::abs(k[static_cast<std::size_t>(i)]));
    const std::size_t side = static_cast<std::size_t>(2 * radius_ + 1);
    std::size_t box = 1;
    for (int i = 0; i < dimension_; ++i) box *= side;
    lookup_.assign(box, npos);
    for (std::size_t n = 0; n < vectors_.size(); ++n) {
        std::size_t flat = 0;
        for (int i = 0; i < dimension_; ++i)
            flat = flat * side + static_cast<std::size_t>(vectors_[n][static_cast<std::size_t>(i)] + radius_);
        lookup_[flat] = static_cast<std::ptrdiff_t>(n);
    }
}

std::ptrdiff_t Basis::index_of(const LatticeVector& k) const noexcept {
    const std::size_t side = static_cast<std::size_t>(2 * radius_ + 1);
    std::size_t flat = 0;
    for (int i = 0; i < dimension_; ++i) {
        const int c = k[static_cast<std::size_t>(i)];
        if (c < -radius_ || c > radius_) return npos;
        flat = flat * side + static_cast<std::size_t>(c + radius_);
    }
    for (int i = dimension_; i < 3; ++i)
        if (k[static_cast<std::size_t>(i)] != 0) return npos;
    return lookup_[flat];
}

double kinetic_energy(const LatticeVector& k, const Eigen::MatrixXd& inverse_mass, int dimension) {
    double s = 0.0;
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j)
            s += k[static_cast<std::size_t>(i)] * inverse_mass(i, j) * k[static_cast<std::size_t>(j)];
    return 4.0 * s;
}

Basis enumerate_basis(const BasisSpec& spec, const MassMatrix& mass) {
    const int dim = spec.dimension;
    if (dim != 2 && dim != 3) throw DomainError("enumerate_basis: dimension must be 2 or 3");
    if (mass.entries.rows() != dim || mass.entries.cols() != dim)
        throw DomainError("enumerate_basis: mass matrix does not match basis dimension");

    const Eigen::MatrixXd inv = mass.entries.inverse();
    int radius = 0;
    double e_cut = 0.0;
    const bool ellipsoid = std::holds_alternative<EllipsoidCutoff>(spec.cutoff);
    if (ellipsoid) {
        e_cut = std::get<EllipsoidCutoff>(spec.cutoff).e_cut;
        if (!(e_cut >= 0.0)) throw DomainError("enumerate_basis: e_cut must be nonnegative");
        // k_i^2 <= (K^T A^{-1} K) A_ii by Cauchy-Schwarz in the A^{-1} metric.
        for (int i = 0; i < dim; ++i)
            radius = std::max(radius, static_cast<int>(std::floor(std::sqrt(e_cut * mass.entries(i, i) / 4.0))));
    } else {
        radius = std::get<CubeCutoff>(spec.cutoff).k_max;
        if (radius < 0) throw DomainError("enumerate_basis: k_max must be nonnegative");
    }

    std::vector<LatticeVector> out;
    LatticeVector k{0, 0, 0};
    auto consider = [&]() {
        if (!ellipsoid || kinetic_energy(k, inv, dim) <= e_cut) out.push_back(k);
    };
    for (int a = -radius; a <= radius; ++a) {
        k[0] = a;
        for (int b = -radius; b <= radius; ++b) {
            k[1] = b;
            if (dim == 2) {
                consider();
                continue;
            }
            for (int c = -radius; c <= radius; ++c) {
                k[2] = c;
                consider();
            }
        }
    }
    if (out.empty()) throw DomainError("enumerate_basis: cutoff yields an empty basis");
    return Basis(dim, std::move(out));
}

}  // namespace fourjj
