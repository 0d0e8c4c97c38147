#include "fourjj/hamiltonian.hpp"

#include <cassert>
#include <limits>
#include <stdexcept>

namespace fourjj {

namespace {

void check_compatible(const CircuitParams& params, const Basis& basis) {
    if (basis.dimension() != params.dimension())
        throw DomainError("basis dimension does not match circuit variant");
    if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
    if (params.variant == Variant::FourJunction && !(params.beta >= 0.0 && params.beta <= 1.0))
        throw DomainError("beta must lie in [0, 1] for operator assembly");
    if (basis.size() > std::numeric_limits<std::uint32_t>::max())
        throw DomainError("basis too large");
}

// K + u <- K couplings for every harmonic; amplitude(term) gives the value.
template <class Amplitude>
std::vector<Coupling> harmonic_couplings(const Basis& basis, const std::vector<HarmonicTerm>& terms,
                                         Amplitude amplitude) {
    std::vector<Coupling> out;
    out.reserve(basis.size() * terms.size());
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const LatticeVector& k = basis[col];
        for (const auto& term : terms) {
            if (term.weight == 0.0) continue;
            const LatticeVector shifted{k[0] + term.u[0], k[1] + term.u[1], k[2] + term.u[2]};
            const std::ptrdiff_t row = basis.index_of(shifted);
            if (row == Basis::npos) continue;
            // Every u is lexicographically positive, so K + u sorts after K.
            assert(static_cast<std::size_t>(row) > col);
            out.push_back({static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col), amplitude(term)});
        }
    }
    return out;
}

}  // namespace

HermitianOperator::HermitianOperator(std::shared_ptr<const Basis> basis, Eigen::VectorXd diagonal,
                                     std::vector<Coupling> couplings)
    : basis_(std::move(basis)), diagonal_(std::move(diagonal)), couplings_(std::move(couplings)) {
    if (!basis_ || basis_->size() != static_cast<std::size_t>(diagonal_.size()))
        throw std::invalid_argument("HermitianOperator: diagonal size does not match basis");
}

void HermitianOperator::apply(const Eigen::Ref<const Eigen::VectorXcd>& x,
                              Eigen::Ref<Eigen::VectorXcd> y) const {
    y = diagonal_.cast<Complex>().cwiseProduct(x);
    const Complex* xp = x.data();
    Complex* yp = y.data();
    for (const auto& c : couplings_) {
        yp[c.row] += c.amplitude * xp[c.col];
        yp[c.col] += std::conj(c.amplitude) * xp[c.row];
    }
}

Eigen::MatrixXcd HermitianOperator::apply(const Eigen::MatrixXcd& x) const {
    Eigen::MatrixXcd y(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) apply(x.col(j), y.col(j));
    return y;
}

Eigen::MatrixXcd HermitianOperator::to_dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    m.diagonal() = diagonal_.cast<Complex>();
    for (const auto& c : couplings_) {
        m(c.row, c.col) += c.amplitude;
        m(c.col, c.row) += std::conj(c.amplitude);
    }
    return m;
}

Complex HermitianOperator::matrix_element(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
    Eigen::VectorXcd ob(b.size());
    apply(b, ob);
    return a.dot(ob);
}

HermitianOperator assemble_hamiltonian(const CircuitParams& params, std::shared_ptr<const Basis> basis,
                                       FluxGauge gauge) {
    check_compatible(params, *basis);
    const int dim = params.dimension();
    const Eigen::MatrixXd inv = mass_matrix(params).entries.inverse();
    const double ej = params.ej_over_ec;
    const double offset = josephson_constant(params) * ej;

    Eigen::VectorXd diag(static_cast<Eigen::Index>(basis->size()));
    for (std::size_t n = 0; n < basis->size(); ++n)
        diag[static_cast<Eigen::Index>(n)] = kinetic_energy((*basis)[n], inv, dim) + offset;

    auto couplings = harmonic_couplings(*basis, josephson_terms(params, gauge), [&](const HarmonicTerm& t) {
        return -0.5 * t.weight * ej * std::polar(1.0, t.phase);
    });
    return HermitianOperator(std::move(basis), std::move(diag), std::move(couplings));
}

HermitianOperator assemble_current(const CircuitParams& params, std::shared_ptr<const Basis> basis) {
    check_compatible(params, *basis);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->size()));
    // <K+u| sin(u.phi + theta) |K> = e^{i theta} / 2i
    auto couplings = harmonic_couplings(*basis, current_terms(params), [](const HarmonicTerm& t) {
        return t.weight * std::polar(1.0, t.phase) / Complex(0.0, 2.0);
    });
    return HermitianOperator(std::move(basis), std::move(diag), std::move(couplings));
}

}  // namespace fourjj
