#include "fourjj/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

namespace fourjj {

namespace {

// splitmix64; fixed stream so every solve starts from the same guess.
class DeterministicNoise {
public:
    explicit DeterministicNoise(std::uint64_t seed) : state_(seed) {}
    double next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }

private:
    std::uint64_t state_;
};

// Largest-magnitude component made real and positive.
void fix_phases(Eigen::MatrixXcd& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index best = 0;
        double mag = -1.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            if (a > mag * (1.0 + 1e-12)) {
                mag = a;
                best = i;
            }
        }
        if (mag > 0.0) v.col(j) *= std::conj(v(best, j)) / mag;
    }
}

Eigen::VectorXd explicit_residuals(const HermitianOperator& op, const Eigen::MatrixXcd& x,
                                   const Eigen::VectorXd& theta) {
    Eigen::VectorXd r(x.cols());
    Eigen::VectorXcd hx(x.rows());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        op.apply(x.col(j), hx);
        r[j] = (hx - theta[j] * x.col(j)).norm();
    }
    return r;
}

// Orthogonalizes the columns of t against q (orthonormal) and each other.
// Columns whose norm falls below `drop` relative to their input are discarded.
Eigen::MatrixXcd orthonormalize_against(const Eigen::MatrixXcd& q, Eigen::MatrixXcd t, double drop) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        const double nj = t.col(j).norm();
        if (nj > 0.0) t.col(j) /= nj;
    }
    if (q.cols() > 0) {
        for (int pass = 0; pass < 2; ++pass) t.noalias() -= q * (q.adjoint() * t);
    }
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index k : kept) t.col(j) -= t.col(k) * t.col(k).dot(t.col(j));
        }
        const double after = t.col(j).norm();
        if (after < drop) continue;
        t.col(j) /= after;
        if (q.cols() > 0 && after < 1e-3) {
            // Heavy cancellation: one more sweep against q keeps the basis orthonormal.
            t.col(j) -= q * (q.adjoint() * t.col(j));
            for (Eigen::Index k : kept) t.col(j) -= t.col(k) * t.col(k).dot(t.col(j));
            t.col(j).normalize();
        }
        kept.push_back(j);
    }
    Eigen::MatrixXcd out(t.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = t.col(kept[i]);
    return out;
}

struct DavidsonOutcome {
    bool converged{false};
    bool stagnated{false};
    Eigen::VectorXd theta;
    Eigen::MatrixXcd x;
    Eigen::VectorXd residuals;
    int iterations{0};
};

DavidsonOutcome davidson(const HermitianOperator& op, int m, int block, Eigen::Index max_subspace,
                         const SolverOptions& opt, int iteration_offset) {
    const Eigen::Index n = static_cast<Eigen::Index>(op.size());
    const Eigen::VectorXd& d = op.diagonal();
    const Eigen::Index nb = std::min<Eigen::Index>(n, block);
    const Eigen::Index keep = std::min<Eigen::Index>(max_subspace / 2, 2 * nb);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return d[a] < d[b]; });

    DeterministicNoise noise(0x5EEDF00DULL + static_cast<std::uint64_t>(n));
    Eigen::MatrixXcd guess(n, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) guess(i, j) = Complex(1e-3 * noise.next(), 1e-3 * noise.next());
        guess(order[static_cast<std::size_t>(j)], j) += 1.0;
    }
    Eigen::MatrixXcd v = orthonormalize_against(Eigen::MatrixXcd(n, 0), guess, 1e-10);
    Eigen::MatrixXcd w = op.apply(v);
    Eigen::MatrixXcd g = v.adjoint() * w;  // projected operator, extended as v grows

    DavidsonOutcome out;
    double best = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int it = 0; it < opt.max_iterations; ++it) {
        out.iterations = iteration_offset + it + 1;
        g = 0.5 * (g + g.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
        const Eigen::Index nr = std::min<Eigen::Index>(nb, v.cols());
        const Eigen::VectorXd theta = es.eigenvalues().head(nr);
        const Eigen::MatrixXcd s = es.eigenvectors().leftCols(nr);
        Eigen::MatrixXcd x = v * s;
        Eigen::MatrixXcd r = w * s - x * theta.asDiagonal();
        Eigen::VectorXd rn = r.colwise().norm();

        const double worst = rn.head(m).maxCoeff();
        out.theta = theta;
        out.x = x;
        out.residuals = rn;
        if (worst <= opt.tolerance) {
            out.converged = true;
            return out;
        }
        if (worst < 0.5 * best) {
            best = worst;
            since_best = 0;
        } else if (++since_best > 300) {
            out.stagnated = true;
            return out;
        }

        Eigen::MatrixXcd t(n, nr);
        Eigen::Index nt = 0;
        for (Eigen::Index j = 0; j < nr; ++j) {
            if (rn[j] <= opt.tolerance) continue;
            for (Eigen::Index i = 0; i < n; ++i) {
                double den = d[i] - theta[j];
                if (std::abs(den) < 1e-8) den = den < 0.0 ? -1e-8 : 1e-8;
                t(i, nt) = r(i, j) / den;
            }
            ++nt;
        }
        t.conservativeResize(n, nt);

        if (v.cols() + nt > max_subspace) {
            // Thick restart from the lowest Ritz vectors of the full subspace.
            const Eigen::Index kk = std::min<Eigen::Index>(keep, v.cols());
            Eigen::MatrixXcd kept = v * es.eigenvectors().leftCols(kk);
            v = orthonormalize_against(Eigen::MatrixXcd(n, 0), kept, 1e-10);
            w = op.apply(v);
            g = v.adjoint() * w;
        }

        Eigen::MatrixXcd fresh = orthonormalize_against(v, t, 1e-8);
        if (fresh.cols() == 0) fresh = orthonormalize_against(v, r, 1e-8);
        if (fresh.cols() == 0) {
            Eigen::MatrixXcd rnd(n, nb);
            for (Eigen::Index j = 0; j < nb; ++j)
                for (Eigen::Index i = 0; i < n; ++i) rnd(i, j) = Complex(noise.next(), noise.next());
            fresh = orthonormalize_against(v, rnd, 1e-8);
        }
        if (fresh.cols() == 0) {
            out.stagnated = true;
            return out;
        }
        const Eigen::MatrixXcd wf = op.apply(fresh);
        const Eigen::Index old = v.cols();
        const Eigen::Index nf = fresh.cols();
        const Eigen::MatrixXcd cross = v.adjoint() * wf;
        Eigen::MatrixXcd grown(old + nf, old + nf);
        grown.topLeftCorner(old, old) = g;
        grown.topRightCorner(old, nf) = cross;
        grown.bottomLeftCorner(nf, old) = cross.adjoint();
        grown.bottomRightCorner(nf, nf) = fresh.adjoint() * wf;
        g = std::move(grown);
        v.conservativeResize(n, old + nf);
        w.conservativeResize(n, old + nf);
        v.rightCols(nf) = fresh;
        w.rightCols(nf) = wf;
    }
    return out;
}

}  // namespace

std::string to_string(SolverMethod m) {
    switch (m) {
        case SolverMethod::Auto: return "auto";
        case SolverMethod::Dense: return "dense";
        case SolverMethod::Iterative: return "iterative";
    }
    return "unknown";
}

SpectrumResult eigensolve_dense(const HermitianOperator& op, int m, bool want_vectors) {
    const Eigen::MatrixXcd h = op.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
    SpectrumResult res;
    res.method_used = SolverMethod::Dense;
    res.eigenvalues = es.eigenvalues().head(m);
    Eigen::MatrixXcd vecs = es.eigenvectors().leftCols(m);
    fix_phases(vecs);
    res.residuals = explicit_residuals(op, vecs, res.eigenvalues);
    if (want_vectors) res.eigenvectors = std::move(vecs);
    return res;
}

SpectrumResult eigensolve_iterative(const HermitianOperator& op, int m, const SolverOptions& options) {
    const auto n = static_cast<Eigen::Index>(op.size());
    int block = std::min<int>(static_cast<int>(n), m + std::max(3, m / 2));
    Eigen::Index max_subspace = std::min<Eigen::Index>(n, std::max<Eigen::Index>(8 * block, 48));

    DavidsonOutcome r = davidson(op, m, block, max_subspace, options, 0);
    if (!r.converged && r.stagnated) {
        // One retry with a wider block and subspace.
        block = std::min<int>(static_cast<int>(n), 2 * block);
        max_subspace = std::min<Eigen::Index>(n, 2 * max_subspace);
        r = davidson(op, m, block, max_subspace, options, r.iterations);
    }

    Eigen::MatrixXcd vecs = r.x.leftCols(m);
    const Eigen::VectorXd theta = r.theta.head(m);
    const Eigen::VectorXd resid = explicit_residuals(op, vecs, theta);
    if (!r.converged || resid.maxCoeff() > options.tolerance) {
        std::ostringstream os;
        os << "iterative eigensolver did not converge after " << r.iterations
           << " iterations (worst residual " << resid.maxCoeff() << ", tolerance " << options.tolerance << ")";
        throw SolverError(os.str(), resid);
    }
    fix_phases(vecs);
    SpectrumResult res;
    res.method_used = SolverMethod::Iterative;
    res.iterations = r.iterations;
    res.eigenvalues = theta;
    res.residuals = resid;
    if (options.want_vectors) res.eigenvectors = std::move(vecs);
    return res;
}

SpectrumResult eigensolve(const HermitianOperator& op, int m, const SolverOptions& options) {
    const std::size_t n = op.size();
    if (m < 1 || static_cast<std::size_t>(m) > n) {
        std::ostringstream os;
        os << "eigensolve: level count " << m << " outside [1, " << n << "]";
        throw DomainError(os.str());
    }
    SolverMethod method = options.method;
    if (method == SolverMethod::Auto)
        method = n <= options.auto_dense_below ? SolverMethod::Dense : SolverMethod::Iterative;
    if (method == SolverMethod::Dense) {
        if (n > options.dense_limit) {
            std::ostringstream os;
            os << "eigensolve: dense path limited to " << options.dense_limit << " basis vectors, got " << n;
            throw DomainError(os.str());
        }
        return eigensolve_dense(op, m, options.want_vectors);
    }
    try {
        return eigensolve_iterative(op, m, options);
    } catch (const SolverError&) {
        if (n <= options.dense_limit) return eigensolve_dense(op, m, options.want_vectors);
        throw;
    }
}

}  // namespace fourjj
