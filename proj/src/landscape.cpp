#include "fourjj/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fourjj {

namespace {

double dot_u(const HarmonicTerm& term, const PhasePoint& p) {
    double s = term.phase;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += term.u[static_cast<std::size_t>(i)] * p[i];
    return s;
}

Eigen::VectorXd u_vector(const HarmonicTerm& term, Eigen::Index dim) {
    Eigen::VectorXd u(dim);
    for (Eigen::Index i = 0; i < dim; ++i) u[i] = term.u[static_cast<std::size_t>(i)];
    return u;
}

double term_potential(const std::vector<HarmonicTerm>& terms, double constant, const PhasePoint& p) {
    double v = constant;
    for (const auto& t : terms) v -= t.weight * std::cos(dot_u(t, p));
    return v;
}

bool same_modulo_2pi(const PhasePoint& a, const PhasePoint& b, double tol) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (std::abs(wrap_phase(a[i] - b[i])) >= tol) return false;
    return true;
}

struct LocalResult {
    PhasePoint point;
    bool converged{false};
};

LocalResult minimize_from(const CircuitParams& params, const std::vector<HarmonicTerm>& terms,
                          double constant, PhasePoint x, const MinimaOptions& opt) {
    auto value = [&](const PhasePoint& q) { return term_potential(terms, constant, q); };

    for (int it = 0; it < opt.max_iterations; ++it) {
        const Eigen::VectorXd g = potential_gradient(params, x);
        const Eigen::MatrixXd h = potential_hessian(params, x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const Eigen::VectorXd lam = es.eigenvalues();
        const Eigen::MatrixXd q = es.eigenvectors();

        if (g.norm() < opt.gradient_tolerance) {
            if (lam[0] > 0.0) return {x, true};
            // Sitting on a saddle or maximum: leave along the most negative curvature.
            const Eigen::VectorXd dir = q.col(0);
            double step = 0.5;
            const double u0 = value(x);
            while (step > 1e-8) {
                PhasePoint trial(x.phases + step * dir);
                if (value(trial) < u0) {
                    x = trial;
                    break;
                }
                step *= 0.5;
            }
            continue;
        }

        Eigen::VectorXd modified = lam.cwiseAbs().cwiseMax(1e-6);
        const Eigen::VectorXd d = -q * (q.transpose() * g).cwiseQuotient(modified);

        if (lam[0] > 0.0 && g.norm() < 1e-4) {
            x = PhasePoint(x.phases + d);
            continue;
        }
        const double u0 = value(x);
        const double slope = g.dot(d);
        double step = 1.0;
        // Cap the trial step at half a period.
        const double dn = d.norm();
        if (dn > kPi) step = kPi / dn;
        while (step > 1e-12) {
            PhasePoint trial(x.phases + step * d);
            if (value(trial) <= u0 + 1e-4 * step * slope) {
                x = trial;
                break;
            }
            step *= 0.5;
        }
        if (step <= 1e-12) return {x, false};
    }
    const Eigen::VectorXd g = potential_gradient(params, x);
    const bool ok = g.norm() < opt.gradient_tolerance &&
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(potential_hessian(params, x))
                            .eigenvalues()[0] > 0.0;
    return {x, ok};
}

}  // namespace

std::string to_string(WellRegime r) { return r == WellRegime::DoubleWell ? "DoubleWell" : "SingleWell"; }

double wrap_phase(double x) { return x - kTwoPi * std::floor((x + kPi) / kTwoPi); }

double phase_star(double beta) {
    if (!(beta >= 1.0 / 3.0) || beta > 1.0)
        throw DomainError("phase_star: beta must lie in [1/3, 1] (single-well below 1/3)");
    const double radicand = (3.0 * beta - 1.0) / (4.0 * beta);
    return std::asin(std::sqrt(std::max(0.0, radicand)));
}

Eigen::VectorXd potential_gradient(const CircuitParams& params, const PhasePoint& p) {
    const Eigen::Index dim = params.dimension();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    for (const auto& t : josephson_terms(params)) g += t.weight * std::sin(dot_u(t, p)) * u_vector(t, dim);
    return g;
}

Eigen::MatrixXd potential_hessian(const CircuitParams& params, const PhasePoint& p) {
    const Eigen::Index dim = params.dimension();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& t : josephson_terms(params)) {
        const Eigen::VectorXd u = u_vector(t, dim);
        h += t.weight * std::cos(dot_u(t, p)) * (u * u.transpose());
    }
    return h;
}

WellReport find_minima(const CircuitParams& params, const MinimaOptions& options) {
    const int dim = params.dimension();
    const auto terms = josephson_terms(params);
    const double constant = josephson_constant(params);
    const std::array<double, 3> grid{-kTwoPi / 3.0, 0.0, kTwoPi / 3.0};

    int starts = 1;
    for (int i = 0; i < dim; ++i) starts *= 3;

    std::vector<PhasePoint> found;
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXd x0(dim);
        int code = s;
        for (int i = dim - 1; i >= 0; --i) {
            x0[i] = grid[static_cast<std::size_t>(code % 3)];
            code /= 3;
        }
        LocalResult r = minimize_from(params, terms, constant, PhasePoint(x0), options);
        if (!r.converged) {
            std::ostringstream os;
            os << "find_minima: start " << s << " did not reach gradient tolerance "
               << options.gradient_tolerance << " within " << options.max_iterations << " iterations";
            throw MinimizationError(os.str());
        }
        for (Eigen::Index i = 0; i < dim; ++i) r.point.phases[i] = wrap_phase(r.point.phases[i]);
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const PhasePoint& q) {
            return same_modulo_2pi(q, r.point, options.dedup_tolerance);
        });
        if (!duplicate) found.push_back(r.point);
    }

    std::sort(found.begin(), found.end(), [](const PhasePoint& a, const PhasePoint& b) {
        return std::lexicographical_compare(a.phases.data(), a.phases.data() + a.size(),
                                            b.phases.data(), b.phases.data() + b.size());
    });

    WellReport report;
    report.minima = found;
    report.regime = found.size() >= 2 ? WellRegime::DoubleWell : WellRegime::SingleWell;
    for (const auto& m : found) report.potential_at_minima.push_back(potential(params, m));

    if (found.size() >= 2) {
        const double lowest = *std::min_element(report.potential_at_minima.begin(),
                                                report.potential_at_minima.end());
        const int samples = 2001;
        double highest = lowest;
        for (int i = 0; i <= samples; ++i) {
            const double s = static_cast<double>(i) / samples;
            PhasePoint q((1.0 - s) * found[0].phases + s * found[1].phases);
            highest = std::max(highest, potential(params, q));
        }
        report.barrier_estimate = highest - lowest;
    }
    return report;
}

}  // namespace fourjj
