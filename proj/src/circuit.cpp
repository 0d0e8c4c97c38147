#include "fourjj/circuit.hpp"

#include <cmath>
#include <sstream>

namespace fourjj {

namespace {

bool in_unit_interval(double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; }

double sum3(const PhasePoint& p) { return p[0] + p[1] + p[2]; }

void require_size(const PhasePoint& p, Eigen::Index n, const char* where) {
    if (p.size() != n) {
        std::ostringstream os;
        os << where << ": expected " << n << " phases, got " << p.size();
        throw std::invalid_argument(os.str());
    }
}

// 1 - cos x without cancellation near the minima.
double versine(double x) {
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::FourJunction ? "4j" : "3j"; }

CircuitParams CircuitParams::four_junction(double alpha, double beta, double ej_over_ec,
                                           double f_e) {
    CircuitParams p;
    p.variant = Variant::FourJunction;
    p.alpha = alpha;
    p.beta = beta;
    p.ej_over_ec = ej_over_ec;
    p.f_e = f_e;
    return p;
}

CircuitParams CircuitParams::three_junction(double alpha, double ej_over_ec, double f_e) {
    CircuitParams p;
    p.variant = Variant::ThreeJunction;
    p.alpha = alpha;
    p.beta = 0.0;
    p.ej_over_ec = ej_over_ec;
    p.f_e = f_e;
    return p;
}

void validate(const CircuitParams& p) {
    if (!in_unit_interval(p.alpha)) throw DomainError("alpha must lie in (0, 1]");
    if (p.variant == Variant::FourJunction && !in_unit_interval(p.beta))
        throw DomainError("beta must lie in (0, 1]");
    if (!(std::isfinite(p.ej_over_ec) && p.ej_over_ec > 0.0))
        throw DomainError("ej_over_ec must be positive");
    if (!std::isfinite(p.f_e)) throw DomainError("f_e must be finite");
    if (p.capacitance && !(*p.capacitance > 0.0)) throw DomainError("capacitance must be positive");
    if (p.inductance && !(*p.inductance > 0.0)) throw DomainError("inductance must be positive");
}

PhasePoint::PhasePoint(std::initializer_list<double> v) : phases(static_cast<Eigen::Index>(v.size())) {
    Eigen::Index i = 0;
    for (double x : v) phases[i++] = x;
}

TransformCoefficients compute_transform(double alpha, double beta) {
    if (!in_unit_interval(alpha)) throw DomainError("compute_transform: alpha must lie in (0, 1]");
    if (!in_unit_interval(beta)) throw DomainError("compute_transform: beta must lie in (0, 1]");

    TransformCoefficients t;
    t.alpha = alpha;
    t.beta = beta;

    const double s = alpha + beta;
    const double radical = std::sqrt(1.0 + (alpha - beta) * (alpha - beta) + 8.0 * beta * beta +
                                     2.0 * (beta - alpha));
    t.lambda_plus = 0.5 * ((1.0 + alpha + 3.0 * beta) + radical);
    t.lambda_minus = 0.5 * ((1.0 + alpha + 3.0 * beta) - radical);

    auto b_of = [&](double lambda) {
        return std::abs(s - lambda) /
               std::sqrt(2.0 * s * s + 4.0 * beta * beta - 4.0 * s * lambda + 2.0 * lambda * lambda);
    };
    t.b_plus = b_of(t.lambda_plus);
    t.b_minus = b_of(t.lambda_minus);
    t.b = -kTwoPi * beta / (alpha + beta + 2.0 * alpha * beta);

    const double dp = s - t.lambda_plus;
    const double dm = s - t.lambda_minus;
    t.c_plus = -2.0 * beta * t.b_plus / dp;
    t.c_minus = -2.0 * beta * t.b_minus / dm;

    auto gamma_of = [&](double bpm, double d) {
        return 2.0 * bpm * bpm *
               (1.0 + 2.0 * beta - 4.0 * beta * beta / d + 2.0 * beta * beta * s / (d * d));
    };
    t.gamma_plus = gamma_of(t.b_plus, dp);
    t.gamma_minus = gamma_of(t.b_minus, dm);
    t.gamma_xi = (2.0 * alpha * alpha + 4.0 * beta * alpha * alpha + alpha + beta +
                  4.0 * alpha * beta) * t.b * t.b +
                 4.0 * kPi * beta * (1.0 + 2.0 * alpha) * t.b + 4.0 * kPi * kPi * beta;

    // Independent route: the symmetric-subspace (phi_1 = phi_2) block of the
    // velocity form in the orthonormal basis ((1,1,0)/sqrt2, (0,0,1)).
    Eigen::Matrix2d block;
    block << 1.0 + 2.0 * beta, std::sqrt(2.0) * beta, std::sqrt(2.0) * beta, s;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
    const double numeric_minus = es.eigenvalues()[0];
    const double numeric_plus = es.eigenvalues()[1];
    t.discrepancy = std::max(std::abs(t.gamma_plus - numeric_plus),
                             std::abs(t.gamma_minus - numeric_minus));
    if (t.discrepancy > kTransformTolerance) {
        std::ostringstream os;
        os << "closed-form Gamma_pm deviate from numeric diagonalization by " << t.discrepancy
           << " at alpha=" << alpha << " beta=" << beta << "; using numeric values";
        t.diagnostic = os.str();
        t.gamma_plus = numeric_plus;
        t.gamma_minus = numeric_minus;
    }
    return t;
}

MappedPhases map_phases(const TransformCoefficients& t, double f_e, double varphi,
                        double varphi_plus, double varphi_minus, double xi) {
    const double common = t.b_plus * varphi_plus + t.b_minus * varphi_minus + t.alpha * t.b * xi;
    const double half = varphi / std::sqrt(2.0);
    MappedPhases m;
    m.point = PhasePoint{half + common, -half + common,
                         t.c_plus * varphi_plus + t.c_minus * varphi_minus + t.b * xi};
    m.phi4 = -sum3(m.point) - kTwoPi * (f_e + xi);
    return m;
}

double kinetic_form_original(double alpha, double beta, const Eigen::Vector3d& v,
                             double flux_velocity) {
    const double loop = v[0] + v[1] + v[2] + kTwoPi * flux_velocity;
    return v[0] * v[0] + v[1] * v[1] + alpha * v[2] * v[2] + beta * loop * loop;
}

double kinetic_form_transformed(const TransformCoefficients& t, double varphi_dot,
                                double varphi_plus_dot, double varphi_minus_dot, double xi_dot) {
    return varphi_dot * varphi_dot + t.gamma_plus * varphi_plus_dot * varphi_plus_dot +
           t.gamma_minus * varphi_minus_dot * varphi_minus_dot + t.gamma_xi * xi_dot * xi_dot;
}

double potential_4j(const PhasePoint& p, double alpha, double beta, double f_tot) {
    require_size(p, 3, "potential_4j");
    return versine(p[0]) + versine(p[1]) + alpha * versine(p[2]) + beta * versine(sum3(p) + kTwoPi * f_tot);
}

double potential_3j(const PhasePoint& p, double alpha, double f_tot) {
    require_size(p, 2, "potential_3j");
    return versine(p[0]) + versine(p[1]) + alpha * versine(p[0] - p[1] + kTwoPi * f_tot);
}

double potential(const CircuitParams& params, const PhasePoint& p) {
    return params.variant == Variant::FourJunction
               ? potential_4j(p, params.alpha, params.beta, params.f_e)
               : potential_3j(p, params.alpha, params.f_e);
}

double potential_4j_xi(const PhasePoint& p, const TransformCoefficients& t, double f_e, double xi) {
    require_size(p, 3, "potential_4j_xi");
    const double a = t.alpha;
    const double b = t.b;
    return 2.0 + a + t.beta - std::cos(p[0] + a * b * xi) - std::cos(p[1] + a * b * xi) -
           a * std::cos(p[2] + b * xi) -
           t.beta * std::cos(sum3(p) + (2.0 * a * b + b + kTwoPi) * xi + kTwoPi * f_e);
}

double potential_3j_xi(const PhasePoint& p, double alpha, double f_e, double xi) {
    require_size(p, 2, "potential_3j_xi");
    const double phi_p = 0.5 * (p[0] + p[1]);
    const double phi_m = 0.5 * (p[0] - p[1]);
    const double denom = 1.0 + 2.0 * alpha;
    return 2.0 + alpha - 2.0 * std::cos(phi_p) * std::cos(phi_m - kTwoPi * alpha / denom * xi) -
           alpha * std::cos(2.0 * phi_m + kTwoPi / denom * xi + kTwoPi * f_e);
}

double current_4j(const PhasePoint& p, double alpha, double beta, double f_e) {
    require_size(p, 3, "current_4j");
    const double pref = alpha * beta / (alpha + beta + 2.0 * alpha * beta);
    return pref * (std::sin(p[0]) + std::sin(p[1]) + std::sin(p[2]) -
                   std::sin(sum3(p) + kTwoPi * f_e));
}

double current_3j(const PhasePoint& p, double alpha, double f_e) {
    require_size(p, 2, "current_3j");
    const double pref = alpha / (1.0 + 2.0 * alpha);
    return pref * (std::sin(p[0]) - std::sin(p[1]) - std::sin(p[0] - p[1] + kTwoPi * f_e));
}

double current(const CircuitParams& params, const PhasePoint& p) {
    return params.variant == Variant::FourJunction
               ? current_4j(p, params.alpha, params.beta, params.f_e)
               : current_3j(p, params.alpha, params.f_e);
}

double current_prefactor(const CircuitParams& params) {
    const double a = params.alpha;
    const double b = params.beta;
    return params.variant == Variant::FourJunction ? a * b / (a + b + 2.0 * a * b)
                                                   : a / (1.0 + 2.0 * a);
}

MassMatrix mass_matrix(const CircuitParams& params) {
    const double a = params.alpha;
    const double b = params.beta;
    MassMatrix m;
    if (params.variant == Variant::FourJunction) {
        m.entries.resize(3, 3);
        m.entries << 1.0 + b, b, b,
                     b, 1.0 + b, b,
                     b, b, a + b;
    } else {
        m.entries.resize(2, 2);
        m.entries << 1.0 + a, -a,
                     -a, 1.0 + a;
    }
    return m;
}

std::vector<HarmonicTerm> josephson_terms(const CircuitParams& params, FluxGauge gauge) {
    const double flux = kTwoPi * params.f_e;
    const bool shifted = gauge == FluxGauge::ShiftedJunction;
    if (params.variant == Variant::FourJunction) {
        return {
            {{1, 0, 0}, 1.0, 0.0},
            {{0, 1, 0}, 1.0, 0.0},
            {{0, 0, 1}, params.alpha, shifted ? -flux : 0.0},
            {{1, 1, 1}, params.beta, shifted ? 0.0 : flux},
        };
    }
    return {
        {{1, 0, 0}, 1.0, shifted ? -flux : 0.0},
        {{0, 1, 0}, 1.0, 0.0},
        {{1, -1, 0}, params.alpha, shifted ? 0.0 : flux},
    };
}

double josephson_constant(const CircuitParams& params) {
    return params.variant == Variant::FourJunction ? 2.0 + params.alpha + params.beta
                                                   : 2.0 + params.alpha;
}

std::vector<HarmonicTerm> current_terms(const CircuitParams& params) {
    const double pref = current_prefactor(params);
    const double flux = kTwoPi * params.f_e;
    if (params.variant == Variant::FourJunction) {
        return {
            {{1, 0, 0}, pref, 0.0},
            {{0, 1, 0}, pref, 0.0},
            {{0, 0, 1}, pref, 0.0},
            {{1, 1, 1}, -pref, flux},
        };
    }
    return {
        {{1, 0, 0}, pref, 0.0},
        {{0, 1, 0}, -pref, 0.0},
        {{1, -1, 0}, -pref, flux},
    };
}

}  // namespace fourjj
