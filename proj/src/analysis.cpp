#include "fourjj/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fourjj {

QubitParams extract_qubit(const CircuitParams& params, const BasisSpec& basis, const QubitOptions& options) {
    validate(params);
    if (!(options.step > 0.0)) throw DomainError("extract_qubit: step must be positive");
    const auto b = make_basis(params, basis);

    auto at = [&](double f) {
        CircuitParams p = params;
        p.f_e = f;
        return p;
    };
    SolverOptions s = options.solver;
    s.want_vectors = false;

    QubitParams q;
    q.ip_point = options.ip_point;
    const Eigen::VectorXd e_half = solve_spectrum(at(0.5), b, 2, s).eigenvalues;
    q.delta = e_half[1] - e_half[0];

    const double h = options.step;
    const double ep = solve_spectrum(at(options.ip_point + h), b, 1, s).eigenvalues[0];
    const double em = solve_spectrum(at(options.ip_point - h), b, 1, s).eigenvalues[0];
    // I_p = |dE0/df| / Phi0 = |d(E0/E_J)/df| / 2pi in units of I_c.
    q.i_p = std::abs((ep - em) / (2.0 * h)) / (kTwoPi * params.ej_over_ec);
    q.epsilon_slope = 4.0 * kPi * q.i_p * params.ej_over_ec;

    SolverOptions sv = options.solver;
    sv.want_vectors = true;
    const CircuitParams pp = at(options.ip_point);
    const SpectrumResult r = solve_spectrum(pp, b, 1, sv);
    const HermitianOperator current = assemble_current(pp, b);
    q.i_p_expectation = -current.matrix_element(r.eigenvectors->col(0), r.eigenvectors->col(0)).real();
    return q;
}

double two_level_gap(const QubitParams& q, double f_e) {
    const double eps = q.epsilon(f_e);
    return std::sqrt(eps * eps + q.delta * q.delta);
}

TwoLevelComparison compare_two_level(const CircuitParams& params, const BasisSpec& basis, double half_width,
                                     int points, const QubitOptions& options, int jobs) {
    if (!(half_width >= 0.0)) throw DomainError("compare_two_level: half width must be nonnegative");
    TwoLevelComparison c;
    c.qubit = extract_qubit(params, basis, options);
    c.f_values = linear_grid(0.5 - half_width, 0.5 + half_width, points);
    SweepOptions so;
    so.solver = options.solver;
    so.jobs = jobs;
    const SweepTable sweep = sweep_flux(params, c.f_values, 2, basis, so);
    for (std::size_t i = 0; i < c.f_values.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double exact = sweep.energies(row, 1) - sweep.energies(row, 0);
        const double model = two_level_gap(c.qubit, c.f_values[i]);
        c.exact_gap.push_back(exact);
        c.model_gap.push_back(model);
        c.max_relative_deviation = std::max(c.max_relative_deviation, std::abs(model - exact) / exact);
    }
    return c;
}

std::string to_string(LevelType t) { return t == LevelType::XiType ? "Xi" : "Delta"; }

LevelClassification classify_levels(const SweepTable& sweep, const TransitionTable& transitions,
                                    const ClassificationThresholds& thresholds) {
    const std::size_t n = sweep.f_values.size();
    if (transitions.spectrum.f_values != sweep.f_values || static_cast<std::size_t>(transitions.t.rows()) != n)
        throw DomainError("classify_levels: sweep and transitions use different flux grids");
    if (sweep.energies.cols() < 4) throw DomainError("classify_levels: sweep needs at least four levels");
    if (n == 0) throw DomainError("classify_levels: empty grid");

    LevelClassification out;
    out.thresholds = thresholds;
    out.f_values = sweep.f_values;
    out.three_levels_isolated = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double t01 = transitions.t(row, 0);
        const double t02 = transitions.t(row, 1);
        const double t12 = transitions.t(row, 2);
        out.labels.push_back(t02 < thresholds.xi * t01 ? LevelType::XiType : LevelType::DeltaType);
        const double leak = std::max(t02, t12) / t01;
        out.leakage.push_back(leak);
        out.leakage_figure = std::max(out.leakage_figure, leak);
        out.max_t12_ratio = std::max(out.max_t12_ratio, t12 / t01);
        const auto e = sweep.energies.row(row);
        if (!(e[3] - e[2] > e[2] - e[1])) out.three_levels_isolated = false;
    }
    const bool qutrit = out.three_levels_isolated && out.max_t12_ratio > thresholds.qutrit_t12;
    out.verdict = qutrit ? "qutrit-suited" : "qubit-suited";
    return out;
}

std::string to_string(AdiabaticVerdict v) {
    switch (v) {
        case AdiabaticVerdict::Valid: return "valid";
        case AdiabaticVerdict::Borderline: return "borderline";
        case AdiabaticVerdict::Invalid: return "invalid";
    }
    return "unknown";
}

AdiabaticReport adiabatic_check_ghz(const CircuitParams& params, std::optional<double> capacitance,
                                    std::optional<double> inductance, double gap_ghz, double threshold) {
    if (!(gap_ghz >= 0.0)) throw DomainError("adiabatic_check: gap must be nonnegative");
    const OscillatorReport osc = oscillator_frequency(params, capacitance, inductance);
    AdiabaticReport r;
    r.gap_ghz = gap_ghz;
    r.oscillator_ghz = osc.freq_ghz;
    r.threshold = threshold;
    r.ratio = osc.freq_ghz > 0.0 ? gap_ghz / osc.freq_ghz : std::numeric_limits<double>::infinity();
    if (std::abs(r.ratio - threshold) <= 1e-9 * threshold)
        r.verdict = AdiabaticVerdict::Borderline;
    else
        r.verdict = r.ratio < threshold ? AdiabaticVerdict::Valid : AdiabaticVerdict::Invalid;
    return r;
}

AdiabaticReport adiabatic_check(const CircuitParams& params, std::optional<double> capacitance,
                                std::optional<double> inductance, double gap_ec, std::optional<double> ec_ghz,
                                double threshold) {
    if (!ec_ghz) throw DomainError("adiabatic_check: ec_ghz is required to express the gap in GHz");
    if (!(*ec_ghz > 0.0)) throw DomainError("adiabatic_check: ec_ghz must be positive");
    return adiabatic_check_ghz(params, capacitance, inductance, gap_ec * *ec_ghz, threshold);
}

}  // namespace fourjj
