// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Pass criterion numbers as arguments to run a subset.

#include "fourjj/analysis.hpp"
#include "fourjj/cli/app.hpp"
#include "fourjj/landscape.hpp"
#include "generators.hpp"
#include "oracle.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace fourjj;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string sci(double x) { return fmt("%.3e", x); }

struct RefSet {
    std::string label;
    CircuitParams params;
};

// E_J = 50 E_C throughout.
std::vector<RefSet> reference_sets() {
    return {
        {"3j a=0.7", CircuitParams::three_junction(0.7)},
        {"3j a=0.4", CircuitParams::three_junction(0.4)},
        {"4j a=1 b=0.6", CircuitParams::four_junction(1.0, 0.6)},
        {"4j a=1 b=0.3", CircuitParams::four_junction(1.0, 0.3)},
        {"4j a=0.6 b=0.6", CircuitParams::four_junction(0.6, 0.6)},
        {"4j a=0.3 b=0.3", CircuitParams::four_junction(0.3, 0.3)},
        {"4j a=0.5 b=0.6", CircuitParams::four_junction(0.5, 0.6)},
        {"4j a=0.2 b=0.3", CircuitParams::four_junction(0.2, 0.3)},
    };
}

CircuitParams at(CircuitParams p, double f) {
    p.f_e = f;
    return p;
}

// Working cutoff for spectra: Cube(8) in 3D, Cube(12) in 2D.
BasisSpec working_basis(const CircuitParams& p) { return BasisSpec::cube(p.dimension(), p.dimension() == 3 ? 8 : 12); }

// ---------------------------------------------------------------------------

Outcome kinetic_equivalence() {
    constexpr int kDraws = 200;
    constexpr double kTol = 1e-10;
    testing::Gen g(1001);
    double worst = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        const double a = g.ratio(), b = g.ratio();
        const auto t = compute_transform(a, b);
        const double vd = g.uniform(-3, 3), vp = g.uniform(-3, 3), vm = g.uniform(-3, 3), xd = g.uniform(-3, 3);
        const auto mp = map_phases(t, 0.0, vd, vp, vm, xd);
        const Eigen::Vector3d v = mp.point.phases;
        const double orig = kinetic_form_original(a, b, v, xd);
        const double diag = kinetic_form_transformed(t, vd, vp, vm, xd);
        worst = std::max(worst, std::abs(orig - diag) / std::abs(orig));
    }
    return {worst < kTol, "200 draws, worst relative error " + sci(worst) + " (< 1e-10)"};
}

Outcome coefficient_identity() {
    constexpr int kDraws = 1000;
    constexpr double kTol = 1e-12;
    testing::Gen g(1002);
    double worst = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        const double a = g.ratio(), b = g.ratio();
        const auto t = compute_transform(a, b);
        worst = std::max(worst, std::abs((2 * a * t.b + t.b + kTwoPi) * b + a * t.b));
    }
    return {worst < kTol, "1000 draws, worst |(2ab+b+2pi)beta + ab| " + sci(worst) + " (< 1e-12)"};
}

Outcome minima() {
    constexpr double kTol = 1e-6;
    bool ok = true;
    double worst = 0.0;
    std::string notes;
    for (double beta : {0.4, 0.6, 0.8}) {
        const auto r = find_minima(CircuitParams::four_junction(1.0, beta, 50.0, 0.5));
        const double star = std::asin(std::sqrt((3 * beta - 1) / (4 * beta)));
        if (r.minima.size() != 2) {
            ok = false;
            notes += " beta=" + fmt("%g", beta) + " found " + std::to_string(r.minima.size());
            continue;
        }
        bool plus = false, minus = false;
        for (const auto& m : r.minima) {
            const double sign = m[0] > 0 ? 1.0 : -1.0;
            double err = 0.0;
            for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(m[i] - sign * star));
            worst = std::max(worst, err);
            (sign > 0 ? plus : minus) = true;
        }
        ok = ok && plus && minus;
    }
    const auto single = find_minima(CircuitParams::four_junction(1.0, 0.3, 50.0, 0.5));
    double origin = 0.0;
    for (const auto& m : single.minima) origin = std::max(origin, m.phases.cwiseAbs().maxCoeff());
    const bool single_ok = single.minima.size() == 1 && origin < kTol;
    ok = ok && worst < kTol && single_ok;
    return {ok, "beta 0.4/0.6/0.8 worst phase error " + sci(worst) + " rad (< 1e-6); beta 0.3 minima " +
                    std::to_string(single.minima.size()) + " at |phi| " + sci(origin) + notes};
}

Outcome symmetry_periodicity() {
    constexpr double kTol = 1e-8;
    constexpr int kLevels = 6;
    double worst_sym = 0.0, worst_per = 0.0;
    for (const auto& s : reference_sets()) {
        const auto basis = make_basis(s.params, working_basis(s.params));
        auto levels = [&](double f) { return solve_spectrum(at(s.params, f), basis, kLevels, {}).eigenvalues; };
        for (double d : {0.013, 0.07}) worst_sym = std::max(worst_sym, (levels(0.5 + d) - levels(0.5 - d)).cwiseAbs().maxCoeff());
        worst_per = std::max(worst_per, (levels(0.37) - levels(1.37)).cwiseAbs().maxCoeff());
    }
    return {worst_sym < kTol && worst_per < kTol, "8 sets, n<=5: worst mirror gap " + sci(worst_sym) +
                                                      ", worst period gap " + sci(worst_per) + " E_C (< 1e-8)"};
}

Outcome separability() {
    constexpr double kTol = 1e-8;
    double worst = 0.0;
    for (double a : {0.5, 1.0}) {
        auto p = CircuitParams::four_junction(a, 0.5, 50.0, 0.5);
        p.beta = 0.0;
        const auto basis = std::make_shared<const Basis>(enumerate_basis(BasisSpec::cube(3, 10), mass_matrix(p)));
        const auto r = eigensolve(assemble_hamiltonian(p, basis), 4);
        worst = std::max(worst, (r.eigenvalues - oracle::separable_beta0(p, 4)).cwiseAbs().maxCoeff());
    }
    return {worst < kTol, "alpha 0.5/1.0, 4 levels: worst deviation from the rotor product " + sci(worst) + " E_C (< 1e-8)"};
}

Outcome dual_solver_gauge() {
    constexpr double kSolverTol = 1e-9;
    constexpr double kGaugeTol = 1e-8;
    double solver = 0.0, gauge = 0.0;
    SolverOptions dense, iter;
    dense.method = SolverMethod::Dense;
    iter.method = SolverMethod::Iterative;
    for (const auto& s : reference_sets()) {
        for (double f : {0.5, 0.47}) {
            const auto p = at(s.params, f);
            const auto small = make_basis(p, BasisSpec::cube(p.dimension(), 4));
            const auto d = solve_spectrum(p, small, 6, dense).eigenvalues;
            const auto i = solve_spectrum(p, small, 6, iter).eigenvalues;
            solver = std::max(solver, (d - i).cwiseAbs().maxCoeff());
            const auto big = make_basis(p, working_basis(p));
            const auto g0 = solve_spectrum(p, big, 6, {}, FluxGauge::LastJunction).eigenvalues;
            const auto g1 = solve_spectrum(p, big, 6, {}, FluxGauge::ShiftedJunction).eigenvalues;
            gauge = std::max(gauge, (g0 - g1).cwiseAbs().maxCoeff());
        }
    }
    return {solver < kSolverTol && gauge < kGaugeTol, "dense vs iterative at Cube(4) " + sci(solver) +
                                                          " (< 1e-9); gauge shift " + sci(gauge) + " E_C (< 1e-8)"};
}

Outcome fd_oracle() {
    constexpr int kCoarse = 101;
    constexpr int kFine = 201;
    constexpr double kRatioLo = 3.0, kRatioHi = 5.0;
    const double r2 = (double(kFine) / kCoarse) * (double(kFine) / kCoarse);
    bool ok = true;
    double worst_margin = 0.0;  // |PW - extrapolated| / bound
    std::string ratios;
    for (double f : {0.5, 0.48}) {
        const auto p = CircuitParams::three_junction(0.7, 50.0, f);
        const auto pw = solve_spectrum(p, make_basis(p, BasisSpec::cube(2, 15)), 3).eigenvalues;
        const auto coarse = oracle::fd_oracle_3j(p, kCoarse, 3).eigenvalues;
        const auto fine = oracle::fd_oracle_3j(p, kFine, 3).eigenvalues;
        for (int n = 0; n < 3; ++n) {
            const double bound = std::abs(fine[n] - coarse[n]) / (r2 - 1.0);
            const double extrapolated = fine[n] + (fine[n] - coarse[n]) / (r2 - 1.0);
            const double dev = std::abs(pw[n] - extrapolated);
            const double ratio = (coarse[n] - pw[n]) / (fine[n] - pw[n]);
            ok = ok && dev <= bound && ratio >= kRatioLo && ratio <= kRatioHi;
            worst_margin = std::max(worst_margin, dev / bound);
            ratios += " " + fmt("%.3f", ratio);
        }
    }
    return {ok, "f 0.5/0.48, 3 levels: worst |PW - Richardson| / bound " + fmt("%.4f", worst_margin) +
                    " (<= 1); error ratios" + ratios + " (in [3, 5])"};
}

Outcome hellmann_feynman() {
    constexpr double kTol = 1e-5;
    constexpr double kStep = 1e-5;
    double worst = 0.0;
    for (const auto& base : {CircuitParams::four_junction(1.0, 0.6), CircuitParams::three_junction(0.7)}) {
        const auto basis = make_basis(base, BasisSpec::cube(base.dimension(), base.dimension() == 3 ? 10 : 14));
        for (double f : {0.44, 0.45, 0.46}) {
            const auto plus = solve_spectrum(at(base, f + kStep), basis, 2).eigenvalues;
            const auto minus = solve_spectrum(at(base, f - kStep), basis, 2).eigenvalues;
            const auto p = at(base, f);
            const auto r = solve_spectrum(p, basis, 2);
            const auto cur = assemble_current(p, basis);
            for (int n = 0; n < 2; ++n) {
                const double expect = cur.matrix_element(r.eigenvectors->col(n), r.eigenvectors->col(n)).real();
                const double deriv = -(plus[n] - minus[n]) / (2 * kStep) / (kTwoPi * p.ej_over_ec);
                worst = std::max(worst, std::abs(expect - deriv));
            }
        }
    }
    return {worst < kTol, "both variants, n 0/1, f 0.44/0.45/0.46: worst |<I> + dE/df/2pi E_J| " + sci(worst) +
                              " (< 1e-5)"};
}

Outcome selection_rules() {
    constexpr double kForbidden = 1e-3;
    constexpr double kSuppressed = 1e-2;
    constexpr double kAllowed = 0.1;
    constexpr int kWindowPoints = 21;
    bool ok = true;
    std::ostringstream os;
    os.precision(3);

    for (const auto& p : {CircuitParams::three_junction(0.7), CircuitParams::four_junction(1.0, 0.6)}) {
        const auto t = transition_sweep(p, {0.5}, 3, working_basis(p));
        const double ratio = t.t(0, 1) / t.t(0, 0);
        ok = ok && ratio < kForbidden;
        os << to_string(p.variant) << " a=" << p.alpha << (p.dimension() == 3 ? " b=" + fmt("%g", p.beta) : "")
           << " t02/t01 " << ratio << "; ";
    }

    const auto window = linear_grid(0.45, 0.55, kWindowPoints);
    for (const auto& p : {CircuitParams::four_junction(0.6, 0.6), CircuitParams::four_junction(0.3, 0.3)}) {
        const auto t = transition_sweep(p, window, 3, working_basis(p));
        double worst = 0.0, at_f = 0.0;
        int above = 0;
        for (int i = 0; i < kWindowPoints; ++i) {
            const double r = std::max(t.t(i, 1), t.t(i, 2)) / t.t(i, 0);
            above += r >= kSuppressed;
            if (r > worst) {
                worst = r;
                at_f = window[i];
            }
        }
        ok = ok && worst < kSuppressed;
        os << "a=b=" << p.alpha << " max leak " << worst << " at f=" << at_f << " (" << above << "/" << kWindowPoints
           << " points at or above 1e-2); ";
    }

    const auto p = CircuitParams::four_junction(0.2, 0.3);
    const auto t = transition_sweep(p, window, 3, working_basis(p));
    double best = 0.0;
    for (int i = 0; i < kWindowPoints; ++i)
        if (window[i] != 0.5) best = std::max(best, t.t(i, 2) / t.t(i, 0));
    ok = ok && best > kAllowed;
    os << "a=0.2 b=0.3 max t12/t01 " << best << " (limits 1e-3, 1e-2, 0.1)";
    return {ok, os.str()};
}

Outcome oscillator() {
    constexpr double kLo = 0.9e3, kHi = 1.2e3;
    const double c = 8e-15, l = 10e-12;
    const double three = oscillator_frequency(CircuitParams::three_junction(0.7), c, l).freq_ghz;
    const double four = oscillator_frequency(CircuitParams::four_junction(0.7, 0.7), c, l).freq_ghz;
    // Same order of magnitude as 1e3 GHz.
    const bool four_ok = four >= 1e3 / std::sqrt(10.0) && four <= 1e3 * std::sqrt(10.0);
    return {three >= kLo && three <= kHi && four_ok, "C=8 fF, L=10 pH: 3j " + fmt("%.1f", three) +
                                                         " GHz (in [900, 1200]); 4j " + fmt("%.1f", four) +
                                                         " GHz (within half a decade of 1e3)"};
}

Outcome two_level() {
    constexpr double kTol = 0.05;
    const auto c = compare_two_level(CircuitParams::four_junction(1.0, 0.6), BasisSpec::cube(3, 8), 0.005, 11);
    return {c.max_relative_deviation < kTol, "4j a=1 b=0.6, |f-1/2|<=0.005: max relative deviation " +
                                                 sci(c.max_relative_deviation) + " (< 0.05); delta " +
                                                 fmt("%.5f", c.qubit.delta) + " E_C"};
}

Outcome convergence() {
    constexpr double kTol = 1e-6;
    constexpr double kSlack = 1e-9;  // solver noise allowed in the ground-state sequence
    bool ok = true;
    double worst = 0.0;
    std::string where;
    for (const auto& s : reference_sets()) {
        std::vector<double> ground;
        Eigen::VectorXd e10, e12;
        for (int k : {6, 8, 10, 12}) {
            const auto p = at(s.params, 0.5);
            const auto e = solve_spectrum(p, make_basis(p, BasisSpec::cube(p.dimension(), k)), 4).eigenvalues;
            ground.push_back(e[0]);
            if (k == 10) e10 = e;
            if (k == 12) e12 = e;
        }
        for (std::size_t i = 1; i < ground.size(); ++i)
            if (ground[i] > ground[i - 1] + kSlack) {
                ok = false;
                where += " non-monotone:" + s.label;
            }
        const double d = (e12 - e10).cwiseAbs().maxCoeff();
        if (d > worst) worst = d;
        if (!(d < kTol)) {
            ok = false;
            where += " " + s.label + "=" + sci(d);
        }
    }
    return {ok, "8 sets at f=1/2, 4 levels: worst |E(12)-E(10)| " + sci(worst) +
                    " E_C (< 1e-6); ground energy non-increasing over k 6..12" + where};
}

Outcome cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fourjj_acceptance";
    fs::create_directories(dir);
    const fs::path cfg = dir / "run.ini";
    std::ofstream(cfg) << "[circuit]\nvariant = 4j\nalpha = 1\nbeta = 0.6\n"
                          "[basis]\nkmax = 6\n"
                          "[sweep]\nf_start = 0.45\nf_end = 0.55\nf_steps = 11\nlevels = 4\n";
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    std::ostringstream out, err;
    const int a = cli::run({"spectrum", "--config", cfg.string(), "--out", (dir / "a.csv").string()}, out, err);
    const int b = cli::run({"spectrum", "--config", cfg.string(), "--out", (dir / "b.csv").string()}, out, err);
    const std::string ta = slurp(dir / "a.csv");
    const bool same = a == 0 && b == 0 && !ta.empty() && ta == slurp(dir / "b.csv");

    const fs::path bad = dir / "bad.ini";
    std::ofstream(bad) << "[circuit]\nalpha = 1\nsurprise = 3\n";
    const int rejected = cli::run({"spectrum", "--config", bad.string()}, out, err);
    return {same && rejected == cli::kExitConfig, std::string("two spectrum runs ") +
                                                      (same ? "byte-identical" : "differ") + " (" +
                                                      std::to_string(ta.size()) + " bytes); unknown key exit " +
                                                      std::to_string(rejected) + " (expect 2)"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"kinetic-form equivalence", kinetic_equivalence},
        {"coefficient identity", coefficient_identity},
        {"double-well minima", minima},
        {"spectrum symmetry and periodicity", symmetry_periodicity},
        {"beta = 0 separability", separability},
        {"dual solver and gauge", dual_solver_gauge},
        {"finite-difference oracle", fd_oracle},
        {"Hellmann-Feynman", hellmann_feynman},
        {"selection rules", selection_rules},
        {"oscillator frequency", oscillator},
        {"two-level model", two_level},
        {"basis convergence", convergence},
        {"CLI determinism and strict config", cli_determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail
                  << "  [" << fmt("%.1f", secs) << " s]" << std::endl;
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : std::string("ALL PASSED")) << std::endl;
    return failed ? 1 : 0;
}
