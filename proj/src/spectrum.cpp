#include "fourjj/spectrum.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace fourjj {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::thread::hardware_concurrency();
    workers = std::max<std::size_t>(1, std::min(workers, count));

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr failure;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

std::shared_ptr<const Basis> make_basis(const CircuitParams& params, const BasisSpec& spec) {
    if (spec.dimension != params.dimension()) throw DomainError("basis dimension does not match circuit variant");
    return std::make_shared<const Basis>(enumerate_basis(spec, mass_matrix(params)));
}

SpectrumResult solve_spectrum(const CircuitParams& params, const std::shared_ptr<const Basis>& basis, int m,
                              const SolverOptions& solver, FluxGauge gauge) {
    return eigensolve(assemble_hamiltonian(params, basis, gauge), m, solver);
}

namespace {

std::string sweep_failure(double f, const std::exception& e) {
    std::ostringstream os;
    os.precision(12);
    os << "solver failed at f_e = " << f << ": " << e.what();
    return os.str();
}

template <class PerPoint>
void run_grid(const CircuitParams& params, const std::vector<double>& f_grid, int jobs, PerPoint per_point) {
    validate(params);
    if (f_grid.empty()) throw DomainError("flux grid is empty");
    parallel_for(f_grid.size(), jobs, [&](std::size_t i) {
        CircuitParams p = params;
        p.f_e = f_grid[i];
        try {
            per_point(i, p);
        } catch (const DomainError&) {
            throw;
        } catch (const std::exception& e) {
            throw SweepError(sweep_failure(f_grid[i], e), f_grid[i]);
        }
    });
}

}  // namespace

SweepTable sweep_flux(const CircuitParams& params, const std::vector<double>& f_grid, int m,
                      const BasisSpec& basis, const SweepOptions& options) {
    const auto b = make_basis(params, basis);
    SweepTable table;
    table.f_values = f_grid;
    table.params = params;
    table.basis = basis;
    table.energies.resize(static_cast<Eigen::Index>(f_grid.size()), m);

    SolverOptions solver = options.solver;
    solver.want_vectors = false;
    run_grid(params, f_grid, options.jobs, [&](std::size_t i, const CircuitParams& p) {
        const SpectrumResult r = solve_spectrum(p, b, m, solver, options.gauge);
        table.energies.row(static_cast<Eigen::Index>(i)) = r.eigenvalues.transpose();
    });
    if (!f_grid.empty()) table.params.f_e = f_grid.back();
    return table;
}

TransitionElements transition_elements(const SpectrumResult& spectrum, const HermitianOperator& current,
                                       double phi_a0) {
    if (!spectrum.eigenvectors) throw DomainError("transition elements need eigenvectors");
    const Eigen::MatrixXcd& v = *spectrum.eigenvectors;
    if (v.cols() < 3) throw DomainError("transition elements need at least three levels");
    if (static_cast<std::size_t>(v.rows()) != current.size())
        throw DomainError("eigenvectors do not match the current operator basis");

    const Eigen::MatrixXcd iv = current.apply(v);
    const Eigen::MatrixXcd t = v.adjoint() * iv;
    TransitionElements out;
    out.magnitude = (t.cwiseAbs() * std::abs(phi_a0)).eval();
    // |t_ij| = |t_ji| exactly for a Hermitian operator; symmetrize rounding noise.
    out.magnitude = (0.5 * (out.magnitude + out.magnitude.transpose())).eval();
    const Eigen::VectorXd& e = spectrum.eigenvalues;
    for (Eigen::Index i = 0; i < e.size(); ++i)
        for (Eigen::Index j = i + 1; j < e.size(); ++j)
            if (std::abs(e[j] - e[i]) < kQuasiDegenerate)
                out.quasi_degenerate.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return out;
}

TransitionTable transition_sweep(const CircuitParams& params, const std::vector<double>& f_grid, int m,
                                 const BasisSpec& basis, const SweepOptions& options, double phi_a0) {
    if (m < 3) throw DomainError("transition sweep needs at least three levels");
    const auto b = make_basis(params, basis);
    TransitionTable table;
    table.phi_a0 = phi_a0;
    table.spectrum.f_values = f_grid;
    table.spectrum.params = params;
    table.spectrum.basis = basis;
    const auto rows = static_cast<Eigen::Index>(f_grid.size());
    table.spectrum.energies.resize(rows, m);
    table.t.resize(rows, 3);
    table.quasi_degenerate.resize(f_grid.size());

    SolverOptions solver = options.solver;
    solver.want_vectors = true;
    run_grid(params, f_grid, options.jobs, [&](std::size_t i, const CircuitParams& p) {
        const SpectrumResult r = solve_spectrum(p, b, m, solver, options.gauge);
        const TransitionElements te = transition_elements(r, assemble_current(p, b), phi_a0);
        const auto row = static_cast<Eigen::Index>(i);
        table.spectrum.energies.row(row) = r.eigenvalues.transpose();
        table.t(row, 0) = te.t01();
        table.t(row, 1) = te.t02();
        table.t(row, 2) = te.t12();
        table.quasi_degenerate[i] = te.quasi_degenerate;
    });
    if (!f_grid.empty()) table.spectrum.params.f_e = f_grid.back();
    return table;
}

ConvergenceReport converge(const CircuitParams& params, int m, double tol, const ConvergenceOptions& options) {
    validate(params);
    if (!(tol > 0.0)) throw DomainError("convergence tolerance must be positive");
    if (m < 1) throw DomainError("level count must be at least 1");
    const int dim = params.dimension();

    int k0 = 0;
    while (std::pow(2.0 * k0 + 1.0, dim) < m) ++k0;

    std::map<int, Eigen::VectorXd> cache;
    auto energies = [&](int k) -> const Eigen::VectorXd& {
        auto it = cache.find(k);
        if (it == cache.end()) {
            SolverOptions s = options.solver;
            s.want_vectors = false;
            const auto b = make_basis(params, BasisSpec::cube(dim, k));
            it = cache.emplace(k, solve_spectrum(params, b, m, s).eigenvalues).first;
        }
        return it->second;
    };

    ConvergenceReport report;
    auto finish = [&]() {
        for (const auto& [k, e] : cache) {
            report.k_values.push_back(k);
            report.eigenvalues.push_back(e);
        }
        for (std::size_t i = 1; i < report.eigenvalues.size(); ++i)
            if (report.eigenvalues[i][0] > report.eigenvalues[i - 1][0] + options.monotone_slack)
                report.ground_monotone = false;
        for (std::size_t i = 1; i < report.deltas.size(); ++i)
            if ((report.deltas[i].array() > report.deltas[i - 1].array() + options.monotone_slack).any())
                report.deltas_monotone = false;
    };

    for (int k = k0; k + 2 <= options.k_cap; ++k) {
        const Eigen::VectorXd delta = (energies(k + 2) - energies(k)).cwiseAbs();
        report.deltas.push_back(delta);
        if (delta.maxCoeff() < tol) {
            report.converged = true;
            report.k_max = k;
            finish();
            return report;
        }
    }
    finish();
    std::ostringstream os;
    os << "basis convergence not reached below k_max = " << options.k_cap << " (tolerance " << tol << ")";
    throw ConvergenceError(os.str(), report);
}

std::vector<double> linear_grid(double start, double end, int steps) {
    if (steps < 1) throw DomainError("grid needs at least one point");
    if (!(start <= end)) throw DomainError("grid start must not exceed its end");
    std::vector<double> g(static_cast<std::size_t>(steps));
    if (steps == 1) {
        g[0] = start;
        return g;
    }
    for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = start + (end - start) * i / (steps - 1);
    g.back() = end;
    return g;
}

}  // namespace fourjj
