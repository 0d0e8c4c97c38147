#include "fourjj/cli/app.hpp"
#include "fourjj/cli/config.hpp"
#include "fourjj/cli/format.hpp"

#include "fourjj/landscape.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace fourjj::cli {

namespace {

using nlohmann::json;

struct Overrides {
    std::string config_path;
    std::optional<std::string> variant;
    std::optional<double> alpha, beta, ej_over_ec, f_e, fe_start, fe_end, capacitance, inductance, ec_ghz;
    std::optional<int> fe_steps, levels, kmax, jobs;
    std::optional<std::string> out, format, method;
};

void add_common_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_path, "INI configuration file");
    cmd.add_option("--variant", o.variant, "circuit variant")->check(CLI::IsMember({"3j", "4j"}));
    cmd.add_option("--alpha", o.alpha, "junction ratio alpha");
    cmd.add_option("--beta", o.beta, "junction ratio beta (4j)");
    cmd.add_option("--ej-over-ec", o.ej_over_ec, "E_J / E_C");
    cmd.add_option("--fe", o.f_e, "static reduced flux for single-point commands");
    cmd.add_option("--fe-start", o.fe_start, "first flux point of the sweep");
    cmd.add_option("--fe-end", o.fe_end, "last flux point of the sweep");
    cmd.add_option("--fe-steps", o.fe_steps, "number of flux points");
    cmd.add_option("--levels", o.levels, "number of levels");
    cmd.add_option("--kmax", o.kmax, "cube cutoff");
    cmd.add_option("--jobs", o.jobs, "concurrent sweep points (0: all cores)");
    cmd.add_option("--capacitance", o.capacitance, "junction capacitance C, farads");
    cmd.add_option("--inductance", o.inductance, "loop inductance L, henries");
    cmd.add_option("--ec-ghz", o.ec_ghz, "E_C / h in GHz");
    cmd.add_option("--method", o.method, "eigensolver")->check(CLI::IsMember({"auto", "dense", "iterative"}));
    cmd.add_option("--out", o.out, "output path, - for standard output");
    cmd.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig effective_config(const Overrides& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    std::ostringstream file;  // overrides go through the same parser as the file
    auto put = [&](const std::string& section, const std::string& key, const std::string& v) {
        file << "[" << section << "]\n" << key << " = " << v << "\n";
    };
    auto num = [&](const std::string& section, const std::string& key, const std::optional<double>& v) {
        if (v) put(section, key, format_number(*v));
    };
    auto whole = [&](const std::string& section, const std::string& key, const std::optional<int>& v) {
        if (v) put(section, key, std::to_string(*v));
    };
    if (o.variant) put("circuit", "variant", *o.variant);
    num("circuit", "alpha", o.alpha);
    num("circuit", "beta", o.beta);
    num("circuit", "ej_over_ec", o.ej_over_ec);
    num("circuit", "f_e", o.f_e);
    num("circuit", "capacitance", o.capacitance);
    num("circuit", "inductance", o.inductance);
    num("circuit", "ec_ghz", o.ec_ghz);
    whole("basis", "kmax", o.kmax);
    if (o.kmax) put("basis", "kind", "cube");
    num("sweep", "f_start", o.fe_start);
    num("sweep", "f_end", o.fe_end);
    whole("sweep", "f_steps", o.fe_steps);
    whole("sweep", "levels", o.levels);
    whole("sweep", "jobs", o.jobs);
    if (o.method) put("solver", "method", *o.method);
    if (o.out) put("output", "path", *o.out);
    if (o.format) put("output", "format", *o.format);
    // Each override is its own one-key document so duplicates across the file
    // and the flags resolve in favour of the flag.
    std::istringstream lines(file.str());
    std::string header, entry;
    while (std::getline(lines, header) && std::getline(lines, entry))
        c = parse_config(header + "\n" + entry + "\n", c, "command line");
    check_config(c);
    return c;
}

std::string metadata_line(const std::string& command, const RunConfig& c) {
    std::ostringstream os;
    os << "# fourjj " << kToolVersion << " command=" << command << " variant=" << to_string(c.circuit.variant)
       << " alpha=" << format_number(c.circuit.alpha);
    if (c.circuit.variant == Variant::FourJunction) os << " beta=" << format_number(c.circuit.beta);
    os << " ej_over_ec=" << format_number(c.circuit.ej_over_ec);
    if (command == "potential" || command == "converge") os << " f_e=" << format_number(c.circuit.f_e);
    if (command != "potential") {
        os << " basis=" << describe(c.basis_spec()) << " solver=" << to_string(c.solver.method)
           << " tolerance=" << format_number(c.solver.tolerance);
    }
    if (command == "spectrum" || command == "transitions")
        os << " f_start=" << format_number(c.f_start) << " f_end=" << format_number(c.f_end)
           << " f_steps=" << c.f_steps << " levels=" << c.levels;
    if (command == "transitions") os << " phi_a0=" << format_number(c.phi_a0);
    if (command == "potential") os << " phi3=" << format_number(c.phi3) << " resolution=" << c.resolution;
    os << "\n";
    return os.str();
}

json metadata_json(const std::string& command, const RunConfig& c) {
    json m;
    m["tool"] = "fourjj";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["variant"] = to_string(c.circuit.variant);
    m["alpha"] = round12(c.circuit.alpha);
    if (c.circuit.variant == Variant::FourJunction) m["beta"] = round12(c.circuit.beta);
    m["ej_over_ec"] = round12(c.circuit.ej_over_ec);
    m["f_e"] = round12(c.circuit.f_e);
    m["basis"] = describe(c.basis_spec());
    m["solver"] = to_string(c.solver.method);
    m["tolerance"] = round12(c.solver.tolerance);
    return m;
}

json rounded(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(round12(v[i]));
    return a;
}

json rounded(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(round12(x));
    return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

SweepOptions sweep_options(const RunConfig& c) {
    SweepOptions s;
    s.solver = c.solver;
    s.jobs = c.jobs;
    return s;
}

std::string cmd_spectrum(const RunConfig& c) {
    const auto grid = c.flux_grid();
    const SweepTable t = sweep_flux(c.circuit, grid, c.levels, c.basis_spec(), sweep_options(c));
    if (c.format == OutputFormat::Json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["metadata"] = metadata_json("spectrum", c);
        j["f_e"] = rounded(grid);
        json rows = json::array();
        for (Eigen::Index i = 0; i < t.energies.rows(); ++i) rows.push_back(rounded(t.energies.row(i).transpose().eval()));
        j["energies"] = rows;
        return dump(j);
    }
    std::string s = metadata_line("spectrum", c) + "f_e";
    for (int n = 0; n < c.levels; ++n) s += ",E" + std::to_string(n);
    s += "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i]};
        for (int n = 0; n < c.levels; ++n) row.push_back(t.energies(static_cast<Eigen::Index>(i), n));
        s += csv_row(row);
    }
    return s;
}

std::string cmd_potential(const RunConfig& c) {
    const int n = c.resolution;
    const bool four = c.circuit.variant == Variant::FourJunction;
    std::vector<double> axis(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) axis[static_cast<std::size_t>(i)] = kTwoPi * (i - 0.5 * n) / n;
    auto value = [&](double p1, double p2) {
        return four ? potential(c.circuit, PhasePoint{p1, p2, c.phi3}) : potential(c.circuit, PhasePoint{p1, p2});
    };
    if (c.format == OutputFormat::Json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        json meta = metadata_json("potential", c);
        meta.erase("basis");
        meta.erase("solver");
        meta.erase("tolerance");
        if (four) meta["phi3"] = round12(c.phi3);
        j["metadata"] = meta;
        j["phi"] = rounded(axis);
        json grid = json::array();
        for (double p1 : axis) {
            std::vector<double> row;
            for (double p2 : axis) row.push_back(value(p1, p2));
            grid.push_back(rounded(row));
        }
        j["U_over_EJ"] = grid;
        return dump(j);
    }
    std::string s = metadata_line("potential", c) + "phi1,phi2,U_over_EJ\n";
    for (double p1 : axis)
        for (double p2 : axis) s += csv_row({p1, p2, value(p1, p2)});
    return s;
}

std::string cmd_transitions(const RunConfig& c) {
    const auto grid = c.flux_grid();
    const int m = std::max(c.levels, 3);
    const TransitionTable t = transition_sweep(c.circuit, grid, m, c.basis_spec(), sweep_options(c), c.phi_a0);
    if (c.format == OutputFormat::Json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["metadata"] = metadata_json("transitions", c);
        j["metadata"]["phi_a0"] = round12(c.phi_a0);
        j["f_e"] = rounded(grid);
        for (int col = 0; col < 3; ++col) {
            static const char* names[] = {"t01", "t02", "t12"};
            j[names[col]] = rounded(t.t.col(col).eval());
        }
        json flags = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (const auto& [a, b] : t.quasi_degenerate[i])
                flags.push_back({{"f_e", round12(grid[i])}, {"levels", {a, b}}});
        j["quasi_degenerate"] = flags;
        return dump(j);
    }
    std::string s = metadata_line("transitions", c);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (const auto& [a, b] : t.quasi_degenerate[i])
            s += "# quasi-degenerate f_e=" + format_number(grid[i]) + " levels=" + std::to_string(a) + "," +
                 std::to_string(b) + "\n";
    s += "f_e,t01,t02,t12\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        s += csv_row({grid[i], t.t(r, 0), t.t(r, 1), t.t(r, 2)});
    }
    return s;
}

json convergence_json(const ConvergenceReport& r, double tol) {
    json j;
    j["converged"] = r.converged;
    j["k_max"] = r.converged ? json(r.k_max) : json(nullptr);
    j["tolerance"] = round12(tol);
    j["k_values"] = r.k_values;
    json e = json::array();
    for (const auto& v : r.eigenvalues) e.push_back(rounded(v));
    j["eigenvalues"] = e;
    json d = json::array();
    for (const auto& v : r.deltas) d.push_back(rounded(v));
    j["deltas"] = d;
    j["ground_monotone"] = r.ground_monotone;
    j["deltas_monotone"] = r.deltas_monotone;
    return j;
}

ConvergenceOptions convergence_options(const RunConfig& c) {
    ConvergenceOptions o;
    o.solver = c.solver;
    o.k_cap = c.converge_cap;
    return o;
}

std::string render_convergence(const RunConfig& c, const ConvergenceReport& r) {
    if (c.format == OutputFormat::Json) {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["metadata"] = metadata_json("converge", c);
        j["convergence"] = convergence_json(r, c.converge_tol);
        return dump(j);
    }
    std::string s = metadata_line("converge", c) + "k_max";
    const int m = r.eigenvalues.empty() ? 0 : static_cast<int>(r.eigenvalues.front().size());
    for (int n = 0; n < m; ++n) s += ",E" + std::to_string(n);
    s += "\n";
    for (std::size_t i = 0; i < r.k_values.size(); ++i) {
        std::vector<double> row{static_cast<double>(r.k_values[i])};
        for (int n = 0; n < m; ++n) row.push_back(r.eigenvalues[i][n]);
        s += csv_row(row);
    }
    s += "# converged=" + std::string(r.converged ? "true" : "false") +
         " k_max=" + (r.converged ? std::to_string(r.k_max) : std::string("none")) +
         " ground_monotone=" + (r.ground_monotone ? "true" : "false") +
         " deltas_monotone=" + (r.deltas_monotone ? "true" : "false") + "\n";
    return s;
}

struct ReportOutcome {
    std::string text;
    bool complete{true};
};

ReportOutcome cmd_report(const RunConfig& c) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["metadata"] = metadata_json("report", c);
    json errors = json::array();
    auto section = [&](const char* name, const std::function<json()>& fn) {
        try {
            j[name] = fn();
        } catch (const std::exception& e) {
            j[name] = nullptr;
            errors.push_back({{"section", name}, {"message", e.what()}});
        }
    };

    std::optional<QubitParams> qubit;
    section("qubit", [&] {
        QubitOptions qo;
        qo.ip_point = c.ip_point;
        qo.step = c.ip_step;
        qo.solver = c.solver;
        const TwoLevelComparison cmp =
            compare_two_level(c.circuit, c.basis_spec(), c.two_level_window, c.two_level_points, qo, c.jobs);
        qubit = cmp.qubit;
        return json{{"delta", round12(cmp.qubit.delta)},
                    {"i_p", round12(cmp.qubit.i_p)},
                    {"i_p_expectation", round12(cmp.qubit.i_p_expectation)},
                    {"ip_point", round12(cmp.qubit.ip_point)},
                    {"epsilon_slope", round12(cmp.qubit.epsilon_slope)},
                    {"two_level_window", round12(c.two_level_window)},
                    {"two_level_max_deviation", round12(cmp.max_relative_deviation)}};
    });
    section("wells", [&] {
        const WellReport w = find_minima(c.circuit);
        json minima = json::array();
        for (const auto& p : w.minima) minima.push_back(rounded(p.phases));
        return json{{"f_e", round12(c.circuit.f_e)},
                    {"regime", to_string(w.regime)},
                    {"minima", minima},
                    {"potential_at_minima", rounded(w.potential_at_minima)},
                    {"barrier_estimate", w.barrier_estimate ? json(round12(*w.barrier_estimate)) : json(nullptr)}};
    });
    section("oscillator", [&]() -> json {
        if (!c.circuit.capacitance || !c.circuit.inductance) return nullptr;
        const OscillatorReport o = oscillator_frequency(c.circuit, c.circuit.capacitance, c.circuit.inductance);
        json s{{"omega", round12(o.omega)}, {"freq_hz", round12(o.freq_hz)}, {"freq_ghz", round12(o.freq_ghz)}};
        if (c.ec_ghz && qubit) {
            const AdiabaticReport a =
                adiabatic_check(c.circuit, c.circuit.capacitance, c.circuit.inductance, qubit->delta, c.ec_ghz);
            s["adiabatic"] = {{"gap_ghz", round12(a.gap_ghz)},
                              {"ratio", round12(a.ratio)},
                              {"threshold", round12(a.threshold)},
                              {"verdict", to_string(a.verdict)}};
        } else {
            s["adiabatic"] = nullptr;
        }
        return s;
    });
    section("classification", [&] {
        const auto grid = c.flux_grid();
        const TransitionTable t =
            transition_sweep(c.circuit, grid, std::max(c.levels, 4), c.basis_spec(), sweep_options(c), c.phi_a0);
        ClassificationThresholds th;
        th.xi = c.xi_threshold;
        th.qutrit_t12 = c.qutrit_t12;
        const LevelClassification lc = classify_levels(t.spectrum, t, th);
        json labels = json::array();
        for (auto l : lc.labels) labels.push_back(to_string(l));
        return json{{"f_e", rounded(grid)},
                    {"labels", labels},
                    {"leakage", rounded(lc.leakage)},
                    {"leakage_figure", round12(lc.leakage_figure)},
                    {"max_t12_ratio", round12(lc.max_t12_ratio)},
                    {"three_levels_isolated", lc.three_levels_isolated},
                    {"xi_threshold", round12(th.xi)},
                    {"qutrit_t12", round12(th.qutrit_t12)},
                    {"verdict", lc.verdict}};
    });
    section("convergence", [&] {
        try {
            return convergence_json(converge(c.circuit, c.converge_levels, c.converge_tol, convergence_options(c)),
                                    c.converge_tol);
        } catch (const ConvergenceError& e) {
            errors.push_back({{"section", "convergence"}, {"message", e.what()}});
            return convergence_json(e.report(), c.converge_tol);
        }
    });
    const bool complete = errors.empty();
    j["errors"] = errors;
    return {dump(j), complete};
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.out == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write output file '" + c.out + "'");
    f << text;
    if (!f) throw ConfigError("failed writing output file '" + c.out + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra, transition elements and qubit parameters of three- and four-junction flux circuits",
                 "fourjj"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Overrides o;
    const std::vector<std::pair<const char*, const char*>> commands{
        {"spectrum", "energy levels versus flux (CSV or JSON)"},
        {"potential", "potential on a (phi1, phi2) grid"},
        {"transitions", "|t01|, |t02|, |t12| versus flux"},
        {"report", "qubit, well, oscillator, classification and convergence summary (JSON)"},
        {"converge", "cube cutoff convergence study"},
        {"print-config", "effective configuration with defaults"},
    };
    for (const auto& [name, help] : commands) add_common_options(*app.add_subcommand(name, help), o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        // `--print-config` in front is accepted as the subcommand.
        if (!reversed.empty() && reversed.back() == "--print-config") reversed.back() = "print-config";
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const RunConfig c = effective_config(o);
        if (command == "print-config") {
            emit(c, render_config(c), out);
        } else if (command == "spectrum") {
            emit(c, cmd_spectrum(c), out);
        } else if (command == "potential") {
            emit(c, cmd_potential(c), out);
        } else if (command == "transitions") {
            emit(c, cmd_transitions(c), out);
        } else if (command == "converge") {
            try {
                emit(c, render_convergence(c, converge(c.circuit, c.converge_levels, c.converge_tol,
                                                       convergence_options(c))), out);
            } catch (const ConvergenceError& e) {
                emit(c, render_convergence(c, e.report()), out);
                err << "fourjj: " << e.what() << "\n";
                return kExitSolver;
            }
        } else if (command == "report") {
            const ReportOutcome r = cmd_report(c);
            emit(c, r.text, out);
            if (!r.complete) {
                err << "fourjj: report incomplete, see the errors array\n";
                return kExitSolver;
            }
        }
    } catch (const ConfigError& e) {
        err << "fourjj: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "fourjj: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "fourjj: solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}

}  // namespace fourjj::cli
