#include "fourjj/cli/config.hpp"
#include "fourjj/cli/format.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace fourjj::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        throw ConfigError(where + ": expected a finite number, got '" + v + "'");
    return x;
}

int parse_int(const std::string& v, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || x < -1000000000L || x > 1000000000L)
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

Field real(std::string section, std::string key, double RunConfig::*member) {
    return {section, key,
            [member](RunConfig& c, const std::string& v, const std::string& w) { c.*member = parse_double(v, w); },
            [member](const RunConfig& c) { return format_number(c.*member); }};
}

Field integer(std::string section, std::string key, int RunConfig::*member) {
    return {section, key,
            [member](RunConfig& c, const std::string& v, const std::string& w) { c.*member = parse_int(v, w); },
            [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field circuit_real(std::string key, double CircuitParams::*member) {
    return {"circuit", key,
            [member](RunConfig& c, const std::string& v, const std::string& w) {
                c.circuit.*member = parse_double(v, w);
            },
            [member](const RunConfig& c) { return format_number(c.circuit.*member); }};
}

Field optional_real(std::string section, std::string key,
                    std::function<std::optional<double>&(RunConfig&)> ref,
                    std::function<const std::optional<double>&(const RunConfig&)> cref) {
    return {section, key,
            [ref](RunConfig& c, const std::string& v, const std::string& w) {
                if (v == "none")
                    ref(c).reset();
                else
                    ref(c) = parse_double(v, w);
            },
            [cref](const RunConfig& c) { return cref(c) ? format_number(*cref(c)) : std::string("none"); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back({"circuit", "variant",
                     [](RunConfig& c, const std::string& v, const std::string& w) {
                         if (v == "4j")
                             c.circuit.variant = Variant::FourJunction;
                         else if (v == "3j")
                             c.circuit.variant = Variant::ThreeJunction;
                         else
                             throw ConfigError(w + ": expected 3j or 4j, got '" + v + "'");
                     },
                     [](const RunConfig& c) { return to_string(c.circuit.variant); }});
        f.push_back(circuit_real("alpha", &CircuitParams::alpha));
        f.push_back(circuit_real("beta", &CircuitParams::beta));
        f.push_back(circuit_real("ej_over_ec", &CircuitParams::ej_over_ec));
        f.push_back(circuit_real("f_e", &CircuitParams::f_e));
        f.push_back(optional_real(
            "circuit", "capacitance", [](RunConfig& c) -> std::optional<double>& { return c.circuit.capacitance; },
            [](const RunConfig& c) -> const std::optional<double>& { return c.circuit.capacitance; }));
        f.push_back(optional_real(
            "circuit", "inductance", [](RunConfig& c) -> std::optional<double>& { return c.circuit.inductance; },
            [](const RunConfig& c) -> const std::optional<double>& { return c.circuit.inductance; }));
        f.push_back(optional_real(
            "circuit", "ec_ghz", [](RunConfig& c) -> std::optional<double>& { return c.ec_ghz; },
            [](const RunConfig& c) -> const std::optional<double>& { return c.ec_ghz; }));

        f.push_back({"basis", "kind",
                     [](RunConfig& c, const std::string& v, const std::string& w) {
                         if (v != "cube" && v != "ellipsoid")
                             throw ConfigError(w + ": expected cube or ellipsoid, got '" + v + "'");
                         c.basis_kind = v;
                     },
                     [](const RunConfig& c) { return c.basis_kind; }});
        f.push_back(integer("basis", "kmax", &RunConfig::kmax));
        f.push_back(real("basis", "e_cut", &RunConfig::e_cut));

        f.push_back(real("sweep", "f_start", &RunConfig::f_start));
        f.push_back(real("sweep", "f_end", &RunConfig::f_end));
        f.push_back(integer("sweep", "f_steps", &RunConfig::f_steps));
        f.push_back(integer("sweep", "levels", &RunConfig::levels));
        f.push_back(integer("sweep", "jobs", &RunConfig::jobs));

        f.push_back({"solver", "method",
                     [](RunConfig& c, const std::string& v, const std::string& w) {
                         if (v == "auto")
                             c.solver.method = SolverMethod::Auto;
                         else if (v == "dense")
                             c.solver.method = SolverMethod::Dense;
                         else if (v == "iterative")
                             c.solver.method = SolverMethod::Iterative;
                         else
                             throw ConfigError(w + ": expected auto, dense or iterative, got '" + v + "'");
                     },
                     [](const RunConfig& c) { return to_string(c.solver.method); }});
        f.push_back({"solver", "tolerance",
                     [](RunConfig& c, const std::string& v, const std::string& w) {
                         c.solver.tolerance = parse_double(v, w);
                     },
                     [](const RunConfig& c) { return format_number(c.solver.tolerance); }});
        f.push_back({"solver", "max_iterations",
                     [](RunConfig& c, const std::string& v, const std::string& w) {
                         c.solver.max_iterations = parse_int(v, w);
                     },
                     [](const RunConfig& c) { return std::to_string(c.solver.max_iterations); }});

        f.push_back(real("analysis", "ip_point", &RunConfig::ip_point));
        f.push_back(real("analysis", "ip_step", &RunConfig::ip_step));
        f.push_back(real("analysis", "xi_threshold", &RunConfig::xi_threshold));
        f.push_back(real("analysis", "qutrit_t12", &RunConfig::qutrit_t12));
        f.push_back(real("analysis", "two_level_window", &RunConfig::two_level_window));
        f.push_back(integer("analysis", "two_level_points", &RunConfig::two_level_points));
        f.push_back(real("analysis", "phi_a0", &RunConfig::phi_a0));
        f.push_back(real("analysis", "converge_tol", &RunConfig::converge_tol));
        f.push_back(integer("analysis", "converge_levels", &RunConfig::converge_levels));
        f.push_back(integer("analysis", "converge_cap", &RunConfig::converge_cap));

        f.push_back(real("potential", "phi3", &RunConfig::phi3));
        f.push_back(integer("potential", "resolution", &RunConfig::resolution));

        f.push_back({"output", "path", [](RunConfig& c, const std::string& v, const std::string&) { c.out = v; },
                     [](const RunConfig& c) { return c.out; }});
        f.push_back({"output", "format",
                     [](RunConfig& c, const std::string& v, const std::string& w) {
                         if (v == "csv")
                             c.format = OutputFormat::Csv;
                         else if (v == "json")
                             c.format = OutputFormat::Json;
                         else
                             throw ConfigError(w + ": expected csv or json, got '" + v + "'");
                     },
                     [](const RunConfig& c) { return to_string(c.format); }});
        return f;
    }();
    return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : fields())
        if (f.section == section && f.key == key) return &f;
    return nullptr;
}

bool known_section(const std::string& s) {
    return std::any_of(fields().begin(), fields().end(), [&](const Field& f) { return f.section == s; });
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

BasisSpec RunConfig::basis_spec() const {
    const int dim = circuit.dimension();
    return basis_kind == "ellipsoid" ? BasisSpec::ellipsoid(dim, e_cut) : BasisSpec::cube(dim, kmax);
}

std::vector<double> RunConfig::flux_grid() const { return linear_grid(f_start, f_end, f_steps); }

RunConfig parse_config(const std::string& text, RunConfig base, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::set<std::string> seen;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string where = origin + ":" + std::to_string(number);
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!known_section(section)) throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside any section");
        const Field* f = find_field(section, key);
        if (!f) throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
        if (!seen.insert(section + "." + key).second)
            throw ConfigError(where + ": duplicate key '" + key + "' in [" + section + "]");
        f->set(base, value, where + " (" + section + "." + key + ")");
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base), path);
}

void check_config(const RunConfig& c) {
    try {
        validate(c.circuit);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("circuit: ") + e.what());
    }
    if (c.f_steps < 1) throw ConfigError("sweep.f_steps must be at least 1");
    if (!(c.f_start <= c.f_end)) throw ConfigError("sweep.f_start must not exceed sweep.f_end");
    if (c.levels < 1) throw ConfigError("sweep.levels must be at least 1");
    if (c.kmax < 0) throw ConfigError("basis.kmax must be nonnegative");
    if (c.basis_kind == "ellipsoid" && !(c.e_cut >= 0.0)) throw ConfigError("basis.e_cut must be nonnegative");
    if (!(c.solver.tolerance > 0.0)) throw ConfigError("solver.tolerance must be positive");
    if (c.solver.max_iterations < 1) throw ConfigError("solver.max_iterations must be positive");
    if (!(c.ip_step > 0.0)) throw ConfigError("analysis.ip_step must be positive");
    if (!(c.xi_threshold > 0.0)) throw ConfigError("analysis.xi_threshold must be positive");
    if (!(c.two_level_window >= 0.0)) throw ConfigError("analysis.two_level_window must be nonnegative");
    if (c.two_level_points < 1) throw ConfigError("analysis.two_level_points must be at least 1");
    if (!(c.converge_tol > 0.0)) throw ConfigError("analysis.converge_tol must be positive");
    if (c.converge_levels < 1) throw ConfigError("analysis.converge_levels must be at least 1");
    if (c.converge_cap < 2) throw ConfigError("analysis.converge_cap must be at least 2");
    if (c.resolution < 2) throw ConfigError("potential.resolution must be at least 2");
    if (c.ec_ghz && !(*c.ec_ghz > 0.0)) throw ConfigError("circuit.ec_ghz must be positive");
    if (c.out.empty()) throw ConfigError("output.path must not be empty");
}

std::string render_config(const RunConfig& c) {
    std::ostringstream os;
    std::string section;
    for (const auto& f : fields()) {
        if (f.section != section) {
            if (!section.empty()) os << "\n";
            section = f.section;
            os << "[" << section << "]\n";
        }
        os << f.key << " = " << f.get(c) << "\n";
    }
    return os.str();
}

}  // namespace fourjj::cli
