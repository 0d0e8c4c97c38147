#include "fourjj/cli/app.hpp"
#include "fourjj/cli/config.hpp"
#include "fourjj/cli/format.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fourjj;
using namespace fourjj::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fourjj_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const char* kSmall =
    "[circuit]\nvariant = 3j\nalpha = 0.7\n"
    "[basis]\nkmax = 5\n"
    "[sweep]\nf_start = 0.45\nf_end = 0.55\nf_steps = 5\nlevels = 3\n";

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(50.0) == "50");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-10) == "1e-10");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(round12(1.0 / 3.0) == 0.333333333333);
    CHECK(csv_row({1.5, 2.0}) == "1.5,2\n");
}

TEST_CASE("config parsing is strict") {
    CHECK_NOTHROW(parse_config(kSmall));
    CHECK_THROWS_AS(parse_config("[circuit]\ncolour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[mystery]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[circuit]\nalpha = 0.5\nalpha = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[circuit]\nalpha\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[circuit]\nalpha = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("alpha = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sweep]\nlevels = 2.5\n"), ConfigError);
    const auto c = parse_config("# note\n[circuit]\n; other\ncapacitance = 8e-15\nec_ghz = 10\n");
    CHECK(*c.circuit.capacitance == 8e-15);
    CHECK(*c.ec_ghz == 10.0);
    CHECK_FALSE(parse_config("[circuit]\nec_ghz = none\n", c).ec_ghz.has_value());
    CHECK_THROWS_AS(check_config(parse_config("[circuit]\nalpha = 2\n")), ConfigError);
}

TEST_CASE("rendered config parses back to the same rendering") {
    const auto c = parse_config(kSmall);
    const std::string text = render_config(c);
    CHECK(render_config(parse_config(text)) == text);
    const auto r = call({"print-config", "--variant", "3j", "--alpha", "0.7"});
    CHECK(r.code == kExitOk);
    CHECK(render_config(parse_config(r.out)) == r.out);
    CHECK(call({"--print-config", "--variant", "3j", "--alpha", "0.7"}).out == r.out);
}

TEST_CASE("potential grid contains the origin by default") {
    const auto r = call({"potential", "--fe", "0"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("\n0,0,0\n") != std::string::npos);
    std::istringstream lines(r.out);
    std::string row;
    double lowest = 1e300;
    std::getline(lines, row);
    std::getline(lines, row);
    int rows = 0;
    while (std::getline(lines, row)) {
        lowest = std::min(lowest, std::stod(row.substr(row.rfind(',') + 1)));
        ++rows;
    }
    CHECK(rows == 120 * 120);
    CHECK(lowest == 0.0);
}

TEST_CASE("spectrum output is byte-identical across runs") {
    const auto cfg = scratch("small.ini");
    write(cfg, kSmall);
    const auto a = scratch("a.csv");
    const auto b = scratch("b.csv");
    CHECK(call({"spectrum", "--config", cfg.string(), "--out", a.string()}).code == kExitOk);
    CHECK(call({"spectrum", "--config", cfg.string(), "--out", b.string(), "--jobs", "2"}).code == kExitOk);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    std::istringstream lines(text);
    std::string meta, header, row;
    std::getline(lines, meta);
    std::getline(lines, header);
    CHECK(meta.rfind("# fourjj 0.1.0 command=spectrum", 0) == 0);
    CHECK(header == "f_e,E0,E1,E2");
    int rows = 0;
    while (std::getline(lines, row)) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("flags override the config file") {
    const auto cfg = scratch("override.ini");
    write(cfg, kSmall);
    const auto r = call({"spectrum", "--config", cfg.string(), "--alpha", "0.4", "--fe-start", "0.5", "--fe-steps", "1", "--levels", "2"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("alpha=0.4") != std::string::npos);
    CHECK(r.out.find("f_e,E0,E1\n0.5,") != std::string::npos);
    const auto cfgd = call({"print-config", "--config", cfg.string(), "--kmax", "7"});
    CHECK(parse_config(cfgd.out).kmax == 7);
    CHECK(parse_config(cfgd.out).circuit.alpha == 0.7);
}

TEST_CASE("exit codes") {
    const auto bad = scratch("bad.ini");
    write(bad, "[circuit]\nunknown_key = 1\n");
    const auto r = call({"spectrum", "--config", bad.string()});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("unknown_key") != std::string::npos);
    CHECK(call({"spectrum", "--alpha", "2"}).code == kExitConfig);
    CHECK(call({"spectrum", "--config", scratch("missing.ini").string()}).code == kExitConfig);
    CHECK(call({"no-such-command"}).code == kExitConfig);
    CHECK(call({"spectrum", "--alpha", "x"}).code == kExitConfig);
    const auto capped = scratch("capped.ini");
    write(capped, std::string(kSmall) + "[analysis]\nconverge_tol = 1e-14\nconverge_cap = 4\n");
    const auto conv = call({"converge", "--config", capped.string()});
    CHECK(conv.code == kExitSolver);
    CHECK(conv.out.find("# converged=false k_max=none") != std::string::npos);
}

TEST_CASE("transitions and potential tables") {
    const auto cfg = scratch("tables.ini");
    write(cfg, kSmall);
    const auto t = call({"transitions", "--config", cfg.string()});
    REQUIRE(t.code == kExitOk);
    CHECK(t.out.find("\nf_e,t01,t02,t12\n") != std::string::npos);

    const auto p = scratch("pot.ini");
    write(p, "[circuit]\nvariant = 4j\n[potential]\nresolution = 4\nphi3 = 0.5\n");
    const auto u = call({"potential", "--config", p.string()});
    REQUIRE(u.code == kExitOk);
    std::istringstream lines(u.out);
    std::string meta, header, first;
    std::getline(lines, meta);
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "phi1,phi2,U_over_EJ");
    CHECK(first.rfind(format_number(-kPi) + "," + format_number(-kPi) + ",", 0) == 0);
    int rows = 1;
    for (std::string row; std::getline(lines, row);) ++rows;
    CHECK(rows == 16);
}

TEST_CASE("spectrum as JSON") {
    const auto cfg = scratch("json.ini");
    write(cfg, kSmall);
    const auto r = call({"spectrum", "--config", cfg.string(), "--format", "json"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["energies"].size() == 5);
    CHECK(j["energies"][0].size() == 3);
    CHECK(j.contains("metadata"));
}

TEST_CASE("report document") {
    const auto cfg = scratch("report.ini");
    write(cfg, std::string(kSmall) +
                   "[circuit]\ncapacitance = 8e-15\ninductance = 1e-11\nec_ghz = 10\n");
    const auto r = call({"report", "--config", cfg.string()});
    INFO(r.err);
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema_version"] == kReportSchemaVersion);
    for (const char* key : {"qubit", "wells", "oscillator", "classification", "convergence"}) CHECK(j.contains(key));
    CHECK(j["errors"].empty());
    CHECK(j["oscillator"]["freq_ghz"].get<double>() > 900.0);
    CHECK(j["oscillator"].contains("adiabatic"));
    CHECK(j["qubit"]["delta"].get<double>() > 0.0);

    const auto bare = scratch("report_bare.ini");
    write(bare, kSmall);
    const auto b = call({"report", "--config", bare.string()});
    REQUIRE(b.code == kExitOk);
    CHECK(nlohmann::json::parse(b.out)["oscillator"].is_null());
}
