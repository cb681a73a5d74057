#include <doctest.h>

#include "latspec/model_io.hpp"
#include "latspec/report.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace latspec;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Contract;
}

int run(const std::string& args, const std::string& out = "/dev/null") {
    const std::string cmd = std::string(LATSPEC_CLI_PATH) + " " + args + " > " + out + " 2>/dev/null";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string models(const char* name) { return std::string(LATSPEC_MODELS_DIR) + "/" + name; }

} // namespace

TEST_CASE("model files") {
    const LoadedModel m = parse_model(R"({"grid": 6, "mu1": "critical", "mu2": "0.5 * critical"})", ".");
    CHECK(m.spec.grid.n() == 6);
    CHECK(m.spec.mu1 == doctest::Approx(m.mu0_1));
    CHECK(m.spec.mu2 == doctest::Approx(0.5 * m.mu0_2));
    CHECK(m.mu1_text == "critical");

    const LoadedModel g = parse_model(
        R"({"grid": 4, "phi1": {"kind": "sin", "axis": 2, "amplitude": 2}, "phi2": 0.5, "mu1": 0.01,
            "pair_energy": {"coefficients": [1, 2, 1]}, "delta": 0.4})",
        ".");
    CHECK(g.spec.phi1({0, kPi / 2, 0}) == doctest::Approx(2.0));
    CHECK(g.spec.phi2({1, 1, 1}) == doctest::Approx(0.5));
    CHECK(g.spec.mu1 == 0.01);
    CHECK(g.spec.mu2 == 0.0);
    CHECK(g.spec.delta == 0.4);
    CHECK(std::isnan(g.mu0_1));

    ModelOverrides o;
    o.grid = 5;
    o.delta = 2.0;
    const LoadedModel ov = parse_model(R"({"grid": 4})", ".", o);
    CHECK(ov.spec.grid.n() == 5);
    CHECK(ov.spec.delta == 2.0);

    const LoadedModel graded = parse_model(R"({"grid": 4, "mu1": "critical", "coupling_quadrature": "graded"})", ".");
    CHECK(graded.spec.mu1 == doctest::Approx(0.01595).epsilon(1e-3));
}

TEST_CASE("malformed model files") {
    CHECK(kind_of([] { parse_model("{", "."); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { parse_model(R"({"mu1": "twice critical"})", "."); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { parse_model(R"({"phi1": {"kind": "sin", "axis": 4}})", "."); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { parse_model(R"({"dispersion": {"kind": "magic"}})", "."); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { parse_model(R"({"grid": "big"})", "."); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { parse_model(R"({"grid": 1})", "."); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { parse_model(R"({"mu1": -1})", "."); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { load_model("/nonexistent/model.json"); }) == ErrorKind::InvalidArgument);
    CHECK(exit_code(kind_of([] { parse_model(R"({"dispersion": {"kind": "tabulated", "csv": "none.csv"}})", "/nonexistent"); })) == 2);
}

TEST_CASE("tabulated dispersion path is relative to the model file") {
    const fs::path dir = fs::temp_directory_path() / "latspec_io_test";
    fs::create_directories(dir);
    const TorusGrid g = TorusGrid::build(4);
    {
        std::ofstream out(dir / "eps.csv");
        out.precision(17);
        out << "q1,q2,q3,value\n";
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Vec3 q = g.node(i);
            out << q[0] << ',' << q[1] << ',' << q[2] << ',' << builtin_epsilon(q) << '\n';
        }
        std::ofstream(dir / "m.json") << R"({"grid": 4, "dispersion": {"kind": "tabulated", "csv": "eps.csv"}})";
    }
    const LoadedModel m = load_model((dir / "m.json").string());
    CHECK(m.spec.u.dispersion().kind() == Dispersion::Kind::Tabulated);
    for (std::size_t i = 0; i < g.size(); i += 5)
        CHECK(m.spec.u.dispersion()(g.node(i)) == doctest::Approx(builtin_epsilon(g.node(i))).epsilon(1e-12));
    fs::remove_all(dir);
}

TEST_CASE("count report round trips") {
    CountReport r;
    r.n = 8;
    r.m = 0.0;
    r.mu1 = 0.5;
    r.mu2 = 0.25;
    r.method = "sectors";
    r.rows.push_back({0.1, -0.1, 2, 0.05, 1.5, 0.75, true});
    r.rows.push_back({1e-5, -1e-5, 3, 0.01, 2.5, std::nan(""), false});
    const std::string csv = count_report_csv(r);
    CHECK(csv.rfind("m_minus_z,z,count,det_min,hs_norm,hs_diff,trusted\n", 0) == 0);
    CHECK(csv.find("1e-05,-1e-05,3,0.01,2.5,nan,false") != std::string::npos);
    for (const std::string& text : {csv, count_report_json(r)}) {
        const CountReport b = parse_count_report(text);
        REQUIRE(b.rows.size() == 2);
        CHECK(b.rows[0].count == 2);
        CHECK(b.rows[0].trusted);
        CHECK(b.rows[1].m_minus_z == 1e-5);
        CHECK(std::isnan(b.rows[1].hs_diff));
    }
    CHECK(parse_count_report(count_report_json(r)).method == "sectors");
    CHECK_THROWS_AS(parse_count_report("a,b\n1,2\n"), Error);
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("cli exit codes and determinism") {
    const fs::path dir = fs::temp_directory_path() / "latspec_cli_test";
    fs::create_directories(dir);
    const std::string sub = models("subcritical.json");
    CHECK(run("count --model " + sub + " --zmin-exp 1 --zmax-exp 3 --out " + (dir / "a.csv").string()) == 0);
    CHECK(run("count --model " + sub + " --zmin-exp 1 --zmax-exp 3 --out " + (dir / "b.csv").string()) == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv").rfind("m_minus_z,", 0) == 0);
    CHECK(run("count --model " + sub + " --format json", (dir / "c.json").string()) == 0);
    CHECK(parse_count_report(slurp(dir / "c.json")).rows.size() == 8);

    CHECK(run("count --model " + sub + " --zmin-exp 4 --zmax-exp 3") == 2);
    CHECK(run("efimov --model /nonexistent.json") == 2);
    CHECK(run("count --model " + sub + " --format xml") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("count --model " + sub + " --grid 1") == 2);

    std::ofstream(dir / "bad.json") << "{\"pair_energy\": {\"coefficients\": [1, 0, 1]}, \"grid\": 4}";
    CHECK(run("efimov --model " + (dir / "bad.json").string()) == 3);
    std::ofstream(dir / "strong.json") << "{\"mu1\": \"3*critical\", \"mu2\": \"3*critical\", \"grid\": 4}";
    CHECK(run("count --model " + (dir / "strong.json").string() + " --zmin-exp 6 --zmax-exp 6") == 3);

    CHECK(run("threshold --model " + models("threshold_eigenvalue.json") + " --grid 8", (dir / "t.csv").string()) == 0);
    const std::string t = slurp(dir / "t.csv");
    CHECK(t.find("channel1.class,ThresholdEigenvalue") != std::string::npos);
    CHECK(run("threshold --model " + sub + " --format json", (dir / "t.json").string()) == 0);
    CHECK(slurp(dir / "t.json").find("\"channel1.class\": \"Regular\"") != std::string::npos);
    CHECK(run("essential --model " + sub) == 0);
    CHECK(run("efimov --model " + sub + " --r 20,40 --lmax 10") == 0);
    fs::remove_all(dir);
}
