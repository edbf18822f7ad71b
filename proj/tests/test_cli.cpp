#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ancient_heat/cli.hpp"
#include "ancient_heat/domain.hpp"
#include "ancient_heat/io.hpp"

using namespace ancient_heat;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    auto* co = std::cout.rdbuf(out.rdbuf());
    auto* ce = std::cerr.rdbuf(err.rdbuf());
    CliResult r;
    r.code = run_cli(args);
    std::cout.rdbuf(co);
    std::cerr.rdbuf(ce);
    r.out = out.str();
    r.err = err.str();
    return r;
}

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::path("cli_scratch") / name) {
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string path(const std::string& file) const { return (dir / file).string(); }

    std::string p2() const {
        std::string p = path("p2.json");
        if (!fs::exists(p)) write_domain_json(path_graph(2), p);
        return p;
    }
    std::string field(const std::string& name, const ScalarField& a) const {
        std::string p = path(name);
        write_scalar_csv(a, p);
        return p;
    }
};

}  // namespace

TEST_CASE("backward solve example produces the frozen artifacts") {
    Scratch s("solve");
    std::string out = s.path("u");
    auto r = run({"solve", "--domain", s.p2(), "--data", s.field("a.csv", {1.0, 0.0}), "--t", "1",
                  "--direction", "backward", "--tol", "1e-10", "--out", out});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "wrote " + out + ".csv (J_used 17, splits 1, tail bound 4.576185084699301e-11)\n");
    CHECK(read_text(out + ".csv") == "vertex,value\n0,4.1945280494424591\n1,-3.1945280494424595\n");
    CHECK(read_text(out + ".report.json") ==
          "{\"J_used\": 17, \"tail_bound\": 4.576185084699301e-11, \"tol\": 1e-10, "
          "\"rho_bar\": 2, \"splits\": 1}\n");

    // against the closed form 0.5 (1 +- e^2)
    ScalarField u = read_scalar_csv(out + ".csv");
    CHECK(std::fabs(u[0] - 0.5 * (1 + 7.3890560989306495)) < 1e-9);
    CHECK(std::fabs(u[1] - 0.5 * (1 - 7.3890560989306495)) < 1e-9);

    auto again = run({"solve", "--domain", s.p2(), "--data", s.path("a.csv"), "--t", "1",
                      "--direction", "backward", "--tol", "1e-10", "--out", s.path("u2")});
    CHECK(again.code == 0);
    CHECK(read_text(s.path("u2.csv")) == read_text(out + ".csv"));
}

TEST_CASE("check example flags the violation at the first level") {
    Scratch s("check");
    std::string e = s.field("e.csv", {1.0, -1.0});
    auto r = run({"check", "--domain", s.p2(), "--data", e, "--jmax", "32", "--A3", "1", "--A4",
                  "0.5"});
    CHECK(r.code == 1);
    CHECK(r.out ==
          "{\"A3_hat\": 1, \"A4_hat\": 0.6931471805599454, "
          "\"residual\": 1.9969991555803445e-15, \"holds\": false, \"first_violation_j\": 1, "
          "\"margin\": -6.1807097779182492, \"J\": 32, \"mu\": 0}\n");
    auto parsed = nlohmann::json::parse(r.out);
    CHECK(parsed["holds"] == false);
    CHECK(parsed["first_violation_j"] == 1);

    // the sharp cap A4 = ln 2 passes with zero margin
    auto sharp = run({"check", "--domain", s.p2(), "--data", e, "--jmax", "32", "--A3", "1",
                      "--A4", "0.69314718055994531"});
    CHECK(sharp.code == 0);
    auto sj = nlohmann::json::parse(sharp.out);
    CHECK(sj["holds"] == true);
    CHECK(sj["first_violation_j"].is_null());
    CHECK(std::fabs(sj["margin"].get<double>()) < 1e-9);
}

TEST_CASE("usage and input failures exit 2") {
    Scratch s("usage");
    CHECK(run({"solve", "--t", "abc"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"domain", "build", "--lattice", "3xx3", "--out", s.path("g.json")}).code == 2);
    CHECK(run({"domain", "build", "--lattice", "3", "--h", "-1", "--out", s.path("g.json")}).code ==
          2);
    CHECK(run({"domain", "build", "--lattice", "2x2", "--boundary", "periodic", "--out",
               s.path("g.json")}).code == 2);
    std::string a = s.field("a.csv", {1.0, 0.0});
    CHECK(run({"solve", "--domain", s.p2(), "--data", a, "--t", "1", "--direction", "sideways",
               "--out", s.path("u")}).code == 2);
    CHECK(run({"reconstruct", "--domain", s.p2(), "--data", a, "--t", "0.5", "--out",
               s.path("u")}).code == 2);
    CHECK(run({"solve", "--domain", s.p2(), "--data", a, "--t", "1", "--out",
               s.path("no_dir/u")}).code == 2);
    CHECK(run({"verify", "--experiment", "bogus", "--domain", s.p2(), "--out",
               s.path("v")}).code == 2);
    auto missing = run({"solve", "--domain", s.path("absent.json"), "--data", a, "--t", "1",
                        "--out", s.path("u")});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("error:") == 0);
    CHECK(missing.err.find("\n") == missing.err.size() - 1);  // single-line diagnostic
}

TEST_CASE("help is not an error") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"solve", "--help"}).code == 0);
    auto h = run({"--help"});
    CHECK(h.out.find("tychonov") != std::string::npos);
}

TEST_CASE("domain build writes a validated lattice") {
    Scratch s("build");
    std::string g = s.path("g.json");
    auto r = run({"domain", "build", "--lattice", "3x3", "--h", "0.5", "--boundary", "dirichlet",
                  "--origin", "4", "--out", g});
    CHECK(r.code == 0);
    CHECK(r.out == "wrote " + g + " (9 vertices, 12 edges)\n");
    DomainGraph back = read_domain_json(g);
    CHECK(back.n == 9);
    CHECK(back.origin == 4);
    REQUIRE(back.lattice.has_value());
    CHECK(back.lattice->dims == std::vector<int>{3, 3});
    CHECK(back.lattice->h == 0.5);
    CHECK(back.lattice->boundary == Boundary::dirichlet);

    CHECK(run({"domain", "build", "--lattice", "3x3", "--origin", "99", "--out", g}).code == 2);
}

TEST_CASE("ladder reports the exact eigenmode slope") {
    Scratch s("ladder");
    std::string out = s.path("lad.json");
    auto r = run({"ladder", "--domain", s.p2(), "--data", s.field("e.csv", {1.0, -1.0}), "--jmax",
                  "12", "--jmin", "1", "--out", out});
    CHECK(r.code == 0);
    auto parsed = nlohmann::json::parse(read_text(out));
    CHECK(parsed["A4_hat"].get<double>() == doctest::Approx(0.69314718055994531).epsilon(1e-12));
    CHECK(parsed["holds"].is_null());
    CHECK(parsed["first_violation_j"].is_null());
    CHECK(parsed["J"] == 12);
}

TEST_CASE("forward solve and the truncation finding") {
    Scratch s("forward");
    std::string a = s.field("a.csv", {1.0, 0.0});
    auto fwd = run({"solve", "--domain", s.p2(), "--data", a, "--t", "1", "--direction", "forward",
                    "--tol", "1e-12", "--out", s.path("f")});
    CHECK(fwd.code == 0);
    ScalarField u = read_scalar_csv(s.path("f.csv"));
    CHECK(std::fabs(u[0] - 0.56766764161830635) < 1e-9);
    CHECK(std::fabs(u[1] - 0.43233235838169365) < 1e-9);

    auto capped = run({"solve", "--domain", s.p2(), "--data", a, "--t", "2", "--jcap", "2",
                       "--out", s.path("c")});
    CHECK(capped.code == 1);
    CHECK(capped.err.find("truncation cap") != std::string::npos);
}

TEST_CASE("reconstruct mirrors the backward solve") {
    Scratch s("reconstruct");
    std::string a = s.field("a.csv", {0.3, -0.7});
    auto rec = run({"reconstruct", "--domain", s.p2(), "--data", a, "--t", "-1", "--out",
                    s.path("r")});
    auto bwd = run({"solve", "--domain", s.p2(), "--data", a, "--t", "1", "--out", s.path("b")});
    CHECK(rec.code == 0);
    CHECK(bwd.code == 0);
    CHECK(read_text(s.path("r.csv")) == read_text(s.path("b.csv")));
}

TEST_CASE("verify writes three deterministic artifacts") {
    Scratch s("verify");
    std::string g = s.path("g.json");
    REQUIRE(run({"domain", "build", "--lattice", "8", "--out", g}).code == 0);

    auto first = run({"verify", "--experiment", "meanvalue", "--domain", g, "--jmax", "2",
                      "--out", s.path("v1")});
    CHECK(first.code == 0);
    CHECK(first.out.rfind("meanvalue: pass", 0) == 0);
    auto rep = nlohmann::json::parse(read_text(s.path("v1.json")));
    CHECK(rep["pass"] == true);
    CHECK(rep["inequality"] == "meanvalue");

    auto second = run({"verify", "--experiment", "meanvalue", "--domain", g, "--jmax", "2",
                       "--out", s.path("v2")});
    CHECK(second.code == 0);
    for (const char* suffix : {".json", ".csv", ".data.csv"})
        CHECK(read_text(s.path("v1") + suffix) == read_text(s.path("v2") + suffix));

    auto rem = run({"verify", "--experiment", "remainder", "--domain", g, "--jmax", "12", "--t",
                    "-0.5", "--out", s.path("rem")});
    CHECK(rem.code == 0);
    CHECK(rem.out.rfind("remainder: pass", 0) == 0);
}

TEST_CASE("verify ratios ignore a data rescaling") {
    Scratch s("scale");
    std::string g = s.path("g.json");
    REQUIRE(run({"domain", "build", "--lattice", "8", "--out", g}).code == 0);
    REQUIRE(run({"verify", "--experiment", "caccioppoli", "--domain", g, "--jmax", "2", "--out",
                 s.path("s1")}).code == 0);
    REQUIRE(run({"verify", "--experiment", "caccioppoli", "--domain", g, "--jmax", "2", "--scale",
                 "1000", "--out", s.path("s2")}).code == 0);
    auto r1 = nlohmann::json::parse(read_text(s.path("s1.json")));
    auto r2 = nlohmann::json::parse(read_text(s.path("s2.json")));
    REQUIRE(r1["rows"].size() == r2["rows"].size());
    for (std::size_t i = 0; i < r1["rows"].size(); ++i) {
        double a = r1["rows"][i]["ratio"].get<double>();
        double b = r2["rows"][i]["ratio"].get<double>();
        CHECK(std::fabs(b - a) / a < 1e-12);
    }
}

TEST_CASE("verify refuses an empty band") {
    Scratch s("band");
    std::string g = s.path("g.json");
    REQUIRE(run({"domain", "build", "--lattice", "2", "--boundary", "dirichlet", "--out",
                 g}).code == 0);
    auto r = run({"verify", "--experiment", "meanvalue", "--domain", g, "--lambda-cut", "0.5",
                  "--jmax", "2", "--out", s.path("v")});
    CHECK(r.code == 1);
    CHECK(r.err.find("band limit") != std::string::npos);
}

TEST_CASE("tychonov grid and certificate") {
    Scratch s("tychonov");
    std::string out = s.path("ty.csv");
    auto r = run({"tychonov", "--x0", "0", "--x1", "2", "--nx", "5", "--t", "0.5", "--out", out});
    CHECK(r.code == 0);
    std::string csv = read_text(out);
    CHECK(csv.rfind("x,t,value,tail_estimate\n", 0) == 0);
    CHECK(csv.find("\n0,0.5,0.018315638888734179,0\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

    auto cert = nlohmann::json::parse(read_text(s.path("ty.cert.json")));
    CHECK(cert["derivatives_at_zero"].size() == 10);
    CHECK(cert["gap"].get<double>() == doctest::Approx(0.018315638888734179).epsilon(1e-12));

    auto again = run({"tychonov", "--x0", "0", "--x1", "2", "--nx", "5", "--t", "0.5", "--out",
                      s.path("ty2.csv")});
    CHECK(again.code == 0);
    CHECK(read_text(s.path("ty2.csv")) == csv);
}

TEST_CASE("tychonov reports grid points that outran the cap") {
    Scratch s("tycap");
    std::string out = s.path("far.csv");
    auto r = run({"tychonov", "--x0", "16", "--x1", "16", "--nx", "1", "--t", "0.5", "--out", out});
    CHECK(r.code == 1);
    CHECK(r.err.find("decreasing-term regime") != std::string::npos);
    CHECK(fs::exists(out));  // the grid is still written for inspection
    std::string csv = read_text(out);
    CHECK(csv.find("16,0.5,") != std::string::npos);
}
