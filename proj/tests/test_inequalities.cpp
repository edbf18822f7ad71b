#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <utility>

#include "ancient_heat/domain.hpp"
#include "ancient_heat/errors.hpp"
#include "ancient_heat/inequalities.hpp"

using namespace ancient_heat;

namespace {

const double kLn2 = 0.69314718055994531;

// u(x, t) = c e^{-2t} phi(x) on P2 with phi = (1, -1), the lambda = -2
// eigenmode: Delta^j u = (-2)^j u and every cube quantity has a closed form.
SpaceTimeField eigenmode_window(double T, int nt, double c = 1.0) {
    SpaceTimeField u;
    u.n = 2;
    u.times.resize(std::size_t(nt));
    u.values.resize(2 * std::size_t(nt));
    double step = T / double(nt - 1);
    for (int i = 0; i < nt; ++i) {
        double t = double(i - (nt - 1)) * step;
        u.times[std::size_t(i)] = t;
        double v = c * std::exp(-2.0 * t);
        u.at(0, i) = v;
        u.at(1, i) = -v;
    }
    u.validate();
    return u;
}

SpaceTimeField constant_window(const DomainGraph& g, double T, int nt, double c) {
    SpaceTimeField u;
    u.n = g.n;
    u.times.resize(std::size_t(nt));
    u.values.assign(std::size_t(g.n) * std::size_t(nt), c);
    double step = T / double(nt - 1);
    for (int i = 0; i < nt; ++i) u.times[std::size_t(i)] = double(i - (nt - 1)) * step;
    u.validate();
    return u;
}

// integral of (2^j u)^2 over Q(0,j) recomputed from scratch, plain summation
double eigen_cube_integral(const SpaceTimeField& u, int scale, int j) {
    double lo = -double(scale) - 1e-9;
    double s = 0.0;
    for (std::size_t ti = 0; ti < u.times.size(); ++ti) {
        if (u.times[ti] < lo) continue;
        for (int v = 0; v < 2; ++v) {
            double x = std::pow(2.0, double(j)) * u.at(v, int(ti));
            s += x * x;
        }
    }
    return s * u.dt();
}

}  // namespace

TEST_CASE("cubes collect the right vertices and time indices") {
    DomainGraph g = build_lattice({4, 4}, 1.0, Boundary::periodic);
    SpaceTimeField u = constant_window(g, 5.0, 51, 1.0);
    auto q0 = make_cube(g, u, 0);
    CHECK(q0.vertices == std::vector<int>{0});
    CHECK(q0.t_first == 50);
    CHECK(q0.t_last == 50);

    auto q1 = make_cube(g, u, 1);
    CHECK(q1.vertices.size() == 5);
    CHECK(u.times[std::size_t(q1.t_first)] == doctest::Approx(-1.0).epsilon(1e-12));

    auto q4 = make_cube(g, u, 4);  // ball saturates the torus
    CHECK(q4.vertices.size() == 16);

    CHECK_THROWS_AS(make_cube(g, u, -1), input_error);
    CHECK_THROWS_AS(make_cube(g, u, 6), input_error);  // window is only [-5, 0]
}

TEST_CASE("eigenmode rows match an independent recomputation") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(5.0, 101);

    auto cacc = verify_caccioppoli(u, g, 4);
    REQUIRE(cacc.rows.size() == 4);
    for (const auto& row : cacc.rows) {
        double lhs = eigen_cube_integral(u, row.j, 1);
        double rhs = eigen_cube_integral(u, row.j + 1, 0);
        CHECK(row.lhs == doctest::Approx(lhs).epsilon(1e-12));
        CHECK(row.rhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(row.ratio < 4.0);  // 4 * S(j) / S(j+1) with S increasing
    }
    CHECK(cacc.pass);

    auto mv = verify_mean_value(u, g, 4);
    for (const auto& row : mv.rows) {
        double sup = std::exp(2.0 * double(row.j));  // attained at t = -j
        CHECK(row.lhs == doctest::Approx(sup * sup).epsilon(1e-9));
        CHECK(row.rhs == doctest::Approx(eigen_cube_integral(u, row.j + 1, 0)).epsilon(1e-12));
    }
    CHECK(mv.pass);
    REQUIRE(mv.fit.has_value());
    CHECK(mv.fit->slope == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("induction ratios start at exactly one and decay geometrically") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(9.0, 181);
    auto rep = verify_induction_bound(u, g, 4);
    REQUIRE(rep.rows.size() == 5);
    CHECK(rep.rows[0].ratio == 1.0);  // Q(0,1) over Q(0,1), identical sums
    for (const auto& row : rep.rows) {
        CHECK(row.lhs == doctest::Approx(eigen_cube_integral(u, row.j + 1, row.j)).epsilon(1e-12));
        CHECK(row.rhs == doctest::Approx(eigen_cube_integral(u, 2 * row.j + 1, 0)).epsilon(1e-12));
    }
    REQUIRE(rep.fit.has_value());
    // r_j ~ (4 e^{-4})^j once the time window dominates
    CHECK(rep.fit->slope == doctest::Approx(2.0 * kLn2 - 4.0).epsilon(0.05));
    CHECK(rep.fit->r2 > 0.99);
    CHECK(rep.pass);
}

TEST_CASE("derivative sups of an eigenmode are exactly log-linear") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(4.0, 81);
    auto rep = verify_derivative_sup(u, g, 4);
    REQUIRE(rep.rows.size() == 4);
    for (const auto& row : rep.rows) {
        double expected = std::pow(2.0, double(row.j)) * std::exp(2.0 * double(row.j));
        CHECK(row.lhs == doctest::Approx(expected).epsilon(1e-12));
        CHECK(row.lhs <= row.rhs * (1 + 1e-12));  // covering bound
    }
    REQUIRE(rep.fit.has_value());
    CHECK(rep.fit->slope == doctest::Approx(kLn2 + 2.0).epsilon(1e-9));
    CHECK(rep.fit->r2 > 0.999999);
    CHECK(rep.pass);
}

TEST_CASE("taylor remainders shrink order by order on the eigenmode") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(2.0, 201);
    auto rep = taylor_remainder_decay(u, g, 0, -0.5, 12);
    REQUIRE(rep.rows.size() == 13);
    CHECK(rep.rows[0].lhs == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    for (const auto& row : rep.rows) CHECK(row.lhs <= row.rhs * (1 + 1e-6));
    // |R_j| = |e - sum_{i<j} 1/i!| -> 0; the tail from 12 is ~2e-9
    CHECK(rep.rows.back().lhs < 1e-8);
    CHECK(rep.pass);
    REQUIRE(rep.fit.has_value());
    CHECK(rep.fit->slope < -1.0);
}

TEST_CASE("remainder at t = 0 is exact after the zeroth order") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(1.0, 41);
    auto rep = taylor_remainder_decay(u, g, 1, 0.0, 3);
    CHECK(rep.rows[0].lhs == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].lhs == 0.0);
        CHECK(rep.rows[i].ratio == 0.0);
    }
    CHECK(rep.pass);
}

TEST_CASE("constant data passes every check trivially") {
    DomainGraph g = build_lattice({5}, 1.0, Boundary::neumann);
    SpaceTimeField u = constant_window(g, 10.0, 101, 3.25);

    auto mv = verify_mean_value(u, g, 3);
    CHECK(mv.pass);
    REQUIRE(mv.fit.has_value());
    CHECK(mv.fit->slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mv.fit->r2 == 1.0);  // flat data is a perfect fit

    auto cacc = verify_caccioppoli(u, g, 3);
    CHECK(cacc.pass);
    CHECK(!cacc.fit.has_value());  // Delta u = 0: nothing to fit
    for (const auto& row : cacc.rows) CHECK(row.ratio == 0.0);

    auto ind = verify_induction_bound(u, g, 3);
    CHECK(ind.pass);
    CHECK(ind.rows[0].ratio == 1.0);
    CHECK(!ind.fit.has_value());  // only the j = 0 ratio is positive

    auto ds = verify_derivative_sup(u, g, 3);
    CHECK(ds.pass);
    CHECK(!ds.fit.has_value());

    auto rem = taylor_remainder_decay(u, g, 2, -1.0, 4);
    CHECK(rem.pass);
    for (std::size_t i = 1; i < rem.rows.size(); ++i) CHECK(rem.rows[i].lhs == 0.0);
}

TEST_CASE("reported ratios are invariant under data scaling") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(9.0, 181);
    SpaceTimeField v = eigenmode_window(9.0, 181, 1000.0);

    auto pairs = {
        std::pair{verify_mean_value(u, g, 3), verify_mean_value(v, g, 3)},
        std::pair{verify_caccioppoli(u, g, 3), verify_caccioppoli(v, g, 3)},
        std::pair{verify_induction_bound(u, g, 3), verify_induction_bound(v, g, 3)},
        std::pair{verify_derivative_sup(u, g, 3), verify_derivative_sup(v, g, 3)},
        std::pair{taylor_remainder_decay(u, g, 0, -2.0, 6), taylor_remainder_decay(v, g, 0, -2.0, 6)},
    };
    for (const auto& [base, scaled] : pairs) {
        REQUIRE(base.rows.size() == scaled.rows.size());
        for (std::size_t i = 0; i < base.rows.size(); ++i) {
            double r0 = base.rows[i].ratio, r1 = scaled.rows[i].ratio;
            if (r0 == 0.0)
                CHECK(r1 == 0.0);
            else
                CHECK(std::fabs(r1 - r0) / r0 < 1e-12);
        }
        CHECK(base.pass == scaled.pass);
    }
}

TEST_CASE("windows that are too short are rejected") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(3.0, 31);
    CHECK_THROWS_AS(verify_mean_value(u, g, 3), input_error);      // needs [-4, 0]
    CHECK_THROWS_AS(verify_induction_bound(u, g, 2), input_error); // needs [-5, 0]
    CHECK_THROWS_AS(taylor_remainder_decay(u, g, 0, -3.5, 2), input_error);
    CHECK_THROWS_AS(taylor_remainder_decay(u, g, 0, 0.25, 2), input_error);
    CHECK_THROWS_AS(taylor_remainder_decay(u, g, 5, -1.0, 2), input_error);
    CHECK_THROWS_AS(taylor_remainder_decay(u, g, 0, -1.03, 2), input_error);  // off-grid t
    CHECK_THROWS_AS(verify_mean_value(u, g, 0), input_error);
}

TEST_CASE("report serialization carries rows, fit and pass") {
    DomainGraph g = path_graph(2);
    SpaceTimeField u = eigenmode_window(4.0, 41);
    auto rep = verify_caccioppoli(u, g, 3);
    auto parsed = nlohmann::json::parse(inequality_report_json(rep));
    CHECK(parsed["inequality"] == "caccioppoli");
    CHECK(parsed["rows"].size() == 3);
    for (const char* key : {"j", "lhs", "rhs", "ratio"}) CHECK(parsed["rows"][0].contains(key));
    CHECK(parsed["fit"].contains("r2"));
    CHECK(parsed["pass"].is_boolean());
    CHECK(parsed.size() == 4);

    auto csv = inequality_report_csv(rep);
    CHECK(csv.rfind("j,lhs,rhs,ratio\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
