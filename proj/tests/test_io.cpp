#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "ancient_heat/domain.hpp"
#include "ancient_heat/errors.hpp"
#include "ancient_heat/io.hpp"

using namespace ancient_heat;
namespace fs = std::filesystem;

namespace {

// per-case scratch dir under the test working directory
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::path("io_scratch") / name) {
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string path(const std::string& file) const { return (dir / file).string(); }
};

void put(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("format_double round-trips every double bit pattern tried") {
    for (double v : {0.0, -0.0, 1.0, -1.0, 1.0 / 3.0, 0.1, 2.718281828459045, -1e300, 1e-300,
                     4.9406564584124654e-324, 3.141592653589793, 12345.678901234567}) {
        std::string s = format_double(v);
        double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
        CHECK(std::signbit(back) == std::signbit(v));
    }
    CHECK(format_double(-0.0) == "-0");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("json_number maps non-finite and absent values to null") {
    CHECK(json_number(1.5) == "1.5");
    CHECK(json_number(std::numeric_limits<double>::infinity()) == "null");
    CHECK(json_number(-std::numeric_limits<double>::infinity()) == "null");
    CHECK(json_number(std::nan("")) == "null");
    CHECK(json_number(std::optional<double>{}) == "null");
    CHECK(json_number(std::optional<double>{0.25}) == "0.25");
    CHECK(json_number(std::optional<int>{}) == "null");
    CHECK(json_number(std::optional<int>{-3}) == "-3");
}

TEST_CASE("atomic_write leaves the file and no droppings") {
    Scratch s("atomic");
    std::string p = s.path("out.txt");
    atomic_write(p, "first\n");
    CHECK(read_text(p) == "first\n");
    atomic_write(p, "second\n");  // overwrite through the same rename path
    CHECK(read_text(p) == "second\n");
    CHECK(!fs::exists(p + ".tmp"));
    CHECK_THROWS_AS(atomic_write(s.path("no_such_dir/x.txt"), "y"), input_error);
    CHECK_THROWS_AS(read_text(s.path("missing.txt")), input_error);
}

TEST_CASE("domain json round-trips lattices and bare graphs") {
    Scratch s("domain");
    DomainGraph g = build_lattice({4, 4}, 0.5, Boundary::dirichlet);
    std::string p = s.path("lattice.json");
    write_domain_json(g, p);
    DomainGraph back = read_domain_json(p);
    CHECK(back.n == g.n);
    CHECK(back.origin == g.origin);
    REQUIRE(back.edges.size() == g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        CHECK(back.edges[i].u == g.edges[i].u);
        CHECK(back.edges[i].v == g.edges[i].v);
        CHECK(back.edges[i].w == g.edges[i].w);
    }
    REQUIRE(back.lattice.has_value());
    CHECK(back.lattice->dims == std::vector<int>{4, 4});
    CHECK(back.lattice->h == 0.5);
    CHECK(back.lattice->boundary == Boundary::dirichlet);

    Rng rng(6);
    DomainGraph r = random_connected_graph(rng, 17);
    std::string q = s.path("random.json");
    write_domain_json(r, q);
    DomainGraph rback = read_domain_json(q);
    CHECK(!rback.lattice.has_value());
    CHECK(rback.n == 17);
    REQUIRE(rback.edges.size() == r.edges.size());
    for (std::size_t i = 0; i < r.edges.size(); ++i) CHECK(rback.edges[i].w == r.edges[i].w);
}

TEST_CASE("domain json rejects malformed input with the failing path") {
    Scratch s("domain_bad");
    auto expect_throw = [&](const std::string& name, const std::string& content) {
        std::string p = s.path(name);
        put(p, content);
        CHECK_THROWS_AS(read_domain_json(p), input_error);
    };
    expect_throw("truncated.json", "{\"n\": 2,");
    expect_throw("missing_n.json", "{\"edges\": [[0,1,1.0]], \"origin\": 0}");
    expect_throw("short_edge.json", "{\"n\": 2, \"edges\": [[0,1]], \"origin\": 0}");
    expect_throw("self_loop.json", "{\"n\": 2, \"edges\": [[0,0,1.0]], \"origin\": 0}");
    expect_throw("bad_boundary.json",
                 "{\"n\": 2, \"edges\": [[0,1,1.0]], \"origin\": 0, "
                 "\"lattice\": {\"dims\": [2], \"h\": 1.0, \"boundary\": \"open\"}}");
    CHECK_THROWS_AS(read_domain_json(s.path("absent.json")), input_error);
}

TEST_CASE("scalar csv round-trips bitwise") {
    Scratch s("scalar");
    ScalarField a{1.5, -2.25, 1e-300, 0.0, -0.0, 1.0 / 3.0};
    std::string p = s.path("a.csv");
    write_scalar_csv(a, p);
    ScalarField back = read_scalar_csv(p);
    REQUIRE(back.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(back[i] == a[i]);

    std::string text = read_text(p);
    CHECK(text.rfind("vertex,value\n", 0) == 0);
}

TEST_CASE("scalar csv rejects structural defects") {
    Scratch s("scalar_bad");
    auto expect_throw = [&](const std::string& name, const std::string& content) {
        std::string p = s.path(name);
        put(p, content);
        CHECK_THROWS_AS(read_scalar_csv(p), input_error);
    };
    expect_throw("header.csv", "v,value\n0,1.0\n");
    expect_throw("order.csv", "vertex,value\n1,1.0\n0,2.0\n");
    expect_throw("columns.csv", "vertex,value\n0,1.0,9\n");
    expect_throw("nonnum.csv", "vertex,value\n0,abc\n");
    expect_throw("nonfinite.csv", "vertex,value\n0,inf\n");
    expect_throw("empty.csv", "vertex,value\n");
}

TEST_CASE("spacetime csv round-trips and tolerates shuffled rows") {
    Scratch s("spacetime");
    SpaceTimeField u;
    u.n = 2;
    u.times = {-1.0, -0.5, 0.0};
    u.values = {1.0, -1.0, 0.5, -0.5, 0.25, -0.25};
    u.validate();
    std::string p = s.path("u.csv");
    write_spacetime_csv(u, p);
    SpaceTimeField back = read_spacetime_csv(p);
    CHECK(back.n == 2);
    CHECK(back.times == u.times);
    CHECK(back.values == u.values);

    // row order is free; slices are keyed by t and vertices sorted
    std::string shuffled = s.path("shuffled.csv");
    put(shuffled,
        "vertex,t,value\n1,0,-0.25\n0,-1,1\n1,-0.5,-0.5\n0,0,0.25\n1,-1,-1\n0,-0.5,0.5\n");
    SpaceTimeField sh = read_spacetime_csv(shuffled);
    CHECK(sh.times == u.times);
    CHECK(sh.values == u.values);
}

TEST_CASE("spacetime csv rejects defective grids") {
    Scratch s("spacetime_bad");
    auto expect_throw = [&](const std::string& name, const std::string& content) {
        std::string p = s.path(name);
        put(p, content);
        CHECK_THROWS_AS(read_spacetime_csv(p), input_error);
    };
    expect_throw("header.csv", "vertex,value\n0,1.0\n");
    expect_throw("dup.csv", "vertex,t,value\n0,0,1\n0,0,2\n");
    expect_throw("negative.csv", "vertex,t,value\n-1,0,1\n");
    expect_throw("hole.csv", "vertex,t,value\n0,-1,1\n0,0,1\n1,0,2\n");
    expect_throw("nonuniform.csv", "vertex,t,value\n0,-1,1\n0,-0.4,1\n0,0,1\n");
    expect_throw("endpoint.csv", "vertex,t,value\n0,-1.5,1\n0,-1,1\n0,-0.5,1\n");
    expect_throw("empty.csv", "vertex,t,value\n");
}
