#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "reltv/sixj.hpp"
#include "reltv/statesum.hpp"

using reltv::Parity;
using reltv::QuantumContext;
using reltv::Root;
using reltv::StateSumOptions;
using reltv::Triangulation;
using reltv::cplx;

namespace {
const std::string kData = RELTV_DATA_DIR;
constexpr double kPi = std::numbers::pi;

double rel_diff(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}
}  // namespace

TEST_CASE("admissible coloring census on one edge") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    // A single color a must satisfy 3a even and 3a <= 2(r-2): at r=7 that
    // leaves a in {0, 2}.
    CHECK(reltv::count_admissible(tri, 7, Parity::All) == 2);
    CHECK(reltv::count_admissible(tri, 7, Parity::EvenOnly) == 2);
    CHECK(reltv::count_admissible(tri, 13, Parity::All) == 4);  // a in {0,2,4,6}

    std::vector<std::vector<int>> seen;
    reltv::enumerate_admissible(tri, 7, Parity::All,
                                [&](const std::vector<int>& a) { seen.push_back(a); });
    REQUIRE(seen.size() == 2);
    CHECK(seen[0] == std::vector<int>{0});
    CHECK(seen[1] == std::vector<int>{2});
}

TEST_CASE("one-edge state sum equals its two-term hand expansion") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    QuantumContext ctx(7, Root::E2PIR);
    const auto res = reltv::relative_tv(tri, {0}, ctx);
    const cplx expected =
        reltv::edge_weight(0, 0, ctx) * reltv::sixj_direct({0, 0, 0, 0, 0, 0}, ctx) +
        reltv::edge_weight(2, 0, ctx) * reltv::sixj_direct({2, 2, 2, 2, 2, 2}, ctx);
    CHECK(rel_diff(res.value, expected) < 1e-14);
    CHECK(res.num_colorings == 2);
    CHECK_FALSE(res.zero);
    CHECK(res.log_abs == doctest::Approx(std::log(std::abs(expected))).epsilon(1e-12));
}

TEST_CASE("state sum agrees with the odometer oracle on every sample") {
    struct Case {
        const char* file;
        int r;
        std::vector<int> b;
    };
    const Case cases[] = {
        {"one_tet_one_edge.json", 5, {0}},
        {"one_tet_one_edge.json", 9, {3}},
        {"two_edge_loop.json", 7, {0, 0}},
        {"two_edge_loop.json", 7, {2, 4}},
        {"two_tet_cusped.json", 5, {0, 0}},
        {"two_tet_cusped.json", 7, {1, 3}},
    };
    for (const auto& c : cases) {
        const auto tri = Triangulation::from_file(kData + "/" + c.file);
        QuantumContext ctx(c.r, Root::E2PIR);
        const auto res = reltv::relative_tv(tri, c.b, ctx);
        const cplx brute = oracle::tv_bruteforce(tri, c.b, ctx);
        CHECK(rel_diff(res.value, brute) < 1e-10);
    }
}

TEST_CASE("at b = 0 the invariant carries the classical edge weights") {
    for (const char* file :
         {"one_tet_one_edge.json", "two_edge_loop.json", "two_tet_cusped.json"}) {
        const auto tri = Triangulation::from_file(kData + "/" + std::string(file));
        QuantumContext ctx(7, Root::E2PIR);
        const std::vector<int> b(tri.num_edges(), 0);
        const auto res = reltv::relative_tv(tri, b, ctx);
        const cplx plain = oracle::tv_plain_weights(tri, ctx);
        CHECK(rel_diff(res.value, plain) < 1e-12);
    }
}

TEST_CASE("parity restriction costs exactly the homology factor") {
    for (const char* file :
         {"one_tet_one_edge.json", "two_edge_loop.json", "two_tet_cusped.json"}) {
        const auto tri = Triangulation::from_file(kData + "/" + std::string(file));
        const double factor = std::pow(2.0, tri.z2_homology_ranks().h2);
        for (int r : {7, 9}) {
            QuantumContext ctx(r, Root::E2PIR);
            const std::vector<int> b(tri.num_edges(), 0);
            StateSumOptions even;
            even.parity = Parity::EvenOnly;
            const auto all = reltv::relative_tv(tri, b, ctx);
            const auto evens = reltv::relative_tv(tri, b, ctx, even);
            CHECK(rel_diff(all.value, factor * evens.value) < 1e-11);
        }
    }
}

TEST_CASE("compensated summation changes nothing on small sums") {
    const auto tri = Triangulation::from_file(kData + "/two_edge_loop.json");
    QuantumContext ctx(9, Root::E2PIR);
    StateSumOptions comp;
    comp.summation = reltv::Summation::Compensated;
    const auto plain = reltv::relative_tv(tri, {0, 0}, ctx);
    const auto kahan = reltv::relative_tv(tri, {0, 0}, ctx, comp);
    CHECK(rel_diff(plain.value, kahan.value) < 1e-13);
}

TEST_CASE("results are bit-identical across thread counts at fixed width") {
    const auto tri = Triangulation::from_file(kData + "/two_tet_cusped.json");
    QuantumContext ctx(11, Root::E2PIR);
    StateSumOptions base;
    base.parallel_width = 4;
    base.threads = 1;
    const auto ref = reltv::relative_tv(tri, {0, 0}, ctx, base);
    for (int threads : {2, 3}) {
        StateSumOptions opts = base;
        opts.threads = threads;
        const auto got = reltv::relative_tv(tri, {0, 0}, ctx, opts);
        CHECK(got.value.real() == ref.value.real());
        CHECK(got.value.imag() == ref.value.imag());
        CHECK(got.num_colorings == ref.num_colorings);
    }
    // Different widths may reassociate the sum but agree to rounding noise.
    StateSumOptions wide;
    wide.parallel_width = 7;
    const auto other = reltv::relative_tv(tri, {0, 0}, ctx, wide);
    CHECK(rel_diff(other.value, ref.value) < 1e-12);
}

TEST_CASE("option and input validation") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    QuantumContext ctx(7, Root::E2PIR);
    CHECK_THROWS_AS(reltv::relative_tv(tri, {0, 0}, ctx), reltv::InputError);
    CHECK_THROWS_AS(reltv::relative_tv(tri, {6}, ctx), reltv::InputError);
    CHECK_THROWS_AS(reltv::relative_tv(tri, {-1}, ctx), reltv::InputError);
    StateSumOptions bad;
    bad.parallel_width = 0;
    CHECK_THROWS_AS(reltv::relative_tv(tri, {0}, ctx, bad), reltv::InputError);
}

TEST_CASE("growth table for a synthetic exponential sequence") {
    const double v0 = 1.7;
    std::vector<std::pair<int, cplx>> values;
    for (int r : {11, 13, 15, 17}) values.push_back({r, std::exp(r * v0 / (2 * kPi))});
    const auto rows = reltv::growth_rate(values);
    REQUIRE(rows.size() == 4);
    CHECK(std::isnan(rows[0].diff));
    for (const auto& row : rows) {
        CHECK_FALSE(row.zero);
        CHECK(row.scaled_log == doctest::Approx(v0).epsilon(1e-12));
    }
    CHECK(rows[3].diff == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("growth table flags zeros and bad indexing") {
    std::vector<std::pair<int, cplx>> values{{11, cplx(0.0, 0.0)}, {13, cplx(1.0, 0.0)}};
    const auto rows = reltv::growth_rate(values);
    CHECK(rows[0].zero);
    CHECK_THROWS_AS(reltv::growth_rate({{10, cplx(1.0, 0.0)}, {12, cplx(1.0, 0.0)}}),
                    reltv::InputError);
    CHECK_THROWS_AS(reltv::growth_rate({{13, cplx(1.0, 0.0)}, {11, cplx(1.0, 0.0)}}),
                    reltv::InputError);
}

TEST_CASE("seconds are recorded only when requested") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    QuantumContext ctx(7, Root::E2PIR);
    const auto silent = reltv::relative_tv(tri, {0}, ctx);
    CHECK(silent.seconds == 0.0);
    StateSumOptions timed;
    timed.record_seconds = true;
    const auto loud = reltv::relative_tv(tri, {0}, ctx, timed);
    CHECK(loud.seconds > 0.0);
}
