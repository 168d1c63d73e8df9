#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "reltv/harness.hpp"

using reltv::AsymptoticsPlan;
using reltv::Parity;
using reltv::Triangulation;

namespace {
constexpr double kPi = std::numbers::pi;
const std::string kData = RELTV_DATA_DIR;

int count_fields(const std::string& line) {
    int n = 1;
    for (char c : line)
        if (c == ',') ++n;
    return n;
}
}  // namespace

TEST_CASE("boundary coloring tracks the requested angle") {
    // theta = 0 sits at the r/2 plateau and realizes a 2 pi / r angle.
    const auto b7 = reltv::boundary_coloring_for({0.0}, {1}, 7, Parity::All);
    CHECK(b7 == std::vector<int>{4});
    for (int r : {11, 51, 101}) {
        const auto b = reltv::boundary_coloring_for({0.0}, {1}, r, Parity::All);
        const double realized = std::fabs(2 * kPi - 4 * kPi * b[0] / r);
        CHECK(realized <= 2 * kPi / r + 1e-12);
    }
    // Generic angles are realized within the grid spacing 2 pi / r.
    for (double theta : {0.4, 1.0, 2.5}) {
        for (int r : {51, 101, 301}) {
            const auto b = reltv::boundary_coloring_for({theta}, {1}, r, Parity::All);
            const double realized = std::fabs(2 * kPi - 4 * kPi * b[0] / r);
            CHECK(std::fabs(realized - theta) <= 2 * kPi / r + 1e-12);
        }
    }
    // The mirrored sign lands on the complementary side of r/2.
    const auto plus = reltv::boundary_coloring_for({1.0}, {1}, 101, Parity::All);
    const auto minus = reltv::boundary_coloring_for({1.0}, {-1}, 101, Parity::All);
    CHECK(plus[0] < 101 / 2);
    CHECK(minus[0] > 101 / 2);

    // Even-only colorings stay even after clamping.
    for (double theta : {0.0, 0.7, 1.9}) {
        const auto b = reltv::boundary_coloring_for({theta}, {1}, 51, Parity::EvenOnly);
        CHECK(b[0] % 2 == 0);
    }
}

TEST_CASE("boundary coloring validates its inputs") {
    CHECK_THROWS_AS(reltv::boundary_coloring_for({0.0}, {1}, 3, Parity::All),
                    reltv::InputError);
    CHECK_THROWS_AS(reltv::boundary_coloring_for({-0.1}, {1}, 7, Parity::All),
                    reltv::InputError);
    CHECK_THROWS_AS(reltv::boundary_coloring_for({7.0}, {1}, 7, Parity::All),
                    reltv::InputError);
    CHECK_THROWS_AS(reltv::boundary_coloring_for({0.0}, {2}, 7, Parity::All),
                    reltv::InputError);
    CHECK_THROWS_AS(reltv::boundary_coloring_for({0.0}, {1, 1}, 7, Parity::All),
                    reltv::InputError);
}

TEST_CASE("Aitken extrapolation is exact on geometric tails") {
    const double limit = 2.75;
    const double q = 0.37;
    const auto s = [&](int n) { return limit + 0.8 * std::pow(q, n); };
    CHECK(reltv::aitken(s(1), s(2), s(3)) == doctest::Approx(limit).epsilon(1e-12));
    // Degenerate (constant) input falls back to the last value.
    CHECK(reltv::aitken(1.5, 1.5, 1.5) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("synthetic sweep has a constant gap and exact extrapolation") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    AsymptoticsPlan plan;
    plan.theta = {0.0};
    plan.r_list = {11, 13, 15, 17, 19, 21, 23};
    plan.synthetic_v0 = 5.0;
    const auto rep = reltv::run_asymptotics(tri, plan);
    REQUIRE(rep.rows.size() == plan.r_list.size());
    CHECK(rep.geom_vol == doctest::Approx(reltv::octahedron_volume()).epsilon(1e-12));
    for (const auto& row : rep.rows) {
        CHECK(row.scaled_log == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(row.gap == doctest::Approx(5.0 - rep.geom_vol).epsilon(1e-12));
        CHECK(row.colorings == 0);  // synthetic rows skip the state sum
    }
    CHECK(rep.extrapolated == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("plan validation") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    AsymptoticsPlan plan;
    plan.theta = {0.0};
    plan.r_list = {12, 14};
    CHECK_THROWS_AS(reltv::run_asymptotics(tri, plan), reltv::InputError);
    plan.r_list = {13, 11};
    CHECK_THROWS_AS(reltv::run_asymptotics(tri, plan), reltv::InputError);
    plan.r_list = {};
    CHECK_THROWS_AS(reltv::run_asymptotics(tri, plan), reltv::InputError);
    plan.r_list = {11};
    plan.theta = {0.0, 0.0};
    CHECK_THROWS_AS(reltv::run_asymptotics(tri, plan), reltv::InputError);
}

TEST_CASE("real sweeps fill every column and respect b_zero") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    AsymptoticsPlan plan;
    plan.theta = {0.0};
    plan.r_list = {7, 9, 11};
    const auto rep = reltv::run_asymptotics(tri, plan);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        CHECK(row.r == plan.r_list[i]);
        REQUIRE(row.b.size() == 1);
        CHECK(row.theta_real[0] ==
              doctest::Approx(std::fabs(2 * kPi - 4 * kPi * row.b[0] / row.r))
                  .epsilon(1e-12));
        if (!row.zero) {
            CHECK(row.colorings > 0);
            CHECK(row.scaled_log ==
                  doctest::Approx(2 * kPi / row.r * std::log(std::abs(row.tv)))
                      .epsilon(1e-10));
        }
    }

    AsymptoticsPlan zero = plan;
    zero.b_zero = true;
    const auto rep0 = reltv::run_asymptotics(tri, zero);
    for (const auto& row : rep0.rows) CHECK(row.b == std::vector<int>{0});
}

TEST_CASE("CSV output is deterministic and correctly shaped") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    AsymptoticsPlan plan;
    plan.theta = {0.0};
    plan.r_list = {7, 9, 11, 13};
    const auto rep = reltv::run_asymptotics(tri, plan);

    std::ostringstream a, b;
    reltv::write_asymptotics_csv(a, rep, {"invocation line"});
    reltv::write_asymptotics_csv(b, rep, {"invocation line"});
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# ", 0) == 0);
    std::getline(in, line);  // column header
    const int expected = 1 + 2 * tri.num_edges() + 8;
    CHECK(count_fields(line) == expected);
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(count_fields(line) == expected);
        ++rows;
    }
    CHECK(rows == 4);

    // A second run of the whole pipeline reproduces the bytes exactly.
    const auto rep2 = reltv::run_asymptotics(tri, plan);
    std::ostringstream c;
    reltv::write_asymptotics_csv(c, rep2, {"invocation line"});
    CHECK(c.str() == a.str());
}

TEST_CASE("the verification battery passes on the one-edge sample") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    const auto rep = reltv::run_verification(tri, {0.1}, {1});
    for (const auto& check : rep.checks) {
        CAPTURE(check.name);
        CAPTURE(check.value);
        CHECK(check.pass);
    }
    CHECK(rep.all_pass);
    CHECK(rep.metric.converged);
    // Both sign branches must be present.
    int branches = 0;
    for (const auto& check : rep.checks)
        if (check.name.rfind("critical_gradient", 0) == 0) ++branches;
    CHECK(branches == 2);
}
