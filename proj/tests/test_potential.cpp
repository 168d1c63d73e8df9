#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "reltv/hypgeom.hpp"
#include "reltv/potential.hpp"
#include "reltv/quantum.hpp"
#include "reltv/triangulation.hpp"

using reltv::Triangulation;
using reltv::cplx;

namespace {
constexpr double kPi = std::numbers::pi;
const std::string kData = RELTV_DATA_DIR;

std::array<cplx, 6> promote(const std::array<double, 6>& a) {
    std::array<cplx, 6> out{};
    for (int s = 0; s < 6; ++s) out[s] = cplx(a[s], 0.0);
    return out;
}

std::array<cplx, 6> regular() {
    std::array<cplx, 6> a{};
    a.fill(cplx(kPi, 0.0));
    return a;
}

// A random interior point of the real domain: hyperideal angles plus an
// admissible xi strictly between the face and quad half-sum bounds.
struct RealPoint {
    std::array<double, 6> alpha;
    double xi;
};

RealPoint random_real_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pert(-0.25, 0.25);
    std::uniform_real_distribution<double> unit(0.15, 0.85);
    while (true) {
        std::array<double, 6> alpha{};
        for (auto& v : alpha) v = kPi + pert(rng);
        bool ok = true;
        for (const auto& f : reltv::kFaceSlots) {
            const double s = alpha[f[0]] + alpha[f[1]] + alpha[f[2]];
            if (s <= 2 * kPi + 0.05 || s >= 4 * kPi - 0.05) ok = false;
        }
        if (!ok) continue;
        // Face half-sums and quad half-sums bound the xi interval.
        double lo = 0.0;
        for (const auto& f : reltv::kFaceSlots)
            lo = std::max(lo, (alpha[f[0]] + alpha[f[1]] + alpha[f[2]]) / 2);
        double hi = 2 * kPi;
        hi = std::min(hi, (alpha[0] + alpha[3] + alpha[1] + alpha[4]) / 2);
        hi = std::min(hi, (alpha[0] + alpha[3] + alpha[2] + alpha[5]) / 2);
        hi = std::min(hi, (alpha[1] + alpha[4] + alpha[2] + alpha[5]) / 2);
        if (hi - lo < 0.1) continue;
        const double xi = lo + unit(rng) * (hi - lo);
        return {alpha, xi};
    }
}

}  // namespace

TEST_CASE("U at the regular octahedral point") {
    const cplx u = reltv::U_potential(regular(), cplx(7 * kPi / 4, 0.0));
    CHECK(u.real() == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
    CHECK(u.imag() == doctest::Approx(2 * reltv::octahedron_volume()).epsilon(1e-12));
}

TEST_CASE("Im U equals twice the real angle potential on the real domain") {
    std::mt19937_64 rng(20260815);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_real_point(rng);
        const cplx u = reltv::U_potential(promote(p.alpha), cplx(p.xi, 0.0));
        const double v = reltv::V_real(p.alpha, p.xi);
        CHECK(u.imag() == doctest::Approx(2 * v).epsilon(1e-10));
    }
}

TEST_CASE("the xi derivative is holomorphic and matches finite differences") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        const auto p = random_real_point(rng);
        auto alpha = promote(p.alpha);
        // Push slightly off the real slice to exercise complex arguments.
        for (int s = 0; s < 6; ++s) alpha[s] += cplx(0.0, 0.02 * ((s % 2) ? 1 : -1));
        const cplx xi(p.xi, 0.01);
        const double h = 1e-6;
        const cplx real_fd =
            (reltv::U_potential(alpha, xi + h) - reltv::U_potential(alpha, xi - h)) /
            (2 * h);
        const cplx imag_fd = (reltv::U_potential(alpha, xi + cplx(0, h)) -
                              reltv::U_potential(alpha, xi - cplx(0, h))) /
                             cplx(0, 2 * h);
        const cplx d = reltv::U_potential_dxi(alpha, xi);
        CHECK(std::abs(real_fd - d) < 2e-6);
        CHECK(std::abs(imag_fd - d) < 2e-6);  // Cauchy-Riemann
        const cplx d2_fd =
            (reltv::U_potential_dxi(alpha, xi + h) - reltv::U_potential_dxi(alpha, xi - h)) /
            (2 * h);
        CHECK(std::abs(d2_fd - reltv::U_potential_d2xi(alpha, xi)) < 2e-5);
    }
}

TEST_CASE("xi_star finds the stationary point") {
    CHECK(std::abs(reltv::xi_star(regular()) - cplx(7 * kPi / 4, 0.0)) < 1e-9);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_real_point(rng);
        auto alpha = promote(p.alpha);
        for (int s = 0; s < 6; ++s) alpha[s] += cplx(0.0, 0.05 * std::sin(1.0 + s + trial));
        const cplx xs = reltv::xi_star(alpha);
        CHECK(std::abs(reltv::U_potential_dxi(alpha, xs)) < 1e-9);
        // Conjugation symmetry: conjugate data gives the conjugate point.
        std::array<cplx, 6> conj_alpha{};
        for (int s = 0; s < 6; ++s) conj_alpha[s] = std::conj(alpha[s]);
        CHECK(std::abs(reltv::xi_star(conj_alpha) - std::conj(xs)) < 1e-8);
    }
}

TEST_CASE("W on deformed angles encodes the covolume") {
    CHECK(std::abs(reltv::W_tet(regular()) -
                   cplx(2 * kPi * kPi, 2 * reltv::octahedron_volume())) < 1e-10);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(0.1, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        std::array<double, 6> l{};
        for (auto& v : l) v = dist(rng);
        std::array<cplx, 6> alpha{};
        for (int s = 0; s < 6; ++s) alpha[s] = cplx(kPi, l[s]);
        const cplx w = reltv::W_tet(alpha);
        const cplx expected(2 * kPi * kPi, 2 * reltv::covolume(l));
        CHECK(std::abs(w - expected) < 1e-6);
    }
}

TEST_CASE("both deformation signs reach the same value of W") {
    // Flipping the sign of any deformation pi +- i l leaves W unchanged: the
    // saddle point moves, but the value stays 2 pi^2 + 2i Cov(l).
    std::array<double, 6> l = {0.3, 0.5, 0.2, 0.6, 0.4, 0.25};
    std::array<cplx, 6> up{}, down{}, mixed{};
    for (int s = 0; s < 6; ++s) {
        up[s] = cplx(kPi, l[s]);
        down[s] = cplx(kPi, -l[s]);
        mixed[s] = cplx(kPi, (s % 2 ? -1.0 : 1.0) * l[s]);
    }
    const cplx expected(2 * kPi * kPi, 2 * reltv::covolume(l));
    CHECK(std::abs(reltv::W_tet(up) - expected) < 1e-9);
    CHECK(std::abs(reltv::W_tet(down) - expected) < 1e-9);
    CHECK(std::abs(reltv::W_tet(mixed) - expected) < 1e-9);
}

TEST_CASE("the geometric point is critical with the predicted value") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    for (double theta : {0.0, 0.12}) {
        const auto metric = reltv::solve_polyhedral_metric(tri, {theta});
        for (int sign : {+1, -1}) {
            std::vector<double> beta{kPi + sign * theta / 2};
            const std::vector<int> eps{sign};
            const auto rep = reltv::verify_critical(tri, metric, beta, eps);
            CAPTURE(theta);
            CAPTURE(sign);
            CHECK(rep.grad_inf < 1e-7);
            CHECK(rep.re_error < 1e-6);
            CHECK(rep.im_error < 1e-6);
            CHECK(rep.grad_ok);
            CHECK(rep.re_ok);
            CHECK(rep.im_ok);
            CHECK(rep.expected_im ==
                  doctest::Approx(2 * metric.total_volume).epsilon(1e-12));
        }
    }
}

TEST_CASE("criticality also holds on a two-edge triangulation") {
    const auto tri = Triangulation::from_file(kData + "/two_tet_cusped.json");
    const std::vector<double> theta{0.3, 0.1};
    const auto metric = reltv::solve_polyhedral_metric(tri, theta);
    const std::vector<double> beta{kPi + theta[0] / 2, kPi + theta[1] / 2};
    const std::vector<int> eps{1, 1};
    const auto rep = reltv::verify_critical(tri, metric, beta, eps);
    CHECK(rep.grad_inf < 1e-7);
    CHECK(rep.re_error < 1e-6);
    CHECK(rep.im_error < 1e-6);
}

TEST_CASE("geometric candidate construction follows the sign rules") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    const auto metric = reltv::solve_polyhedral_metric(tri, {0.2});
    const auto point =
        reltv::geometric_critical_point(tri, metric, {kPi + 0.1}, {1});
    REQUIRE(point.alpha.size() == 1);
    REQUIRE(point.xi.size() == 1);
    CHECK(point.mu[0] == 1);
    CHECK(point.alpha[0].real() == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(point.alpha[0].imag() ==
          doctest::Approx(metric.edge_lengths[0]).epsilon(1e-12));
    // Mirrored boundary flips mu and the deformation side.
    const auto mirrored =
        reltv::geometric_critical_point(tri, metric, {kPi - 0.1}, {-1});
    CHECK(mirrored.mu[0] == -1);
    CHECK(std::abs(mirrored.alpha[0] - point.alpha[0]) < 1e-14);
}

TEST_CASE("W_eps validates its inputs") {
    const auto tri = Triangulation::from_file(kData + "/one_tet_one_edge.json");
    CHECK_THROWS_AS(reltv::W_eps(tri, {kPi, kPi}, {1}, {cplx(kPi, 0)}, {cplx(5.0, 0)}),
                    reltv::InputError);
    CHECK_THROWS_AS(reltv::W_eps(tri, {kPi}, {2}, {cplx(kPi, 0)}, {cplx(5.0, 0)}),
                    reltv::InputError);
}

TEST_CASE("W_eps at beta = pi reduces to the plain sum of tet potentials") {
    const auto tri = Triangulation::from_file(kData + "/two_tet_cusped.json");
    const std::vector<double> beta{kPi, kPi};
    const std::vector<int> eps{1, -1};
    const std::vector<cplx> alpha{cplx(kPi, 0.2), cplx(kPi, -0.1)};
    const std::vector<cplx> xi{cplx(5.2, 0.0), cplx(5.3, 0.1)};
    std::array<cplx, 6> a0{}, a1{};
    const auto& t0 = tri.tets()[0];
    const auto& t1 = tri.tets()[1];
    for (int s = 0; s < 6; ++s) {
        a0[s] = alpha[t0[s]];
        a1[s] = alpha[t1[s]];
    }
    const cplx direct = reltv::U_potential(a0, xi[0]) + reltv::U_potential(a1, xi[1]);
    CHECK(std::abs(reltv::W_eps(tri, beta, eps, alpha, xi) - direct) < 1e-12);
}

TEST_CASE("Hessian of the scaled imaginary part at the regular point") {
    const auto rep = reltv::hessian_checks();
    CHECK(rep.max_entry_error < 1e-5);
    CHECK(rep.negative_definite);
    // Closed-form pattern: alpha block -1 on the diagonal, -1/2 off it;
    // mixed alpha-xi entries +2; xi-xi entry -8.
    CHECK(rep.hessian[0][0] == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(rep.hessian[0][1] == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK(rep.hessian[0][6] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(rep.hessian[6][6] == doctest::Approx(-8.0).epsilon(1e-4));
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            CHECK(rep.hessian[i][j] == doctest::Approx(rep.hessian[j][i]).epsilon(1e-6));
    for (double ev : rep.eigenvalues) CHECK(ev < -1e-6);
}

TEST_CASE("branch-cut nudges are counted, not silently ignored") {
    const long before = reltv::cut_nudge_count();
    // xi at the lower end of its interval drives a dilogarithm argument to
    // the cut; the evaluation must survive and bump the counter.
    std::array<cplx, 6> alpha = regular();
    const cplx u = reltv::U_potential(alpha, cplx(3 * kPi / 2 + 1e-12, 0.0));
    (void)u;
    CHECK(reltv::cut_nudge_count() >= before);
}
