#pragma once

// The holomorphic tetrahedron potential U(alpha, xi), its critical points in
// the xi direction, the per-tetrahedron action W, the global deformed action
// W^eps on a colored triangulation, and the numeric verification that the
// geometric point built from a polyhedral metric is critical with value
// 2 |T| pi^2 + 2 i Vol.

#include <array>
#include <complex>
#include <vector>

#include "reltv/hypgeom.hpp"
#include "reltv/triangulation.hpp"

namespace reltv {

using cplx = std::complex<double>;

// U on B_{H,C}: Re(alpha) of hyperideal-angle type, Re(xi) between the face
// half-sum maximum and min(quad half-sums, 2pi).  Dilogarithm arguments that
// graze the branch cut are nudged by +1e-8i; cut_nudge_count() reports how
// often that happened on the calling thread.
cplx U_potential(const std::array<cplx, 6>& alpha, cplx xi);
cplx U_potential_dxi(const std::array<cplx, 6>& alpha, cplx xi);
cplx U_potential_d2xi(const std::array<cplx, 6>& alpha, cplx xi);
long cut_nudge_count();

// Im U / 2 on real points coincides with this real concave potential
// (delegates to hypgeom::tet_angle_potential).
double V_real(const std::array<double, 6>& alpha, double xi);

// The xi-critical point of U with Re(xi) in the admissible interval; Newton
// seeded by the real maximizer of V at Re(alpha).  Residual |dU/dxi| < 1e-10.
cplx xi_star(const std::array<cplx, 6>& alpha);

// W(alpha) = U(alpha, xi_star(alpha)).
cplx W_tet(const std::array<cplx, 6>& alpha);

// A candidate critical point of the deformed action: alpha per edge, xi per
// tetrahedron.
struct CriticalPoint {
    std::vector<cplx> alpha;
    std::vector<cplx> xi;
    std::vector<int> mu;  // per-edge sign convention used to build alpha
};

// W^eps(alpha, xi) = -sum_e 2 eps_e (alpha_e - pi)(beta_e - pi)
//                    + sum_t U(alpha at t, xi_t).
cplx W_eps(const Triangulation& tri, const std::vector<double>& beta,
           const std::vector<int>& eps, const std::vector<cplx>& alpha,
           const std::vector<cplx>& xi);

// Build the geometric candidate from a solved metric: alpha_e = pi + eps_e
// mu_e i l_e with mu_e = +1 iff beta_e >= pi, and per-tet xi by xi_star.
// beta_e relates to the cone target theta_e by mu_e (2 beta_e - 2 pi) = ... ;
// callers pass beta directly.
CriticalPoint geometric_critical_point(const Triangulation& tri,
                                       const PolyhedralMetric& metric,
                                       const std::vector<double>& beta,
                                       const std::vector<int>& eps);

struct CriticalReport {
    double grad_inf = 0.0;          // max |dW^eps/dcoordinate| (FD)
    double re_error = 0.0;          // |Re W^eps - 2 |T| pi^2|
    double im_error = 0.0;          // |Im W^eps - 2 Vol|
    cplx value{0.0, 0.0};
    double expected_im = 0.0;
    std::vector<cplx> gradient;     // alpha entries then xi entries
    bool grad_ok = false, re_ok = false, im_ok = false;
};

// Thresholds: gradient 1e-7, both value errors 1e-6.
CriticalReport verify_critical(const Triangulation& tri,
                               const PolyhedralMetric& metric,
                               const std::vector<double>& beta,
                               const std::vector<int>& eps);

struct HessianReport {
    // Order: 6 alpha slots then xi; entries of the Hessian of
    // (alpha, xi) -> Im U(alpha, xi)/2 at the regular octahedral point.
    std::array<std::array<double, 7>, 7> hessian{};
    std::array<double, 7> eigenvalues{};
    double max_entry_error = 0.0;   // vs the closed-form entry pattern
    bool negative_definite = false;
};

// Finite-difference Hessian at alpha = (pi,..,pi), xi = 7pi/4, checked
// against the exact pattern (diag alpha -2, off-diag alpha -1, alpha-xi +2,
// xi-xi -8).
HessianReport hessian_checks();

}  // namespace reltv
