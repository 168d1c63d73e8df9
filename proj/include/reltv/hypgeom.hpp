#pragma once

// Hyperbolic building blocks: the Lobachevsky function, the complex
// dilogarithm, the cosine laws tying dihedral angles of a deeply truncated
// (hyperideal) tetrahedron to its edge lengths, volume and covolume, and the
// Newton solver producing a polyhedral metric with prescribed cone angles on
// a triangulation.

#include <array>
#include <complex>
#include <vector>

#include "reltv/errors.hpp"
#include "reltv/triangulation.hpp"

namespace reltv {

// Lobachevsky function Lambda(t) = -int_0^t log|2 sin s| ds (odd, pi-periodic).
double lobachevsky(double theta);
// d/dt Lambda = -log|2 sin t| and d2/dt2 Lambda = -cot t.
double lobachevsky_deriv(double theta);

// Complex dilogarithm, principal branch, cut along [1, inf).  Throws
// DomainError for arguments exactly on the open cut (1, inf).
std::complex<double> dilog(std::complex<double> z);

// Volume of the regular ideal octahedron, 8*Lambda(pi/4).
double octahedron_volume();

// Dihedral angles -> cosh of the (truncated) edge lengths, via the dual
// cosine law on each slot.  theta[s] is the dihedral angle at the edge of
// slot s and out[s] the length of that same edge; valid tetrahedra have the
// three angles meeting at each vertex summing below pi.  Throws DomainError
// when a vertex Gram radicand degenerates.
std::array<double, 6> lengths_from_angles(const std::array<double, 6>& theta);

// Edge lengths -> dihedral angles (inverse cosine law, same slot pairing).
std::array<double, 6> angles_from_lengths(const std::array<double, 6>& lengths);

// Concave one-variable potential whose maximum over
// (max face half-sum, min(quad half-sums, 2pi)) governs the growth of the
// 6j-symbols with angles alpha; it files the angle in slot s on the edge
// opposite kSlotVertices[s].
double tet_angle_potential(const std::array<double, 6>& alpha, double xi);
double tet_angle_potential_dxi(const std::array<double, 6>& alpha, double xi);

// Maximize the potential; returns the maximum and writes the maximizer.
double tet_angle_potential_max(const std::array<double, 6>& alpha, double* xi_out);

// Hyperbolic volume of the hyperideal tetrahedron whose dihedral angle at the
// edge of slot s is theta[s] (the pairing used by the cosine laws above).
double tet_volume(const std::array<double, 6>& theta);

// Covolume Cov(l) = Vol(theta(l)) + (1/2) sum_s theta_s l_s.
double covolume(const std::array<double, 6>& lengths);

struct PolyhedralMetric {
    std::vector<double> edge_lengths;             // one per global edge
    std::vector<std::array<double, 6>> tet_angles;  // dihedral angles per tet slot
    std::vector<double> cone_angles;              // achieved cone angle per edge
    std::vector<double> tet_volumes;
    double total_volume = 0.0;
    double residual_inf = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Solve for edge lengths so that around every edge the dihedral angles of the
// incident tetrahedron slots sum to the prescribed cone angle.  Newton with a
// finite-difference Jacobian and step halving; target.size() == num_edges().
// An all-zero target returns the exact octahedral metric.  Throws
// ConvergenceError if the residual cannot be pushed below 1e-9.
PolyhedralMetric solve_polyhedral_metric(const Triangulation& tri,
                                         const std::vector<double>& target,
                                         const std::vector<double>* initial_lengths = nullptr);

}  // namespace reltv
