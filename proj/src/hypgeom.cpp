#include "reltv/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace reltv {

namespace {
constexpr double kPi = std::numbers::pi;

// Coefficients zeta(2n) / (n (2n+1)) of the Lobachevsky power series
//   Lambda(t) = t - t log(2t) + sum_{n>=1} c_n t (t/pi)^{2n},  |t| <= pi/2.
const std::vector<double>& lobachevsky_coeffs() {
    static const std::vector<double> coeffs = [] {
        std::vector<double> c(81, 0.0);
        for (int n = 1; n <= 80; ++n)
            c[n] = std::riemann_zeta(2.0 * n) / (n * (2.0 * n + 1.0));
        return c;
    }();
    return coeffs;
}

}  // namespace

double lobachevsky(double theta) {
    // Periodicity Lambda(t + pi) = Lambda(t) and oddness reduce to [0, pi/2].
    const double x = std::remainder(theta, kPi);
    const double a = std::fabs(x);
    if (a < 1e-300) return 0.0;
    const auto& c = lobachevsky_coeffs();
    const double ratio = (a / kPi) * (a / kPi);
    double sum = a - a * std::log(2.0 * a);
    double pw = a * ratio;
    for (std::size_t n = 1; n < c.size(); ++n) {
        const double term = c[n] * pw;
        sum += term;
        if (std::fabs(term) < 1e-18 * (std::fabs(sum) + 1e-300)) break;
        pw *= ratio;
    }
    return x < 0.0 ? -sum : sum;
}

double lobachevsky_deriv(double theta) {
    const double s = 2.0 * std::fabs(std::sin(theta));
    // sin at the floating-point neighbours of k*pi is O(1e-16), far below any
    // angle the callers produce, so this cutoff only trips at the poles.
    if (s < 1e-14)
        throw DomainError("lobachevsky_deriv: singular at a multiple of pi");
    return -std::log(s);
}

double octahedron_volume() {
    static const double v8 = 8.0 * lobachevsky(kPi / 4.0);
    return v8;
}

namespace {

// Power series sum_k z^k / k^2, |z| <= 0.625.
std::complex<double> dilog_series(std::complex<double> z) {
    std::complex<double> sum = 0.0;
    std::complex<double> pw = z;
    for (int k = 1; k <= 160; ++k) {
        const std::complex<double> term = pw / static_cast<double>(k * k);
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
        pw *= z;
    }
    return sum;
}

// Coefficients c_k with Li2(z) = sum_k c_k u^{k+1}, u = -log(1-z):
// c_k = B_k / (k+1)!; even entries come from zeta(2n) to avoid big rationals.
const std::vector<double>& dilog_u_coeffs() {
    static const std::vector<double> coeffs = [] {
        std::vector<double> c(121, 0.0);
        c[0] = 1.0;
        c[1] = -0.25;  // B_1/2!
        double sign = 1.0;
        for (int n = 1; 2 * n < static_cast<int>(c.size()); ++n) {
            // B_{2n}/(2n+1)! = (-1)^{n+1} 2 zeta(2n) / ((2 pi)^{2n} (2n+1))
            c[2 * n] = sign * 2.0 * std::riemann_zeta(2.0 * n) /
                       (std::pow(2.0 * kPi, 2.0 * n) * (2.0 * n + 1.0));
            sign = -sign;
        }
        return c;
    }();
    return coeffs;
}

}  // namespace

std::complex<double> dilog(std::complex<double> z) {
    using C = std::complex<double>;
    const double pi2_6 = kPi * kPi / 6.0;
    if (z == C(0.0, 0.0)) return 0.0;
    if (z.imag() == 0.0 && z.real() >= 1.0) {
        if (z.real() == 1.0) return pi2_6;
        throw DomainError("dilog: argument on the branch cut [1, inf)");
    }
    if (std::abs(z) <= 0.5) return dilog_series(z);
    const C one_minus = 1.0 - z;
    if (std::abs(one_minus) <= 0.5) {
        // Li2(z) = pi^2/6 - log(z) log(1-z) - Li2(1-z)
        return pi2_6 - std::log(z) * std::log(one_minus) - dilog_series(one_minus);
    }
    if (std::abs(z) >= 2.0) {
        // Li2(z) = -Li2(1/z) - pi^2/6 - log^2(-z)/2
        const C lz = std::log(-z);
        return -dilog_series(1.0 / z) - pi2_6 - 0.5 * lz * lz;
    }
    // Mid annulus: expansion in u = -log(1-z), convergent for |u| < 2 pi.
    const C u = -std::log(one_minus);
    const auto& c = dilog_u_coeffs();
    C sum = 0.0;
    C pw = u;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] != 0.0) {
            const C term = c[k] * pw;
            sum += term;
            if (k > 2 && std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
        }
        pw *= u;
    }
    return sum;
}

namespace {

int slot_between(int u, int v) {
    for (int s = 0; s < 6; ++s) {
        if ((kSlotVertices[s][0] == u && kSlotVertices[s][1] == v) ||
            (kSlotVertices[s][0] == v && kSlotVertices[s][1] == u))
            return s;
    }
    return -1;
}

// slot index joining each unordered vertex pair, filled once
const std::array<std::array<int, 4>, 4>& pair_slot() {
    static const std::array<std::array<int, 4>, 4> table = [] {
        std::array<std::array<int, 4>, 4> t{};
        for (int u = 0; u < 4; ++u)
            for (int v = 0; v < 4; ++v) t[u][v] = (u == v) ? -1 : slot_between(u, v);
        return t;
    }();
    return table;
}

}  // namespace

// Slot dictionary used by the metric maps: the angle and the length filed
// under slot s both belong to the tetrahedron edge kSlotVertices[s].
std::array<double, 6> lengths_from_angles(const std::array<double, 6>& theta) {
    const auto& ps = pair_slot();
    std::array<double, 6> c{};
    for (int s = 0; s < 6; ++s) c[s] = std::cos(theta[s]);
    auto cc = [&](int u, int v) { return c[ps[u][v]]; };

    std::array<double, 4> rho{};
    for (int i = 0; i < 4; ++i) {
        int others[3], m = 0;
        for (int v = 0; v < 4; ++v)
            if (v != i) others[m++] = v;
        const double a = cc(i, others[0]), b = cc(i, others[1]), d = cc(i, others[2]);
        rho[i] = -1.0 + a * a + b * b + d * d + 2.0 * a * b * d;
        if (rho[i] <= 1e-14) {
            std::ostringstream os;
            os << "lengths_from_angles: vertex " << i
               << " Gram radicand " << rho[i] << " is not positive";
            throw DomainError(os.str());
        }
    }

    std::array<double, 6> out{};
    for (int s = 0; s < 6; ++s) {
        // out[s] is the length of the edge carrying theta[s].
        const int i = kSlotVertices[s][0], j = kSlotVertices[s][1];
        int rest[2], m = 0;
        for (int v = 0; v < 4; ++v)
            if (v != i && v != j) rest[m++] = v;
        const int k = rest[0], l = rest[1];
        const double num = cc(k, l) + cc(i, k) * cc(j, k) + cc(i, l) * cc(j, l) +
                           (cc(i, k) * cc(j, l) + cc(i, l) * cc(j, k)) * cc(i, j) -
                           cc(k, l) * cc(i, j) * cc(i, j);
        const double ch = num / std::sqrt(rho[i] * rho[j]);
        if (ch < 1.0 - 1e-9) {
            std::ostringstream os;
            os << "lengths_from_angles: slot " << s << " gives cosh l = " << ch << " < 1";
            throw DomainError(os.str());
        }
        out[s] = std::acosh(std::max(ch, 1.0));
    }
    return out;
}

std::array<double, 6> angles_from_lengths(const std::array<double, 6>& lengths) {
    const auto& ps = pair_slot();
    std::array<double, 6> ch{};
    for (int s = 0; s < 6; ++s) {
        if (lengths[s] < 0.0)
            throw DomainError("angles_from_lengths: negative length");
        ch[s] = std::cosh(lengths[s]);
    }
    auto hh = [&](int u, int v) { return ch[ps[u][v]]; };

    // Face Gram radicand on vertices {u,v,w}; always >= 4 when cosh >= 1.
    auto face_rad = [&](int u, int v, int w) {
        const double a = hh(u, v), b = hh(u, w), d = hh(v, w);
        return -1.0 + a * a + b * b + d * d + 2.0 * a * b * d;
    };

    std::array<double, 6> out{};
    for (int s = 0; s < 6; ++s) {
        // out[s] is the dihedral angle at the edge whose length is lengths[s].
        const int k = kSlotVertices[s][0], l = kSlotVertices[s][1];
        const int os_ = opposite_slot(s);
        const int i = kSlotVertices[os_][0], j = kSlotVertices[os_][1];
        // cos theta at edge (k,l) is the normalized (i,j) cofactor of the
        // truncation-plane Gram matrix; the diagonal cofactors are the (negated)
        // radicands of the triples omitting i and omitting j.
        const double num = hh(i, j) + hh(i, k) * hh(j, k) + hh(i, l) * hh(j, l) +
                           (hh(i, k) * hh(j, l) + hh(i, l) * hh(j, k)) * hh(k, l) -
                           hh(i, j) * hh(k, l) * hh(k, l);
        const double den = std::sqrt(face_rad(j, k, l) * face_rad(i, k, l));
        double ct = num / den;
        if (ct > 1.0 + 1e-9 || ct < -1.0 - 1e-9) {
            std::ostringstream os2;
            os2 << "angles_from_lengths: slot " << s << " gives cos theta = " << ct;
            throw DomainError(os2.str());
        }
        out[s] = std::acos(std::clamp(ct, -1.0, 1.0));
    }
    return out;
}

namespace {

struct FrameSums {
    std::array<double, 4> tau;  // face half-sums of alpha
    std::array<double, 3> eta;  // opposite-pair (quad) half-sums
};

FrameSums frame_sums(const std::array<double, 6>& alpha) {
    FrameSums f{};
    for (int i = 0; i < 4; ++i) {
        const auto& fc = kFaceSlots[i];
        f.tau[i] = 0.5 * (alpha[fc[0]] + alpha[fc[1]] + alpha[fc[2]]);
    }
    f.eta[0] = 0.5 * (alpha[0] + alpha[1] + alpha[3] + alpha[4]);
    f.eta[1] = 0.5 * (alpha[0] + alpha[2] + alpha[3] + alpha[5]);
    f.eta[2] = 0.5 * (alpha[1] + alpha[2] + alpha[4] + alpha[5]);
    return f;
}

// Face term: delta(a,b,c) = -1/2 [ L((a+b-c)/2) + L((b+c-a)/2) + L((c+a-b)/2) ]
//                          + 1/2 L((a+b+c)/2).
double face_delta(double a, double b, double c) {
    return -0.5 * (lobachevsky(0.5 * (a + b - c)) + lobachevsky(0.5 * (b + c - a)) +
                   lobachevsky(0.5 * (c + a - b))) +
           0.5 * lobachevsky(0.5 * (a + b + c));
}

void potential_interval(const FrameSums& f, double* lo, double* hi) {
    *lo = *std::max_element(f.tau.begin(), f.tau.end());
    *hi = std::min(*std::min_element(f.eta.begin(), f.eta.end()), 2.0 * kPi);
    if (!(*hi - *lo > 1e-12))
        throw DomainError("tet potential: empty admissible xi interval");
}

}  // namespace

double tet_angle_potential(const std::array<double, 6>& alpha, double xi) {
    const FrameSums f = frame_sums(alpha);
    double v = 0.0;
    for (int i = 0; i < 4; ++i) {
        const auto& fc = kFaceSlots[i];
        v += face_delta(alpha[fc[0]], alpha[fc[1]], alpha[fc[2]]);
    }
    v -= lobachevsky(xi);
    for (int i = 0; i < 4; ++i) v += lobachevsky(xi - f.tau[i]);
    for (int j = 0; j < 3; ++j) v += lobachevsky(f.eta[j] - xi);
    return v;
}

double tet_angle_potential_dxi(const std::array<double, 6>& alpha, double xi) {
    const FrameSums f = frame_sums(alpha);
    double g = -lobachevsky_deriv(xi);
    for (int i = 0; i < 4; ++i) g += lobachevsky_deriv(xi - f.tau[i]);
    for (int j = 0; j < 3; ++j) g -= lobachevsky_deriv(f.eta[j] - xi);
    return g;
}

double tet_angle_potential_max(const std::array<double, 6>& alpha, double* xi_out) {
    const FrameSums f = frame_sums(alpha);
    double lo, hi;
    potential_interval(f, &lo, &hi);

    // Golden-section on the concave slice, then Newton polish on the slope.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = tet_angle_potential(alpha, x1), f2 = tet_angle_potential(alpha, x2);
    for (int it = 0; it < 90 && (b - a) > 1e-13; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = tet_angle_potential(alpha, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = tet_angle_potential(alpha, x1);
        }
    }
    double xi = 0.5 * (a + b);
    for (int it = 0; it < 8; ++it) {
        const double g = tet_angle_potential_dxi(alpha, xi);
        // d2V/dxi2 = -L''(xi) + sum L''(xi - tau) + sum L''(eta - xi), L'' = -cot
        double g2 = 1.0 / std::tan(xi);
        for (int i = 0; i < 4; ++i) g2 -= 1.0 / std::tan(xi - f.tau[i]);
        for (int j = 0; j < 3; ++j) g2 -= 1.0 / std::tan(f.eta[j] - xi);
        if (!(g2 < 0.0)) break;
        const double step = g / g2;
        const double next = std::clamp(xi - step, lo + 1e-14, hi - 1e-14);
        if (std::fabs(next - xi) < 1e-15) {
            xi = next;
            break;
        }
        xi = next;
    }
    if (xi_out) *xi_out = xi;
    return tet_angle_potential(alpha, xi);
}

double tet_volume(const std::array<double, 6>& theta) {
    // The growth potential attaches the angle in slot s to the edge opposite
    // kSlotVertices[s]; feeding it the pair-swapped tuple therefore yields the
    // volume of the tetrahedron carrying theta[s] on edge kSlotVertices[s]
    // itself, matching the pairing used by lengths_from_angles and
    // angles_from_lengths.
    std::array<double, 6> alpha{};
    for (int s = 0; s < 6; ++s) {
        if (theta[s] < 0.0 || theta[s] >= kPi)
            throw DomainError("tet_volume: dihedral angles must lie in [0, pi)");
        alpha[opposite_slot(s)] = kPi - theta[s];
    }
    // Truncated-tetrahedron condition: the three dihedral angles meeting at
    // each vertex sum to less than pi.
    for (const auto& fc : kFaceSlots) {
        const double vsum = theta[opposite_slot(fc[0])] + theta[opposite_slot(fc[1])] +
                            theta[opposite_slot(fc[2])];
        if (vsum >= kPi - 1e-12) {
            std::ostringstream os;
            os << "tet_volume: vertex angle sum " << vsum << " not below pi";
            throw DomainError(os.str());
        }
    }
    return tet_angle_potential_max(alpha, nullptr);
}

double covolume(const std::array<double, 6>& lengths) {
    const auto theta = angles_from_lengths(lengths);
    double cov = tet_volume(theta);
    for (int s = 0; s < 6; ++s) cov += 0.5 * theta[s] * lengths[s];
    return cov;
}

namespace {

constexpr double kLengthFloor = 1e-8;
constexpr double kConeTol = 1e-9;

std::vector<double> cone_angles_of(const Triangulation& tri,
                                   const std::vector<double>& lengths,
                                   std::vector<std::array<double, 6>>* tet_angles) {
    std::vector<double> cone(tri.num_edges(), 0.0);
    if (tet_angles) tet_angles->clear();
    for (const auto& tet : tri.tets()) {
        std::array<double, 6> l{};
        for (int s = 0; s < 6; ++s) l[s] = lengths[tet[s]];
        const auto th = angles_from_lengths(l);
        if (tet_angles) tet_angles->push_back(th);
        for (int s = 0; s < 6; ++s) cone[tet[s]] += th[s];
    }
    return cone;
}

// Solve J x = rhs by partial-pivot Gaussian elimination.
std::vector<double> solve_linear(std::vector<std::vector<double>> J,
                                 std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(J[row][col]) > std::fabs(J[piv][col])) piv = row;
        if (std::fabs(J[piv][col]) < 1e-14)
            throw ConvergenceError("metric solver: singular Jacobian");
        std::swap(J[piv], J[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int row = col + 1; row < n; ++row) {
            const double m = J[row][col] / J[col][col];
            for (int c2 = col; c2 < n; ++c2) J[row][c2] -= m * J[col][c2];
            rhs[row] -= m * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int row = n - 1; row >= 0; --row) {
        double acc = rhs[row];
        for (int c2 = row + 1; c2 < n; ++c2) acc -= J[row][c2] * x[c2];
        x[row] = acc / J[row][row];
    }
    return x;
}

}  // namespace

PolyhedralMetric solve_polyhedral_metric(const Triangulation& tri,
                                         const std::vector<double>& target,
                                         const std::vector<double>* initial_lengths) {
    const int ne = tri.num_edges();
    if (static_cast<int>(target.size()) != ne)
        throw InputError("metric solver: target size must equal the edge count");
    for (double t : target)
        if (!(t >= 0.0)) throw InputError("metric solver: cone targets must be >= 0");

    PolyhedralMetric out;
    out.cone_angles.assign(ne, 0.0);

    const bool all_zero =
        std::all_of(target.begin(), target.end(), [](double t) { return t == 0.0; });
    if (all_zero && !initial_lengths) {
        // The regular ideal octahedron case, exact.
        out.edge_lengths.assign(ne, 0.0);
        out.tet_angles.assign(tri.num_tets(), std::array<double, 6>{});
        out.tet_volumes.assign(tri.num_tets(), octahedron_volume());
        out.total_volume = tri.num_tets() * octahedron_volume();
        out.residual_inf = 0.0;
        out.iterations = 0;
        out.converged = true;
        return out;
    }

    std::vector<double> l(ne, 0.0);
    if (initial_lengths) {
        if (static_cast<int>(initial_lengths->size()) != ne)
            throw InputError("metric solver: initial length size mismatch");
        l = *initial_lengths;
        for (double& v : l) v = std::max(v, kLengthFloor);
    } else {
        // Seed: spread each cone target evenly over the slots around its edge,
        // shrink if any face sum reaches pi, convert per-tet, average per edge.
        const auto& deg = tri.edge_degrees();
        std::vector<double> acc(ne, 0.0);
        std::vector<int> cnt(ne, 0);
        for (const auto& tet : tri.tets()) {
            std::array<double, 6> th{};
            for (int s = 0; s < 6; ++s) th[s] = target[tet[s]] / std::max(deg[tet[s]], 1);
            double worst = 0.0;
            for (const auto& fc : kFaceSlots)
                worst = std::max(worst, th[opposite_slot(fc[0])] + th[opposite_slot(fc[1])] +
                                            th[opposite_slot(fc[2])]);
            if (worst >= 0.9 * kPi) {
                const double scale = 0.9 * kPi / worst;
                for (double& v : th) v *= scale;
            }
            const auto tl = lengths_from_angles(th);
            for (int s = 0; s < 6; ++s) {
                acc[tet[s]] += tl[s];
                cnt[tet[s]] += 1;
            }
        }
        for (int e = 0; e < ne; ++e)
            l[e] = std::max(cnt[e] ? acc[e] / cnt[e] : kLengthFloor, kLengthFloor);
    }

    auto residual = [&](const std::vector<double>& len) {
        auto cone = cone_angles_of(tri, len, nullptr);
        std::vector<double> F(ne);
        for (int e = 0; e < ne; ++e) F[e] = cone[e] - target[e];
        return F;
    };
    auto inf_norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    };

    std::vector<double> F = residual(l);
    double res = inf_norm(F);
    int iter = 0;
    for (; iter < 50 && res >= kConeTol; ++iter) {
        // Central-difference Jacobian, one-sided near the length floor.
        std::vector<std::vector<double>> J(ne, std::vector<double>(ne, 0.0));
        for (int e = 0; e < ne; ++e) {
            const double h = 1e-6 * (1.0 + std::fabs(l[e]));
            std::vector<double> lp = l, lm = l;
            lp[e] += h;
            lm[e] -= h;
            if (lm[e] < kLengthFloor) lm[e] = l[e];  // one-sided
            const auto Fp = residual(lp);
            const auto Fm = residual(lm);
            const double dh = lp[e] - lm[e];
            for (int row = 0; row < ne; ++row) J[row][e] = (Fp[row] - Fm[row]) / dh;
        }
        std::vector<double> rhs(ne);
        for (int e = 0; e < ne; ++e) rhs[e] = -F[e];
        const auto d = solve_linear(std::move(J), std::move(rhs));

        double lambda = 1.0;
        bool accepted = false;
        for (int h2 = 0; h2 < 30; ++h2) {
            std::vector<double> trial(ne);
            for (int e = 0; e < ne; ++e)
                trial[e] = std::max(l[e] + lambda * d[e], kLengthFloor);
            try {
                const auto Ft = residual(trial);
                const double rt = inf_norm(Ft);
                if (rt < res) {
                    l = std::move(trial);
                    F = Ft;
                    res = rt;
                    accepted = true;
                    break;
                }
            } catch (const DomainError&) {
                // step left the valid cone; shrink
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError("metric solver: damped Newton stalled at residual " +
                                   std::to_string(res));
    }
    if (res >= kConeTol)
        throw ConvergenceError("metric solver: residual " + std::to_string(res) +
                               " after " + std::to_string(iter) + " iterations");

    out.edge_lengths = l;
    out.cone_angles = cone_angles_of(tri, l, &out.tet_angles);
    out.tet_volumes.clear();
    out.total_volume = 0.0;
    for (const auto& th : out.tet_angles) {
        out.tet_volumes.push_back(tet_volume(th));
        out.total_volume += out.tet_volumes.back();
    }
    out.residual_inf = res;
    out.iterations = iter;
    out.converged = true;
    return out;
}

}  // namespace reltv
