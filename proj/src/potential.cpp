#include "reltv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "reltv/sixj.hpp"

namespace reltv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kRegionSlack = 1e-6;

thread_local long g_cut_nudges = 0;

// Li2(e^{2iw}) with the branch-cut nudge: arguments within 1e-8 of the cut
// [1, inf) are shifted by +1e-8i.
cplx dilog_e2i(cplx w) {
    cplx z = std::exp(cplx(0.0, 2.0) * w);
    if (std::fabs(z.imag()) < 1e-8 && z.real() >= 1.0 - 1e-12) {
        z += cplx(0.0, 1e-8);
        ++g_cut_nudges;
    }
    return dilog(z);
}

// log(1 - e^{2iw}) with the same nudge near the log cut at 0 / (-inf, 0].
cplx log1me2i(cplx w) {
    cplx t = 1.0 - std::exp(cplx(0.0, 2.0) * w);
    if (std::abs(t) < 1e-8 || (std::fabs(t.imag()) < 1e-8 && t.real() <= 0.0)) {
        t += cplx(0.0, 1e-8);
        ++g_cut_nudges;
    }
    return std::log(t);
}

struct FrameC {
    std::array<cplx, 4> tau;
    std::array<cplx, 3> eta;
};

FrameC frame_sums_c(const std::array<cplx, 6>& alpha) {
    FrameC f{};
    for (int i = 0; i < 4; ++i) {
        const auto& fc = kFaceSlots[i];
        f.tau[i] = 0.5 * (alpha[fc[0]] + alpha[fc[1]] + alpha[fc[2]]);
    }
    f.eta[0] = 0.5 * (alpha[0] + alpha[1] + alpha[3] + alpha[4]);
    f.eta[1] = 0.5 * (alpha[0] + alpha[2] + alpha[3] + alpha[5]);
    f.eta[2] = 0.5 * (alpha[1] + alpha[2] + alpha[4] + alpha[5]);
    return f;
}

void require_region(const std::array<cplx, 6>& alpha, cplx xi, const FrameC& f) {
    std::array<double, 6> re{};
    for (int s = 0; s < 6; ++s) re[s] = alpha[s].real();
    if (!is_hyperideal_angles(re, kRegionSlack))
        throw DomainError("potential: Re(alpha) is not of hyperideal angle type");
    double lo = f.tau[0].real(), hi = f.eta[0].real();
    for (int i = 1; i < 4; ++i) lo = std::max(lo, f.tau[i].real());
    for (int j = 1; j < 3; ++j) hi = std::min(hi, f.eta[j].real());
    hi = std::min(hi, 2.0 * kPi);
    if (xi.real() < lo - kRegionSlack || xi.real() > hi + kRegionSlack) {
        std::ostringstream os;
        os << "potential: Re(xi) = " << xi.real() << " outside [" << lo << ", "
           << hi << "]";
        throw DomainError(os.str());
    }
}

cplx sq(cplx z) { return z * z; }

}  // namespace

long cut_nudge_count() { return g_cut_nudges; }

cplx U_potential(const std::array<cplx, 6>& alpha, cplx xi) {
    const FrameC f = frame_sums_c(alpha);
    require_region(alpha, xi, f);

    cplx u = kPi * kPi;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) u += 0.5 * sq(f.eta[j] - f.tau[i]);
    for (int i = 0; i < 4; ++i) u -= 0.5 * sq(f.tau[i] - kPi);
    u += sq(xi - kPi);
    for (int i = 0; i < 4; ++i) u -= sq(xi - f.tau[i]);
    for (int j = 0; j < 3; ++j) u -= sq(f.eta[j] - xi);

    u -= 2.0 * (kPi * kPi / 6.0);  // 2 Li2(1)
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) u -= 0.5 * dilog_e2i(f.eta[j] - f.tau[i]);
    for (int i = 0; i < 4; ++i) u += 0.5 * dilog_e2i(f.tau[i] - kPi);
    u -= dilog_e2i(xi - kPi);
    for (int i = 0; i < 4; ++i) u += dilog_e2i(xi - f.tau[i]);
    for (int j = 0; j < 3; ++j) u += dilog_e2i(f.eta[j] - xi);
    return u;
}

cplx U_potential_dxi(const std::array<cplx, 6>& alpha, cplx xi) {
    const FrameC f = frame_sums_c(alpha);
    require_region(alpha, xi, f);
    cplx sum_alpha = 0.0;
    for (int s = 0; s < 6; ++s) sum_alpha += alpha[s];
    cplx g = -12.0 * xi - 2.0 * kPi + 4.0 * sum_alpha;
    cplx logs = log1me2i(xi - kPi);
    for (int i = 0; i < 4; ++i) logs -= log1me2i(xi - f.tau[i]);
    for (int j = 0; j < 3; ++j) logs += log1me2i(f.eta[j] - xi);
    return g + cplx(0.0, 2.0) * logs;
}

cplx U_potential_d2xi(const std::array<cplx, 6>& alpha, cplx xi) {
    const FrameC f = frame_sums_c(alpha);
    require_region(alpha, xi, f);
    auto A = [](cplx w) {
        const cplx e = std::exp(cplx(0.0, 2.0) * w);
        return e / (1.0 - e);
    };
    cplx g2 = -12.0 + 4.0 * A(xi - kPi);
    for (int i = 0; i < 4; ++i) g2 -= 4.0 * A(xi - f.tau[i]);
    for (int j = 0; j < 3; ++j) g2 -= 4.0 * A(f.eta[j] - xi);
    return g2;
}

double V_real(const std::array<double, 6>& alpha, double xi) {
    return tet_angle_potential(alpha, xi);
}

cplx xi_star(const std::array<cplx, 6>& alpha) {
    std::array<double, 6> re{};
    for (int s = 0; s < 6; ++s) re[s] = alpha[s].real();
    double seed = 0.0;
    tet_angle_potential_max(re, &seed);  // also validates the real frame
    cplx xi = seed;
    cplx g = U_potential_dxi(alpha, xi);
    for (int it = 0; it < 80; ++it) {
        if (std::abs(g) < 1e-10) return xi;
        const cplx g2 = U_potential_d2xi(alpha, xi);
        if (std::abs(g2) < 1e-10)
            throw ConvergenceError("xi_star: flat second derivative");
        const cplx step = g / g2;
        xi -= step;
        g = U_potential_dxi(alpha, xi);
        if (std::abs(step) < 1e-15 && std::abs(g) < 1e-10) return xi;
    }
    if (std::abs(g) < 1e-10) return xi;
    throw ConvergenceError("xi_star: Newton did not reach |dU/dxi| < 1e-10");
}

cplx W_tet(const std::array<cplx, 6>& alpha) {
    return U_potential(alpha, xi_star(alpha));
}

cplx W_eps(const Triangulation& tri, const std::vector<double>& beta,
           const std::vector<int>& eps, const std::vector<cplx>& alpha,
           const std::vector<cplx>& xi) {
    const int ne = tri.num_edges();
    if (static_cast<int>(beta.size()) != ne || static_cast<int>(eps.size()) != ne ||
        static_cast<int>(alpha.size()) != ne)
        throw InputError("W_eps: per-edge vector size mismatch");
    if (static_cast<int>(xi.size()) != tri.num_tets())
        throw InputError("W_eps: xi size must equal the tetrahedron count");
    for (int e : eps)
        if (e != 1 && e != -1)
            throw InputError("W_eps: eps entries must be +-1");
    cplx w = 0.0;
    for (int e = 0; e < ne; ++e)
        w -= 2.0 * static_cast<double>(eps[e]) * (alpha[e] - kPi) * (beta[e] - kPi);
    for (int t = 0; t < tri.num_tets(); ++t) {
        std::array<cplx, 6> slot{};
        for (int s = 0; s < 6; ++s) slot[s] = alpha[tri.tets()[t][s]];
        w += U_potential(slot, xi[t]);
    }
    return w;
}

CriticalPoint geometric_critical_point(const Triangulation& tri,
                                       const PolyhedralMetric& metric,
                                       const std::vector<double>& beta,
                                       const std::vector<int>& eps) {
    const int ne = tri.num_edges();
    if (static_cast<int>(beta.size()) != ne || static_cast<int>(eps.size()) != ne)
        throw InputError("geometric_critical_point: per-edge size mismatch");
    for (int e : eps)
        if (e != 1 && e != -1)
            throw InputError("geometric_critical_point: eps entries must be +-1");

    CriticalPoint pt;
    pt.mu.assign(ne, 1);
    pt.alpha.assign(ne, cplx(kPi, 0.0));
    for (int e = 0; e < ne; ++e) {
        pt.mu[e] = (beta[e] >= kPi) ? 1 : -1;
        pt.alpha[e] = cplx(kPi, 0.0) +
                      cplx(0.0, 1.0) * static_cast<double>(eps[e] * pt.mu[e]) *
                          metric.edge_lengths[e];
    }
    pt.xi.clear();
    for (const auto& tet : tri.tets()) {
        std::array<cplx, 6> slot{};
        for (int s = 0; s < 6; ++s) slot[s] = pt.alpha[tet[s]];
        pt.xi.push_back(xi_star(slot));
    }
    return pt;
}

namespace {

// Central difference with one Richardson pass; f takes the shifted coordinate.
template <class F>
cplx fd_derivative(const F& f, double h) {
    const cplx d1 = (f(h) - f(-h)) / (2.0 * h);
    const cplx d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

CriticalReport verify_critical(const Triangulation& tri,
                               const PolyhedralMetric& metric,
                               const std::vector<double>& beta,
                               const std::vector<int>& eps) {
    const CriticalPoint pt = geometric_critical_point(tri, metric, beta, eps);
    CriticalReport rep;
    rep.value = W_eps(tri, beta, eps, pt.alpha, pt.xi);
    rep.expected_im = 2.0 * metric.total_volume;
    rep.re_error = std::fabs(rep.value.real() - 2.0 * tri.num_tets() * kPi * kPi);
    rep.im_error = std::fabs(rep.value.imag() - rep.expected_im);

    const int ne = tri.num_edges();
    for (int e = 0; e < ne; ++e) {
        const double h = 1e-5 * (1.0 + std::abs(pt.alpha[e]));
        auto slice = [&](double t) {
            auto alpha = pt.alpha;
            alpha[e] += t;
            return W_eps(tri, beta, eps, alpha, pt.xi);
        };
        rep.gradient.push_back(fd_derivative(slice, h));
    }
    for (int t = 0; t < tri.num_tets(); ++t) {
        const double h = 1e-5 * (1.0 + std::abs(pt.xi[t]));
        auto slice = [&](double s) {
            auto xi = pt.xi;
            xi[t] += s;
            return W_eps(tri, beta, eps, pt.alpha, xi);
        };
        rep.gradient.push_back(fd_derivative(slice, h));
    }
    rep.grad_inf = 0.0;
    for (const cplx& g : rep.gradient) rep.grad_inf = std::max(rep.grad_inf, std::abs(g));

    rep.grad_ok = rep.grad_inf < 1e-7;
    rep.re_ok = rep.re_error < 1e-6;
    rep.im_ok = rep.im_error < 1e-6;
    return rep;
}

namespace {

// Jacobi eigenvalue sweep for small symmetric matrices.
template <std::size_t N>
std::array<double, N> symmetric_eigenvalues(std::array<std::array<double, N>, N> m) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) off += m[i][j] * m[i][j];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) {
                if (std::fabs(m[p][q]) < 1e-15) continue;
                const double theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
    }
    std::array<double, N> eig{};
    for (std::size_t i = 0; i < N; ++i) eig[i] = m[i][i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace

HessianReport hessian_checks() {
    // f(x) = Im U(alpha(x[0..5]), xi(x[6])) / 2 at the regular point.
    auto f = [](const std::array<double, 7>& x) {
        std::array<cplx, 6> alpha{};
        for (int s = 0; s < 6; ++s) alpha[s] = cplx(x[s], 0.0);
        return 0.5 * U_potential(alpha, cplx(x[6], 0.0)).imag();
    };
    std::array<double, 7> base{};
    for (int s = 0; s < 6; ++s) base[s] = kPi;
    base[6] = 7.0 * kPi / 4.0;

    // Second differences carry a ~eps/h^2 noise floor, so the Hessian uses a
    // coarser step than first derivatives, with one Richardson pass.
    auto entry = [&](int i, int j) {
        const double hi = 1e-3 * (1.0 + std::fabs(base[i]));
        const double hj = 1e-3 * (1.0 + std::fabs(base[j]));
        auto second = [&](double si, double sj) {
            if (i == j) {
                auto xp = base, xm = base;
                xp[i] += si;
                xm[i] -= si;
                return (f(xp) - 2.0 * f(base) + f(xm)) / (si * si);
            }
            auto xpp = base, xpm = base, xmp = base, xmm = base;
            xpp[i] += si; xpp[j] += sj;
            xpm[i] += si; xpm[j] -= sj;
            xmp[i] -= si; xmp[j] += sj;
            xmm[i] -= si; xmm[j] -= sj;
            return (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * si * sj);
        };
        const double d1 = second(hi, hj);
        const double d2 = second(0.5 * hi, 0.5 * hj);
        return (4.0 * d2 - d1) / 3.0;
    };

    HessianReport rep;
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) {
            const double v = entry(i, j);
            rep.hessian[i][j] = v;
            rep.hessian[j][i] = v;
        }

    // For real arguments Im U reduces to Lobachevsky terms; at the regular
    // point the (eta - tau) and (tau - pi) arguments sit at pi/2 where
    // Lambda'' = -cot vanishes, so only the xi-bearing terms contribute:
    // Lambda''(3 pi/4) = +1 and Lambda''(pi/4) = -1 against the half-sum
    // gradients give the constant matrix below.
    auto expected = [](int i, int j) {
        if (i == 6 && j == 6) return -8.0;
        if (i == 6 || j == 6) return 2.0;
        return i == j ? -1.0 : -0.5;
    };
    rep.max_entry_error = 0.0;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            rep.max_entry_error =
                std::max(rep.max_entry_error, std::fabs(rep.hessian[i][j] - expected(i, j)));

    rep.eigenvalues = symmetric_eigenvalues<7>(rep.hessian);
    rep.negative_definite = rep.eigenvalues.back() < -1e-6;
    return rep;
}

}  // namespace reltv
