#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature for complex-valued integrands on
// a real interval.  The per-panel error estimate is |K15 - G7|; panels are
// bisected until the local estimate fits into a proportional share of the
// requested absolute tolerance.

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace reltv {

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;  // accumulated per-panel estimates
    long evaluations = 0;
    bool converged = true;
};

namespace detail {

// Standard QUADPACK 15-point Kronrod nodes/weights on [-1,1]; the embedded
// 7-point Gauss rule sits on the odd-indexed nodes.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(F& f, double a, double b, std::complex<double>& k15,
                       double& err, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::complex<double> fc = f(c);
    std::complex<double> kronrod = kWgk[7] * fc;
    std::complex<double> gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const std::complex<double> f1 = f(c - h * kXgk[j]);
        const std::complex<double> f2 = f(c + h * kXgk[j]);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[(j - 1) / 2] * (f1 + f2);
    }
    evals += 15;
    k15 = h * kronrod;
    err = std::abs(h * (kronrod - gauss));
}

}  // namespace detail

// Integrate f over [a, b] to absolute tolerance abs_tol.  Bisection depth is
// capped; if the cap is hit the partial result is still accumulated and the
// `converged` flag is cleared.
template <class F>
QuadratureResult integrate_gk(F&& f, double a, double b, double abs_tol,
                              int max_depth = 30) {
    QuadratureResult out;
    struct Panel {
        double a, b, tol;
        int depth;
    };
    std::vector<Panel> stack;
    stack.push_back({a, b, abs_tol, 0});
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        std::complex<double> v;
        double e;
        detail::gk15_panel(f, p.a, p.b, v, e, out.evaluations);
        if (e <= p.tol || p.depth >= max_depth) {
            out.value += v;
            out.error += e;
            if (e > p.tol) out.converged = false;
            continue;
        }
        const double m = 0.5 * (p.a + p.b);
        stack.push_back({m, p.b, 0.5 * p.tol, p.depth + 1});
        stack.push_back({p.a, m, 0.5 * p.tol, p.depth + 1});
    }
    return out;
}

}  // namespace reltv
