#include "reltv/sixj.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "reltv/triangulation.hpp"

namespace reltv {

namespace {
constexpr double kPi = std::numbers::pi;

int face_triple(const std::array<int, 6>& a, int f, int idx) {
    return a[kFaceSlots[f][idx]];
}

}  // namespace

bool is_admissible_triple(int a, int b, int c, int r) {
    if (a < 0 || b < 0 || c < 0) return false;
    if (a > r - 2 || b > r - 2 || c > r - 2) return false;
    if ((a + b + c) % 2 != 0) return false;
    if (a + b - c < 0 || b + c - a < 0 || c + a - b < 0) return false;
    return a + b + c <= 2 * (r - 2);
}

bool is_admissible_tuple(const std::array<int, 6>& a, int r) {
    for (int f = 0; f < 4; ++f)
        if (!is_admissible_triple(face_triple(a, f, 0), face_triple(a, f, 1),
                                  face_triple(a, f, 2), r))
            return false;
    return true;
}

bool is_hyperideal_type(const std::array<int, 6>& a, int r) {
    for (int f = 0; f < 4; ++f) {
        const int x = face_triple(a, f, 0), y = face_triple(a, f, 1),
                  z = face_triple(a, f, 2);
        if ((x + y + z) % 2 != 0) return false;
        const int diffs[3] = {x + y - z, y + z - x, z + x - y};
        for (int d : diffs)
            if (d < 0 || d >= r - 2) return false;
        const int sum = x + y + z;
        if (sum <= r - 2 || sum > 2 * (r - 2)) return false;
    }
    return true;
}

bool is_hyperideal_angles(const std::array<double, 6>& alpha, double slack) {
    for (double v : alpha)
        if (v < -slack || v > 2.0 * kPi + slack) return false;
    for (int f = 0; f < 4; ++f) {
        const double x = alpha[kFaceSlots[f][0]], y = alpha[kFaceSlots[f][1]],
                     z = alpha[kFaceSlots[f][2]];
        const double diffs[3] = {x + y - z, y + z - x, z + x - y};
        for (double d : diffs)
            if (d < -slack || d > 2.0 * kPi + slack) return false;
        const double sum = x + y + z;
        if (sum < 2.0 * kPi - slack || sum > 4.0 * kPi + slack) return false;
    }
    return true;
}

namespace {

// Number-type shims so the 6j composition can run in double or quad.
struct DoubleOps {
    using Real = double;
    static Real from_int(int n) { return static_cast<Real>(n); }
    static Real pi() { return kPi; }
    static Real sin(Real x) { return std::sin(x); }
    static Real log(Real x) { return std::log(x); }
    static Real exp(Real x) { return std::exp(x); }
    static Real abs(Real x) { return std::fabs(x); }
    static double to_double(Real x) { return x; }
};

struct QuadOps {
    using Real = __float128;
    static Real from_int(int n) { return static_cast<Real>(n); }
    static Real pi() { return M_PIq; }
    static Real sin(Real x) { return sinq(x); }
    static Real log(Real x) { return logq(x); }
    static Real exp(Real x) { return expq(x); }
    static Real abs(Real x) { return fabsq(x); }
    static double to_double(Real x) { return static_cast<double>(x); }
};

// Factorial tables [n]! in sign/log form for one (r, root) at precision Ops.
template <class Ops>
struct FactTables {
    using Real = typename Ops::Real;
    int r = 0;
    std::vector<Real> log_fact;
    std::vector<int> sign_fact;

    FactTables(int r_, Root root) : r(r_) {
        const Real phi =
            (root == Root::E2PIR) ? 2 * Ops::pi() / Ops::from_int(r) : Ops::pi() / Ops::from_int(r);
        log_fact.assign(r, Real(0));
        sign_fact.assign(r, 1);
        const Real s1 = Ops::sin(phi);
        Real lf = Real(0);
        int sg = 1;
        for (int n = 1; n <= r - 1; ++n) {
            const Real qn = Ops::sin(Ops::from_int(n) * phi) / s1;
            lf += Ops::log(Ops::abs(qn));
            if (qn < Real(0)) sg = -sg;
            log_fact[n] = lf;
            sign_fact[n] = sg;
        }
    }
};

const FactTables<QuadOps>& quad_tables(int r, Root root) {
    using Key = std::pair<int, int>;
    static std::map<Key, std::unique_ptr<FactTables<QuadOps>>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{r, static_cast<int>(root)}];
    if (!slot) slot = std::make_unique<FactTables<QuadOps>>(r, root);
    return *slot;
}

void tuple_frame(const std::array<int, 6>& a, std::array<int, 4>& T,
                 std::array<int, 3>& Q) {
    T[0] = (a[0] + a[1] + a[2]) / 2;
    T[1] = (a[0] + a[4] + a[5]) / 2;
    T[2] = (a[1] + a[3] + a[5]) / 2;
    T[3] = (a[2] + a[3] + a[4]) / 2;
    Q[0] = (a[0] + a[1] + a[3] + a[4]) / 2;
    Q[1] = (a[0] + a[2] + a[3] + a[5]) / 2;
    Q[2] = (a[1] + a[2] + a[4] + a[5]) / 2;
}

// Core composition in sign / log-magnitude / power-of-i form.  The result is
// always i^m times a real number at these roots.
template <class Ops, class LF, class SF>
cplx sixj_kernel(const std::array<int, 6>& a, int r, const LF& lf, const SF& sf) {
    using Real = typename Ops::Real;

    Real log_delta = Real(0);
    int ipow = 0;
    for (int f = 0; f < 4; ++f) {
        const int x = face_triple(a, f, 0), y = face_triple(a, f, 1),
                  z = face_triple(a, f, 2);
        const int i1 = (x + y - z) / 2, i2 = (y + z - x) / 2, i3 = (z + x - y) / 2,
                  i4 = (x + y + z) / 2 + 1;
        const Real rad_log = lf(i1) + lf(i2) + lf(i3) - lf(i4);
        const int rad_sign = sf(i1) * sf(i2) * sf(i3) * sf(i4);
        log_delta += rad_log / 2;
        if (rad_sign < 0) ipow += 1;  // sqrt(negative) = i sqrt(|.|)
    }
    const int asum = a[0] + a[1] + a[2] + a[3] + a[4] + a[5];
    ipow = ((ipow - asum) % 4 + 4) % 4;

    std::array<int, 4> T{};
    std::array<int, 3> Q{};
    tuple_frame(a, T, Q);
    const int kmin = *std::max_element(T.begin(), T.end());
    const int kmax = std::min(*std::min_element(Q.begin(), Q.end()), r - 2);

    Real max_log = Real(0);
    bool first = true;
    std::vector<Real> logs;
    std::vector<int> signs;
    for (int k = kmin; k <= kmax; ++k) {
        Real lg = lf(k + 1);
        int sg = (k % 2 == 0) ? 1 : -1;
        sg *= sf(k + 1);
        for (int i = 0; i < 4; ++i) {
            lg -= lf(k - T[i]);
            sg *= sf(k - T[i]);
        }
        for (int j = 0; j < 3; ++j) {
            lg -= lf(Q[j] - k);
            sg *= sf(Q[j] - k);
        }
        logs.push_back(lg);
        signs.push_back(sg);
        if (first || lg > max_log) {
            max_log = lg;
            first = false;
        }
    }
    Real acc = Real(0);
    for (std::size_t i = 0; i < logs.size(); ++i)
        acc += Ops::from_int(signs[i]) * Ops::exp(logs[i] - max_log);

    if (acc == Real(0)) return {0.0, 0.0};
    const int sign = acc < Real(0) ? -1 : 1;
    const Real total_log = log_delta + max_log + Ops::log(Ops::abs(acc));
    const double mag = sign * Ops::to_double(Ops::exp(total_log));
    switch (ipow) {
        case 0: return {mag, 0.0};
        case 1: return {0.0, mag};
        case 2: return {-mag, 0.0};
        default: return {0.0, -mag};
    }
}

}  // namespace

cplx triangle_delta(int a, int b, int c, const QuantumContext& ctx) {
    if (!is_admissible_triple(a, b, c, ctx.r())) {
        std::ostringstream os;
        os << "triangle_delta: (" << a << "," << b << "," << c
           << ") is not admissible at r = " << ctx.r();
        throw DomainError(os.str());
    }
    const int i1 = (a + b - c) / 2, i2 = (b + c - a) / 2, i3 = (c + a - b) / 2,
              i4 = (a + b + c) / 2 + 1;
    const double rad_log =
        ctx.log_abs_quantum_factorial(i1) + ctx.log_abs_quantum_factorial(i2) +
        ctx.log_abs_quantum_factorial(i3) - ctx.log_abs_quantum_factorial(i4);
    const int rad_sign = ctx.sign_quantum_factorial(i1) * ctx.sign_quantum_factorial(i2) *
                         ctx.sign_quantum_factorial(i3) * ctx.sign_quantum_factorial(i4);
    const double mag = std::exp(0.5 * rad_log);
    return rad_sign < 0 ? cplx(0.0, mag) : cplx(mag, 0.0);
}

cplx sixj_direct(const std::array<int, 6>& a, const QuantumContext& ctx) {
    if (!is_admissible_tuple(a, ctx.r())) {
        std::ostringstream os;
        os << "sixj: tuple (" << a[0] << "," << a[1] << "," << a[2] << "," << a[3]
           << "," << a[4] << "," << a[5] << ") not admissible at r = " << ctx.r();
        throw DomainError(os.str());
    }
    if (ctx.precision() == Precision::Extended) {
        const auto& tb = quad_tables(ctx.r(), ctx.root());
        return sixj_kernel<QuadOps>(
            a, ctx.r(), [&](int n) { return tb.log_fact[n]; },
            [&](int n) { return tb.sign_fact[n]; });
    }
    return sixj_kernel<DoubleOps>(
        a, ctx.r(), [&](int n) { return ctx.log_abs_quantum_factorial(n); },
        [&](int n) { return ctx.sign_quantum_factorial(n); });
}

cplx sixj_via_potential(const std::array<int, 6>& a, const QuantumContext& ctx) {
    if (ctx.root() != Root::E2PIR)
        throw DomainError("sixj_via_potential: defined at q = exp(2 pi i/r) only");
    const int r = ctx.r();
    if (!is_hyperideal_type(a, r)) {
        std::ostringstream os;
        os << "sixj_via_potential: tuple not of hyperideal type at r = " << r;
        throw DomainError(os.str());
    }

    std::array<int, 4> T{};
    std::array<int, 3> Q{};
    tuple_frame(a, T, Q);
    const int kmin = *std::max_element(T.begin(), T.end());
    const int kmax = std::min(*std::min_element(Q.begin(), Q.end()), r - 2);

    // The potential form reproduces the direct sum up to the same power of i
    // the direct kernel tracks (one i per negative triangle radicand, i^{-1}
    // per unit of total color); undo it at the end.
    int ipow = 0;
    for (int f = 0; f < 4; ++f) {
        const int x = face_triple(a, f, 0), y = face_triple(a, f, 1),
                  z = face_triple(a, f, 2);
        const int rad_sign = ctx.sign_quantum_factorial((x + y - z) / 2) *
                             ctx.sign_quantum_factorial((y + z - x) / 2) *
                             ctx.sign_quantum_factorial((z + x - y) / 2) *
                             ctx.sign_quantum_factorial((x + y + z) / 2 + 1);
        if (rad_sign < 0) ipow += 1;
    }
    const int asum = a[0] + a[1] + a[2] + a[3] + a[4] + a[5];
    ipow = ((ipow - asum) % 4 + 4) % 4;

    const double step = 2.0 * kPi / r;  // color -> angle
    std::array<double, 4> tau{};
    std::array<double, 3> eta{};
    for (int i = 0; i < 4; ++i) tau[i] = step * T[i];
    for (int j = 0; j < 3; ++j) eta[j] = step * Q[j];
    const double d = step;  // 2 pi / r shift appearing throughout

    // alpha-only part of the discrete potential
    double quad_base = kPi * kPi - d * d;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) quad_base += 0.5 * std::pow(eta[j] - tau[i], 2);
    for (int i = 0; i < 4; ++i) quad_base -= 0.5 * std::pow(tau[i] + d - kPi, 2);

    cplx phi_base = -2.0 * phi_r(cplx(kPi / r, 0.0), r);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j)
            phi_base -= 0.5 * phi_r(cplx(eta[j] - tau[i] + kPi / r, 0.0), r);
    for (int i = 0; i < 4; ++i)
        phi_base += 0.5 * phi_r(cplx(tau[i] - kPi + 3.0 * kPi / r, 0.0), r);

    cplx sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double xi = step * k;
        cplx u = quad_base + phi_base;
        u += std::pow(xi + d - kPi, 2);
        for (int i = 0; i < 4; ++i) u -= std::pow(xi - tau[i], 2);
        for (int j = 0; j < 3; ++j) u -= std::pow(eta[j] - xi, 2);
        u -= phi_r(cplx(xi - kPi + 3.0 * kPi / r, 0.0), r);
        for (int i = 0; i < 4; ++i) u += phi_r(cplx(xi - tau[i] + kPi / r, 0.0), r);
        for (int j = 0; j < 3; ++j) u += phi_r(cplx(eta[j] - xi + kPi / r, 0.0), r);
        // exp((r / 4 pi i) U_r)
        sum += std::exp(cplx(0.0, -r / (4.0 * kPi)) * u);
    }
    // {1}/2 = i sin(2 pi / r)
    const cplx raw = cplx(0.0, std::sin(2.0 * kPi / r)) * sum;
    switch (ipow) {  // multiply by i^{-ipow}
        case 0: return raw;
        case 1: return cplx(raw.imag(), -raw.real());
        case 2: return -raw;
        default: return cplx(-raw.imag(), raw.real());
    }
}

cplx edge_weight(int a, int b, const QuantumContext& ctx) {
    const int r = ctx.r();
    if (a < 0 || a > r - 2 || b < 0 || b > r - 2)
        throw InputError("edge_weight: colors must lie in [0, r-2]");
    const double phi = ctx.angle();
    const double value = std::sin(static_cast<double>(a + 1) * (b + 1) * phi) / std::sin(phi);
    return ((a + b) % 2 == 0) ? cplx(value, 0.0) : cplx(-value, 0.0);
}

cplx SixJCache::get(const std::array<int, 6>& a) {
    std::uint64_t key = 0;
    for (int s = 0; s < 6; ++s)
        key = (key << 8) | static_cast<std::uint64_t>(a[s] & 0xff);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    const cplx v = sixj_direct(a, *ctx_);
    map_.emplace(key, v);
    return v;
}

}  // namespace reltv
