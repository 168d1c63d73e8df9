#include "reltv/quantum.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "reltv/quadrature.hpp"

namespace reltv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kContourEps = 0.5;
constexpr double kDefaultPhiTol = 1e-12;
}  // namespace

QuantumContext::QuantumContext(int r, Root root, Precision precision)
    : r_(r), root_(root), precision_(precision) {
    if (r_ < 3) throw InputError("quantum context: r must be at least 3");
    if (root_ == Root::E2PIR && r_ % 2 == 0)
        throw InputError("quantum context: q = exp(2 pi i/r) requires odd r");
    phi_ = (root_ == Root::E2PIR) ? 2.0 * kPi / r_ : kPi / r_;

    // [n] = sin(n phi)/sin(phi) never vanishes for 1 <= n <= r-1 at either
    // root, so the running log/sign decomposition below is total.
    log_fact_.assign(r_, 0.0);
    sign_fact_.assign(r_, 1);
    const double s1 = std::sin(phi_);
    double lf = 0.0;
    int sg = 1;
    for (int n = 1; n <= r_ - 1; ++n) {
        const double qn = std::sin(n * phi_) / s1;
        lf += std::log(std::fabs(qn));
        if (qn < 0.0) sg = -sg;
        log_fact_[n] = lf;
        sign_fact_[n] = static_cast<std::int8_t>(sg);
    }
}

void QuantumContext::require_index(int n, int max) const {
    if (n < 0 || n > max) {
        std::ostringstream os;
        os << "quantum context (r=" << r_ << "): index " << n
           << " outside [0, " << max << "]";
        throw InputError(os.str());
    }
}

cplx QuantumContext::q() const {
    return std::polar(1.0, phi_);
}

double QuantumContext::quantum_integer(int a) const {
    require_index(a, r_);
    return std::sin(a * phi_) / std::sin(phi_);
}

double QuantumContext::quantum_factorial(int n) const {
    require_index(n, r_ - 1);
    return sign_fact_[n] * std::exp(log_fact_[n]);
}

double QuantumContext::log_abs_quantum_factorial(int n) const {
    require_index(n, r_ - 1);
    return log_fact_[n];
}

int QuantumContext::sign_quantum_factorial(int n) const {
    require_index(n, r_ - 1);
    return sign_fact_[n];
}

double QuantumContext::log_abs_bracket_factorial(int n) const {
    require_index(n, r_ - 1);
    return n * std::log(2.0 * std::sin(phi_)) + log_fact_[n];
}

cplx QuantumContext::bracket_factorial(int n) const {
    // {n}! = i^n (2 sin phi)^n [n]!
    const double mag = sign_fact_[n] * std::exp(log_abs_bracket_factorial(n));
    switch (n % 4) {
        case 0: return {mag, 0.0};
        case 1: return {0.0, mag};
        case 2: return {-mag, 0.0};
        default: return {0.0, -mag};
    }
}

namespace {

void require_in_strip(cplx z, int r) {
    const double lo = -kPi / r;
    const double hi = kPi + kPi / r;
    if (!(z.real() > lo && z.real() < hi)) {
        std::ostringstream os;
        os << "phi_r: Re z = " << z.real() << " outside the strip (" << lo
           << ", " << hi << ") at r = " << r;
        throw DomainError(os.str());
    }
}

// Symmetrized real-axis integrand: the two rays of the contour combine into
//   [exp((2z-2pi-2pi/r)t) - exp(-(2z+2pi/r)t)] / (t (1-e^{-2pi t}) (1-e^{-4pi t/r})),
// whose exponents both decay inside the strip, so no overflow at any t.
cplx ray_integrand(double t, cplx two_z, int r) {
    const cplx e1 = std::exp((two_z - 2.0 * kPi - 2.0 * kPi / r) * t);
    const cplx e2 = std::exp(-(two_z + 2.0 * kPi / r) * t);
    const double den =
        t * (1.0 - std::exp(-2.0 * kPi * t)) * (1.0 - std::exp(-4.0 * kPi * t / r));
    return (e1 - e2) / den;
}

// On the half-circle x = eps e^{i s}, s in [0, pi], the 1/x of the raw
// integrand cancels against dx, leaving exp((2z-pi)x) / (4 sinh(pi x) sinh(2 pi x/r)).
cplx arc_integrand(double s, cplx z, int r) {
    const cplx x = std::polar(kContourEps, s);
    return std::exp((2.0 * z - kPi) * x) /
           (4.0 * std::sinh(kPi * x) * std::sinh((2.0 * kPi / r) * x));
}

PhiRResult phi_r_eval(cplx z, int r, double tol) {
    const cplx two_z = 2.0 * z;
    PhiRResult out{cplx(0.0, 0.0), 0.0, 0};

    // Arc piece: integral over the half circle traversed from -eps to +eps is
    // -i * int_0^pi (arc integrand) ds.
    auto arc = integrate_gk([&](double s) { return arc_integrand(s, z, r); },
                            0.0, kPi, tol / 8.0);
    cplx total = cplx(0.0, -1.0) * arc.value;
    out.error_estimate += arc.error;
    out.evaluations += arc.evaluations;

    // Ray piece on [eps, inf): doubling panels until the integrand has decayed.
    double a = kContourEps;
    double width = 0.5;
    for (int panel = 0; panel < 64; ++panel) {
        const double b = a + width;
        auto seg = integrate_gk([&](double t) { return ray_integrand(t, two_z, r); },
                                a, b, tol / 8.0);
        total += seg.value;
        out.error_estimate += seg.error;
        out.evaluations += seg.evaluations;
        a = b;
        width *= 2.0;
        if (std::abs(seg.value) < tol / 8.0 && std::abs(ray_integrand(a, two_z, r)) < tol)
            break;
    }

    out.value = cplx(0.0, 4.0 * kPi / r) * total;
    out.error_estimate *= 4.0 * kPi / r;
    return out;
}

}  // namespace

PhiRResult phi_r_full(cplx z, int r, double abs_tol) {
    if (r < 3) throw InputError("phi_r: r must be at least 3");
    require_in_strip(z, r);
    return phi_r_eval(z, r, abs_tol);
}

cplx phi_r(cplx z, int r) {
    if (r < 3) throw InputError("phi_r: r must be at least 3");
    require_in_strip(z, r);
    using Key = std::tuple<int, double, double>;
    static std::map<Key, cplx> cache;
    static std::mutex mutex;
    const Key key{r, z.real(), z.imag()};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const cplx value = phi_r_eval(z, r, kDefaultPhiTol).value;
    {
        std::lock_guard<std::mutex> lock(mutex);
        cache.emplace(key, value);
    }
    return value;
}

namespace {

// Phase (mod 2 pi) and log-magnitude of {n}!, composed exactly from the table.
void bracket_log_form(const QuantumContext& ctx, int n, double& log_mag, double& arg) {
    log_mag = ctx.log_abs_bracket_factorial(n);
    arg = 0.5 * kPi * (n % 4);
    if (ctx.sign_quantum_factorial(n) < 0) arg += kPi;
}

}  // namespace

double factorial_identity_residual(int n, const QuantumContext& ctx, int variant) {
    if (ctx.root() != Root::E2PIR)
        throw DomainError("factorial identity: defined at q = exp(2 pi i/r) only");
    const int r = ctx.r();
    if (n < 0 || n > r - 2)
        throw DomainError("factorial identity: n must lie in [0, r-2]");
    const int half = (r - 1) / 2;
    double shift, scale;
    if (variant == 1) {
        if (n > half)
            throw DomainError("factorial identity: variant 1 needs n <= (r-1)/2");
        shift = 0.0;
        scale = 1.0;
    } else if (variant == 2) {
        if (n < half)
            throw DomainError("factorial identity: variant 2 needs n >= (r-1)/2");
        shift = -kPi;
        scale = 2.0;
    } else {
        throw DomainError("factorial identity: variant must be 1 or 2");
    }

    const double t = 2.0 * kPi * n / r;
    const cplx inner = -2.0 * kPi * t +
                       std::pow(2.0 * kPi / r, 2) * (static_cast<double>(n) * n + n) +
                       phi_r(cplx(kPi / r, 0.0), r) - phi_r(cplx(t + kPi / r + shift, 0.0), r);
    // r/(4 pi i) = -i r/(4 pi)
    const cplx expo = cplx(0.0, -r / (4.0 * kPi)) * inner;

    double lhs_log, lhs_arg;
    bracket_log_form(ctx, n, lhs_log, lhs_arg);
    const double rhs_log = expo.real() + std::log(scale);
    const double rhs_arg = expo.imag();
    // |rhs/lhs - 1|, formed in log scale so huge magnitudes never overflow.
    const cplx ratio = std::exp(cplx(rhs_log - lhs_log, 0.0) + cplx(0.0, rhs_arg - lhs_arg));
    return std::abs(ratio - 1.0);
}

double factorial_identity_residual(int n, const QuantumContext& ctx) {
    const int half = (ctx.r() - 1) / 2;
    double worst = 0.0;
    bool any = false;
    if (n <= half) {
        worst = std::max(worst, factorial_identity_residual(n, ctx, 1));
        any = true;
    }
    if (n >= half && n <= ctx.r() - 2) {
        worst = std::max(worst, factorial_identity_residual(n, ctx, 2));
        any = true;
    }
    if (!any) throw DomainError("factorial identity: no variant applies");
    return worst;
}

}  // namespace reltv
