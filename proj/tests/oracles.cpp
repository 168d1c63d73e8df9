#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "reltv/quadrature.hpp"
#include "reltv/sixj.hpp"

namespace oracle {

namespace {
constexpr double kPi = std::numbers::pi;
}

double lobachevsky_integral(double theta) {
    if (std::abs(theta) > kPi / 2 + 1e-12)
        throw std::invalid_argument("integral oracle restricted to |theta| <= pi/2");
    if (theta < 0) return -lobachevsky_integral(-theta);
    if (theta == 0.0) return 0.0;

    // Split at delta: on [0, delta] write log(2 sin t) = log(2t) + log(sin(t)/t),
    // integrate the log term exactly and the smooth remainder numerically.
    const double delta = std::min(theta, 0.1);
    const double exact_log = delta * (std::log(2.0 * delta) - 1.0);
    const auto smooth = [](double t) {
        return reltv::cplx(std::log(std::sin(t) / t), 0.0);
    };
    double total =
        exact_log + reltv::integrate_gk(smooth, 0.0, delta, 1e-15).value.real();
    if (theta > delta) {
        const auto full = [](double t) {
            return reltv::cplx(std::log(2.0 * std::sin(t)), 0.0);
        };
        total += reltv::integrate_gk(full, delta, theta, 1e-15).value.real();
    }
    return -total;
}

double lobachevsky_fourier(double theta) {
    double s = 0.0;
    // Backward to add small terms first.
    for (int n = 300000; n >= 1; --n) s += std::sin(2.0 * n * theta) / (static_cast<double>(n) * n);
    return 0.5 * s;
}

int gf2_rank_by_span(const std::vector<std::vector<std::uint8_t>>& rows) {
    if (rows.empty()) return 0;
    if (rows.size() > 20) throw std::invalid_argument("span oracle limited to 20 rows");
    const std::size_t cols = rows[0].size();
    std::set<std::vector<std::uint8_t>> span;
    const std::uint32_t subsets = 1u << rows.size();
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::uint8_t> v(cols, 0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (mask & (1u << i))
                for (std::size_t j = 0; j < cols; ++j) v[j] ^= rows[i][j];
        span.insert(v);
    }
    int rank = 0;
    while ((std::size_t{1} << rank) < span.size()) ++rank;
    if ((std::size_t{1} << rank) != span.size())
        throw std::logic_error("span size is not a power of two");
    return rank;
}

std::complex<double> tv_bruteforce(const reltv::Triangulation& tri,
                                   const std::vector<int>& b,
                                   const reltv::QuantumContext& ctx,
                                   bool even_only) {
    const int n = tri.num_edges();
    const int r = ctx.r();
    const int step = even_only ? 2 : 1;
    std::vector<int> a(n, 0);
    std::complex<double> total{0.0, 0.0};
    while (true) {
        bool ok = true;
        for (const auto& tet : tri.tets()) {
            std::array<int, 6> t{};
            for (int s = 0; s < 6; ++s) t[s] = a[tet[s]];
            if (!reltv::is_admissible_tuple(t, r)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::complex<double> w{1.0, 0.0};
            for (int e = 0; e < n; ++e) w *= reltv::edge_weight(a[e], b[e], ctx);
            for (const auto& tet : tri.tets()) {
                std::array<int, 6> t{};
                for (int s = 0; s < 6; ++s) t[s] = a[tet[s]];
                w *= reltv::sixj_direct(t, ctx);
            }
            total += w;
        }
        // Odometer increment.
        int pos = 0;
        while (pos < n) {
            a[pos] += step;
            if (a[pos] <= r - 2) break;
            a[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return total;
}

std::complex<double> tv_plain_weights(const reltv::Triangulation& tri,
                                      const reltv::QuantumContext& ctx,
                                      bool even_only) {
    const int n = tri.num_edges();
    const int r = ctx.r();
    const double phi = ctx.angle();
    const int step = even_only ? 2 : 1;
    std::vector<int> a(n, 0);
    std::complex<double> total{0.0, 0.0};
    while (true) {
        bool ok = true;
        for (const auto& tet : tri.tets()) {
            std::array<int, 6> t{};
            for (int s = 0; s < 6; ++s) t[s] = a[tet[s]];
            if (!reltv::is_admissible_tuple(t, r)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::complex<double> w{1.0, 0.0};
            for (int e = 0; e < n; ++e) {
                const double bracket = std::sin((a[e] + 1) * phi) / std::sin(phi);
                w *= (a[e] % 2 == 0 ? 1.0 : -1.0) * bracket;
            }
            for (const auto& tet : tri.tets()) {
                std::array<int, 6> t{};
                for (int s = 0; s < 6; ++s) t[s] = a[tet[s]];
                w *= reltv::sixj_direct(t, ctx);
            }
            total += w;
        }
        int pos = 0;
        while (pos < n) {
            a[pos] += step;
            if (a[pos] <= r - 2) break;
            a[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return total;
}

}  // namespace oracle
