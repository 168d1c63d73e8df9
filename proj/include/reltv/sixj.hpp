#pragma once

// Quantum 6j-symbols at a root of unity, edge weights, admissibility and
// hyperideal-type predicates, and the geometric-potential route to the same
// 6j values.  Tuples use the slot convention of triangulation.hpp: entry s is
// the color of slot s, faces are the triples of kFaceSlots.

#include <array>
#include <cstdint>
#include <unordered_map>

#include "reltv/quantum.hpp"

namespace reltv {

// (a,b,c) is r-admissible: triangle differences >= 0, a+b+c <= 2(r-2), even sum.
bool is_admissible_triple(int a, int b, int c, int r);

// All four face triples of the 6-tuple are r-admissible.
bool is_admissible_tuple(const std::array<int, 6>& a, int r);

// Strict hyperideal window, integer form: every face satisfies
// 0 <= a_i + a_j - a_k < r-2  and  r-2 < a_i + a_j + a_k <= 2(r-2).
bool is_hyperideal_type(const std::array<int, 6>& a, int r);

// Angle form on [0, 2pi]^6: per face, 0 <= al_i + al_j - al_k <= 2pi and
// 2pi <= al_i + al_j + al_k <= 4pi.
bool is_hyperideal_angles(const std::array<double, 6>& alpha, double slack = 0.0);

// Triangle factor Delta(a,b,c) = sqrt([x1]![x2]![x3]!/[x4+1]!) with the
// convention sqrt(t) = i*sqrt(|t|) for t < 0, so the value is either positive
// real or positive-imaginary.
cplx triangle_delta(int a, int b, int c, const QuantumContext& ctx);

// 6j-symbol by the alternating single sum over k.  Internally composed in
// sign/log-magnitude/i-power form; with ctx.precision() == Extended the whole
// composition runs in quad precision before rounding.  Throws DomainError on
// non-admissible input.
cplx sixj_direct(const std::array<int, 6>& a, const QuantumContext& ctx);

// Same value through the discrete geometric potential: sum over k of
// exp((r/4pi i) U_r(2pi a/r, 2pi k/r)) times {1}/2.  Requires E2PIR and a
// hyperideal-type tuple (the phi_r arguments stay in the strip there).
cplx sixj_via_potential(const std::array<int, 6>& a, const QuantumContext& ctx);

// Edge weight H(a,b) = (-1)^{a+b} [(a+1)(b+1)]; always real.
cplx edge_weight(int a, int b, const QuantumContext& ctx);

// Memoizing wrapper around sixj_direct for one fixed context.  Not
// thread-safe; use one cache per worker.
class SixJCache {
  public:
    explicit SixJCache(const QuantumContext& ctx) : ctx_(&ctx) {}
    cplx get(const std::array<int, 6>& a);
    std::size_t size() const { return map_.size(); }

  private:
    const QuantumContext* ctx_;
    std::unordered_map<std::uint64_t, cplx> map_;
};

}  // namespace reltv
