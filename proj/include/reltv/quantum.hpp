#pragma once

// Arithmetic at a root of unity: quantum integers and factorials (kept in
// sign/log-magnitude form so large r never overflows), the bracket factorial
// {n}!, the quantum dilogarithm phi_r evaluated by contour quadrature, and the
// factorial <-> phi_r identities used to validate both against each other.

#include <complex>
#include <cstdint>
#include <vector>

#include "reltv/errors.hpp"

namespace reltv {

using cplx = std::complex<double>;

// Which primitive root drives the representation theory:
//   E2PIR:  q = exp(2*pi*i/r), r odd (the regime with hyperbolic growth)
//   EPIR:   q = exp(pi*i/r)    (the classical positive-[n] regime)
enum class Root { E2PIR, EPIR };

enum class Precision { Double, Extended };

class QuantumContext {
  public:
    explicit QuantumContext(int r, Root root = Root::E2PIR,
                            Precision precision = Precision::Double);

    int r() const { return r_; }
    Root root() const { return root_; }
    Precision precision() const { return precision_; }

    // arg q: 2*pi/r for E2PIR, pi/r for EPIR.
    double angle() const { return phi_; }
    cplx q() const;

    // [a] = sin(a*phi)/sin(phi), defined for 0 <= a <= r.
    double quantum_integer(int a) const;

    // [n]! in linear scale (overflows for large r; prefer the log form).
    double quantum_factorial(int n) const;

    // {n}! = (q - q^{-1})^n [n]!  =  i^n (2 sin phi)^n [n]!
    cplx bracket_factorial(int n) const;

    // Exact decomposition [n]! = sign * exp(log_abs); sign in {+1,-1}.
    double log_abs_quantum_factorial(int n) const;
    int sign_quantum_factorial(int n) const;
    // log |{n}!| = n*log(2 sin phi) + log |[n]!|
    double log_abs_bracket_factorial(int n) const;

  private:
    void require_index(int n, int max) const;

    int r_;
    Root root_;
    Precision precision_;
    double phi_;
    std::vector<double> log_fact_;   // log |[n]!|, n = 0..r-1
    std::vector<std::int8_t> sign_fact_;
};

// Quantum dilogarithm phi_r(z), defined for -pi/r < Re z < pi + pi/r as the
// contour integral over (-inf,-eps] + upper half-circle |x| = eps + [eps,inf)
// of exp((2z-pi)x) / (4x sinh(pi x) sinh(2 pi x / r)), eps = 1/2, times 4*pi*i/r.
// Values at default tolerance are memoized per (r, z).  Throws DomainError for
// z outside the strip.
cplx phi_r(cplx z, int r);

struct PhiRResult {
    cplx value;
    double error_estimate;
    long evaluations;
};

// Non-memoized evaluation at an explicit absolute tolerance (for convergence
// and tolerance-halving studies).
PhiRResult phi_r_full(cplx z, int r, double abs_tol);

// Relative residual |lhs - rhs| / |lhs| of the closed identity expressing
// {n}! through phi_r at q = exp(2*pi*i/r).  Variant 1 covers n <= (r-1)/2,
// variant 2 covers (r-1)/2 <= n <= r-2 (they overlap at n = (r-1)/2 for odd
// r).  The two-argument form evaluates every applicable variant and returns
// the worst residual.  Throws DomainError for EPIR contexts or out-of-range n.
double factorial_identity_residual(int n, const QuantumContext& ctx);
double factorial_identity_residual(int n, const QuantumContext& ctx, int variant);

}  // namespace reltv
