#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace percross::specfun {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Gamma-family helpers
// ---------------------------------------------------------------------------

// Principal branch of log Gamma, Lanczos approximation (g = 7, 9 terms)
// with reflection for Re(z) < 1/2. Relative accuracy ~1e-14 away from the
// poles at 0, -1, -2, ...
Complex log_gamma(Complex z);

Complex gamma(Complex z);

// psi(z) = Gamma'(z)/Gamma(z). Upward recurrence until Re >= 10, then the
// Bernoulli asymptotic series; reflection for Re(z) < 0.
// Throws std::domain_error at the poles 0, -1, -2, ...
Complex digamma(Complex z);

// Rising factorial (alpha)_k = alpha (alpha+1) ... (alpha+k-1); (alpha)_0 = 1.
Complex pochhammer(Complex alpha, unsigned k);

// ---------------------------------------------------------------------------
// Generalized hypergeometric series, q+1 upper and q lower parameters
// ---------------------------------------------------------------------------

// Validated parameter set. Construction throws std::invalid_argument if the
// shape is wrong (need q >= 1) or a lower parameter is a nonpositive integer,
// which would zero a denominator at some series order.
class HyperParams {
public:
    HyperParams(std::vector<Complex> numerator, std::vector<Complex> denominator);

    const std::vector<Complex>& numerator() const { return numerator_; }
    const std::vector<Complex>& denominator() const { return denominator_; }
    std::size_t q() const { return denominator_.size(); }

    // s = sum(lower) - sum(upper). The series converges on |z| = 1 iff
    // Re(s) > 0; it is also the nontrivial local exponent at z = 1.
    Complex convergence_margin() const;

private:
    std::vector<Complex> numerator_;
    std::vector<Complex> denominator_;
};

struct HyperOptions {
    std::size_t max_terms = 100000;
    double tolerance = 1e-15;   // stop when |term| < tolerance * |sum| holds 3x
};

// Sum of the series  sum_k  prod(upper)_k / prod(lower)_k * z^k / k!.
//
// Interior |z| < 1: plain term recurrence with the stated stopping rule.
// Boundary |z| ~ 1 with Re(s) > 0: the terms decay only like k^(-1-s), far
// too slowly to sum directly, so the tail is resummed with a Levin u
// transformation seeded from a few hundred leading terms.
//
// Throws std::domain_error for |z| > 1 and non_convergence_error when |z| is
// within 1e-12 of 1 while Re(s) <= 0 (the series has no boundary limit).
Complex hyper(const HyperParams& params, Complex z, const HyperOptions& options = {});

// Conveniences for the two shapes that actually occur here.
Complex hyper_2f1(Complex a, Complex b, Complex c, Complex z, const HyperOptions& options = {});
Complex hyper_3f2(Complex a1, Complex a2, Complex a3, Complex b1, Complex b2, Complex z,
                  const HyperOptions& options = {});

// Gauss value 2F1(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)).
// Requires Re(c-a-b) > 0 and none of c, c-a, c-b a nonpositive integer.
Complex gauss_sum_at_1(Complex a, Complex b, Complex c);

// Closed form for 3F2(1,1,a; 2,c; 1) = ((c-1)/(a-1)) * (psi(c-1) - psi(c-a)),
// valid for a != 1 and Re(c-a) > 0.
Complex threeF2_unit_value(Complex a, Complex c);

// ---------------------------------------------------------------------------
// Quadratic 3F2 transformations (residual form, for verification)
// ---------------------------------------------------------------------------

// | 3F2(a,b,c; a-b+1,a-c+1; w)
//   - (1-w)^(-a) 3F2(a-b-c+1, a/2, (a+1)/2; a-b+1, a-c+1; -4w/(1-w)^2) |.
// Valid inside the loop |4w| = |1-w|^2 around the origin.
double whipple_residual(Complex a, Complex b, Complex c, Complex w);

// | 3F2(a,b,c; 2,(a+b+c)/2; w)
//   - (1-w)   3F2((a+1)/2,(b+1)/2,(c+1)/2; 2,(a+b+c)/2; 4w(1-w)) |.
// Requires one of a,b,c equal to 1 (else std::invalid_argument). Valid for w
// inside both |w| = 1 and the loop |4w(1-w)| = 1 around the origin; boundary
// points are accepted when the transformed series still converges there.
double whipple2_residual(Complex a, Complex b, Complex c, Complex w);

} // namespace percross::specfun
