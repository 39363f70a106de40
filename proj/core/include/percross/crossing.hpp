#pragma once

#include <complex>

#include "percross/elliptic.hpp"

namespace percross::crossing {

using Complex = std::complex<double>;

// Critical crossing-event functions of the half-plane cross ratio z.
//
// p_h      horizontal crossing probability, ~ z^(1/3) at 0, dual under
//          z -> 1-z.
// p_hbar_v horizontal-but-not-vertical crossing probability, ~ z at 0.
// p_hv     horizontal-and-vertical crossing probability, symmetric in
//          z -> 1-z.
// n_h      expected number of distinct horizontal crossing clusters,
//          diverging logarithmically as z -> 1.
// p_surr   probability that the origin-anchored cluster surrounds a marked
//          boundary point; defined for all real z, odd about 1/2.
//
// Arguments are clamped into [1e-12, 1-1e-12] (p_surr excepted); values
// outside [0,1] throw std::domain_error.
double p_h(double z);
double p_hbar_v(double z);
double p_hv(double z);
double n_h(double z);
double p_surr(double z);

// n_h through the linear relation 2 n_h = p_h + p_hv + (sqrt3/2pi) log(1/(1-z))
// instead of the direct series. Fast for small z, but unusable for testing
// that relation, which is why it is a separate entry point.
double n_h_fast(double z);

// Analytic continuation of the p_h formula off (0,1); principal branches,
// with the standard inversion continuation once |z| leaves the unit disk.
// Satisfies p_h_continued(conj z) = conj(p_h_continued(z)).
Complex p_h_continued(Complex z);

// |2 n_h - p_h - p_hv - (sqrt3/2pi) log(1/(1-z))| with n_h from the direct
// series, so the check is independent of n_h_fast.
double identity_residual(double z);

// Residual of the Fuchsian differential operators annihilating these
// functions, evaluated by nested Richardson-extrapolated central
// differences. third_order admits p_h and p_hv; fifth_order admits all
// three. z must lie in (0.05, 0.95).
enum class FuchsianOrder { third_order, fifth_order };
enum class CrossingFunction { horizontal, horizontal_vertical, cluster_count };
double fuchsian_residual(FuchsianOrder order, CrossingFunction f, double z);

// Cross-ratio coordinate of a rectangle with aspect ratio r = width/height:
// solves r = K(sqrt(1-z)) / K(sqrt(z)) by theta-function nome inversion.
// Monotone decreasing, r = 1 -> z = 1/2.
double aspect_ratio_to_z(double r);

// Inverse of the above via arithmetic-geometric-mean elliptic integrals
// (an independent route, useful as a cross check).
double aspect_ratio_from_z(double z);

// Triangle-coordinate forms. w must lie on the image segment: BC of the
// equilateral triangle (p_h, p_hv, n_h) or [0, 2 omega2] (p_surr). Each
// evaluates an expression that is real on the segment only through
// cancellation; the imaginary part is asserted below 1e-8.
double p_h_triangle(const elliptic::EquianharmonicContext& ctx, Complex w);
double p_hv_triangle(const elliptic::EquianharmonicContext& ctx, Complex w);
double n_h_triangle(const elliptic::EquianharmonicContext& ctx, Complex w);
double p_surr_triangle(const elliptic::EquianharmonicContext& ctx, Complex w);

} // namespace percross::crossing
