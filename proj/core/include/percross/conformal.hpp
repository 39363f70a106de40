#pragma once

#include <complex>

#include "percross/elliptic.hpp"

namespace percross::conformal {

using Complex = std::complex<double>;

// Equilateral triangle with vertices A = 0, B = conj(W0), C = W0. The map
// schwarz_S sends it conformally onto the closed upper half plane with
// A -> infinity, B -> 0, C -> 1; the open edge BC maps onto (0, 1).
struct TriangleDomain {
    Complex A, B, C;
    double side;        // |C - B|
    Complex midpoint;   // of BC, equals omega2
};

// Isosceles triangle (vertex angles pi/2, pi/3, pi/6) with vertices
// A = W0, B = 0, C = 2 omega2, the image domain of schwarz_R with
// A -> infinity, B -> 0, C -> 1 and edge BC mapping onto (0, 1).
struct IsoscelesDomain {
    Complex A, B, C;
};

TriangleDomain triangle(const elliptic::EquianharmonicContext& ctx);
IsoscelesDomain isosceles(const elliptic::EquianharmonicContext& ctx);

// S(w) = 1/2 + wp'(w) / (2i). Degree-one on the triangle.
Complex schwarz_S(const elliptic::EquianharmonicContext& ctx, Complex w);

// R(w) = wp'(w), the analogous map for the isosceles triangle.
Complex schwarz_R(const elliptic::EquianharmonicContext& ctx, Complex w);

// Inverse of schwarz_S: given z with Im z >= 0, the unique w in the closed
// triangle with S(w) = z. Newton iteration with S'(w) = -3i wp(w)^2; seeds
// come from the boundary parametrization (real z) or the barycenter with
// damped initial steps (interior z). Converged iterates landing in an
// equivalent copy of the triangle are folded back by the symmetries that
// S cannot see (rotation by 2pi/3 and lattice translations).
//
// Throws non_convergence_error if no seed reaches |S(w) - z| within
// 1e-10 * max(1, |z|); throws std::domain_error for Im z < -1e-9.
Complex schwarz_inverse(const elliptic::EquianharmonicContext& ctx, Complex z);

} // namespace percross::conformal
