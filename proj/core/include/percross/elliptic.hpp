#pragma once

#include <array>
#include <complex>
#include <vector>

namespace percross::elliptic {

using Complex = std::complex<double>;

// Representative of w modulo the period lattice 2m*omega + 2n*omega'.
struct ReducedPoint {
    Complex w;    // in the period parallelogram centered at 0
    long m = 0;
    long n = 0;
};

// Weierstrass data for the lattice with invariants g2 = 0, g3 > 0 (the
// hexagonally symmetric case). For g3 = 1 the real half period is
// omega2 = Gamma(1/3)^3 / (4 pi); general g3 rescales the lattice by
// g3^(-1/6).
//
// Evaluation is by the Laurent expansion about the origin after closest
// lattice point reduction; in the outer shell of the Voronoi cell, where
// that series loses accuracy to cancellation, a Taylor expansion about
// the nearest cell corner (a zero of wp) takes over. The corner seeds are
// themselves computed from the origin series, not assumed.
//
// Accuracy degrades within ~1e-6 of a lattice point; closer than 1e-9 the
// evaluators throw pole_error.
class EquianharmonicContext {
public:
    explicit EquianharmonicContext(double g3 = 1.0);

    double g3() const { return g3_; }
    double omega2() const { return omega2_; }       // real half period
    Complex omega() const { return omega_; }        // Re > 0, Im < 0
    Complex omega_prime() const { return omega_p_; }
    Complex W0() const { return W0_; }              // (1 + i/sqrt(3)) omega2
    Complex W0_bar() const { return W0b_; }
    Complex eta() const { return eta_; }            // zeta(omega)
    Complex eta_prime() const { return eta_p_; }    // zeta(omega')

    ReducedPoint reduce_to_fundamental(Complex w) const;

    Complex wp(Complex w) const;
    Complex wp_prime(Complex w) const;

    // zeta(w) = zeta(w_reduced) + 2m eta + 2n eta'; quasi-periodic, odd.
    Complex zeta(Complex w) const;

    // Branch of log sigma that is real for small w > 0 and continuous on the
    // fundamental triangle (0, W0_bar, W0); only that closed triangle (plus a
    // small margin) is accepted, since the branch is pinned there.
    Complex log_sigma(Complex w) const;

private:
    struct Local {
        Complex w;        // displacement from 0 after Voronoi reduction
        int corner;       // -1: origin series, else index into corners_
        long m = 0;       // total lattice offset consumed
        long n = 0;
    };

    Local reduce_for_series(Complex w) const;
    Complex wp_series0(Complex w) const;
    Complex wp_prime_series0(Complex w) const;
    Complex zeta_series0(Complex w) const;

    double g3_ = 1.0;
    double omega2_ = 0.0;
    Complex omega_, omega_p_, W0_, W0b_;
    Complex eta_, eta_p_;

    std::vector<double> c_;                      // Laurent coefficients c_k
    std::array<Complex, 6> corners_{};           // Voronoi cell corners
    std::array<std::vector<Complex>, 6> corner_taylor_;   // wp about corner
};

} // namespace percross::elliptic
