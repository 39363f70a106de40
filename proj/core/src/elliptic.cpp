#include "percross/elliptic.hpp"

#include <cmath>
#include <stdexcept>

#include "percross/errors.hpp"

namespace percross::elliptic {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kLaurentTerms = 48;    // c_k table length; decay ~(|w|/2w2)^(2k)
constexpr int kTaylorTerms = 48;     // corner expansions; |u|/rho stays < 0.2
constexpr double kPoleDistance = 1e-9;

} // namespace

EquianharmonicContext::EquianharmonicContext(double g3) {
    if (!(g3 > 0.0)) {
        throw std::invalid_argument("EquianharmonicContext: g3 must be positive");
    }
    g3_ = g3;

    const double gamma_third = std::tgamma(1.0 / 3.0);
    omega2_ = gamma_third * gamma_third * gamma_third / (4.0 * kPi) * std::pow(g3, -1.0 / 6.0);
    omega_ = Complex(0.5, -std::sqrt(3.0) / 2.0) * omega2_;
    omega_p_ = std::conj(omega_);
    W0_ = Complex(1.0, 1.0 / std::sqrt(3.0)) * omega2_;
    W0b_ = std::conj(W0_);

    // Laurent coefficients of wp about 0: wp = w^-2 + sum_{k>=2} c_k w^(2k-2),
    // c_2 = g2/20 = 0, c_3 = g3/28, then the standard quadratic recursion.
    c_.assign(kLaurentTerms + 1, 0.0);
    c_[3] = g3 / 28.0;
    for (int k = 4; k <= kLaurentTerms; ++k) {
        double acc = 0.0;
        for (int m = 2; m <= k - 2; ++m) acc += c_[m] * c_[k - m];
        c_[k] = 3.0 * acc / ((2 * k + 1) * (k - 3));
    }

    // Voronoi cell corners (zeros of wp), alternating the two zero classes.
    const double rho = 2.0 * omega2_ / std::sqrt(3.0);
    corners_ = {W0_, Complex(0.0, rho), -W0b_, -W0_, Complex(0.0, -rho), W0b_};

    // Taylor tables about each corner, seeded from the origin series itself
    // (the corner values are outputs here, not inputs) and extended by
    // wp'' = 6 wp^2.
    for (std::size_t j = 0; j < corners_.size(); ++j) {
        std::vector<Complex>& a = corner_taylor_[j];
        a.assign(kTaylorTerms + 1, Complex(0.0));
        a[0] = wp_series0(corners_[j]);
        a[1] = wp_prime_series0(corners_[j]);
        for (int m = 0; m + 2 <= kTaylorTerms; ++m) {
            Complex conv = 0.0;
            for (int i = 0; i <= m; ++i) conv += a[i] * a[m - i];
            a[m + 2] = 6.0 * conv / static_cast<double>((m + 1) * (m + 2));
        }
    }

    eta_ = zeta_series0(omega_);
    eta_p_ = zeta_series0(omega_p_);
}

// ---------------------------------------------------------------------------
// Series about the origin
// ---------------------------------------------------------------------------

Complex EquianharmonicContext::wp_series0(Complex w) const {
    Complex w2 = w * w;
    Complex sum = 1.0 / w2;
    Complex pw = w2;                       // w^(2k-2) starting at k = 2
    for (int k = 2; k <= kLaurentTerms; ++k) {
        sum += c_[k] * pw;
        pw *= w2;
    }
    return sum;
}

Complex EquianharmonicContext::wp_prime_series0(Complex w) const {
    Complex w2 = w * w;
    Complex sum = -2.0 / (w2 * w);
    Complex pw = w;                        // w^(2k-3) starting at k = 2
    for (int k = 2; k <= kLaurentTerms; ++k) {
        sum += c_[k] * static_cast<double>(2 * k - 2) * pw;
        pw *= w2;
    }
    return sum;
}

Complex EquianharmonicContext::zeta_series0(Complex w) const {
    Complex w2 = w * w;
    Complex sum = 1.0 / w;
    Complex pw = w2 * w;                   // w^(2k-1) starting at k = 2
    for (int k = 2; k <= kLaurentTerms; ++k) {
        sum -= c_[k] / static_cast<double>(2 * k - 1) * pw;
        pw *= w2;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Lattice reduction
// ---------------------------------------------------------------------------

ReducedPoint EquianharmonicContext::reduce_to_fundamental(Complex w) const {
    // Coordinates in the (2 omega, 2 omega') basis.
    double det = 4.0 * (omega_.real() * omega_p_.imag() - omega_p_.real() * omega_.imag());
    double x = (w.real() * 2.0 * omega_p_.imag() - w.imag() * 2.0 * omega_p_.real()) / det;
    double y = (w.imag() * 2.0 * omega_.real() - w.real() * 2.0 * omega_.imag()) / det;
    ReducedPoint r;
    r.m = static_cast<long>(std::floor(x + 0.5));
    r.n = static_cast<long>(std::floor(y + 0.5));
    r.w = w - 2.0 * static_cast<double>(r.m) * omega_ - 2.0 * static_cast<double>(r.n) * omega_p_;
    return r;
}

EquianharmonicContext::Local EquianharmonicContext::reduce_for_series(Complex w) const {
    ReducedPoint r = reduce_to_fundamental(w);
    // The centered parallelogram has sharp corners farther out than the
    // Voronoi cell; one extra nearest-neighbour shift fixes that.
    struct Shift { Complex v; long dm, dn; };
    const Shift shifts[] = {
        {0.0, 0, 0},
        {2.0 * omega_, 1, 0},
        {-2.0 * omega_, -1, 0},
        {2.0 * omega_p_, 0, 1},
        {-2.0 * omega_p_, 0, -1},
        {2.0 * (omega_ + omega_p_), 1, 1},
        {-2.0 * (omega_ + omega_p_), -1, -1},
    };
    Local loc;
    double best = 1e300;
    for (const Shift& s : shifts) {
        Complex cand = r.w - s.v;
        double d = std::norm(cand);
        if (d < best) {
            best = d;
            loc.w = cand;
            loc.m = r.m + s.dm;
            loc.n = r.n + s.dn;
        }
    }
    if (std::abs(loc.w) < kPoleDistance) {
        throw pole_error("evaluation within 1e-9 of a lattice point");
    }
    loc.corner = -1;
    if (std::abs(loc.w) > 0.55 * 2.0 * omega2_) {
        int nearest = 0;
        double bd = 1e300;
        for (int j = 0; j < 6; ++j) {
            double d = std::norm(loc.w - corners_[j]);
            if (d < bd) {
                bd = d;
                nearest = j;
            }
        }
        loc.corner = nearest;
    }
    return loc;
}

// ---------------------------------------------------------------------------
// Public evaluators
// ---------------------------------------------------------------------------

Complex EquianharmonicContext::wp(Complex w) const {
    Local loc = reduce_for_series(w);
    if (loc.corner < 0) return wp_series0(loc.w);
    const std::vector<Complex>& a = corner_taylor_[loc.corner];
    Complex u = loc.w - corners_[loc.corner];
    Complex sum = a[kTaylorTerms];
    for (int m = kTaylorTerms - 1; m >= 0; --m) sum = sum * u + a[m];
    return sum;
}

Complex EquianharmonicContext::wp_prime(Complex w) const {
    Local loc = reduce_for_series(w);
    if (loc.corner < 0) return wp_prime_series0(loc.w);
    const std::vector<Complex>& a = corner_taylor_[loc.corner];
    Complex u = loc.w - corners_[loc.corner];
    Complex sum = static_cast<double>(kTaylorTerms) * a[kTaylorTerms];
    for (int m = kTaylorTerms - 1; m >= 1; --m) {
        sum = sum * u + static_cast<double>(m) * a[m];
    }
    return sum;
}

Complex EquianharmonicContext::zeta(Complex w) const {
    // The origin series converges on the whole Voronoi cell, so no corner
    // recentering is needed; only the quasi-period shifts accumulate.
    Local loc = reduce_for_series(w);
    return zeta_series0(loc.w) + 2.0 * static_cast<double>(loc.m) * eta_ +
           2.0 * static_cast<double>(loc.n) * eta_p_;
}

Complex EquianharmonicContext::log_sigma(Complex w) const {
    // Branch-safe region: the closed fundamental triangle (0, W0_bar, W0)
    // plus a small relative margin. w = u*W0_bar + v*W0 in barycentric form.
    double det = W0b_.real() * W0_.imag() - W0_.real() * W0b_.imag();
    double u = (w.real() * W0_.imag() - w.imag() * W0_.real()) / det;
    double v = (w.imag() * W0b_.real() - w.real() * W0b_.imag()) / det;
    constexpr double slack = 1e-9;
    if (u < -slack || v < -slack || u + v > 1.0 + slack) {
        throw std::domain_error("log_sigma: w outside the fundamental triangle");
    }
    if (std::abs(w) < kPoleDistance) {
        throw pole_error("log_sigma: sigma vanishes at 0");
    }
    // log sigma = Log w - sum c_k w^(2k) / (2k (2k-1)); the correction series
    // is analytic on the triangle, and arg w stays within (-pi/6, pi/6), so
    // this is the branch that is real for small positive w, continued along
    // straight rays from the origin.
    Complex w2 = w * w;
    Complex sum = std::log(w);
    Complex pw = w2 * w2;                  // w^(2k) starting at k = 2
    for (int k = 2; k <= kLaurentTerms; ++k) {
        sum -= c_[k] / static_cast<double>(2 * k * (2 * k - 1)) * pw;
        pw *= w2;
    }
    return sum;
}

} // namespace percross::elliptic
