#include "percross/crossing.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "percross/errors.hpp"
#include "percross/specfun.hpp"

namespace percross::crossing {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kClamp = 1e-12;
const double kSqrt3 = std::sqrt(3.0);

// 3 Gamma(2/3) / Gamma(1/3)^2
double front_h() {
    static const double v = 3.0 * std::tgamma(2.0 / 3.0) /
                            (std::tgamma(1.0 / 3.0) * std::tgamma(1.0 / 3.0));
    return v;
}

// Gamma(2/3) / (sqrt(pi) Gamma(1/6))
double front_surr() {
    static const double v =
        std::tgamma(2.0 / 3.0) / (std::sqrt(kPi) * std::tgamma(1.0 / 6.0));
    return v;
}

double clamp_unit(double z, const char* who) {
    if (!(z >= 0.0 && z <= 1.0)) {
        throw std::domain_error(std::string(who) + ": z must lie in [0,1]");
    }
    if (z < kClamp) return kClamp;
    if (z > 1.0 - kClamp) return 1.0 - kClamp;
    return z;
}

// z * 3F2(1,1,4/3; 2,5/3; z) piece shared by p_hbar_v and n_h; accurate
// for z <= 1/2 and usable over [0, 1).
double watts_series(double z) {
    static const specfun::HyperParams params({1.0, 1.0, 4.0 / 3.0}, {2.0, 5.0 / 3.0});
    return z * specfun::hyper(params, z).real();
}

double p_h_small(double z) {
    static const specfun::HyperParams params({1.0 / 3.0, 2.0 / 3.0}, {4.0 / 3.0});
    return front_h() * std::cbrt(z) * specfun::hyper(params, z).real();
}

Complex gauss_13_23_43(Complex z) {
    static const specfun::HyperParams params({1.0 / 3.0, 2.0 / 3.0}, {4.0 / 3.0});
    return specfun::hyper(params, z);
}

} // namespace

double p_h(double z) {
    z = clamp_unit(z, "p_h");
    if (z <= 0.5) return p_h_small(z);
    return 1.0 - p_h_small(1.0 - z);
}

double p_hv(double z) {
    z = clamp_unit(z, "p_hv");
    if (z > 0.5) z = 1.0 - z;
    return p_h_small(z) - kSqrt3 / (2.0 * kPi) * watts_series(z);
}

double p_hbar_v(double z) {
    z = clamp_unit(z, "p_hbar_v");
    if (z <= 0.5) return kSqrt3 / (2.0 * kPi) * watts_series(z);
    return 1.0 - 2.0 * p_h_small(1.0 - z) + kSqrt3 / (2.0 * kPi) * watts_series(1.0 - z);
}

double n_h(double z) {
    z = clamp_unit(z, "n_h");
    double u = 1.0 - z;
    return 0.5 - kSqrt3 / (4.0 * kPi) * (std::log(u) + watts_series(u));
}

double n_h_fast(double z) {
    z = clamp_unit(z, "n_h_fast");
    return 0.5 * (p_h(z) + p_hv(z) + kSqrt3 / (2.0 * kPi) * std::log(1.0 / (1.0 - z)));
}

double p_surr(double z) {
    if (!std::isfinite(z)) {
        throw std::domain_error("p_surr: z must be finite");
    }
    if (std::abs(z) <= 0.9) {
        static const specfun::HyperParams params({0.5, 2.0 / 3.0}, {1.5});
        return 0.5 + front_surr() * z * specfun::hyper(params, -z * z).real();
    }
    // Pfaff transformation moves the argument back inside the unit disk:
    // 2F1(1/2,2/3;3/2; -z^2) = (1+z^2)^(-1/2) 2F1(1/2,5/6;3/2; z^2/(1+z^2)).
    static const specfun::HyperParams pfaff({0.5, 5.0 / 6.0}, {1.5});
    double t = z * z / (1.0 + z * z);
    return 0.5 + front_surr() * z / std::sqrt(1.0 + z * z) *
                     specfun::hyper(pfaff, t).real();
}

Complex p_h_continued(Complex z) {
    if (std::abs(z) <= 1.0) {
        return front_h() * std::pow(z, 1.0 / 3.0) * gauss_13_23_43(z);
    }
    // Inversion: with a=1/3, b=2/3, c=4/3 the hypergeometric function obeys
    //   F(z) = A (-z)^(-1/3) F1 + B (-z)^(-2/3) F(1/z),
    // and because c - a - b + 1 = 4/3 the first companion series collapses
    // to 2F1(1/3, 0; 2/3; 1/z) = 1 while the second is F itself at 1/z.
    static const double A = std::tgamma(4.0 / 3.0) * std::tgamma(1.0 / 3.0) /
                            std::tgamma(2.0 / 3.0);
    static const double B = std::tgamma(4.0 / 3.0) * std::tgamma(-1.0 / 3.0) /
                            (std::tgamma(1.0 / 3.0) * std::tgamma(2.0 / 3.0));
    Complex inv = 1.0 / z;
    Complex f = A * std::pow(-z, -1.0 / 3.0) +
                B * std::pow(-z, -2.0 / 3.0) * gauss_13_23_43(inv);
    return front_h() * std::pow(z, 1.0 / 3.0) * f;
}

double identity_residual(double z) {
    if (!(z > 0.0 && z < 1.0)) {
        throw std::domain_error("identity_residual: z must lie in (0,1)");
    }
    double lhs = 2.0 * n_h(z) - p_h(z) - p_hv(z);
    double rhs = kSqrt3 / (2.0 * kPi) * std::log(1.0 / (1.0 - z));
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Fuchsian operator residuals
// ---------------------------------------------------------------------------

namespace {

using RealFn = std::function<double(double)>;

// First derivative: 4th-order central stencil plus one Richardson step.
double deriv1(const RealFn& f, double x, double h) {
    auto d4 = [&](double hh) {
        return (8.0 * (f(x + hh) - f(x - hh)) - (f(x + 2.0 * hh) - f(x - 2.0 * hh))) /
               (12.0 * hh);
    };
    return (16.0 * d4(0.5 * h) - d4(h)) / 15.0;
}

// Third derivative: 4th-order central stencil plus one Richardson step.
double deriv3(const RealFn& f, double x, double h) {
    auto d4 = [&](double hh) {
        return (0.125 * (f(x - 3.0 * hh) - f(x + 3.0 * hh)) + (f(x + 2.0 * hh) - f(x - 2.0 * hh)) +
                1.625 * (f(x - hh) - f(x + hh))) /
               (hh * hh * hh);
    };
    return (16.0 * d4(0.5 * h) - d4(h)) / 15.0;
}

} // namespace

double fuchsian_residual(FuchsianOrder order, CrossingFunction f, double z) {
    if (!(z > 0.05 && z < 0.95)) {
        throw std::domain_error("fuchsian_residual: z must lie in (0.05, 0.95)");
    }
    if (order == FuchsianOrder::third_order && f == CrossingFunction::cluster_count) {
        throw std::invalid_argument(
            "fuchsian_residual: the cluster count solves only the fifth-order equation");
    }
    RealFn fn;
    switch (f) {
        case CrossingFunction::horizontal: fn = [](double s) { return p_h(s); }; break;
        case CrossingFunction::horizontal_vertical: fn = [](double s) { return p_hv(s); }; break;
        case CrossingFunction::cluster_count: fn = [](double s) { return n_h(s); }; break;
    }
    auto u = [](double s) { return std::cbrt(s * (s - 1.0)); };   // v^(1/3), real branch
    const double h1 = 6e-4;
    RealFn g = [&](double s) { return u(s) * u(s) * deriv1(fn, s, h1); };   // v^(2/3) F'
    if (order == FuchsianOrder::third_order) {
        const double h2 = 1.2e-3, h3 = 2.4e-3;
        RealFn m = [&](double s) { return u(s) * deriv1(g, s, h2); };
        return std::abs(deriv1(m, z, h3));
    }
    // The outer step is the accuracy lever (noise ~ h3^-3); take it as large
    // as the distance to the endpoints allows, since every stencil point must
    // stay inside (0, 1).
    const double h2 = 5e-3;
    const double h3 = std::min(3e-2, (std::min(z, 1.0 - z) - 0.013) / 3.0);
    RealFn c = [&](double s) {
        double cu = u(s);
        return cu * cu * cu * cu * deriv1(g, s, h2);   // v^(4/3) d/ds (v^(2/3) F')
    };
    return std::abs(deriv3(c, z, h3));
}

// ---------------------------------------------------------------------------
// Rectangle aspect ratio <-> cross ratio
// ---------------------------------------------------------------------------

namespace {

// Complete elliptic integral K(k) by the arithmetic-geometric mean.
double agm_K(double k) {
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-17 * a; ++i) {
        double am = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = am;
    }
    return kPi / (2.0 * a);
}

} // namespace

double aspect_ratio_to_z(double r) {
    if (!(r > 0.0)) {
        throw std::domain_error("aspect_ratio_to_z: r must be positive");
    }
    if (r < 0.1) return 1.0 - aspect_ratio_to_z(1.0 / r);
    // nome q = exp(-pi r), then z = k^2 = (theta2/theta3)^4.
    double q = std::exp(-kPi * r);
    double th2 = 0.0, th3 = 1.0;
    for (int n = 0; n < 60; ++n) {
        double t = std::pow(q, static_cast<double>(n) * (n + 1));
        th2 += t;
        if (t < 1e-20) break;
    }
    th2 *= 2.0 * std::pow(q, 0.25);
    for (int n = 1; n < 60; ++n) {
        double t = std::pow(q, static_cast<double>(n) * n);
        th3 += 2.0 * t;
        if (t < 1e-20) break;
    }
    double ratio = th2 / th3;
    double k = ratio * ratio;
    return k * k;
}

double aspect_ratio_from_z(double z) {
    if (!(z > 0.0 && z < 1.0)) {
        throw std::domain_error("aspect_ratio_from_z: z must lie in (0,1)");
    }
    return agm_K(std::sqrt(1.0 - z)) / agm_K(std::sqrt(z));
}

// ---------------------------------------------------------------------------
// Triangle coordinate forms
// ---------------------------------------------------------------------------

namespace {

// Parameter of w along segment [P, Q]; throws if w is off the segment.
double segment_parameter(Complex w, Complex P, Complex Q, const char* who) {
    Complex t = (w - P) / (Q - P);
    if (std::abs(t.imag()) > 1e-9 || t.real() < -1e-9 || t.real() > 1.0 + 1e-9) {
        throw std::domain_error(std::string(who) + ": w must lie on the boundary segment");
    }
    return t.real();
}

double assert_real(Complex v, const char* who) {
    if (std::abs(v.imag()) > 1e-8) {
        throw std::domain_error(std::string(who) +
                                ": expression failed to be real on the segment");
    }
    return v.real();
}

} // namespace

double p_h_triangle(const elliptic::EquianharmonicContext& ctx, Complex w) {
    return segment_parameter(w, ctx.W0_bar(), ctx.W0(), "p_h_triangle");
}

double p_hv_triangle(const elliptic::EquianharmonicContext& ctx, Complex w) {
    segment_parameter(w, ctx.W0_bar(), ctx.W0(), "p_hv_triangle");
    Complex expr = -(3.0 * kSqrt3 / kPi) * ctx.log_sigma(w) +
                   1.5 * (w / ctx.omega2()) - 0.5;
    return assert_real(expr, "p_hv_triangle");
}

double n_h_triangle(const elliptic::EquianharmonicContext& ctx, Complex w) {
    segment_parameter(w, ctx.W0_bar(), ctx.W0(), "n_h_triangle");
    if (std::abs(w - ctx.W0()) < 1e-9) {
        throw pole_error("n_h_triangle: logarithmic divergence at C");
    }
    Complex one_minus_s = 0.5 - ctx.wp_prime(w) / Complex(0.0, 2.0);
    Complex expr = -(kSqrt3 / (4.0 * kPi)) *
                       (6.0 * ctx.log_sigma(w) + std::log(one_minus_s)) +
                   (Complex(3.0, -kSqrt3) / 4.0) * (w / ctx.omega2()) +
                   Complex(0.0, kSqrt3 / 4.0);
    return assert_real(expr, "n_h_triangle");
}

double p_surr_triangle(const elliptic::EquianharmonicContext& ctx, Complex w) {
    return segment_parameter(w, 0.0, 2.0 * ctx.omega2(), "p_surr_triangle");
}

} // namespace percross::crossing
