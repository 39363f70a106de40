#include "percross/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "percross/errors.hpp"

namespace percross::conformal {

namespace {

const Complex kHalfI(0.0, 0.5);

// Barycentric membership test with a relative slack.
bool in_triangle(Complex w, Complex B, Complex C, double slack) {
    double det = B.real() * C.imag() - C.real() * B.imag();
    double u = (w.real() * C.imag() - w.imag() * C.real()) / det;
    double v = (w.imag() * B.real() - w.real() * B.imag()) / det;
    return u >= -slack && v >= -slack && u + v <= 1.0 + slack;
}

} // namespace

TriangleDomain triangle(const elliptic::EquianharmonicContext& ctx) {
    TriangleDomain t;
    t.A = 0.0;
    t.B = ctx.W0_bar();
    t.C = ctx.W0();
    t.side = std::abs(t.C - t.B);
    t.midpoint = 0.5 * (t.B + t.C);
    return t;
}

IsoscelesDomain isosceles(const elliptic::EquianharmonicContext& ctx) {
    IsoscelesDomain t;
    t.A = ctx.W0();
    t.B = 0.0;
    t.C = 2.0 * ctx.omega2();
    return t;
}

Complex schwarz_S(const elliptic::EquianharmonicContext& ctx, Complex w) {
    return 0.5 + ctx.wp_prime(w) / Complex(0.0, 2.0);
}

Complex schwarz_R(const elliptic::EquianharmonicContext& ctx, Complex w) {
    return ctx.wp_prime(w);
}

Complex schwarz_inverse(const elliptic::EquianharmonicContext& ctx, Complex z) {
    if (z.imag() < -1e-9) {
        throw std::domain_error("schwarz_inverse: z must lie in the closed upper half plane");
    }
    TriangleDomain tri = triangle(ctx);
    const Complex B = tri.B, C = tri.C;
    const double rho = std::abs(B);

    if (std::abs(z) <= 1e-8) return B;
    if (std::abs(z - 1.0) <= 1e-8) return C;

    // Seed list, most promising first.
    std::vector<Complex> seeds;
    bool on_axis = std::abs(z.imag()) <= 1e-9;
    if (on_axis && z.real() > 0.0 && z.real() < 1.0) {
        seeds.push_back(B + z.real() * (C - B));
    } else if (on_axis && z.real() <= 0.0) {
        // Near A the map behaves as 1/2 + i/w^3; invert that along edge AB.
        double t = std::cbrt(1.0 / (rho * rho * rho * (0.5 - z.real())));
        seeds.push_back(std::clamp(t, 0.05, 0.95) * B);
    } else if (on_axis) {
        double t = std::cbrt(1.0 / (rho * rho * rho * (z.real() - 0.5)));
        seeds.push_back(std::clamp(t, 0.05, 0.95) * C);
    }
    Complex barycenter = (B + C) / 3.0;
    seeds.push_back(barycenter);
    for (double su : {0.15, 0.45, 0.8}) {
        for (double sv : {0.15, 0.45, 0.8}) {
            if (su + sv < 1.0) seeds.push_back(su * B + sv * C);
        }
    }

    const double target = 1e-12 * std::max(1.0, std::abs(z));
    const double accept = 1e-10 * std::max(1.0, std::abs(z));
    Complex best_w = barycenter;
    double best_r = 1e300;

    for (std::size_t si = 0; si < seeds.size(); ++si) {
        Complex w = seeds[si];
        bool damped_start = std::abs(w - barycenter) < 1e-12 || si > 0;
        double resid = 1e300;
        try {
            resid = std::abs(schwarz_S(ctx, w) - z);
        } catch (const pole_error&) {
            continue;
        }
        for (int it = 0; it < 100 && resid > target; ++it) {
            Complex p, val;
            try {
                p = ctx.wp(w);
                val = schwarz_S(ctx, w) - z;
            } catch (const pole_error&) {
                break;
            }
            Complex deriv = Complex(0.0, -3.0) * p * p;
            if (std::abs(deriv) < 1e-300) break;
            Complex step = val / deriv;
            double lambda = (damped_start && it < 10) ? 0.5 : 1.0;
            // Backtrack if the full step makes things worse.
            Complex w_new;
            double r_new = 1e300;
            for (int bt = 0; bt < 8; ++bt) {
                w_new = w - lambda * step;
                try {
                    r_new = std::abs(schwarz_S(ctx, w_new) - z);
                } catch (const pole_error&) {
                    r_new = 1e300;
                }
                if (r_new < resid * (1.0 + 1e-12)) break;
                lambda *= 0.5;
            }
            if (r_new >= resid && resid < accept) break;
            w = w_new;
            resid = r_new;
        }
        if (resid < best_r) {
            best_r = resid;
            best_w = w;
        }
        if (best_r <= target) break;
    }

    if (best_r > accept) {
        throw non_convergence_error("schwarz_inverse: Newton iteration failed to converge");
    }

    // Fold into the triangle using the invariances of S: rotation by 2pi/3
    // about 0 and period translations.
    const Complex rot = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);
    for (Complex r : {Complex(1.0, 0.0), rot, rot * rot}) {
        Complex cand = best_w * r;
        cand = ctx.reduce_to_fundamental(cand).w;
        // reduce_to_fundamental centers on the parallelogram; also try the
        // neighbouring translates to reach the triangle's copy.
        for (Complex shift : {Complex(0.0), 2.0 * ctx.omega(), 2.0 * ctx.omega_prime(),
                              2.0 * (ctx.omega() + ctx.omega_prime()),
                              -2.0 * ctx.omega(), -2.0 * ctx.omega_prime(),
                              -2.0 * (ctx.omega() + ctx.omega_prime())}) {
            Complex c2 = cand + shift;
            if (in_triangle(c2, B, C, 1e-7)) {
                return c2;
            }
        }
    }
    // Converged but could not identify the triangle representative.
    throw non_convergence_error("schwarz_inverse: converged outside the fundamental triangle");
}

} // namespace percross::conformal
