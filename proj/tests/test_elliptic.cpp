#include <doctest.h>

#include "percross/elliptic.hpp"
#include "percross/errors.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace percross;
using namespace percross::elliptic;

namespace {
const double pi = 3.14159265358979323846;
const double rt3 = std::sqrt(3.0);

const EquianharmonicContext& ctx() {
    static EquianharmonicContext c;
    return c;
}
}

TEST_CASE("lattice constants") {
    // Gamma(1/3)^3 / (4 pi)
    CHECK(std::abs(ctx().omega2() - 1.5299540370571929) < 1e-14);
    CHECK(std::abs(ctx().W0() - Complex(1.0, 1.0 / rt3) * ctx().omega2()) < 1e-14);
    CHECK(std::abs(ctx().W0_bar() - std::conj(ctx().W0())) < 1e-14);
    CHECK(std::abs(ctx().omega() + ctx().omega_prime() - ctx().omega2()) < 1e-14);

    // Legendre relation: eta omega' - eta' omega = pi i / 2
    const Complex legendre =
        ctx().eta() * ctx().omega_prime() - ctx().eta_prime() * ctx().omega();
    CHECK(std::abs(std::abs(legendre) - pi / 2.0) < 1e-13);
}

TEST_CASE("wp at the distinguished points") {
    const double om2 = ctx().omega2();
    CHECK(std::abs(ctx().wp(om2) - std::cbrt(0.25)) < 1e-13);
    CHECK(std::abs(ctx().wp(ctx().W0())) < 1e-13);
    CHECK(std::abs(ctx().wp(ctx().W0_bar())) < 1e-13);
    CHECK(std::abs(ctx().wp_prime(ctx().W0()) - Complex(0.0, 1.0)) < 1e-12);
    CHECK(std::abs(ctx().wp_prime(ctx().W0_bar()) - Complex(0.0, -1.0)) < 1e-12);
    // wp' vanishes at the half periods
    CHECK(std::abs(ctx().wp_prime(om2)) < 1e-12);
}

TEST_CASE("differential equation on scattered points") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int kept = 0;
    while (kept < 200) {
        // random point in the fundamental triangle, away from the origin pole
        double u = unit(rng), v = unit(rng);
        if (u + v > 0.95 || u + v < 0.08) continue;
        const Complex w = u * ctx().W0() + v * ctx().W0_bar();
        const Complex p = ctx().wp(w);
        const Complex dp = ctx().wp_prime(w);
        const double scale = std::max(1.0, std::pow(std::abs(p), 3.0));
        const double res = std::abs(dp * dp - (4.0 * p * p * p - 1.0)) / scale;
        worst = std::max(worst, res);
        ++kept;
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("periodicity and parity") {
    const Complex w(0.41, 0.23);
    const Complex shift = w + 2.0 * ctx().omega() + 4.0 * ctx().omega_prime();
    CHECK(std::abs(ctx().wp(shift) - ctx().wp(w)) < 1e-12);
    CHECK(std::abs(ctx().wp_prime(shift) - ctx().wp_prime(w)) < 1e-12);
    CHECK(std::abs(ctx().wp(-w) - ctx().wp(w)) < 1e-13);
    CHECK(std::abs(ctx().wp_prime(-w) + ctx().wp_prime(w)) < 1e-13);
}

TEST_CASE("zeta values and quasi-periodicity") {
    const double om2 = ctx().omega2();
    CHECK(std::abs(ctx().zeta(om2) - pi / (2.0 * rt3 * om2)) < 1e-13);
    CHECK(std::abs(ctx().zeta(ctx().W0_bar()) -
                   Complex(pi / (2.0 * rt3 * om2), pi / (6.0 * om2))) < 1e-13);

    const Complex w(0.37, -0.18);
    CHECK(std::abs(ctx().zeta(w + 2.0 * ctx().omega()) - ctx().zeta(w) - 2.0 * ctx().eta()) <
          1e-12);
    CHECK(std::abs(ctx().zeta(w + 2.0 * ctx().omega_prime()) - ctx().zeta(w) -
                   2.0 * ctx().eta_prime()) < 1e-12);
    CHECK(std::abs(ctx().zeta(-w) + ctx().zeta(w)) < 1e-13);
}

TEST_CASE("log sigma on the fundamental triangle") {
    const double om2 = ctx().omega2();
    const Complex want(pi / (4.0 * rt3) + std::log(2.0) / 3.0 - std::log(3.0) / 4.0, 0.0);
    CHECK(std::abs(ctx().log_sigma(om2) - want) < 1e-12);
    CHECK(std::abs(ctx().log_sigma(ctx().W0_bar()) - Complex(pi / (3.0 * rt3), -pi / 6.0)) <
          1e-12);

    // d/dw log sigma = zeta, central difference
    const Complex w = 0.5 * om2 + Complex(0.1, -0.2);
    const double h = 1e-5;
    const Complex diff = (ctx().log_sigma(w + h) - ctx().log_sigma(w - h)) / (2.0 * h);
    CHECK(std::abs(diff - ctx().zeta(w)) < 1e-8);

    // real and increasing on (0, omega2]
    CHECK(ctx().log_sigma(0.3 * om2).imag() == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("lattice reduction bookkeeping") {
    const double om2 = ctx().omega2();
    const ReducedPoint a = ctx().reduce_to_fundamental(2.0 * om2 + 0.1);
    CHECK(std::abs(a.w - Complex(0.1, 0.0)) < 1e-13);
    CHECK(a.m == 1);
    CHECK(a.n == 1);

    const ReducedPoint b = ctx().reduce_to_fundamental(-2.0 * ctx().omega() + Complex(0.0, 0.2));
    CHECK(std::abs(b.w - Complex(0.0, 0.2)) < 1e-13);
    CHECK(b.m == -1);
    CHECK(b.n == 0);

    // zeta through the reduction agrees with the direct quasi-period shift
    const Complex w(0.21, 0.13);
    const Complex big = w + 4.0 * ctx().omega() - 2.0 * ctx().omega_prime();
    const Complex want = ctx().zeta(w) + 4.0 * ctx().eta() - 2.0 * ctx().eta_prime();
    CHECK(std::abs(ctx().zeta(big) - want) < 1e-12);
}

TEST_CASE("pole guard") {
    CHECK_THROWS_AS(ctx().wp(Complex(1e-12, 0.0)), pole_error);
    CHECK_THROWS_AS(ctx().zeta(2.0 * ctx().omega() + Complex(0.0, 1e-12)), pole_error);
}

TEST_CASE("homogeneity across g3") {
    const double t = 1.3;
    const EquianharmonicContext scaled(std::pow(t, -6.0));
    const Complex w(0.52, 0.31);
    CHECK(std::abs(t * t * scaled.wp(t * w) - ctx().wp(w)) < 1e-12);
    CHECK(std::abs(t * scaled.zeta(t * w) - ctx().zeta(w)) < 1e-12);
    CHECK(std::abs(scaled.omega2() - t * ctx().omega2()) < 1e-13);
}

TEST_CASE("series handoff shell is seamless") {
    // points near the outer rim of the Voronoi cell, where the corner series
    // takes over from the origin series; compare against a period translate
    // that lands well inside the origin-series region
    const double r = 0.553 * 2.0 * ctx().omega2();
    double worst = 0.0;
    for (int k = 0; k < 24; ++k) {
        const double th = (2.0 * pi * k) / 24.0 + 0.013;
        const Complex w = std::polar(r, th);
        const ReducedPoint red = ctx().reduce_to_fundamental(w);
        worst = std::max(worst, std::abs(ctx().wp(w) - ctx().wp(red.w)));
    }
    CHECK(worst < 1e-11);
}
