#include <doctest.h>

#include "percross/conformal.hpp"
#include "percross/elliptic.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace percross;
using namespace percross::conformal;
using Complex = std::complex<double>;

namespace {
const elliptic::EquianharmonicContext& ctx() {
    static elliptic::EquianharmonicContext c;
    return c;
}
}

TEST_CASE("domain anchors") {
    const TriangleDomain tri = triangle(ctx());
    CHECK(std::abs(tri.A) == 0.0);
    CHECK(std::abs(tri.B - ctx().W0_bar()) < 1e-15);
    CHECK(std::abs(tri.C - ctx().W0()) < 1e-15);
    CHECK(std::abs(tri.midpoint - ctx().omega2()) < 1e-13);
    CHECK(std::abs(tri.side - std::abs(tri.C - tri.B)) < 1e-15);

    CHECK(std::abs(schwarz_S(ctx(), ctx().omega2()) - 0.5) < 1e-13);
    CHECK(std::abs(schwarz_S(ctx(), tri.B) - 0.0) < 1e-13);
    CHECK(std::abs(schwarz_S(ctx(), tri.C) - 1.0) < 1e-13);

    const IsoscelesDomain iso = isosceles(ctx());
    CHECK(std::abs(iso.B) == 0.0);
    CHECK(std::abs(iso.C - 2.0 * ctx().omega2()) < 1e-15);
    CHECK(std::abs(schwarz_R(ctx(), ctx().W0()) - Complex(0.0, 1.0)) < 1e-13);
    CHECK(std::abs(schwarz_R(ctx(), ctx().W0_bar()) - Complex(0.0, -1.0)) < 1e-13);
    CHECK(std::abs(schwarz_R(ctx(), ctx().omega2())) < 1e-13);
}

TEST_CASE("base edge maps onto the unit interval, monotonically") {
    const TriangleDomain tri = triangle(ctx());
    double prev = -1.0;
    for (int k = 1; k < 50; ++k) {
        const double t = k / 50.0;
        const Complex w = tri.B + t * (tri.C - tri.B);
        const Complex z = schwarz_S(ctx(), w);
        CHECK(std::abs(z.imag()) < 1e-10);
        CHECK(z.real() > prev);
        CHECK(z.real() > -1e-10);
        CHECK(z.real() < 1.0 + 1e-10);
        prev = z.real();
    }
}

TEST_CASE("interior points land in the open upper half plane") {
    const TriangleDomain tri = triangle(ctx());
    for (double u : {0.2, 0.45, 0.7}) {
        for (double v : {0.1, 0.3}) {
            if (u + v >= 0.95) continue;
            const Complex w = u * tri.B + v * tri.C; // barycentric, A at 0
            CHECK(schwarz_S(ctx(), w).imag() > 0.0);
        }
    }
}

TEST_CASE("inverse hits the anchors") {
    CHECK(std::abs(schwarz_inverse(ctx(), 0.5) - ctx().omega2()) < 1e-10);
    CHECK(std::abs(schwarz_inverse(ctx(), 0.0) - ctx().W0_bar()) < 1e-12);
    CHECK(std::abs(schwarz_inverse(ctx(), 1.0) - ctx().W0()) < 1e-12);
}

TEST_CASE("round trip through the interval") {
    double worst = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double z = k / 41.0;
        const Complex w = schwarz_inverse(ctx(), z);
        worst = std::max(worst, std::abs(schwarz_S(ctx(), w) - z));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("round trip on the real axis outside [0, 1]") {
    for (double z : {-5.0, -2.0, -0.3, -0.01, 1.01, 1.7, 4.0, 20.0}) {
        const Complex w = schwarz_inverse(ctx(), z);
        const double rel = std::abs(schwarz_S(ctx(), w) - z) / std::max(1.0, std::abs(z));
        CHECK(rel < 1e-10);
    }
}

TEST_CASE("round trip across the upper half plane") {
    double worst = 0.0;
    for (double x : {-1.5, -0.4, 0.1, 0.5, 0.9, 1.4, 3.0}) {
        for (double y : {0.05, 0.4, 1.0, 2.5, 8.0}) {
            const Complex z(x, y);
            const Complex w = schwarz_inverse(ctx(), z);
            const double rel = std::abs(schwarz_S(ctx(), w) - z) / std::max(1.0, std::abs(z));
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("round trip started from w space") {
    const TriangleDomain tri = triangle(ctx());
    double worst = 0.0;
    for (double u : {0.15, 0.35, 0.6})
        for (double v : {0.12, 0.28, 0.5}) {
            if (u + v >= 0.9) continue;
            const Complex w = u * tri.B + v * tri.C;
            const Complex back = schwarz_inverse(ctx(), schwarz_S(ctx(), w));
            worst = std::max(worst, std::abs(back - w));
        }
    CHECK(worst < 1e-9);
}

TEST_CASE("lower half plane is rejected") {
    CHECK_THROWS_AS(schwarz_inverse(ctx(), Complex(0.4, -0.5)), std::domain_error);
}
