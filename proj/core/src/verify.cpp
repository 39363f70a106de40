#include "percross/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>

#include "percross/conformal.hpp"
#include "percross/crossing.hpp"
#include "percross/elliptic.hpp"
#include "percross/percsim.hpp"
#include "percross/psymbol.hpp"
#include "percross/specfun.hpp"

namespace percross::verify {

namespace {

using Complex = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;

Check make(const char* suite, std::string name, double residual, double bound) {
    Check c;
    c.suite = suite;
    c.name = std::move(name);
    c.residual = residual;
    c.bound = bound;
    c.pass = std::isfinite(residual) && residual <= bound;
    return c;
}

Check make_exact(const char* suite, std::string name, bool ok) {
    return make(suite, std::move(name), ok ? 0.0 : 1.0, 0.0);
}

double phv_half_closed_form() {
    return 0.25 + kSqrt3 / (4.0 * kPi) * (3.0 * std::log(3.0) - 4.0 * std::log(2.0));
}

} // namespace

std::vector<Check> identities(const Options& opt) {
    const char* S = "identities";
    std::vector<Check> out;

    out.push_back(make(S, "p_h(1/2) = 1/2", std::abs(crossing::p_h(0.5) - 0.5), 1e-12));
    out.push_back(make(S, "p_hv(1/2) closed form",
                       std::abs(crossing::p_hv(0.5) - phv_half_closed_form()), 1e-11));
    const double nh_half =
        0.375 + kSqrt3 / (8.0 * kPi) * (3.0 * std::log(3.0) - 2.0 * std::log(2.0));
    out.push_back(make(S, "n_h(1/2) closed form",
                       std::abs(crossing::n_h(0.5) - nh_half), 1e-11));

    elliptic::EquianharmonicContext ctx;
    const Complex w_mid(ctx.omega2(), 0.0);
    out.push_back(make(S, "p_hv(1/2): series route vs elliptic route",
                       std::abs(crossing::p_hv(0.5) - crossing::p_hv_triangle(ctx, w_mid)),
                       1e-10));
    out.push_back(make(S, "n_h(1/2): series route vs elliptic route",
                       std::abs(crossing::n_h(0.5) - crossing::n_h_triangle(ctx, w_mid)),
                       1e-10));

    const int n = std::max(2, opt.grid);
    double worst_linear = 0.0, worst_dual = 0.0;
    for (int k = 0; k < n; ++k) {
        const double z = 0.05 + 0.90 * k / (n - 1);
        worst_linear = std::max(worst_linear, crossing::identity_residual(z));
        worst_dual =
            std::max(worst_dual, std::abs(crossing::p_h(z) + crossing::p_h(1.0 - z) - 1.0));
    }
    out.push_back(make(S, "n_h linear relation on grid", worst_linear, 1e-9));
    out.push_back(make(S, "duality p_h(z) + p_h(1-z) = 1", worst_dual, 1e-12));

    out.push_back(make(S, "aspect ratio 1 gives z = 1/2",
                       std::abs(crossing::aspect_ratio_to_z(1.0) - 0.5), 1e-12));
    double worst_aspect = 0.0;
    for (double r : {0.5, 0.8, 1.0, 1.25, 2.0})
        worst_aspect = std::max(
            worst_aspect,
            std::abs(crossing::aspect_ratio_from_z(crossing::aspect_ratio_to_z(r)) - r));
    out.push_back(make(S, "aspect ratio round trip", worst_aspect, 1e-9));
    return out;
}

std::vector<Check> whipple(const Options& opt) {
    const char* S = "whipple";
    std::vector<Check> out;

    // Route p_hv(1/2) through the second quadratic transform: the 3F2 at
    // z = 1/2 becomes half its unit-argument value, which has a digamma
    // closed form. The chain must land back on the pinned constant.
    const Complex unit = specfun::threeF2_unit_value(7.0 / 6.0, 5.0 / 3.0);
    const double chain_phbv = kSqrt3 / (2.0 * kPi) * 0.5 * (0.5 * unit.real());
    const double chain_phv = crossing::p_h(0.5) - chain_phbv;
    out.push_back(make(S, "digamma chain reproduces p_hv(1/2)",
                       std::abs(chain_phv - phv_half_closed_form()), 1e-10));

    out.push_back(make(S, "second transform on its boundary circle (w = 1/2)",
                       specfun::whipple2_residual(1.0, 1.0, 4.0 / 3.0, 0.5), 1e-10));

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> par(0.15, 0.85);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> rad(0.02, 0.12);
    double worst1 = 0.0, worst2 = 0.0;
    for (int s = 0; s < std::max(1, opt.samples); ++s) {
        const double a = 0.3 + 1.2 * par(rng);
        const double b = par(rng), c = par(rng);
        worst1 = std::max(worst1,
                          specfun::whipple_residual(a, b, c, std::polar(rad(rng), ang(rng))));
        const double b2 = 0.3 + par(rng), c2 = 0.3 + par(rng);
        worst2 = std::max(worst2, specfun::whipple2_residual(
                                      1.0, b2, c2, std::polar(rad(rng), ang(rng))));
    }
    out.push_back(make(S, "first transform, sampled parameters", worst1, 1e-10));
    out.push_back(make(S, "second transform, sampled parameters", worst2, 1e-10));

    out.push_back(make(S, "first transform at rational parameters",
                       specfun::whipple_residual(1.0, 1.0 / 3.0, 0.25, Complex(0.10, 0.05)),
                       1e-11));
    return out;
}

std::vector<Check> elliptic_core(const Options&) {
    const char* S = "elliptic";
    std::vector<Check> out;
    elliptic::EquianharmonicContext ctx;

    // Differential identity on a 200-point barycentric grid over the
    // fundamental triangle (0, W0_bar, W0), keeping four lattice steps of
    // margin from the pole at the origin corner.
    const int n = 26;
    double worst = 0.0;
    int counted = 0;
    for (int i = 4; i <= n - 4 && counted < 200; ++i)
        for (int j = 1; j <= n - i - 1 && counted < 200; ++j) {
            const int k = n - i - j;
            const Complex w =
                (static_cast<double>(j) * ctx.W0_bar() + static_cast<double>(k) * ctx.W0()) /
                static_cast<double>(n);
            const Complex p = ctx.wp(w);
            const Complex q = ctx.wp_prime(w);
            worst = std::max(worst, std::abs(q * q - (4.0 * p * p * p - 1.0)));
            ++counted;
        }
    out.push_back(make(S, "wp differential identity on triangle grid", worst, 1e-10));

    out.push_back(make(S, "wp at the real half period",
                       std::abs(ctx.wp(Complex(ctx.omega2(), 0.0)) - std::pow(4.0, -1.0 / 3.0)),
                       1e-12));
    out.push_back(make(S, "wp_prime at the triangle vertex W0",
                       std::abs(ctx.wp_prime(ctx.W0()) - Complex(0.0, 1.0)), 1e-11));
    const double logsig =
        kPi / (4.0 * kSqrt3) + std::log(2.0) / 3.0 - std::log(3.0) / 4.0;
    out.push_back(make(S, "log sigma at the real half period",
                       std::abs(ctx.log_sigma(Complex(ctx.omega2(), 0.0)) - logsig), 1e-11));

    const double anchors =
        std::max({std::abs(conformal::schwarz_S(ctx, Complex(ctx.omega2(), 0.0)) - 0.5),
                  std::abs(conformal::schwarz_S(ctx, ctx.W0_bar()) - 0.0),
                  std::abs(conformal::schwarz_S(ctx, ctx.W0()) - 1.0)});
    out.push_back(make(S, "schwarz map anchors", anchors, 1e-10));

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.10, 0.75);
    double round_trip = 0.0;
    int made = 0;
    while (made < 20) {
        const double r1 = u(rng), r2 = u(rng);
        if (r1 + r2 > 0.85) continue;
        const Complex w = r1 * ctx.W0_bar() + r2 * ctx.W0();
        const Complex back = conformal::schwarz_inverse(ctx, conformal::schwarz_S(ctx, w));
        round_trip = std::max(round_trip, std::abs(back - w));
        ++made;
    }
    out.push_back(make(S, "schwarz round trip on interior points", round_trip, 1e-9));
    return out;
}

std::vector<Check> psymbol_identities() {
    const char* S = "psymbol";
    std::vector<Check> out;
    using namespace percross::psymbol;
    using R = Rational;

    const PSymbol second = shift_by_prefactor(
        hyper_psymbol({R(1, 3), R(2, 3)}, {R(4, 3)}), "0", R(1, 3));
    const PSymbol third = shift_by_prefactor(
        hyper_psymbol({R(1), R(1), R(4, 3)}, {R(2), R(5, 3)}), "0", R(1));

    const BranchMap triple = {{"[A]", "inf", 3, false},
                              {"[B]", "0", 3, false},
                              {"[C]", "1", 3, false}};
    out.push_back(make_exact(S, "triangle pullback of the p_h tableau is trivial",
                             pullback(second, triple).empty()));

    const PSymbol pulled = pullback(third, triple);
    const PSymbol pulled_expected({{"[A]", {R(0), R(1), R(0)}},
                                   {"[B]", {R(0), R(1), R(3)}},
                                   {"[C]", {R(0), R(1), R(3)}}},
                                  3);
    out.push_back(make_exact(S, "triangle pullback of the p_hv tableau",
                             equals(pulled, pulled_expected)));

    const PSymbol quad_lhs = shift_by_prefactor(
        hyper_psymbol({R(1, 2), R(2, 3)}, {R(3, 2)}), "0", R(1, 2));
    const BranchMap quadmap = {{"0", "0", 2, false},
                               {"i", "1", 1, false},
                               {"-i", "1", 1, false},
                               {"inf", "inf", 2, false}};
    const PSymbol quad_rhs = pullback(quad_lhs, quadmap);
    const PSymbol quad_expected({{"-i", {R(0), R(1, 3)}},
                                 {"i", {R(0), R(1, 3)}},
                                 {"inf", {R(0), R(1, 3)}}},
                                2);
    out.push_back(make_exact(S, "quadratic tableau with the origin column dropped",
                             equals(quad_rhs, quad_expected) &&
                                 quad_rhs.find("0") == nullptr));

    const BranchMap slit = {{"[A]", "i", 3, false},
                            {"[B]", "inf", 3, false},
                            {"[C]", "inf", 3, false}};
    out.push_back(make_exact(S, "slit-plane pullback of the quadratic tableau is trivial",
                             pullback(quad_rhs, slit).empty()));

    const BranchMap wmap = {{"0", "0", 1, false},
                            {"inf", "0", 1, false},
                            {"1", "inf", 2, false},
                            {"-1", "1", 2, false}};
    bool long_ok = true;
    for (const auto& [a, b, c] : {std::tuple<R, R, R>{R(1), R(1, 3), R(1, 4)},
                                  std::tuple<R, R, R>{R(1, 5), R(1, 7), R(2, 9)}}) {
        const PSymbol lhs = shift_by_prefactor(
            hyper_psymbol({a, b, c}, {a - b + R(1), a - c + R(1)}), "1", a);
        const PSymbol rhs = hyper_psymbol(
            {a - b - c + R(1), a / R(2), (a + R(1)) / R(2)},
            {a - b + R(1), a - c + R(1)});
        long_ok = long_ok && equals(pullback(rhs, wmap), lhs);
    }
    out.push_back(make_exact(S, "quadratic transform tableau equality", long_ok));

    const bool sums_ok =
        exponent_sum(hyper_psymbol({R(1, 3), R(2, 3)}, {R(4, 3)})) == R(1) &&
        exponent_sum(hyper_psymbol({R(1), R(1), R(4, 3)}, {R(2), R(5, 3)})) == R(3);
    out.push_back(make_exact(S, "exponent sums for the two series shapes", sums_ok));
    return out;
}

std::vector<Check> ode_residuals() {
    const char* S = "ode-residuals";
    std::vector<Check> out;
    using crossing::CrossingFunction;
    using crossing::FuchsianOrder;

    double worst_h = 0.0, worst_hv = 0.0;
    for (double z : {0.3, 0.5, 0.7}) {
        worst_h = std::max(worst_h, crossing::fuchsian_residual(
                                        FuchsianOrder::third_order,
                                        CrossingFunction::horizontal, z));
        worst_hv = std::max(worst_hv, crossing::fuchsian_residual(
                                          FuchsianOrder::third_order,
                                          CrossingFunction::horizontal_vertical, z));
    }
    out.push_back(make(S, "third-order operator annihilates p_h", worst_h, 1e-5));
    out.push_back(make(S, "third-order operator annihilates p_hv", worst_hv, 1e-5));

    out.push_back(make(S, "fifth-order operator annihilates n_h at z = 1/2",
                       crossing::fuchsian_residual(FuchsianOrder::fifth_order,
                                                   CrossingFunction::cluster_count, 0.5),
                       1e-3));
    out.push_back(make(S, "fifth-order operator annihilates p_h at z = 1/2",
                       crossing::fuchsian_residual(FuchsianOrder::fifth_order,
                                                   CrossingFunction::horizontal, 0.5),
                       1e-3));
    out.push_back(make(S, "fifth-order operator annihilates p_hv at z = 1/2",
                       crossing::fuchsian_residual(FuchsianOrder::fifth_order,
                                                   CrossingFunction::horizontal_vertical, 0.5),
                       1e-3));
    return out;
}

std::vector<Check> simulation_invariants() {
    const char* S = "simulation";
    std::vector<Check> out;
    using namespace percross::percsim;

    LatticeRun cfg;
    cfg.geometry = Geometry::rectangle;
    cfg.side_sites = 16;
    cfg.seed = 4242;
    const Lattice lat = Lattice::build(cfg);
    const std::uint8_t need =
        static_cast<std::uint8_t>((1u << lat.h_seg_a) | (1u << lat.h_seg_b));

    bool partition_ok = true, implications_ok = true;
    std::vector<std::uint8_t> open;
    for (long t = 0; t < 40; ++t) {
        sample_sites(lat, cfg, t, open);
        const std::vector<int> labels = cluster_labels(lat, open);
        int nlabels = 0;
        for (int l : labels) nlabels = std::max(nlabels, l + 1);
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(nlabels), 0);
        for (int u = 0; u < lat.sites(); ++u)
            if (labels[u] >= 0 && lat.segment[u] >= 0)
                mask[labels[u]] |= static_cast<std::uint8_t>(1u << lat.segment[u]);
        bool h2 = false, hv2 = false;
        int count2 = 0;
        for (std::uint8_t m : mask) {
            if ((m & need) == need) {
                h2 = true;
                ++count2;
            }
            if (m == 0x0f) hv2 = true;
        }
        const bool h = crossing_h(lat, open);
        const bool hv = crossing_hv(lat, open);
        const int count = crossing_count(lat, open);
        partition_ok = partition_ok && h == h2 && hv == hv2 && count == count2;
        implications_ok = implications_ok && (!hv || h) && ((count >= 1) == h);
    }
    out.push_back(make_exact(S, "crossing events match the flood-fill relabeling (L = 16)",
                             partition_ok));
    out.push_back(make_exact(S, "event implications on sampled configurations",
                             implications_ok));

    LatticeRun base;
    base.geometry = Geometry::rectangle;
    base.side_sites = 16;
    base.trials = 2000;
    base.seed = 99;
    base.workers = 1;
    const auto e1 = run(base);
    base.workers = 2;
    const auto e2 = run(base);
    base.workers = 8;
    const auto e8 = run(base);
    bool same = e1.size() == e2.size() && e1.size() == e8.size();
    for (std::size_t i = 0; same && i < e1.size(); ++i)
        same = e1[i].digest == e2[i].digest && e1[i].digest == e8[i].digest &&
               e1[i].mean == e2[i].mean && e1[i].mean == e8[i].mean &&
               e1[i].std_error == e2[i].std_error && e1[i].std_error == e8[i].std_error;
    out.push_back(make_exact(S, "bit-identical across 1, 2, 8 workers", same));
    return out;
}

std::vector<Check> all(const Options& opt) {
    std::vector<Check> out = identities(opt);
    auto append = [&out](std::vector<Check> more) {
        out.insert(out.end(), std::make_move_iterator(more.begin()),
                   std::make_move_iterator(more.end()));
    };
    append(whipple(opt));
    append(elliptic_core(opt));
    append(psymbol_identities());
    append(ode_residuals());
    append(simulation_invariants());
    return out;
}

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.pass; });
}

} // namespace percross::verify
