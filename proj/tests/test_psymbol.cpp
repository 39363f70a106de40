#include <doctest.h>

#include "percross/psymbol.hpp"

#include <stdexcept>
#include <string>

using namespace percross::psymbol;

namespace {
Rational R(std::int64_t n, std::int64_t d = 1) { return {n, d}; }

// the tableau of z^(1/3) 2F1(1/3,2/3;4/3;z): exponents {0,1/3} everywhere
PSymbol shifted_gauss() {
    return shift_by_prefactor(hyper_psymbol({R(1, 3), R(2, 3)}, {R(4, 3)}), "0", R(1, 3));
}

// the tableau of z 3F2(1,1,4/3;2,5/3;z)
PSymbol shifted_3f2() {
    return shift_by_prefactor(hyper_psymbol({R(1), R(1), R(4, 3)}, {R(2), R(5, 3)}), "0",
                              R(1));
}

const BranchMap triple_cover = {{"[A]", "inf", 3, false},
                                {"[B]", "0", 3, false},
                                {"[C]", "1", 3, false}};
}

TEST_CASE("rational arithmetic") {
    CHECK(R(2, 4) == R(1, 2));
    CHECK(R(1, -3) == R(-1, 3));
    CHECK(R(1, 3) + R(1, 6) == R(1, 2));
    CHECK(R(1, 2) * R(2, 3) == R(1, 3));
    CHECK(R(1, 3) < R(1, 2));
    CHECK(!(R(1, 2) < R(1, 3)));
    CHECK(Rational::parse("-4/6") == R(-2, 3));
    CHECK(Rational::parse(R(7, 3).str()) == R(7, 3));
    CHECK(R(5).str() == "5");
    CHECK_THROWS_AS(Rational::parse("x/y"), std::invalid_argument);
    CHECK_THROWS_AS(R(1, 0), std::invalid_argument);
}

TEST_CASE("hypergeometric tableaux") {
    const PSymbol gauss = hyper_psymbol({R(1, 3), R(2, 3)}, {R(4, 3)});
    CHECK(equals(gauss, PSymbol({{"0", {R(0), R(-1, 3)}},
                                 {"1", {R(0), R(1, 3)}},
                                 {"inf", {R(1, 3), R(2, 3)}}},
                                2)));
    CHECK(exponent_sum(gauss) == R(1));

    const PSymbol f32 = hyper_psymbol({R(1), R(1), R(4, 3)}, {R(2), R(5, 3)});
    CHECK(equals(f32, PSymbol({{"0", {R(0), R(-1), R(-2, 3)}},
                               {"1", {R(0), R(1), R(1, 3)}},
                               {"inf", {R(1), R(1), R(4, 3)}}},
                              3)));
    CHECK(exponent_sum(f32) == R(3));
}

TEST_CASE("prefactor shifts") {
    CHECK(equals(shifted_gauss(), PSymbol({{"0", {R(0), R(1, 3)}},
                                           {"1", {R(0), R(1, 3)}},
                                           {"inf", {R(0), R(1, 3)}}},
                                          2)));
    CHECK(equals(shifted_3f2(), PSymbol({{"0", {R(0), R(1, 3), R(1)}},
                                         {"1", {R(0), R(1, 3), R(1)}},
                                         {"inf", {R(0), R(1, 3), R(0)}}},
                                        3)));

    const PSymbol gauss = hyper_psymbol({R(1, 3), R(2, 3)}, {R(4, 3)});
    CHECK(equals(shift_by_prefactor(gauss, "0", R(0)), gauss));

    // a symbol without an infinity column gets one synthesized when shifting
    const PSymbol noinf({{"0", {R(0), R(1, 3)}}}, 2);
    const PSymbol shifted = shift_by_prefactor(noinf, "0", R(1, 3));
    const Column* inf = shifted.find("inf");
    REQUIRE(inf != nullptr);
    CHECK(inf->exponents[0] == R(-1, 3));
    CHECK(inf->exponents[1] == R(2, 3));
}

TEST_CASE("equality is order independent") {
    const PSymbol a = shifted_gauss();
    const PSymbol b({{"1", {R(1, 3), R(0)}},
                     {"inf", {R(1, 3), R(0)}},
                     {"0", {R(0), R(1, 3)}}},
                    2);
    CHECK(equals(a, b));
    CHECK(!equals(a, shifted_3f2()));
}

TEST_CASE("triple cover trivializes the shifted Gauss tableau") {
    CHECK(pullback(shifted_gauss(), triple_cover).empty());
}

TEST_CASE("triple cover of the shifted 3F2 tableau") {
    const PSymbol want({{"[A]", {R(0), R(1), R(0)}},
                        {"[B]", {R(0), R(1), R(3)}},
                        {"[C]", {R(0), R(1), R(3)}}},
                       3);
    CHECK(equals(pullback(shifted_3f2(), triple_cover), want));
}

TEST_CASE("quadratic map drops its ordinary column") {
    const PSymbol quad =
        shift_by_prefactor(hyper_psymbol({R(1, 2), R(2, 3)}, {R(3, 2)}), "0", R(1, 2));
    CHECK(equals(quad, PSymbol({{"0", {R(0), R(1, 2)}},
                                {"1", {R(0), R(1, 3)}},
                                {"inf", {R(0), R(1, 6)}}},
                               2)));

    const BranchMap quadmap = {{"0", "0", 2, false},
                               {"i", "1", 1, false},
                               {"-i", "1", 1, false},
                               {"inf", "inf", 2, false}};
    const PSymbol pulled = pullback(quad, quadmap);
    CHECK(equals(pulled, PSymbol({{"-i", {R(0), R(1, 3)}},
                                  {"i", {R(0), R(1, 3)}},
                                  {"inf", {R(0), R(1, 3)}}},
                                 2)));
    CHECK(pulled.find("0") == nullptr);

    // and the follow-up cover trivializes the result
    const BranchMap slit = {{"[A]", "i", 3, false},
                            {"[B]", "inf", 3, false},
                            {"[C]", "inf", 3, false}};
    CHECK(pullback(pulled, slit).empty());
}

TEST_CASE("quadratic transformation identity for 3F2") {
    const BranchMap wmap = {{"0", "0", 1, false},
                            {"inf", "0", 1, false},
                            {"1", "inf", 2, false},
                            {"-1", "1", 2, false}};
    auto run = [&](Rational a, Rational b, Rational c) {
        const PSymbol lhs = shift_by_prefactor(
            hyper_psymbol({a, b, c}, {a - b + R(1), a - c + R(1)}), "1", a);
        const PSymbol rhs = hyper_psymbol({a - b - c + R(1), a / R(2), (a + R(1)) / R(2)},
                                          {a - b + R(1), a - c + R(1)});
        CHECK(equals(pullback(rhs, wmap), lhs));
    };
    run(R(1), R(1, 3), R(1, 4));
    run(R(1, 5), R(1, 7), R(2, 9)); // fully generic exponents
}

TEST_CASE("exponent sum rule") {
    // hypergeometric symbols sum to C(q+1, 2)
    CHECK(exponent_sum(hyper_psymbol({R(1, 3), R(2, 3)}, {R(4, 3)})) == R(1));
    CHECK(exponent_sum(hyper_psymbol({R(1), R(1), R(7, 6)}, {R(2), R(5, 3)})) == R(3));
    // shifts are sum preserving
    CHECK(exponent_sum(shifted_3f2()) == R(3));
}

TEST_CASE("ordinary points under pullback") {
    // multiplicity 1 over an ordinary signature stays ordinary
    const PSymbol ordsym({{"1", {R(0), R(1), R(2)}}}, 3);
    CHECK(pullback(ordsym, {{"w0", "1", 1, false}}).empty());

    // higher multiplicity over a declared-ordinary image leaves a real column
    const PSymbol kept = pullback(shifted_3f2(), {{"w0", "2", 2, true}});
    REQUIRE(kept.find("w0") != nullptr);
    CHECK(kept.find("w0")->exponents[1] == R(2));

    // but an undeclared image absent from the symbol is an error
    CHECK_THROWS_AS(pullback(shifted_gauss(), BranchMap{{"w0", "2", 1, false}}),
                    std::invalid_argument);
}

TEST_CASE("construction and shift guards") {
    CHECK_THROWS_AS(PSymbol({{"0", {R(0)}}, {"0", {R(1)}}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(PSymbol({{"0", {R(0), R(1)}}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(shift_by_prefactor(shifted_gauss(), "3/4", R(1)), std::invalid_argument);
}

TEST_CASE("rendered tableaux") {
    CHECK(render(shifted_gauss()) ==
          "P{ 0     1     inf\n"
          "   ---------------\n"
          "   1/3   0     0\n"
          "   0     1/3   1/3 }\n");

    // constructed directly so the row order is pinned
    const PSymbol branch({{"[A]", {R(0), R(1), R(0)}},
                          {"[B]", {R(0), R(1), R(3)}},
                          {"[C]", {R(0), R(1), R(3)}}},
                         3);
    CHECK(render(branch) ==
          "P{ [A]   [B]   [C]\n"
          "   ---------------\n"
          "   0     0     0\n"
          "   1     1     1\n"
          "   0     3     3 }\n");

    CHECK(render(pullback(shifted_gauss(), triple_cover)) == "P{ }\n");
}
