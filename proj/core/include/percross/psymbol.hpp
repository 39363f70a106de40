#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace percross::psymbol {

// Exact rational arithmetic for exponent bookkeeping. Values stay tiny, so
// int64 components with gcd normalization are plenty.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n);                        // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d);

    Rational operator+(Rational o) const;
    Rational operator-(Rational o) const;
    Rational operator*(Rational o) const;
    Rational operator/(Rational o) const;
    Rational operator-() const { return {-num, den}; }
    bool operator==(const Rational&) const = default;
    bool operator<(Rational o) const;

    std::string str() const;                         // "4/3", "-1/3", "2"
    static Rational parse(const std::string& text);  // inverse of str()
};

// One singular point of a Fuchsian ODE: its label and characteristic
// exponents. Labels are symbolic ("0", "1", "inf", "i", "[A]", ...); the
// tableau does not evaluate them.
struct Column {
    std::string point;
    std::vector<Rational> exponents;
};

// Riemann P-symbol: the singular points and exponents of an order-n
// Fuchsian ODE on the sphere. Logarithmic degeneracies and accessory
// parameters are deliberately not represented.
class PSymbol {
public:
    PSymbol(std::vector<Column> columns, int order);

    int order() const { return order_; }
    const std::vector<Column>& columns() const { return columns_; }
    bool empty() const { return columns_.empty(); }
    const Column* find(const std::string& point) const;

private:
    std::vector<Column> columns_;
    int order_;
};

// One branch point of a covering map: preimage label, image label, local
// multiplicity. Images absent from the symbol must be explicitly declared
// ordinary (signature 0..n-1); that keeps silent typos from passing as
// ordinary points.
struct BranchPoint {
    std::string preimage;
    std::string image;
    int multiplicity = 1;
    bool image_is_ordinary = false;
};
using BranchMap = std::vector<BranchPoint>;

// Tableau of the generalized hypergeometric ODE with the given upper
// (size q+1) and lower (size q) parameter lists: exponents {0, 1-beta_j}
// at 0, {0, 1, ..., q-1, s} at 1 with s = sum(beta) - sum(alpha), and
// {alpha_i} at infinity.
PSymbol hyper_psymbol(const std::vector<Rational>& upper,
                      const std::vector<Rational>& lower);

// Effect of multiplying solutions by (z - point)^c: adds c to the exponents
// at the named finite point and subtracts c at infinity. An infinity column
// is created from the ordinary signature if the symbol lacks one.
PSymbol shift_by_prefactor(const PSymbol& p, const std::string& point, Rational c);

// Transport along a branched cover: the column at each preimage carries the
// image's exponents times the local multiplicity; columns whose exponents
// come out exactly {0, 1, ..., n-1} are ordinary and are dropped.
PSymbol pullback(const PSymbol& p, const BranchMap& map);

// Tableau equality up to column order and within-column exponent order.
bool equals(const PSymbol& a, const PSymbol& b);

// Sum of all exponents; for a freshly constructed hypergeometric symbol
// this equals C(q+1, 2).
Rational exponent_sum(const PSymbol& p);

// Aligned text tableau in the traditional layout.
std::string render(const PSymbol& p);

} // namespace percross::psymbol
