#include "percross/psymbol.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace percross::psymbol {

Rational::Rational(std::int64_t n) : num(n), den(1) {}

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
}

Rational Rational::operator+(Rational o) const {
    return {num * o.den + o.num * den, den * o.den};
}
Rational Rational::operator-(Rational o) const {
    return {num * o.den - o.num * den, den * o.den};
}
Rational Rational::operator*(Rational o) const { return {num * o.num, den * o.den}; }
Rational Rational::operator/(Rational o) const {
    if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
    return {num * o.den, den * o.num};
}
bool Rational::operator<(Rational o) const { return num * o.den < o.num * den; }

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::parse(const std::string& text) {
    std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) return {std::stoll(text)};
        return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("Rational: cannot parse '" + text + "'");
    }
}

PSymbol::PSymbol(std::vector<Column> columns, int order)
    : columns_(std::move(columns)), order_(order) {
    if (order_ < 1) throw std::invalid_argument("PSymbol: order must be positive");
    std::set<std::string> seen;
    for (const Column& c : columns_) {
        if (static_cast<int>(c.exponents.size()) != order_) {
            throw std::invalid_argument("PSymbol: column '" + c.point + "' has " +
                                        std::to_string(c.exponents.size()) +
                                        " exponents, expected " + std::to_string(order_));
        }
        if (!seen.insert(c.point).second) {
            throw std::invalid_argument("PSymbol: duplicate column '" + c.point + "'");
        }
    }
}

const Column* PSymbol::find(const std::string& point) const {
    for (const Column& c : columns_) {
        if (c.point == point) return &c;
    }
    return nullptr;
}

PSymbol hyper_psymbol(const std::vector<Rational>& upper,
                      const std::vector<Rational>& lower) {
    if (upper.size() != lower.size() + 1 || lower.empty()) {
        throw std::invalid_argument("hyper_psymbol: need q+1 upper and q >= 1 lower parameters");
    }
    int q = static_cast<int>(lower.size());
    Column at0{"0", {Rational(0)}};
    for (const Rational& b : lower) at0.exponents.push_back(Rational(1) - b);
    Column at1{"1", {}};
    for (int k = 0; k < q; ++k) at1.exponents.push_back(Rational(k));
    Rational s(0);
    for (const Rational& b : lower) s = s + b;
    for (const Rational& a : upper) s = s - a;
    at1.exponents.push_back(s);
    Column atInf{"inf", upper};
    return PSymbol({at0, at1, atInf}, q + 1);
}

namespace {

std::vector<Rational> ordinary_signature(int n) {
    std::vector<Rational> sig;
    sig.reserve(n);
    for (int k = 0; k < n; ++k) sig.emplace_back(k);
    return sig;
}

bool is_ordinary(std::vector<Rational> exps) {
    std::sort(exps.begin(), exps.end());
    return exps == ordinary_signature(static_cast<int>(exps.size()));
}

} // namespace

PSymbol shift_by_prefactor(const PSymbol& p, const std::string& point, Rational c) {
    if (point == "inf") {
        throw std::invalid_argument("shift_by_prefactor: shift at a finite point; "
                                    "infinity absorbs the opposite shift");
    }
    std::vector<Column> cols = p.columns();
    bool found = false, found_inf = false;
    for (Column& col : cols) {
        if (col.point == point) {
            for (Rational& e : col.exponents) e = e + c;
            found = true;
        } else if (col.point == "inf") {
            for (Rational& e : col.exponents) e = e - c;
            found_inf = true;
        }
    }
    if (!found) {
        throw std::invalid_argument("shift_by_prefactor: unknown point '" + point + "'");
    }
    if (!found_inf) {
        Column inf{"inf", ordinary_signature(p.order())};
        for (Rational& e : inf.exponents) e = e - c;
        cols.push_back(inf);
    }
    return PSymbol(std::move(cols), p.order());
}

PSymbol pullback(const PSymbol& p, const BranchMap& map) {
    std::vector<Column> cols;
    for (const BranchPoint& bp : map) {
        if (bp.multiplicity < 1) {
            throw std::invalid_argument("pullback: multiplicity must be >= 1");
        }
        const Column* image = p.find(bp.image);
        std::vector<Rational> exps;
        if (image != nullptr) {
            exps = image->exponents;
        } else if (bp.image_is_ordinary) {
            exps = ordinary_signature(p.order());
        } else {
            throw std::invalid_argument("pullback: image point '" + bp.image +
                                        "' is not in the symbol and not declared ordinary");
        }
        for (Rational& e : exps) e = e * Rational(bp.multiplicity);
        if (!is_ordinary(exps)) {
            cols.push_back({bp.preimage, std::move(exps)});
        }
    }
    return PSymbol(std::move(cols), p.order());
}

bool equals(const PSymbol& a, const PSymbol& b) {
    if (a.order() != b.order() || a.columns().size() != b.columns().size()) return false;
    auto canon = [](const PSymbol& p) {
        std::vector<Column> cols = p.columns();
        for (Column& c : cols) std::sort(c.exponents.begin(), c.exponents.end());
        std::sort(cols.begin(), cols.end(),
                  [](const Column& x, const Column& y) { return x.point < y.point; });
        return cols;
    };
    std::vector<Column> ca = canon(a), cb = canon(b);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].point != cb[i].point || ca[i].exponents != cb[i].exponents) return false;
    }
    return true;
}

Rational exponent_sum(const PSymbol& p) {
    Rational s(0);
    for (const Column& c : p.columns()) {
        for (const Rational& e : c.exponents) s = s + e;
    }
    return s;
}

std::string render(const PSymbol& p) {
    if (p.empty()) return "P{ }\n";
    std::size_t ncols = p.columns().size();
    std::vector<std::size_t> width(ncols);
    for (std::size_t j = 0; j < ncols; ++j) {
        width[j] = p.columns()[j].point.size();
        for (const Rational& e : p.columns()[j].exponents) {
            width[j] = std::max(width[j], e.str().size());
        }
    }
    std::ostringstream out;
    auto row = [&](const std::vector<std::string>& cells, const char* lead,
                   const char* tail) {
        out << lead;
        for (std::size_t j = 0; j < ncols; ++j) {
            out << cells[j];
            if (j + 1 < ncols) out << std::string(width[j] - cells[j].size() + 3, ' ');
        }
        out << tail << "\n";
    };
    std::vector<std::string> cells;
    for (const Column& c : p.columns()) cells.push_back(c.point);
    row(cells, "P{ ", "");
    std::size_t rule = 0;
    for (std::size_t j = 0; j < ncols; ++j) rule += width[j] + (j + 1 < ncols ? 3 : 0);
    out << "   " << std::string(rule, '-') << "\n";
    for (int i = 0; i < p.order(); ++i) {
        cells.clear();
        for (const Column& c : p.columns()) cells.push_back(c.exponents[i].str());
        row(cells, "   ", i + 1 == p.order() ? " }" : "");
    }
    return out.str();
}

} // namespace percross::psymbol
