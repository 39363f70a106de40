#include "percross/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "percross/errors.hpp"

namespace percross::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_nonpositive_integer(Complex z, double tol = 1e-12) {
    if (std::abs(z.imag()) > tol) return false;
    double n = std::round(z.real());
    return n <= 0.5 && std::abs(z.real() - n) <= tol;
}

} // namespace

// ---------------------------------------------------------------------------
// Gamma family
// ---------------------------------------------------------------------------

Complex log_gamma(Complex z) {
    // Lanczos, g = 7, kmax = 8 coefficient set.
    static constexpr std::array<double, 9> c = {
        0.99999999999980993227684700473478,
        676.520368121885098567009190444019,
        -1259.13921672240287047156078755283,
        771.3234287776530788486528258894,
        -176.61502916214059906584551354,
        12.507343278686904814458936853,
        -0.13857109526572011689554707,
        9.984369578019570859563e-6,
        1.50563273514931155834e-7,
    };
    constexpr double log_root_two_pi = 0.91893853320467274178;

    if (is_nonpositive_integer(z)) {
        throw std::domain_error("log_gamma: pole at nonpositive integer");
    }
    if (z.real() < 0.5) {
        // Reflection through sin(pi z); principal logs, so the imaginary part
        // is only defined mod 2*pi (exp of the result is always right).
        return std::log(kPi / std::sin(kPi * z)) - log_gamma(1.0 - z);
    }
    Complex x = z - 1.0;
    Complex ag = c[0];
    for (int k = 1; k <= 8; ++k) {
        ag += c[k] / (x + static_cast<double>(k));
    }
    Complex t = x + 7.5;
    return log_root_two_pi + (x + 0.5) * std::log(t) - t + std::log(ag);
}

Complex gamma(Complex z) {
    return std::exp(log_gamma(z));
}

Complex digamma(Complex z) {
    if (is_nonpositive_integer(z, 1e-13)) {
        throw std::domain_error("digamma: pole at nonpositive integer");
    }
    if (z.real() < 0.0) {
        // psi(z) = psi(1-z) - pi cot(pi z)
        return digamma(1.0 - z) - kPi * std::cos(kPi * z) / std::sin(kPi * z);
    }
    Complex acc = 0.0;
    while (z.real() < 10.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // Asymptotic series: ln z - 1/(2z) - sum B_{2n} / (2n z^{2n}).
    static constexpr std::array<double, 7> b2n_over_2n = {
        1.0 / 12.0,   -1.0 / 120.0,    1.0 / 252.0, -1.0 / 240.0,
        1.0 / 132.0,  -691.0 / 32760.0, 1.0 / 12.0,
    };
    Complex inv2 = 1.0 / (z * z);
    Complex sum = 0.0;
    Complex p = inv2;
    for (double coeff : b2n_over_2n) {
        sum += coeff * p;
        p *= inv2;
    }
    return acc + std::log(z) - 0.5 / z - sum;
}

Complex pochhammer(Complex alpha, unsigned k) {
    Complex p = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        p *= alpha + static_cast<double>(i);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Hypergeometric series
// ---------------------------------------------------------------------------

HyperParams::HyperParams(std::vector<Complex> numerator, std::vector<Complex> denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    if (denominator_.empty() || numerator_.size() != denominator_.size() + 1) {
        throw std::invalid_argument("HyperParams: need q+1 upper and q >= 1 lower parameters");
    }
    for (const Complex& b : denominator_) {
        if (is_nonpositive_integer(b)) {
            throw std::invalid_argument("HyperParams: lower parameter is a nonpositive integer");
        }
    }
}

Complex HyperParams::convergence_margin() const {
    Complex s = 0.0;
    for (const Complex& b : denominator_) s += b;
    for (const Complex& a : numerator_) s -= a;
    return s;
}

namespace {

// Term recurrence state: term_{k+1} = term_k * prod(a+k)/prod(b+k) * z/(k+1).
class TermStream {
public:
    TermStream(const HyperParams& p, Complex z) : p_(p), z_(z) {}

    Complex next() {
        Complex t = term_;
        Complex ratio = z_ / static_cast<double>(k_ + 1);
        for (const Complex& a : p_.numerator()) ratio *= a + static_cast<double>(k_);
        for (const Complex& b : p_.denominator()) ratio /= b + static_cast<double>(k_);
        term_ *= ratio;
        ++k_;
        return t;
    }

private:
    const HyperParams& p_;
    Complex z_;
    Complex term_ = 1.0;
    unsigned k_ = 0;
};

// The Levin triangle cancels heavily; in double it bottoms out near 1e-10
// relative, which is not enough for the boundary-value contracts. Run it in
// quad precision (soft-float, but these are one-off point evaluations).
#if defined(__SIZEOF_FLOAT128__)
using BigFloat = __float128;
#else
using BigFloat = long double;
#endif

struct BigComplex {
    BigFloat re = 0;
    BigFloat im = 0;

    BigComplex() = default;
    BigComplex(BigFloat r, BigFloat i) : re(r), im(i) {}
    explicit BigComplex(Complex z) : re(z.real()), im(z.imag()) {}

    friend BigComplex operator+(BigComplex a, BigComplex b) { return {a.re + b.re, a.im + b.im}; }
    friend BigComplex operator-(BigComplex a, BigComplex b) { return {a.re - b.re, a.im - b.im}; }
    friend BigComplex operator*(BigComplex a, BigComplex b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator*(BigFloat a, BigComplex b) { return {a * b.re, a * b.im}; }
    friend BigComplex operator/(BigComplex a, BigComplex b) {
        BigFloat d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    BigFloat norm() const { return re * re + im * im; }
    Complex narrow() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

BigFloat int_pow(BigFloat base, long e) {
    // e >= -1 in the Levin weights
    if (e < 0) return 1 / int_pow(base, -e);
    BigFloat r = 1;
    while (e-- > 0) r *= base;
    return r;
}

// Same recurrence as TermStream but in quad precision: the transform
// amplifies even the 1e-16 rounding of double terms by several orders.
class BigTermStream {
public:
    BigTermStream(const HyperParams& p, Complex z) : z_(z) {
        for (Complex a : p.numerator()) upper_.push_back(BigComplex(a));
        for (Complex b : p.denominator()) lower_.push_back(BigComplex(b));
    }

    BigComplex next() {
        BigComplex t = term_;
        BigFloat k = static_cast<BigFloat>(k_);
        BigComplex ratio = z_ / BigComplex{k + 1, 0};
        for (const BigComplex& a : upper_) ratio = ratio * (a + BigComplex{k, 0});
        for (const BigComplex& b : lower_) ratio = ratio / (b + BigComplex{k, 0});
        term_ = term_ * ratio;
        ++k_;
        return t;
    }

private:
    std::vector<BigComplex> upper_;
    std::vector<BigComplex> lower_;
    BigComplex z_;
    BigComplex term_{1, 0};
    unsigned k_ = 0;
};

// Levin u transformation of the whole series (no head offset: a large summed
// head degrades the transform badly). Remainder estimates are the u-type
// omega_n = (beta+n) t_n, beta = 1. Returns the estimate whose consecutive
// delta was smallest; past the rounding floor the deltas grow again, so a
// sustained rise is the stopping signal.
Complex levin_u_sum(BigTermStream& stream, double tol, std::size_t max_terms) {
    const BigFloat beta = 1;
    const std::size_t cap = std::min<std::size_t>(max_terms, 120);
    std::vector<BigComplex> num(cap), den(cap);

    BigComplex s{};
    BigComplex est{}, prev_est{}, best_est{};
    BigFloat best_delta2 = -1;
    int worse_streak = 0;
    bool have_prev = false;
    for (std::size_t n = 0; n < cap; ++n) {
        BigComplex t = stream.next();
        s = s + t;
        if (t.norm() == 0) return s.narrow();        // series terminated
        BigComplex w = (beta + static_cast<BigFloat>(n)) * t;
        num[n] = s / w;
        den[n] = BigComplex{1, 0} / w;
        for (std::size_t k = n; k-- > 0;) {
            BigFloat b = beta + static_cast<BigFloat>(k);
            long j = static_cast<long>(n - k);       // order being formed
            BigFloat factor = b * int_pow(b + static_cast<BigFloat>(j - 1), j - 2) /
                              int_pow(b + static_cast<BigFloat>(j), j - 1);
            num[k] = num[k + 1] - factor * num[k];
            den[k] = den[k + 1] - factor * den[k];
        }
        if (n >= 4 && den[0].norm() > 0) {
            est = num[0] / den[0];
            if (have_prev) {
                BigFloat delta2 = (est - prev_est).norm();
                BigFloat scale2 = est.norm();
                if (best_delta2 < 0 || delta2 < best_delta2 * scale2) {
                    best_delta2 = (scale2 > 0) ? delta2 / scale2 : delta2;
                    best_est = est;
                    worse_streak = 0;
                } else if (++worse_streak >= 8) {
                    break;                            // rounding floor reached
                }
                double tol2 = tol * tol;
                if (best_delta2 >= 0 && best_delta2 <= static_cast<BigFloat>(tol2)) break;
            }
            prev_est = est;
            have_prev = true;
        }
    }
    if (best_delta2 < 0 || best_delta2 > static_cast<BigFloat>(1e-16)) {   // squared 1e-8
        throw non_convergence_error("hyper: Levin resummation did not stabilize");
    }
    return best_est.narrow();
}

} // namespace

Complex hyper(const HyperParams& params, Complex z, const HyperOptions& options) {
    double az = std::abs(z);
    if (az > 1.0 + 1e-12) {
        throw std::domain_error("hyper: |z| > 1 is outside the series domain");
    }
    if (az >= 1.0 - 1e-12 && params.convergence_margin().real() <= 0.0) {
        throw non_convergence_error("hyper: series has no limit on |z| = 1 with Re(s) <= 0");
    }

    if (az >= 0.9995) {
        // Algebraic k^(-1-s) decay this close to the boundary is far too slow
        // to sum term by term; resum instead.
        BigTermStream big_stream(params, z);
        return levin_u_sum(big_stream, options.tolerance, options.max_terms);
    }

    TermStream stream(params, z);

    Complex sum = 0.0;
    int small_streak = 0;
    for (std::size_t k = 0; k < options.max_terms; ++k) {
        Complex t = stream.next();
        sum += t;
        if (std::abs(t) < options.tolerance * std::abs(sum)) {
            if (++small_streak >= 3) return sum;
        } else {
            small_streak = 0;
        }
    }
    return sum;
}

Complex hyper_2f1(Complex a, Complex b, Complex c, Complex z, const HyperOptions& options) {
    return hyper(HyperParams({a, b}, {c}), z, options);
}

Complex hyper_3f2(Complex a1, Complex a2, Complex a3, Complex b1, Complex b2, Complex z,
                  const HyperOptions& options) {
    return hyper(HyperParams({a1, a2, a3}, {b1, b2}), z, options);
}

Complex gauss_sum_at_1(Complex a, Complex b, Complex c) {
    Complex cab = c - a - b;
    if (cab.real() <= 0.0) {
        throw std::domain_error("gauss_sum_at_1: requires Re(c-a-b) > 0");
    }
    if (is_nonpositive_integer(c) || is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) {
        throw std::domain_error("gauss_sum_at_1: gamma pole in the closed form");
    }
    return std::exp(log_gamma(c) + log_gamma(cab) - log_gamma(c - a) - log_gamma(c - b));
}

Complex threeF2_unit_value(Complex a, Complex c) {
    if (std::abs(a - 1.0) <= 1e-12) {
        throw std::domain_error("threeF2_unit_value: a = 1 is excluded");
    }
    if ((c - a).real() <= 0.0) {
        throw std::domain_error("threeF2_unit_value: requires Re(c-a) > 0");
    }
    return ((c - 1.0) / (a - 1.0)) * (digamma(c - 1.0) - digamma(c - a));
}

// ---------------------------------------------------------------------------
// Quadratic transformations
// ---------------------------------------------------------------------------

double whipple_residual(Complex a, Complex b, Complex c, Complex w) {
    // Origin lobe of |4w| = |1-w|^2; it touches |w| = 1 only at w = -1, so
    // the extra |w| <= 1 test is what rules out the unbounded outer lobe.
    double margin = std::norm(1.0 - w) - 4.0 * std::abs(w);
    if (margin < -1e-12 || std::abs(w) > 1.0 + 1e-12) {
        throw std::domain_error("whipple_residual: w outside the transformation loop");
    }
    Complex lhs = hyper(HyperParams({a, b, c}, {a - b + 1.0, a - c + 1.0}), w);
    Complex x = -4.0 * w / ((1.0 - w) * (1.0 - w));
    Complex rhs = std::pow(1.0 - w, -a) *
                  hyper(HyperParams({a - b - c + 1.0, a / 2.0, (a + 1.0) / 2.0},
                                    {a - b + 1.0, a - c + 1.0}),
                        x);
    return std::abs(lhs - rhs);
}

double whipple2_residual(Complex a, Complex b, Complex c, Complex w) {
    bool has_unit = std::abs(a - 1.0) <= 1e-12 || std::abs(b - 1.0) <= 1e-12 ||
                    std::abs(c - 1.0) <= 1e-12;
    if (!has_unit) {
        throw std::invalid_argument("whipple2_residual: one of a, b, c must equal 1");
    }
    Complex half_sum = (a + b + c) / 2.0;
    HyperParams lhs_params({a, b, c}, {2.0, half_sum});
    HyperParams rhs_params({(a + 1.0) / 2.0, (b + 1.0) / 2.0, (c + 1.0) / 2.0}, {2.0, half_sum});

    // Both series must be evaluable: w in the unit disk, 4w(1-w) in the loop
    // component around the origin (it pinches at w = 1/2, so Re(w) <= 1/2
    // selects that component). Boundary points pass when Re(s) > 0 there.
    Complex y = 4.0 * w * (1.0 - w);
    double ay = std::abs(y);
    bool lobe_ok = (ay < 1.0 - 1e-12 && w.real() < 0.5) ||
                   (ay <= 1.0 + 1e-12 && w.real() <= 0.5 + 1e-12 &&
                    rhs_params.convergence_margin().real() > 0.0);
    bool disk_ok = std::abs(w) < 1.0 - 1e-12 ||
                   (std::abs(w) <= 1.0 + 1e-12 && lhs_params.convergence_margin().real() > 0.0);
    if (!lobe_ok || !disk_ok) {
        throw std::domain_error("whipple2_residual: w outside the transformation domain");
    }

    Complex lhs = hyper(lhs_params, w);
    Complex rhs = (1.0 - w) * hyper(rhs_params, y);
    return std::abs(lhs - rhs);
}

} // namespace percross::specfun
