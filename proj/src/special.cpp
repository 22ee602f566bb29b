#include "lfv/special.hpp"

#include "lfv/errors.hpp"

#include <cmath>
#include <numbers>

namespace lfv::special {

namespace {

constexpr double pi = std::numbers::pi;

// Godfrey's coefficients for g = 607/128, N = 15; about 15 significant
// digits in double precision over the right half-plane.
constexpr double lanczos_g = 607.0 / 128.0;
constexpr double lanczos_coeff[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

bool is_nonpositive_integer(cplx s) {
    if (s.imag() != 0.0)
        return false;
    const double r = s.real();
    return r <= 0.0 && r == std::floor(r);
}

cplx lanczos_log_gamma(cplx s) {
    // valid for Re(s) > 0
    cplx acc = lanczos_coeff[0];
    for (int i = 1; i < 15; ++i)
        acc += lanczos_coeff[i] / (s + static_cast<double>(i - 1));
    const cplx t = s + (lanczos_g - 0.5);
    return 0.5 * std::log(2.0 * pi) + (s - 0.5) * std::log(t) - t + std::log(acc);
}

} // namespace

cplx log_gamma_right(cplx s) {
    if (s.real() <= 0.0)
        throw input_error("log_gamma_right: requires Re(s) > 0");
    return lanczos_log_gamma(s);
}

namespace {

cplx checked_finite(cplx v, const char* who) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw input_error(std::string(who) + ": result is not finite (argument out of range)");
    return v;
}

} // namespace

cplx complex_gamma(cplx s) {
    if (is_nonpositive_integer(s))
        throw pole_error("complex_gamma: pole at non-positive integer");
    if (s.real() < 0.5) {
        // reflection: Gamma(s) = pi / (sin(pi s) Gamma(1 - s))
        return checked_finite(
            pi / (std::sin(pi * s) * std::exp(lanczos_log_gamma(1.0 - s))), "complex_gamma");
    }
    return checked_finite(std::exp(lanczos_log_gamma(s)), "complex_gamma");
}

cplx gamma_C(cplx s) {
    return 2.0 * std::exp(-s * std::log(2.0 * pi)) * complex_gamma(s);
}

namespace {

// Lower incomplete gamma by its power series,
// gamma(w, x) = x^w e^{-x} sum_j x^j / (w (w+1) ... (w+j)).
cplx lower_series(cplx w, double x) {
    cplx term = 1.0 / w;
    cplx sum = term;
    for (int j = 1; j < 600; ++j) {
        term *= x / (w + static_cast<double>(j));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
    }
    return std::exp(w * std::log(x) - x) * sum;
}

// Continued fraction for Gamma(w, x), modified Lentz.
cplx upper_cf(cplx w, double x) {
    constexpr double tiny = 1e-300;
    cplx b = x + 1.0 - w;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 600; ++i) {
        const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - w);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const cplx delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return std::exp(w * std::log(x) - x) * h;
}

} // namespace

cplx upper_incomplete_gamma(cplx w, double x) {
    if (!(x > 0.0))
        throw input_error("upper_incomplete_gamma: requires x > 0");
    if (x < std::abs(w) + 1.0)
        return checked_finite(complex_gamma(w) - lower_series(w, x),
                              "upper_incomplete_gamma");
    return checked_finite(upper_cf(w, x), "upper_incomplete_gamma");
}

} // namespace lfv::special
