#include "lfv/lfun.hpp"

#include "lfv/arith.hpp"
#include "lfv/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace lfv {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

// Tail envelope for 2 sum_{n>X} |a_n| (2 pi n)^(-u) Gamma(u, 2 pi n y0),
// using |a_n| <= C n^(k/2) and Gamma(u, x) <= 2 x^(u-1) e^(-x) (valid for
// x >= 2 max(u-1, 0)). Summing n^(k/2-1) e^(-2 pi n y0) against a
// geometric envelope gives, for X past the monotonicity threshold,
//   B(X) = (2 C / pi) y0^(u-1) (X+1)^(k/2-1) e^(-2 pi (X+1) y0)
//          / (1 - e^(-pi y0)).
struct TailEnvelope {
    double C, u, y0;
    int k;

    int64_t min_valid_X() const {
        const double n1 = (k / 2.0 - 1.0) / (pi * y0);        // phi(n) decreasing
        const double n2 = std::max(u - 1.0, 0.0) / (pi * y0); // x_n >= 2(u-1)
        return static_cast<int64_t>(std::ceil(std::max({n1, n2, 1.0})));
    }

    double operator()(int64_t X) const {
        const double xp1 = static_cast<double>(X + 1);
        const double log_b = std::log(2.0 * C / pi) + (u - 1.0) * std::log(y0) +
                             (k / 2.0 - 1.0) * std::log(xp1) - two_pi * xp1 * y0 -
                             std::log1p(-std::exp(-pi * y0));
        return std::exp(log_b);
    }
};

// Smallest X with B(X) <= tol, or -1 if none below the cap.
int64_t required_truncation(const TailEnvelope& env, double tol) {
    int64_t lo = env.min_valid_X();
    if (env(lo) <= tol)
        return lo;
    int64_t hi = lo;
    constexpr int64_t cap = 100'000'000;
    while (env(hi) > tol) {
        if (hi >= cap)
            return -1;
        hi = std::min(cap, hi * 2 + 16);
    }
    while (lo + 1 < hi) {
        const int64_t mid = lo + (hi - lo) / 2;
        (env(mid) <= tol ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

CompletedLFunction make_lfunction(CoefficientSequence seq, bool twisted) {
    if (seq.length() < 1 || seq.a[0] != cplx{1.0, 0.0})
        throw input_error("make_lfunction: sequence must be normalized with a_1 = 1");
    CompletedLFunction L;
    L.M = seq.N;
    L.twisted = twisted;
    L.seq = std::move(seq);
    return L;
}

CutSum cut_sum(const CompletedLFunction& L, cplx s, double y0, double tol) {
    if (!(y0 > 0.0))
        throw input_error("cut_sum: cut point must be positive");
    const cplx w = s + (L.k() - 1) / 2.0;
    const TailEnvelope env{L.seq.growth_C, w.real(), y0, L.k()};
    const int64_t need = required_truncation(env, tol);
    if (need < 0)
        throw insufficient_coefficients(L.seq.length(), 100'000'000);
    if (need > L.seq.length())
        throw insufficient_coefficients(L.seq.length(), need);

    cplx acc{0.0, 0.0};
    for (int64_t n = 1; n <= need; ++n) {
        const cplx an = L.seq.coeff(n);
        if (an == cplx{0.0, 0.0})
            continue;
        const double x = two_pi * static_cast<double>(n) * y0;
        // (2 pi n)^(-w) Gamma(w, x); skip once e^(-x) underflows
        if (x > 700.0)
            break;
        acc += an * std::exp(-w * std::log(two_pi * static_cast<double>(n))) *
               special::upper_incomplete_gamma(w, x);
    }
    return {2.0 * acc, env(need), need};
}

namespace {

// dual-side factor M^(1/2-s) and cut point for the reflected sum
struct DualSide {
    cplx factor;
    double y_dual;
    cplx s_dual;
};

DualSide dual_side(const CompletedLFunction& L, cplx s, double y0) {
    const double M = static_cast<double>(L.M);
    return {std::exp((0.5 - s) * std::log(M)), 1.0 / (M * y0), 1.0 - std::conj(s)};
}

} // namespace

FEValue fe_value(const CompletedLFunction& L, cplx s, cplx eps, double y0, double tol) {
    const auto dual = dual_side(L, s, y0);
    const double fmag = std::abs(dual.factor);
    const CutSum direct = cut_sum(L, s, y0, tol / 2.0);
    const CutSum reflected = cut_sum(L, dual.s_dual, dual.y_dual,
                                     tol / (2.0 * std::max(fmag, 1e-12)));
    FEValue out;
    out.value = direct.value + eps * dual.factor * std::conj(reflected.value);
    out.err_bound = direct.tail_bound + std::abs(eps) * fmag * reflected.tail_bound;
    out.X_used = std::max(direct.X_used, reflected.X_used);
    return out;
}

cplx solve_epsilon(const CompletedLFunction& L, cplx s, double y0, double y1, double tol) {
    if (y0 == y1)
        throw input_error("solve_epsilon: cut points must differ");
    const auto d0 = dual_side(L, s, y0);
    const auto d1 = dual_side(L, s, y1);
    const double fmag = std::abs(d0.factor);
    // the solve divides by a difference of cut sums, so the summation
    // error budget must sit far below the requested epsilon accuracy
    const double sum_tol = std::min(tol * 1e-2, 1e-13) / std::max(fmag, 1.0);
    const cplx S0 = cut_sum(L, s, y0, sum_tol).value;
    const cplx S1 = cut_sum(L, s, y1, sum_tol).value;
    const cplx T0 = d0.factor * std::conj(cut_sum(L, d0.s_dual, d0.y_dual, sum_tol).value);
    const cplx T1 = d1.factor * std::conj(cut_sum(L, d1.s_dual, d1.y_dual, sum_tol).value);
    const cplx den = T0 - T1;
    if (std::abs(den) < 1e-13)
        throw degenerate_cut_pair("solve_epsilon: degenerate cut pair, reselect y points");
    return (S1 - S0) / den;
}

std::vector<double> default_y_grid(int64_t M) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    return {0.7 * scale, 1.0 * scale, 1.4 * scale};
}

std::vector<cplx> default_s_grid(int k, bool twisted) {
    if (!twisted && k <= 2) // clear of {0, 1, +-1/2, 3/2}
        return {cplx{0.8, 0.0}, cplx{0.8, 2.0}, cplx{1.25, -1.0}};
    return {cplx{0.5, 0.0}, cplx{0.5, 2.0}, cplx{1.5, -1.0}};
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const double pole_guard_radius = 0.05;
const cplx pole_points[] = {{0, 0}, {1, 0}, {-0.5, 0}, {0.5, 0}, {1.5, 0}};

} // namespace

FEReport verify_fe(const CompletedLFunction& L, std::span<const cplx> s_grid,
                   std::span<const double> y_grid, double tol) {
    if (s_grid.empty() || y_grid.size() < 2)
        throw input_error("verify_fe: need a nonempty s grid and at least two y points");
    if (!(tol > 0))
        throw input_error("verify_fe: tolerance must be positive");
    if (!L.twisted && L.k() <= 2)
        for (const cplx s : s_grid)
            for (const cplx p : pole_points)
                if (std::abs(s - p) < pole_guard_radius)
                    throw input_error("verify_fe: s grid point too close to the "
                                      "potential pole set for untwisted k <= 2");

    FEReport report;
    report.tol = tol;

    std::vector<cplx> estimates;
    for (const cplx s : s_grid)
        for (std::size_t i = 0; i < y_grid.size(); ++i)
            for (std::size_t j = i + 1; j < y_grid.size(); ++j)
                estimates.push_back(solve_epsilon(L, s, y_grid[i], y_grid[j], tol / 10.0));

    std::vector<double> re, im;
    re.reserve(estimates.size());
    im.reserve(estimates.size());
    for (const cplx e : estimates) {
        re.push_back(e.real());
        im.push_back(e.imag());
    }
    report.epsilon = {median_of(re), median_of(im)};
    report.unimodularity_defect = std::abs(std::abs(report.epsilon) - 1.0);
    for (std::size_t i = 0; i < estimates.size(); ++i)
        for (std::size_t j = i + 1; j < estimates.size(); ++j)
            report.epsilon_spread =
                std::max(report.epsilon_spread, std::abs(estimates[i] - estimates[j]));

    int64_t X_used = 0;
    for (const cplx s : s_grid) {
        std::vector<cplx> vals;
        for (const double y : y_grid) {
            const FEValue v = fe_value(L, s, report.epsilon, y, tol / 10.0);
            vals.push_back(v.value);
            X_used = std::max(X_used, v.X_used);
        }
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = i + 1; j < vals.size(); ++j)
                report.max_residual =
                    std::max(report.max_residual, std::abs(vals[i] - vals[j]));
    }
    report.X_used = X_used;
    report.pass = report.unimodularity_defect <= tol && report.max_residual <= tol &&
                  report.epsilon_spread <= tol;
    return report;
}

DirichletPolynomial::DirichletPolynomial(std::map<int64_t, cplx> coeffs)
    : c_(std::move(coeffs)) {
    for (const auto& [n, c] : c_)
        if (n < 1)
            throw input_error("DirichletPolynomial: support must be positive");
}

void DirichletPolynomial::set(int64_t n, cplx c) {
    if (n < 1)
        throw input_error("DirichletPolynomial: support must be positive");
    c_[n] = c;
}

cplx DirichletPolynomial::coefficient(int64_t n) const {
    const auto it = c_.find(n);
    return it == c_.end() ? cplx{0.0, 0.0} : it->second;
}

cplx DirichletPolynomial::evaluate(cplx s) const {
    cplx acc{0.0, 0.0};
    for (const auto& [n, c] : c_)
        acc += c * std::exp(-s * std::log(static_cast<double>(n)));
    return acc;
}

DirichletPolynomial ratio_Dq(cplx lambda_q, cplx xi_q, int64_t q) {
    if (!arith::is_prime(q))
        throw input_error("ratio_Dq: q must be prime");
    const double aq = std::abs(xi_q);
    if (std::abs(aq - 1.0) > 1e-9 && aq > 1e-9)
        throw input_error("ratio_Dq: |xi(q)| must be 0 or 1");
    DirichletPolynomial D;
    D.set(1, cplx{-1.0, 0.0});
    D.set(q, lambda_q * static_cast<double>(q));
    D.set(q * q, -xi_q * static_cast<double>(q));
    return D;
}

bool check_Dq_fe(const DirichletPolynomial& D, int64_t q, cplx xi_q, double tol) {
    if (!arith::is_prime(q))
        throw input_error("check_Dq_fe: q must be prime");
    for (const auto& [n, c] : D.coefficients())
        if (n != 1 && n != q && n != q * q)
            throw input_error("check_Dq_fe: support must lie in {1, q, q^2}");
    const double dq = static_cast<double>(q);
    const int64_t supp[] = {1, q, q * q};
    for (const int64_t n : supp) {
        const cplx lhs = D.coefficient(q * q / n);
        const cplx rhs = xi_q * (dq / static_cast<double>(n)) * std::conj(D.coefficient(n));
        if (std::abs(lhs - rhs) > tol * std::max({1.0, std::abs(lhs), std::abs(rhs)}))
            return false;
    }
    return true;
}

RamanujanTwistReport verify_ramanujan_twist(const CoefficientSequence& seq, int64_t q,
                                            int64_t X, double tol) {
    if (!arith::is_prime(q))
        throw input_error("verify_ramanujan_twist: q must be prime");
    if (seq.N % q == 0)
        throw input_error("verify_ramanujan_twist: q must not divide the level");
    if (X > seq.length())
        throw insufficient_coefficients(seq.length(), X);
    RamanujanTwistReport report;
    report.tol = tol;
    report.X = X;
    const cplx xi_q = seq.nebentypus(q);
    const cplx aq = seq.coeff(q);
    double qk = 1.0;
    for (int i = 0; i < seq.k; ++i)
        qk *= static_cast<double>(q);
    for (int64_t n = 1; n <= X; ++n) {
        const cplx lhs = seq.coeff(n) * static_cast<double>(ramanujan_sum(q, n));
        cplx rhs = -seq.coeff(n);
        if (n % q == 0)
            rhs += static_cast<double>(q) * aq * seq.coeff(n / q);
        if (n % (q * q) == 0)
            rhs -= qk * xi_q * seq.coeff(n / (q * q));
        const double defect =
            std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        report.max_defect = std::max(report.max_defect, defect);
        if (defect > tol)
            report.violations.push_back(n);
    }
    return report;
}

ConvolutionReport eisenstein_L_factorization(const DirichletCharacter& xi1,
                                             const DirichletCharacter& xi2,
                                             int k, int64_t X, double tol) {
    const CoefficientSequence seq = eisenstein_coefficients(xi1, xi2, k, X);
    // product of the two Dirichlet series in the n^(-s-(k-1)/2) variable:
    // coefficients xi1(m) and xi2(d) d^(k-1)
    std::vector<cplx> conv(static_cast<std::size_t>(X), cplx{0.0, 0.0});
    for (int64_t m = 1; m <= X; ++m) {
        const cplx u = xi1(m);
        if (u == cplx{0.0, 0.0})
            continue;
        for (int64_t d = 1; m * d <= X; ++d) {
            double dk = 1.0;
            for (int i = 0; i < k - 1; ++i)
                dk *= static_cast<double>(d);
            conv[static_cast<std::size_t>(m * d - 1)] += u * xi2(d) * dk;
        }
    }
    ConvolutionReport report;
    report.tol = tol;
    report.X = X;
    for (int64_t n = 1; n <= X; ++n) {
        const cplx lhs = seq.coeff(n);
        const cplx rhs = conv[static_cast<std::size_t>(n - 1)];
        const double defect =
            std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        report.max_defect = std::max(report.max_defect, defect);
        if (defect > tol)
            report.violations.push_back(n);
    }
    return report;
}

} // namespace lfv
