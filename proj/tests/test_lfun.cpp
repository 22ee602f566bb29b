#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lfv/arith.hpp"
#include "lfv/lfun.hpp"
#include "lfv/modular.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lfv;
using doctest::Approx;

namespace {

CoefficientSequence delta_sequence(int64_t X) {
    return sequence_from_eta(eta_product_expansion(std::vector<EtaFactor>{{1, 24}}, X), 1);
}

CoefficientSequence level11_sequence(int64_t X) {
    return sequence_from_eta(
        eta_product_expansion(std::vector<EtaFactor>{{1, 2}, {11, 2}}, X), 11);
}

DirichletCharacter quadratic_mod5() {
    for (const auto& chi : enumerate_characters(5))
        if (chi.order() == 2)
            return chi;
    throw std::logic_error("unreachable");
}

template <typename F>
cplx simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    cplx acc = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

} // namespace

TEST_CASE("cut_sum truncation consistency") {
    const auto L = make_lfunction(delta_sequence(1000));
    const cplx s{0.5, 0.0};
    const CutSum a = cut_sum(L, s, 1.0, 1e-10);
    const CutSum b = cut_sum(L, s, 1.0, 1e-14); // tighter tolerance, more terms
    CHECK(b.X_used > a.X_used);
    CHECK(std::abs(a.value - b.value) <= a.tail_bound + b.tail_bound);
}

TEST_CASE("cut_sum against direct quadrature of the split integral") {
    // S(1/2; 1) = 2 int_1^inf Delta(iy) y^6 dy/y for Delta (k = 12, w = 6)
    const auto delta = delta_sequence(1000);
    const auto L = make_lfunction(delta);
    const CutSum s = cut_sum(L, {0.5, 0.0}, 1.0, 1e-12);

    auto integrand = [&](double y) {
        const FourierEval f = evaluate_fourier(delta, cplx{0.0, y}, 400);
        return f.value * std::pow(y, 5.0); // y^w dy/y with w = 6
    };
    const cplx quad = 2.0 * simpson(integrand, 1.0, 9.0, 4000);
    CHECK(std::abs(s.value - quad) < 1e-9);
}

TEST_CASE("cut_sum monotone in the cut for positive-coefficient input") {
    const auto eis = eisenstein_coefficients(DirichletCharacter::trivial(1),
                                             DirichletCharacter::trivial(1), 4, 2000);
    const auto L = make_lfunction(eis);
    double prev = 1e300;
    for (double y0 : {0.5, 0.8, 1.0, 1.5, 2.0}) {
        const double v = std::abs(cut_sum(L, {3.0, 0.0}, y0, 1e-10).value);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("cut_sum insufficient coefficients error names a workable X") {
    const auto L = make_lfunction(delta_sequence(20));
    try {
        cut_sum(L, {0.5, 0.0}, 0.01, 1e-10);
        CHECK(false);
    } catch (const insufficient_coefficients& e) {
        CHECK(e.X_have == 20);
        CHECK(e.X_required > 20);
        // the named X indeed satisfies the envelope
        const auto L2 = make_lfunction(delta_sequence(e.X_required));
        const CutSum ok = cut_sum(L2, {0.5, 0.0}, 0.01, 1e-10);
        CHECK(ok.tail_bound <= 1e-10);
    }
}

TEST_CASE("fe_value cut-point independence for Delta with eps = 1") {
    const auto L = make_lfunction(delta_sequence(1000));
    const cplx s{0.5, 0.0};
    const FEValue v1 = fe_value(L, s, {1, 0}, 1.0, 1e-12);
    const FEValue v2 = fe_value(L, s, {1, 0}, 2.0, 1e-12);
    CHECK(std::abs(v1.value - v2.value) < 1e-10);

    // wrong sign separates decisively
    const FEValue w1 = fe_value(L, s, {-1, 0}, 1.0, 1e-12);
    const FEValue w2 = fe_value(L, s, {-1, 0}, 2.0, 1e-12);
    CHECK(std::abs(w1.value - w2.value) > 1e-4);
}

TEST_CASE("fe_value at the symmetric cut uses one cut point") {
    const auto L = make_lfunction(level11_sequence(1000));
    const double y_sym = 1.0 / std::sqrt(11.0);
    const cplx s{0.6, 0.5};
    // both cut sums sit at 1/sqrt(M); check the algebraic combination
    const CutSum direct = cut_sum(L, s, y_sym, 1e-11);
    const CutSum reflected = cut_sum(L, 1.0 - std::conj(s), y_sym, 1e-11);
    const cplx eps{0.3, std::sqrt(1.0 - 0.09)};
    const cplx expect =
        direct.value + eps * std::exp((0.5 - s) * std::log(11.0)) * std::conj(reflected.value);
    const FEValue got = fe_value(L, s, eps, y_sym, 1e-11);
    CHECK(std::abs(got.value - expect) < 1e-12);
}

TEST_CASE("solve_epsilon: Delta gives 1, stable over the grid") {
    const auto L = make_lfunction(delta_sequence(1000));
    const cplx eps = solve_epsilon(L, {0.5, 0.0}, 0.7, 1.4, 1e-10);
    CHECK(std::abs(eps - cplx{1, 0}) < 1e-8);

    std::vector<cplx> ests;
    for (const cplx s : {cplx{0.5, 0}, cplx{0.5, 2}, cplx{1.5, -1}})
        for (const auto& [y0, y1] :
             std::vector<std::pair<double, double>>{{0.7, 1.0}, {0.7, 1.4}, {1.0, 1.4}})
            ests.push_back(solve_epsilon(L, s, y0, y1, 1e-10));
    for (std::size_t i = 0; i < ests.size(); ++i)
        for (std::size_t j = i + 1; j < ests.size(); ++j)
            CHECK(std::abs(ests[i] - ests[j]) < 1e-7);
}

TEST_CASE("solve_epsilon: level 11 unimodular and s-independent") {
    const auto L = make_lfunction(level11_sequence(1000));
    const double sc = 1.0 / std::sqrt(11.0);
    std::vector<cplx> ests;
    for (const cplx s : {cplx{0.5, 0}, cplx{0.5, 1}, cplx{1.2, 0}})
        ests.push_back(solve_epsilon(L, s, 0.7 * sc, 1.4 * sc, 1e-10));
    for (const cplx e : ests)
        CHECK(std::abs(std::abs(e) - 1.0) < 1e-8);
    for (std::size_t i = 0; i < ests.size(); ++i)
        for (std::size_t j = i + 1; j < ests.size(); ++j)
            CHECK(std::abs(ests[i] - ests[j]) < 1e-6);
    // the level-11 newform has root number +1 in this normalization
    CHECK(std::abs(ests[0] - cplx{1, 0}) < 1e-6);
}

TEST_CASE("solve_epsilon: twisted Eisenstein matches the Gauss-sum prediction") {
    // E4 twisted by the quadratic character mod 5: the root number is the
    // product of the two Dirichlet root numbers (tau(chi)/sqrt(5))^2 = 1
    const auto eis = eisenstein_coefficients(DirichletCharacter::trivial(1),
                                             DirichletCharacter::trivial(1), 4, 3000);
    const auto chi = quadratic_mod5();
    const auto L = make_lfunction(twist_coefficients(eis, chi), true);
    CHECK(L.M == 25);
    const double sc = 1.0 / 5.0;
    const cplx eps = solve_epsilon(L, {0.5, 0.0}, 0.7 * sc, 1.4 * sc, 1e-9);
    const cplx tau = gauss_sum(chi);
    const cplx predict = (tau / std::sqrt(5.0)) * (tau / std::sqrt(5.0));
    CHECK(std::abs(eps - predict) < 1e-6);
}

TEST_CASE("solve_epsilon degenerate pair") {
    const auto L = make_lfunction(delta_sequence(1000));
    CHECK_THROWS_AS(solve_epsilon(L, {0.5, 0.0}, 1.0, 1.0, 1e-10), input_error);
    // nearly equal cut points leave nothing to divide by
    CHECK_THROWS_AS(solve_epsilon(L, {0.5, 0.0}, 1.0, 1.0 + 1e-13, 1e-10),
                    degenerate_cut_pair);
}

TEST_CASE("verify_fe on Delta") {
    const auto L = make_lfunction(delta_sequence(1000));
    const cplx s_grid[] = {{0.5, 0}, {0.5, 2}, {1.5, 0}};
    const double y_grid[] = {0.7, 1.0, 1.4};
    const FEReport r = verify_fe(L, s_grid, y_grid, 1e-8);
    CHECK(r.pass);
    CHECK(std::abs(r.epsilon - cplx{1, 0}) < 1e-8);
    CHECK(r.unimodularity_defect < 1e-8);
    CHECK(r.max_residual < 1e-8);
}

TEST_CASE("verify_fe flags a corrupted coefficient") {
    auto seq = delta_sequence(1000);
    seq.a[1] += 0.01;
    const auto L = make_lfunction(seq);
    const cplx s_grid[] = {{0.5, 0}, {0.5, 2}, {1.5, 0}};
    const double y_grid[] = {0.7, 1.0, 1.4};
    const FEReport r = verify_fe(L, s_grid, y_grid, 1e-8);
    CHECK(!r.pass);
    // the gamma kernel damps an a_2 perturbation heavily; what remains is
    // still well above the tolerance
    CHECK(r.max_residual > 1e-8);
}

TEST_CASE("verify_fe pole guard for untwisted low weight") {
    const auto L = make_lfunction(level11_sequence(1000));
    const cplx s_grid[] = {{0.5, 0}};
    const double y_grid[] = {0.7 / std::sqrt(11.0), 1.4 / std::sqrt(11.0)};
    CHECK_THROWS_AS(verify_fe(L, s_grid, y_grid, 1e-8), input_error);
    // the shifted default grid is fine
    const auto grid = default_s_grid(2, false);
    const auto yg = default_y_grid(11);
    const FEReport r = verify_fe(L, grid, yg, 1e-6);
    CHECK(r.pass);
}

TEST_CASE("cut-point independence over the wide five-point grid") {
    // dispersion of fe_value with the solved root number over
    // y in {0.5, 0.7, 1, 1.4, 2} / sqrt(M)
    auto dispersion = [](const CompletedLFunction& L, double tol) {
        const double sc = 1.0 / std::sqrt(static_cast<double>(L.M));
        const std::vector<double> ys = {0.5 * sc, 0.7 * sc, 1.0 * sc, 1.4 * sc, 2.0 * sc};
        const cplx eps = solve_epsilon(L, {0.5, 0.0}, ys[1], ys[3], tol);
        double worst = 0;
        for (const cplx s : {cplx{0.5, 0}, cplx{0.5, 2}, cplx{1.5, -1}}) {
            std::vector<cplx> vals;
            for (const double y : ys)
                vals.push_back(fe_value(L, s, eps, y, tol).value);
            for (std::size_t i = 0; i < vals.size(); ++i)
                for (std::size_t j = i + 1; j < vals.size(); ++j)
                    worst = std::max(worst, std::abs(vals[i] - vals[j]));
        }
        return worst;
    };

    CHECK(dispersion(make_lfunction(delta_sequence(1000)), 1e-10) < 1e-8);

    // the level-11 form twisted by the quadratic character mod 5: M = 275
    const auto tw = twist_coefficients(level11_sequence(1000), quadratic_mod5());
    const auto L275 = make_lfunction(tw, true);
    CHECK(L275.M == 275);
    CHECK(dispersion(L275, 1e-8) < 1e-6);
}

TEST_CASE("verify_fe on a twisted k=1 Eisenstein series") {
    const auto k1 = eisenstein_coefficients(DirichletCharacter::trivial(1),
                                            character_by_index(4, 1), 1, 4000);
    const auto chi = quadratic_mod5();
    const auto L = make_lfunction(twist_coefficients(k1, chi), true);
    CHECK(L.M == 100);
    const FEReport r = verify_fe(L, default_s_grid(1, true), default_y_grid(L.M), 1e-6);
    CHECK(r.pass);
}

TEST_CASE("ratio_Dq coefficients") {
    const auto D = ratio_Dq({0, 0}, {1, 0}, 3);
    CHECK(D.coefficient(1) == cplx{-1, 0});
    CHECK(D.coefficient(3) == cplx{0, 0});
    CHECK(D.coefficient(9) == cplx{-3, 0});

    // Delta at q = 2: c_2 = -48 * 2^(-11/2)
    const auto delta = delta_sequence(10);
    const auto D2 = ratio_Dq(delta.lambda(2), {1, 0}, 2);
    CHECK(D2.coefficient(2).real() == Approx(-48.0 * std::pow(2.0, -5.5)).epsilon(1e-14));

    // direct evaluation: lambda_q = 1, xi = 1, q = 2 at s = 1
    const auto D3 = ratio_Dq({1, 0}, {1, 0}, 2);
    CHECK(std::abs(D3.evaluate({1, 0}) - cplx{-0.5, 0}) < 1e-15);

    CHECK_THROWS_AS(ratio_Dq({1, 0}, {1, 0}, 4), input_error);
}

TEST_CASE("check_Dq_fe exact coefficient symmetry") {
    CHECK(check_Dq_fe(ratio_Dq({0.37, 0}, {1, 0}, 5), 5, {1, 0}));
    CHECK(!check_Dq_fe(ratio_Dq({0, 1}, {1, 0}, 5), 5, {1, 0})); // lambda = i fails
    // xi(q) = 0 (a prime dividing the level) can never satisfy the FE:
    // the n = q^2 row would force c_1 = 0 against c_1 = -1
    CHECK(!check_Dq_fe(ratio_Dq({0, 0}, {0, 0}, 5), 5, {0, 0}));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int64_t primes[] = {2, 3, 5, 7, 11};
    for (int trial = 0; trial < 1000; ++trial) {
        const int64_t q = primes[trial % 5];
        const double theta = 2 * std::numbers::pi * uni(rng);
        const double r = 2.0 * uni(rng);
        const cplx lambda = r * cplx{std::cos(theta), std::sin(theta)};
        const cplx xi{std::cos(2 * theta), std::sin(2 * theta)}; // conj(l) = conj(xi) l
        const auto D = ratio_Dq(lambda, xi, q);
        CHECK(check_Dq_fe(D, q, xi));

        // numeric FE check at random s
        for (int j = 0; j < 5; ++j) {
            const cplx s{0.25 + 0.5 * uni(rng), 2.0 * uni(rng) - 1.0};
            const cplx lhs = D.evaluate(s);
            const cplx rhs = xi * std::exp((1.0 - 2.0 * s) * std::log(double(q))) *
                             std::conj(D.evaluate(1.0 - std::conj(s)));
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }

        // breaking the pairing breaks the check
        if (std::abs(lambda) > 0.1) {
            const auto bad = ratio_Dq(lambda * cplx{std::cos(0.3), std::sin(0.3)}, xi, q);
            CHECK(!check_Dq_fe(bad, q, xi));
        }
    }
}

TEST_CASE("ramanujan twist identity") {
    const auto eis = eisenstein_coefficients(DirichletCharacter::trivial(1),
                                             DirichletCharacter::trivial(1), 4, 1000);
    CHECK(verify_ramanujan_twist(eis, 3, 1000).pass());

    const auto delta = delta_sequence(1000);
    CHECK(verify_ramanujan_twist(delta, 5, 1000).pass());

    // perturbing a_6 shows up at multiples of 6
    auto bad = delta;
    bad.a[5] += 1.0;
    const auto r = verify_ramanujan_twist(bad, 5, 1000);
    CHECK(!r.pass());
    CHECK(!r.violations.empty());
    for (const int64_t n : r.violations)
        CHECK(n % 6 == 0);

    CHECK_THROWS_AS(verify_ramanujan_twist(delta, 4, 100), input_error);
    const auto f11 = level11_sequence(100);
    CHECK_THROWS_AS(verify_ramanujan_twist(f11, 11, 100), input_error);
}

TEST_CASE("hecke pass implies ramanujan-twist pass (property linkage)") {
    const auto quartic = character_by_index(5, 1);
    // note: for k >= 2 an Eisenstein pair only satisfies the conjugation
    // relation when xi1 = xi2, so the complex example repeats the character
    const auto seqs = {
        eisenstein_coefficients(DirichletCharacter::trivial(1), character_by_index(4, 1), 1, 500),
        eisenstein_coefficients(quartic, quartic, 2, 500),
        delta_sequence(500),
    };
    for (const auto& seq : seqs) {
        REQUIRE(check_hecke_relations(seq, 1e-10).pass());
        for (const int64_t q : {3, 7, 13})
            if (seq.N % q != 0)
                CHECK(verify_ramanujan_twist(seq, q, 500, 1e-9).pass());
    }
}

TEST_CASE("eisenstein L factorization") {
    const auto one = DirichletCharacter::trivial(1);
    const auto r1 = eisenstein_L_factorization(one, one, 4, 500);
    CHECK(r1.pass());
    CHECK(r1.max_defect == 0.0); // integer data, identical sums

    const auto r2 = eisenstein_L_factorization(one, character_by_index(4, 1), 1, 500);
    CHECK(r2.pass());
    CHECK(r2.max_defect == 0.0);

    // complex character data stays within the tolerance
    const auto quartic = character_by_index(5, 1);
    const auto r3 = eisenstein_L_factorization(quartic.conj(), quartic, 2, 500);
    CHECK(r3.pass());
}
