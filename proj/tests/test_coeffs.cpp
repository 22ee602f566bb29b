#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lfv/arith.hpp"
#include "lfv/coeffs.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace lfv;
using doctest::Approx;

namespace {

// independent divisor-sum oracle for sigma_{k-1}
int64_t sigma(int64_t n, int pow) {
    int64_t acc = 0;
    for (const int64_t d : arith::divisors(n)) {
        int64_t t = 1;
        for (int i = 0; i < pow; ++i)
            t *= d;
        acc += t;
    }
    return acc;
}

// brute-force eta power: multiply out prod_{n<=X} (1 - x^(d n))^r densely
std::vector<long long> eta_brute(const std::vector<std::pair<int, int>>& factors, int X) {
    std::vector<long long> c(static_cast<std::size_t>(X), 0);
    c[0] = 1;
    for (const auto& [d, r] : factors)
        for (int rep = 0; rep < r; ++rep)
            for (int n = 1; d * n < X; ++n)
                for (int i = X - 1 - d * n; i >= 0; --i)
                    c[static_cast<std::size_t>(i + d * n)] -= c[static_cast<std::size_t>(i)];
    return c;
}

const DirichletCharacter one1 = DirichletCharacter::trivial(1);

DirichletCharacter odd_mod4() { return character_by_index(4, 1); }

} // namespace

TEST_CASE("eisenstein values against the divisor-sum oracle") {
    const auto seq = eisenstein_coefficients(one1, one1, 4, 2000);
    CHECK(seq.N == 1);
    CHECK(seq.k == 4);
    CHECK(seq.coeff(1) == cplx{1, 0});
    CHECK(seq.coeff(6) == cplx{252, 0});
    for (int64_t n = 1; n <= 2000; ++n)
        CHECK(seq.coeff(n).real() == static_cast<double>(sigma(n, 3)));

    // weight 1 with the odd quadratic character mod 4
    const auto k1 = eisenstein_coefficients(one1, odd_mod4(), 1, 200);
    CHECK(k1.N == 4);
    CHECK(k1.nebentypus.modulus() == 4);
    CHECK(k1.coeff(1) == cplx{1, 0});
    CHECK(k1.lambda(5) == cplx{2, 0});
    // divisor count 1 mod 4 minus 3 mod 4
    for (int64_t n = 1; n <= 200; ++n) {
        int64_t expect = 0;
        for (const int64_t d : arith::divisors(n))
            expect += d % 4 == 1 ? 1 : d % 4 == 3 ? -1 : 0;
        CHECK(k1.coeff(n).real() == static_cast<double>(expect));
    }
}

TEST_CASE("eisenstein lambda_p = xi1(p) + xi2(p) for k = 1") {
    const auto k1 = eisenstein_coefficients(one1, odd_mod4(), 1, 300);
    for (int64_t p = 2; p <= 300; ++p) {
        if (!arith::is_prime(p) || k1.N % p == 0)
            continue;
        CHECK(std::abs(k1.lambda(p) - (one1(p) + odd_mod4()(p))) < 1e-14);
    }
}

TEST_CASE("eisenstein input validation") {
    // parity: trivial x trivial with odd k
    CHECK_THROWS_AS(eisenstein_coefficients(one1, one1, 3, 10), parity_error);
    // k=1 with odd xi1
    CHECK_THROWS_AS(eisenstein_coefficients(odd_mod4(), one1, 1, 10), odd_character_error);
    // k=2 both trivial mod 1
    CHECK_THROWS_AS(eisenstein_coefficients(one1, one1, 2, 10), conductor_condition_error);
    // k=2, xi2 trivial mod 4: 4/1 not squarefree
    CHECK_THROWS_AS(eisenstein_coefficients(one1, DirichletCharacter::trivial(4), 2, 10),
                    conductor_condition_error);
    // k=2, xi2 trivial mod p: fine (level p weight 2 Eisenstein)
    const auto lvl3 = eisenstein_coefficients(one1, DirichletCharacter::trivial(3), 2, 100);
    for (int64_t n = 1; n <= 100; ++n) {
        int64_t expect = 0;
        for (const int64_t d : arith::divisors(n))
            if (d % 3 != 0)
                expect += d;
        CHECK(lvl3.coeff(n).real() == static_cast<double>(expect));
    }
    // k=4, imprimitive xi2 rejected
    CHECK_THROWS_AS(eisenstein_coefficients(one1, DirichletCharacter::trivial(3), 4, 10),
                    input_error);
    // xi1 must be primitive
    CHECK_THROWS_AS(eisenstein_coefficients(DirichletCharacter::trivial(3), one1, 4, 10),
                    input_error);
}

TEST_CASE("hecke relations hold for the k=4 eisenstein sequence") {
    const auto seq = eisenstein_coefficients(one1, one1, 4, 10000);
    const auto report = check_hecke_relations(seq, 1e-12);
    CHECK(report.pass());
    // lambda_4 = lambda_2^2 - 1 with lambda_2 = 9 / 2^(3/2)
    CHECK(seq.lambda(2).real() == Approx(9.0 / std::pow(2.0, 1.5)).epsilon(1e-14));
    CHECK(seq.lambda(4).real() ==
          Approx(std::norm(seq.lambda(2)) - 1.0).epsilon(1e-14));
    CHECK(seq.coeff(2).real() == 9.0);
    CHECK(seq.coeff(4).real() == 73.0);
}

TEST_CASE("eta expansion: delta") {
    const EtaFactor spec[] = {{1, 24}};
    const auto eta = eta_product_expansion(spec, 1000);
    CHECK(eta.offset == 1);
    CHECK(eta.k == 12);
    CHECK(eta.coeffs[0] == 1);
    CHECK(eta.coeffs[1] == -24); // tau(2)

    // pentagonal route vs dense brute-force multiply
    const auto brute = eta_brute({{1, 24}}, 200);
    for (int i = 0; i < 200; ++i)
        CHECK(eta.coeffs[static_cast<std::size_t>(i)] == brute[static_cast<std::size_t>(i)]);

    // tau is multiplicative on coprime pairs up to 100
    const auto delta = sequence_from_eta(eta, 1);
    CHECK(delta.k == 12);
    for (int64_t m = 2; m <= 10; ++m)
        for (int64_t n = m + 1; m * n <= 100; ++n)
            if (std::gcd(m, n) == 1)
                CHECK(delta.coeff(m * n) == delta.coeff(m) * delta.coeff(n));

    const auto report = check_hecke_relations(delta, 1e-12);
    CHECK(report.pass());
}

TEST_CASE("eta expansion: level 11") {
    const auto factors = parse_eta_spec("1^2*11^2");
    REQUIRE(factors.size() == 2);
    CHECK(factors[0].scale == 1);
    CHECK(factors[0].exponent == 2);
    CHECK(factors[1].scale == 11);
    CHECK(eta_spec_string(factors) == "1^2*11^2");

    const auto eta = eta_product_expansion(factors, 1000);
    CHECK(eta.offset == 1);
    CHECK(eta.k == 2);
    CHECK(eta.coeffs[0] == 1);
    CHECK(eta.coeffs[1] == -2); // a_2 of the level-11 newform

    const auto brute = eta_brute({{1, 2}, {11, 2}}, 300);
    for (int i = 0; i < 300; ++i)
        CHECK(eta.coeffs[static_cast<std::size_t>(i)] == brute[static_cast<std::size_t>(i)]);

    const auto f11 = sequence_from_eta(eta, 11);
    CHECK(check_hecke_relations(f11, 1e-12).pass());
}

TEST_CASE("eta spec validation") {
    const EtaFactor bad_offset[] = {{1, 23}};
    CHECK_THROWS_AS(eta_product_expansion(bad_offset, 10), input_error);
    const EtaFactor bad_exp[] = {{1, 0}};
    CHECK_THROWS_AS(eta_product_expansion(bad_exp, 10), input_error);
    CHECK_THROWS_AS(parse_eta_spec("1^"), input_error);
    // coefficients past the exact 64-bit range are refused, not wrapped
    const EtaFactor delta_spec[] = {{1, 24}};
    CHECK_THROWS_AS(eta_product_expansion(delta_spec, 10000), input_error);
}

TEST_CASE("corrupting one coefficient trips exactly the touching relations") {
    auto delta = sequence_from_eta(eta_product_expansion(std::vector<EtaFactor>{{1, 24}}, 200), 1);
    delta.a[3] += 1.0; // a_4
    const auto report = check_hecke_relations(delta, 1e-12);
    CHECK(!report.pass());
    for (const auto& v : report.violations) {
        switch (v.kind) {
        case HeckeViolation::Kind::Multiplicativity:
            CHECK((v.m == 4 || v.n / v.m == 4));
            break;
        case HeckeViolation::Kind::PrimePower:
            CHECK(v.m == 2); // the p = 2 chain through a_4
            CHECK(v.n % 4 == 0);
            break;
        default:
            CHECK(false);
        }
    }
}

TEST_CASE("twists") {
    const auto delta =
        sequence_from_eta(eta_product_expansion(std::vector<EtaFactor>{{1, 24}}, 500), 1);

    // trivial twist is the identity
    const auto same = twist_coefficients(delta, one1);
    CHECK(same.N == 1);
    for (int64_t n = 1; n <= 500; ++n)
        CHECK(same.coeff(n) == delta.coeff(n));

    // quadratic twist mod 5: chi(2) = -1, so a_2 -> 24
    DirichletCharacter quad = one1;
    for (const auto& chi : enumerate_characters(5))
        if (chi.order() == 2)
            quad = chi;
    const auto tw = twist_coefficients(delta, quad);
    CHECK(tw.N == 25);
    CHECK(tw.nebentypus.modulus() == 25);
    CHECK(tw.nebentypus.is_trivial());
    CHECK(tw.coeff(2) == cplx{24, 0});
    CHECK(tw.coeff(5) == cplx{0, 0});
    CHECK(check_hecke_relations(tw, 1e-12).pass());

    // twist by chi then conj(chi) restores n coprime to q, exactly;
    // order-4 character exercises the complex values
    const auto quartic = character_by_index(5, 1);
    CHECK(quartic.order() == 4);
    const auto back = twist_coefficients(twist_coefficients(delta, quartic), quartic.conj());
    CHECK(back.N == 25); // level already absorbed the twist modulus
    CHECK(back.nebentypus.is_trivial());
    for (int64_t n = 1; n <= 500; ++n) {
        if (n % 5 == 0)
            CHECK(back.coeff(n) == cplx{0, 0});
        else
            CHECK(back.coeff(n) == delta.coeff(n));
    }

    // level must be coprime to the twist modulus
    const auto f11 = sequence_from_eta(
        eta_product_expansion(std::vector<EtaFactor>{{1, 2}, {11, 2}}, 100), 11);
    CHECK_THROWS_AS(twist_coefficients(f11, character_by_index(11, 1)), not_coprime_error);
}

TEST_CASE("coefficient file round trip") {
    const auto delta =
        sequence_from_eta(eta_product_expansion(std::vector<EtaFactor>{{1, 24}}, 1000), 1);
    std::ostringstream out;
    save_coefficients(delta, out);
    std::istringstream in(out.str());
    const auto loaded = load_coefficients(in);
    CHECK(loaded.k == delta.k);
    CHECK(loaded.N == delta.N);
    CHECK(loaded.nebentypus == delta.nebentypus);
    CHECK(loaded.growth_C == delta.growth_C);
    REQUIRE(loaded.length() == delta.length());
    for (int64_t n = 1; n <= delta.length(); ++n)
        CHECK(loaded.coeff(n) == delta.coeff(n)); // bit exact

    // a complex sequence round-trips bit-exactly too
    const auto quartic = character_by_index(5, 1);
    const auto tw = twist_coefficients(delta, quartic);
    std::ostringstream out2;
    save_coefficients(tw, out2);
    std::istringstream in2(out2.str());
    const auto loaded2 = load_coefficients(in2);
    for (int64_t n = 1; n <= tw.length(); ++n)
        CHECK(loaded2.coeff(n) == tw.coeff(n));
}

TEST_CASE("coefficient file error cases") {
    auto load_str = [](const std::string& s) {
        std::istringstream in(s);
        return load_coefficients(in);
    };
    // minimal valid file
    const auto one = load_str("# k=12 N=1 chi=1.0 X=1 C=1\n1 1 0\n");
    CHECK(one.length() == 1);

    CHECK_THROWS_WITH_AS(load_str("# k=12 N=1 chi=1.0 X=1 C=1\n1 2 0\n"),
                         doctest::Contains("not normalized"), input_error);
    CHECK_THROWS_WITH_AS(load_str("# k=12 N=1 chi=1.0 X=2 C=1\n2 1 0\n3 0 0\n"),
                         doctest::Contains("missing a_1"), input_error);
    CHECK_THROWS_WITH_AS(load_str("# k=12 N=1 chi=1.0 X=3 C=1\n1 1 0\n3 0 0\n4 0 0\n"),
                         doctest::Contains("no gaps"), input_error);
    CHECK_THROWS_WITH_AS(load_str("k=12 N=1 chi=1.0 X=1 C=1\n1 1 0\n"),
                         doctest::Contains("malformed header"), input_error);
    CHECK_THROWS_AS(load_str("# k=12 N=1 X=1 C=1\n1 1 0\n"), input_error);
    CHECK_THROWS_AS(load_str("# k=12 N=5 chi=4.1 X=1 C=1\n1 1 0\n"), input_error);
    CHECK_THROWS_AS(load_str("# k=12 N=1 chi=1.0 X=2 C=1\n1 1 0\n"), input_error);
}

TEST_CASE("multiplicativity of a complex eisenstein sequence at random coprime pairs") {
    const auto quartic = character_by_index(5, 1); // order-4 character mod 5
    const auto seq = eisenstein_coefficients(quartic.conj(), quartic, 2, 3000);
    CHECK(seq.N == 25);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int64_t> pick(2, 54);
    int tested = 0;
    while (tested < 200) {
        const int64_t m = pick(rng), n = pick(rng);
        if (std::gcd(m, n) != 1 || m * n > 3000)
            continue;
        ++tested;
        CHECK(std::abs(seq.coeff(m * n) - seq.coeff(m) * seq.coeff(n)) < 1e-12);
    }
}
