#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lfv/arith.hpp"
#include "lfv/errors.hpp"

#include <numeric>

using namespace lfv;
using namespace lfv::arith;

TEST_CASE("factor basics") {
    CHECK(factor(12) == Factorization{{2, 2}, {3, 1}});
    CHECK(factor(1).empty());
    CHECK(factor(97) == Factorization{{97, 1}});
    CHECK_THROWS_AS(factor(0), input_error);

    // reconstruction and primality of listed primes
    for (int64_t n = 1; n <= 2000; ++n) {
        int64_t prod = 1;
        int64_t last = 0;
        for (const auto& [p, e] : factor(n)) {
            CHECK(p > last);
            CHECK(is_prime(p));
            last = p;
            for (int j = 0; j < e; ++j)
                prod *= p;
        }
        CHECK(prod == n);
    }
}

TEST_CASE("divisors") {
    CHECK(divisors(6) == std::vector<int64_t>{1, 2, 3, 6});
    CHECK(divisors(1) == std::vector<int64_t>{1});
    CHECK(divisors(16) == std::vector<int64_t>{1, 2, 4, 8, 16});

    // |divisors(n)| = prod (e_i + 1)
    for (int64_t n = 1; n <= 2000; ++n) {
        int64_t expect = 1;
        for (const auto& pp : factor(n))
            expect *= pp.e + 1;
        CHECK(static_cast<int64_t>(divisors(n).size()) == expect);
    }
}

TEST_CASE("euler_phi by counting") {
    // independent oracle: count residues coprime to n
    auto phi_count = [](int64_t n) {
        int64_t c = 0;
        for (int64_t a = 1; a <= n; ++a)
            if (std::gcd(a, n) == 1)
                ++c;
        return c;
    };
    CHECK(euler_phi(9) == 6);
    for (int64_t n = 1; n <= 500; ++n)
        CHECK(euler_phi(n) == phi_count(n));
}

TEST_CASE("mobius and summatory identities") {
    CHECK(mobius(12) == 0);
    CHECK(mobius(1) == 1);
    CHECK(mobius(30) == -1);

    for (int64_t n = 1; n <= 10000; ++n) {
        int64_t phi_sum = 0, mu_sum = 0;
        for (const int64_t d : divisors(n)) {
            phi_sum += euler_phi(d);
            mu_sum += mobius(d);
        }
        CHECK(phi_sum == n);
        CHECK(mu_sum == (n == 1 ? 1 : 0));
    }
}

TEST_CASE("mod_inverse and crt") {
    CHECK(mod_inverse(3, 11) == 4);
    CHECK_THROWS_AS(mod_inverse(6, 9), not_coprime_error);
    for (int64_t n = 2; n <= 200; ++n)
        for (int64_t a = 1; a < n; ++a) {
            if (std::gcd(a, n) != 1)
                continue;
            CHECK(mod_inverse(a, n) * a % n == 1);
        }

    const std::pair<int64_t, int64_t> congs[] = {{2, 3}, {3, 5}, {2, 7}};
    CHECK(crt(congs) == 23);
    const std::pair<int64_t, int64_t> bad[] = {{1, 6}, {2, 9}};
    CHECK_THROWS_AS(crt(bad), not_coprime_error);
}

TEST_CASE("pow_mod") {
    CHECK(pow_mod(2, 10, 1000) == 24);
    CHECK(pow_mod(5, 0, 7) == 1);
    CHECK(pow_mod(3, 100, 7) == 4); // 3^6 = 1 mod 7, 100 = 4 mod 6
}
