#include "lfv/arith.hpp"
#include "lfv/errors.hpp"

#include <algorithm>
#include <numeric>

namespace lfv::arith {

Factorization factor(int64_t n) {
    if (n < 1)
        throw input_error("factor: argument must be >= 1");
    Factorization out;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1)
        out.push_back({n, 1});
    return out;
}

bool is_prime(int64_t n) {
    if (n < 2)
        return false;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0)
            return false;
    return true;
}

std::vector<int64_t> divisors(int64_t n) {
    const auto fac = factor(n);
    std::vector<int64_t> out{1};
    for (const auto& [p, e] : fac) {
        const std::size_t base = out.size();
        int64_t pk = 1;
        for (int j = 1; j <= e; ++j) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i)
                out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int64_t euler_phi(int64_t n) {
    int64_t phi = 1;
    for (const auto& [p, e] : factor(n)) {
        int64_t pe = 1;
        for (int j = 1; j < e; ++j)
            pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

int mobius(int64_t n) {
    const auto fac = factor(n);
    for (const auto& [p, e] : fac)
        if (e > 1)
            return 0;
    return fac.size() % 2 == 0 ? 1 : -1;
}

int64_t pow_mod(int64_t base, int64_t exp, int64_t mod) {
    if (mod <= 0)
        throw input_error("pow_mod: modulus must be positive");
    base = mod_reduce(base, mod);
    int64_t acc = 1 % mod;
    while (exp > 0) {
        if (exp & 1)
            acc = static_cast<int64_t>(static_cast<__int128>(acc) * base % mod);
        base = static_cast<int64_t>(static_cast<__int128>(base) * base % mod);
        exp >>= 1;
    }
    return acc;
}

int64_t mod_inverse(int64_t a, int64_t n) {
    if (n < 1)
        throw input_error("mod_inverse: modulus must be positive");
    // extended Euclid on (a mod n, n)
    int64_t r0 = n, r1 = mod_reduce(a, n);
    int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const int64_t q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (r0 != 1)
        throw not_coprime_error("mod_inverse: arguments are not coprime");
    return mod_reduce(t0, n);
}

int64_t crt(std::span<const std::pair<int64_t, int64_t>> congruences) {
    int64_t x = 0, m = 1;
    for (const auto& [r, mi] : congruences) {
        if (mi < 1)
            throw input_error("crt: moduli must be positive");
        if (std::gcd(m, mi) != 1)
            throw not_coprime_error("crt: moduli are not pairwise coprime");
        // x' = x (mod m), x' = r (mod mi)
        const int64_t inv = mod_inverse(m, mi);
        const int64_t k = mod_reduce(
            static_cast<int64_t>(static_cast<__int128>(mod_reduce(r - x, mi)) * inv % mi), mi);
        x += m * k;
        m *= mi;
    }
    return mod_reduce(x, m);
}

} // namespace lfv::arith
