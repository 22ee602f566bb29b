#ifndef LFV_ARITH_HPP
#define LFV_ARITH_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lfv::arith {

using std::int64_t;

struct PrimePower {
    int64_t p;
    int e;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factorization, primes strictly increasing. Empty for n = 1.
using Factorization = std::vector<PrimePower>;

Factorization factor(int64_t n);
bool is_prime(int64_t n);

// All divisors of n, ascending.
std::vector<int64_t> divisors(int64_t n);

int64_t euler_phi(int64_t n);
int mobius(int64_t n);

int64_t pow_mod(int64_t base, int64_t exp, int64_t mod);

// Inverse of a modulo n; requires gcd(a, n) = 1.
int64_t mod_inverse(int64_t a, int64_t n);

// Simultaneous congruences x = r_i (mod m_i), pairwise coprime moduli.
// Returns the residue in [0, prod m_i).
int64_t crt(std::span<const std::pair<int64_t, int64_t>> congruences);

// Value in [0, n).
inline int64_t mod_reduce(int64_t a, int64_t n) {
    int64_t r = a % n;
    return r < 0 ? r + n : r;
}

} // namespace lfv::arith

#endif
