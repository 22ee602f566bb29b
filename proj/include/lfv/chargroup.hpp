#ifndef LFV_CHARGROUP_HPP
#define LFV_CHARGROUP_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lfv {

using cplx = std::complex<double>;
using std::int64_t;

// Value e(num/den) = exp(2*pi*i*num/den), reduced, 0 <= num < den.
struct UnitExponent {
    int64_t num = 0;
    int64_t den = 1;
};

namespace detail {
// Immutable per-modulus data: CRT generators of (Z/q)* and discrete-log
// tables. Built once, shared by every character of that modulus.
struct CharGroupData;
}

// Dirichlet character mod q, stored as one exponent per CRT generator.
// Generators: smallest primitive root for odd prime powers; (-1, 5) for
// 2^e with e >= 3. Characters of a fixed modulus are canonically ordered
// by their exponent tuples (factors sorted by prime, first component most
// significant); index 0 is the trivial character. Immutable, safe to
// share across threads.
class DirichletCharacter {
public:
    DirichletCharacter(); // the character of modulus 1
    static DirichletCharacter trivial(int64_t q);

    int64_t modulus() const;
    const std::vector<int64_t>& exponents() const { return exps_; }
    int64_t index() const;

    // chi(n); zero iff gcd(n, q) > 1.
    cplx operator()(int64_t n) const;

    // Exact exponent of chi(n) as a root of unity; nullopt iff chi(n) = 0.
    std::optional<UnitExponent> unit_exponent(int64_t n) const;

    int64_t order() const;
    int parity() const; // chi(-1), +1 or -1
    bool is_even() const { return parity() == 1; }
    bool is_trivial() const;

    int64_t conductor() const;
    bool is_primitive() const { return conductor() == modulus(); }

    // The primitive character of modulus conductor() agreeing with this
    // one on integers coprime to the modulus.
    DirichletCharacter primitivize() const;

    // The character mod M induced by this one; requires modulus() | M.
    DirichletCharacter induced_to(int64_t M) const;

    DirichletCharacter conj() const;

    // Product character, defined mod lcm of the two moduli.
    friend DirichletCharacter operator*(const DirichletCharacter& lhs,
                                        const DirichletCharacter& rhs);

    friend bool operator==(const DirichletCharacter& lhs,
                           const DirichletCharacter& rhs);

private:
    DirichletCharacter(std::shared_ptr<const detail::CharGroupData> g,
                       std::vector<int64_t> exps);
    std::shared_ptr<const detail::CharGroupData> group_;
    std::vector<int64_t> exps_; // one per generator, 0 <= exps_[i] < order_i
    friend DirichletCharacter character_by_index(int64_t, int64_t);
};

// All phi(q) characters mod q in canonical order.
std::vector<DirichletCharacter> enumerate_characters(int64_t q);
DirichletCharacter character_by_index(int64_t q, int64_t index);

// CLI addressing "q.j".
DirichletCharacter parse_character(std::string_view address);
std::string character_address(const DirichletCharacter& chi);

// tau(chi) = sum_{a mod q} chi(a) e(a/q).
cplx gauss_sum(const DirichletCharacter& chi);

// c_q(n) = sum over units a mod q of e(an/q); always a rational integer.
int64_t ramanujan_sum(int64_t q, int64_t n);

// 1/q - c_q(n)/(q(q-1)) + 1/(q-1) * sum_{chi != chi0} conj(chi(a)) chi(n)
// for prime q and gcd(a, q) = 1; equals [n = a (mod q)].
cplx indicator_decomposition(int64_t q, int64_t a, int64_t n);

} // namespace lfv

#endif
