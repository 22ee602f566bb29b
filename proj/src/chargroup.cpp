#include "lfv/chargroup.hpp"

#include "lfv/arith.hpp"
#include "lfv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace lfv {

using arith::mod_reduce;

namespace detail {

// One cyclic component of (Z/p^e)*.
struct CyclicFactor {
    int64_t pe;        // the prime power this factor lives in
    int64_t gen;       // generator residue mod pe
    int64_t order;     // order of gen
    int64_t prime;     // p
    int exp;           // e
    bool is_sign_part; // the (-1)-component of (Z/2^e)*, e >= 3
};

struct CharGroupData {
    int64_t q = 1;
    // Factors sorted by prime; 2^e (e >= 3) contributes two entries,
    // the sign part first.
    std::vector<CyclicFactor> factors;
    // dlog[i][r] = discrete log of residue r mod factors[i].pe w.r.t. the
    // factor's generator, restricted to the subgroup the factor indexes;
    // -1 marks non-units. For 2^e >= 8 the two tables split a residue as
    // (-1)^a 5^t.
    std::vector<std::vector<int32_t>> dlog;
    int64_t exponent = 1; // lcm of factor orders
};

namespace {

int64_t primitive_root(int64_t pe, int64_t p) {
    const int64_t phi = arith::euler_phi(pe);
    const auto phifac = arith::factor(phi);
    for (int64_t g = 2; g < pe; ++g) {
        if (g % p == 0)
            continue;
        bool ok = true;
        for (const auto& [ell, e] : phifac) {
            (void)e;
            if (arith::pow_mod(g, phi / ell, pe) == 1) {
                ok = false;
                break;
            }
        }
        if (ok)
            return g;
    }
    throw input_error("primitive_root: none found (non prime-power modulus?)");
}

std::shared_ptr<const CharGroupData> build_group(int64_t q) {
    if (q < 1)
        throw input_error("character modulus must be >= 1");
    if (q > 10'000'000)
        throw input_error("character modulus too large for dense dlog tables");
    auto data = std::make_shared<CharGroupData>();
    data->q = q;
    for (const auto& [p, e] : arith::factor(q)) {
        int64_t pe = 1;
        for (int j = 0; j < e; ++j)
            pe *= p;
        if (p == 2) {
            if (e == 1)
                continue; // (Z/2)* is trivial
            if (e == 2) {
                data->factors.push_back({pe, 3, 2, p, e, false});
                std::vector<int32_t> tab(pe, -1);
                tab[1] = 0;
                tab[3] = 1;
                data->dlog.push_back(std::move(tab));
                continue;
            }
            // (Z/2^e)* = <-1> x <5>
            const int64_t half = pe / 4; // order of 5
            data->factors.push_back({pe, pe - 1, 2, p, e, true});
            data->factors.push_back({pe, 5, half, p, e, false});
            std::vector<int32_t> sign_tab(pe, -1), five_tab(pe, -1);
            for (int64_t a = 0; a < 2; ++a) {
                int64_t r = a == 0 ? 1 : pe - 1;
                for (int64_t t = 0; t < half; ++t) {
                    sign_tab[r] = static_cast<int32_t>(a);
                    five_tab[r] = static_cast<int32_t>(t);
                    r = static_cast<int64_t>(static_cast<__int128>(r) * 5 % pe);
                }
            }
            data->dlog.push_back(std::move(sign_tab));
            data->dlog.push_back(std::move(five_tab));
            continue;
        }
        const int64_t g = primitive_root(pe, p);
        const int64_t phi = arith::euler_phi(pe);
        data->factors.push_back({pe, g, phi, p, e, false});
        std::vector<int32_t> tab(pe, -1);
        int64_t r = 1;
        for (int64_t t = 0; t < phi; ++t) {
            tab[r] = static_cast<int32_t>(t);
            r = static_cast<int64_t>(static_cast<__int128>(r) * g % pe);
        }
        data->dlog.push_back(std::move(tab));
    }
    data->exponent = 1;
    for (const auto& f : data->factors)
        data->exponent = std::lcm(data->exponent, f.order);
    return data;
}

// Cache: groups are immutable; characters of equal modulus share tables.
std::shared_ptr<const CharGroupData> group_for(int64_t q) {
    static std::mutex mu;
    static std::map<int64_t, std::weak_ptr<const CharGroupData>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(q); it != cache.end())
        if (auto sp = it->second.lock())
            return sp;
    auto sp = build_group(q);
    cache[q] = sp;
    return sp;
}

UnitExponent reduce_exponent(int64_t num, int64_t den) {
    num = mod_reduce(num, den);
    const int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

// CRT lift of a generator: = gen mod its own prime power, = 1 mod the rest.
int64_t lift_generator(const CharGroupData& g, std::size_t i) {
    std::vector<std::pair<int64_t, int64_t>> congs;
    congs.emplace_back(g.factors[i].gen, g.factors[i].pe);
    int64_t rest = g.q;
    // strip this factor's full prime power from q
    int64_t pp = 1;
    while (rest % g.factors[i].prime == 0) {
        rest /= g.factors[i].prime;
        pp *= g.factors[i].prime;
    }
    (void)pp;
    if (rest > 1)
        congs.emplace_back(1, rest);
    return arith::crt(congs);
}

// Build the character mod M whose value at every unit u is
// e(values(u)), where values returns an exact exponent. Requires that
// the functor is multiplicative on units mod M with values of order
// dividing each generator's order (true for products of characters of
// moduli dividing M up to induction).
std::vector<int64_t> solve_exponents(const CharGroupData& g,
                                     const std::function<UnitExponent(int64_t)>& values) {
    std::vector<int64_t> exps(g.factors.size(), 0);
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        const int64_t u = lift_generator(g, i);
        const UnitExponent v = values(u);
        const int64_t d = g.factors[i].order;
        if (d % v.den != 0)
            throw input_error("character value is not a root of unity of the expected order");
        exps[i] = mod_reduce(v.num * (d / v.den), d);
    }
    return exps;
}

} // namespace
} // namespace detail

using detail::CharGroupData;

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharGroupData> g,
                                       std::vector<int64_t> exps)
    : group_(std::move(g)), exps_(std::move(exps)) {}

DirichletCharacter::DirichletCharacter() : DirichletCharacter(detail::group_for(1), {}) {}

DirichletCharacter DirichletCharacter::trivial(int64_t q) {
    auto g = detail::group_for(q);
    return DirichletCharacter(g, std::vector<int64_t>(g->factors.size(), 0));
}

int64_t DirichletCharacter::modulus() const { return group_->q; }

int64_t DirichletCharacter::index() const {
    int64_t idx = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        idx = idx * group_->factors[i].order + exps_[i];
    return idx;
}

std::optional<UnitExponent> DirichletCharacter::unit_exponent(int64_t n) const {
    const int64_t q = group_->q;
    if (q == 1)
        return UnitExponent{0, 1};
    n = mod_reduce(n, q);
    if (std::gcd(n, q) != 1)
        return std::nullopt;
    const int64_t L = group_->exponent;
    int64_t num = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] == 0)
            continue;
        const auto& f = group_->factors[i];
        const int32_t t = group_->dlog[i][n % f.pe];
        num = mod_reduce(num + exps_[i] % f.order * (L / f.order) % L * t, L);
    }
    return detail::reduce_exponent(num, L);
}

cplx DirichletCharacter::operator()(int64_t n) const {
    const auto ue = unit_exponent(n);
    if (!ue)
        return {0.0, 0.0};
    if (ue->num == 0)
        return {1.0, 0.0};
    if (2 * ue->num == ue->den)
        return {-1.0, 0.0};
    if (ue->den == 4) // exact quarter turns
        return ue->num == 1 ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(ue->num) /
                         static_cast<double>(ue->den);
    return {std::cos(theta), std::sin(theta)};
}

int64_t DirichletCharacter::order() const {
    int64_t ord = 1;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        const int64_t d = group_->factors[i].order;
        ord = std::lcm(ord, d / std::gcd(exps_[i], d));
    }
    return ord;
}

int DirichletCharacter::parity() const {
    const auto ue = unit_exponent(-1);
    return ue->num == 0 ? 1 : -1;
}

bool DirichletCharacter::is_trivial() const {
    return std::all_of(exps_.begin(), exps_.end(), [](int64_t c) { return c == 0; });
}

int64_t DirichletCharacter::conductor() const {
    int64_t cond = 1;
    // Track whether 2^e (e >= 3) contributes; its two components share a
    // conductor decided by the 5-part when that part is nontrivial.
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        const auto& f = group_->factors[i];
        const int64_t c = exps_[i];
        if (c == 0)
            continue;
        const int64_t ord = f.order / std::gcd(c, f.order);
        int64_t local;
        if (f.prime != 2) {
            // ord = p^a * m with m | p-1; conductor p^(a+1)
            int64_t pa = 1;
            int64_t o = ord;
            while (o % f.prime == 0) {
                o /= f.prime;
                pa *= f.prime;
            }
            local = pa * f.prime;
        } else if (f.is_sign_part || f.pe == 4) {
            local = 4;
        } else {
            local = 4 * ord; // order 2^b on <5> has conductor 2^(b+2)
        }
        cond = std::lcm(cond, local);
    }
    return cond;
}

DirichletCharacter DirichletCharacter::primitivize() const {
    const int64_t c = conductor();
    auto g = detail::group_for(c);
    const int64_t q = modulus();
    auto values = [&](int64_t u) -> UnitExponent {
        // lift u mod c to a residue mod q coprime to q
        std::vector<std::pair<int64_t, int64_t>> congs;
        for (const auto& [p, e] : arith::factor(q)) {
            int64_t pe = 1;
            for (int j = 0; j < e; ++j)
                pe *= p;
            if (c % p == 0) {
                int64_t ce = 1;
                int64_t cc = c;
                while (cc % p == 0) {
                    cc /= p;
                    ce *= p;
                }
                congs.emplace_back(u % ce, pe);
            } else {
                congs.emplace_back(1, pe);
            }
        }
        const int64_t lifted = q == 1 ? 1 : arith::crt(congs);
        const auto ue = unit_exponent(lifted);
        if (!ue)
            throw input_error("primitivize: lift not coprime to modulus");
        return *ue;
    };
    return DirichletCharacter(g, detail::solve_exponents(*g, values));
}

DirichletCharacter DirichletCharacter::induced_to(int64_t M) const {
    if (M % modulus() != 0)
        throw input_error("induced_to: target modulus must be a multiple of the modulus");
    auto g = detail::group_for(M);
    auto values = [&](int64_t u) -> UnitExponent {
        const auto ue = unit_exponent(u);
        if (!ue)
            throw input_error("induced_to: unit not coprime to base modulus");
        return *ue;
    };
    return DirichletCharacter(g, detail::solve_exponents(*g, values));
}

DirichletCharacter DirichletCharacter::conj() const {
    std::vector<int64_t> exps(exps_.size());
    for (std::size_t i = 0; i < exps_.size(); ++i)
        exps[i] = exps_[i] == 0 ? 0 : group_->factors[i].order - exps_[i];
    return DirichletCharacter(group_, std::move(exps));
}

DirichletCharacter operator*(const DirichletCharacter& lhs, const DirichletCharacter& rhs) {
    const int64_t M = std::lcm(lhs.modulus(), rhs.modulus());
    auto g = detail::group_for(M);
    auto values = [&](int64_t u) -> UnitExponent {
        const auto a = lhs.unit_exponent(u);
        const auto b = rhs.unit_exponent(u);
        if (!a || !b)
            throw input_error("character product: unit not coprime to both moduli");
        const int64_t den = std::lcm(a->den, b->den);
        return detail::reduce_exponent(a->num * (den / a->den) + b->num * (den / b->den), den);
    };
    return DirichletCharacter(g, detail::solve_exponents(*g, values));
}

bool operator==(const DirichletCharacter& lhs, const DirichletCharacter& rhs) {
    return lhs.modulus() == rhs.modulus() && lhs.exps_ == rhs.exps_;
}

std::vector<DirichletCharacter> enumerate_characters(int64_t q) {
    auto g = detail::group_for(q);
    const int64_t phi = arith::euler_phi(q);
    std::vector<DirichletCharacter> out;
    out.reserve(phi);
    for (int64_t j = 0; j < phi; ++j)
        out.push_back(character_by_index(q, j));
    return out;
}

DirichletCharacter character_by_index(int64_t q, int64_t index) {
    auto g = detail::group_for(q);
    const int64_t phi = arith::euler_phi(q);
    if (index < 0 || index >= phi)
        throw input_error("character index out of range for modulus " + std::to_string(q));
    std::vector<int64_t> exps(g->factors.size(), 0);
    int64_t rem = index;
    for (std::size_t i = g->factors.size(); i-- > 0;) {
        const int64_t d = g->factors[i].order;
        exps[i] = rem % d;
        rem /= d;
    }
    return DirichletCharacter(g, std::move(exps));
}

DirichletCharacter parse_character(std::string_view address) {
    const auto dot = address.find('.');
    if (dot == std::string_view::npos)
        throw input_error("character address must be of the form q.j");
    try {
        const int64_t q = std::stoll(std::string(address.substr(0, dot)));
        const int64_t j = std::stoll(std::string(address.substr(dot + 1)));
        return character_by_index(q, j);
    } catch (const std::invalid_argument&) {
        throw input_error("character address must be of the form q.j");
    } catch (const std::out_of_range&) {
        throw input_error("character address out of range");
    }
}

std::string character_address(const DirichletCharacter& chi) {
    return std::to_string(chi.modulus()) + "." + std::to_string(chi.index());
}

cplx gauss_sum(const DirichletCharacter& chi) {
    const int64_t q = chi.modulus();
    if (q == 1)
        return {1.0, 0.0};
    cplx acc{0.0, 0.0};
    for (int64_t a = 1; a < q; ++a) {
        if (std::gcd(a, q) != 1)
            continue;
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(a) /
                             static_cast<double>(q);
        acc += chi(a) * cplx{std::cos(theta), std::sin(theta)};
    }
    return acc;
}

int64_t ramanujan_sum(int64_t q, int64_t n) {
    if (q < 1)
        throw input_error("ramanujan_sum: q must be >= 1");
    // Hoelder: c_q(n) = mu(q/g) phi(q) / phi(q/g), g = gcd(q, n)
    const int64_t g = n == 0 ? q : std::gcd(q, std::abs(n));
    const int64_t m = q / g;
    const int mu = arith::mobius(m);
    if (mu == 0)
        return 0;
    return mu * (arith::euler_phi(q) / arith::euler_phi(m));
}

cplx indicator_decomposition(int64_t q, int64_t a, int64_t n) {
    if (!arith::is_prime(q))
        throw input_error("indicator_decomposition: q must be prime");
    if (std::gcd(a, q) != 1)
        throw not_coprime_error("indicator_decomposition: a must be coprime to q");
    const auto chars = enumerate_characters(q);
    const double dq = static_cast<double>(q);
    cplx acc = 1.0 / dq - static_cast<double>(ramanujan_sum(q, n)) / (dq * (dq - 1.0));
    for (std::size_t j = 1; j < chars.size(); ++j)
        acc += std::conj(chars[j](a)) * chars[j](n) / (dq - 1.0);
    return acc;
}

} // namespace lfv
