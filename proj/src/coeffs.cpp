#include "lfv/coeffs.hpp"

#include "lfv/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lfv {

cplx CoefficientSequence::lambda(int64_t n) const {
    return coeff(n) / std::pow(static_cast<double>(n), (k - 1) / 2.0);
}

namespace {

// exact for integer bases while the result stays below 2^53
double ipow_double(int64_t base, int exp) {
    double acc = 1.0;
    for (int i = 0; i < exp; ++i)
        acc *= static_cast<double>(base);
    return acc;
}

double growth_constant(const std::vector<cplx>& a, int k) {
    double c = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        c = std::max(c, std::abs(a[i]) / std::pow(n, k / 2.0));
    }
    return std::max(c, 1.0);
}

} // namespace

CoefficientSequence eisenstein_coefficients(const DirichletCharacter& xi1,
                                            const DirichletCharacter& xi2,
                                            int k, int64_t X) {
    if (k < 1)
        throw input_error("eisenstein_coefficients: weight must be >= 1");
    if (X < 1)
        throw input_error("eisenstein_coefficients: need X >= 1");
    if (!xi1.is_primitive())
        throw input_error("eisenstein_coefficients: xi1 must be primitive");
    const int sign = k % 2 == 0 ? 1 : -1;
    if (xi1.parity() * xi2.parity() != sign)
        throw parity_error("eisenstein_coefficients: parity violation, "
                           "xi1(-1) xi2(-1) != (-1)^k");
    if (k == 1 && !xi1.is_even())
        throw odd_character_error("eisenstein_coefficients: k=1 requires even xi1");
    const int64_t N1 = xi1.modulus(), N2 = xi2.modulus();
    if (k != 2 && !xi2.is_primitive())
        throw input_error("eisenstein_coefficients: xi2 must be primitive for k != 2");
    if (k == 2) {
        if (N1 == 1 && N2 == 1)
            throw conductor_condition_error(
                "eisenstein_coefficients: k=2 with both characters trivial mod 1 "
                "has no modular Eisenstein series");
        const int64_t N2star = xi2.conductor();
        const int64_t ratio = N2 / N2star;
        if (arith::mobius(ratio) == 0 || std::gcd(ratio, N2star) != 1)
            throw conductor_condition_error(
                "eisenstein_coefficients: k=2 conductor condition violated, "
                "N2/cond(xi2) must be squarefree and coprime to cond(xi2)");
    }

    std::vector<cplx> a(static_cast<std::size_t>(X), cplx{0.0, 0.0});
    for (int64_t d = 1; d <= X; ++d) {
        const cplx x2 = xi2(d);
        if (x2 == cplx{0.0, 0.0})
            continue;
        const cplx w = x2 * ipow_double(d, k - 1);
        for (int64_t m = 1; m * d <= X; ++m) {
            const cplx x1 = xi1(m);
            if (x1 != cplx{0.0, 0.0})
                a[static_cast<std::size_t>(m * d - 1)] += x1 * w;
        }
    }

    CoefficientSequence seq;
    seq.k = k;
    seq.N = N1 * N2;
    seq.nebentypus = (xi1 * xi2).induced_to(N1 * N2);
    seq.a = std::move(a);
    seq.growth_C = growth_constant(seq.a, k);
    seq.hecke_flag = true;
    return seq;
}

HeckeReport check_hecke_relations(const CoefficientSequence& seq, double tol) {
    const int64_t X = seq.length();
    if (X < 4)
        throw input_error("check_hecke_relations: need at least 4 coefficients");
    HeckeReport report;
    report.tol = tol;
    report.X = X;
    auto defect = [](cplx lhs, cplx rhs) {
        return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
    };
    auto flag = [&](HeckeViolation::Kind kind, int64_t n, int64_t m, cplx lhs, cplx rhs) {
        const double d = defect(lhs, rhs);
        if (d > tol)
            report.violations.push_back({kind, n, m, lhs, rhs, d});
    };

    // multiplicativity over coprime pairs
    for (int64_t m = 2; m * (m + 1) <= X; ++m)
        for (int64_t n = m + 1; m * n <= X; ++n)
            if (std::gcd(m, n) == 1)
                flag(HeckeViolation::Kind::Multiplicativity, m * n, m,
                     seq.coeff(m * n), seq.coeff(m) * seq.coeff(n));

    // prime power recursion
    for (int64_t p = 2; p * p <= X; ++p) {
        if (!arith::is_prime(p))
            continue;
        const cplx xi_p = seq.nebentypus(p);
        const double pk = ipow_double(p, seq.k - 1);
        int64_t pr = p; // p^r
        while (pr * p <= X) {
            const cplx prev = pr / p >= 1 ? seq.coeff(pr / p) : cplx{1.0, 0.0};
            flag(HeckeViolation::Kind::PrimePower, pr * p, p, seq.coeff(pr * p),
                 seq.coeff(p) * seq.coeff(pr) - xi_p * pk * prev);
            pr *= p;
        }
    }

    // conjugation at primes away from the level
    for (int64_t p = 2; p <= X; ++p) {
        if (!arith::is_prime(p) || seq.N % p == 0)
            continue;
        flag(HeckeViolation::Kind::Conjugation, p, 0, std::conj(seq.coeff(p)),
             std::conj(seq.nebentypus(p)) * seq.coeff(p));
    }

    // growth bound |a_n| <= C n^(k/2)
    for (int64_t n = 1; n <= X; ++n) {
        const double bound = seq.growth_C * std::pow(static_cast<double>(n), seq.k / 2.0);
        const double v = std::abs(seq.coeff(n));
        if (v > bound * (1.0 + 1e-12))
            report.violations.push_back({HeckeViolation::Kind::Growth, n, 0,
                                         seq.coeff(n), cplx{bound, 0.0},
                                         (v - bound) / std::max(1.0, bound)});
    }
    return report;
}

CoefficientSequence twist_coefficients(const CoefficientSequence& seq,
                                       const DirichletCharacter& chi) {
    const int64_t q = chi.modulus();
    // Fresh twists need gcd(q, N) = 1 and move the level to N q^2. When
    // q^2 already divides the level (untwisting a twisted sequence) the
    // level absorbs the twist and stays put.
    const bool untwist = q > 1 && seq.N % (q * q) == 0;
    if (!untwist && std::gcd(q, seq.N) != 1)
        throw not_coprime_error("twist_coefficients: twist modulus must be coprime to level");
    CoefficientSequence out;
    out.k = seq.k;
    out.N = untwist ? seq.N : seq.N * q * q;
    out.nebentypus = (seq.nebentypus.induced_to(out.N) * (chi * chi)).induced_to(out.N);
    out.a.resize(seq.a.size());
    for (std::size_t i = 0; i < seq.a.size(); ++i)
        out.a[i] = seq.a[i] * chi(static_cast<int64_t>(i + 1));
    out.growth_C = seq.growth_C;
    out.hecke_flag = seq.hecke_flag; // twisting preserves the relations at level N q^2
    return out;
}

namespace {

using bigint = __int128;

void check_range(bigint v) {
    // keep one factor of headroom below int64 so downstream products stay exact
    constexpr bigint lim = static_cast<bigint>(1) << 62;
    if (v >= lim || v <= -lim)
        throw input_error("eta_product_expansion: coefficient overflow; reduce the count");
}

// multiply the dense series (mod x^(len)) by the pentagonal-number series
// prod_n (1 - x^(d n)) in place
void multiply_pentagonal(std::vector<bigint>& c, int64_t d) {
    const int64_t len = static_cast<int64_t>(c.size());
    // pentagonal exponents g_j = j(3j-1)/2 for j = 1, -1, 2, -2, ...
    std::vector<std::pair<int64_t, int>> terms; // (d*g_j, sign)
    for (int64_t j = 1;; ++j) {
        const int64_t g1 = j * (3 * j - 1) / 2;
        const int64_t g2 = j * (3 * j + 1) / 2;
        const int sign = j % 2 == 0 ? 1 : -1;
        if (d * g1 >= len && d * g2 >= len)
            break;
        if (d * g1 < len)
            terms.emplace_back(d * g1, sign);
        if (d * g2 < len)
            terms.emplace_back(d * g2, sign);
    }
    for (int64_t n = len - 1; n >= 0; --n) {
        bigint acc = c[static_cast<std::size_t>(n)];
        for (const auto& [g, sign] : terms) {
            if (g > n)
                continue;
            const bigint t = c[static_cast<std::size_t>(n - g)];
            acc += sign > 0 ? t : -t;
        }
        check_range(acc);
        c[static_cast<std::size_t>(n)] = acc;
    }
}

} // namespace

EtaExpansion eta_product_expansion(std::span<const EtaFactor> factors, int64_t X) {
    if (factors.empty())
        throw input_error("eta_product_expansion: empty factor list");
    if (X < 1)
        throw input_error("eta_product_expansion: need X >= 1");
    int64_t weight24 = 0; // sum d*r
    int64_t rsum = 0;
    for (const auto& f : factors) {
        if (f.scale < 1 || f.exponent < 1)
            throw input_error("eta_product_expansion: scales and exponents must be positive");
        weight24 += f.scale * f.exponent;
        rsum += f.exponent;
    }
    if (weight24 % 24 != 0)
        throw input_error("eta_product_expansion: sum of scale*exponent must be divisible by 24");
    if (rsum % 2 != 0)
        throw input_error("eta_product_expansion: sum of exponents must be even");

    std::vector<bigint> c(static_cast<std::size_t>(X), 0);
    c[0] = 1;
    for (const auto& f : factors)
        for (int r = 0; r < f.exponent; ++r)
            multiply_pentagonal(c, f.scale);

    EtaExpansion out;
    out.offset = weight24 / 24;
    out.k = static_cast<int>(rsum / 2);
    out.coeffs.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        out.coeffs[i] = static_cast<int64_t>(c[i]);
    return out;
}

std::vector<EtaFactor> parse_eta_spec(std::string_view spec) {
    std::vector<EtaFactor> out;
    std::string s(spec);
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '*')) {
        const auto caret = tok.find('^');
        try {
            EtaFactor f;
            if (caret == std::string::npos) {
                f.scale = std::stoll(tok);
                f.exponent = 1;
            } else {
                f.scale = std::stoll(tok.substr(0, caret));
                f.exponent = std::stoi(tok.substr(caret + 1));
            }
            out.push_back(f);
        } catch (const std::exception&) {
            throw input_error("parse_eta_spec: malformed factor '" + tok + "'");
        }
    }
    if (out.empty())
        throw input_error("parse_eta_spec: empty spec");
    return out;
}

std::string eta_spec_string(std::span<const EtaFactor> factors) {
    std::string s;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i)
            s += '*';
        s += std::to_string(factors[i].scale) + "^" + std::to_string(factors[i].exponent);
    }
    return s;
}

CoefficientSequence sequence_from_eta(const EtaExpansion& eta, int64_t level) {
    if (eta.offset != 1)
        throw input_error("sequence_from_eta: expansion must start at q^1");
    if (eta.coeffs.empty() || eta.coeffs[0] != 1)
        throw input_error("sequence_from_eta: leading coefficient must be 1");
    CoefficientSequence seq;
    seq.k = eta.k;
    seq.N = level;
    seq.nebentypus = DirichletCharacter::trivial(level);
    seq.a.resize(eta.coeffs.size());
    for (std::size_t i = 0; i < eta.coeffs.size(); ++i)
        seq.a[i] = cplx{static_cast<double>(eta.coeffs[i]), 0.0};
    seq.growth_C = growth_constant(seq.a, seq.k);
    seq.hecke_flag = true;
    return seq;
}

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

CoefficientSequence load_coefficients(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# ", 0) != 0)
        throw input_error("coefficient file: malformed header");
    std::istringstream hs(header.substr(2));
    std::string tok;
    int64_t k = -1, N = -1, X = -1;
    std::string chi_addr;
    double C = -1.0;
    bool have_k = false, have_N = false, have_chi = false, have_X = false, have_C = false;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw input_error("coefficient file: malformed header token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "k") {
                k = std::stoll(val);
                have_k = true;
            } else if (key == "N") {
                N = std::stoll(val);
                have_N = true;
            } else if (key == "chi") {
                chi_addr = val;
                have_chi = true;
            } else if (key == "X") {
                X = std::stoll(val);
                have_X = true;
            } else if (key == "C") {
                C = std::stod(val);
                have_C = true;
            } else {
                throw input_error("coefficient file: unknown header key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw input_error("coefficient file: malformed header value '" + tok + "'");
        }
    }
    if (!(have_k && have_N && have_chi && have_X && have_C))
        throw input_error("coefficient file: malformed header, missing keys");
    if (k < 1 || N < 1 || X < 1)
        throw input_error("coefficient file: malformed header, nonpositive k/N/X");

    CoefficientSequence seq;
    seq.k = static_cast<int>(k);
    seq.N = N;
    seq.nebentypus = parse_character(chi_addr);
    if (seq.nebentypus.modulus() != N)
        throw input_error("coefficient file: nebentypus modulus must equal the level");
    seq.growth_C = C;
    seq.a.reserve(static_cast<std::size_t>(X));

    std::string line;
    int64_t expected = 1;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        int64_t n;
        double re, im;
        if (!(ls >> n >> re >> im))
            throw input_error("coefficient file: malformed data line '" + line + "'");
        if (expected == 1 && n != 1)
            throw input_error("coefficient file: missing a_1");
        if (n != expected)
            throw input_error("coefficient file: indices must increase from 1 with no gaps");
        seq.a.emplace_back(re, im);
        ++expected;
    }
    if (seq.a.empty())
        throw input_error("coefficient file: missing a_1");
    if (seq.length() != X)
        throw input_error("coefficient file: header X does not match the data");
    if (seq.a[0] != cplx{1.0, 0.0})
        throw input_error("coefficient file: not normalized, a_1 must be 1");
    return seq;
}

CoefficientSequence load_coefficients_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open coefficient file '" + path + "'");
    return load_coefficients(in);
}

void save_coefficients(const CoefficientSequence& seq, std::ostream& out) {
    out << "# k=" << seq.k << " N=" << seq.N << " chi="
        << character_address(seq.nebentypus) << " X=" << seq.length() << " C="
        << format_g17(seq.growth_C) << "\n";
    for (int64_t n = 1; n <= seq.length(); ++n) {
        const cplx v = seq.coeff(n);
        out << n << " " << format_g17(v.real()) << " " << format_g17(v.imag()) << "\n";
    }
}

void save_coefficients_file(const CoefficientSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot open output file '" + path + "'");
    save_coefficients(seq, out);
    if (!out)
        throw input_error("failed writing '" + path + "'");
}

} // namespace lfv
