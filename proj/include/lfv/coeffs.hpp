#ifndef LFV_COEFFS_HPP
#define LFV_COEFFS_HPP

#include "lfv/chargroup.hpp"
#include "lfv/errors.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lfv {

struct parity_error : input_error {
    using input_error::input_error;
};
struct conductor_condition_error : input_error {
    using input_error::input_error;
};
struct odd_character_error : input_error {
    using input_error::input_error;
};

// Arithmetically normalized Fourier coefficients a_n = lambda_n n^((k-1)/2),
// n = 1..X. Immutable by convention once built.
struct CoefficientSequence {
    int k = 0;                     // weight
    int64_t N = 1;                 // level
    DirichletCharacter nebentypus; // character mod N
    std::vector<cplx> a;           // a[0] is a_1
    double growth_C = 1.0;         // |lambda_n| <= C sqrt(n) over the data
    bool hecke_flag = false;       // builder claims the Hecke relations

    int64_t length() const { return static_cast<int64_t>(a.size()); }
    cplx coeff(int64_t n) const { return a[static_cast<std::size_t>(n - 1)]; }
    cplx lambda(int64_t n) const;
};

// f_n = sum_{d|n} xi1(n/d) xi2(d) d^(k-1); level N1 N2, nebentypus the
// character mod N1 N2 induced by xi1 xi2. xi1 must be primitive; parity
// xi1(-1) xi2(-1) = (-1)^k; xi1 even when k = 1; xi2 primitive when
// k != 2; for k = 2, N2/cond(xi2) must be squarefree and coprime to
// cond(xi2), and the all-trivial modulus-1 case is rejected.
CoefficientSequence eisenstein_coefficients(const DirichletCharacter& xi1,
                                            const DirichletCharacter& xi2,
                                            int k, int64_t X);

struct HeckeViolation {
    enum class Kind { Multiplicativity, PrimePower, Conjugation, Growth };
    Kind kind;
    int64_t n = 0; // the coefficient index checked (mn, p^(r+1), p, or n)
    int64_t m = 0; // cofactor for multiplicativity, else 0
    cplx lhs, rhs;
    double defect = 0.0;
};

struct HeckeReport {
    std::vector<HeckeViolation> violations;
    double tol = 0.0;
    int64_t X = 0;
    bool pass() const { return violations.empty(); }
};

// Checks, in arithmetic normalization: a_{mn} = a_m a_n for coprime m,n;
// a_{p^(r+1)} = a_p a_{p^r} - xi(p) p^(k-1) a_{p^(r-1)};
// conj(a_p) = conj(xi(p)) a_p for p not dividing N; |a_n| <= C n^(k/2).
// Violations are data, not errors. Defect measure is
// |lhs-rhs| / max(1, |lhs|, |rhs|).
HeckeReport check_hecke_relations(const CoefficientSequence& seq, double tol = 1e-10);

// a_n -> a_n chi(n); level N q^2, nebentypus xi chi^2 mod N q^2.
// Requires gcd(q, N) = 1.
CoefficientSequence twist_coefficients(const CoefficientSequence& seq,
                                       const DirichletCharacter& chi);

struct EtaFactor {
    int64_t scale = 1; // the d of eta(d z)
    int exponent = 1;  // positive
};

// q-expansion of prod_d eta(d z)^{r_d}: integer coefficients of
// q^offset, ..., q^(offset + X - 1), offset = sum(d r) / 24.
struct EtaExpansion {
    std::vector<int64_t> coeffs;
    int64_t offset = 0;
    int k = 0; // weight = (sum of exponents) / 2
};

EtaExpansion eta_product_expansion(std::span<const EtaFactor> factors, int64_t X);
std::vector<EtaFactor> parse_eta_spec(std::string_view spec); // "1^2*11^2"
std::string eta_spec_string(std::span<const EtaFactor> factors);

// Wraps an offset-1 eta expansion as a coefficient sequence with the
// given level and trivial nebentypus.
CoefficientSequence sequence_from_eta(const EtaExpansion& eta, int64_t level);

// Line-oriented text format. Header:
//   # k=<int> N=<int> chi=<q.j> X=<int> C=<float>
// then X data lines "<n> <re> <im>" with n = 1, 2, ..., X.
CoefficientSequence load_coefficients(std::istream& in);
CoefficientSequence load_coefficients_file(const std::string& path);
void save_coefficients(const CoefficientSequence& seq, std::ostream& out);
void save_coefficients_file(const CoefficientSequence& seq, const std::string& path);

} // namespace lfv

#endif
