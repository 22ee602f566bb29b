#ifndef LFV_LFUN_HPP
#define LFV_LFUN_HPP

#include "lfv/coeffs.hpp"

#include <map>
#include <span>
#include <vector>

namespace lfv {

// Lambda(s) = Gamma_C(s + (k-1)/2) sum_n a_n n^(-s-(k-1)/2), evaluated
// through its cut-point representation. M is the effective level: the
// level of the (possibly twisted) sequence.
struct CompletedLFunction {
    CoefficientSequence seq;
    int64_t M = 1;
    bool twisted = false;
    int k() const { return seq.k; }
};

CompletedLFunction make_lfunction(CoefficientSequence seq, bool twisted = false);

struct CutSum {
    cplx value;
    double tail_bound = 0.0;
    int64_t X_used = 0;
};

// S(s; y0) = 2 sum_{n<=X} a_n (2 pi n)^(-w) Gamma(w, 2 pi n y0) with
// w = s + (k-1)/2. X is chosen adaptively so the analytic tail bound
// (from |a_n| <= C n^(k/2)) is below tol; throws
// insufficient_coefficients when the stored sequence cannot reach it.
CutSum cut_sum(const CompletedLFunction& L, cplx s, double y0, double tol);

struct FEValue {
    cplx value;
    double err_bound = 0.0;
    int64_t X_used = 0;
};

// S(s; y0) + eps M^(1/2-s) conj(S(1-conj(s); 1/(M y0))). Independent of
// y0 exactly when the functional equation holds with root number eps.
FEValue fe_value(const CompletedLFunction& L, cplx s, cplx eps, double y0, double tol);

// eps = (S(s;y1) - S(s;y0)) / (T(s;y0) - T(s;y1)) with
// T(s;y) = M^(1/2-s) conj(S(1-conj(s); 1/(M y))). Throws
// degenerate_cut_pair when the denominator is below 1e-13.
cplx solve_epsilon(const CompletedLFunction& L, cplx s, double y0, double y1, double tol);

struct FEReport {
    cplx epsilon;                    // componentwise median of the solves
    double unimodularity_defect = 0; // ||eps| - 1|
    double max_residual = 0;         // max over s of fe_value spread over the y grid
    double epsilon_spread = 0;       // max pairwise distance among the solves
    bool pass = false;
    double tol = 0;
    int64_t X_used = 0;
};

// Runs solve_epsilon over every (s, y-pair) combination, takes the
// median, then measures cut-point independence of fe_value with it.
// For untwisted k <= 2 the s grid must stay clear of the potential pole
// set {0, 1, -1/2, 1/2, 3/2}.
FEReport verify_fe(const CompletedLFunction& L, std::span<const cplx> s_grid,
                   std::span<const double> y_grid, double tol);

std::vector<double> default_y_grid(int64_t M); // {0.7, 1, 1.4} / sqrt(M)
std::vector<cplx> default_s_grid(int k, bool twisted);

// Finite Dirichlet series sum c_n n^(-s).
class DirichletPolynomial {
public:
    DirichletPolynomial() = default;
    explicit DirichletPolynomial(std::map<int64_t, cplx> coeffs);
    void set(int64_t n, cplx c);
    cplx coefficient(int64_t n) const;
    const std::map<int64_t, cplx>& coefficients() const { return c_; }
    cplx evaluate(cplx s) const;

private:
    std::map<int64_t, cplx> c_;
};

// D_q(s) = -1 + lambda_q q^(1-s) - xi(q) q^(1-2s) as a polynomial
// supported on {1, q, q^2}.
DirichletPolynomial ratio_Dq(cplx lambda_q, cplx xi_q, int64_t q);

// Coefficient form of D_q(s) = xi(q) q^(1-2s) conj(D_q(1-conj(s))):
// c_{q^2/n} = xi_q (q/n) conj(c_n) for n in {1, q, q^2}.
bool check_Dq_fe(const DirichletPolynomial& D, int64_t q, cplx xi_q,
                 double tol = 1e-12);

struct RamanujanTwistReport {
    std::vector<int64_t> violations; // indices n where the identity fails
    double max_defect = 0;
    double tol = 0;
    int64_t X = 0;
    bool pass() const { return violations.empty(); }
};

// Coefficientwise identity behind Lambda_{c_q} = D_q Lambda_1:
// a_n c_q(n) = -a_n + q a_q a_{n/q} [q|n] - q^k xi(q) a_{n/q^2} [q^2|n].
RamanujanTwistReport verify_ramanujan_twist(const CoefficientSequence& seq,
                                            int64_t q, int64_t X,
                                            double tol = 1e-10);

struct ConvolutionReport {
    std::vector<int64_t> violations;
    double max_defect = 0;
    double tol = 0;
    int64_t X = 0;
    bool pass() const { return violations.empty(); }
};

// Checks that the coefficients of L(s+(k-1)/2, xi1) L(s-(k-1)/2, xi2)
// reproduce the Eisenstein coefficient sequence up to X.
ConvolutionReport eisenstein_L_factorization(const DirichletCharacter& xi1,
                                             const DirichletCharacter& xi2,
                                             int k, int64_t X,
                                             double tol = 1e-10);

} // namespace lfv

#endif
