#ifndef LFV_MODULAR_HPP
#define LFV_MODULAR_HPP

#include "lfv/coeffs.hpp"
#include "lfv/lfun.hpp"

#include <span>
#include <string>
#include <vector>

namespace lfv {

// Exact integer 2x2 matrix (a b; c d).
struct Mat2Z {
    int64_t a = 1, b = 0, c = 0, d = 1;

    int64_t det() const { return a * d - b * c; }
    bool in_gamma0(int64_t N) const { return det() == 1 && c % N == 0; }
    bool in_gamma1(int64_t N) const {
        return in_gamma0(N) && (a - 1) % N == 0 && (d - 1) % N == 0;
    }
    // inverse for det = +-1
    Mat2Z inverse() const;
    friend Mat2Z operator*(const Mat2Z& lhs, const Mat2Z& rhs);
    friend bool operator==(const Mat2Z& lhs, const Mat2Z& rhs) = default;

    cplx apply(cplx z) const; // Moebius action (az+b)/(cz+d)
};

Mat2Z parse_matrix(std::string_view text); // "a,b;c,d"
std::string matrix_string(const Mat2Z& m);

struct FourierEval {
    cplx value;
    double tail_bound = 0.0;
    int64_t X_used = 0;
};

// sum_{n<=X} a_n e(n z) plus the closed-form geometric tail envelope
// C sum_{n>X} n^(k/2) e^(-2 pi n Im z).
FourierEval evaluate_fourier(const CoefficientSequence& seq, cplx z, int64_t X);

// same, but throws insufficient_coefficients when the tail bound at X
// exceeds tol
FourierEval evaluate_fourier(const CoefficientSequence& seq, cplx z, int64_t X, double tol);

struct SlashValue {
    cplx value;
    double err_bound = 0.0;
};

// (f|gamma)(z) = det(gamma)^(k/2) (cz+d)^(-k) f((az+b)/(cz+d)); throws
// insufficient_coefficients when the series tail at gamma z exceeds tol.
SlashValue slash(const CoefficientSequence& seq, const Mat2Z& gamma, cplx z, double tol);

// Element of Gamma_0(N) with top row (q, -a): (q, -a; -N m, (N a m + 1)/q)
// with m the least positive solution of N a m = -1 (mod q).
Mat2Z gamma_qa(int64_t q, int64_t a, int64_t N);

struct MatrixIdentityReport {
    struct Entry {
        std::string identity;
        int64_t N = 0, q = 0, a = 0;
        bool pass = false;
        std::string detail;
    };
    std::vector<Entry> entries;
    bool pass() const;
};

// The four integer matrix identities behind the gamma_{q,a} construction,
// checked in exact arithmetic:
//  (i)   (1,0;N,1) = W_N T^-1 W_N^-1
//  (ii)  same-top-row elements of Gamma_0(N) differ by a power of (1,0;N,1)
//  (iii) (q,-1;1-q,1) = T^-1 (1,0;N,1)^((1-q)/N) for primes q = 1 mod N
//  (iv)  q W_N (1,m/q;0,1) W_{Nq^2}^-1 (1,a/q;0,1)^-1 = gamma_{q,a}
MatrixIdentityReport verify_matrix_identities(int64_t N, std::span<const int64_t> q_list);

// C_chi = conj(xi(q)) for trivial chi, else
// chi(-N) eps1 conj(eps_chi tau(conj chi)/tau(chi)).
cplx compute_C_chi(const DirichletCharacter& chi, const DirichletCharacter& xi,
                   cplx eps1, cplx eps_chi, int64_t N);

// C_hat_q(a) = (1/phi(q)) sum_chi C_chi conj(chi(a)), characters in
// canonical order; S_q(x) = sum over units a of C_hat_q(a) e((a-1)x/q).
cplx c_hat(int64_t q, int64_t a, std::span<const cplx> C_values);
cplx s_q(int64_t q, int64_t x, std::span<const cplx> C_values);

struct SqConfig {
    std::vector<cplx> s_points;         // empty -> per-L default grid
    std::vector<double> y_multipliers;  // scaled by 1/sqrt(M); empty -> default
    double solver_tol = 1e-10;
};

struct SqReport {
    std::vector<cplx> epsilons; // slot j: solved epsilon for character q.j (slot 0: untwisted)
    std::vector<cplx> C_values; // C_chi in canonical order
    std::vector<cplx> S_values; // S_q(x) for x = 0..q-1
    double max_deviation = 0;   // max |S_q(x) - 1|
    double tol = 0;
    bool pass = false;
};

// Full chain: solve the untwisted and all twisted root numbers, build the
// C_chi, and test S_q(x) = 1 for every residue x.
SqReport verify_sq_equals_one(const CoefficientSequence& seq, int64_t q,
                              const SqConfig& config, double tol);

struct ModularityReport {
    struct Point {
        cplx z;
        cplx slashed;
        cplx expected;
        double defect = 0;
        double err_bound = 0;
    };
    std::vector<Point> points;
    double max_defect = 0;
    double max_err_bound = 0;
    double tol = 0;
    bool pass = false;
};

// max_z |(f|gamma)(z) - conj(xi(q)) f(z)| with q the top-left entry of
// gamma mod N; pass iff within tol plus the evaluation error bounds.
ModularityReport modularity_check(const CoefficientSequence& seq, const Mat2Z& gamma,
                                  std::span<const cplx> z_points, double tol);

// Fourier coefficients a_1..a_{n_max} of f|gamma recovered by the
// rectangle rule over one period at height y. The height trades series
// convergence at gamma z against the e^(2 pi n y) noise amplification of
// the recovered coefficients; 1/4 works to n_max ~ 10 in doubles.
std::vector<cplx> fourier_from_slash(const CoefficientSequence& seq, const Mat2Z& gamma,
                                     int n_max, double y = 0.25, int nodes = 256);

} // namespace lfv

#endif
