#ifndef LFV_SPECIAL_HPP
#define LFV_SPECIAL_HPP

#include <complex>

namespace lfv::special {

using cplx = std::complex<double>;

// Gamma(s) for complex s, Lanczos approximation with reflection for
// Re(s) < 1/2. Throws pole_error at non-positive integers.
cplx complex_gamma(cplx s);

// log Gamma(s) for Re(s) > 0 (principal branch of the Lanczos form;
// continuous on the right half-plane).
cplx log_gamma_right(cplx s);

// Gamma_C(s) = 2 (2 pi)^(-s) Gamma(s).
cplx gamma_C(cplx s);

// Upper incomplete gamma Gamma(w, x) for complex w and real x > 0.
// Power series below x < |w| + 1, continued fraction above.
cplx upper_incomplete_gamma(cplx w, double x);

} // namespace lfv::special

#endif
