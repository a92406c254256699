#pragma once

#include <complex>

#include "kv/dd.hpp"

namespace kv {

using cplx = std::complex<double>;

namespace consts {
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline const dd euler_gamma_dd{0.5772156649015329, -4.942915152430645e-18};
inline const dd pi_dd{3.141592653589793, 1.2246467991473532e-16};
}  // namespace consts

// sin(pi s) with the real part reduced first, so zeros at integers are exact.
cplx sin_pi(cplx s);
cplx cos_pi(cplx s);

cplx gamma_c(cplx s);
// log Gamma on some branch: exp(lgamma_c(s)) == gamma_c(s).
cplx lgamma_c(cplx s);
// 1/Gamma, entire; exactly 0 at nonpositive integers.
cplx rgamma_c(cplx s);

cplx zeta_c(cplx s);
// sum_{n>=0} (n + a)^{-s} for Re s > 1, a > 0.
cplx hurwitz_zeta_c(cplx s, double a);
cplx digamma_c(cplx s);

enum class BesselKind { J, Y, I, K };

cplx bessel(cplx nu, BesselKind kind, cplx x);
inline cplx bessel_j(cplx nu, cplx x) { return bessel(nu, BesselKind::J, x); }
inline cplx bessel_y(cplx nu, cplx x) { return bessel(nu, BesselKind::Y, x); }
inline cplx bessel_i(cplx nu, cplx x) { return bessel(nu, BesselKind::I, x); }
inline cplx bessel_k(cplx nu, cplx x) { return bessel(nu, BesselKind::K, x); }

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt for Re x > 0 (trapezoid rule).
cplx bessel_k_integral(cplx nu, cplx x);

// 1F2(a; b, c | x)
cplx hyp1f2(cplx a, cplx b, cplx c, cplx x);

// B(z, b) = int_0^inf t^z cos t / (t^2 + b^2) dt and its meromorphic continuation.
cplx b_transform(cplx z, cplx b);

// Individual routes, exposed for cross-checks.
cplx b_transform_series(cplx z, cplx b);      // continuation formula with the Gamma series
cplx b_transform_hyp(cplx z, cplx b);         // 1F2 form
cplx b_transform_even(int m, cplx b);         // z = 2m, m >= 0
cplx b_transform_neg_even(int m, cplx b);     // z = -2m, m >= 1
cplx b_transform_odd(int m, cplx b);          // z = 2m + 1, m >= 0
cplx b_transform_rotated(cplx z, cplx b);     // rotated-ray quadrature, Re z > -1
cplx b_transform_residue(cplx z, cplx b);     // imaginary-axis form plus pole residue, Re z > -1

}  // namespace kv
