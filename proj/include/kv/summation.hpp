#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kv/kernels.hpp"
#include "kv/quadrature.hpp"
#include "kv/report.hpp"

namespace kv {

enum class TestKind { exp_decay, gaussian, poly_exp };

// Test functions with analytic Mellin transforms: e^{-wt}, e^{-t^2}, t^j e^{-wt}.
struct TestFunctionSpec {
    TestKind kind = TestKind::exp_decay;
    cplx w{1.0, 0.0};
    int power = 0;

    static TestFunctionSpec exp_decay(cplx w);
    static TestFunctionSpec gaussian();
    static TestFunctionSpec poly_exp(int power, cplx w);

    cplx operator()(double t) const;
    cplx mellin(cplx s) const;         // int_0^inf f(t) t^{s-1} dt
    cplx mellin_deriv_at_one() const;  // int_0^inf f(t) log t dt
    cplx at_zero() const;              // f(0+)
    std::vector<cplx> odd_taylor(int count) const;  // coefficients of t, t^3, t^5, ...
    double cutoff() const;             // |f| is below 1e-19 beyond this point
    std::string name() const;
};

struct VoronoiConfig {
    KernelParams p;
    double alpha = 0.5;
    double beta = 10.5;
    long n_terms = 1024;
    QuadratureConfig quad;
};

// sum_{alpha < n < beta} sigma_z^(k)(n) f(n)
cplx voronoi_lhs(const VoronoiConfig& cfg, const TestFunctionSpec& f);

// Finite-interval formula with the H kernel; the rhs is recorded at every
// power of two up to n_terms.
VerificationReport voronoi_rhs(const VoronoiConfig& cfg, const TestFunctionSpec& f, double tol = 1e-3);

// k = 1 form with sigma_{-z} and Bessel kernels, z != 0, -1 < Re z < 1.
VerificationReport voronoi_bessel_k1(cplx z, double alpha, double beta, long n_terms, const TestFunctionSpec& f,
                                     double tol = 1e-4);

// Infinite version for rapidly decaying f, N dual terms.
VerificationReport voronoi_schwartz(const KernelParams& p, const TestFunctionSpec& f, long N, double tol = 1e-4);

// sum' d(n), n <= x, against the Bessel series with N terms.
VerificationReport classical_voronoi_check(double x, long N, double tol = 5e-3);

// Pieces exposed for term-by-term checks.
// Coefficient in front of the finite dual series.
cplx finite_dual_scale(const KernelParams& p);
// int_alpha^beta f(t) t^{(1+z)/k-1} H((2 pi)^{1+1/k} (n t)^{1/k}) dt with H from h_eval.
cplx finite_dual_integral(const KernelParams& p, const TestFunctionSpec& f, double alpha, double beta, long n);
// int_0^inf H((2 pi)^{1+1/k} (n y)^{1/k}) y^{(1+z)/k-1} f(y) dy with H from h_eval.
cplx schwartz_dual_integral(const KernelParams& p, const TestFunctionSpec& f, long n);

}  // namespace kv
