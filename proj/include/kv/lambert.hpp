#pragma once

#include <complex>
#include <vector>

#include "kv/kernels.hpp"

namespace kv {

struct LambertConfig {
    KernelParams p;
    cplx w{1.0, 0.0};
    long n_lhs = 0;  // 0 picks the truncation from the tail bound
    long n_rhs = 0;  // 0 picks it adaptively
};

struct SeriesValue {
    cplx value{0.0, 0.0};
    double est_error = 0.0;
    long terms = 0;
};

// sum_n sigma_z^(k)(n) e^{-nw}
SeriesValue lambert_lhs(const LambertConfig& cfg);
// sum_d d^z / (e^{d^k w} - 1), the same series regrouped
SeriesValue lambert_lhs_resummed(const LambertConfig& cfg);

struct WigertRhs {
    cplx main{0.0, 0.0};        // zeta and Gamma terms
    cplx dual{0.0, 0.0};        // sum over n of the B-transform combinations
    cplx value{0.0, 0.0};
    double est_error = 0.0;
    long terms = 0;
    int asymptotic_orders = 0;  // power-law orders removed from the dual series
    long asymptotic_start = 0;  // n from which all of them are removed
    std::vector<std::pair<long, cplx>> trace;  // partial values of the full right side
};

// -zeta(-z)/2 + zeta(k-z)/w + Gamma((1+z)/k) zeta((1+z)/k) / (k w^{(1+z)/k})
cplx lambert_main_terms(const KernelParams& p, cplx w);
// n-th term of the dual series, prefactor included.
cplx wigert_dual_term(const KernelParams& p, cplx w, long n, cplx s_n);
WigertRhs wigert_rhs(const LambertConfig& cfg);

// sum_n S_z^(k)(n) exp(-n^{1/k} u), Re u > 0
SeriesValue lbar(int k, cplx z, cplx u);

SeriesValue wigert_even_corollary(int k, int m, cplx w);
SeriesValue wigert_odd_corollary(int k, int m, cplx w);
// Wigert's even-k form written with sum n^{1/k-1}/(exp(n^{1/k} u) - 1).
SeriesValue wigert_classical_even(int k, cplx w);

// Max |lhs - rhs| over the four partial-fraction forms of t^k/(t^{2k} + a^{2k})
// that apply to this parity of k.
double partial_fraction_check(int k, cplx a, double t);

// int_0^inf t^{k+2m} cos t / (t^{2k} + a^{2k}) dt, k even, 0 <= 2m < k
cplx exact_cosine_integral(int k, int m, double a);
cplx cosine_integral_quadrature(int k, int m, double a);

}  // namespace kv
