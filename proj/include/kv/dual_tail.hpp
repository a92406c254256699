#pragma once

#include <complex>
#include <vector>

#include "kv/kernels.hpp"

namespace kv {

// Power-law part of the dual integrals
//   I(n) = int_0^inf H(a_n y^{1/k}) y^{(1+z)/k-1} f(y) dy,   a_n = (2 pi)^{1+1/k} n^{1/k},
// read off from the odd Taylor coefficients of f at 0 through the Mellin
// transform of H. Order m falls like n^{-p_m/k} with p_m = k(2m+1) + z + 1.
// Subtracting it term by term and adding the n-sum back in closed form turns a
// slowly converging dual series into a rapidly converging one.
class PowerLawTail {
public:
    PowerLawTail() = default;
    // odd_taylor[m] is the coefficient of y^{2m+1}; scale multiplies every order.
    PowerLawTail(const KernelParams& p, const std::vector<cplx>& odd_taylor, cplx scale);

    // Orders active at n, times S(n).
    cplx at(long n, cplx s_n) const;
    // scale * sum_m coeff_m * sum_{n >= start_m} S(n) n^{-p_m/k}
    cplx restored() const { return restored_; }
    int orders() const { return static_cast<int>(starts_.size()); }
    long last_start() const { return starts_.empty() ? 0 : starts_.back(); }

private:
    KernelParams p_;
    std::vector<cplx> coeff_;
    std::vector<long> starts_;
    cplx restored_{0.0, 0.0};
};

// sum_{n >= start} S_z^(k)(n) n^{-s} with s = p_m/k, evaluated through Hurwitz zetas.
cplx s_dirichlet_tail(const KernelParams& p, int m, long start);

}  // namespace kv
