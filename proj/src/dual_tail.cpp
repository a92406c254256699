#include "kv/dual_tail.hpp"

#include <cmath>
#include <numbers>

#include "kv/specialfn.hpp"

namespace kv {

namespace {

using std::numbers::pi;

constexpr int max_orders = 12;
constexpr double last_start_cap = 2e4;

cplx order_exponent(const KernelParams& p, int m) { return static_cast<double>(p.k * (2 * m + 1)) + p.z + 1.0; }

long ipow(long d, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r *= d;
    return r;
}

}  // namespace

cplx s_dirichlet_tail(const KernelParams& p, int m, long start) {
    // S(n) n^{-p_m/k} = d1^{-p_m} d2^{-(2m+2)} over d1^k d2 = n
    const cplx pm = order_exponent(p, m);
    const double inner = 2.0 * m + 2.0;
    cplx acc = 0.0;
    long d1 = 1;
    for (; ipow(d1, p.k) < start; ++d1) {
        const long q = ipow(d1, p.k);
        const double first = static_cast<double>((start + q - 1) / q);
        acc += std::exp(-pm * std::log(static_cast<double>(d1))) * hurwitz_zeta_c(inner, first);
    }
    return acc + zeta_c(inner) * hurwitz_zeta_c(pm, static_cast<double>(d1));
}

PowerLawTail::PowerLawTail(const KernelParams& p, const std::vector<cplx>& odd_taylor, cplx scale) : p_(p) {
    const double k = p.k;
    // the whole expansion vanishes when cos(pi p_m / 2) does
    if (std::abs(cos_pi(0.5 * order_exponent(p, 0))) < 1e-15) return;
    const int n_orders = std::min<int>(max_orders, static_cast<int>(odd_taylor.size()));
    double fact = 1.0;  // (2m+1)!
    for (int m = 0; m < n_orders; ++m) {
        if (m > 0) fact *= (2.0 * m) * (2.0 * m + 1.0);
        const cplx pm = order_exponent(p, m);
        const double sg = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^{m+1}
        const cplx c = scale * odd_taylor[m] * sg * fact * cos_pi(0.5 * pm) *
                       std::exp(lgamma_c(pm) - pm * (1.0 + 1.0 / k) * std::log(2.0 * pi));
        long start = 1;
        if (m > 0) {
            // order m is at most a fifth of the last nonzero order from here on
            int prev = m - 1;
            while (prev > 0 && coeff_[prev] == cplx(0.0, 0.0)) --prev;
            start = starts_.back();
            if (coeff_[prev] != cplx(0.0, 0.0)) {
                const double ratio = std::abs(c / coeff_[prev]);
                const double n = std::pow(5.0 * ratio, 1.0 / (2.0 * (m - prev)));
                if (n > last_start_cap) break;
                start = std::max(start, static_cast<long>(std::ceil(n)));
            }
        }
        coeff_.push_back(c);
        starts_.push_back(start);
    }
    for (std::size_t m = 0; m < coeff_.size(); ++m)
        if (coeff_[m] != cplx(0.0, 0.0)) restored_ += coeff_[m] * s_dirichlet_tail(p, static_cast<int>(m), starts_[m]);
}

cplx PowerLawTail::at(long n, cplx s_n) const {
    const double ln = std::log(static_cast<double>(n));
    cplx acc = 0.0;
    for (std::size_t m = 0; m < coeff_.size() && n >= starts_[m]; ++m)
        acc += coeff_[m] * std::exp(-order_exponent(p_, static_cast<int>(m)) / static_cast<double>(p_.k) * ln);
    return acc * s_n;
}

}  // namespace kv
