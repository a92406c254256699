#include "kv/combinat.hpp"

#include <array>

namespace kv {

gauss_rational operator+(const gauss_rational& a, const gauss_rational& b) {
    return {a.re + b.re, a.im + b.im};
}

gauss_rational operator-(const gauss_rational& a, const gauss_rational& b) {
    return {a.re - b.re, a.im - b.im};
}

gauss_rational operator-(const gauss_rational& a) { return {-a.re, -a.im}; }

gauss_rational operator*(const gauss_rational& a, const gauss_rational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

gauss_rational operator/(const gauss_rational& a, const gauss_rational& b) {
    rational den = b.re * b.re + b.im * b.im;
    if (den == 0) throw std::domain_error("gauss_rational: division by zero");
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

bool operator==(const gauss_rational& a, const gauss_rational& b) {
    return a.re == b.re && a.im == b.im;
}

namespace combinat {

namespace {

using table = std::array<std::array<bigint, max_stirling_n + 1>, max_stirling_n + 1>;

table build_s2() {
    table t{};
    t[0][0] = 1;
    for (int n = 1; n <= max_stirling_n; ++n)
        for (int m = 1; m <= n; ++m) t[n][m] = m * t[n - 1][m] + t[n - 1][m - 1];
    return t;
}

table build_s1() {
    table t{};
    t[0][0] = 1;
    for (int n = 0; n < max_stirling_n; ++n)
        for (int m = 1; m <= n + 1; ++m) t[n + 1][m] = t[n][m - 1] - n * t[n][m];
    return t;
}

const table& s2_table() {
    static const table t = build_s2();
    return t;
}

const table& s1_table() {
    static const table t = build_s1();
    return t;
}

const bigint& zero_int() {
    static const bigint z = 0;
    return z;
}

// Force construction before main so later reads are concurrent-safe.
[[maybe_unused]] const bool tables_ready = (s2_table(), s1_table(), true);

void check_n(int n, int m) {
    if (n < 0 || m < 0) throw std::domain_error("stirling: arguments must be nonnegative");
    if (n > max_stirling_n) throw std::domain_error("stirling: n exceeds the memoized range (64)");
}

}  // namespace

const bigint& stirling2(int n, int m) {
    check_n(n, m);
    if (m > n) return zero_int();
    return s2_table()[n][m];
}

const bigint& stirling1_signed(int n, int m) {
    check_n(n, m);
    if (m > n) return zero_int();
    return s1_table()[n][m];
}

cplx elem_sym_bruteforce(const std::vector<cplx>& x, int l) {
    const int n = static_cast<int>(x.size());
    if (n > 20) throw std::domain_error("elem_sym_bruteforce: n too large");
    if (l < 0 || l > n) throw std::domain_error("elem_sym_bruteforce: order out of range");
    cplx acc = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != l) continue;
        cplx p = 1.0;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) p *= x[j];
        acc += p;
    }
    return acc;
}

MeijerParamsH meijer_params_h(int k, cplx z) { return {k, z, h_params<cplx>(k, z)}; }

MeijerParamsK meijer_params_k(int k, cplx z) { return {k, z, k_params<cplx>(k, z)}; }

cplx lemma45_lhs(int k, cplx z, int m) { return lemma45_lhs_generic<cplx>(k, z, m); }

cplx lemma45_rhs(int k, cplx z, int m) { return lemma45_rhs_generic<cplx>(k, z, m); }

gauss_rational lemma45_lhs_exact(int k, const gauss_rational& z, int m) {
    return lemma45_lhs_generic<gauss_rational>(k, z, m);
}

gauss_rational lemma45_rhs_exact(int k, const gauss_rational& z, int m) {
    return lemma45_rhs_generic<gauss_rational>(k, z, m);
}

std::vector<gauss_rational> vanishing_factors(int k, const gauss_rational& z) {
    auto b = h_params<gauss_rational>(k, z);
    std::vector<gauss_rational> out;
    for (int n = 1; n <= 2 * k - 1; ++n) {
        // odd n = 2l-1 pairs with b_{2k-l+2}; even n = 2l pairs with b_{l+1}
        int idx = (n % 2 == 1) ? (2 * k - (n + 1) / 2 + 2) : (n / 2 + 1);
        gauss_rational f = gauss_rational(1) - gauss_rational(rational(2 * k, n)) * b[idx - 1];
        out.push_back(f);
    }
    return out;
}

}  // namespace combinat
}  // namespace kv
