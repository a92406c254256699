#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kv {

using cplx = std::complex<double>;
using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

// Exact complex rational p + q i.
struct gauss_rational {
    rational re{0};
    rational im{0};

    gauss_rational() = default;
    gauss_rational(rational r, rational i = rational(0)) : re(std::move(r)), im(std::move(i)) {}
    gauss_rational(long long n) : re(n), im(0) {}

    cplx to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

gauss_rational operator+(const gauss_rational& a, const gauss_rational& b);
gauss_rational operator-(const gauss_rational& a, const gauss_rational& b);
gauss_rational operator-(const gauss_rational& a);
gauss_rational operator*(const gauss_rational& a, const gauss_rational& b);
gauss_rational operator/(const gauss_rational& a, const gauss_rational& b);
bool operator==(const gauss_rational& a, const gauss_rational& b);

namespace combinat {

constexpr int max_stirling_n = 64;

// S(n, m): partitions of an n-set into m blocks.
const bigint& stirling2(int n, int m);
// s(n, m) with s(n+1, m) = s(n, m-1) - n s(n, m).
const bigint& stirling1_signed(int n, int m);

// Scalar construction helpers shared by the double and exact paths.
template <class T>
T ratio(long long p, long long q);

template <>
inline cplx ratio<cplx>(long long p, long long q) {
    return cplx(static_cast<double>(p) / static_cast<double>(q), 0.0);
}

template <>
inline gauss_rational ratio<gauss_rational>(long long p, long long q) {
    return gauss_rational(rational(p, q));
}

template <class T>
T from_bigint(const bigint& n);

template <>
inline cplx from_bigint<cplx>(const bigint& n) {
    return cplx(static_cast<double>(n), 0.0);
}

template <>
inline gauss_rational from_bigint<gauss_rational>(const bigint& n) {
    return gauss_rational(rational(n));
}

// e_l(x_1..x_n): coefficient of t^l in prod (1 + x_j t).
template <class T>
T elem_sym(const std::vector<T>& x, int l) {
    const int n = static_cast<int>(x.size());
    if (l < 0 || l > n) throw std::domain_error("elem_sym: order must satisfy 0 <= l <= n");
    std::vector<T> c(n + 1, ratio<T>(0, 1));
    c[0] = ratio<T>(1, 1);
    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i >= 1; --i) c[i] = c[i] + c[i - 1] * x[j];
    }
    return c[l];
}

// All e_0..e_n at once.
template <class T>
std::vector<T> elem_sym_all(const std::vector<T>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<T> c(n + 1, ratio<T>(0, 1));
    c[0] = ratio<T>(1, 1);
    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i >= 1; --i) c[i] = c[i] + c[i - 1] * x[j];
    }
    return c;
}

// Direct subset enumeration, only for small n.
cplx elem_sym_bruteforce(const std::vector<cplx>& x, int l);

// Parameter vector of the G^{k+1,0}_{0,2k+2} representation of H.
template <class T>
std::vector<T> h_params(int k, const T& z) {
    if (k < 1) throw std::domain_error("h_params: k must be positive");
    std::vector<T> b(2 * k + 2);
    const T one = ratio<T>(1, 1);
    for (int j = 1; j <= k; ++j) b[j - 1] = ratio<T>(j - 1, k);
    b[k] = ratio<T>(1, 2) - (one + z) / ratio<T>(2 * k, 1);
    for (int j = k + 2; j <= 2 * k + 1; ++j) b[j - 1] = ratio<T>(4 * k + 3 - 2 * j, 2 * k);
    b[2 * k + 1] = one - (one + z) / ratio<T>(2 * k, 1);
    return b;
}

// Parameter vector of the G^{k+2,0}_{0,2k+2} representation of K.
template <class T>
std::vector<T> k_params(int k, const T& z) {
    if (k < 1) throw std::domain_error("k_params: k must be positive");
    std::vector<T> b(2 * k + 2);
    const T twok = ratio<T>(2 * k, 1);
    for (int j = 1; j <= k; ++j) b[j - 1] = ratio<T>(j - 1, k);
    b[k] = (ratio<T>(k - 1, 1) - z) / twok;
    b[k + 1] = (ratio<T>(2 * k - 1, 1) - z) / twok;
    for (int j = k + 3; j <= 2 * k + 2; ++j) b[j - 1] = ratio<T>(4 * k - 2 * j + 5, 2 * k);
    return b;
}

struct MeijerParamsH {
    int k;
    cplx z;
    std::vector<cplx> b;
};

struct MeijerParamsK {
    int k;
    cplx z;
    std::vector<cplx> bprime;
};

MeijerParamsH meijer_params_h(int k, cplx z);
MeijerParamsK meijer_params_k(int k, cplx z);

// sum_{j=0}^{2k+2-m} (-2k)^j e_j(b) S(2k+2-j, m)
template <class T>
T lemma45_lhs_generic(int k, const T& z, int m) {
    if (m < 1 || m > 2 * k + 2) throw std::domain_error("lemma45: m must lie in [1, 2k+2]");
    auto e = elem_sym_all(h_params<T>(k, z));
    T acc = ratio<T>(0, 1);
    T pw = ratio<T>(1, 1);
    const T step = ratio<T>(-2 * k, 1);
    for (int j = 0; j <= 2 * k + 2 - m; ++j) {
        const bigint& s = stirling2(2 * k + 2 - j, m);
        acc = acc + pw * e[j] * from_bigint<T>(s);
        pw = pw * step;
    }
    return acc;
}

// The four-case closed form the left side must equal.
template <class T>
T lemma45_rhs_generic(int k, const T& z, int m) {
    const T one = ratio<T>(1, 1);
    if (m == 2 * k + 2) return one;
    if (m == 2 * k + 1) return z * ratio<T>(2, 1) + ratio<T>(k + 3, 1);
    if (m == 2 * k) return (z + one) * (z + ratio<T>(k + 1, 1));
    if (m >= 1 && m <= 2 * k - 1) return ratio<T>(0, 1);
    throw std::domain_error("lemma45: m must lie in [1, 2k+2]");
}

cplx lemma45_lhs(int k, cplx z, int m);
cplx lemma45_rhs(int k, cplx z, int m);
gauss_rational lemma45_lhs_exact(int k, const gauss_rational& z, int m);
gauss_rational lemma45_rhs_exact(int k, const gauss_rational& z, int m);

// The factors (1 - (2k/n) b_i) that vanish in the coefficient identity.
// Returns them for n = 1..2k-1 in order.
std::vector<gauss_rational> vanishing_factors(int k, const gauss_rational& z);

}  // namespace combinat
}  // namespace kv
