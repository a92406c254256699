#include <doctest.h>

#include <random>

#include "kv/combinat.hpp"

using namespace kv;
using namespace kv::combinat;

TEST_CASE("stirling numbers of the second kind") {
    CHECK(stirling2(0, 0) == 1);
    CHECK(stirling2(4, 3) == 6);
    CHECK(stirling2(4, 2) == 7);
    CHECK(stirling2(3, 5) == 0);
    for (int n = 1; n <= 30; ++n)
        for (int m = 1; m <= 30; ++m) CHECK(stirling2(n, m) == m * stirling2(n - 1, m) + stirling2(n - 1, m - 1));
}

TEST_CASE("signed stirling numbers of the first kind") {
    CHECK(stirling1_signed(3, 3) == 1);
    CHECK(stirling1_signed(3, 2) == -3);
    CHECK(stirling1_signed(3, 1) == 2);
    for (int n = 1; n < 30; ++n)
        for (int m = 1; m <= n + 1; ++m)
            CHECK(stirling1_signed(n + 1, m) == stirling1_signed(n, m - 1) - n * stirling1_signed(n, m));
}

TEST_CASE("elementary symmetric polynomials") {
    std::vector<cplx> x{1.0, 2.0, 3.0};
    CHECK(std::abs(elem_sym(x, 2) - 11.0) == 0.0);
    CHECK(std::abs(elem_sym(x, 0) - 1.0) == 0.0);
    CHECK_THROWS_AS(elem_sym(x, 4), std::domain_error);
    CHECK(std::abs(elem_sym(meijer_params_h(2, 0.0).b, 1) - 2.5) < 1e-15);

    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 1; n <= 12; ++n) {
        std::vector<cplx> v(n);
        for (auto& c : v) c = {u(gen), u(gen)};
        for (int l = 0; l <= n; ++l) {
            const cplx a = elem_sym(v, l), b = elem_sym_bruteforce(v, l);
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("meijer parameter vectors") {
    const auto h = meijer_params_h(1, 0.0).b;
    const auto k = meijer_params_k(1, 0.0).bprime;
    const std::vector<cplx> want{0.0, 0.0, 0.5, 0.5};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(h[i] - want[i]) < 1e-15);
        CHECK(std::abs(k[i] - want[i]) < 1e-15);
    }
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int kk = 1; kk <= 6; ++kk) {
        const cplx z{u(gen) * kk, u(gen)};
        cplx s = 0.0;
        for (const cplx& b : meijer_params_h(kk, z).b) s += b;
        CHECK(std::abs(s - (1.0 + kk - (1.0 + z) / static_cast<double>(kk))) < 1e-13);
    }
}

TEST_CASE("coefficient identity, exact path") {
    std::mt19937 gen(11);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 17);
    for (int k = 1; k <= 6; ++k) {
        for (int trial = 0; trial < 20; ++trial) {
            const gauss_rational z(rational(num(gen), den(gen)), rational(num(gen), den(gen)));
            for (int m = 1; m <= 2 * k + 2; ++m) CHECK(lemma45_lhs_exact(k, z, m) == lemma45_rhs_exact(k, z, m));
        }
    }
}

// sum of |summands| in the coefficient identity, the scale of its cancellation
double lemma45_scale(int k, cplx z, int m) {
    const auto e = elem_sym_all(h_params<cplx>(k, z));
    double acc = 0.0, pw = 1.0;
    for (int j = 0; j <= 2 * k + 2 - m; ++j) {
        acc += pw * std::abs(e[j]) * static_cast<double>(stirling2(2 * k + 2 - j, m));
        pw *= 2.0 * k;
    }
    return acc;
}

TEST_CASE("coefficient identity, floating path") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx z{u(gen), u(gen)};
        for (int k = 1; k <= 6; ++k)
            for (int m = 1; m <= 2 * k + 2; ++m) {
                const cplx l = lemma45_lhs(k, z, m), r = lemma45_rhs(k, z, m);
                CHECK(std::abs(l - r) <= 1e-10 * lemma45_scale(k, z, m));
            }
    }
}

TEST_CASE("vanishing factors") {
    for (int k = 1; k <= 8; ++k) {
        const gauss_rational z(rational(3, 7), rational(-2, 5));
        for (const auto& f : vanishing_factors(k, z)) CHECK(f == gauss_rational(0));
    }
}

TEST_CASE("lemma45 rejects m outside range") { CHECK_THROWS_AS(lemma45_lhs(2, 0.0, 0), std::domain_error); }
