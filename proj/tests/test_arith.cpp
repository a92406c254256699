#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "kv/arith.hpp"
#include "kv/specialfn.hpp"

using namespace kv;

namespace {

// direct enumeration over divisors
cplx sigma_brute(int k, cplx z, long n) {
    cplx s = 0.0;
    for (long d = 1; std::pow(static_cast<double>(d), k) <= static_cast<double>(n); ++d) {
        long dk = 1;
        for (int i = 0; i < k; ++i) dk *= d;
        if (n % dk == 0) s += std::exp(z * std::log(static_cast<double>(d)));
    }
    return s;
}

cplx s_brute(int k, cplx z, long n) {
    cplx s = 0.0;
    const cplx e = (1.0 + z) / static_cast<double>(k) - 1.0;
    for (long d1 = 1;; ++d1) {
        long dk = 1;
        for (int i = 0; i < k; ++i) dk *= d1;
        if (dk > n) break;
        if (n % dk == 0) s += std::exp(e * std::log(static_cast<double>(n / dk)));
    }
    return s;
}

}  // namespace

TEST_CASE("pointwise divisor sums") {
    CHECK(std::abs(sigma_zk(3, {0.4, 1.0}, 1) - 1.0) == 0.0);
    CHECK(std::abs(sigma_zk(1, 0.0, 6) - 4.0) < 1e-15);
    CHECK(std::abs(sigma_zk(2, 2.0, 4) - 5.0) < 1e-14);
    CHECK(std::abs(s_zk(4, 0.3, 1) - 1.0) == 0.0);
    CHECK(std::abs(s_zk(2, 1.0, 4) - 2.0) < 1e-14);
    for (long n = 1; n <= 60; ++n) CHECK(std::abs(s_zk(1, 0.7, n) - sigma_zk(1, 0.7, n)) < 1e-12);
}

TEST_CASE("sieve against enumeration") {
    const DivisorTable d = build_table(1, 0.0, 20);
    CHECK(d.sigma[12].real() == 6.0);
    CHECK(build_table(2, 0.0, 10).sigma[4].real() == 2.0);
    std::mt19937 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const int k = 1 + static_cast<int>(4 * u(gen));
        const cplx z{-0.9 + (k + 0.8) * u(gen), u(gen) - 0.5};
        const DivisorTable t = build_table(k, z, 10000);
        CHECK(std::abs(t.sigma[1] - 1.0) < 1e-15);
        CHECK(std::abs(t.s_table[1] - 1.0) < 1e-15);
        for (long n = 1; n <= 10000; n += (n < 1000 ? 1 : 37)) {
            CHECK(std::abs(t.sigma[n] - sigma_brute(k, z, n)) < 1e-11 * std::max(1.0, std::abs(t.sigma[n])));
            CHECK(std::abs(t.s_table[n] - s_brute(k, z, n)) < 1e-11 * std::max(1.0, std::abs(t.s_table[n])));
        }
    }
}

TEST_CASE("sieve results do not depend on the chunking") {
    const DivisorTable a = build_table(2, {0.5, 0.2}, 200000);
    for (long n : {1L, 65535L, 65536L, 65537L, 131072L, 199999L, 200000L})
        CHECK(std::abs(a.sigma[n] - sigma_zk(2, {0.5, 0.2}, n)) < 1e-11 * std::abs(a.sigma[n]));
}

TEST_CASE("k = 1 tables coincide") {
    const DivisorTable t = build_table(1, {0.3, -0.4}, 500);
    for (long n = 1; n <= 500; ++n) CHECK(std::abs(t.sigma[n] - t.s_table[n]) < 1e-12 * std::abs(t.sigma[n]));
}

TEST_CASE("multiplicativity") {
    const cplx z{0.6, 0.3};
    const DivisorTable t = build_table(2, z, 40000);
    for (long m = 1; m <= 200; ++m)
        for (long n = 1; n <= 200; ++n)
            if (std::gcd(m, n) == 1) CHECK(std::abs(t.sigma[m * n] - t.sigma[m] * t.sigma[n]) < 1e-11 * std::abs(t.sigma[m * n]));
}

TEST_CASE("memory budget") {
    CHECK_THROWS_AS(build_table(1, 0.0, 1000000, TableKind::both, 1024), std::length_error);
}

TEST_CASE("csv export") {
    std::ostringstream out;
    build_table(2, 0.0, 3).write_csv(out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,re_sigma,im_sigma,re_s,im_s");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("dirichlet series") {
    CHECK(std::abs(dirichlet_partial(2, 0.5, 2.0, 100000) - zeta_c(2.0) * zeta_c(3.5)) < 1e-4);
    CHECK(std::abs(dirichlet_limit(1, 0.0, 2.0) - zeta_c(2.0) * zeta_c(2.0)) < 1e-14);
    CHECK(std::abs(dirichlet_partial(3, 0.5, 2.0, 200000, DirichletKind::s) - zeta_c(6.0) * zeta_c(2.5)) < 1e-3);
    // truncation error slope 1 - Re s on a log-log scale
    const cplx s = 2.5;
    const double e1 = std::abs(dirichlet_partial(1, 0.0, s, 2000) - dirichlet_limit(1, 0.0, s));
    const double e2 = std::abs(dirichlet_partial(1, 0.0, s, 64000) - dirichlet_limit(1, 0.0, s));
    const double slope = std::log(e2 / e1) / std::log(32.0);
    CHECK(std::abs(slope - (1.0 - s.real())) < 0.2);
}
