#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <vector>

namespace kv {

using cplx = std::complex<double>;

// sum of d^z over d with d^k | n
cplx sigma_zk(int k, cplx z, long n);
// sum over d1^k d2 = n of d2^{(1+z)/k - 1}
cplx s_zk(int k, cplx z, long n);

// Dense tables indexed by n (slot 0 unused).
struct DivisorTable {
    int k = 1;
    cplx z{0.0, 0.0};
    long limit = 0;
    std::vector<cplx> sigma;
    std::vector<cplx> s_table;

    void write_csv(std::ostream& out) const;
};

enum class TableKind { sigma, s, both };

// Sieve over d-ranges. budget_bytes bounds the memory of the result; a
// std::length_error is thrown if the tables would not fit.
DivisorTable build_table(int k, cplx z, long N, TableKind which = TableKind::both,
                         std::size_t budget_bytes = std::size_t(1) << 31);

enum class DirichletKind { sigma, s };
// sum_{n <= N} a(n) n^{-s}
cplx dirichlet_partial(int k, cplx z, cplx s, long N, DirichletKind which = DirichletKind::sigma);
// Limits of the two series: zeta(s) zeta(ks - z) and zeta(ks) zeta(s + 1 - (1+z)/k).
cplx dirichlet_limit(int k, cplx z, cplx s, DirichletKind which = DirichletKind::sigma);

}  // namespace kv
