#include "kv/arith.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kv/parallel.hpp"
#include "kv/specialfn.hpp"

namespace kv {

namespace {

cplx cpow_int(long d, cplx e) {
    if (d == 1) return 1.0;
    return std::exp(e * std::log(static_cast<double>(d)));
}

// largest d with d^k <= n
long kth_root_floor(long n, int k) {
    long d = static_cast<long>(std::pow(static_cast<double>(n), 1.0 / k));
    auto pw = [k](long v) {
        long double r = 1;
        for (int i = 0; i < k; ++i) r *= v;
        return r;
    };
    while (d > 1 && pw(d) > n) --d;
    while (pw(d + 1) <= n) ++d;
    return d;
}

long ipow(long d, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r *= d;
    return r;
}

void check_args(int k, long n) {
    if (k < 1) throw std::domain_error("k must be a positive integer");
    if (n < 1) throw std::domain_error("n must be at least 1");
}

constexpr long chunk = 1 << 16;

}  // namespace

cplx sigma_zk(int k, cplx z, long n) {
    check_args(k, n);
    cplx acc = 0.0;
    const long dmax = kth_root_floor(n, k);
    for (long d = 1; d <= dmax; ++d)
        if (n % ipow(d, k) == 0) acc += cpow_int(d, z);
    return acc;
}

cplx s_zk(int k, cplx z, long n) {
    check_args(k, n);
    const cplx e = (1.0 + z) / static_cast<double>(k) - 1.0;
    cplx acc = 0.0;
    const long dmax = kth_root_floor(n, k);
    for (long d1 = 1; d1 <= dmax; ++d1) {
        const long q = ipow(d1, k);
        if (n % q == 0) acc += cpow_int(n / q, e);
    }
    return acc;
}

DivisorTable build_table(int k, cplx z, long N, TableKind which, std::size_t budget_bytes) {
    check_args(k, N);
    const bool want_sigma = which != TableKind::s;
    const bool want_s = which != TableKind::sigma;
    // result arrays plus the d2 power table used by the S sieve
    const std::size_t arrays = (want_sigma ? 1 : 0) + (want_s ? 2 : 0);
    const std::size_t need = arrays * 16 * static_cast<std::size_t>(N + 1);
    if (need > budget_bytes)
        throw std::length_error("build_table: " + std::to_string(need) + " bytes exceed the budget of " +
                                std::to_string(budget_bytes));

    DivisorTable t;
    t.k = k;
    t.z = z;
    t.limit = N;
    const long dmax = kth_root_floor(N, k);
    std::vector<long> step(dmax + 1);
    for (long d = 1; d <= dmax; ++d) step[d] = ipow(d, k);
    const std::size_t nchunks = static_cast<std::size_t>(N / chunk + 1);

    if (want_sigma) {
        std::vector<cplx> dz(dmax + 1);
        for (long d = 1; d <= dmax; ++d) dz[d] = cpow_int(d, z);
        t.sigma.assign(N + 1, 0.0);
        parallel_for(nchunks, [&](std::size_t c) {
            const long lo = std::max<long>(1, static_cast<long>(c) * chunk);
            const long hi = std::min<long>(N, static_cast<long>(c + 1) * chunk - 1);
            for (long d = 1; d <= dmax && step[d] <= hi; ++d) {
                const long q = step[d];
                for (long m = ((lo + q - 1) / q) * q; m <= hi; m += q) t.sigma[m] += dz[d];
            }
        });
    }
    if (want_s) {
        const cplx e = (1.0 + z) / static_cast<double>(k) - 1.0;
        std::vector<cplx> pw(N + 1);
        parallel_for(nchunks, [&](std::size_t c) {
            const long lo = std::max<long>(1, static_cast<long>(c) * chunk);
            const long hi = std::min<long>(N, static_cast<long>(c + 1) * chunk - 1);
            for (long d2 = lo; d2 <= hi; ++d2) pw[d2] = cpow_int(d2, e);
        });
        t.s_table.assign(N + 1, 0.0);
        parallel_for(nchunks, [&](std::size_t c) {
            const long lo = std::max<long>(1, static_cast<long>(c) * chunk);
            const long hi = std::min<long>(N, static_cast<long>(c + 1) * chunk - 1);
            for (long d1 = 1; d1 <= dmax && step[d1] <= hi; ++d1) {
                const long q = step[d1];
                for (long m = ((lo + q - 1) / q) * q; m <= hi; m += q) t.s_table[m] += pw[m / q];
            }
        });
    }
    return t;
}

void DivisorTable::write_csv(std::ostream& out) const {
    out << "n,re_sigma,im_sigma,re_s,im_s\n";
    out.precision(17);
    for (long n = 1; n <= limit; ++n) {
        cplx a = sigma.empty() ? cplx(NAN, NAN) : sigma[n];
        cplx b = s_table.empty() ? cplx(NAN, NAN) : s_table[n];
        out << n << ',' << a.real() << ',' << a.imag() << ',' << b.real() << ',' << b.imag() << '\n';
    }
}

cplx dirichlet_partial(int k, cplx z, cplx s, long N, DirichletKind which) {
    const DivisorTable t = build_table(k, z, N, which == DirichletKind::sigma ? TableKind::sigma : TableKind::s);
    const std::vector<cplx>& a = which == DirichletKind::sigma ? t.sigma : t.s_table;
    // reverse order: small terms first
    cplx acc = 0.0;
    for (long n = N; n >= 1; --n) acc += a[n] * std::exp(-s * std::log(static_cast<double>(n)));
    return acc;
}

cplx dirichlet_limit(int k, cplx z, cplx s, DirichletKind which) {
    const double kd = static_cast<double>(k);
    if (which == DirichletKind::sigma) return zeta_c(s) * zeta_c(kd * s - z);
    return zeta_c(kd * s) * zeta_c(s + 1.0 - (1.0 + z) / kd);
}

}  // namespace kv
