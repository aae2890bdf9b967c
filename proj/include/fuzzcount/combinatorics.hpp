#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

namespace fuzzcount {

/// Exact non-negative integer count. All arithmetic in this library is
/// arbitrary precision; nothing is ever truncated or rounded.
using Count = boost::multiprecision::cpp_int;

/// Deterministic trial-division primality test. Inputs are small primes by
/// use case, so no probabilistic machinery is warranted.
inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (std::uint64_t d = 3; d * d <= p; d += 2) {
        if (p % d == 0) return false;
    }
    return true;
}

/// p^e as an exact integer.
inline Count integer_pow(std::uint64_t base, unsigned exp) {
    Count r = 1;
    Count b = base;
    while (exp > 0) {
        if (exp & 1u) r *= b;
        b *= b;
        exp >>= 1u;
    }
    return r;
}

/// C(n, k). Out-of-range k (negative or > n) yields 0, which keeps the
/// chain-count summations uniform without special-casing callers.
///
/// Uses the multiplicative formula; every intermediate partial product is
/// itself a binomial coefficient, so each division is exact.
inline Count binomial(unsigned n, long long k) {
    if (k < 0 || static_cast<unsigned long long>(k) > n) return 0;
    unsigned kk = static_cast<unsigned>(k);
    if (kk > n - kk) kk = n - kk;
    Count result = 1;
    for (unsigned i = 1; i <= kk; ++i) {
        result *= n - kk + i;
        result /= i;
    }
    return result;
}

/// Parameters of the Gaussian binomial [n m]_p: the number of subgroups of
/// order p^m in an elementary abelian group of order p^n.
struct GaussianParams {
    unsigned n;
    unsigned m;
    std::uint64_t p;

    GaussianParams(unsigned n_, unsigned m_, std::uint64_t p_) : n(n_), m(m_), p(p_) {
        if (!is_prime(p_)) {
            throw std::invalid_argument("GaussianParams: p = " + std::to_string(p_) +
                                        " is not prime");
        }
    }
};

namespace detail {

inline Count gaussian_binomial_product(unsigned n, unsigned m, std::uint64_t p) {
    // [n m]_p = prod_{i=1..m} (p^{n-m+i} - 1) / (p^i - 1).
    // The partial product after j factors equals [n-m+j j]_p, so dividing at
    // every step keeps intermediates integral.
    Count result = 1;
    for (unsigned i = 1; i <= m; ++i) {
        Count num = integer_pow(p, n - m + i) - 1;
        Count den = integer_pow(p, i) - 1;
        result *= num;
        Count quotient, remainder;
        boost::multiprecision::divide_qr(result, den, quotient, remainder);
        if (remainder != 0) {
            throw std::logic_error("gaussian_binomial: inexact division step");
        }
        result = quotient;
    }
    return result;
}

}  // namespace detail

/// Memo table for Gaussian binomials, keyed by (n, m, p). Per-thread, so
/// concurrent callers never contend; each entry is written once.
using GaussianCache = std::map<std::tuple<unsigned, unsigned, std::uint64_t>, Count>;

inline GaussianCache& gaussian_cache() {
    thread_local GaussianCache cache;
    return cache;
}

/// [n m]_p, memoized per thread. Returns 0 when m > n, 1 when m == 0 or
/// m == n. The table formulas reuse the same brackets heavily, hence the
/// unbounded per-process cache.
inline Count gaussian_binomial(const GaussianParams& params) {
    const unsigned n = params.n;
    const unsigned m = params.m;
    if (m > n) return 0;
    if (m == 0 || m == n) return 1;

    GaussianCache& cache = gaussian_cache();
    GaussianCache::key_type key{n, m, params.p};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    Count value = detail::gaussian_binomial_product(n, m, params.p);
    cache.emplace(std::move(key), value);
    return value;
}

inline Count gaussian_binomial(unsigned n, unsigned m, std::uint64_t p) {
    return gaussian_binomial(GaussianParams{n, m, p});
}

}  // namespace fuzzcount
