#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fuzzcount/combinatorics.hpp"
#include "fuzzcount/group_spec.hpp"

namespace fuzzcount {

/// The vector (h_1(G), ..., h_L(G)): counts of proper subgroup chains ending
/// at G with non-trivial initial term, stratified by term count. Entries
/// beyond the longest chain are omitted and read as zero.
struct ChainProfile {
    std::vector<Count> counts;  // counts[k] = h_{k+1}(G)

    ChainProfile() = default;
    explicit ChainProfile(std::vector<Count> c) : counts(std::move(c)) {}

    std::size_t max_terms() const { return counts.size(); }

    /// h_i(G) with the zero-extension convention for i past the longest chain.
    Count h(std::size_t terms) const {
        if (terms == 0 || terms > counts.size()) return 0;
        return counts[terms - 1];
    }

    /// h(G) = sum of all h_i(G).
    Count total() const {
        Count t = 0;
        for (const Count& c : counts) t += c;
        return t;
    }

    bool operator==(const ChainProfile&) const = default;
};

/// Trivial-group conventions: the trivial group has exactly one fuzzy
/// subgroup and no chains with non-trivial initial term. These sit outside
/// the profile path, which requires a non-trivial group.
inline const Count kTrivialGroupFuzzyCount = 1;  // n({e})
inline const Count kTrivialGroupChainCount = 0;  // h({e})

/// Chain profile of the cyclic group of order p^n: h_k = C(n-1, k-1).
/// Independent of p.
inline ChainProfile cyclic_profile(unsigned n) {
    if (n == 0) {
        throw std::invalid_argument("cyclic_profile: n must be positive");
    }
    std::vector<Count> counts(n);
    for (unsigned k = 1; k <= n; ++k) {
        counts[k - 1] = binomial(n - 1, static_cast<long long>(k) - 1);
    }
    return ChainProfile(std::move(counts));
}

/// Chain profile of the elementary abelian group of order p^n:
///
///   h_k = sum over 1 <= i_1 < ... < i_{k-1} <= n-1 of
///         [n i_{k-1}]_p [i_{k-1} i_{k-2}]_p ... [i_2 i_1]_p.
///
/// Computed as a dynamic program over subgroup-order layers rather than by
/// enumerating index tuples: ways[e][t] counts weighted chains of t terms
/// ending at a fixed subgroup of order p^e, with edge weight [e' e]_p.
inline ChainProfile elementary_abelian_profile(unsigned n, std::uint64_t p) {
    if (n == 0) {
        throw std::invalid_argument("elementary_abelian_profile: n must be positive");
    }
    if (!is_prime(p)) {
        throw std::invalid_argument("elementary_abelian_profile: p is not prime");
    }

    // ways[e][t], 1 <= e <= n, 1 <= t <= e.
    std::vector<std::vector<Count>> ways(n + 1);
    for (unsigned e = 1; e <= n; ++e) {
        ways[e].assign(e + 1, 0);
        ways[e][1] = 1;
        for (unsigned t = 2; t <= e; ++t) {
            Count total = 0;
            for (unsigned lower = t - 1; lower < e; ++lower) {
                total += gaussian_binomial(e, lower, p) * ways[lower][t - 1];
            }
            ways[e][t] = total;
        }
    }

    std::vector<Count> counts(n);
    for (unsigned t = 1; t <= n; ++t) counts[t - 1] = ways[n][t];
    return ChainProfile(std::move(counts));
}

/// h(i, j): the number of chains in H(G) restricted by a fixed pair of
/// chains with i and j terms,
///
///   h(i, j) = sum_{k=0..j} C(i+k, i) C(i, j-k)   for i >= j.
///
/// For i < j the formula is evaluated with the arguments swapped, matching
/// how the product-group count consumes it.
inline Count interleave_count(unsigned i, unsigned j) {
    if (i == 0 || j == 0) {
        throw std::invalid_argument("interleave_count: arguments must be positive");
    }
    if (i < j) std::swap(i, j);
    Count total = 0;
    for (unsigned k = 0; k <= j; ++k) {
        total += binomial(i + k, i) * binomial(i, static_cast<long long>(j) - k);
    }
    return total;
}

/// n(G) for G = A x B of order p^n q^m:
///
///   n(G) = 2 * sum_{i,j} h(i,j) h_i(A) h_j(B)
///
/// with h(i,j) read as h(j,i) when i < j. Profiles may come from the closed
/// formulas or from the lattice oracle; the identity holds for any abelian
/// A and B.
inline Count count_fuzzy_subgroups(const GroupSpec& spec, const ChainProfile& profile_a,
                                   const ChainProfile& profile_b) {
    if (!spec.two_primes()) {
        throw std::invalid_argument(
            "count_fuzzy_subgroups: single-prime spec; use single_prime_count");
    }
    if (profile_a.max_terms() == 0 || profile_b.max_terms() == 0) {
        throw std::invalid_argument("count_fuzzy_subgroups: empty profile");
    }
    Count total = 0;
    for (unsigned i = 1; i <= profile_a.max_terms(); ++i) {
        const Count hi = profile_a.h(i);
        if (hi == 0) continue;
        for (unsigned j = 1; j <= profile_b.max_terms(); ++j) {
            const Count hj = profile_b.h(j);
            if (hj == 0) continue;
            total += interleave_count(i, j) * hi * hj;
        }
    }
    return 2 * total;
}

/// n(G) = 2 h(G) = 2 sum_i h_i(G) for a single-prime (or any non-trivial)
/// group given its profile.
inline Count single_prime_count(const ChainProfile& profile) {
    return 2 * profile.total();
}

/// Converts the chain-equivalence count n_1 into the count n_2 under the
/// coarser relation that also tracks vanishing membership: n_2 = 2 n_1 - 1.
inline Count to_weak_equivalence_count(const Count& n1) {
    if (n1 < 1) {
        throw std::invalid_argument("to_weak_equivalence_count: n1 must be >= 1");
    }
    return 2 * n1 - 1;
}

}  // namespace fuzzcount
