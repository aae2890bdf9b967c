#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fuzzcount/lattice.hpp"

namespace fuzzcount {

/// A pair (a, b) of strictly increasing vectors with entries in {1,...,s}
/// whose union covers {1,...,s}. This is the combinatorial shadow of a
/// merged chain: a marks the positions where the p-part grows, b where the
/// q-part grows. Two pairs are equal iff a = a' and b = b' componentwise.
struct VectorPair {
    std::vector<unsigned> a;
    std::vector<unsigned> b;
    unsigned s = 0;

    bool operator==(const VectorPair&) const = default;
    bool operator<(const VectorPair& other) const {
        if (a != other.a) return a < other.a;
        return b < other.b;
    }
};

/// All vector pairs in V_{i,j,s}, ordered lexicographically on a then b.
/// Empty when s is outside [max(i,j), i+j].
///
/// Generation mirrors the counting argument: choose set(a) of size i inside
/// {1..s}, then the overlap set(a) & set(b) of size i+j-s inside set(a);
/// set(b) is the complement of set(a) plus the overlap.
inline std::vector<VectorPair> enumerate_pairs(unsigned i, unsigned j, unsigned s) {
    if (i == 0 || j == 0 || s == 0) {
        throw std::invalid_argument("enumerate_pairs: arguments must be positive");
    }
    std::vector<VectorPair> pairs;
    if (s < std::max(i, j) || s > i + j) return pairs;
    const unsigned overlap = i + j - s;

    std::vector<unsigned> a_set(i);
    std::vector<unsigned> positions(overlap);

    // k-subsets in colex-agnostic "first subset then advance" order; the
    // final sort fixes the output order regardless.
    auto first_subset = [](std::vector<unsigned>& v, unsigned lo) {
        for (std::size_t t = 0; t < v.size(); ++t) v[t] = lo + static_cast<unsigned>(t);
    };
    auto next_subset = [](std::vector<unsigned>& v, unsigned hi) -> bool {
        std::size_t k = v.size();
        for (std::size_t t = k; t-- > 0;) {
            if (v[t] < hi - (k - 1 - t)) {
                ++v[t];
                for (std::size_t u = t + 1; u < k; ++u) v[u] = v[u - 1] + 1;
                return true;
            }
        }
        return false;
    };

    first_subset(a_set, 1);
    while (true) {
        // b = ({1..s} \ a) plus the chosen overlap inside a.
        std::vector<unsigned> complement;
        complement.reserve(s - i);
        {
            std::size_t t = 0;
            for (unsigned v = 1; v <= s; ++v) {
                if (t < a_set.size() && a_set[t] == v) {
                    ++t;
                } else {
                    complement.push_back(v);
                }
            }
        }
        if (overlap == 0) {
            pairs.push_back(VectorPair{a_set, complement, s});
        } else {
            first_subset(positions, 0);
            while (true) {
                std::vector<unsigned> b_set = complement;
                for (unsigned pos : positions) b_set.push_back(a_set[pos]);
                std::sort(b_set.begin(), b_set.end());
                pairs.push_back(VectorPair{a_set, std::move(b_set), s});
                if (!next_subset(positions, i - 1)) break;
            }
        }
        if (!next_subset(a_set, s)) break;
    }

    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

/// Builds the chain D_1 < ... < D_s from a vector pair and a pair of chains
/// in H(A) and H(B), following the stepwise product rules: at position t the
/// p-part advances when t appears in a, the q-part when t appears in b, and
/// both when t appears in both. This is the map psi of the bijection.
inline Chain build_chain(const VectorPair& pair, const Chain& chain_a, const Chain& chain_b,
                         const SubgroupLattice& lat) {
    if (!lat.spec.two_primes()) {
        throw std::invalid_argument("build_chain: single-prime spec");
    }
    if (pair.a.size() != chain_a.size() || pair.b.size() != chain_b.size()) {
        throw std::invalid_argument("build_chain: vector pair and chain term counts differ");
    }
    Chain result;
    result.reserve(pair.s);
    SubgroupId x = lat.trivial_id();
    SubgroupId y = lat.trivial_id();
    std::size_t next_a = 0, next_b = 0;
    for (unsigned t = 1; t <= pair.s; ++t) {
        if (next_a < pair.a.size() && pair.a[next_a] == t) {
            x = chain_a[next_a];
            ++next_a;
        }
        if (next_b < pair.b.size() && pair.b[next_b] == t) {
            y = chain_b[next_b];
            ++next_b;
        }
        result.push_back(lat.product_id(x, y));
    }
    return result;
}

/// Reads off the vector pair of a chain in H(G): the positions at which the
/// Sylow p-part strictly grows and those at which the q-part strictly grows.
/// This is the map phi of the bijection; phi . psi and psi . phi are both
/// identities.
inline VectorPair chain_to_pair(const Chain& chain, const SubgroupLattice& lat) {
    if (!lat.spec.two_primes()) {
        throw std::invalid_argument("chain_to_pair: single-prime spec");
    }
    if (chain.empty() || chain.front() == lat.trivial_id()) {
        throw std::invalid_argument("chain_to_pair: chain must have a non-trivial initial term");
    }
    VectorPair pair;
    pair.s = static_cast<unsigned>(chain.size());
    SubgroupId prev_a = lat.trivial_id();
    SubgroupId prev_b = lat.trivial_id();
    for (unsigned t = 1; t <= pair.s; ++t) {
        SubgroupId a = lat.a_part_of[chain[t - 1]];
        SubgroupId b = lat.b_part_of[chain[t - 1]];
        if (a != prev_a) {
            pair.a.push_back(t);
            prev_a = a;
        }
        if (b != prev_b) {
            pair.b.push_back(t);
            prev_b = b;
        }
    }
    return pair;
}

}  // namespace fuzzcount
