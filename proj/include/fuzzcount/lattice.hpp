#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fuzzcount/chain_formulas.hpp"
#include "fuzzcount/group_spec.hpp"

namespace fuzzcount {

using SubgroupId = std::uint32_t;

/// A proper subgroup chain as a strictly increasing (by containment) list of
/// subgroup ids whose last entry is the full group. Canonical ids sort by
/// (order, lex member set), so containment implies a smaller id and chains
/// are strictly increasing id sequences.
using Chain = std::vector<SubgroupId>;

/// Thrown when a request exceeds a configured resource bound (group order or
/// enumerated chain count). The message names the bound.
class BoundExceeded : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by membership_to_chain when some level slice is not closed under
/// the group law.
class InvalidMembership : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultOracleBound = 512;
inline constexpr std::uint64_t kDefaultMaxChains = 1'000'000;

/// Fixed-capacity bit set over element indices.
struct ElementSet {
    std::vector<std::uint64_t> words;

    ElementSet() = default;
    explicit ElementSet(std::uint32_t universe) : words((universe + 63) / 64, 0) {}

    void set(std::uint32_t i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::uint32_t i) const {
        return (words[i >> 6] >> (i & 63)) & 1u;
    }
    bool subset_of(const ElementSet& other) const {
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (words[w] & ~other.words[w]) return false;
        }
        return true;
    }
    ElementSet intersect(const ElementSet& other) const {
        ElementSet r;
        r.words.resize(words.size());
        for (std::size_t w = 0; w < words.size(); ++w) {
            r.words[w] = words[w] & other.words[w];
        }
        return r;
    }
    bool operator==(const ElementSet&) const = default;
};

struct ElementSetHash {
    std::size_t operator()(const ElementSet& s) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t w : s.words) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Subgroup {
    SubgroupId id = 0;
    std::uint32_t order = 0;
    std::vector<std::uint32_t> members;  // sorted element indices
    ElementSet bits;
};

/// Ordinal membership function: level_of[x] is the rank of element x in
/// {1, ..., s}, rank 1 being the highest membership level. The rank-<=-t
/// slices of a fuzzy subgroup are exactly the terms of its chain.
struct FuzzyMembership {
    std::vector<unsigned> level_of;

    bool operator==(const FuzzyMembership&) const = default;
};

/// Explicit subgroup inventory of a small abelian group.
///
/// Elements are indexed by the mixed-radix rank of their coordinate vectors
/// over the cyclic factors (p factors first, then q factors); index 0 is the
/// identity. Construction is single-threaded; a completed lattice is
/// immutable and may be shared across threads.
struct SubgroupLattice {
    explicit SubgroupLattice(GroupSpec s) : spec(std::move(s)) {}

    GroupSpec spec;
    std::vector<std::uint32_t> factor_orders;
    std::uint32_t num_elements = 0;

    std::vector<Subgroup> subgroups;  // canonical order: (order, lex members)
    std::unordered_map<ElementSet, SubgroupId, ElementSetHash> index;

    /// supersets[h] = ids of strict supersets of h, ascending.
    std::vector<std::vector<SubgroupId>> supersets;
    /// Cover edges (h, k): h < k with nothing in between, lex sorted.
    std::vector<std::pair<SubgroupId, SubgroupId>> covers;

    std::vector<std::uint32_t> element_order;

    // Sylow decomposition tables, populated only for two-prime specs.
    SubgroupId sylow_a_id = 0;
    SubgroupId sylow_b_id = 0;
    std::vector<SubgroupId> a_part_of;
    std::vector<SubgroupId> b_part_of;
    /// (a_id, b_id) -> id of the product subgroup; total because every
    /// subgroup of A x B splits uniquely over the two Sylow parts.
    std::unordered_map<std::uint64_t, SubgroupId> product_index;

    std::uint32_t add(std::uint32_t x, std::uint32_t y) const {
        return add_table[static_cast<std::size_t>(x) * num_elements + y];
    }

    SubgroupId trivial_id() const { return 0; }
    SubgroupId full_id() const { return static_cast<SubgroupId>(subgroups.size() - 1); }

    std::optional<SubgroupId> find(const ElementSet& bits) const {
        auto it = index.find(bits);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    SubgroupId product_id(SubgroupId a, SubgroupId b) const {
        auto it = product_index.find(product_key(a, b));
        if (it == product_index.end()) {
            throw std::invalid_argument("product_id: not a (subgroup-of-A, subgroup-of-B) pair");
        }
        return it->second;
    }

    static std::uint64_t product_key(SubgroupId a, SubgroupId b) {
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    std::vector<std::uint32_t> add_table;  // row-major num_elements x num_elements
};

namespace detail {

inline std::vector<std::uint32_t> decode_coords(std::uint32_t idx,
                                                const std::vector<std::uint32_t>& factors) {
    std::vector<std::uint32_t> c(factors.size());
    for (std::size_t t = 0; t < factors.size(); ++t) {
        c[t] = idx % factors[t];
        idx /= factors[t];
    }
    return c;
}

inline bool is_prime_power_order(std::uint32_t order, std::uint64_t p) {
    while (order % p == 0) order /= static_cast<std::uint32_t>(p);
    return order == 1;
}

}  // namespace detail

/// Materializes every subgroup of the group described by spec.
///
/// Starts from the trivial subgroup and repeatedly joins known subgroups
/// with cyclic subgroups (the closure of an extension by one element) until
/// no new member set appears, then orders subgroups canonically and derives
/// the containment structure. Refuses groups larger than the oracle bound.
inline SubgroupLattice build_lattice(const GroupSpec& spec,
                                     std::uint64_t oracle_bound = kDefaultOracleBound) {
    if (spec.order() > oracle_bound) {
        throw BoundExceeded("oracle bound exceeded: |G| = " + spec.order().str() +
                            " > bound " + std::to_string(oracle_bound));
    }

    SubgroupLattice lat(spec);

    for (unsigned e : spec.p_partition) {
        lat.factor_orders.push_back(integer_pow(spec.p, e).convert_to<std::uint32_t>());
    }
    if (spec.q) {
        for (unsigned e : spec.q_partition) {
            lat.factor_orders.push_back(integer_pow(*spec.q, e).convert_to<std::uint32_t>());
        }
    }
    const std::uint32_t n = spec.order().convert_to<std::uint32_t>();
    lat.num_elements = n;

    // Componentwise addition modulo the factor orders.
    std::vector<std::vector<std::uint32_t>> coords(n);
    for (std::uint32_t x = 0; x < n; ++x) {
        coords[x] = detail::decode_coords(x, lat.factor_orders);
    }
    lat.add_table.resize(static_cast<std::size_t>(n) * n);
    for (std::uint32_t x = 0; x < n; ++x) {
        for (std::uint32_t y = 0; y < n; ++y) {
            std::uint32_t idx = 0;
            for (std::size_t t = lat.factor_orders.size(); t-- > 0;) {
                idx = idx * lat.factor_orders[t] + (coords[x][t] + coords[y][t]) % lat.factor_orders[t];
            }
            lat.add_table[static_cast<std::size_t>(x) * n + y] = idx;
        }
    }

    lat.element_order.resize(n);
    lat.element_order[0] = 1;
    for (std::uint32_t x = 1; x < n; ++x) {
        std::uint32_t acc = x, ord = 1;
        while (acc != 0) {
            acc = lat.add(acc, x);
            ++ord;
        }
        lat.element_order[x] = ord;
    }

    struct Candidate {
        ElementSet bits;
        std::vector<std::uint32_t> members;
    };

    // Distinct cyclic subgroups <g>.
    std::vector<Candidate> cyclic;
    {
        std::unordered_map<ElementSet, bool, ElementSetHash> seen_cyclic;
        for (std::uint32_t g = 1; g < n; ++g) {
            Candidate c{ElementSet(n), {0}};
            c.bits.set(0);
            for (std::uint32_t m = g; m != 0; m = lat.add(m, g)) {
                c.bits.set(m);
                c.members.push_back(m);
            }
            if (seen_cyclic.emplace(c.bits, true).second) {
                std::sort(c.members.begin(), c.members.end());
                cyclic.push_back(std::move(c));
            }
        }
    }

    // Fixpoint of joins. In an abelian group the join of subgroups H and C
    // is the sum set H + C.
    std::vector<Candidate> found;
    std::unordered_map<ElementSet, std::uint32_t, ElementSetHash> seen;
    {
        Candidate trivial{ElementSet(n), {0}};
        trivial.bits.set(0);
        seen.emplace(trivial.bits, 0);
        found.push_back(std::move(trivial));
    }
    for (std::size_t head = 0; head < found.size(); ++head) {
        for (const Candidate& cyc : cyclic) {
            if (cyc.bits.subset_of(found[head].bits)) continue;
            ElementSet joined = found[head].bits;
            for (std::uint32_t c : cyc.members) {
                if (c == 0) continue;
                for (std::uint32_t h : found[head].members) {
                    joined.set(lat.add(h, c));
                }
            }
            if (seen.find(joined) != seen.end()) continue;
            Candidate next{joined, {}};
            for (std::uint32_t e = 0; e < n; ++e) {
                if (joined.test(e)) next.members.push_back(e);
            }
            seen.emplace(next.bits, static_cast<std::uint32_t>(found.size()));
            found.push_back(std::move(next));
        }
    }

    std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.members < b.members;
    });

    lat.subgroups.resize(found.size());
    for (std::size_t i = 0; i < found.size(); ++i) {
        Subgroup& s = lat.subgroups[i];
        s.id = static_cast<SubgroupId>(i);
        s.order = static_cast<std::uint32_t>(found[i].members.size());
        s.members = std::move(found[i].members);
        s.bits = std::move(found[i].bits);
        lat.index.emplace(s.bits, s.id);
    }

    const std::size_t count = lat.subgroups.size();
    lat.supersets.resize(count);
    for (std::size_t h = 0; h < count; ++h) {
        for (std::size_t k = h + 1; k < count; ++k) {
            const Subgroup& sh = lat.subgroups[h];
            const Subgroup& sk = lat.subgroups[k];
            if (sk.order <= sh.order || sk.order % sh.order != 0) continue;
            if (sh.bits.subset_of(sk.bits)) {
                lat.supersets[h].push_back(sk.id);
            }
        }
    }

    // In an abelian group a subgroup is maximal in another exactly when the
    // index is prime, so covers are the prime-index containments.
    for (std::size_t h = 0; h < count; ++h) {
        for (SubgroupId k : lat.supersets[h]) {
            if (is_prime(lat.subgroups[k].order / lat.subgroups[h].order)) {
                lat.covers.emplace_back(static_cast<SubgroupId>(h), k);
            }
        }
    }
    std::sort(lat.covers.begin(), lat.covers.end());

    if (spec.two_primes()) {
        ElementSet a_mask(n), b_mask(n);
        for (std::uint32_t x = 0; x < n; ++x) {
            if (detail::is_prime_power_order(lat.element_order[x], spec.p)) a_mask.set(x);
            if (detail::is_prime_power_order(lat.element_order[x], *spec.q)) b_mask.set(x);
        }
        lat.a_part_of.resize(count);
        lat.b_part_of.resize(count);
        for (const Subgroup& s : lat.subgroups) {
            auto a_id = lat.find(s.bits.intersect(a_mask));
            auto b_id = lat.find(s.bits.intersect(b_mask));
            if (!a_id || !b_id) {
                throw std::logic_error("build_lattice: Sylow part missing from inventory");
            }
            lat.a_part_of[s.id] = *a_id;
            lat.b_part_of[s.id] = *b_id;
            lat.product_index.emplace(SubgroupLattice::product_key(*a_id, *b_id), s.id);
        }
        lat.sylow_a_id = lat.a_part_of[lat.full_id()];
        lat.sylow_b_id = lat.b_part_of[lat.full_id()];
    }

    return lat;
}

struct ChainCounts {
    Count n;               // chains ending at G, any initial term
    Count h;               // those with non-trivial initial term
    ChainProfile profile;  // h stratified by term count
};

/// Counts proper chains ending at G by dynamic programming over the
/// containment DAG, stratified by term count.
inline ChainCounts count_chains(const SubgroupLattice& lat) {
    const std::size_t count = lat.subgroups.size();
    if (count < 2) {
        throw std::invalid_argument("count_chains: non-trivial group required");
    }
    // len_counts[id][l-1] = number of chains with l terms starting at id and
    // ending at G. Ids descend containment, so process in reverse.
    std::vector<std::vector<Count>> len_counts(count);
    len_counts[count - 1] = {Count(1)};
    for (std::size_t id = count - 1; id-- > 0;) {
        std::vector<Count>& mine = len_counts[id];
        for (SubgroupId k : lat.supersets[id]) {
            const std::vector<Count>& theirs = len_counts[k];
            if (mine.size() < theirs.size() + 1) mine.resize(theirs.size() + 1);
            for (std::size_t l = 0; l < theirs.size(); ++l) {
                mine[l + 1] += theirs[l];
            }
        }
    }

    std::size_t max_terms = 0;
    for (std::size_t id = 1; id < count; ++id) {
        max_terms = std::max(max_terms, len_counts[id].size());
    }
    ChainCounts result{0, 0, ChainProfile(std::vector<Count>(max_terms, 0))};
    for (std::size_t id = 1; id < count; ++id) {
        for (std::size_t l = 0; l < len_counts[id].size(); ++l) {
            result.profile.counts[l] += len_counts[id][l];
        }
    }
    result.h = result.profile.total();
    result.n = result.h;
    for (const Count& c : len_counts[0]) result.n += c;
    return result;
}

/// Visits every proper chain whose terminal term is the given subgroup and
/// whose terms all lie inside it, in lexicographic order on id sequences.
/// The chain passed to the callback is a reused buffer.
inline void for_each_chain_ending_at(const SubgroupLattice& lat, SubgroupId terminal,
                                     bool include_trivial_start,
                                     const std::function<void(const Chain&)>& visit) {
    const ElementSet& terminal_bits = lat.subgroups[terminal].bits;
    std::vector<char> contained(lat.subgroups.size(), 0);
    for (const Subgroup& s : lat.subgroups) {
        contained[s.id] = s.bits.subset_of(terminal_bits) ? 1 : 0;
    }

    Chain chain;
    std::function<void(SubgroupId)> extend = [&](SubgroupId cur) {
        chain.push_back(cur);
        if (cur == terminal) {
            visit(chain);
        } else {
            for (SubgroupId k : lat.supersets[cur]) {
                if (contained[k]) extend(k);
            }
        }
        chain.pop_back();
    };

    for (const Subgroup& s : lat.subgroups) {
        if (!contained[s.id]) continue;
        if (!include_trivial_start && s.id == lat.trivial_id()) continue;
        extend(s.id);
    }
}

/// All of N(G) in deterministic order.
inline void for_each_chain(const SubgroupLattice& lat,
                           const std::function<void(const Chain&)>& visit) {
    for_each_chain_ending_at(lat, lat.full_id(), true, visit);
}

/// Materializes N(G), refusing if the total exceeds max_chains.
inline std::vector<Chain> enumerate_chains(const SubgroupLattice& lat,
                                           std::uint64_t max_chains = kDefaultMaxChains) {
    ChainCounts counts = count_chains(lat);
    if (counts.n > max_chains) {
        throw BoundExceeded("chain enumeration bound exceeded: n(G) = " + counts.n.str() +
                            " > bound " + std::to_string(max_chains));
    }
    std::vector<Chain> chains;
    chains.reserve(counts.n.convert_to<std::size_t>());
    for_each_chain(lat, [&](const Chain& c) { chains.push_back(c); });
    return chains;
}

/// Splits a subgroup into its Sylow p-part and q-part (the members of
/// p-power and q-power element order).
inline std::pair<SubgroupId, SubgroupId> sylow_decompose(const SubgroupLattice& lat,
                                                         SubgroupId sub) {
    if (!lat.spec.two_primes()) {
        throw std::invalid_argument("sylow_decompose: single-prime spec");
    }
    return {lat.a_part_of[sub], lat.b_part_of[sub]};
}

/// The restriction of a chain in H(G): Sylow-decompose every term, drop
/// repeats keeping the leftmost occurrence, drop the trivial subgroup.
/// Returns the unique pair of chains in H(A) and H(B).
inline std::pair<Chain, Chain> restrict_chain(const SubgroupLattice& lat, const Chain& chain) {
    if (!lat.spec.two_primes()) {
        throw std::invalid_argument("restrict_chain: single-prime spec");
    }
    if (chain.empty() || chain.front() == lat.trivial_id()) {
        throw std::invalid_argument("restrict_chain: chain must have a non-trivial initial term");
    }
    Chain in_a, in_b;
    for (SubgroupId term : chain) {
        SubgroupId a = lat.a_part_of[term];
        SubgroupId b = lat.b_part_of[term];
        if (a != lat.trivial_id() && (in_a.empty() || in_a.back() != a)) in_a.push_back(a);
        if (b != lat.trivial_id() && (in_b.empty() || in_b.back() != b)) in_b.push_back(b);
    }
    return {std::move(in_a), std::move(in_b)};
}

/// Number of chains in H(G) whose restriction is exactly (chain_a, chain_b),
/// by filtering the full enumeration.
inline Count count_restricted_by(const SubgroupLattice& lat, const Chain& chain_a,
                                 const Chain& chain_b,
                                 std::uint64_t max_chains = kDefaultMaxChains) {
    ChainCounts counts = count_chains(lat);
    if (counts.h > max_chains) {
        throw BoundExceeded("chain enumeration bound exceeded: h(G) = " + counts.h.str() +
                            " > bound " + std::to_string(max_chains));
    }
    Count matching = 0;
    for_each_chain_ending_at(lat, lat.full_id(), false, [&](const Chain& c) {
        auto restricted = restrict_chain(lat, c);
        if (restricted.first == chain_a && restricted.second == chain_b) ++matching;
    });
    return matching;
}

struct ChainPairHash {
    std::size_t operator()(const std::pair<Chain, Chain>& p) const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(p.first.size());
        for (SubgroupId id : p.first) mix(id);
        mix(p.second.size());
        for (SubgroupId id : p.second) mix(id);
        return static_cast<std::size_t>(h);
    }
};

using RestrictionCensus = std::unordered_map<std::pair<Chain, Chain>, Count, ChainPairHash>;

/// Restriction of every chain in H(G) in one pass, grouped by the restricting
/// pair. Equivalent to count_restricted_by evaluated at every pair at once.
inline RestrictionCensus restriction_census(const SubgroupLattice& lat) {
    RestrictionCensus census;
    for_each_chain_ending_at(lat, lat.full_id(), false, [&](const Chain& c) {
        census[restrict_chain(lat, c)] += 1;
    });
    return census;
}

/// The canonical membership function of a chain: every element gets the rank
/// of the first term containing it.
inline FuzzyMembership chain_to_membership(const SubgroupLattice& lat, const Chain& chain) {
    if (chain.empty() || chain.back() != lat.full_id()) {
        throw std::invalid_argument("chain_to_membership: terminal term must be G");
    }
    FuzzyMembership mu;
    mu.level_of.assign(lat.num_elements, 0);
    for (std::size_t t = 0; t < chain.size(); ++t) {
        for (std::uint32_t e : lat.subgroups[chain[t]].members) {
            if (mu.level_of[e] == 0) mu.level_of[e] = static_cast<unsigned>(t + 1);
        }
    }
    return mu;
}

/// Checks that a member set is closed under the group law (which in a finite
/// group also gives inversion). Builds the generated subgroup incrementally
/// and aborts as soon as it escapes the set.
inline bool is_subgroup_set(const SubgroupLattice& lat, const ElementSet& bits,
                            const std::vector<std::uint32_t>& members) {
    if (members.empty() || !bits.test(0)) return false;
    ElementSet closed(lat.num_elements);
    closed.set(0);
    std::vector<std::uint32_t> closure{0};
    for (std::uint32_t g : members) {
        if (closed.test(g)) continue;
        const std::size_t before = closure.size();
        for (std::uint32_t m = g; m != 0; m = lat.add(m, g)) {
            for (std::size_t i = 0; i < before; ++i) {
                std::uint32_t e = lat.add(closure[i], m);
                if (!bits.test(e)) return false;
                if (!closed.test(e)) {
                    closed.set(e);
                    closure.push_back(e);
                }
            }
        }
    }
    return true;
}

/// Recovers the chain of distinct level slices of a membership function,
/// validating that every slice is a subgroup.
inline Chain membership_to_chain(const SubgroupLattice& lat, const FuzzyMembership& mu) {
    if (mu.level_of.size() != lat.num_elements) {
        throw std::invalid_argument("membership_to_chain: wrong element count");
    }
    unsigned max_rank = 0;
    for (unsigned r : mu.level_of) {
        if (r == 0) {
            throw InvalidMembership("membership_to_chain: element without a rank");
        }
        if (r > lat.num_elements) {
            throw InvalidMembership("membership_to_chain: rank exceeds the level count bound");
        }
        max_rank = std::max(max_rank, r);
    }

    // Elements grouped by rank, so slices accumulate in one sweep.
    std::vector<std::vector<std::uint32_t>> by_rank(max_rank + 1);
    for (std::uint32_t e = 0; e < lat.num_elements; ++e) {
        by_rank[mu.level_of[e]].push_back(e);
    }

    Chain chain;
    ElementSet slice(lat.num_elements);
    std::vector<std::uint32_t> slice_members;
    for (unsigned t = 1; t <= max_rank; ++t) {
        if (by_rank[t].empty()) continue;  // skipped rank: same slice as before
        for (std::uint32_t e : by_rank[t]) {
            slice.set(e);
            slice_members.push_back(e);
        }
        std::sort(slice_members.begin(), slice_members.end());
        if (!is_subgroup_set(lat, slice, slice_members)) {
            throw InvalidMembership("membership_to_chain: level slice at rank " +
                                    std::to_string(t) + " is not a subgroup");
        }
        auto id = lat.find(slice);
        if (!id) {
            throw std::logic_error("membership_to_chain: subgroup slice missing from inventory");
        }
        chain.push_back(*id);
    }
    return chain;
}

}  // namespace fuzzcount
