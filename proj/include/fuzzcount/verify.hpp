#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fuzzcount/chain_formulas.hpp"
#include "fuzzcount/combinatorics.hpp"
#include "fuzzcount/group_spec.hpp"
#include "fuzzcount/lattice.hpp"
#include "fuzzcount/vector_pairs.hpp"

namespace fuzzcount {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t max_order = 200;    // formula-vs-oracle sweep
    unsigned max_ij = 6;              // interleaving identity range
    std::uint64_t oracle_bound = kDefaultOracleBound;
    std::uint64_t max_chains = kDefaultMaxChains;  // enumeration-based checks skip beyond
    bool sabotage = false;            // negative control: corrupt one comparison
    unsigned threads = 0;             // 0 = hardware concurrency
};

/// All partitions of n, non-increasing entries, deterministic order.
inline std::vector<std::vector<unsigned>> all_partitions(unsigned n) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> current;
    std::function<void(unsigned, unsigned)> rec = [&](unsigned remaining, unsigned max_part) {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            rec(remaining - part, part);
            current.pop_back();
        }
    };
    rec(n, n);
    return out;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t v = 2; v <= limit; ++v) {
        if (is_prime(v)) ps.push_back(v);
    }
    return ps;
}

/// Every valid single-prime spec with order <= max_order.
inline std::vector<GroupSpec> single_prime_specs(std::uint64_t max_order) {
    std::vector<GroupSpec> specs;
    for (std::uint64_t p : primes_up_to(max_order)) {
        Count power = p;
        for (unsigned a = 1; power <= max_order; ++a, power *= p) {
            for (const auto& part : all_partitions(a)) {
                specs.emplace_back(p, part);
            }
        }
    }
    return specs;
}

/// Every valid two-prime spec with order <= max_order, p < q drawn from the
/// given prime list, all partition pairs.
inline std::vector<GroupSpec> two_prime_specs(std::uint64_t max_order,
                                              const std::vector<std::uint64_t>& primes) {
    std::vector<GroupSpec> specs;
    for (std::size_t pi = 0; pi < primes.size(); ++pi) {
        for (std::size_t qi = pi + 1; qi < primes.size(); ++qi) {
            const std::uint64_t p = primes[pi];
            const std::uint64_t q = primes[qi];
            Count pa = p;
            for (unsigned a = 1; pa * q <= max_order; ++a, pa *= p) {
                Count order = pa * q;
                for (unsigned b = 1; order <= max_order; ++b, order *= q) {
                    for (const auto& part_a : all_partitions(a)) {
                        for (const auto& part_b : all_partitions(b)) {
                            specs.emplace_back(p, part_a, q, part_b);
                        }
                    }
                }
            }
        }
    }
    std::sort(specs.begin(), specs.end(), [](const GroupSpec& x, const GroupSpec& y) {
        if (x.order() != y.order()) return x.order() < y.order();
        if (x.p != y.p) return x.p < y.p;
        if (x.p_partition != y.p_partition) return x.p_partition < y.p_partition;
        return x.q_partition < y.q_partition;
    });
    return specs;
}

/// Chain profile of a group computed purely by the lattice oracle.
inline ChainProfile oracle_profile(const GroupSpec& spec,
                                   std::uint64_t oracle_bound = kDefaultOracleBound) {
    return count_chains(build_lattice(spec, oracle_bound)).profile;
}

namespace detail {

inline bool is_all_ones(const std::vector<unsigned>& part) {
    for (unsigned e : part) {
        if (e != 1) return false;
    }
    return true;
}

inline std::string profile_to_string(const ChainProfile& profile) {
    std::string s = "(";
    for (std::size_t i = 0; i < profile.counts.size(); ++i) {
        if (i) s += ", ";
        s += profile.counts[i].str();
    }
    return s + ")";
}

/// Runs fn(i) for i in [0, count) on the requested number of threads.
inline void parallel_for_index(std::size_t count, unsigned threads,
                               const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace detail

/// Closed-form profile for the partitions the formulas cover: a single part
/// selects the cyclic formula, all-ones the elementary abelian one.
/// Empty optional otherwise.
inline std::optional<ChainProfile> formula_profile(std::uint64_t p,
                                                   const std::vector<unsigned>& partition) {
    if (partition.size() == 1) return cyclic_profile(partition[0]);
    if (detail::is_all_ones(partition)) {
        return elementary_abelian_profile(static_cast<unsigned>(partition.size()), p);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Individual verification passes. Each returns one result per logical check
// and never throws: an exception inside a pass is reported as a failure.

inline CheckResult check_gaussian_properties(unsigned max_n = 12) {
    CheckResult r{"gaussian-binomial-properties", true, ""};
    std::size_t checked = 0;
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        for (unsigned n = 0; n <= max_n; ++n) {
            for (unsigned m = 0; m <= n; ++m) {
                if (gaussian_binomial(n, m, p) != gaussian_binomial(n, n - m, p)) {
                    r.passed = false;
                    r.detail = "symmetry failed at [" + std::to_string(n) + " " +
                               std::to_string(m) + "]_" + std::to_string(p);
                    return r;
                }
                ++checked;
            }
            for (unsigned m = 1; m < n; ++m) {
                Count lhs = gaussian_binomial(n, m, p);
                Count rhs = gaussian_binomial(n - 1, m - 1, p) +
                            integer_pow(p, m) * gaussian_binomial(n - 1, m, p);
                if (lhs != rhs) {
                    r.passed = false;
                    r.detail = "q-Pascal failed at [" + std::to_string(n) + " " +
                               std::to_string(m) + "]_" + std::to_string(p);
                    return r;
                }
                ++checked;
            }
            if (n >= 1) {
                Count geometric = 0;
                for (unsigned i = 0; i < n; ++i) geometric += integer_pow(p, i);
                if (gaussian_binomial(n, 1, p) != geometric) {
                    r.passed = false;
                    r.detail = "[n 1]_p geometric sum failed at n = " + std::to_string(n) +
                               ", p = " + std::to_string(p);
                    return r;
                }
                ++checked;
            }
        }
    }
    r.detail = std::to_string(checked) + " identities over n <= " + std::to_string(max_n) +
               ", p in {2,3,5}";
    return r;
}

inline CheckResult check_interleave_identities(unsigned max_ij) {
    CheckResult r{"interleave-vs-vector-pairs", true, ""};
    std::size_t checked = 0;
    for (unsigned i = 1; i <= max_ij; ++i) {
        for (unsigned j = 1; j <= i; ++j) {
            Count total = 0;
            for (unsigned k = 0; k <= j; ++k) {
                const unsigned s = i + k;
                Count enumerated = enumerate_pairs(i, j, s).size();
                Count closed = binomial(i + k, i) * binomial(i, static_cast<long long>(j) - k);
                if (enumerated != closed) {
                    r.passed = false;
                    r.detail = "|V_{" + std::to_string(i) + "," + std::to_string(j) + "," +
                               std::to_string(s) + "}| = " + enumerated.str() +
                               " but C(i+k,i)C(i,j-k) = " + closed.str();
                    return r;
                }
                total += enumerated;
                ++checked;
            }
            if (total != interleave_count(i, j)) {
                r.passed = false;
                r.detail = "sum_s |V_{" + std::to_string(i) + "," + std::to_string(j) +
                           ",s}| = " + total.str() + " but h(i,j) = " +
                           interleave_count(i, j).str();
                return r;
            }
            // The same sum with the roles of the vectors swapped.
            Count swapped = 0;
            for (unsigned s = std::max(i, j); s <= i + j; ++s) {
                swapped += enumerate_pairs(j, i, s).size();
            }
            if (swapped != total) {
                r.passed = false;
                r.detail = "V-pair enumeration asymmetric at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")";
                return r;
            }
            ++checked;
        }
    }
    r.detail = std::to_string(checked) + " identities for 1 <= j <= i <= " +
               std::to_string(max_ij);
    return r;
}

inline CheckResult check_interleave_symmetry(unsigned max_ij = 8) {
    CheckResult r{"interleave-symmetry", true, ""};
    for (unsigned i = 1; i <= max_ij; ++i) {
        for (unsigned j = 1; j <= max_ij; ++j) {
            if (interleave_count(i, j) != interleave_count(j, i)) {
                r.passed = false;
                r.detail = "h(" + std::to_string(i) + "," + std::to_string(j) + ") != h(" +
                           std::to_string(j) + "," + std::to_string(i) + ")";
                return r;
            }
        }
    }
    r.detail = "h(i,j) = h(j,i) for i,j <= " + std::to_string(max_ij);
    return r;
}

inline CheckResult check_cyclic_power_law(unsigned max_n = 16) {
    CheckResult r{"cyclic-count-power-law", true, ""};
    for (unsigned n = 1; n <= max_n; ++n) {
        Count expected = integer_pow(2, n);
        Count got = single_prime_count(cyclic_profile(n));
        if (got != expected) {
            r.passed = false;
            r.detail = "n(Z_{p^" + std::to_string(n) + "}) = " + got.str() + ", expected " +
                       expected.str();
            return r;
        }
    }
    r.detail = "n(Z_{p^n}) = 2^n for n <= " + std::to_string(max_n);
    return r;
}

/// Formula-vs-oracle and parity checks for one single-prime group.
inline std::vector<CheckResult> check_single_prime_group(const GroupSpec& spec,
                                                         const VerifyOptions& opts) {
    std::vector<CheckResult> out;
    const std::string name = spec.name();

    SubgroupLattice lat = build_lattice(spec, opts.oracle_bound);
    ChainCounts oracle = count_chains(lat);

    {
        CheckResult r{name + ": n = 2h", false, ""};
        Count profile_total = 2 * oracle.profile.total();
        r.passed = (oracle.n == 2 * oracle.h) && (oracle.n == profile_total);
        r.detail = "n = " + oracle.n.str() + ", h = " + oracle.h.str();
        out.push_back(std::move(r));
    }

    if (auto closed = formula_profile(spec.p, spec.p_partition)) {
        CheckResult r{name + ": profile formula vs oracle", false, ""};
        r.passed = (*closed == oracle.profile);
        if (r.passed) {
            r.detail = "profile " + detail::profile_to_string(oracle.profile);
        } else {
            r.detail = "formula " + detail::profile_to_string(*closed) + " != oracle " +
                       detail::profile_to_string(oracle.profile);
        }
        out.push_back(std::move(r));
    }

    if (oracle.n <= opts.max_chains) {
        CheckResult r{name + ": membership round trip", true, ""};
        Count trips = 0;
        try {
            for_each_chain(lat, [&](const Chain& c) {
                FuzzyMembership mu = chain_to_membership(lat, c);
                Chain back = membership_to_chain(lat, mu);
                if (back != c) {
                    throw std::logic_error("round trip mismatch on a chain of " + name);
                }
                ++trips;
            });
            r.detail = trips.str() + " chains";
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    } else {
        out.push_back(CheckResult{name + ": membership round trip", true,
                                  "enumeration skipped: n(G) = " + oracle.n.str() +
                                      " > max-chains " + std::to_string(opts.max_chains)});
    }
    return out;
}

/// The full cross-check battery for one two-prime group.
inline std::vector<CheckResult> check_two_prime_group(const GroupSpec& spec,
                                                      const VerifyOptions& opts,
                                                      bool sabotage = false) {
    std::vector<CheckResult> out;
    const std::string name = spec.name();

    SubgroupLattice lat = build_lattice(spec, opts.oracle_bound);
    ChainCounts oracle = count_chains(lat);

    ChainProfile profile_a = oracle_profile(spec.p_part(), opts.oracle_bound);
    ChainProfile profile_b = oracle_profile(spec.q_part(), opts.oracle_bound);

    {
        CheckResult r{name + ": product formula vs oracle", false, ""};
        Count formula = count_fuzzy_subgroups(spec, profile_a, profile_b);
        if (sabotage) formula += 1;
        r.passed = (formula == oracle.n);
        r.detail = "formula n(G) = " + formula.str() + ", oracle n(G) = " + oracle.n.str();
        out.push_back(std::move(r));
    }

    {
        // Same identity fed with closed-form part profiles where they exist.
        auto closed_a = formula_profile(spec.p, spec.p_partition);
        auto closed_b = formula_profile(*spec.q, spec.q_partition);
        if (closed_a && closed_b) {
            CheckResult r{name + ": product formula with closed-form profiles", false, ""};
            Count formula = count_fuzzy_subgroups(spec, *closed_a, *closed_b);
            r.passed = (formula == oracle.n);
            r.detail = "formula n(G) = " + formula.str() + ", oracle n(G) = " + oracle.n.str();
            out.push_back(std::move(r));
        }
    }

    {
        CheckResult r{name + ": n = 2h", false, ""};
        r.passed = (oracle.n == 2 * oracle.h) && (oracle.h == oracle.profile.total());
        r.detail = "n = " + oracle.n.str() + ", h = " + oracle.h.str();
        out.push_back(std::move(r));
    }

    if (oracle.n > opts.max_chains) {
        out.push_back(CheckResult{name + ": enumeration checks", true,
                                  "skipped: n(G) = " + oracle.n.str() + " > max-chains " +
                                      std::to_string(opts.max_chains)});
        return out;
    }

    // Restriction census: every (chain in H(A), chain in H(B)) pair must be
    // hit exactly interleave_count(i, j) times, and the counts partition H(G).
    {
        CheckResult r{name + ": restriction census vs h(i,j)", true, ""};
        try {
            RestrictionCensus census = restriction_census(lat);
            Count total = 0;
            for (const auto& [key, cnt] : census) {
                total += cnt;
                Count expected = interleave_count(static_cast<unsigned>(key.first.size()),
                                                  static_cast<unsigned>(key.second.size()));
                if (cnt != expected) {
                    r.passed = false;
                    r.detail = "pair with shapes (" + std::to_string(key.first.size()) + "," +
                               std::to_string(key.second.size()) + ") hit " + cnt.str() +
                               " times, expected " + expected.str();
                    break;
                }
            }
            if (r.passed && total != oracle.h) {
                r.passed = false;
                r.detail = "census total " + total.str() + " != h(G) = " + oracle.h.str();
            }
            Count pairs_a = 0, pairs_b = 0;
            for_each_chain_ending_at(lat, lat.sylow_a_id, false, [&](const Chain&) { ++pairs_a; });
            for_each_chain_ending_at(lat, lat.sylow_b_id, false, [&](const Chain&) { ++pairs_b; });
            if (r.passed && Count(census.size()) != pairs_a * pairs_b) {
                r.passed = false;
                r.detail = "census has " + std::to_string(census.size()) +
                           " pairs, expected h(A)h(B) = " + Count(pairs_a * pairs_b).str();
            }
            if (r.passed) {
                // Tie the census back to the direct filtering operation on
                // one representative pair.
                const auto& probe = census.begin()->first;
                Count direct = count_restricted_by(lat, probe.first, probe.second, opts.max_chains);
                if (direct != census.begin()->second) {
                    r.passed = false;
                    r.detail = "count_restricted_by disagrees with census on a pair";
                }
            }
            if (r.passed) {
                r.detail = "h(G) = " + oracle.h.str() + " chains over " +
                           std::to_string(census.size()) + " restriction pairs";
            }
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }

    // Bijection round trips, both directions.
    {
        CheckResult r{name + ": vector-pair bijection round trips", true, ""};
        try {
            Count forward = 0;
            for_each_chain_ending_at(lat, lat.full_id(), false, [&](const Chain& c) {
                VectorPair vp = chain_to_pair(c, lat);
                auto [ca, cb] = restrict_chain(lat, c);
                Chain rebuilt = build_chain(vp, ca, cb, lat);
                if (rebuilt != c) {
                    throw std::logic_error("psi(phi(chain)) != chain in " + name);
                }
                ++forward;
            });

            std::vector<Chain> chains_a, chains_b;
            for_each_chain_ending_at(lat, lat.sylow_a_id, false,
                                     [&](const Chain& c) { chains_a.push_back(c); });
            for_each_chain_ending_at(lat, lat.sylow_b_id, false,
                                     [&](const Chain& c) { chains_b.push_back(c); });
            Count backward = 0;
            std::map<std::pair<unsigned, unsigned>, std::vector<std::vector<VectorPair>>> pair_cache;
            for (const Chain& ca : chains_a) {
                for (const Chain& cb : chains_b) {
                    const unsigned i = static_cast<unsigned>(ca.size());
                    const unsigned j = static_cast<unsigned>(cb.size());
                    auto& cached = pair_cache[{i, j}];
                    if (cached.empty()) {
                        for (unsigned s = std::max(i, j); s <= i + j; ++s) {
                            cached.push_back(enumerate_pairs(i, j, s));
                        }
                    }
                    std::set<Chain> built;
                    for (const auto& bucket : cached) {
                        for (const VectorPair& vp : bucket) {
                            Chain chain = build_chain(vp, ca, cb, lat);
                            if (chain_to_pair(chain, lat) != vp) {
                                throw std::logic_error("phi(psi(pair)) != pair in " + name);
                            }
                            auto restricted = restrict_chain(lat, chain);
                            if (restricted.first != ca || restricted.second != cb) {
                                throw std::logic_error(
                                    "built chain restricts to a different pair in " + name);
                            }
                            built.insert(std::move(chain));
                            ++backward;
                        }
                    }
                    Count expected = interleave_count(i, j);
                    if (Count(built.size()) != expected) {
                        throw std::logic_error("distinct built chains != h(i,j) in " + name);
                    }
                }
            }
            if (forward != oracle.h || backward != oracle.h) {
                throw std::logic_error("round-trip totals do not match h(G) in " + name);
            }
            r.detail = forward.str() + " chains each way";
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }

    // Level-set correspondence over all of N(G).
    {
        CheckResult r{name + ": membership round trip", true, ""};
        Count trips = 0;
        try {
            for_each_chain(lat, [&](const Chain& c) {
                FuzzyMembership mu = chain_to_membership(lat, c);
                Chain back = membership_to_chain(lat, mu);
                if (back != c) {
                    throw std::logic_error("round trip mismatch on a chain of " + name);
                }
                ++trips;
            });
            r.detail = trips.str() + " chains";
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = e.what();
        }
        out.push_back(std::move(r));
    }

    return out;
}

/// Runs the whole battery. Group checks run in parallel; results aggregate
/// in canonical group order regardless of completion order.
inline std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
    std::vector<CheckResult> results;
    results.push_back(check_gaussian_properties());
    results.push_back(check_interleave_identities(opts.max_ij));
    results.push_back(check_interleave_symmetry(std::max(8u, opts.max_ij)));
    results.push_back(check_cyclic_power_law());

    // Single-prime groups only feed profile and membership checks; order 128
    // upward means five-figure subgroup inventories, so the sweep stays at
    // desk scale independently of --max-order.
    std::vector<GroupSpec> singles =
        single_prime_specs(std::min<std::uint64_t>(opts.max_order, 100));
    std::vector<GroupSpec> doubles = two_prime_specs(opts.max_order, {2, 3, 5, 7});

    std::vector<std::vector<CheckResult>> single_results(singles.size());
    std::vector<std::vector<CheckResult>> double_results(doubles.size());

    detail::parallel_for_index(singles.size(), opts.threads, [&](std::size_t i) {
        try {
            single_results[i] = check_single_prime_group(singles[i], opts);
        } catch (const std::exception& e) {
            single_results[i] = {CheckResult{singles[i].name(), false, e.what()}};
        }
    });
    detail::parallel_for_index(doubles.size(), opts.threads, [&](std::size_t i) {
        try {
            double_results[i] =
                check_two_prime_group(doubles[i], opts, opts.sabotage && i == 0);
        } catch (const std::exception& e) {
            double_results[i] = {CheckResult{doubles[i].name(), false, e.what()}};
        }
    });

    for (auto& group : single_results) {
        for (auto& r : group) results.push_back(std::move(r));
    }
    for (auto& group : double_results) {
        for (auto& r : group) results.push_back(std::move(r));
    }
    return results;
}

}  // namespace fuzzcount
