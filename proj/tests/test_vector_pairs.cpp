#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fuzzcount/vector_pairs.hpp"
#include "fuzzcount/verify.hpp"

using fuzzcount::Chain;
using fuzzcount::Count;
using fuzzcount::GroupSpec;
using fuzzcount::VectorPair;

namespace {

// Conditions (i)-(iii): both vectors strictly increasing inside {1..s} and
// jointly covering it.
bool is_valid_pair(const VectorPair& p) {
    std::set<unsigned> seen;
    for (const auto* vec : {&p.a, &p.b}) {
        for (std::size_t t = 0; t < vec->size(); ++t) {
            unsigned v = (*vec)[t];
            if (v < 1 || v > p.s) return false;
            if (t > 0 && (*vec)[t - 1] >= v) return false;
            seen.insert(v);
        }
    }
    return seen.size() == p.s;
}

}  // namespace

TEST_CASE("enumerate_pairs pinned values") {
    auto only = fuzzcount::enumerate_pairs(1, 1, 1);
    REQUIRE(only.size() == 1);
    CHECK(only[0] == VectorPair{{1}, {1}, 1});

    auto two = fuzzcount::enumerate_pairs(1, 1, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == VectorPair{{1}, {2}, 2});
    CHECK(two[1] == VectorPair{{2}, {1}, 2});

    CHECK(fuzzcount::enumerate_pairs(2, 1, 2).size() == 2);
    CHECK(fuzzcount::enumerate_pairs(2, 1, 3).size() == 3);
    CHECK(Count(fuzzcount::enumerate_pairs(2, 1, 2).size() +
                fuzzcount::enumerate_pairs(2, 1, 3).size()) ==
          fuzzcount::interleave_count(2, 1));
}

TEST_CASE("enumerate_pairs outside the s range is empty") {
    CHECK(fuzzcount::enumerate_pairs(2, 2, 5).empty());
    CHECK(fuzzcount::enumerate_pairs(3, 1, 2).empty());
    CHECK_THROWS_AS(fuzzcount::enumerate_pairs(0, 1, 1), std::invalid_argument);
}

TEST_CASE("enumerate_pairs output is sorted, valid and duplicate-free") {
    for (unsigned i = 1; i <= 4; ++i) {
        for (unsigned j = 1; j <= 4; ++j) {
            for (unsigned s = std::max(i, j); s <= i + j; ++s) {
                auto pairs = fuzzcount::enumerate_pairs(i, j, s);
                REQUIRE(std::is_sorted(pairs.begin(), pairs.end()));
                std::set<std::pair<std::vector<unsigned>, std::vector<unsigned>>> distinct;
                for (const VectorPair& p : pairs) {
                    REQUIRE(p.a.size() == i);
                    REQUIRE(p.b.size() == j);
                    REQUIRE(is_valid_pair(p));
                    distinct.emplace(p.a, p.b);
                }
                REQUIRE(distinct.size() == pairs.size());
            }
        }
    }
}

TEST_CASE("vector pair cardinalities match the closed form") {
    for (unsigned i = 1; i <= 6; ++i) {
        for (unsigned j = 1; j <= i; ++j) {
            Count total = 0;
            for (unsigned k = 0; k <= j; ++k) {
                Count cardinality = fuzzcount::enumerate_pairs(i, j, i + k).size();
                REQUIRE(cardinality == fuzzcount::binomial(i + k, i) *
                                           fuzzcount::binomial(i, static_cast<long long>(j) - k));
                // The i < j shape has the same cardinality, verified rather
                // than assumed.
                REQUIRE(Count(fuzzcount::enumerate_pairs(j, i, i + k).size()) == cardinality);
                total += cardinality;
            }
            REQUIRE(total == fuzzcount::interleave_count(i, j));
        }
    }
}

TEST_CASE("build_chain follows the stepwise product rules on Z_6") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    const Chain gamma_a{lat.sylow_a_id};
    const Chain gamma_b{lat.sylow_b_id};

    CHECK(fuzzcount::build_chain(VectorPair{{1}, {1}, 1}, gamma_a, gamma_b, lat) ==
          Chain{lat.full_id()});
    CHECK(fuzzcount::build_chain(VectorPair{{1}, {2}, 2}, gamma_a, gamma_b, lat) ==
          Chain{lat.sylow_a_id, lat.full_id()});
    CHECK(fuzzcount::build_chain(VectorPair{{2}, {1}, 2}, gamma_a, gamma_b, lat) ==
          Chain{lat.sylow_b_id, lat.full_id()});

    CHECK_THROWS_AS(
        fuzzcount::build_chain(VectorPair{{1, 2}, {1}, 2}, gamma_a, gamma_b, lat),
        std::invalid_argument);
}

TEST_CASE("chain_to_pair reads growth positions") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    CHECK(fuzzcount::chain_to_pair(Chain{lat.full_id()}, lat) == VectorPair{{1}, {1}, 1});
    CHECK(fuzzcount::chain_to_pair(Chain{lat.sylow_a_id, lat.full_id()}, lat) ==
          VectorPair{{1}, {2}, 2});
    CHECK_THROWS_AS(fuzzcount::chain_to_pair(Chain{0, lat.full_id()}, lat),
                    std::invalid_argument);

    auto single = fuzzcount::build_lattice(GroupSpec(2, {1}));
    CHECK_THROWS_AS(fuzzcount::chain_to_pair(Chain{1}, single), std::invalid_argument);
}

TEST_CASE("bijection round trips on small two-prime groups") {
    for (const auto& spec : fuzzcount::two_prime_specs(30, {2, 3, 5})) {
        auto lat = fuzzcount::build_lattice(spec);

        // phi then psi is the identity on chains.
        fuzzcount::for_each_chain_ending_at(lat, lat.full_id(), false, [&](const Chain& c) {
            VectorPair vp = fuzzcount::chain_to_pair(c, lat);
            REQUIRE(is_valid_pair(vp));
            auto [ca, cb] = fuzzcount::restrict_chain(lat, c);
            REQUIRE(fuzzcount::build_chain(vp, ca, cb, lat) == c);
        });

        // psi then phi is the identity on pairs, and distinct pairs build
        // distinct chains.
        std::vector<Chain> chains_a, chains_b;
        fuzzcount::for_each_chain_ending_at(lat, lat.sylow_a_id, false,
                                            [&](const Chain& c) { chains_a.push_back(c); });
        fuzzcount::for_each_chain_ending_at(lat, lat.sylow_b_id, false,
                                            [&](const Chain& c) { chains_b.push_back(c); });
        for (const Chain& ca : chains_a) {
            for (const Chain& cb : chains_b) {
                const unsigned i = static_cast<unsigned>(ca.size());
                const unsigned j = static_cast<unsigned>(cb.size());
                std::set<Chain> built;
                Count expected = 0;
                for (unsigned s = std::max(i, j); s <= i + j; ++s) {
                    for (const VectorPair& vp : fuzzcount::enumerate_pairs(i, j, s)) {
                        Chain chain = fuzzcount::build_chain(vp, ca, cb, lat);
                        REQUIRE(fuzzcount::chain_to_pair(chain, lat) == vp);
                        built.insert(std::move(chain));
                        ++expected;
                    }
                }
                REQUIRE(Count(built.size()) == expected);
            }
        }
    }
}
