#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fuzzcount/lattice.hpp"
#include "fuzzcount/lattice_json.hpp"

using fuzzcount::BoundExceeded;
using fuzzcount::Chain;
using fuzzcount::Count;
using fuzzcount::FuzzyMembership;
using fuzzcount::GroupSpec;
using fuzzcount::InvalidMembership;
using fuzzcount::SubgroupId;
using fuzzcount::SubgroupLattice;

namespace {

std::vector<std::uint32_t> subgroup_orders(const SubgroupLattice& lat) {
    std::vector<std::uint32_t> orders;
    for (const auto& s : lat.subgroups) orders.push_back(s.order);
    return orders;
}

}  // namespace

TEST_CASE("lattice of Z_6") {
    GroupSpec spec(2, {1}, 3, {1});
    auto lat = fuzzcount::build_lattice(spec);
    CHECK(lat.subgroups.size() == 4);
    CHECK(subgroup_orders(lat) == std::vector<std::uint32_t>{1, 2, 3, 6});
    CHECK(lat.trivial_id() == 0);
    CHECK(lat.subgroups[lat.full_id()].order == 6);
}

TEST_CASE("lattice of Z_2^2") {
    GroupSpec spec(2, {1, 1});
    auto lat = fuzzcount::build_lattice(spec);
    CHECK(lat.subgroups.size() == 5);
    CHECK(subgroup_orders(lat) == std::vector<std::uint32_t>{1, 2, 2, 2, 4});
}

TEST_CASE("lattice of Z_2") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1}));
    CHECK(lat.subgroups.size() == 2);
}

TEST_CASE("cyclic lattices have one subgroup per divisor") {
    auto lat12 = fuzzcount::build_lattice(GroupSpec(2, {2}, 3, {1}));
    CHECK(lat12.subgroups.size() == 6);  // d(12)
    CHECK(subgroup_orders(lat12) == std::vector<std::uint32_t>{1, 2, 3, 4, 6, 12});

    auto lat8 = fuzzcount::build_lattice(GroupSpec(2, {3}));
    auto counts = fuzzcount::count_chains(lat8);
    CHECK(counts.profile == fuzzcount::cyclic_profile(3));
}

TEST_CASE("lattice construction is deterministic") {
    GroupSpec spec(2, {1, 1}, 3, {1});
    auto a = fuzzcount::build_lattice(spec);
    auto b = fuzzcount::build_lattice(spec);
    REQUIRE(a.subgroups.size() == b.subgroups.size());
    for (std::size_t i = 0; i < a.subgroups.size(); ++i) {
        REQUIRE(a.subgroups[i].members == b.subgroups[i].members);
    }
    CHECK(fuzzcount::lattice_to_json(a).dump() == fuzzcount::lattice_to_json(b).dump());
}

TEST_CASE("oracle bound refusal names the bound") {
    GroupSpec big(2, {10});  // order 1024
    try {
        fuzzcount::build_lattice(big);
        FAIL("expected BoundExceeded");
    } catch (const BoundExceeded& e) {
        std::string msg = e.what();
        CHECK(msg.find("512") != std::string::npos);
        CHECK(msg.find("1024") != std::string::npos);
    }
    CHECK_THROWS_AS(fuzzcount::build_lattice(GroupSpec(2, {4}), 8), BoundExceeded);
    CHECK_NOTHROW(fuzzcount::build_lattice(GroupSpec(2, {10}), 1024));
}

TEST_CASE("chain counts") {
    auto lat6 = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    auto c6 = fuzzcount::count_chains(lat6);
    CHECK(c6.n == 6);
    CHECK(c6.h == 3);
    CHECK(c6.profile.counts == std::vector<Count>{1, 2});

    auto lat12 = fuzzcount::build_lattice(GroupSpec(2, {2}, 3, {1}));
    CHECK(fuzzcount::count_chains(lat12).n == 16);

    auto lat4 = fuzzcount::build_lattice(GroupSpec(2, {1, 1}));
    auto c4 = fuzzcount::count_chains(lat4);
    CHECK(c4.n == 8);
    CHECK(c4.h == 4);
    CHECK(c4.profile.counts == std::vector<Count>{1, 3});
}

TEST_CASE("n = 2h across small groups") {
    for (const auto& spec :
         {GroupSpec(2, {1}, 3, {1}), GroupSpec(2, {2, 1}), GroupSpec(3, {1, 1}),
          GroupSpec(2, {1, 1}, 5, {1}), GroupSpec(5, {2})}) {
        auto counts = fuzzcount::count_chains(fuzzcount::build_lattice(spec));
        REQUIRE(counts.n == 2 * counts.h);
        REQUIRE(counts.h == counts.profile.total());
    }
}

TEST_CASE("chain enumeration") {
    auto lat6 = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    auto chains = fuzzcount::enumerate_chains(lat6);
    REQUIRE(chains.size() == 6);
    // Lexicographic on id sequences, every chain distinct, terminal G.
    CHECK(std::is_sorted(chains.begin(), chains.end()));
    CHECK(std::set<Chain>(chains.begin(), chains.end()).size() == 6);
    for (const Chain& c : chains) {
        REQUIRE(c.back() == lat6.full_id());
    }
    CHECK(chains == fuzzcount::enumerate_chains(lat6));

    auto lat2 = fuzzcount::build_lattice(GroupSpec(2, {1}));
    auto two = fuzzcount::enumerate_chains(lat2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Chain{0, 1});
    CHECK(two[1] == Chain{1});

    auto lat12 = fuzzcount::build_lattice(GroupSpec(2, {2}, 3, {1}));
    CHECK(fuzzcount::enumerate_chains(lat12).size() == 16);

    CHECK_THROWS_AS(fuzzcount::enumerate_chains(lat6, 3), BoundExceeded);
}

TEST_CASE("chain term orders strictly increase and divide the group order") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1, 1}, 3, {1}));
    fuzzcount::for_each_chain(lat, [&](const Chain& c) {
        for (std::size_t t = 0; t < c.size(); ++t) {
            REQUIRE(lat.num_elements % lat.subgroups[c[t]].order == 0);
            if (t > 0) {
                REQUIRE(lat.subgroups[c[t - 1]].order < lat.subgroups[c[t]].order);
                REQUIRE(lat.subgroups[c[t - 1]].bits.subset_of(lat.subgroups[c[t]].bits));
            }
        }
    });
}

TEST_CASE("sylow decomposition") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    auto [a_full, b_full] = fuzzcount::sylow_decompose(lat, lat.full_id());
    CHECK(lat.subgroups[a_full].order == 2);
    CHECK(lat.subgroups[b_full].order == 3);
    CHECK(a_full == lat.sylow_a_id);
    CHECK(b_full == lat.sylow_b_id);

    auto [a_triv, b_triv] = fuzzcount::sylow_decompose(lat, lat.trivial_id());
    CHECK(a_triv == lat.trivial_id());
    CHECK(b_triv == lat.trivial_id());

    SubgroupId order2 = 0;
    for (const auto& s : lat.subgroups) {
        if (s.order == 2) order2 = s.id;
    }
    auto [a_p, b_p] = fuzzcount::sylow_decompose(lat, order2);
    CHECK(lat.subgroups[a_p].order == 2);
    CHECK(b_p == lat.trivial_id());

    // Orders multiply back in every subgroup of a bigger group.
    auto lat72 = fuzzcount::build_lattice(GroupSpec(2, {2, 1}, 3, {1}));
    for (const auto& s : lat72.subgroups) {
        auto [a, b] = fuzzcount::sylow_decompose(lat72, s.id);
        REQUIRE(Count(lat72.subgroups[a].order) * lat72.subgroups[b].order == s.order);
    }

    auto single = fuzzcount::build_lattice(GroupSpec(2, {1}));
    CHECK_THROWS_AS(fuzzcount::sylow_decompose(single, 0), std::invalid_argument);
}

TEST_CASE("chain restriction") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    const SubgroupId p = 1, q = 2, g = 3;  // canonical order of Z_6

    auto [ca, cb] = fuzzcount::restrict_chain(lat, Chain{p, g});
    CHECK(ca == Chain{p});
    CHECK(cb == Chain{q});

    auto [ca2, cb2] = fuzzcount::restrict_chain(lat, Chain{g});
    CHECK(ca2 == Chain{p});
    CHECK(cb2 == Chain{q});

    CHECK_THROWS_AS(fuzzcount::restrict_chain(lat, Chain{0, g}), std::invalid_argument);

    // The two canonical interleavings from the restriction lemma both
    // restrict back to the generating pair.
    auto lat12 = fuzzcount::build_lattice(GroupSpec(2, {2}, 3, {1}));
    Chain a_chain{1, 3};  // Z_2 < Z_4 inside Z_12
    Chain b_chain{2};     // Z_3
    REQUIRE(lat12.subgroups[a_chain[0]].order == 2);
    REQUIRE(lat12.subgroups[a_chain[1]].order == 4);
    REQUIRE(lat12.subgroups[b_chain[0]].order == 3);
    Chain left{1, 3, lat12.full_id()};  // A_1 < A < A x B
    auto [la, lb] = fuzzcount::restrict_chain(lat12, left);
    CHECK(la == a_chain);
    CHECK(lb == b_chain);
    Chain right{2, 4, lat12.full_id()};  // B < A_1 x B < A x B, order 3 < 6 < 12
    REQUIRE(lat12.subgroups[4].order == 6);
    auto [ra, rb] = fuzzcount::restrict_chain(lat12, right);
    CHECK(ra == a_chain);
    CHECK(rb == b_chain);
}

TEST_CASE("count_restricted_by") {
    auto lat6 = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    CHECK(fuzzcount::count_restricted_by(lat6, Chain{1}, Chain{2}) == 3);

    auto lat12 = fuzzcount::build_lattice(GroupSpec(2, {2}, 3, {1}));
    CHECK(fuzzcount::count_restricted_by(lat12, Chain{1, 3}, Chain{2}) ==
          fuzzcount::interleave_count(2, 1));

    // Census matches the direct filter on every pair and partitions H(G).
    auto census = fuzzcount::restriction_census(lat12);
    Count total = 0;
    for (const auto& [key, cnt] : census) {
        REQUIRE(cnt == fuzzcount::count_restricted_by(lat12, key.first, key.second));
        total += cnt;
    }
    CHECK(total == fuzzcount::count_chains(lat12).h);
}

TEST_CASE("membership from chains") {
    auto lat6 = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));

    auto constant = fuzzcount::chain_to_membership(lat6, Chain{lat6.full_id()});
    CHECK(constant.level_of == std::vector<unsigned>(6, 1));
    CHECK(fuzzcount::membership_to_chain(lat6, constant) == Chain{lat6.full_id()});

    auto lat2 = fuzzcount::build_lattice(GroupSpec(2, {1}));
    auto halves = fuzzcount::chain_to_membership(lat2, Chain{0, 1});
    CHECK(halves.level_of == std::vector<unsigned>{1, 2});

    auto stepped = fuzzcount::chain_to_membership(lat6, Chain{1, lat6.full_id()});
    for (std::uint32_t e : lat6.subgroups[1].members) CHECK(stepped.level_of[e] == 1);
    Count rank2 = 0;
    for (unsigned r : stepped.level_of) {
        if (r == 2) ++rank2;
    }
    CHECK(rank2 == 4);
    CHECK(fuzzcount::membership_to_chain(lat6, stepped) == Chain{1, lat6.full_id()});
}

TEST_CASE("membership round trip is exhaustive on Z_6") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    fuzzcount::for_each_chain(lat, [&](const Chain& c) {
        auto mu = fuzzcount::chain_to_membership(lat, c);
        REQUIRE(fuzzcount::membership_to_chain(lat, mu) == c);
    });
}

TEST_CASE("invalid memberships are rejected") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1, 1}));
    // Rank-1 slice {0, 1, 2} is not closed: 1 + 2 = 3 sits outside.
    FuzzyMembership bad{{1, 1, 1, 2}};
    CHECK_THROWS_AS(fuzzcount::membership_to_chain(lat, bad), InvalidMembership);

    FuzzyMembership unranked{{1, 1, 1, 0}};
    CHECK_THROWS_AS(fuzzcount::membership_to_chain(lat, unranked), InvalidMembership);

    FuzzyMembership oversized{{1, 1, 1, 99}};
    CHECK_THROWS_AS(fuzzcount::membership_to_chain(lat, oversized), InvalidMembership);

    // Skipped ranks collapse to the same chain.
    FuzzyMembership gappy{{1, 1, 3, 3}};
    auto chain = fuzzcount::membership_to_chain(lat, gappy);
    REQUIRE(chain.size() == 2);
    CHECK(lat.subgroups[chain[0]].order == 2);
    CHECK(chain[1] == lat.full_id());
}

TEST_CASE("covers form the divisor Hasse diagram on cyclic groups") {
    auto lat12 = fuzzcount::build_lattice(GroupSpec(2, {2}, 3, {1}));
    // Divisors of 12: 1-2, 1-3, 2-4, 2-6, 3-6, 4-12, 6-12.
    CHECK(lat12.covers.size() == 7);
    for (const auto& [h, k] : lat12.covers) {
        REQUIRE(fuzzcount::is_prime(lat12.subgroups[k].order / lat12.subgroups[h].order));
    }
}

TEST_CASE("lattice JSON dump shape") {
    auto lat = fuzzcount::build_lattice(GroupSpec(2, {1}, 3, {1}));
    auto j = fuzzcount::lattice_to_json(lat);
    CHECK(j["order"] == 6);
    CHECK(j["subgroups"].size() == 4);
    CHECK(j["subgroups"][0]["members"] == nlohmann::ordered_json::array({0}));
    CHECK(j["group"]["p"] == 2);
    CHECK(j["covers"].size() == 4);  // diamond: 1-P, 1-Q, P-G, Q-G
}
