#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chainparity/search.hpp"

using namespace chainparity;

namespace {

const ring_size k2 = ring_size::from_half(2);
const ring_size k4 = ring_size::from_half(4);

bool witness_is_perfect(const search_report& r) {
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->n_parties == r.n_parties);
    CHECK(r.witness->alphabet == r.alphabet);
    CHECK(decidable(*r.witness));
    return verify_serial(*r.witness).perfect;
}

} // namespace

TEST_CASE("exhaustive: smallest cases at N=2, K=2") {
    const auto l1 = exhaustive_exists(2, k2, 1);
    CHECK(l1.verdict == search_verdict::impossible);
    CHECK(l1.nodes == 1);
    CHECK_FALSE(l1.witness.has_value());
    CHECK(l1.memory_bits == 0.0);

    const auto l2 = exhaustive_exists(2, k2, 2);
    CHECK(l2.verdict == search_verdict::exists);
    CHECK(l2.nodes == 4);
    CHECK(witness_is_perfect(l2));
    // First decidable table in odometer order: k1 -> 1,1,2,2 (1-based),
    // stored full-shape with the unused rows zero-filled.
    CHECK(l2.witness->transitions[0] == std::vector<unsigned>{0, 0, 1, 1, 0, 0, 0, 0});
    CHECK(l2.memory_bits == doctest::Approx(1.0));

    const auto l3 = exhaustive_exists(2, k2, 3);
    CHECK(l3.verdict == search_verdict::exists);
    CHECK(l3.nodes == 5);
    CHECK(witness_is_perfect(l3));
    CHECK(l3.memory_bits == doctest::Approx(std::log2(3.0)));
}

TEST_CASE("profile: verdicts across the small landscape") {
    CHECK(profile_exists(2, k2, 1).verdict == search_verdict::impossible);
    CHECK(profile_exists(2, k2, 2).verdict == search_verdict::exists);
    CHECK(profile_exists(3, k2, 1).verdict == search_verdict::impossible);
    CHECK(profile_exists(3, k2, 2).verdict == search_verdict::impossible);
    CHECK(profile_exists(3, k2, 3).verdict == search_verdict::impossible);
    CHECK(profile_exists(3, k2, 4).verdict == search_verdict::exists);
    CHECK(profile_exists(3, k4, 3).verdict == search_verdict::impossible);
    CHECK(profile_exists(3, k4, 4).verdict == search_verdict::exists);
    CHECK(profile_exists(4, k2, 3).verdict == search_verdict::impossible);
}

TEST_CASE("profile: witnesses verify perfectly") {
    for (auto [n, ring, l] : {std::tuple{2u, k2, 2u}, {2u, k2, 3u}, {3u, k2, 4u},
                              {3u, k4, 4u}, {3u, k4, 5u}, {4u, k2, 4u}}) {
        const auto rep = profile_exists(n, ring, l);
        REQUIRE(rep.verdict == search_verdict::exists);
        CHECK(witness_is_perfect(rep));
    }
}

TEST_CASE("alphabet at least 2K embeds the running-sum protocol") {
    const auto big = profile_exists(5, k2, 6);
    CHECK(big.verdict == search_verdict::exists);
    CHECK(witness_is_perfect(big));
    CHECK(theorem_entailed(big));
}

TEST_CASE("single party decides alone") {
    for (unsigned l : {1u, 3u}) {
        const auto rep = profile_exists(1, k4, l);
        CHECK(rep.verdict == search_verdict::exists);
        CHECK(witness_is_perfect(rep));
    }
    const auto ex = exhaustive_exists(1, k4, 1);
    CHECK(ex.verdict == search_verdict::exists);
    CHECK(witness_is_perfect(ex));
}

TEST_CASE("method agreement where both can run") {
    for (unsigned l = 1; l <= 4; ++l) {
        CHECK(exhaustive_exists(2, k2, l).verdict == profile_exists(2, k2, l).verdict);
        CHECK(exhaustive_exists(2, k4, l).verdict == profile_exists(2, k4, l).verdict);
    }
    for (unsigned l = 1; l <= 2; ++l)
        CHECK(exhaustive_exists(3, k2, l).verdict == profile_exists(3, k2, l).verdict);
}

TEST_CASE("domination pruning never changes a verdict") {
    search_options no_dom;
    no_dom.use_domination = false;
    for (unsigned l = 1; l <= 4; ++l) {
        CHECK(profile_exists(3, k2, l).verdict == profile_exists(3, k2, l, no_dom).verdict);
        CHECK(profile_exists(3, k4, l).verdict == profile_exists(3, k4, l, no_dom).verdict);
        CHECK(profile_exists(2, k2, l).verdict == profile_exists(2, k2, l, no_dom).verdict);
    }
}

TEST_CASE("worker count changes neither verdict nor witness") {
    for (auto [n, l] : {std::pair{3u, 3u}, {3u, 4u}, {2u, 3u}}) {
        search_options base;
        base.workers = 1;
        const auto ref = profile_exists(n, k4, l, base);
        for (int workers : {2, 3, 5}) {
            search_options opts;
            opts.workers = workers;
            const auto rep = profile_exists(n, k4, l, opts);
            CHECK(rep.verdict == ref.verdict);
            REQUIRE(rep.witness.has_value() == ref.witness.has_value());
            if (rep.witness) {
                CHECK(rep.witness->transitions == ref.witness->transitions);
                CHECK(rep.witness->decision == ref.witness->decision);
            }
        }
        // Same worker count twice: identical everything, nodes included.
        const auto again = profile_exists(n, k4, l, base);
        CHECK(again.nodes == ref.nodes);
        CHECK(again.verdict == ref.verdict);
    }
}

TEST_CASE("budgets: refusal and unknown") {
    search_options tiny;
    tiny.budget = 10;
    // Exhaustive refuses up front rather than sampling.
    CHECK_THROWS_AS(exhaustive_exists(2, k2, 4, tiny), budget_error);
    // Profile runs out of nodes and says so.
    const auto rep = profile_exists(3, k4, 3, tiny);
    CHECK(rep.verdict == search_verdict::unknown);
    CHECK_FALSE(theorem_entailed(rep));
}

TEST_CASE("theorem entailment") {
    // Impossible with N > K, L < 2K, K a power of two: entailed.
    CHECK(theorem_entailed(profile_exists(3, k2, 2)));
    CHECK(theorem_entailed(profile_exists(3, k2, 3)));
    // Exists at L = 2K: entailed.
    CHECK(theorem_entailed(profile_exists(3, k2, 4)));
    // Exists below 2K: empirical only.
    CHECK_FALSE(theorem_entailed(profile_exists(2, k2, 2)));
    CHECK_FALSE(theorem_entailed(profile_exists(3, k4, 4)));
    // Impossible without N > K: empirical only.
    CHECK_FALSE(theorem_entailed(profile_exists(2, k2, 1)));
}

TEST_CASE("min_l sweeps") {
    const auto a = min_l(2, k2, 4, search_method::exhaustive);
    REQUIRE(a.minimal_l.has_value());
    CHECK(*a.minimal_l == 2);
    CHECK(a.per_l.size() == 4);

    const auto b = min_l(3, k2, 4, search_method::profile);
    REQUIRE(b.minimal_l.has_value());
    CHECK(*b.minimal_l == 4);
    for (unsigned l = 1; l <= 3; ++l)
        CHECK(b.per_l[l - 1].verdict == search_verdict::impossible);

    const auto c = min_l(3, k4, 8, search_method::profile);
    REQUIRE(c.minimal_l.has_value());
    CHECK(*c.minimal_l == 4);

    const auto d = min_l(3, k2, 3, search_method::profile);
    CHECK_FALSE(d.minimal_l.has_value());

    CHECK_THROWS_AS(min_l(2, k2, 0), std::invalid_argument);
    CHECK_THROWS_AS(min_l(2, k2, 5), std::invalid_argument);
}

TEST_CASE("memory_bits is log2 of the alphabet") {
    for (unsigned l = 1; l <= 6; ++l) {
        const auto rep = profile_exists(2, k4, l);
        CHECK(rep.memory_bits == doctest::Approx(std::log2(static_cast<double>(l))));
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(profile_exists(0, k2, 2), std::invalid_argument);
    CHECK_THROWS_AS(profile_exists(2, k2, 0), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_exists(0, k2, 2), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_exists(2, k2, 0), std::invalid_argument);
}
