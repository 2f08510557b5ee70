#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chainparity/qsim.hpp"

using namespace chainparity;

namespace {

constexpr double pi = std::numbers::pi;

// The independent oracle the simulators must reproduce.
parity streaming_parity(const discrete_instance& inst) {
    unsigned long long sum = 0;
    for (unsigned v : inst.values) sum = (sum + v) % inst.ring.two_k;
    REQUIRE((sum == 0 || sum == inst.ring.k));
    return sum == 0 ? parity::even : parity::odd;
}

discrete_instance make_instance(ring_size ring, std::vector<unsigned> values) {
    discrete_instance inst;
    inst.ring = ring;
    inst.values = std::move(values);
    return inst;
}

} // namespace

TEST_CASE("apply_section: single-section poles") {
    const ring_size ring = ring_size::from_half(4);

    qubit_state q;
    apply_section(q, ring.k, ring); // half a rotation: up -> down
    CHECK(std::abs(q.amp0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::norm(q.amp1) == doctest::Approx(1.0).epsilon(1e-12));

    angle_state a;
    apply_section(a, ring.k, ring);
    CHECK(a.quanta == ring.k);
    CHECK(a.theta == doctest::Approx(pi));

    qubit_state id;
    apply_section(id, 0, ring);
    CHECK(id.amp0 == std::complex<double>{1.0, 0.0});
    CHECK(id.amp1 == std::complex<double>{0.0, 0.0});

    CHECK_THROWS_AS(apply_section(id, ring.two_k, ring), std::invalid_argument);
}

TEST_CASE("two quarter rotations compose to a half") {
    const ring_size ring = ring_size::from_half(2);
    const auto res = run_chain(make_instance(ring, {1, 1}), qubit_model::amplitude);
    CHECK(res.verdict == parity::odd);
    CHECK(res.error_probability < 1e-12);
}

TEST_CASE("normalization holds through long products") {
    const ring_size ring = ring_size::from_half(64);
    qubit_state q;
    for (unsigned i = 0; i < 100000; ++i) apply_section(q, (i * 37 + 5) % ring.two_k, ring);
    CHECK(q.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model equivalence: exhaustive small instances") {
    for (unsigned k_half : {1u, 2u, 3u, 4u}) {
        const ring_size ring = ring_size::from_half(k_half);
        for (unsigned n = 1; n <= 4; ++n) {
            std::vector<unsigned> v(n, 0);
            while (true) {
                unsigned sum = 0;
                for (unsigned x : v) sum += x;
                if (sum % ring.k == 0) {
                    const auto inst = make_instance(ring, v);
                    const parity truth = streaming_parity(inst);
                    CHECK(run_chain(inst, qubit_model::angle).verdict == truth);
                    const auto amp = run_chain(inst, qubit_model::amplitude);
                    CHECK(amp.verdict == truth);
                    CHECK(amp.error_probability < 1e-9);
                }
                unsigned i = 0;
                while (i < n && ++v[i] == ring.two_k) v[i++] = 0;
                if (i == n) break;
            }
        }
    }
}

TEST_CASE("model equivalence: randomized long chains") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const unsigned k_half = 1u << (seed % 11); // up to K = 1024, 2K = 2^11
        const ring_size ring = ring_size::from_half(k_half);
        const unsigned n = 1 + static_cast<unsigned>(seed * 97 % 300);
        const parity want = seed % 2 ? parity::odd : parity::even;
        const auto inst = random_instance(n, ring, want, seed);
        CHECK(run_chain(inst, qubit_model::angle).verdict == want);
        const auto amp = run_chain(inst, qubit_model::amplitude);
        CHECK(amp.verdict == want);
        CHECK(amp.error_probability < 1e-9);
    }
}

TEST_CASE("batch: parallel equals serial") {
    std::vector<discrete_instance> batch;
    const ring_size ring = ring_size::from_half(8);
    for (std::uint64_t seed = 0; seed < 64; ++seed)
        batch.push_back(random_instance(50, ring, seed % 2 ? parity::odd : parity::even, seed));

    for (qubit_model model : {qubit_model::angle, qubit_model::amplitude}) {
        const auto serial = run_chain_batch_serial(batch, model);
        for (int workers : {1, 2, 3}) {
            const auto par = run_chain_batch(batch, model, workers);
            REQUIRE(par.size() == serial.size());
            for (std::size_t i = 0; i < par.size(); ++i) {
                CHECK(par[i].verdict == serial[i].verdict);
                CHECK(par[i].error_probability == serial[i].error_probability);
            }
        }
    }
}

TEST_CASE("batch: the earliest failure is the one reported") {
    const ring_size ring = ring_size::from_half(2);
    std::vector<discrete_instance> batch;
    for (int i = 0; i < 8; ++i) batch.push_back(make_instance(ring, {1, 1}));
    batch[3].values = {1, 2}; // promise broken
    batch[6].values = {9, 9}; // range broken
    CHECK_THROWS_AS(run_chain_batch_serial(batch, qubit_model::angle), promise_error);
    for (int workers : {2, 3})
        CHECK_THROWS_AS(run_chain_batch(batch, qubit_model::angle, workers), promise_error);
}

TEST_CASE("continuous: agrees with the discrete models on canonical fields") {
    const ring_size ring = ring_size::from_half(4);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = random_instance(5, ring, seed % 2 ? parity::odd : parity::even, seed);
        const field_spec field = canonical_field(inst, 1.0);
        const auto res = run_continuous(field, ring, 4096);
        CHECK(res.verdict == run_chain(inst, qubit_model::angle).verdict);
        CHECK(res.error_bound < pi / 2);
    }
}

TEST_CASE("continuous: oracle example and bound behavior") {
    // Field 2 on [0, 1/2], 0 on [1/2, 1]: integral 1, m = 1, odd.
    field_spec f;
    f.segments = {{0.5, 2.0}, {0.5, 0.0}};
    f.alpha = 1.0;
    const ring_size ring = ring_size::from_half(2);

    // 5 steps: one step straddles the jump, bound = (1/5)*2*pi < pi/2.
    const auto coarse = run_continuous(f, ring, 5);
    CHECK(coarse.verdict == parity::odd);
    CHECK(coarse.m == 1);
    CHECK(coarse.error_bound == doctest::Approx(2 * pi / 5));

    // Doubling the steps halves the worst-case straddle width.
    const auto finer = run_continuous(f, ring, 10);
    CHECK(finer.error_bound <= coarse.error_bound / 2 + 1e-12);

    // Aligned steps integrate exactly.
    const auto aligned = run_continuous(f, ring, 4);
    CHECK(aligned.error_bound == 0.0);
    CHECK(aligned.theta == doctest::Approx(pi));

    // 3 steps: the middle step straddles, bound = (1/3)*2*pi >= pi/2.
    CHECK_THROWS_AS(run_continuous(f, ring, 3), indeterminate_error);
}

TEST_CASE("continuous: promise and grid violations are rejected") {
    const ring_size ring = ring_size::from_half(2);
    field_spec off_grid;
    off_grid.segments = {{1.0, 0.7}};
    off_grid.alpha = 1.0;
    CHECK_THROWS_AS(run_continuous(off_grid, ring, 64), promise_error);

    // Integral alpha/2 = 1 grid unit at K=2: on the grid, off the promise.
    field_spec breaks_promise;
    breaks_promise.segments = {{1.0, 0.5}};
    breaks_promise.alpha = 1.0;
    CHECK_THROWS_AS(run_continuous(breaks_promise, ring, 64), promise_error);
}

TEST_CASE("rod: zero jitter reproduces the angle model") {
    const ring_size ring = ring_size::from_half(8);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = random_instance(6, ring, seed % 2 ? parity::odd : parity::even, seed);
        const auto rod = run_rod(inst, 0.0, seed);
        CHECK(rod.verdict == run_chain(inst, qubit_model::angle).verdict);
    }
}

TEST_CASE("rod: jitter within the quarter-rotation margin never errs") {
    // 4 sections, each off by at most pi/16: total below pi/4 < pi/2.
    const ring_size ring = ring_size::from_half(4);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto inst = random_instance(4, ring, seed % 2 ? parity::odd : parity::even, seed);
        const auto rod = run_rod(inst, pi / 16, seed * 31 + 7);
        CHECK(rod.verdict == run_chain(inst, qubit_model::angle).verdict);
    }
}

TEST_CASE("rod: oversized jitter eventually flips a verdict") {
    const ring_size ring = ring_size::from_half(2);
    const auto inst = random_instance(2, ring, parity::even, 5);
    bool flipped = false;
    for (std::uint64_t seed = 0; seed < 200 && !flipped; ++seed)
        flipped = run_rod(inst, pi, seed).verdict != parity::even;
    CHECK(flipped);
}

TEST_CASE("rod: jitter validation") {
    const auto inst = random_instance(2, ring_size::from_half(2), parity::even, 1);
    CHECK_THROWS_AS(run_rod(inst, -0.5, 1), std::invalid_argument);
}
