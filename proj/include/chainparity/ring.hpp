#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "chainparity/errors.hpp"

namespace chainparity {

// The cyclic ring Z_2K. K itself (the half-modulus) is the quantity the
// parity promise is stated in; most arithmetic happens modulo 2K.
struct ring_size {
    unsigned two_k = 2;
    unsigned k = 1;
    bool k_is_power_of_two = true;

    static ring_size from_half(unsigned k);
    static ring_size from_two_k(unsigned two_k);

    friend bool operator==(const ring_size&, const ring_size&) = default;
};

// Subset of Z_2K backed by a single machine word: bit x set <=> x in the set.
// Word backing caps two_k at 64; construction rejects larger rings.
class sum_set {
  public:
    explicit sum_set(ring_size ring);
    sum_set(ring_size ring, std::initializer_list<unsigned> members);
    static sum_set from_mask(ring_size ring, std::uint64_t mask);

    ring_size ring() const { return ring_; }
    std::uint64_t mask() const { return bits_; }
    bool empty() const { return bits_ == 0; }
    unsigned size() const { return static_cast<unsigned>(std::popcount(bits_)); }
    bool contains(unsigned x) const;
    void insert(unsigned x);

    // A ⊕ {s}: every member moved forward by s, modulo 2K.
    sum_set shifted(unsigned s) const;

    std::vector<unsigned> elements() const;

    friend bool operator==(const sum_set&, const sum_set&) = default;

  private:
    std::uint64_t bits_ = 0;
    ring_size ring_;
};

// Set of all distinct pairwise sums modulo 2K. Empty if either side is empty.
sum_set oplus(const sum_set& a, const sum_set& b);

// True iff no member x has its antipode x+K also in the set. Empty sets
// are vacuously K-free.
bool is_k_free(const sum_set& a);

// |A ⊕ {a,b}| - |A| for distinct a, b. Never negative.
int growth(const sum_set& a, unsigned x, unsigned y);

// The shrinking shift sequence produced when growth(A,a,b) = 0: starting from
// delta_1 = |b-a|, each next delta is the first multiple that lands strictly
// between 0 and the current delta modulo 2K. The final delta shifts A onto
// itself.
struct period_report {
    std::vector<unsigned> deltas; // strictly decreasing, ends at period_v
    unsigned period_v = 0;
    bool divides_ring = false; // whether period_v divides 2K (recorded, not assumed)
};

period_report period_sequence(const sum_set& a, unsigned x, unsigned y);

// Exhaustive sweep over every nonempty K-free subset of Z_2K and every
// distinct pair (a,b), collecting the cases with zero growth. For K a power
// of two the collection is provably empty; for other K it is the list of
// counterexamples.
struct zero_growth_case {
    std::uint64_t set_mask = 0;
    unsigned a = 0;
    unsigned b = 0;

    friend bool operator==(const zero_growth_case&, const zero_growth_case&) = default;
};

struct growth_sweep_result {
    ring_size ring;
    std::uint64_t sets_checked = 0;  // nonempty K-free sets visited
    std::uint64_t pairs_checked = 0; // (set, pair) combinations tested
    std::vector<zero_growth_case> zero_growth; // sorted by (mask, a, b)
};

growth_sweep_result sweep_growth(ring_size ring, int workers = 0);
growth_sweep_result sweep_growth_serial(ring_size ring);

} // namespace chainparity
