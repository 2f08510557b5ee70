#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chainparity/ring.hpp"
#include "chainparity/task.hpp"

namespace chainparity {

// Deterministic one-way chain protocol. Messages are stored 0-based
// internally (0 .. L-1, with l_0 = 0); the JSON layer speaks the 1-based
// convention. Transition table n (for party n+2's incoming hop... table index
// n belongs to sending party n+1) maps l*two_k + k -> outgoing message.
// Party 1 only ever uses row l = 0; other rows are carried but ignored.
struct protocol_table {
    unsigned n_parties = 1;
    ring_size ring;
    unsigned alphabet = 1;
    std::vector<std::vector<unsigned>> transitions; // n_parties-1 tables, each alphabet*two_k
    std::vector<parity> decision;                   // alphabet*two_k

    std::size_t cell(unsigned l, unsigned k) const {
        return static_cast<std::size_t>(l) * ring.two_k + k;
    }
    void validate() const;
};

parity execute(const protocol_table& p, const discrete_instance& inst);

// Reach sets A_n: stage n (1-based, n = 1..N-1) holds, for every message
// value, the set of partial sums k_1+..+k_n mod 2K consistent with that
// message being sent. Index [n-1][l].
std::vector<std::vector<sum_set>> reach_sets(const protocol_table& p);

// The sets the deciding party conditions on: stage N-1 reach sets, or for
// N = 1 the virtual stage 0 ({0} under message 0, empty elsewhere).
std::vector<sum_set> final_reach(const protocol_table& p);

struct counterexample {
    std::vector<unsigned> values;
    parity expected = parity::even;
    parity produced = parity::even;
};

struct verify_result {
    bool perfect = false;
    std::optional<counterexample> cex; // lexicographically smallest mismatch
};

// Exhaustive check over all promise inputs. The parallel form partitions the
// enumeration but always returns the same lexicographic-minimum
// counterexample as the serial form.
verify_result verify(const protocol_table& p, int workers = 0);
verify_result verify_serial(const protocol_table& p);

// True iff every final reach set is K-free, i.e. the transitions admit an
// error-free decision.
bool decidable(const protocol_table& p);

// The canonical decision: intersect (A ⊕ {k_N}) with {0, K}. Throws
// undecidable_error on an ambiguous view; the best-effort form resolves
// ambiguity to even and reports it instead.
std::vector<parity> decide_from_reach(const protocol_table& p);
std::vector<parity> decide_from_reach_best_effort(const protocol_table& p,
                                                  bool* ambiguous = nullptr);

// The L = 2K protocol that forwards the running sum.
protocol_table partial_sum_protocol(unsigned n_parties, ring_size ring);

} // namespace chainparity
