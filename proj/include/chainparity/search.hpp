#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chainparity/protocol.hpp"

namespace chainparity {

enum class search_verdict { exists, impossible, unknown };
enum class search_method { exhaustive, profile };

const char* to_string(search_verdict v);
const char* to_string(search_method m);

struct search_options {
    std::uint64_t budget = 0;   // 0 = method default: 1e8 tables / 1e9 DFS nodes
    int workers = 0;            // 0 = all hardware threads
    bool use_domination = true; // profile search subset pruning
};

// Feasibility of a perfect protocol at fixed (N, K, L).
struct search_report {
    unsigned n_parties = 0;
    ring_size ring;
    unsigned alphabet = 0;
    search_method method = search_method::profile;
    search_verdict verdict = search_verdict::unknown;
    std::optional<protocol_table> witness; // present iff verdict == exists
    std::uint64_t nodes = 0;               // tables examined / DFS steps
    double memory_bits = 0.0;              // log2(alphabet)
};

// True when the verdict is entailed by the structure theorem on top of the
// search: impossible because N > K with L < 2K (K a power of two), or exists
// because L >= 2K (the running-sum protocol). Other verdicts are empirical.
bool theorem_entailed(const search_report& r);

// Enumerates every transition table (decisions are synthesized, never
// enumerated). Digit order: party 1's row for k = 0..2K-1, then each middle
// party's table row-major by (l, k); the last digit varies fastest, and the
// first decidable table is the witness. Throws budget_error if the table
// count exceeds the budget; it never samples.
search_report exhaustive_exists(unsigned n_parties, ring_size ring, unsigned alphabet,
                                const search_options& opts = {});

// Depth-first search over canonical reach-set profiles (sorted bitmasks,
// empty sets last). Stage-1 profiles are the K-free-block partitions of
// Z_2K; stage transitions color the L*2K shifted sets with at most L colors
// under K-free unions. The node budget is split evenly across stage-1 roots
// so verdicts and the witness are identical for any worker count; an
// exhausted root yields "unknown", never "impossible". L >= 2K is answered
// directly with the running-sum witness.
search_report profile_exists(unsigned n_parties, ring_size ring, unsigned alphabet,
                             const search_options& opts = {});

struct min_l_report {
    std::vector<search_report> per_l;  // L = 1 .. l_max, in order
    std::optional<unsigned> minimal_l; // smallest feasible L, if any
};

// Ascending sweep; enforces that feasibility is monotone in L.
min_l_report min_l(unsigned n_parties, ring_size ring, unsigned l_max,
                   search_method method = search_method::profile,
                   const search_options& opts = {});

} // namespace chainparity
