#include "chainparity/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "chainparity/parallel.hpp"

namespace chainparity {

const char* to_string(search_verdict v) {
    switch (v) {
    case search_verdict::exists: return "exists";
    case search_verdict::impossible: return "impossible";
    default: return "unknown";
    }
}

const char* to_string(search_method m) {
    return m == search_method::exhaustive ? "exhaustive" : "profile";
}

namespace {

constexpr std::uint64_t default_table_budget = 100'000'000;
constexpr std::uint64_t default_node_budget = 1'000'000'000;
constexpr std::size_t domination_list_cap = 4096;
constexpr std::size_t exact_memo_cap = 1u << 20;
constexpr std::uint64_t witness_verify_cap = 1u << 20;

using profile_t = std::vector<std::uint64_t>;

struct profile_hash {
    std::size_t operator()(const profile_t& p) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint64_t v : p) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

std::uint64_t ring_mask(unsigned two_k) {
    return two_k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << two_k) - 1;
}

std::uint64_t rot(std::uint64_t m, unsigned s, unsigned two_k) {
    s %= two_k;
    if (s == 0)
        return m;
    return ((m << s) | (m >> (two_k - s))) & ring_mask(two_k);
}

bool k_free_mask(std::uint64_t m, ring_size ring) {
    return (m & rot(m, ring.k, ring.two_k)) == 0;
}

void check_arguments(unsigned n_parties, unsigned alphabet) {
    if (n_parties == 0)
        throw std::invalid_argument("search needs at least one party");
    if (alphabet == 0)
        throw std::invalid_argument("alphabet size L must be positive");
}

search_report base_report(unsigned n_parties, ring_size ring, unsigned alphabet,
                          search_method method) {
    search_report rep;
    rep.n_parties = n_parties;
    rep.ring = ring;
    rep.alphabet = alphabet;
    rep.method = method;
    rep.memory_bits = std::log2(static_cast<double>(alphabet));
    return rep;
}

// One-party protocols decide alone from k_1; always perfect.
protocol_table lone_party_witness(ring_size ring, unsigned alphabet) {
    protocol_table p;
    p.n_parties = 1;
    p.ring = ring;
    p.alphabet = alphabet;
    p.decision = decide_from_reach(p);
    return p;
}

// The running-sum witness padded out to a larger alphabet if needed.
protocol_table padded_partial_sum(unsigned n_parties, ring_size ring, unsigned alphabet) {
    protocol_table base = partial_sum_protocol(n_parties, ring);
    if (alphabet == ring.two_k)
        return base;
    protocol_table p;
    p.n_parties = n_parties;
    p.ring = ring;
    p.alphabet = alphabet;
    const std::size_t cells = static_cast<std::size_t>(alphabet) * ring.two_k;
    p.transitions.assign(n_parties - 1, std::vector<unsigned>(cells, 0));
    p.decision.assign(cells, parity::even);
    for (unsigned n = 0; n + 1 < n_parties; ++n)
        for (unsigned l = 0; l < ring.two_k; ++l)
            for (unsigned k = 0; k < ring.two_k; ++k)
                p.transitions[n][p.cell(l, k)] = base.transitions[n][base.cell(l, k)];
    for (unsigned l = 0; l < ring.two_k; ++l)
        for (unsigned k = 0; k < ring.two_k; ++k)
            p.decision[p.cell(l, k)] = base.decision[base.cell(l, k)];
    p.validate();
    return p;
}

void guard_witness(protocol_table& p, unsigned claimed_alphabet) {
    if (p.alphabet != claimed_alphabet)
        throw error("search produced a witness with the wrong alphabet");
    p.decision = decide_from_reach(p);
    p.validate();
    std::uint64_t space = 2;
    for (unsigned i = 0; i + 1 < p.n_parties && space <= witness_verify_cap; ++i)
        space *= p.ring.two_k;
    if (space <= witness_verify_cap && !verify_serial(p).perfect)
        throw error("search produced a witness that fails verification");
}

// --- exhaustive enumeration ----------------------------------------------

// Number of transition tables, saturating at budget+1.
std::uint64_t count_tables(unsigned n_parties, ring_size ring, unsigned alphabet,
                           std::uint64_t budget) {
    std::uint64_t digit_count = 0;
    if (n_parties >= 2)
        digit_count = ring.two_k +
                      static_cast<std::uint64_t>(n_parties - 2) * alphabet * ring.two_k;
    std::uint64_t total = 1;
    for (std::uint64_t i = 0; i < digit_count; ++i) {
        if (alphabet > 1 && total > budget / alphabet)
            return budget + 1;
        total *= alphabet;
    }
    return total;
}

// --- profile search -------------------------------------------------------

// Enumerate partitions of Z_2K into at most max_blocks K-free blocks, in
// restricted-growth order (element by element, existing blocks first, then a
// fresh block). fn returning false stops the walk.
void enumerate_roots(ring_size ring, unsigned max_blocks,
                     const std::function<bool(const std::vector<std::uint64_t>&)>& fn) {
    std::vector<std::uint64_t> blocks;
    blocks.reserve(max_blocks);
    std::function<bool(unsigned)> rec = [&](unsigned x) -> bool {
        if (x == ring.two_k)
            return fn(blocks);
        // adding x clashes only with its already-placed antipode x-K
        const std::uint64_t clash =
            x >= ring.k ? (std::uint64_t{1} << (x - ring.k)) : std::uint64_t{0};
        const std::uint64_t bit = std::uint64_t{1} << x;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b] & clash)
                continue;
            blocks[b] |= bit;
            if (!rec(x + 1))
                return false;
            blocks[b] &= ~bit;
        }
        if (blocks.size() < max_blocks) {
            blocks.push_back(bit);
            if (!rec(x + 1))
                return false;
            blocks.pop_back();
        }
        return true;
    };
    rec(0);
}

enum class root_outcome { accepted, exhausted, capped };

class profile_search {
  public:
    profile_search(unsigned n_parties, ring_size ring, unsigned alphabet, bool use_domination)
        : n_(n_parties), ring_(ring), l_(alphabet), dom_(use_domination),
          failed_exact_(n_parties), failed_list_(n_parties) {}

    // Tables come back deepest stage first; the caller reverses them behind
    // the stage-1 table it builds from the root partition itself.
    root_outcome run_root(const profile_t& root, std::uint64_t cap,
                          std::vector<std::vector<unsigned>>& tables_reversed,
                          std::uint64_t& nodes_used) {
        cap_ = cap;
        nodes_ = 0;
        for (auto& s : failed_exact_)
            s.clear();
        for (auto& s : failed_list_)
            s.clear();
        root_outcome out;
        try {
            out = explore(root, 1, tables_reversed) ? root_outcome::accepted
                                                    : root_outcome::exhausted;
        } catch (const cap_hit&) {
            out = root_outcome::capped;
        }
        nodes_used = nodes_;
        return out;
    }

  private:
    struct cap_hit {};

    bool explore(const profile_t& prof, unsigned stage,
                 std::vector<std::vector<unsigned>>& tables) {
        if (stage == n_ - 1)
            return true; // all sets are K-free by construction: decidable
        if (stage > 1) {
            if (failed_exact_[stage].contains(prof))
                return false;
            if (dom_ && dominated(prof, stage))
                return false;
        }

        // Unique shifted sets; identical items always share a color.
        const unsigned two_k = ring_.two_k;
        std::vector<std::uint64_t> items;
        std::unordered_map<std::uint64_t, unsigned> item_index;
        std::vector<unsigned> item_of(static_cast<std::size_t>(l_) * two_k, 0);
        for (unsigned l = 0; l < l_; ++l) {
            if (prof[l] == 0)
                continue;
            for (unsigned k = 0; k < two_k; ++k) {
                const std::uint64_t m = rot(prof[l], k, two_k);
                auto [it, inserted] = item_index.try_emplace(m, static_cast<unsigned>(items.size()));
                if (inserted)
                    items.push_back(m);
                item_of[static_cast<std::size_t>(l) * two_k + k] = it->second;
            }
        }

        // Most constrained first, ties by mask for determinism.
        std::vector<unsigned> order(items.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
            const int pa = std::popcount(items[a]);
            const int pb = std::popcount(items[b]);
            if (pa != pb)
                return pa > pb;
            return items[a] < items[b];
        });

        std::vector<unsigned> color(items.size(), 0);
        std::vector<std::uint64_t> unions(l_, 0);

        auto assign = [&](auto&& self, unsigned pos, unsigned used) -> bool {
            if (pos == order.size())
                return descend(prof, stage, unions, color, item_of, tables);
            const std::uint64_t m = items[order[pos]];
            const unsigned limit = std::min(used + 1, l_);
            for (unsigned c = 0; c < limit; ++c) {
                if (++nodes_ > cap_)
                    throw cap_hit{};
                const std::uint64_t merged = unions[c] | m;
                if (c < used && !k_free_mask(merged, ring_))
                    continue; // a fresh color holds a single K-free item
                const std::uint64_t saved = unions[c];
                unions[c] = merged;
                color[order[pos]] = c;
                if (self(self, pos + 1, std::max(used, c + 1)))
                    return true;
                unions[c] = saved;
            }
            return false;
        };

        const bool ok = assign(assign, 0, 0);
        if (!ok && stage > 1) {
            if (failed_exact_[stage].size() < exact_memo_cap)
                failed_exact_[stage].insert(prof);
            if (dom_ && failed_list_[stage].size() < domination_list_cap)
                failed_list_[stage].push_back(prof);
        }
        return ok;
    }

    // Canonicalize the color unions, recurse, and on success emit the
    // transition table this coloring defines for party stage+1.
    bool descend(const profile_t& prof, unsigned stage, const std::vector<std::uint64_t>& unions,
                 const std::vector<unsigned>& color, const std::vector<unsigned>& item_of,
                 std::vector<std::vector<unsigned>>& tables) {
        std::vector<unsigned> perm(l_);
        std::iota(perm.begin(), perm.end(), 0u);
        std::stable_sort(perm.begin(), perm.end(), [&](unsigned a, unsigned b) {
            const bool ea = unions[a] == 0;
            const bool eb = unions[b] == 0;
            if (ea != eb)
                return eb; // nonempty sets first
            return unions[a] < unions[b];
        });
        profile_t next(l_);
        std::vector<unsigned> pi(l_);
        for (unsigned posn = 0; posn < l_; ++posn) {
            next[posn] = unions[perm[posn]];
            pi[perm[posn]] = posn;
        }

        if (!explore(next, stage + 1, tables))
            return false;

        const unsigned two_k = ring_.two_k;
        std::vector<unsigned> table(static_cast<std::size_t>(l_) * two_k, 0);
        for (unsigned l = 0; l < l_; ++l) {
            if (prof[l] == 0)
                continue;
            for (unsigned k = 0; k < two_k; ++k) {
                const std::size_t cell = static_cast<std::size_t>(l) * two_k + k;
                table[cell] = pi[color[item_of[cell]]];
            }
        }
        tables.push_back(std::move(table));
        return true;
    }

    // A previously exhausted profile that fits componentwise inside prof
    // proves prof infeasible. The greedy matching is verified set by set.
    bool dominated(const profile_t& prof, unsigned stage) const {
        for (const profile_t& q : failed_list_[stage]) {
            std::uint64_t used = 0;
            bool all = true;
            for (unsigned i = 0; i < l_ && all; ++i) {
                if (q[i] == 0)
                    continue;
                bool matched = false;
                for (unsigned j = 0; j < l_; ++j) {
                    if (used & (std::uint64_t{1} << j))
                        continue;
                    if ((q[i] & ~prof[j]) == 0) {
                        used |= std::uint64_t{1} << j;
                        matched = true;
                        break;
                    }
                }
                all = matched;
            }
            if (all)
                return true;
        }
        return false;
    }

    unsigned n_;
    ring_size ring_;
    unsigned l_;
    bool dom_;
    std::uint64_t cap_ = 0;
    std::uint64_t nodes_ = 0;
    std::vector<std::unordered_set<profile_t, profile_hash>> failed_exact_;
    std::vector<std::vector<profile_t>> failed_list_;
};

protocol_table witness_from_path(unsigned n_parties, ring_size ring, unsigned alphabet,
                                 const profile_t& root,
                                 std::vector<std::vector<unsigned>>& tables_reversed) {
    protocol_table p;
    p.n_parties = n_parties;
    p.ring = ring;
    p.alphabet = alphabet;
    const std::size_t cells = static_cast<std::size_t>(alphabet) * ring.two_k;
    p.transitions.assign(n_parties - 1, std::vector<unsigned>(cells, 0));
    p.decision.assign(cells, parity::even);

    for (unsigned k = 0; k < ring.two_k; ++k) {
        for (unsigned j = 0; j < alphabet; ++j) {
            if (root[j] & (std::uint64_t{1} << k)) {
                p.transitions[0][p.cell(0, k)] = j;
                break;
            }
        }
    }
    std::reverse(tables_reversed.begin(), tables_reversed.end());
    for (std::size_t i = 0; i < tables_reversed.size(); ++i)
        p.transitions[i + 1] = std::move(tables_reversed[i]);
    return p;
}

} // namespace

bool theorem_entailed(const search_report& r) {
    if (r.verdict == search_verdict::exists)
        return r.alphabet >= r.ring.two_k;
    if (r.verdict == search_verdict::impossible)
        return r.ring.k_is_power_of_two && r.n_parties > r.ring.k &&
               r.alphabet < r.ring.two_k;
    return false;
}

search_report exhaustive_exists(unsigned n_parties, ring_size ring, unsigned alphabet,
                                const search_options& opts) {
    check_arguments(n_parties, alphabet);
    const std::uint64_t budget = opts.budget ? opts.budget : default_table_budget;
    search_report rep = base_report(n_parties, ring, alphabet, search_method::exhaustive);

    const std::uint64_t total = count_tables(n_parties, ring, alphabet, budget);
    if (total > budget)
        throw budget_error("exhaustive search would enumerate more than " +
                           std::to_string(budget) +
                           " transition tables; raise the budget or use the profile method");

    if (n_parties == 1) {
        protocol_table p = lone_party_witness(ring, alphabet);
        guard_witness(p, alphabet);
        rep.witness = std::move(p);
        rep.verdict = search_verdict::exists;
        rep.nodes = 1;
        return rep;
    }

    const unsigned two_k = ring.two_k;
    const std::size_t cells = static_cast<std::size_t>(alphabet) * two_k;
    std::vector<unsigned> digits(two_k + static_cast<std::size_t>(n_parties - 2) * cells, 0);

    protocol_table p;
    p.n_parties = n_parties;
    p.ring = ring;
    p.alphabet = alphabet;
    p.transitions.assign(n_parties - 1, std::vector<unsigned>(cells, 0));
    p.decision.assign(cells, parity::even);

    for (;;) {
        ++rep.nodes;
        for (unsigned k = 0; k < two_k; ++k)
            p.transitions[0][p.cell(0, k)] = digits[k];
        for (unsigned n = 1; n + 1 < n_parties; ++n)
            std::copy_n(digits.begin() + two_k + static_cast<std::size_t>(n - 1) * cells, cells,
                        p.transitions[n].begin());

        if (decidable(p)) {
            guard_witness(p, alphabet);
            rep.witness = std::move(p);
            rep.verdict = search_verdict::exists;
            return rep;
        }

        std::size_t pos = digits.size();
        while (pos > 0 && digits[pos - 1] + 1 == alphabet)
            digits[--pos] = 0;
        if (pos == 0)
            break;
        ++digits[pos - 1];
    }

    rep.verdict = search_verdict::impossible;
    return rep;
}

search_report profile_exists(unsigned n_parties, ring_size ring, unsigned alphabet,
                             const search_options& opts) {
    check_arguments(n_parties, alphabet);
    if (ring.two_k > 64)
        throw size_error("profile search is word-backed: 2K is capped at 64");
    const std::uint64_t budget = opts.budget ? opts.budget : default_node_budget;
    search_report rep = base_report(n_parties, ring, alphabet, search_method::profile);

    if (n_parties == 1) {
        protocol_table p = lone_party_witness(ring, alphabet);
        guard_witness(p, alphabet);
        rep.witness = std::move(p);
        rep.verdict = search_verdict::exists;
        rep.nodes = 1;
        return rep;
    }
    if (alphabet >= ring.two_k) {
        protocol_table p = padded_partial_sum(n_parties, ring, alphabet);
        guard_witness(p, alphabet);
        rep.witness = std::move(p);
        rep.verdict = search_verdict::exists;
        rep.nodes = 1;
        return rep;
    }

    // Pass 1: count the stage-1 roots so the node budget splits evenly and
    // the outcome is identical for every worker count.
    std::uint64_t n_roots = 0;
    bool counting_aborted = false;
    enumerate_roots(ring, alphabet, [&](const std::vector<std::uint64_t>&) {
        if (++n_roots > budget) {
            counting_aborted = true;
            return false;
        }
        return true;
    });
    if (counting_aborted) {
        rep.verdict = search_verdict::unknown;
        rep.nodes = n_roots;
        return rep;
    }
    if (n_roots == 0) {
        rep.verdict = search_verdict::impossible;
        rep.nodes = 0;
        return rep;
    }

    const std::uint64_t cap = std::max<std::uint64_t>(1, budget / n_roots);
    const int workers = resolve_workers(opts.workers);

    struct worker_result {
        bool found = false;
        std::uint64_t root_index = 0;
        protocol_table witness;
        bool capped = false;
        std::uint64_t nodes = 0;
    };
    std::vector<worker_result> results(static_cast<std::size_t>(workers));

#pragma omp parallel for schedule(static, 1) num_threads(workers)
    for (int w = 0; w < workers; ++w) {
        worker_result& res = results[static_cast<std::size_t>(w)];
        profile_search engine(n_parties, ring, alphabet, opts.use_domination);
        std::uint64_t idx = 0;
        enumerate_roots(ring, alphabet, [&](const std::vector<std::uint64_t>& blocks) {
            const std::uint64_t my_index = idx++;
            if (my_index % static_cast<std::uint64_t>(workers) != static_cast<std::uint64_t>(w))
                return true;
            if (res.found)
                return true; // later roots cannot beat this worker's accept

            profile_t root(alphabet, 0);
            std::vector<std::uint64_t> sorted = blocks;
            std::sort(sorted.begin(), sorted.end());
            std::copy(sorted.begin(), sorted.end(), root.begin());

            res.nodes += 1;
            std::vector<std::vector<unsigned>> tables_reversed;
            std::uint64_t used = 0;
            const root_outcome out = engine.run_root(root, cap, tables_reversed, used);
            res.nodes += used;
            if (out == root_outcome::capped) {
                res.capped = true;
            } else if (out == root_outcome::accepted) {
                res.found = true;
                res.root_index = my_index;
                res.witness =
                    witness_from_path(n_parties, ring, alphabet, root, tables_reversed);
            }
            return true;
        });
    }

    const worker_result* best = nullptr;
    bool any_capped = false;
    for (const worker_result& res : results) {
        rep.nodes += res.nodes;
        any_capped = any_capped || res.capped;
        if (res.found && (!best || res.root_index < best->root_index))
            best = &res;
    }

    if (best) {
        protocol_table p = best->witness;
        guard_witness(p, alphabet);
        rep.witness = std::move(p);
        rep.verdict = search_verdict::exists;
    } else if (any_capped) {
        rep.verdict = search_verdict::unknown;
    } else {
        rep.verdict = search_verdict::impossible;
    }
    return rep;
}

min_l_report min_l(unsigned n_parties, ring_size ring, unsigned l_max, search_method method,
                   const search_options& opts) {
    if (l_max == 0)
        throw std::invalid_argument("l_max must be positive");
    if (l_max > ring.two_k)
        throw std::invalid_argument("L = 2K always suffices; l_max must not exceed 2K");

    min_l_report out;
    for (unsigned l = 1; l <= l_max; ++l) {
        search_report rep = method == search_method::exhaustive
                                ? exhaustive_exists(n_parties, ring, l, opts)
                                : profile_exists(n_parties, ring, l, opts);
        if (out.minimal_l && rep.verdict == search_verdict::impossible)
            throw error("feasibility is monotone in L, yet L=" + std::to_string(l) +
                        " came back impossible above a feasible L");
        if (!out.minimal_l && rep.verdict == search_verdict::exists)
            out.minimal_l = l;
        out.per_l.push_back(std::move(rep));
    }
    return out;
}

} // namespace chainparity
