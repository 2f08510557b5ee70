#include "chainparity/protocol.hpp"

#include <algorithm>
#include <string>

#include "chainparity/parallel.hpp"

namespace chainparity {

namespace {

// (2K)^(N-1), refused when it would overflow the enumeration index.
std::uint64_t prefix_space(const protocol_table& p) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i + 1 < p.n_parties; ++i) {
        if (total > (std::uint64_t{1} << 62) / p.ring.two_k)
            throw size_error("verification space (2K)^(N-1) exceeds 2^62 inputs");
        total *= p.ring.two_k;
    }
    return total;
}

// Message after the full prefix walk, plus the prefix's partial sum.
struct walk_result {
    unsigned message = 0;
    unsigned partial = 0;
};

walk_result walk_prefix(const protocol_table& p, std::uint64_t index,
                        std::vector<unsigned>* values_out) {
    const unsigned n_free = p.n_parties - 1;
    if (values_out)
        values_out->assign(n_free, 0);
    // Decode most-significant digit first so index order is lexicographic.
    walk_result r;
    std::uint64_t radix = 1;
    for (unsigned i = 1; i < n_free; ++i)
        radix *= p.ring.two_k;
    for (unsigned i = 0; i < n_free; ++i) {
        const unsigned k = static_cast<unsigned>((index / radix) % p.ring.two_k);
        index %= radix;
        radix = radix == 1 ? 1 : radix / p.ring.two_k;
        if (values_out)
            (*values_out)[i] = k;
        r.message = p.transitions[i][p.cell(r.message, k)];
        r.partial = (r.partial + k) % p.ring.two_k;
    }
    return r;
}

struct found_mismatch {
    bool found = false;
    std::uint64_t prefix = 0;
    unsigned completion = 0;
    parity expected = parity::even;
    parity produced = parity::even;
};

// Scan [lo, hi) in ascending order, stopping at the first mismatch.
found_mismatch scan_range(const protocol_table& p, std::uint64_t lo, std::uint64_t hi) {
    found_mismatch out;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
        const walk_result w = walk_prefix(p, idx, nullptr);
        const unsigned even_k = (p.ring.two_k - w.partial) % p.ring.two_k;
        const unsigned odd_k = (even_k + p.ring.k) % p.ring.two_k;
        const unsigned first = std::min(even_k, odd_k);
        const unsigned second = std::max(even_k, odd_k);
        for (unsigned kn : {first, second}) {
            const parity expected = kn == even_k ? parity::even : parity::odd;
            const parity produced = p.decision[p.cell(w.message, kn)];
            if (produced != expected) {
                out = {true, idx, kn, expected, produced};
                return out;
            }
        }
    }
    return out;
}

counterexample build_counterexample(const protocol_table& p, const found_mismatch& f) {
    counterexample cex;
    walk_prefix(p, f.prefix, &cex.values);
    cex.values.push_back(f.completion);
    cex.expected = f.expected;
    cex.produced = f.produced;
    return cex;
}

} // namespace

void protocol_table::validate() const {
    if (n_parties == 0)
        throw validation_error("protocol needs at least one party");
    if (alphabet == 0)
        throw validation_error("alphabet size L must be positive");
    if (transitions.size() != n_parties - 1)
        throw validation_error("expected " + std::to_string(n_parties - 1) +
                               " transition tables, got " + std::to_string(transitions.size()));
    const std::size_t cells = static_cast<std::size_t>(alphabet) * ring.two_k;
    for (std::size_t n = 0; n < transitions.size(); ++n) {
        if (transitions[n].size() != cells)
            throw validation_error("transition table " + std::to_string(n + 1) +
                                   " has wrong shape");
        for (unsigned v : transitions[n])
            if (v >= alphabet)
                throw validation_error("transition table " + std::to_string(n + 1) +
                                       " sends message " + std::to_string(v + 1) +
                                       " outside 1..L");
    }
    if (decision.size() != cells)
        throw validation_error("decision table has wrong shape");
}

parity execute(const protocol_table& p, const discrete_instance& inst) {
    p.validate();
    if (inst.values.size() != p.n_parties || !(inst.ring == p.ring))
        throw std::invalid_argument("instance and protocol disagree on N or the ring");
    inst.validate();

    unsigned l = 0; // l_0 = 1 in the on-disk 1-based labels
    for (unsigned n = 0; n + 1 < p.n_parties; ++n)
        l = p.transitions[n][p.cell(l, inst.values[n])];
    return p.decision[p.cell(l, inst.values[p.n_parties - 1])];
}

std::vector<std::vector<sum_set>> reach_sets(const protocol_table& p) {
    p.validate();
    std::vector<std::vector<sum_set>> stages;
    if (p.n_parties < 2)
        return stages;

    std::vector<sum_set> current(p.alphabet, sum_set(p.ring));
    for (unsigned k = 0; k < p.ring.two_k; ++k)
        current[p.transitions[0][p.cell(0, k)]].insert(k);
    stages.push_back(current);

    for (unsigned n = 1; n + 1 < p.n_parties; ++n) {
        std::vector<sum_set> next(p.alphabet, sum_set(p.ring));
        std::vector<std::uint64_t> masks(p.alphabet, 0);
        for (unsigned l = 0; l < p.alphabet; ++l) {
            if (current[l].empty())
                continue;
            for (unsigned k = 0; k < p.ring.two_k; ++k)
                masks[p.transitions[n][p.cell(l, k)]] |= current[l].shifted(k).mask();
        }
        for (unsigned l = 0; l < p.alphabet; ++l)
            next[l] = sum_set::from_mask(p.ring, masks[l]);
        stages.push_back(next);
        current = std::move(next);
    }
    return stages;
}

std::vector<sum_set> final_reach(const protocol_table& p) {
    if (p.n_parties == 1) {
        p.validate();
        std::vector<sum_set> out(p.alphabet, sum_set(p.ring));
        out[0].insert(0); // empty partial sum under the fixed l_0
        return out;
    }
    return reach_sets(p).back();
}

bool decidable(const protocol_table& p) {
    for (const sum_set& a : final_reach(p))
        if (!is_k_free(a))
            return false;
    return true;
}

namespace {

std::vector<parity> decide_impl(const protocol_table& p, bool throw_on_ambiguous,
                                bool* ambiguous) {
    // The decision table is what we are here to synthesize; validate the rest
    // of the protocol with a placeholder so callers can leave it empty.
    protocol_table shaped = p;
    shaped.decision.assign(static_cast<std::size_t>(p.alphabet) * p.ring.two_k, parity::even);
    const std::vector<sum_set> fr = final_reach(shaped);
    std::vector<parity> decision(static_cast<std::size_t>(p.alphabet) * p.ring.two_k,
                                 parity::even);
    if (ambiguous)
        *ambiguous = false;
    for (unsigned l = 0; l < p.alphabet; ++l) {
        for (unsigned k = 0; k < p.ring.two_k; ++k) {
            const sum_set sums = fr[l].shifted(k);
            const bool hits_zero = sums.contains(0);
            const bool hits_k = sums.contains(p.ring.k);
            if (hits_zero && hits_k) {
                if (throw_on_ambiguous)
                    throw undecidable_error(
                        "view (l=" + std::to_string(l + 1) + ", k=" + std::to_string(k) +
                        ") is consistent with both parities");
                if (ambiguous)
                    *ambiguous = true;
                decision[p.cell(l, k)] = parity::even;
            } else if (hits_k) {
                decision[p.cell(l, k)] = parity::odd;
            } else {
                decision[p.cell(l, k)] = parity::even; // covers the unreachable-view case
            }
        }
    }
    return decision;
}

} // namespace

std::vector<parity> decide_from_reach(const protocol_table& p) {
    return decide_impl(p, true, nullptr);
}

std::vector<parity> decide_from_reach_best_effort(const protocol_table& p, bool* ambiguous) {
    return decide_impl(p, false, ambiguous);
}

verify_result verify_serial(const protocol_table& p) {
    p.validate();
    const std::uint64_t total = prefix_space(p);
    const found_mismatch f = scan_range(p, 0, total);
    verify_result out;
    out.perfect = !f.found;
    if (f.found)
        out.cex = build_counterexample(p, f);
    return out;
}

verify_result verify(const protocol_table& p, int workers) {
    p.validate();
    const std::uint64_t total = prefix_space(p);
    const int n = resolve_workers(workers);
    if (n == 1 || total < 1024)
        return verify_serial(p);

    std::vector<found_mismatch> found(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) num_threads(n)
    for (int w = 0; w < n; ++w) {
        const auto wide = static_cast<unsigned __int128>(total);
        const std::uint64_t lo = static_cast<std::uint64_t>(wide * static_cast<unsigned>(w) / n);
        const std::uint64_t hi =
            static_cast<std::uint64_t>(wide * (static_cast<unsigned>(w) + 1) / n);
        found[static_cast<std::size_t>(w)] = scan_range(p, lo, hi);
    }

    const found_mismatch* best = nullptr;
    for (const found_mismatch& f : found) {
        if (!f.found)
            continue;
        if (!best || f.prefix < best->prefix ||
            (f.prefix == best->prefix && f.completion < best->completion))
            best = &f;
    }

    verify_result out;
    out.perfect = best == nullptr;
    if (best)
        out.cex = build_counterexample(p, *best);
    return out;
}

protocol_table partial_sum_protocol(unsigned n_parties, ring_size ring) {
    if (n_parties == 0)
        throw std::invalid_argument("protocol needs at least one party");
    protocol_table p;
    p.n_parties = n_parties;
    p.ring = ring;
    p.alphabet = ring.two_k;
    const std::size_t cells = static_cast<std::size_t>(ring.two_k) * ring.two_k;
    p.transitions.assign(n_parties - 1, std::vector<unsigned>(cells, 0));
    for (auto& table : p.transitions)
        for (unsigned l = 0; l < ring.two_k; ++l)
            for (unsigned k = 0; k < ring.two_k; ++k)
                table[p.cell(l, k)] = (l + k) % ring.two_k;
    p.decision.assign(cells, parity::even);
    for (unsigned l = 0; l < ring.two_k; ++l)
        for (unsigned k = 0; k < ring.two_k; ++k)
            p.decision[p.cell(l, k)] = (l + k) % ring.two_k == ring.k ? parity::odd
                                                                     : parity::even;
    p.validate();
    return p;
}

} // namespace chainparity
