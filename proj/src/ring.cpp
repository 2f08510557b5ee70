#include "chainparity/ring.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "chainparity/parallel.hpp"

namespace chainparity {

namespace {

bool power_of_two(unsigned v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace

ring_size ring_size::from_half(unsigned k) {
    if (k == 0)
        throw validation_error("ring half-modulus K must be positive");
    if (k > (1u << 30))
        throw validation_error("ring half-modulus K too large");
    return ring_size{2 * k, k, power_of_two(k)};
}

ring_size ring_size::from_two_k(unsigned two_k) {
    if (two_k < 2 || two_k % 2 != 0)
        throw validation_error("ring modulus 2K must be a positive even number, got " +
                               std::to_string(two_k));
    return from_half(two_k / 2);
}

sum_set::sum_set(ring_size ring) : ring_(ring) {
    if (ring.two_k > 64)
        throw size_error("sum_set is word-backed: 2K = " + std::to_string(ring.two_k) +
                         " exceeds the 64-element cap");
}

sum_set::sum_set(ring_size ring, std::initializer_list<unsigned> members) : sum_set(ring) {
    for (unsigned m : members)
        insert(m);
}

sum_set sum_set::from_mask(ring_size ring, std::uint64_t mask) {
    sum_set s(ring);
    if (ring.two_k < 64 && (mask >> ring.two_k) != 0)
        throw std::invalid_argument("mask has bits beyond 2K");
    s.bits_ = mask;
    return s;
}

bool sum_set::contains(unsigned x) const {
    if (x >= ring_.two_k)
        throw std::invalid_argument("ring element out of range");
    return (bits_ >> x) & 1u;
}

void sum_set::insert(unsigned x) {
    if (x >= ring_.two_k)
        throw std::invalid_argument("ring element out of range");
    bits_ |= std::uint64_t{1} << x;
}

sum_set sum_set::shifted(unsigned s) const {
    s %= ring_.two_k;
    sum_set out(ring_);
    if (s == 0) {
        out.bits_ = bits_;
        return out;
    }
    const unsigned n = ring_.two_k;
    const std::uint64_t full = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    out.bits_ = ((bits_ << s) | (bits_ >> (n - s))) & full;
    return out;
}

std::vector<unsigned> sum_set::elements() const {
    std::vector<unsigned> out;
    out.reserve(size());
    for (unsigned x = 0; x < ring_.two_k; ++x)
        if ((bits_ >> x) & 1u)
            out.push_back(x);
    return out;
}

sum_set oplus(const sum_set& a, const sum_set& b) {
    if (!(a.ring() == b.ring()))
        throw std::invalid_argument("oplus requires operands over the same ring");
    sum_set out(a.ring());
    if (a.empty() || b.empty())
        return out;
    std::uint64_t acc = 0;
    for (unsigned y : b.elements())
        acc |= a.shifted(y).mask();
    return sum_set::from_mask(a.ring(), acc);
}

bool is_k_free(const sum_set& a) {
    // bit y of shifted(K) is set iff y-K is a member, so the AND marks pairs.
    return (a.mask() & a.shifted(a.ring().k).mask()) == 0;
}

int growth(const sum_set& a, unsigned x, unsigned y) {
    if (x == y)
        throw std::invalid_argument("growth requires two distinct shifts");
    if (x >= a.ring().two_k || y >= a.ring().two_k)
        throw std::invalid_argument("ring element out of range");
    if (a.empty())
        throw std::invalid_argument("growth is undefined for the empty set");
    const unsigned merged = static_cast<unsigned>(
        std::popcount(a.shifted(x).mask() | a.shifted(y).mask()));
    return static_cast<int>(merged) - static_cast<int>(a.size());
}

period_report period_sequence(const sum_set& a, unsigned x, unsigned y) {
    if (growth(a, x, y) != 0)
        throw std::invalid_argument("period_sequence requires growth(A,a,b) = 0");
    const unsigned two_k = a.ring().two_k;

    period_report report;
    unsigned delta = x > y ? x - y : y - x;
    report.deltas.push_back(delta);

    // Zero growth means A ⊕ {x} = A ⊕ {y}, hence A is invariant under every
    // multiple of delta. Walk down: take the smallest i whose multiple lands
    // strictly below the current delta, until no multiple does.
    for (;;) {
        unsigned next = 0;
        for (unsigned i = 2; i <= two_k; ++i) {
            const unsigned r = static_cast<unsigned>((std::uint64_t{i} * delta) % two_k);
            if (r > 0 && r < delta) {
                next = r;
                break;
            }
        }
        if (next == 0)
            break;
        delta = next;
        report.deltas.push_back(delta);
    }

    report.period_v = delta;
    report.divides_ring = (two_k % delta) == 0;
    if (!(a.shifted(report.period_v) == a))
        throw error("period_sequence postcondition failed: terminal delta is not a period");
    return report;
}

namespace {

growth_sweep_result sweep_growth_range(ring_size ring, std::uint64_t lo, std::uint64_t hi) {
    growth_sweep_result out;
    out.ring = ring;
    const unsigned two_k = ring.two_k;
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
        sum_set a = sum_set::from_mask(ring, mask);
        if (!is_k_free(a))
            continue;
        ++out.sets_checked;
        for (unsigned x = 0; x < two_k; ++x) {
            const std::uint64_t sx = a.shifted(x).mask();
            for (unsigned y = x + 1; y < two_k; ++y) {
                ++out.pairs_checked;
                const std::uint64_t merged = sx | a.shifted(y).mask();
                if (std::popcount(merged) == std::popcount(mask))
                    out.zero_growth.push_back({mask, x, y});
            }
        }
    }
    return out;
}

} // namespace

growth_sweep_result sweep_growth_serial(ring_size ring) {
    if (ring.two_k > 30)
        throw size_error("growth sweep enumerates 2^2K subsets; 2K capped at 30");
    return sweep_growth_range(ring, 1, std::uint64_t{1} << ring.two_k);
}

growth_sweep_result sweep_growth(ring_size ring, int workers) {
    if (ring.two_k > 30)
        throw size_error("growth sweep enumerates 2^2K subsets; 2K capped at 30");
    const int n = resolve_workers(workers);
    const std::uint64_t total = std::uint64_t{1} << ring.two_k;
    if (n == 1 || total < 4096)
        return sweep_growth_range(ring, 1, total);

    std::vector<growth_sweep_result> parts(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) num_threads(n)
    for (int w = 0; w < n; ++w) {
        const std::uint64_t lo = 1 + (total - 1) * w / n;
        const std::uint64_t hi = 1 + (total - 1) * (w + 1) / n;
        parts[static_cast<std::size_t>(w)] = sweep_growth_range(ring, lo, hi);
    }

    growth_sweep_result out;
    out.ring = ring;
    for (auto& p : parts) {
        out.sets_checked += p.sets_checked;
        out.pairs_checked += p.pairs_checked;
        out.zero_growth.insert(out.zero_growth.end(), p.zero_growth.begin(),
                               p.zero_growth.end());
    }
    std::sort(out.zero_growth.begin(), out.zero_growth.end(),
              [](const zero_growth_case& l, const zero_growth_case& r) {
                  return std::tie(l.set_mask, l.a, l.b) < std::tie(r.set_mask, r.a, r.b);
              });
    return out;
}

} // namespace chainparity
