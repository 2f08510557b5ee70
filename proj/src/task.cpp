#include "chainparity/task.hpp"

#include <cmath>
#include <random>
#include <string>

namespace chainparity {

namespace {

constexpr double grid_tolerance = 1e-6;

} // namespace

void field_spec::validate() const {
    if (segments.empty()) throw validation_error("field has no segments");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw validation_error("field alpha must be positive and finite");
    double total = 0.0;
    for (const auto& seg : segments) {
        if (!(seg.length > 0.0) || !std::isfinite(seg.length))
            throw validation_error("field segment length must be positive and finite");
        if (!std::isfinite(seg.value)) throw validation_error("field segment value must be finite");
        total += seg.length;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw validation_error("field segment lengths must sum to 1, got " + std::to_string(total));
}

double field_spec::integral() const {
    double acc = 0.0;
    for (const auto& seg : segments) acc += seg.length * seg.value;
    return acc;
}

void discrete_instance::validate() const {
    if (values.empty()) throw validation_error("instance has no values");
    unsigned long long sum = 0;
    for (unsigned v : values) {
        if (v >= ring.two_k)
            throw validation_error("instance value " + std::to_string(v) + " outside Z_" +
                                   std::to_string(ring.two_k));
        sum += v;
    }
    unsigned residue = static_cast<unsigned>(sum % ring.two_k);
    if (residue % ring.k != 0)
        throw promise_error("instance sum is " + std::to_string(residue) + " mod " +
                            std::to_string(ring.two_k) + ", promise requires 0 mod " +
                            std::to_string(ring.k));
}

parity discrete_instance::instance_parity() const {
    validate();
    unsigned long long sum = 0;
    for (unsigned v : values) sum += v;
    return sum % ring.two_k == 0 ? parity::even : parity::odd;
}

std::vector<double> discretize(const field_spec& field, unsigned n_sections) {
    field.validate();
    if (n_sections == 0) throw std::invalid_argument("n_sections must be positive");

    // Exact interval intersection of each section with each segment.
    std::vector<double> starts; // cumulative segment start positions
    starts.reserve(field.segments.size() + 1);
    double pos = 0.0;
    starts.push_back(0.0);
    for (const auto& seg : field.segments) {
        pos += seg.length;
        starts.push_back(pos);
    }
    starts.back() = 1.0; // absorb rounding in the final boundary

    std::vector<double> out(n_sections, 0.0);
    const double width = 1.0 / n_sections;
    for (unsigned s = 0; s < n_sections; ++s) {
        const double lo = s * width;
        const double hi = (s + 1) * width;
        for (std::size_t j = 0; j < field.segments.size(); ++j) {
            const double a = std::max(lo, starts[j]);
            const double b = std::min(hi, starts[j + 1]);
            if (b > a) out[s] += (b - a) * field.segments[j].value;
        }
    }
    return out;
}

discrete_instance quantize(const std::vector<double>& phis, ring_size ring, double alpha) {
    if (phis.empty()) throw std::invalid_argument("no section integrals to quantize");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be positive and finite");

    discrete_instance inst;
    inst.ring = ring;
    inst.values.reserve(phis.size());
    const double unit = alpha / ring.k; // one grid step
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const double scaled = phis[i] / unit;
        const double nearest = std::round(scaled);
        if (std::abs(scaled - nearest) > grid_tolerance)
            throw quantize_error("section " + std::to_string(i + 1) + " integral " +
                                 std::to_string(phis[i]) + " is " +
                                 std::to_string(std::abs(scaled - nearest)) +
                                 " grid units off the alpha/K lattice");
        long long q = static_cast<long long>(nearest) % static_cast<long long>(ring.two_k);
        if (q < 0) q += ring.two_k;
        inst.values.push_back(static_cast<unsigned>(q));
    }
    inst.validate(); // throws promise_error if the promise fails
    return inst;
}

discrete_instance random_instance(unsigned n_parties, ring_size ring, parity target,
                                  std::uint64_t seed) {
    if (n_parties == 0) throw std::invalid_argument("n_parties must be positive");

    discrete_instance inst;
    inst.ring = ring;
    inst.values.resize(n_parties);

    std::mt19937_64 rng(seed);
    unsigned long long sum = 0;
    for (unsigned i = 0; i + 1 < n_parties; ++i) {
        inst.values[i] = static_cast<unsigned>(rng() % ring.two_k);
        sum += inst.values[i];
    }
    const unsigned want = target == parity::even ? 0 : ring.k;
    const unsigned residue = static_cast<unsigned>(sum % ring.two_k);
    inst.values[n_parties - 1] = (want + ring.two_k - residue) % ring.two_k;
    inst.validate();
    return inst;
}

field_spec canonical_field(const discrete_instance& inst, double alpha) {
    inst.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be positive and finite");
    const unsigned n = inst.n_parties();
    field_spec field;
    field.alpha = alpha;
    field.segments.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        // Section integral must be alpha * k / K over width 1/n.
        const double target = alpha * static_cast<double>(inst.values[i]) / inst.ring.k;
        field.segments.push_back({1.0 / n, target * n});
    }
    return field;
}

} // namespace chainparity
