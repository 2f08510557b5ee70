#pragma once

#include <cstdint>
#include <vector>

#include "chainparity/errors.hpp"
#include "chainparity/ring.hpp"

namespace chainparity {

enum class parity : std::uint8_t { even, odd };

inline const char* to_string(parity p) { return p == parity::even ? "even" : "odd"; }

// Piecewise-constant real field on [0,1]. The segment lengths must sum to 1;
// alpha is the unit the integral is promised to be an integer multiple of.
struct field_segment {
    double length = 0.0;
    double value = 0.0;
};

struct field_spec {
    std::vector<field_segment> segments;
    double alpha = 1.0;

    void validate() const;
    double integral() const; // sum of length * value
};

// N values over Z_2K whose sum is promised to be 0 mod K. The answer bit is
// which of the two admissible residues (0 or K, mod 2K) the sum actually hits.
struct discrete_instance {
    ring_size ring;
    std::vector<unsigned> values; // k_1 .. k_N

    unsigned n_parties() const { return static_cast<unsigned>(values.size()); }
    void validate() const;           // ranges + promise
    parity instance_parity() const;  // validates, then classifies the sum
};

// Exact integrals of the field over n equal-length sections.
std::vector<double> discretize(const field_spec& field, unsigned n_sections);

// Snap section integrals onto the alpha/K grid. Each phi must sit within
// 1e-6 grid units of an integer in {0..2K-1}; the result must satisfy the
// promise or a promise_error is raised.
discrete_instance quantize(const std::vector<double>& phis, ring_size ring, double alpha);

// Seeded uniform instance with the requested parity; the last value is the
// unique completion. Identical seeds give identical instances.
discrete_instance random_instance(unsigned n_parties, ring_size ring, parity target,
                                  std::uint64_t seed);

// The canonical piecewise-constant field of an instance: section n carries
// the constant value that integrates to alpha * k_n / K.
field_spec canonical_field(const discrete_instance& inst, double alpha);

} // namespace chainparity
