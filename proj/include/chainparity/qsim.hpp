#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "chainparity/task.hpp"

namespace chainparity {

// Single qubit a|0> + b|1>. The chain protocol only ever produces real
// amplitudes, but the type stays complex so teleportation corrections
// (which introduce phases) compose cleanly.
struct qubit_state {
    std::complex<double> amp0{1.0, 0.0};
    std::complex<double> amp1{0.0, 0.0};

    double norm_sq() const { return std::norm(amp0) + std::norm(amp1); }
};

// |<a|b>|^2, invariant under global phase.
double fidelity(const qubit_state& a, const qubit_state& b);

// Spin-vector angle. The integer part counts quanta of pi/K modulo 2K
// (exact); theta mirrors it in radians and also serves the continuous model.
struct angle_state {
    unsigned quanta = 0;
    double theta = 0.0;
};

enum class qubit_model { angle, amplitude };

// Advance the spin vector by pi*k/K radians (half-angle on amplitudes).
void apply_section(qubit_state& state, unsigned k, ring_size ring);
void apply_section(angle_state& state, unsigned k, ring_size ring);

struct chain_result {
    parity verdict = parity::even;
    // Squared amplitude of the outcome not returned. Exactly 0 for the angle
    // model; numerical noise for the amplitude model.
    double error_probability = 0.0;
};

chain_result run_chain(const discrete_instance& inst, qubit_model model);

// Independent-instance batch; the parallel form must agree with the serial
// form element for element.
std::vector<chain_result> run_chain_batch(const std::vector<discrete_instance>& instances,
                                          qubit_model model, int workers = 0);
std::vector<chain_result> run_chain_batch_serial(const std::vector<discrete_instance>& instances,
                                                 qubit_model model);

struct continuous_result {
    parity verdict = parity::even;
    double theta = 0.0;       // quadrature estimate of the final spin angle, radians
    double error_bound = 0.0; // rigorous bound on |theta - true angle|
    long long m = 0;          // nearest pole index: theta ~= m*pi
    std::uint64_t steps = 0;
};

// Composite midpoint integration of d(theta) = (pi/alpha)*phi(x) dx. Decides
// by nearest pole. Throws indeterminate_error when the error bound reaches
// pi/2 (a quarter of a full rotation), and promise_error when the exact
// integral is off the alpha/K grid or breaks the promise.
continuous_result run_continuous(const field_spec& field, ring_size ring, std::uint64_t steps);

struct rod_result {
    parity verdict = parity::even;
    double theta = 0.0; // final rod angle in radians, jitter included
};

// Classical real-angle rod: each section turns the rod by pi*k/K plus a
// seeded uniform jitter in [-jitter_amplitude, +jitter_amplitude]. Decision
// by nearest pole; guaranteed correct while total jitter stays below pi/2.
rod_result run_rod(const discrete_instance& inst, double jitter_amplitude, std::uint64_t seed);

} // namespace chainparity
