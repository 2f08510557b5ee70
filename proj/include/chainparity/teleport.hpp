#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "chainparity/qsim.hpp"

namespace chainparity {

// Two qubits over |00>,|01>,|10>,|11>; only the shared Bell resource of a
// single hop ever needs this.
struct two_qubit_state {
    std::array<std::complex<double>, 4> amp{};

    static two_qubit_state bell_phi_plus();
    double norm_sq() const;
};

struct teleport_outcome {
    unsigned x_bit = 0; // applies the bit-flip correction
    unsigned z_bit = 0; // applies the phase-flip correction
    qubit_state received;
};

// One teleportation hop: project the sender's qubit and half of a fresh Bell
// pair onto the Bell basis (outcome drawn uniformly from the seeded
// generator), then apply the Pauli correction Z^z X^x on the receiver side.
teleport_outcome teleport_hop(const qubit_state& state, std::uint64_t seed);

// All four Bell outcomes with their corrections, for branch-exhaustive checks.
std::array<teleport_outcome, 4> teleport_all_branches(const qubit_state& state);

struct hop_record {
    unsigned x_bit = 0;
    unsigned z_bit = 0;
    std::uint64_t seed = 0;
};

struct teleport_transcript {
    std::vector<hop_record> hops; // exactly N-1 entries, 2 bits each
    unsigned total_bits() const { return 2 * static_cast<unsigned>(hops.size()); }
};

struct teleport_run {
    parity verdict = parity::even;
    teleport_transcript transcript;
};

// The discrete quantum chain with every qubit hand-off replaced by a
// teleportation step. Per-hop seeds derive from the master seed; the verdict
// never depends on them. With check_branches set, every hop verifies all
// four correction branches against the pre-hop state (fidelity 1 within
// 1e-12) before proceeding with the drawn branch.
teleport_run run_teleport_chain(const discrete_instance& inst, std::uint64_t seed,
                                bool check_branches = false);

} // namespace chainparity
