#include "chainparity/teleport.hpp"

#include <cmath>
#include <numbers>

#include "chainparity/errors.hpp"

namespace chainparity {

namespace {

constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Bell basis on the (sender, resource) pair, indexed m = 2*z + x:
//   m=0  |Phi+> = (|00>+|11>)/sqrt2   correction I
//   m=1  |Psi+> = (|01>+|10>)/sqrt2   correction X
//   m=2  |Phi-> = (|00>-|11>)/sqrt2   correction Z
//   m=3  |Psi-> = (|01>-|10>)/sqrt2   correction Z X
// Unnormalized projection of psi x |Phi+> onto outcome m leaves the receiver
// holding X^x Z^z psi / 2, so the correction Z^z X^x restores psi exactly:
// the amplitudes are psi/2 up to sign and order, and the factor 2 is exact
// in binary floating point.
qubit_state project_branch(const qubit_state& psi, unsigned m) {
    const unsigned x = m & 1u;
    const unsigned z = (m >> 1) & 1u;
    // Receiver state before correction: a_c = sum_{ab} <bell_m|ab> * joint_{abc}
    // with joint_{abc} = psi_a * phi_plus_{bc}. Worked out per branch below to
    // stay exact (no 1/sqrt2 round trips).
    qubit_state before;
    switch (m) {
    case 0: // <Phi+| : (psi0, psi1)/2
        before.amp0 = psi.amp0 * 0.5;
        before.amp1 = psi.amp1 * 0.5;
        break;
    case 1: // <Psi+| : (psi1, psi0)/2
        before.amp0 = psi.amp1 * 0.5;
        before.amp1 = psi.amp0 * 0.5;
        break;
    case 2: // <Phi-| : (psi0, -psi1)/2
        before.amp0 = psi.amp0 * 0.5;
        before.amp1 = -psi.amp1 * 0.5;
        break;
    default: // <Psi-| : (-psi1, psi0)/2
        before.amp0 = -psi.amp1 * 0.5;
        before.amp1 = psi.amp0 * 0.5;
        break;
    }
    // Renormalize (each branch has probability exactly 1/4) and correct.
    before.amp0 *= 2.0;
    before.amp1 *= 2.0;
    if (x) std::swap(before.amp0, before.amp1);
    if (z) before.amp1 = -before.amp1;
    return before;
}

} // namespace

two_qubit_state two_qubit_state::bell_phi_plus() {
    two_qubit_state s;
    s.amp[0] = inv_sqrt2;
    s.amp[3] = inv_sqrt2;
    return s;
}

double two_qubit_state::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amp) n += std::norm(a);
    return n;
}

teleport_outcome teleport_hop(const qubit_state& state, std::uint64_t seed) {
    const unsigned m = static_cast<unsigned>(splitmix64(seed) & 3u);
    teleport_outcome out;
    out.x_bit = m & 1u;
    out.z_bit = (m >> 1) & 1u;
    out.received = project_branch(state, m);
    return out;
}

std::array<teleport_outcome, 4> teleport_all_branches(const qubit_state& state) {
    std::array<teleport_outcome, 4> out;
    for (unsigned m = 0; m < 4; ++m) {
        out[m].x_bit = m & 1u;
        out[m].z_bit = (m >> 1) & 1u;
        out[m].received = project_branch(state, m);
    }
    return out;
}

teleport_run run_teleport_chain(const discrete_instance& inst, std::uint64_t seed,
                                bool check_branches) {
    inst.validate();
    const std::size_t n = inst.n_parties();

    teleport_run run;
    qubit_state psi;
    apply_section(psi, inst.values[0], inst.ring);
    for (std::size_t hop = 1; hop < n; ++hop) {
        if (check_branches) {
            for (const auto& branch : teleport_all_branches(psi)) {
                if (fidelity(branch.received, psi) < 1.0 - 1e-12)
                    throw error("teleport correction branch failed to restore the state");
            }
        }
        const std::uint64_t hop_seed = splitmix64(seed + hop);
        const teleport_outcome out = teleport_hop(psi, hop_seed);
        run.transcript.hops.push_back({out.x_bit, out.z_bit, hop_seed});
        psi = out.received;
        apply_section(psi, inst.values[hop], inst.ring);
    }

    const double p_up = std::norm(psi.amp0);
    const double p_down = std::norm(psi.amp1);
    run.verdict = p_up >= p_down ? parity::even : parity::odd;
    return run;
}

} // namespace chainparity
