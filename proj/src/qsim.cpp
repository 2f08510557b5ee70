#include "chainparity/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "chainparity/parallel.hpp"

namespace chainparity {

namespace {

constexpr double pi = std::numbers::pi;

void check_section(unsigned k, ring_size ring) {
    if (k >= ring.two_k)
        throw std::invalid_argument("section value " + std::to_string(k) + " outside Z_" +
                                    std::to_string(ring.two_k));
}

// Real rotation acting on the amplitude pair; half of the spin-vector angle.
void rotate(qubit_state& state, double half_angle) {
    const double c = std::cos(half_angle);
    const double s = std::sin(half_angle);
    const std::complex<double> a = state.amp0;
    const std::complex<double> b = state.amp1;
    state.amp0 = c * a - s * b;
    state.amp1 = s * a + c * b;
}

parity parity_of_pole(long long m) { return m % 2 == 0 ? parity::even : parity::odd; }

} // namespace

double fidelity(const qubit_state& a, const qubit_state& b) {
    const std::complex<double> overlap = std::conj(a.amp0) * b.amp0 + std::conj(a.amp1) * b.amp1;
    return std::norm(overlap);
}

void apply_section(qubit_state& state, unsigned k, ring_size ring) {
    check_section(k, ring);
    rotate(state, pi * k / ring.two_k);
}

void apply_section(angle_state& state, unsigned k, ring_size ring) {
    check_section(k, ring);
    state.quanta = (state.quanta + k) % ring.two_k;
    state.theta += pi * k / ring.k;
}

chain_result run_chain(const discrete_instance& inst, qubit_model model) {
    inst.validate();
    chain_result out;

    if (model == qubit_model::angle) {
        angle_state state;
        for (unsigned k : inst.values)
            apply_section(state, k, inst.ring);
        if (state.quanta == 0)
            out.verdict = parity::even;
        else if (state.quanta == inst.ring.k)
            out.verdict = parity::odd;
        else
            throw promise_error("final spin angle off the poles despite a valid promise");
        out.error_probability = 0.0;
        return out;
    }

    qubit_state state;
    if (inst.values.size() >= inst.ring.two_k) {
        // Long chains reuse one table of the 2K possible rotations.
        std::vector<std::pair<double, double>> table(inst.ring.two_k);
        for (unsigned k = 0; k < inst.ring.two_k; ++k) {
            const double half = pi * k / inst.ring.two_k;
            table[k] = {std::cos(half), std::sin(half)};
        }
        for (unsigned k : inst.values) {
            const auto [c, s] = table[k];
            const std::complex<double> a = state.amp0;
            const std::complex<double> b = state.amp1;
            state.amp0 = c * a - s * b;
            state.amp1 = s * a + c * b;
        }
    } else {
        for (unsigned k : inst.values)
            apply_section(state, k, inst.ring);
    }

    const double p_up = std::norm(state.amp0);
    const double p_down = std::norm(state.amp1);
    out.verdict = p_up >= p_down ? parity::even : parity::odd;
    out.error_probability = std::min(p_up, p_down);
    return out;
}

std::vector<chain_result> run_chain_batch_serial(const std::vector<discrete_instance>& instances,
                                                 qubit_model model) {
    std::vector<chain_result> out(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        out[i] = run_chain(instances[i], model);
    return out;
}

std::vector<chain_result> run_chain_batch(const std::vector<discrete_instance>& instances,
                                          qubit_model model, int workers) {
    const int n = resolve_workers(workers);
    if (n == 1 || instances.size() < 2)
        return run_chain_batch_serial(instances, model);

    std::vector<chain_result> out(instances.size());
    std::exception_ptr first_error;
    std::size_t first_error_index = instances.size();
#pragma omp parallel num_threads(n)
    {
#pragma omp for schedule(static)
        for (long long i = 0; i < static_cast<long long>(instances.size()); ++i) {
            try {
                out[static_cast<std::size_t>(i)] = run_chain(instances[static_cast<std::size_t>(i)], model);
            } catch (...) {
#pragma omp critical(chainparity_batch_error)
                {
                    if (static_cast<std::size_t>(i) < first_error_index) {
                        first_error_index = static_cast<std::size_t>(i);
                        first_error = std::current_exception();
                    }
                }
            }
        }
    }
    if (first_error)
        std::rethrow_exception(first_error);
    return out;
}

continuous_result run_continuous(const field_spec& field, ring_size ring, std::uint64_t steps) {
    field.validate();
    if (steps == 0)
        throw std::invalid_argument("quadrature needs at least one step");

    // Ground truth must exist: the exact integral has to land on the
    // alpha/K grid at a promise-satisfying residue.
    const double scaled = field.integral() / (field.alpha / ring.k);
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) > 1e-6)
        throw promise_error("field integral is off the alpha/K grid by " +
                            std::to_string(std::abs(scaled - nearest)) + " grid units");
    const long long grid = static_cast<long long>(nearest);
    if (grid % static_cast<long long>(ring.k) != 0)
        throw promise_error("field integral breaks the promise: " + std::to_string(grid) +
                            " grid units is not a multiple of K");

    // Segment boundaries, for both midpoint lookup and the oscillation bound.
    std::vector<double> starts;
    starts.reserve(field.segments.size() + 1);
    double pos = 0.0;
    starts.push_back(0.0);
    for (const auto& seg : field.segments) {
        pos += seg.length;
        starts.push_back(pos);
    }
    starts.back() = 1.0;

    auto value_at = [&](double x) {
        std::size_t j = static_cast<std::size_t>(
            std::upper_bound(starts.begin(), starts.end(), x) - starts.begin());
        if (j == 0)
            j = 1;
        j = std::min(j, field.segments.size());
        return field.segments[j - 1].value;
    };

    const double width = 1.0 / static_cast<double>(steps);
    double integral = 0.0;
    double bound = 0.0; // on the integral, in field units
    for (std::uint64_t s = 0; s < steps; ++s) {
        const double lo = static_cast<double>(s) * width;
        const double hi = static_cast<double>(s + 1) * width;
        integral += width * value_at((lo + hi) / 2);

        // Midpoint is exact on a constant step; a step straddling segment
        // boundaries can be off by at most width * (max - min) over the step.
        double vmin = field.segments.front().value;
        double vmax = vmin;
        bool first = true;
        for (std::size_t j = 0; j < field.segments.size(); ++j) {
            if (starts[j + 1] <= lo || starts[j] >= hi)
                continue;
            const double v = field.segments[j].value;
            if (first) {
                vmin = vmax = v;
                first = false;
            } else {
                vmin = std::min(vmin, v);
                vmax = std::max(vmax, v);
            }
        }
        bound += width * (vmax - vmin);
    }

    continuous_result out;
    out.steps = steps;
    out.theta = pi * integral / field.alpha;
    out.error_bound = pi * bound / field.alpha;
    if (out.error_bound >= pi / 2)
        throw indeterminate_error("accumulated angle error bound " +
                                  std::to_string(out.error_bound) +
                                  " rad reaches a quarter rotation; raise steps");
    out.m = static_cast<long long>(std::llround(out.theta / pi));
    out.verdict = parity_of_pole(out.m);
    return out;
}

rod_result run_rod(const discrete_instance& inst, double jitter_amplitude, std::uint64_t seed) {
    inst.validate();
    if (jitter_amplitude < 0 || !std::isfinite(jitter_amplitude))
        throw std::invalid_argument("jitter amplitude must be nonnegative and finite");

    std::mt19937_64 rng(seed);
    rod_result out;
    for (unsigned k : inst.values) {
        // (2u-1) with u drawn on the 53-bit grid: platform-stable uniform.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        out.theta += pi * k / inst.ring.k + (2.0 * u - 1.0) * jitter_amplitude;
    }
    out.verdict = parity_of_pole(std::llround(out.theta / pi));
    return out;
}

} // namespace chainparity
