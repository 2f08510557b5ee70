// Serial vs parallel timing for the three kernels that carry OpenMP: the
// growth sweep, protocol verification, and the amplitude-model batch. Each
// case checks that both paths produce identical results before reporting.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "chainparity/parallel.hpp"
#include "chainparity/protocol.hpp"
#include "chainparity/qsim.hpp"
#include "chainparity/ring.hpp"
#include "chainparity/task.hpp"

using namespace chainparity;

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-24s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                equal ? "results equal" : "RESULTS DIFFER");
}

bool bench_sweep() {
    const ring_size ring = ring_size::from_two_k(20);

    auto t0 = clock_type::now();
    const growth_sweep_result serial = sweep_growth_serial(ring);
    const double serial_ms = ms_since(t0);

    t0 = clock_type::now();
    const growth_sweep_result parallel = sweep_growth(ring, 0);
    const double parallel_ms = ms_since(t0);

    const bool equal = serial.sets_checked == parallel.sets_checked &&
                       serial.pairs_checked == parallel.pairs_checked &&
                       serial.zero_growth == parallel.zero_growth;
    report("growth sweep 2K=20", serial_ms, parallel_ms, equal);
    return equal;
}

bool bench_verify() {
    const ring_size ring = ring_size::from_two_k(16);
    const protocol_table p = partial_sum_protocol(7, ring);

    auto t0 = clock_type::now();
    const verify_result serial = verify_serial(p);
    const double serial_ms = ms_since(t0);

    t0 = clock_type::now();
    const verify_result parallel = verify(p, 0);
    const double parallel_ms = ms_since(t0);

    const bool equal = serial.perfect == parallel.perfect &&
                       serial.cex.has_value() == parallel.cex.has_value();
    report("verify N=7 2K=16", serial_ms, parallel_ms, equal);
    return equal;
}

bool bench_batch() {
    const ring_size ring = ring_size::from_half(512);
    std::vector<discrete_instance> instances;
    for (unsigned i = 0; i < 256; ++i)
        instances.push_back(
            random_instance(20000, ring, i % 2 ? parity::odd : parity::even, i));

    auto t0 = clock_type::now();
    const auto serial = run_chain_batch_serial(instances, qubit_model::amplitude);
    const double serial_ms = ms_since(t0);

    t0 = clock_type::now();
    const auto parallel = run_chain_batch(instances, qubit_model::amplitude, 0);
    const double parallel_ms = ms_since(t0);

    bool equal = serial.size() == parallel.size();
    for (std::size_t i = 0; equal && i < serial.size(); ++i)
        equal = serial[i].verdict == parallel[i].verdict &&
                serial[i].error_probability == parallel[i].error_probability;
    report("amplitude batch 256x20k", serial_ms, parallel_ms, equal);
    return equal;
}

} // namespace

int main() {
    std::printf("hardware threads: %d\n", max_workers());
    bool ok = true;
    ok &= bench_sweep();
    ok &= bench_verify();
    ok &= bench_batch();
    return ok ? 0 : 1;
}
