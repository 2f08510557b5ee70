#pragma once

#include <stdexcept>
#include <string>

namespace chainparity {

// Base for all library-specific failures. Plain precondition violations
// (mismatched rings, out-of-range elements, a == b) throw std::invalid_argument.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data: bad field specs, bad file contents, range violations.
struct validation_error : error {
    using error::error;
};

// A section integral does not sit on the alpha/K grid.
struct quantize_error : validation_error {
    using validation_error::validation_error;
};

// A value vector violates the sum-mod-K promise.
struct promise_error : validation_error {
    using validation_error::validation_error;
};

// Transition tables whose final reach sets admit no consistent decision.
struct undecidable_error : error {
    using error::error;
};

// Enumeration would exceed the configured budget; the caller must decide,
// the library never silently samples.
struct budget_error : error {
    using error::error;
};

// Set arithmetic is word-backed: rings beyond 64 elements are not supported.
struct size_error : error {
    using error::error;
};

// The continuous integrator's error bound reaches a quarter rotation, so the
// pole decision would be a guess. Refused instead.
struct indeterminate_error : error {
    using error::error;
};

// Missing or unreadable file.
struct file_error : error {
    using error::error;
};

} // namespace chainparity
