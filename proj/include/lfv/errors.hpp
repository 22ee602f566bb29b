#ifndef LFV_ERRORS_HPP
#define LFV_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lfv {

// Base class for all library errors. Anything derived from this is a
// problem with the inputs or configuration, not a failed check; failed
// checks are reported through report structs, never thrown.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument, bad file, bad config.
struct input_error : error {
    using error::error;
};

// gcd precondition violated (mod_inverse, crt, twists, ...).
struct not_coprime_error : input_error {
    using input_error::input_error;
};

// Evaluation at a pole of Gamma.
struct pole_error : input_error {
    using input_error::input_error;
};

// A truncated sum cannot meet the requested tolerance with the
// coefficients on hand; carries the truncation length that would.
struct insufficient_coefficients : error {
    insufficient_coefficients(std::int64_t have, std::int64_t need)
        : error("insufficient coefficients: have " + std::to_string(have) +
                ", need " + std::to_string(need)),
          X_have(have), X_required(need) {}
    std::int64_t X_have;
    std::int64_t X_required;
};

// The two cut points feed a denominator too small to solve for epsilon.
struct degenerate_cut_pair : error {
    using error::error;
};

} // namespace lfv

#endif
