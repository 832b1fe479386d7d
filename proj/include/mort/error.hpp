#pragma once

#include <stdexcept>
#include <string>

namespace mort {

enum class errc {
    no_foreground,
    not_power_of_two,
    contour_too_short,
    dimension_mismatch,
    scale_out_of_range,
    index_out_of_range,
    order_out_of_range,
    pair_count_mismatch,
    empty_gallery,
    insufficient_samples,
    parse_error,
    missing_file,
    spec_infeasible,
    io_error,
};

/// Error thrown by all library operations. Carries a machine-checkable code
/// next to the human-readable message.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
    throw error(code, what);
}

} // namespace mort
