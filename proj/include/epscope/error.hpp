#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epscope {

enum class Errc {
    invalid_model,
    degenerate_at_ep,
    no_convergence,
    tracking_ambiguity,
    window_too_narrow,
    no_crossing,
    degenerate_widths,
    not_bracketed,
    gap_floor_not_reached,
    config,
};

std::string_view to_string(Errc code) noexcept;

// Single exception type for every failure the library reports; the code
// tells callers (and the CLI exit-code mapping) which condition fired.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    Errc code() const noexcept { return code_; }
    /// Message without the error-name prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

} // namespace epscope
