#pragma once

#include <stdexcept>
#include <string>

namespace kpa {

// Error taxonomy. The CLI maps these onto process exit codes:
// usage/config -> 1, data/format -> 2, numerical -> 3.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid domain parameters (map control/seed out of range, bad widths, ...)
struct param_error : error {
    using error::error;
};

// caller broke a usage contract (scheme/channel mismatch, empty input set, ...)
struct usage_error : error {
    using error::error;
};

// tensor shape algebra failed (non-integral conv output, odd pool input, ...)
struct shape_error : error {
    using error::error;
};

// malformed external file
struct format_error : error {
    format_error(const std::string& what, std::size_t byte_offset)
        : error(what + " (at byte offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    explicit format_error(const std::string& what) : error(what), offset(0) {}
    std::size_t offset;
};

// API called in the wrong order (backward before forward, ...)
struct state_error : error {
    using error::error;
};

// non-finite loss, failed gradient check, ...
struct numeric_error : error {
    using error::error;
};

}  // namespace kpa
