#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace s25 {

/// Invalid geometry, tiling, medium or CLI configuration. Raised before any
/// cell of a wavefield is written.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed snapshot or profile input. `offset` is the byte (or line, for
/// text formats) at which parsing stopped.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

/// A non-finite value appeared in the wavefield.
class InstabilityError : public std::runtime_error {
public:
    explicit InstabilityError(std::int64_t step)
        : std::runtime_error("non-finite wavefield value detected at step " +
                             std::to_string(step)),
          step_(step) {}
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace s25
