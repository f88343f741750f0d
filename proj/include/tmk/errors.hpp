#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tmk {

// Domain errors carry a machine-readable kind; the CLI maps them to
// structured error JSON and exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

namespace errkind {
inline constexpr const char* reducible = "reducible-polynomial";
inline constexpr const char* non_integral = "non-integral-basis";
inline constexpr const char* div_zero = "division-by-zero";
inline constexpr const char* zero_input = "zero-input";
inline constexpr const char* unsupported_prime = "unsupported-prime";
inline constexpr const char* cap_exceeded = "cap-exceeded";
inline constexpr const char* not_sunit = "not-an-s-unit";
inline constexpr const char* missing_data = "missing-data";
inline constexpr const char* domain = "domain";
inline constexpr const char* internal = "internal";
inline constexpr const char* usage = "usage";
}  // namespace errkind

[[noreturn]] inline void fail(const char* kind, const std::string& msg) {
    throw Error(kind, msg);
}

}  // namespace tmk
