#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace episeason {

// All library failures carry a short stable code ("parse", "param", "capacity",
// "numeric", "io") so callers can report machine-readable errors.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& message) {
    throw Error(code, message);
}

} // namespace episeason
