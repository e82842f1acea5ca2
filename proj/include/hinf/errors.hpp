#pragma once

#include <stdexcept>
#include <string>

namespace hinf {

// Mirrors hinf_status in hinf.h; keep the numbering in sync.
enum class ErrorCode {
    InvalidArgument = 1,
    Parse = 2,
    ResourceCap = 3,
    OutOfWindow = 4,
    NotACycle = 5,
    Infeasible = 6,
    LocalityViolation = 7,
    Io = 8,
    Internal = 9,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what)
{
    if (!cond)
        fail(code, what);
}

}  // namespace hinf
