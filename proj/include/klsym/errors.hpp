#pragma once

#include <stdexcept>
#include <string>

namespace klsym {

/// Error taxonomy mirrored by the C API status codes.
enum class ErrorCode {
    invalid_argument = 1,
    budget_exceeded = 2,
    check_failed = 3,
    internal = 4,
    cache = 5,
    io = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error(ErrorCode::budget_exceeded, what) {}
};

/// A verification predicate computed to completion and came out false.
struct CheckFailed : Error {
    explicit CheckFailed(const std::string& what) : Error(ErrorCode::check_failed, what) {}
};

/// An invariant that only an arithmetic bug can violate (integrality of a
/// Newton quotient, a missing cache entry that was just written, ...).
struct InternalError : Error {
    explicit InternalError(const std::string& what) : Error(ErrorCode::internal, what) {}
};

struct CacheError : Error {
    explicit CacheError(const std::string& what) : Error(ErrorCode::cache, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

}  // namespace klsym
