#pragma once

#include <stdexcept>
#include <string>

namespace diffusion {

// Stable error codes; the CLI maps each to a distinct process exit code.
enum class ErrorCode : int {
    InvalidParams = 3,
    MalformedLine = 4,
    SelfLoop = 5,
    IndexOutOfRange = 6,
    CountMismatch = 7,
    ArithmeticOverflow = 8,
    LengthMismatch = 9,
    CapExceeded = 10,
    TraceTooShort = 11,
    SinkWriteFailure = 12,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& w) : Error(ErrorCode::InvalidParams, w) {}
};

struct MalformedLine : Error {
    explicit MalformedLine(const std::string& w) : Error(ErrorCode::MalformedLine, w) {}
};

struct SelfLoop : Error {
    explicit SelfLoop(const std::string& w) : Error(ErrorCode::SelfLoop, w) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& w) : Error(ErrorCode::IndexOutOfRange, w) {}
};

struct CountMismatch : Error {
    explicit CountMismatch(const std::string& w) : Error(ErrorCode::CountMismatch, w) {}
};

struct ArithmeticOverflow : Error {
    explicit ArithmeticOverflow(const std::string& w) : Error(ErrorCode::ArithmeticOverflow, w) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& w) : Error(ErrorCode::LengthMismatch, w) {}
};

struct CapExceeded : Error {
    explicit CapExceeded(const std::string& w) : Error(ErrorCode::CapExceeded, w) {}
};

struct TraceTooShort : Error {
    explicit TraceTooShort(const std::string& w) : Error(ErrorCode::TraceTooShort, w) {}
};

struct SinkWriteFailure : Error {
    explicit SinkWriteFailure(const std::string& w) : Error(ErrorCode::SinkWriteFailure, w) {}
};

} // namespace diffusion
