#pragma once

#include <stdexcept>
#include <string>

namespace causalstock {

// Failure categories. Each maps onto one process exit code of the CLI.
enum class ErrorKind {
    Config,   // bad configuration, flags, shapes
    Data,     // malformed or inconsistent input data
    Network,  // chat endpoint unreachable / auth failure
    Numeric,  // divergence, non-finite values
    Parse,    // LLM response could not be parsed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class NetworkError : public Error {
public:
    explicit NetworkError(const std::string& what) : Error(ErrorKind::Network, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

// Carries the raw response so callers can log or re-prompt.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string raw)
        : Error(ErrorKind::Parse, what), raw_(std::move(raw)) {}

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

// 0 ok, 2 config, 3 data, 4 network, 5 numeric divergence.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Data: return 3;
        case ErrorKind::Parse: return 3;
        case ErrorKind::Network: return 4;
        case ErrorKind::Numeric: return 5;
    }
    return 1;
}

}  // namespace causalstock
