#pragma once

#include <stdexcept>
#include <string>

namespace htwin {

// Base of every error the library throws. Callers that only care about
// "something in the twin failed" catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input text/bytes that do not follow a documented grammar.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// An entity (series, room, floor) that the caller named does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// A numerical precondition of an analysis routine is violated
// (empty intersection, span too short, constant input, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A structural invariant would be broken (conflicting duplicate, series in two rooms).
class InvariantError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace htwin
