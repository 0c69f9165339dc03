#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdfgan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector/matrix widths that do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid argument values (non-finite inputs, empty sets, bad bounds).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A caller broke an API contract, e.g. updating a frozen network.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Training configuration rejected by validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A loss became non-finite during training.
class DivergenceError : public Error {
public:
    DivergenceError(std::string stage, std::size_t step, std::string loss)
        : Error(stage + " diverged at " + std::to_string(step) + ": " + loss + " is non-finite"),
          stage_(std::move(stage)), step_(step), loss_(std::move(loss)) {}

    const std::string& stage() const noexcept { return stage_; }
    std::size_t step() const noexcept { return step_; }
    const std::string& loss() const noexcept { return loss_; }

private:
    std::string stage_;
    std::size_t step_;
    std::string loss_;
};

/// Malformed input file; line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(std::string const& source, std::size_t line, std::string const& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Missing or unreadable file.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace mdfgan
