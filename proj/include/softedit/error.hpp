#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace softedit {

// Base for every error raised by the library. Input problems derive from
// InputError so that front ends can map them to a "bad input" exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class UnknownSymbol : public InputError {
public:
    UnknownSymbol(std::string record, std::size_t position, char symbol)
        : InputError(describe(record, position, symbol)),
          record_(std::move(record)), position_(position), symbol_(symbol) {}
    UnknownSymbol(std::size_t position, char symbol) : UnknownSymbol("", position, symbol) {}

    const std::string& record() const noexcept { return record_; }
    std::size_t position() const noexcept { return position_; }
    char symbol() const noexcept { return symbol_; }

private:
    static std::string describe(const std::string& record, std::size_t position, char symbol) {
        std::string msg = "unknown symbol '";
        msg += symbol;
        msg += "' at position " + std::to_string(position);
        if (!record.empty()) msg += " of record " + record;
        return msg;
    }

    std::string record_;
    std::size_t position_;
    char symbol_;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct AlphabetMismatch : InputError {
    using InputError::InputError;
};
struct TooLong : InputError {
    using InputError::InputError;
};
struct EmptyBatch : InputError {
    using InputError::InputError;
};
struct EmptyDataset : InputError {
    using InputError::InputError;
};
struct TooFewSequences : InputError {
    using InputError::InputError;
};
struct Unsatisfiable : InputError {
    using InputError::InputError;
};
struct DegenerateInput : InputError {
    using InputError::InputError;
};
struct LengthMismatch : InputError {
    using InputError::InputError;
};
struct CountMismatch : InputError {
    using InputError::InputError;
};
struct InvalidArgument : InputError {
    using InputError::InputError;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace softedit
