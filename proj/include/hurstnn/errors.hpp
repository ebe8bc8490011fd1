#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hurstnn {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter outside its documented bounds.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Malformed input data. `row` is 1-based (a file line for CSV input,
// a series position otherwise); 0 means not tied to a row.
class InputError : public Error {
public:
    InputError(const std::string& what, std::size_t row = 0)
        : Error(row == 0 ? what : what + " (row " + std::to_string(row) + ")"), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Not enough observations for the requested computation.
class InsufficientHistory : public Error {
public:
    InsufficientHistory(const std::string& what, std::size_t required, std::size_t available)
        : Error(what + ": insufficient history, need " + std::to_string(required) + ", have " +
                std::to_string(available)),
          required_(required),
          available_(available) {}

    std::size_t required() const noexcept { return required_; }
    std::size_t available() const noexcept { return available_; }

private:
    std::size_t required_;
    std::size_t available_;
};

// The log-log scaling regression could not be performed.
class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace hurstnn
