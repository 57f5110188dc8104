#pragma once

#include <stdexcept>
#include <string>

namespace provex {

/// Errors caused by bad user input (files, queries, question tuples).
/// The CLI maps these to exit code 2; everything else is exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Internal limits (memory caps, search-space guards).
class LimitError : public std::runtime_error {
public:
    explicit LimitError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace provex
