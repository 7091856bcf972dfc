#pragma once

#include <stdexcept>
#include <string>

namespace monotile {

// Caller handed us arguments that violate a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input text/JSON could not be parsed.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A verify-and-resample loop hit its retry cap.
class RetryExhausted : public std::runtime_error {
public:
    RetryExhausted(const std::string& what, int retries)
        : std::runtime_error(what), retries(retries) {}
    int retries;
};

// A named stage of a multi-stage construction failed; callers may degrade.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage(std::move(stage)) {}
    std::string stage;
};

// A bounded search ran out of nodes before deciding.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace monotile
