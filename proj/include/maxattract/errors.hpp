#pragma once

#include <stdexcept>
#include <string>

#include "maxattract/rational.hpp"

namespace maxattract {

/// Malformed or invalid input document; `path` points at the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// A theorem hypothesis failed; carries the two exact side values compared.
class ConditionNotMet : public std::runtime_error {
public:
    ConditionNotMet(std::string condition, Rational lhs, Rational rhs)
        : std::runtime_error("condition not met: " + condition + " (" + lhs.str() +
                             " vs " + rhs.str() + ")"),
          condition_(std::move(condition)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
    const std::string& condition() const { return condition_; }
    const Rational& lhs() const { return lhs_; }
    const Rational& rhs() const { return rhs_; }

private:
    std::string condition_;
    Rational lhs_, rhs_;
};

/// Instance or subproblem exceeds the documented exact-computation limits.
class SizeGuardExceeded : public std::runtime_error {
public:
    explicit SizeGuardExceeded(const std::string& message) : std::runtime_error(message) {}
};

class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError() : std::runtime_error("linear program is infeasible") {}
};

class UnboundedError : public std::runtime_error {
public:
    UnboundedError() : std::runtime_error("objective is unbounded over the feasible region") {}
};

}  // namespace maxattract
