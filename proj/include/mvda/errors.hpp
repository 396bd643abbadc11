#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mvda {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: wrong shapes, missing fields, non-Hermitian matrices.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A mathematical existence condition does not hold. Each violated condition
// is carried by name so callers can report exactly what failed.
class DomainError : public Error {
public:
    explicit DomainError(std::vector<std::string> conditions)
        : Error(join(conditions)), conditions_(std::move(conditions)) {}
    DomainError(const std::string& condition) : DomainError(std::vector<std::string>{condition}) {}

    const std::vector<std::string>& conditions() const noexcept { return conditions_; }

private:
    static std::string join(const std::vector<std::string>& c) {
        std::string out = "domain error: ";
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) out += "; ";
            out += c[i];
        }
        return out;
    }
    std::vector<std::string> conditions_;
};

class BadWeights : public DomainError {
public:
    using DomainError::DomainError;
};

class BadSupport : public DomainError {
public:
    using DomainError::DomainError;
};

class PochhammerPole : public DomainError {
public:
    using DomainError::DomainError;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFiniteIntegrand : public NumericalError {
public:
    explicit NonFiniteIntegrand(std::uint64_t index)
        : NumericalError("non-finite integrand at sample " + std::to_string(index)), index_(index) {}
    std::uint64_t index() const noexcept { return index_; }

private:
    std::uint64_t index_;
};

}  // namespace mvda
