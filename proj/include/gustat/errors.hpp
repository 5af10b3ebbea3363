#pragma once

#include <stdexcept>
#include <string>

namespace gustat {

// Bad caller input: mismatched ground sets, flat partitions where non-flat is
// required, malformed specs.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An enumeration or state space exceeds its configured cap.
class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A minimum or similar reduction over an empty candidate set.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Contraction of a flat partition would create a self-loop.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Regime-specific bounds requested in the critical regime.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Statistic undefined on the sample (zero variance, too few points).
class DegenerateSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failures in text and JSON inputs.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gustat
