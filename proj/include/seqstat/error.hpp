#ifndef SEQSTAT_ERROR_HPP
#define SEQSTAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace seqstat {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a requested computation would exceed a configured work budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the precision policy cannot deliver the requested accuracy.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}

#endif
