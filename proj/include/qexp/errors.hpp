#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qexp {

// Precondition or invariant violation on caller-supplied data.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct DigitRangeError : DomainError {
    explicit DigitRangeError(const std::string& what) : DomainError(what) {}
};

struct AdmissibilityError : DomainError {
    std::size_t index;
    AdmissibilityError(const std::string& what, std::size_t idx)
        : DomainError(what), index(idx) {}
};

// A certified decision could not be reached within the refinement budget.
struct PrecisionExhausted : std::runtime_error {
    std::size_t position;
    explicit PrecisionExhausted(const std::string& what, std::size_t pos = 0)
        : std::runtime_error(what), position(pos) {}
};

// A certificate that is expected to exist could not be established.
struct CertificationFailure : std::runtime_error {
    explicit CertificationFailure(const std::string& what) : std::runtime_error(what) {}
};

// Work caps for operations that refine intervals or subdivide domains.
struct RefinementBudget {
    long max_depth = 256;    // series truncation depth / digit positions
    long max_splits = 65536; // interval bisections / subdivision pieces
};

} // namespace qexp
