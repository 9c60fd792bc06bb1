#pragma once

#include "qexp/base.hpp"
#include "qexp/digits.hpp"
#include "qexp/interval.hpp"

#include <optional>
#include <vector>

namespace qexp {

// --- expansion generators -------------------------------------------------

// First n digits of the greedy (lexicographically largest) expansion of x.
// Digits are emitted only when certified over the whole base enclosure;
// otherwise PrecisionExhausted(position) is thrown.
DigitWord greedy_expansion(const Base& base, const RationalInterval& x, long n);
// Quasi-greedy: lexicographically largest infinite expansion; x must be > 0.
DigitWord quasi_greedy_expansion(const Base& base, const RationalInterval& x, long n);
// Lexicographically smallest expansion (reflection dual of greedy).
DigitWord lazy_expansion(const Base& base, const RationalInterval& x, long n);

inline DigitWord greedy_expansion(const Base& b, const Rat& x, long n) {
    return greedy_expansion(b, RationalInterval(x), n);
}
inline DigitWord quasi_greedy_expansion(const Base& b, const Rat& x, long n) {
    return quasi_greedy_expansion(b, RationalInterval(x), n);
}
inline DigitWord lazy_expansion(const Base& b, const Rat& x, long n) {
    return lazy_expansion(b, RationalInterval(x), n);
}

// --- switch region ---------------------------------------------------------

// Block i = [i/q, ((i-1)(q-1)+M)/(q^2-q)]: the points whose first digit can
// be either i-1 or i. Outward-rounded over the base enclosure.
struct SwitchBlock {
    int digit_high; // i in 1..M
    RationalInterval interval;
};
struct SwitchRegion {
    std::vector<SwitchBlock> blocks;
};
SwitchRegion switch_region(const BaseEnclosure& base);

// --- first-digit options ----------------------------------------------------

struct DigitOptions {
    bool ambiguous = false;
    std::vector<int> digits; // empty iff ambiguous
};
DigitOptions digit_options(const Base& base, const RationalInterval& x);
DigitOptions digit_options_value(const Base& base, const QNum& x);

// --- full enumeration -------------------------------------------------------

enum class PathStatus { Live, Ambiguous };

struct ExpansionPath {
    DigitWord digits;
    PathStatus status;
    RationalInterval remainder; // value after the digits, scaled by q^depth
};

struct ExpansionTree {
    RationalInterval x;
    int M;
    RationalInterval q;
    long depth = 0;
    std::vector<ExpansionPath> paths; // lexicographic order
    std::size_t live_count = 0, ambiguous_count = 0;
    bool truncated = false; // path cap reached
};

struct EnumerateOptions {
    std::size_t max_paths = std::size_t(1) << 20;
};

ExpansionTree enumerate_expansions(const Base& base, const RationalInterval& x, long depth,
                                   const EnumerateOptions& opts = {});
ExpansionTree enumerate_expansions_value(const Base& base, const QNum& x, long depth,
                                         const EnumerateOptions& opts = {});

// --- quasi-greedy expansion of 1 (alpha) -------------------------------------

// Certified digit alpha_k (k >= 1) of the quasi-greedy expansion of 1,
// cached per base. Throws PrecisionExhausted when the enclosure cannot
// certify the digit.
int alpha_digit(const Base& base, std::size_t k);
DigitWord alpha_prefix(const Base& base, std::size_t n);
// Eventually periodic form once the remainder orbit closes (exact bases).
std::optional<EventuallyPeriodicSeq> alpha_if_periodic(const Base& base, std::size_t within);

// --- uniqueness -------------------------------------------------------------

struct UniquenessVerdict {
    enum class Kind { UniqueCertified, NotUniqueCertified, UnknownToDepth } kind;
    std::size_t witness = 0; // violated condition position (NotUnique)
    long depth = 0;          // examined depth (Unknown)

    bool unique() const { return kind == Kind::UniqueCertified; }
    bool not_unique() const { return kind == Kind::NotUniqueCertified; }
};

// Decides membership of s in the set of univoque sequences for the base:
// every tail after a digit < M must be lexicographically strictly below
// alpha(q), and every reflected tail after a digit > 0 likewise.
UniquenessVerdict uniqueness_certificate(const EventuallyPeriodicSeq& s, const Base& base,
                                         long depth);

} // namespace qexp
