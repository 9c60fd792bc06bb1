#pragma once

#include "qexp/base.hpp"
#include "qexp/digits.hpp"
#include "qexp/expansion.hpp"
#include "qexp/interval.hpp"

#include <string>

namespace qexp {

// alpha(q): quasi-greedy expansion of 1, first n digits.
DigitWord alpha_of_q(const Base& base, std::size_t n);

// The unique q in (1, M+1] with pi_q(s) = 1, for self-admissible infinite s.
// The returned base carries the defining polynomial of q, refined until the
// enclosure width is <= precision.
Base q_from_alpha(const EventuallyPeriodicSeq& s, const Rat& precision);

// Komornik-Loreti constant: the smallest base in which 1 has a unique
// expansion. Bracketed by completing the Thue-Morse-derived prefix with
// all-0 and all-M tails; memoized per (M, precision).
RationalInterval komornik_loreti(int M, const Rat& precision);
Base komornik_loreti_base(int M, const Rat& precision);

// Generalised golden ratio: k+1 for M=2k, (k+1+sqrt(k^2+6k+5))/2 for M=2k+1.
Base golden_ratio_base(int M);
BaseEnclosure golden_ratio_general(int M); // enclosure width <= 1e-12

struct VMembershipReport {
    enum class Kind { ViolatedAtIndex, ConsistentToDepth } kind;
    std::size_t value; // violated shift index, or examined depth

    bool violated() const { return kind == Kind::ViolatedAtIndex; }
};

// Checks reflect(alpha(q)) <= shift(alpha(q), i) <= alpha(q) on prefixes of
// length depth-i for i = 0..depth.
VMembershipReport v_membership_check(const Base& base, std::size_t depth);

// Base the positive root of q^3 = q^2 + q + 1 (M = 1).
Base tribonacci_base();

// CLI-facing name resolution: "kl", "gr" (alias "phi" for M=1),
// "tribonacci", or a rational literal.
Base named_base(const std::string& name, int M, const Rat& precision);

} // namespace qexp
