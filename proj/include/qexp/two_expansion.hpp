#pragma once

#include "qexp/base.hpp"
#include "qexp/digits.hpp"
#include "qexp/expansion.hpp"
#include "qexp/transversality.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qexp {

struct U2Checks {
    UniquenessVerdict a_unique{UniquenessVerdict::Kind::UnknownToDepth, 0, 0};
    UniquenessVerdict b_unique{UniquenessVerdict::Kind::UnknownToDepth, 0, 0};
    bool value_equality = false;
    std::vector<bool> prefix_outside_switch; // index j = 0..|w|-1
    bool prefix_ok = true;
    std::size_t live_paths = 0, ambiguous_paths = 0;
    bool enumeration_two = false;
};

// Certificate that pi_q(w m a) = pi_q(w (m+1) b) is a point with exactly two
// expansions: both tails univoque, values equal, and every proper prefix
// value avoids the switch region.
struct U2Certificate {
    DigitWord w;
    int m = 0;
    EventuallyPeriodicSeq a, b;
    BaseEnclosure base;
    U2Checks checks;
    bool valid = false;
};

U2Certificate check_u2_point(const DigitWord& w, int m, const EventuallyPeriodicSeq& a,
                             const EventuallyPeriodicSeq& b, const Base& base, long depth);

struct PairSearchRecord {
    EventuallyPeriodicSeq a, b;
    RootResult root;
    UniquenessVerdict a_unique{UniquenessVerdict::Kind::UnknownToDepth, 0, 0};
    UniquenessVerdict b_unique{UniquenessVerdict::Kind::UnknownToDepth, 0, 0};
    bool constructive = false;
};

// Enumerates canonical pairs (a, b) within the size bounds, solves
// pi_q(a) = pi_q(b) + 1 over the window, and evaluates both uniqueness
// verdicts at each root. Reflected duplicate pairs are searched once.
std::vector<PairSearchRecord> construct_u2_candidates(int M, const RationalInterval& q_window,
                                                      std::size_t period_bound,
                                                      std::size_t preperiod_bound,
                                                      long verdict_depth = 64);

// All canonical eventually periodic sequences with the given size bounds.
std::vector<EventuallyPeriodicSeq> all_canonical_seqs(int M, std::size_t preperiod_bound,
                                                      std::size_t period_bound);

// Interval image of d -> max{0, 2d - 1} on [0,1].
RationalInterval theorem_bound(const RationalInterval& dim);

// Searches the expansion tree of x for the first branch point whose tail has
// exactly two certified-univoque continuations; returns (prefix length,
// tail point enclosure).
std::optional<std::pair<std::size_t, RationalInterval>> reduce_to_u2(const Base& base,
                                                                     const RationalInterval& x,
                                                                     long depth);
std::optional<std::pair<std::size_t, RationalInterval>> reduce_to_u2_value(const Base& base,
                                                                           const QNum& x,
                                                                           long depth);

} // namespace qexp
