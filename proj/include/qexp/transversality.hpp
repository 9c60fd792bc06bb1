#pragma once

#include "qexp/base.hpp"
#include "qexp/interval.hpp"
#include "qexp/poly.hpp"
#include "qexp/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qexp {

// h(x) = head(x) + tail_coef * x^tail_from / (1-x), one case row per M.
struct StarFunctionSpec {
    int M = 1, k = 0;
    bool odd = true;
    Poly head;
    Rat tail_coef;
    long tail_from = 2;
    bool xM_rational = false;
    Rat xM_rat;                 // k >= 3 rows
    Poly xM_poly;               // defining polynomial otherwise
    RationalInterval xM;        // certified enclosure (exact when rational)

    RationalInterval eval_h(const RationalInterval& x) const;
    RationalInterval eval_dh(const RationalInterval& x) const;
    Rat eval_h_exact(const Rat& x) const;
    Rat eval_dh_exact(const Rat& x) const;
};

StarFunctionSpec star_function(int M);

struct TransversalityCertificate {
    int M = 1;
    RationalInterval interval;  // certified transversality domain [0, xM.lo]
    Rat delta;                  // min{h(xM)/2, |h'(xM)|/2}, outward-safe
    RationalInterval h_at_xM, dh_at_xM;
    RationalInterval xM;
    bool kl_range_inside = false; // [1/(M+1), 1/q_KL] inside [0, xM]
};

// Certifies h(xM) > 0 and h'(xM) < 0 and emits delta; memoized per M.
TransversalityCertificate verify_star(int M);

struct RootResult {
    enum class Kind { NoRootCertified, UniqueRoot, Inconclusive } kind;
    std::optional<Base> base;    // for UniqueRoot: exact representation
    RationalInterval enclosure;  // q-enclosure for UniqueRoot
    std::string reason;

    bool unique() const { return kind == Kind::UniqueRoot; }
    bool no_root() const { return kind == Kind::NoRootCertified; }
};

// The unique q in `search` (subset of [q_KL, M+1]) with
// 1 + sum_i d_i q^{-i} = 0, located by certified bisection; uniqueness is
// guaranteed by delta-transversality of the reciprocal series on [0, xM].
RootResult transversality_root(const DiffSeries& diff, const RationalInterval& search,
                               const Rat& precision);

struct InspectionCertificate {
    std::string label;
    RationalInterval domain; // q-interval certified
    bool certified = false;
    std::size_t pieces = 0;  // subdivision pieces used
    Rat sup_bound;           // largest interval upper bound seen (< 0)
};

// Certifies the closing inequalities (omega = 1/100 exactly): the two M=1
// case expressions negative on [q_KL, 2], and -1+2w+p/(q-1)^2 < 0 on the
// per-p domains for M >= 2.
std::vector<InspectionCertificate> verify_inspection_inequalities(
    int M, const RefinementBudget& budget = {});

} // namespace qexp
