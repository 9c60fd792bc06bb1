#pragma once

#include "qexp/base.hpp"
#include "qexp/interval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qexp {

// Counts of length-n words compatible with the univoque conditions against
// the first L certified digits of alpha(q). upper admits comparisons still
// unresolved at the window edge; lower counts only words whose automaton
// path stays forever-extendable without ever reaching the window edge.
struct WordCountResult {
    long n = 0, L = 0;
    Int lower, upper;
};

WordCountResult admissible_word_count(const Base& base, long n, long L);

// Certified enclosure of the Hausdorff dimension of the set of points with
// a unique expansion, normalized by log q (box counting at scale q^{-n}).
struct DimensionEnclosure {
    int M = 1;
    RationalInterval q;
    Rat lo, hi;
    long n = 0, L = 0;
};

DimensionEnclosure dim_u_q(const Base& base, long n, long L);

struct ScanRecord {
    RationalInterval q;
    std::optional<DimensionEnclosure> dim;
    std::optional<RationalInterval> bound; // max{0, 2 dim - 1}
    enum class InO { Yes, No, Undetermined } in_o = InO::Undetermined;
    std::string error; // nonempty when the record failed
};

// Per-grid-point dimension enclosures with the two-expansion bound and the
// dim < 1/2 flag; grid must lie inside (q_KL, M+1). Records compute
// independently; `jobs` caps worker threads.
std::vector<ScanRecord> scan_dimension(int M, const std::vector<Base>& grid, long n, long L,
                                       int jobs = 1);

} // namespace qexp
