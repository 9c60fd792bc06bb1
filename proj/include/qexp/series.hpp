#pragma once

#include "qexp/base.hpp"
#include "qexp/digits.hpp"
#include "qexp/interval.hpp"
#include "qexp/poly.hpp"

namespace qexp {

// Value of sum_{i>=1} c_i q^{-i} for the digit sequence, enclosed over the
// whole base enclosure. Point-rational bases evaluate the eventually periodic
// tail in closed form (exact); otherwise the sum is truncated at `depth` and
// the tail bound M*q.lo^{-depth}/(q.lo-1) is added outward.
RationalInterval eval_pi(const BaseEnclosure& base, const EventuallyPeriodicSeq& seq,
                         long depth);

Rat eval_pi_exact(const Rat& q, const EventuallyPeriodicSeq& seq);

// Power series g(x) = 1 + sum_{i>=1} d_i x^i with eventually periodic
// coefficients d_i in {-M,...,M}.
class DiffSeries {
public:
    DiffSeries(std::vector<int> pre, std::vector<int> per, int alphabet_max);
    // d_i = b_i - a_i, aligned over a common preperiod/period.
    static DiffSeries between(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b);
    static DiffSeries parse(const std::string& text, int alphabet_max);

    int alphabet_max() const { return m_; }
    int at(std::size_t i) const { // 0-based: coefficient d_{i+1}
        if (i < pre_.size()) return pre_[i];
        return per_[(i - pre_.size()) % per_.size()];
    }
    std::size_t preperiod_len() const { return pre_.size(); }
    std::size_t period_len() const { return per_.size(); }

    Rat value_at(const Rat& x) const; // exact closed form, |x| != 1

    // Numerator of g(x)*(1 - x^r): same zeros as g inside (0,1).
    Poly numerator_x() const;
    // Same zeros in q-coordinates (x = 1/q), valid for q > 1.
    Poly numerator_q() const;

    std::string str() const;

private:
    std::vector<int> pre_, per_;
    int m_;
};

// Certified sign of g over the x-interval: Positive/Negative only when the
// truncated interval evaluation plus the outward tail bound sum_{i>depth}
// M*x.hi^i separates from zero.
SignResult certified_sign(const DiffSeries& diff, const RationalInterval& x, long depth);

// Numerator/denominator polynomials in q with pi_q(seq) = num/den and
// den(q) > 0 for q > 1.
struct PiFraction {
    Poly num, den;
};
PiFraction pi_fraction(const EventuallyPeriodicSeq& seq);

// Numerator of pi_q(seq) - t over the same positive denominator.
Poly pi_minus_rat_numerator(const EventuallyPeriodicSeq& seq, const Rat& t);

// pi_q(seq) as an exact value of the base (uses the fraction form).
QNum pi_value(const Base& base, const EventuallyPeriodicSeq& seq);

} // namespace qexp
