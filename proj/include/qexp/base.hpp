#pragma once

#include "qexp/digits.hpp"
#include "qexp/errors.hpp"
#include "qexp/interval.hpp"
#include "qexp/poly.hpp"
#include "qexp/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qexp {

// Alphabet size plus a certified rational enclosure of the base q.
struct BaseEnclosure {
    int M;
    RationalInterval q;

    BaseEnclosure(int m, RationalInterval qi) : M(m), q(std::move(qi)) {
        if (M < 1) throw DomainError("alphabet max must be >= 1");
        if (!(q.lo() > 1)) throw DomainError("base enclosure must satisfy q.lo > 1");
        if (!(q.hi() <= Rat(M + 1))) throw DomainError("base enclosure must satisfy q.hi <= M+1");
    }
};

class QNum;

namespace detail {

using QVal = std::variant<Rat, Poly, RationalInterval>;

struct AlphaCache {
    std::vector<int> digits;            // certified quasi-greedy digits of 1
    std::unique_ptr<QNum> rem;          // remainder after the cached digits
    bool exhausted = false;             // interval base ran out of precision
    std::map<std::string, std::size_t> seen; // remainder key -> digit count
    bool cycle = false;
    std::size_t cycle_start = 0, cycle_len = 0;
};

struct BaseImpl {
    enum class Kind { Rational, Algebraic, IntervalOnly };
    Kind kind;
    int M;
    Rat q_rat;              // Kind::Rational
    Poly pmin;              // Kind::Algebraic: squarefree, monic, one simple root in iso
    RationalInterval fixed; // Kind::IntervalOnly

    mutable RationalInterval iso; // Algebraic: isolating interval, shrinks on demand
    mutable std::mutex mu;        // guards iso
    mutable std::mutex alpha_mu;  // guards alpha; may be held while taking mu
    mutable AlphaCache alpha;

    RationalInterval enclosure_nolock() const;
    void refine_once_nolock() const; // Algebraic bisection step
};

} // namespace detail

// A base q in (1, M+1] with, when available, an exact representation that
// makes sign and equality queries on polynomial expressions in q decidable.
class Base {
public:
    static Base rational(int M, const Rat& q);
    // pmin need not be normalized; it is made squarefree/monic here. iso must
    // bracket exactly one root (verified by a sign change after normalizing).
    static Base algebraic(int M, const Poly& pmin, const RationalInterval& iso);
    static Base interval_only(int M, const RationalInterval& q);

    int M() const { return impl_->M; }
    bool is_exact() const { return impl_->kind != detail::BaseImpl::Kind::IntervalOnly; }
    bool is_rational() const { return impl_->kind == detail::BaseImpl::Kind::Rational; }
    BaseEnclosure enclosure() const;
    // Shrink the algebraic isolating interval until width <= eps (no-op otherwise).
    void refine_to(const Rat& eps) const;

    QNum value_of(const Rat& x) const;
    QNum q() const;
    QNum zero() const;

    const std::shared_ptr<const detail::BaseImpl>& impl() const { return impl_; }

private:
    explicit Base(std::shared_ptr<const detail::BaseImpl> p) : impl_(std::move(p)) {}
    std::shared_ptr<const detail::BaseImpl> impl_;
};

// Exact value tied to a base: a rational, a polynomial in q reduced modulo
// the defining polynomial, or a fallback interval. An optional positive
// denominator D(q) supports values of the form N(q)/D(q) under the
// operations used by the expansion engine (multiply by q, subtract digits).
class QNum {
public:
    QNum() = default;

    QNum mul_q() const;
    QNum sub_int(long c) const;
    QNum add(const QNum& o) const; // requires equal denominators
    QNum sub(const QNum& o) const;
    QNum neg() const;
    QNum scale(const Rat& k) const;

    // Certified sign; exact bases always resolve, interval bases may not.
    std::optional<int> sign() const;
    int sign_exact() const; // throws PrecisionExhausted on nullopt

    RationalInterval enclosure() const;
    bool is_exact() const;
    std::string key() const; // canonical form for cycle detection (exact only)

    static QNum from_rat(const std::shared_ptr<const detail::BaseImpl>& b, const Rat& x);
    // Interval-only bases: wrap an already-computed enclosure.
    static QNum from_interval(const std::shared_ptr<const detail::BaseImpl>& b,
                              const RationalInterval& x);
    static QNum base_value(const std::shared_ptr<const detail::BaseImpl>& b);
    // N(q)/D(q) with D certified positive on the base enclosure.
    static QNum make_fraction(const std::shared_ptr<const detail::BaseImpl>& b, const Poly& num,
                              const Poly& den);

private:
    std::shared_ptr<const detail::BaseImpl> b_;
    detail::QVal num_{Rat(0)};
    std::optional<detail::QVal> den_;

    detail::QVal reduce(const detail::QVal& v) const;
    friend class Base;
};

// Certified sign of poly(q*) where q* is the base value (exact bases only);
// fully decidable: zero is detected via gcd with the defining polynomial.
int poly_sign_at_base(const Base& b, const Poly& p);

} // namespace qexp
