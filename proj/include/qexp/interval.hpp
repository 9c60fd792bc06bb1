#pragma once

#include "qexp/rational.hpp"

#include <optional>
#include <string>

namespace qexp {

// Closed interval [lo, hi] with exact rational endpoints. Arithmetic is exact,
// hence automatically outward-conservative: the image of member points is
// contained in the result.
class RationalInterval {
public:
    RationalInterval() : lo_(0), hi_(0) {}
    explicit RationalInterval(const Rat& point) : lo_(point), hi_(point) {}
    RationalInterval(const Rat& lo, const Rat& hi);

    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }
    Rat width() const { return hi_ - lo_; }
    Rat mid() const { return (lo_ + hi_) / 2; }
    bool is_point() const { return lo_ == hi_; }

    bool contains(const Rat& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const RationalInterval& other) const {
        return lo_ <= other.lo_ && other.hi_ <= hi_;
    }
    bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }
    bool intersects(const RationalInterval& o) const {
        return lo_ <= o.hi_ && o.lo_ <= hi_;
    }

    // Certified sign: +1 if entirely positive, -1 if entirely negative,
    // 0 if identically zero, nullopt if the interval straddles zero.
    std::optional<int> sign() const;

    RationalInterval operator-() const { return RationalInterval(-hi_, -lo_); }
    RationalInterval operator+(const RationalInterval& o) const;
    RationalInterval operator-(const RationalInterval& o) const;
    RationalInterval operator*(const RationalInterval& o) const;
    RationalInterval recip() const; // requires 0 outside the interval
    RationalInterval operator/(const RationalInterval& o) const { return *this * o.recip(); }
    RationalInterval pow(unsigned long n) const;

    static RationalInterval hull(const RationalInterval& a, const RationalInterval& b);

    bool operator==(const RationalInterval& o) const {
        return lo_ == o.lo_ && hi_ == o.hi_;
    }

    std::string str() const;

private:
    Rat lo_, hi_;
};

inline RationalInterval operator+(const Rat& a, const RationalInterval& b) {
    return RationalInterval(a) + b;
}
inline RationalInterval operator*(const Rat& a, const RationalInterval& b) {
    return RationalInterval(a) * b;
}

// Certified sign of a truncated series evaluation.
struct SignResult {
    enum class Kind { Positive, Negative, ContainsZero } kind;
    Rat width; // achieved enclosure width when ContainsZero

    static SignResult positive() { return {Kind::Positive, Rat(0)}; }
    static SignResult negative() { return {Kind::Negative, Rat(0)}; }
    static SignResult contains_zero(const Rat& w) { return {Kind::ContainsZero, w}; }
    bool is_positive() const { return kind == Kind::Positive; }
    bool is_negative() const { return kind == Kind::Negative; }
    bool is_contains_zero() const { return kind == Kind::ContainsZero; }
};

// Enclosure of ln(x) for x > 0, with absolute error at most eps.
RationalInterval ln_enclosure(const Rat& x, const Rat& eps);
RationalInterval ln_enclosure(const Int& n, const Rat& eps);

} // namespace qexp
