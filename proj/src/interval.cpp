#include "qexp/interval.hpp"
#include <mutex>

#include "qexp/errors.hpp"

#include <algorithm>

namespace qexp {

RationalInterval::RationalInterval(const Rat& lo, const Rat& hi) : lo_(lo), hi_(hi) {
    if (lo_ > hi_) throw DomainError("interval endpoints out of order");
}

std::optional<int> RationalInterval::sign() const {
    if (lo_ > 0) return 1;
    if (hi_ < 0) return -1;
    if (lo_ == 0 && hi_ == 0) return 0;
    return std::nullopt;
}

RationalInterval RationalInterval::operator+(const RationalInterval& o) const {
    return RationalInterval(lo_ + o.lo_, hi_ + o.hi_);
}

RationalInterval RationalInterval::operator-(const RationalInterval& o) const {
    return RationalInterval(lo_ - o.hi_, hi_ - o.lo_);
}

RationalInterval RationalInterval::operator*(const RationalInterval& o) const {
    Rat a = lo_ * o.lo_, b = lo_ * o.hi_, c = hi_ * o.lo_, d = hi_ * o.hi_;
    Rat lo = std::min(std::min(a, b), std::min(c, d));
    Rat hi = std::max(std::max(a, b), std::max(c, d));
    return RationalInterval(lo, hi);
}

RationalInterval RationalInterval::recip() const {
    if (contains_zero()) throw DomainError("reciprocal of interval containing zero");
    return RationalInterval(1 / hi_, 1 / lo_);
}

RationalInterval RationalInterval::pow(unsigned long n) const {
    if (n == 0) return RationalInterval(Rat(1));
    Rat a = pow_rat(lo_, static_cast<long>(n));
    Rat b = pow_rat(hi_, static_cast<long>(n));
    if (n % 2 == 1 || lo_ >= 0) return RationalInterval(std::min(a, b), std::max(a, b));
    if (hi_ <= 0) return RationalInterval(std::min(a, b), std::max(a, b));
    return RationalInterval(Rat(0), std::max(a, b)); // even power across zero
}

RationalInterval RationalInterval::hull(const RationalInterval& a, const RationalInterval& b) {
    return RationalInterval(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

std::string RationalInterval::str() const {
    return "[" + rat_to_string(lo_) + ", " + rat_to_string(hi_) + "]";
}

namespace {

// ln(y) for y in [1,2) via 2*atanh((y-1)/(y+1)); u <= 1/3 so the series
// converges geometrically with ratio u^2 <= 1/9.
RationalInterval ln_reduced(const Rat& y, const Rat& eps) {
    Rat u = (y - 1) / (y + 1);
    if (u == 0) return RationalInterval(Rat(0));
    Rat sum = 0, term = u, u2 = u * u;
    unsigned long k = 1;
    for (;;) {
        sum += term / Rat(static_cast<long>(k));
        term *= u2;
        k += 2;
        // tail < term/k * 1/(1-u^2)
        Rat tail = (term / Rat(static_cast<long>(k))) / (1 - u2);
        if (2 * tail <= eps) {
            Rat lo = 2 * sum, hi = 2 * (sum + tail);
            return RationalInterval(lo, hi);
        }
    }
}

RationalInterval ln2(const Rat& eps) {
    static std::mutex mu;
    static RationalInterval cached = ln_reduced(Rat(2), make_rat(1, 1000000000000000000L));
    std::lock_guard<std::mutex> lk(mu);
    if (cached.width() > eps) cached = ln_reduced(Rat(2), eps);
    return cached;
}

} // namespace

RationalInterval ln_enclosure(const Rat& x, const Rat& eps) {
    if (x <= 0) throw DomainError("ln of non-positive value");
    if (x < 1) {
        RationalInterval r = ln_enclosure(Rat(1 / x), eps);
        return -r;
    }
    // scale into [1,2) by powers of two
    Rat y = x;
    long m = 0;
    while (y >= 2) {
        y /= 2;
        ++m;
    }
    Rat sub_eps = eps / (2 + m);
    RationalInterval r = ln_reduced(y, sub_eps);
    if (m > 0) {
        RationalInterval l2 = ln2(sub_eps);
        r = r + RationalInterval(Rat(m) * l2.lo(), Rat(m) * l2.hi());
    }
    return r;
}

RationalInterval ln_enclosure(const Int& n, const Rat& eps) {
    return ln_enclosure(Rat(n), eps);
}

} // namespace qexp
