#include "qexp/poly.hpp"

#include "qexp/errors.hpp"

#include <algorithm>
#include <sstream>

namespace qexp {

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly::Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rat& c) { return Poly(std::vector<Rat>{c}); }

Poly Poly::monomial(const Rat& c, std::size_t deg) {
    std::vector<Rat> v(deg + 1, Rat(0));
    v[deg] = c;
    return Poly(std::move(v));
}

Rat Poly::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

RationalInterval Poly::eval_interval(const RationalInterval& x) const {
    RationalInterval acc{Rat(0)};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * x + RationalInterval(*it);
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rat> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rat(static_cast<long>(i));
    return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    std::vector<Rat> r(c_);
    for (auto& x : r) x = -x;
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::scaled(const Rat& k) const {
    std::vector<Rat> r(c_);
    for (auto& x : r) x *= k;
    return Poly(std::move(r));
}

Poly Poly::monic() const {
    if (is_zero()) throw DomainError("monic of zero polynomial");
    return scaled(1 / lead());
}

Poly Poly::rem_monic(const Poly& d) const {
    if (d.is_zero() || d.lead() != 1) throw DomainError("rem_monic needs monic divisor");
    std::vector<Rat> r(c_);
    long dd = d.degree();
    while (static_cast<long>(r.size()) - 1 >= dd) {
        if (r.back() == 0) {
            r.pop_back();
            continue;
        }
        Rat f = r.back();
        std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dd);
        for (long i = 0; i <= dd; ++i) r[shift + static_cast<std::size_t>(i)] -= f * d.c_[static_cast<std::size_t>(i)];
        // leading term now cancels exactly
    }
    return Poly(std::move(r));
}

Poly Poly::reversed() const {
    std::vector<Rat> r(c_.rbegin(), c_.rend());
    return Poly(std::move(r));
}

std::string Poly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (i + 1 < c_.size() && c_[i] > 0) os << "+";
        os << rat_to_string(c_[i]);
        if (i >= 1) os << "*q^" << i;
    }
    return os.str();
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x.rem_monic(y.monic());
        x = y;
        y = r;
    }
    if (x.is_zero()) return x;
    return x.monic();
}

Poly squarefree_part(const Poly& p) {
    if (p.is_zero() || p.degree() == 0) return p;
    Poly g = poly_gcd(p, p.derivative());
    if (g.is_zero() || g.degree() == 0) return p;
    // exact division p / g via repeated leading-term elimination
    Poly num = p, q;
    Poly gm = g.monic();
    std::vector<Rat> quot(static_cast<std::size_t>(p.degree() - g.degree()) + 1, Rat(0));
    std::vector<Rat> r(num.coeffs());
    long dd = gm.degree();
    while (static_cast<long>(r.size()) - 1 >= dd) {
        if (r.back() == 0) {
            r.pop_back();
            continue;
        }
        Rat f = r.back();
        std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dd);
        quot[shift] = f;
        for (long i = 0; i <= dd; ++i)
            r[shift + static_cast<std::size_t>(i)] -= f * gm.coeffs()[static_cast<std::size_t>(i)];
    }
    return Poly(std::move(quot));
}

} // namespace qexp
