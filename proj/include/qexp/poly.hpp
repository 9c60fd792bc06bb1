#pragma once

#include "qexp/interval.hpp"
#include "qexp/rational.hpp"

#include <vector>

namespace qexp {

// Dense univariate polynomial over the rationals; coeffs[i] multiplies x^i.
// Trailing zero coefficients are trimmed so degree() is exact.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs);
    static Poly constant(const Rat& c);
    static Poly monomial(const Rat& c, std::size_t deg);

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const Rat& lead() const { return c_.back(); }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

    Rat eval(const Rat& x) const;
    RationalInterval eval_interval(const RationalInterval& x) const;

    Poly derivative() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(const Rat& k) const;
    Poly monic() const; // divide by leading coefficient

    // Remainder of *this modulo a monic divisor.
    Poly rem_monic(const Poly& monic_divisor) const;

    // Coefficients reversed: x^deg * p(1/x).
    Poly reversed() const;

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    std::string str() const;

private:
    std::vector<Rat> c_;
    void trim();
};

Poly poly_gcd(const Poly& a, const Poly& b); // monic gcd
Poly squarefree_part(const Poly& p);

} // namespace qexp
