#pragma once

#include <gmpxx.h>

#include <string>

namespace qexp {

using Rat = mpq_class;
using Int = mpz_class;

// Parses "p/q", integer, plain decimal ("1.79") or scientific ("1e-8", "2.5e3")
// notation into an exact rational. Throws DomainError on malformed input.
Rat parse_rational(const std::string& text);

// Canonical "p/q" form; integers print without the "/1".
std::string rat_to_string(const Rat& x);

// Decimal expansion with `digits` fractional digits, rounded toward -inf
// (round_up=false) or +inf (round_up=true) so enclosures stay outward.
std::string rat_to_decimal(const Rat& x, int digits, bool round_up);

Rat pow_rat(const Rat& base, long exp); // exp may be negative; base != 0 then

inline int sign_of(const Rat& x) { return sgn(x); }

// mpq_class(num, den) keeps the raw pair; GMP arithmetic and comparisons
// require canonical form, so all two-argument constructions go through here.
template <typename N, typename D> Rat make_rat(const N& num, const D& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

} // namespace qexp
