#include "qexp/rational.hpp"

#include "qexp/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace qexp {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// "123", "1.79" -> exact rational; no sign, no exponent.
Rat parse_decimal_core(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        if (!all_digits(s)) throw DomainError("malformed number: '" + s + "'");
        return Rat(Int(s, 10));
    }
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
        throw DomainError("malformed number: '" + s + "'");
    Rat r(Int(ip, 10));
    if (!fp.empty()) {
        Int num(fp, 10), den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        r += make_rat(num, den);
    }
    return r;
}

} // namespace

Rat parse_rational(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw DomainError("empty number");
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty()) throw DomainError("malformed number: '" + text + "'");

    Rat value;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw DomainError("malformed rational: '" + text + "'");
        Int d(den, 10);
        if (d == 0) throw DomainError("zero denominator: '" + text + "'");
        value = make_rat(Int(num, 10), d);
        value.canonicalize();
    } else {
        auto epos = s.find_first_of("eE");
        long expo = 0;
        std::string mant = s;
        if (epos != std::string::npos) {
            mant = s.substr(0, epos);
            std::string es = s.substr(epos + 1);
            if (es.empty()) throw DomainError("malformed exponent: '" + text + "'");
            expo = std::strtol(es.c_str(), nullptr, 10);
        }
        value = parse_decimal_core(mant);
        if (expo != 0) {
            Int p10 = 1;
            for (long i = 0; i < (expo < 0 ? -expo : expo); ++i) p10 *= 10;
            if (expo > 0)
                value *= Rat(p10);
            else
                value /= Rat(p10);
        }
    }
    if (neg) value = -value;
    value.canonicalize();
    return value;
}

std::string rat_to_string(const Rat& x) {
    Rat c = x;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string rat_to_decimal(const Rat& x, int digits, bool round_up) {
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Rat scaled = x * Rat(scale);
    Int num = scaled.get_num(), den = scaled.get_den();
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t()); // floor
    if (round_up && r != 0) q += 1;
    bool neg = q < 0;
    Int a = neg ? Int(-q) : q;
    std::string ds = a.get_str();
    while (static_cast<int>(ds.size()) <= digits) ds = "0" + ds;
    std::string ip = ds.substr(0, ds.size() - digits);
    std::string fp = ds.substr(ds.size() - digits);
    std::string out = (neg ? "-" : "") + ip;
    if (digits > 0) out += "." + fp;
    return out;
}

Rat pow_rat(const Rat& base, long exp) {
    if (exp == 0) return Rat(1);
    bool inv = exp < 0;
    unsigned long e = static_cast<unsigned long>(inv ? -exp : exp);
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
    r.canonicalize();
    if (inv) {
        if (r == 0) throw DomainError("pow_rat: negative power of zero");
        r = 1 / r;
    }
    return r;
}

} // namespace qexp
