#include "qexp/digits.hpp"

#include "qexp/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace qexp {

DigitWord::DigitWord(std::vector<int> d, int m) : digits(std::move(d)), alphabet_max(m) {
    if (m < 0) throw DomainError("alphabet max must be non-negative");
    for (int c : digits)
        if (c < 0 || c > m)
            throw DigitRangeError("digit " + std::to_string(c) + " outside {0,...," +
                                  std::to_string(m) + "}");
}

std::string DigitWord::str() const {
    std::ostringstream os;
    if (alphabet_max <= 9) {
        for (int c : digits) os << c;
    } else {
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (i) os << ',';
            os << digits[i];
        }
    }
    return os.str();
}

EventuallyPeriodicSeq::EventuallyPeriodicSeq(DigitWord pre, DigitWord per)
    : pre_(std::move(pre)), per_(std::move(per)), m_(pre_.alphabet_max) {
    if (per_.empty()) throw DomainError("period must be nonempty");
    if (pre_.alphabet_max != per_.alphabet_max)
        throw DomainError("preperiod/period alphabet mismatch");
    canonicalize();
}

void EventuallyPeriodicSeq::canonicalize() {
    // primitive period: shortest d | len with per = (per[0..d))^{len/d}
    std::size_t len = per_.size();
    for (std::size_t d = 1; d <= len; ++d) {
        if (len % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < len && ok; ++i)
            if (per_.digits[i] != per_.digits[i % d]) ok = false;
        if (ok) {
            per_.digits.resize(d);
            break;
        }
    }
    // minimal preperiod: absorb trailing digits equal to the period's last digit
    while (!pre_.empty() && pre_.digits.back() == per_.digits.back()) {
        pre_.digits.pop_back();
        std::rotate(per_.digits.begin(), per_.digits.end() - 1, per_.digits.end());
    }
}

EventuallyPeriodicSeq EventuallyPeriodicSeq::constant(int digit, int alphabet_max) {
    return EventuallyPeriodicSeq(DigitWord({}, alphabet_max), DigitWord({digit}, alphabet_max));
}

EventuallyPeriodicSeq EventuallyPeriodicSeq::parse(const std::string& text, int alphabet_max) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw DomainError("sequence text must look like \"pre(period)\": '" + text + "'");
    auto parse_digits = [&](const std::string& part) {
        std::vector<int> out;
        if (part.find(',') != std::string::npos || alphabet_max > 9) {
            std::istringstream is(part);
            std::string tok;
            while (std::getline(is, tok, ','))
                if (!tok.empty()) out.push_back(std::stoi(tok));
        } else {
            for (char c : part) {
                if (c < '0' || c > '9') throw DomainError("bad digit '" + std::string(1, c) + "'");
                out.push_back(c - '0');
            }
        }
        return out;
    };
    DigitWord pre(parse_digits(text.substr(0, open)), alphabet_max);
    DigitWord per(parse_digits(text.substr(open + 1, close - open - 1)), alphabet_max);
    return EventuallyPeriodicSeq(std::move(pre), std::move(per));
}

bool EventuallyPeriodicSeq::operator<(const EventuallyPeriodicSeq& o) const {
    if (pre_.digits != o.pre_.digits) return pre_.digits < o.pre_.digits;
    return per_.digits < o.per_.digits;
}

std::string EventuallyPeriodicSeq::str() const {
    return pre_.str() + "(" + per_.str() + ")";
}

Ordering lex_compare(const EventuallyPeriodicSeq& s, const EventuallyPeriodicSeq& t) {
    if (s.alphabet_max() != t.alphabet_max())
        throw DomainError("lex_compare: alphabet mismatch");
    std::size_t bound = s.preperiod_len() + t.preperiod_len() +
                        std::lcm(s.period_len(), t.period_len());
    for (std::size_t i = 0; i < bound; ++i) {
        int a = s.at(i), b = t.at(i);
        if (a < b) return Ordering::Less;
        if (a > b) return Ordering::Greater;
    }
    return Ordering::Equal;
}

EventuallyPeriodicSeq reflect(const EventuallyPeriodicSeq& s) {
    int m = s.alphabet_max();
    auto flip = [m](const DigitWord& w) {
        std::vector<int> d;
        d.reserve(w.size());
        for (int c : w.digits) d.push_back(m - c);
        return DigitWord(d, m);
    };
    return EventuallyPeriodicSeq(flip(s.preperiod()), flip(s.period()));
}

EventuallyPeriodicSeq shift(const EventuallyPeriodicSeq& s, std::size_t n) {
    int m = s.alphabet_max();
    std::vector<int> pre;
    for (std::size_t i = n; i < s.preperiod_len(); ++i) pre.push_back(s.at(i));
    std::size_t per_len = s.period_len();
    std::size_t start = n <= s.preperiod_len() ? 0 : (n - s.preperiod_len()) % per_len;
    std::vector<int> per;
    for (std::size_t i = 0; i < per_len; ++i)
        per.push_back(s.period()[(start + i) % per_len]);
    return EventuallyPeriodicSeq(DigitWord(pre, m), DigitWord(per, m));
}

bool is_self_admissible(const EventuallyPeriodicSeq& s) {
    std::size_t span = s.preperiod_len() + s.period_len();
    for (std::size_t n = 1; n <= span; ++n)
        if (lex_compare(shift(s, n), s) == Ordering::Greater) return false;
    return true;
}

DigitWord thue_morse(std::size_t n) {
    std::vector<int> d;
    d.reserve(n);
    for (std::size_t i = 1; i <= n; ++i)
        d.push_back(static_cast<int>(std::popcount(i) & 1));
    return DigitWord(d, 1);
}

DigitWord kl_sequence(int M, std::size_t n) {
    if (M < 1) throw DomainError("alphabet max must be >= 1");
    DigitWord tau = thue_morse(n);
    auto tau_at = [&](std::size_t i) { return i == 0 ? 0 : tau[i - 1]; }; // tau_0 = 0
    std::vector<int> d;
    d.reserve(n);
    int k = M / 2;
    for (std::size_t i = 1; i <= n; ++i) {
        if (M % 2 == 1)
            d.push_back(k + tau_at(i));
        else
            d.push_back(k + tau_at(i) - tau_at(i - 1));
    }
    return DigitWord(d, M);
}

} // namespace qexp
