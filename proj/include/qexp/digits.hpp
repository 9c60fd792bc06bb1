#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qexp {

// Finite digit word over {0,...,alphabet_max}. The empty word is allowed.
struct DigitWord {
    std::vector<int> digits;
    int alphabet_max = 1;

    DigitWord() = default;
    DigitWord(std::vector<int> d, int m);

    std::size_t size() const { return digits.size(); }
    bool empty() const { return digits.empty(); }
    int operator[](std::size_t i) const { return digits[i]; }
    bool operator==(const DigitWord& o) const {
        return alphabet_max == o.alphabet_max && digits == o.digits;
    }
    std::string str() const;
};

enum class Ordering { Less, Equal, Greater };

// Eventually periodic digit sequence pre . per^inf, stored canonically:
// the period is primitive and the preperiod is minimal (its last digit
// differs from the corresponding digit of the rotated period). Finite
// sequences use the period "0".
class EventuallyPeriodicSeq {
public:
    EventuallyPeriodicSeq(DigitWord pre, DigitWord per);
    static EventuallyPeriodicSeq constant(int digit, int alphabet_max);
    static EventuallyPeriodicSeq parse(const std::string& text, int alphabet_max);

    int alphabet_max() const { return m_; }
    const DigitWord& preperiod() const { return pre_; }
    const DigitWord& period() const { return per_; }
    std::size_t preperiod_len() const { return pre_.size(); }
    std::size_t period_len() const { return per_.size(); }

    int at(std::size_t i) const { // 0-based
        if (i < pre_.size()) return pre_[i];
        return per_[(i - pre_.size()) % per_.size()];
    }

    bool operator==(const EventuallyPeriodicSeq& o) const {
        return m_ == o.m_ && pre_ == o.pre_ && per_ == o.per_;
    }
    bool operator<(const EventuallyPeriodicSeq& o) const; // structural key order

    std::string str() const; // "pre(per)"

private:
    DigitWord pre_, per_;
    int m_;
    void canonicalize();
};

Ordering lex_compare(const EventuallyPeriodicSeq& s, const EventuallyPeriodicSeq& t);
EventuallyPeriodicSeq reflect(const EventuallyPeriodicSeq& s);
EventuallyPeriodicSeq shift(const EventuallyPeriodicSeq& s, std::size_t n);

// shift(s,n) <= s for every n >= 0, decided exactly over one period cycle.
bool is_self_admissible(const EventuallyPeriodicSeq& s);

// Truncated Thue-Morse digits t_1..t_n (t_i = parity of ones in binary i).
DigitWord thue_morse(std::size_t n);

// First n digits of the quasi-greedy expansion of 1 in the smallest base
// where 1 has a unique expansion, for alphabet {0..M}.
DigitWord kl_sequence(int M, std::size_t n);

} // namespace qexp
