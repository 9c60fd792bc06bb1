#include "qexp/constants.hpp"

#include "qexp/series.hpp"

#include <map>
#include <mutex>

namespace qexp {

DigitWord alpha_of_q(const Base& base, std::size_t n) { return alpha_prefix(base, n); }

namespace {

// Certified bisection for the unique root of pi_q(s) = 1 in (1, M+1], using
// the positive-denominator numerator polynomial so signs are exact.
struct PiRoot {
    RationalInterval bracket;
    bool exact = false; // bracket collapsed onto a rational root
};

PiRoot solve_pi_equals_one(const EventuallyPeriodicSeq& s, const Rat& eps) {
    int M = s.alphabet_max();
    Poly num = pi_minus_rat_numerator(s, Rat(1)); // sign(pi - 1) for q > 1
    Rat b = Rat(M + 1);
    Rat fb = num.eval(b);
    if (fb == 0) return {RationalInterval(b), true};
    if (fb > 0) throw DomainError("pi_q(s) > 1 at q = M+1; no root in range");
    // pi -> infinity as q -> 1+ for infinite s, so walk left until positive
    Rat a = 1 + Rat(M) / 2;
    for (int guard = 0;; ++guard) {
        Rat fa = num.eval(a);
        if (fa == 0) return {RationalInterval(a), true};
        if (fa > 0) break;
        a = 1 + (a - 1) / 2;
        if (guard > 256) throw DomainError("failed to bracket pi_q(s) = 1");
    }
    while (b - a > eps) {
        Rat mid = (a + b) / 2;
        Rat fm = num.eval(mid);
        if (fm == 0) return {RationalInterval(mid), true};
        if (fm > 0)
            a = mid;
        else
            b = mid;
    }
    return {RationalInterval(a, b), false};
}

} // namespace

Base q_from_alpha(const EventuallyPeriodicSeq& s, const Rat& precision) {
    if (precision <= 0) throw DomainError("precision must be positive");
    bool all_zero = true;
    for (std::size_t j = 0; j < s.period_len(); ++j)
        if (s.period()[j] != 0) all_zero = false;
    if (all_zero) throw AdmissibilityError("finite sequence has no base with pi_q = 1", 0);
    std::size_t span = s.preperiod_len() + s.period_len();
    for (std::size_t n = 1; n <= span; ++n)
        if (lex_compare(shift(s, n), s) == Ordering::Greater)
            throw AdmissibilityError("shifted tail exceeds the sequence", n);

    PiRoot root = solve_pi_equals_one(s, precision);
    int M = s.alphabet_max();
    if (root.exact) return Base::rational(M, root.bracket.lo());
    Poly num = pi_minus_rat_numerator(s, Rat(1));
    Base b = Base::algebraic(M, num, root.bracket);
    b.refine_to(precision);
    return b;
}

namespace {

std::mutex kl_mutex;
std::map<std::pair<int, std::string>, RationalInterval> kl_memo;

} // namespace

RationalInterval komornik_loreti(int M, const Rat& precision) {
    if (M < 1) throw DomainError("alphabet max must be >= 1");
    if (precision <= 0) throw DomainError("precision must be positive");
    std::pair<int, std::string> key{M, rat_to_string(precision)};
    {
        std::lock_guard<std::mutex> lk(kl_mutex);
        auto it = kl_memo.find(key);
        if (it != kl_memo.end()) return it->second;
    }
    Rat inner = precision / 8;
    RationalInterval bracket(Rat(1), Rat(M + 1));
    for (std::size_t n = 16;; n *= 2) {
        DigitWord prefix = kl_sequence(M, n);
        EventuallyPeriodicSeq lo_seq(prefix, DigitWord({0}, M));
        EventuallyPeriodicSeq hi_seq(prefix, DigitWord({M}, M));
        PiRoot lo = solve_pi_equals_one(lo_seq, inner);
        PiRoot hi = solve_pi_equals_one(hi_seq, inner);
        bracket = RationalInterval(lo.bracket.lo(), hi.bracket.hi());
        if (bracket.width() <= precision) break;
        if (n > 4096) throw CertificationFailure("Komornik-Loreti bracket failed to close");
    }
    std::lock_guard<std::mutex> lk(kl_mutex);
    kl_memo.emplace(key, bracket);
    return bracket;
}

Base komornik_loreti_base(int M, const Rat& precision) {
    return Base::interval_only(M, komornik_loreti(M, precision));
}

Base golden_ratio_base(int M) {
    if (M < 1) throw DomainError("alphabet max must be >= 1");
    int k = M / 2;
    if (M % 2 == 0) return Base::rational(M, Rat(k + 1));
    // positive root of q^2 - (k+1)q - (k+1)
    Poly p(std::vector<Rat>{Rat(-(k + 1)), Rat(-(k + 1)), Rat(1)});
    Rat lo = k >= 1 ? Rat(k + 1) : make_rat(3, 2);
    Base b = Base::algebraic(M, p, RationalInterval(lo, Rat(k + 2)));
    b.refine_to(make_rat(1, Int("1000000000000")));
    return b;
}

BaseEnclosure golden_ratio_general(int M) { return golden_ratio_base(M).enclosure(); }

VMembershipReport v_membership_check(const Base& base, std::size_t depth) {
    const int M = base.M();
    for (std::size_t i = 0; i <= depth; ++i) {
        bool upper_open = i > 0; // shift 0 is trivially equal to alpha
        bool lower_open = true;
        for (std::size_t j = 1; i + j <= depth; ++j) {
            if (!upper_open && !lower_open) break;
            int aij = alpha_digit(base, i + j);
            int aj = alpha_digit(base, j);
            if (upper_open) {
                if (aij > aj) return {VMembershipReport::Kind::ViolatedAtIndex, i};
                if (aij < aj) upper_open = false;
            }
            if (lower_open) {
                int rj = M - aj;
                if (aij < rj) return {VMembershipReport::Kind::ViolatedAtIndex, i};
                if (aij > rj) lower_open = false;
            }
        }
    }
    return {VMembershipReport::Kind::ConsistentToDepth, depth};
}

Base tribonacci_base() {
    Poly p(std::vector<Rat>{Rat(-1), Rat(-1), Rat(-1), Rat(1)});
    return Base::algebraic(1, p, RationalInterval(make_rat(11, 6), make_rat(15, 8)));
}

Base named_base(const std::string& name, int M, const Rat& precision) {
    if (name == "kl") return komornik_loreti_base(M, precision);
    if (name == "gr" || name == "golden" || (name == "phi" && M == 1)) {
        Base b = golden_ratio_base(M);
        b.refine_to(precision);
        return b;
    }
    if (name == "tribonacci") {
        if (M != 1) throw DomainError("tribonacci base is defined for M = 1");
        Base b = tribonacci_base();
        b.refine_to(precision);
        return b;
    }
    return Base::rational(M, parse_rational(name));
}

} // namespace qexp
