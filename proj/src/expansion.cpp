#include "qexp/expansion.hpp"

#include "qexp/series.hpp"

#include <algorithm>
#include <numeric>

namespace qexp {

namespace {

enum class Mode { Greedy, Quasi, Lazy };

// Largest digit c with t - c >= 0 (greedy) or > 0 (quasi); smallest c with
// (t-c)(q-1) <= M (lazy). Returns nullopt when the enclosure cannot decide.
std::optional<int> pick_digit(Mode mode, const QNum& t, int M) {
    if (mode == Mode::Lazy) {
        for (int c = 0; c <= M; ++c) {
            QNum u = t.sub_int(c);
            QNum v = u.mul_q().sub(u).sub_int(M); // u(q-1) - M
            auto s = v.sign();
            if (!s) return std::nullopt;
            if (*s <= 0) return c;
        }
        return std::nullopt; // x outside I_q; caller validated, unreachable
    }
    for (int c = M; c >= 0; --c) {
        auto s = t.sub_int(c).sign();
        if (!s) return std::nullopt;
        if (mode == Mode::Greedy ? *s >= 0 : *s > 0) return c;
    }
    return std::nullopt;
}

// Fast path for point-rational bases.
int pick_digit_rat(Mode mode, const Rat& t, const Rat& q, int M) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    long f = fl.get_si();
    switch (mode) {
    case Mode::Greedy: return static_cast<int>(std::min<long>(M, std::max<long>(0, f)));
    case Mode::Quasi: {
        long c = (t.get_den() == 1) ? t.get_num().get_si() - 1 : f;
        return static_cast<int>(std::min<long>(M, std::max<long>(0, c)));
    }
    case Mode::Lazy: {
        Rat bound = Rat(M) / (q - 1);
        Rat d = t - bound;
        Int cl;
        mpz_cdiv_q(cl.get_mpz_t(), d.get_num_mpz_t(), d.get_den_mpz_t());
        long c = std::max<long>(0, cl.get_si());
        return static_cast<int>(std::min<long>(M, c));
    }
    }
    return 0;
}

void validate_in_iq(const Base& base, const QNum& x, bool strict_positive) {
    auto s0 = x.sign();
    if (s0 && *s0 < 0) throw DomainError("x below 0, outside I_q");
    if (strict_positive && s0 && *s0 == 0)
        throw DomainError("quasi-greedy expansion requires x > 0");
    QNum u = x.mul_q().sub(x).sub_int(base.M()); // x(q-1) - M
    auto s1 = u.sign();
    if (s1 && *s1 > 0) throw DomainError("x above M/(q-1), outside I_q");
    if (!s0 || !s1) throw DomainError("cannot certify x inside I_q over the enclosure");
    if (strict_positive && *s0 <= 0)
        throw DomainError("quasi-greedy expansion requires x > 0");
}

DigitWord expand(Mode mode, const Base& base_in, const RationalInterval& x, long n) {
    if (n < 1) throw DomainError("expansion length must be >= 1");
    Base base = base_in;
    if (!x.is_point() && base.is_exact())
        base = Base::interval_only(base_in.M(), base_in.enclosure().q);
    const int M = base.M();

    if (base.is_rational() && x.is_point()) {
        Rat q = base.enclosure().q.lo();
        Rat bound = Rat(M) / (q - 1);
        Rat r = x.lo();
        if (r < 0 || r > bound) throw DomainError("x outside I_q");
        if (mode == Mode::Quasi && r == 0) throw DomainError("quasi-greedy expansion requires x > 0");
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            Rat t = q * r;
            int c = pick_digit_rat(mode, t, q, M);
            out.push_back(c);
            r = t - c;
        }
        return DigitWord(out, M);
    }

    QNum r = x.is_point() ? base.value_of(x.lo())
                          : QNum::from_interval(base.impl(), x);
    validate_in_iq(base, r, mode == Mode::Quasi);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        QNum t = r.mul_q();
        auto c = pick_digit(mode, t, M);
        if (!c)
            throw PrecisionExhausted("digit undecidable over base enclosure",
                                     static_cast<std::size_t>(i));
        out.push_back(*c);
        r = t.sub_int(*c);
    }
    return DigitWord(out, M);
}

} // namespace

DigitWord greedy_expansion(const Base& base, const RationalInterval& x, long n) {
    return expand(Mode::Greedy, base, x, n);
}
DigitWord quasi_greedy_expansion(const Base& base, const RationalInterval& x, long n) {
    return expand(Mode::Quasi, base, x, n);
}
DigitWord lazy_expansion(const Base& base, const RationalInterval& x, long n) {
    return expand(Mode::Lazy, base, x, n);
}

SwitchRegion switch_region(const BaseEnclosure& base) {
    SwitchRegion out;
    const RationalInterval& q = base.q;
    // q^2 - q is increasing for q > 1/2, so its exact range uses the endpoints
    RationalInterval q2q(q.lo() * q.lo() - q.lo(), q.hi() * q.hi() - q.hi());
    for (int i = 1; i <= base.M; ++i) {
        Rat left = Rat(i) / q.hi();
        RationalInterval num(Rat(i - 1) * (q.lo() - 1) + base.M,
                             Rat(i - 1) * (q.hi() - 1) + base.M);
        Rat right = (num / q2q).hi();
        out.blocks.push_back({i, RationalInterval(left, right)});
    }
    return out;
}

DigitOptions digit_options_value(const Base& base, const QNum& x) {
    const int M = base.M();
    validate_in_iq(base, x, false);
    std::vector<int> feasible;
    for (int c = 0; c <= M; ++c) {
        QNum r = x.mul_q().sub_int(c);
        auto s1 = r.sign();
        QNum u = r.mul_q().sub(r).sub_int(M);
        auto s2 = u.sign();
        if (s1 && *s1 < 0) continue;
        if (s2 && *s2 > 0) continue;
        if (!s1 || !s2) return {true, {}};
        feasible.push_back(c);
    }
    if (feasible.size() > 2) return {true, {}}; // blocks overlap only for q <= q_GR
    return {false, feasible};
}

DigitOptions digit_options(const Base& base, const RationalInterval& x) {
    if (x.is_point() && base.is_exact()) return digit_options_value(base, base.value_of(x.lo()));
    Base view = base.is_exact() ? Base::interval_only(base.M(), base.enclosure().q) : base;
    QNum v = x.is_point() ? view.value_of(x.lo()) : QNum::from_interval(view.impl(), x);
    return digit_options_value(view, v);
}

namespace {

struct Enumerator {
    const Base& base;
    int M;
    long depth;
    const EnumerateOptions& opts;
    ExpansionTree& tree;
    std::vector<int> path;

    void record(const QNum& r, bool amb) {
        if (tree.paths.size() >= opts.max_paths) {
            tree.truncated = true;
            return;
        }
        tree.paths.push_back({DigitWord(path, M),
                              amb ? PathStatus::Ambiguous : PathStatus::Live, r.enclosure()});
        if (amb)
            ++tree.ambiguous_count;
        else
            ++tree.live_count;
    }

    void visit(const QNum& r, long d, bool amb) {
        if (tree.truncated) return;
        if (d == depth) {
            record(r, amb);
            return;
        }
        for (int c = 0; c <= M; ++c) {
            QNum r2 = r.mul_q().sub_int(c);
            auto s1 = r2.sign();
            if (s1 && *s1 < 0) continue;
            QNum u = r2.mul_q().sub(r2).sub_int(M);
            auto s2 = u.sign();
            if (s2 && *s2 > 0) continue;
            path.push_back(c);
            visit(r2, d + 1, amb || !s1 || !s2);
            path.pop_back();
        }
    }
};

// point-rational specialization (hot path for oracle-scale tests)
struct RatEnumerator {
    Rat q, bound;
    int M;
    long depth;
    const EnumerateOptions& opts;
    ExpansionTree& tree;
    std::vector<int> path;

    void visit(const Rat& r, long d) {
        if (tree.truncated) return;
        if (d == depth) {
            if (tree.paths.size() >= opts.max_paths) {
                tree.truncated = true;
                return;
            }
            tree.paths.push_back({DigitWord(path, M), PathStatus::Live,
                                  RationalInterval(r)});
            ++tree.live_count;
            return;
        }
        for (int c = 0; c <= M; ++c) {
            Rat r2 = q * r - c;
            if (r2 < 0) continue;
            if (r2 > bound) continue;
            path.push_back(c);
            visit(r2, d + 1);
            path.pop_back();
        }
    }
};

} // namespace

ExpansionTree enumerate_expansions_value(const Base& base, const QNum& x, long depth,
                                         const EnumerateOptions& opts) {
    if (depth < 1) throw DomainError("enumeration depth must be >= 1");
    validate_in_iq(base, x, false);
    ExpansionTree tree;
    tree.x = x.enclosure();
    tree.M = base.M();
    tree.q = base.enclosure().q;
    tree.depth = depth;
    Enumerator en{base, base.M(), depth, opts, tree, {}};
    en.visit(x, 0, false);
    return tree;
}

ExpansionTree enumerate_expansions(const Base& base, const RationalInterval& x, long depth,
                                   const EnumerateOptions& opts) {
    if (depth < 1) throw DomainError("enumeration depth must be >= 1");
    if (base.is_rational() && x.is_point()) {
        Rat q = base.enclosure().q.lo();
        Rat bound = Rat(base.M()) / (q - 1);
        if (x.lo() < 0 || x.lo() > bound) throw DomainError("x outside I_q");
        ExpansionTree tree;
        tree.x = x;
        tree.M = base.M();
        tree.q = RationalInterval(q);
        tree.depth = depth;
        RatEnumerator en{q, bound, base.M(), depth, opts, tree, {}};
        en.visit(x.lo(), 0);
        return tree;
    }
    Base b = base;
    if (!x.is_point() && base.is_exact())
        b = Base::interval_only(base.M(), base.enclosure().q);
    QNum v = x.is_point() ? b.value_of(x.lo()) : QNum::from_interval(b.impl(), x);
    return enumerate_expansions_value(b, v, depth, opts);
}

// --- alpha cache -------------------------------------------------------------

namespace {

// one quasi-greedy step under the base's mutex; returns false when the
// enclosure cannot certify the next digit
bool alpha_step(const detail::BaseImpl& impl, detail::AlphaCache& a) {
    QNum t = a.rem->mul_q();
    int chosen = -1;
    for (int c = impl.M; c >= 0; --c) {
        auto s = t.sub_int(c).sign();
        if (!s) return false;
        if (*s > 0) {
            chosen = c;
            break;
        }
    }
    if (chosen < 0) return false;
    a.digits.push_back(chosen);
    *a.rem = t.sub_int(chosen);
    if (!a.cycle && a.rem->is_exact()) {
        std::string k = a.rem->key();
        auto it = a.seen.find(k);
        if (it != a.seen.end()) {
            a.cycle = true;
            a.cycle_start = it->second;
            a.cycle_len = a.digits.size() - it->second;
        } else {
            a.seen.emplace(std::move(k), a.digits.size());
        }
    }
    return true;
}

// ensures k digits available (or cycle covers them); lock held by caller
bool alpha_ensure(const Base& base, std::size_t k) {
    auto& impl = *base.impl();
    auto& a = impl.alpha;
    if (!a.rem) {
        a.rem = std::make_unique<QNum>(QNum::from_rat(base.impl(), Rat(1)));
        a.seen.emplace(a.rem->key(), 0);
    }
    while (a.digits.size() < k && !a.cycle) {
        if (a.exhausted) return false;
        if (!alpha_step(impl, a)) {
            a.exhausted = true;
            return false;
        }
    }
    return true;
}

int alpha_lookup(const detail::AlphaCache& a, std::size_t k) { // 1-based
    std::size_t i = k - 1;
    if (i < a.digits.size()) return a.digits[i];
    // beyond the stored digits only possible once the cycle is known
    std::size_t off = (i - a.cycle_start) % a.cycle_len;
    return a.digits[a.cycle_start + off];
}

} // namespace

int alpha_digit(const Base& base, std::size_t k) {
    if (k == 0) throw DomainError("alpha digit index is 1-based");
    auto& impl = *base.impl();
    std::lock_guard<std::mutex> lk(impl.alpha_mu);
    if (!alpha_ensure(base, k))
        throw PrecisionExhausted("alpha digit not certifiable over enclosure",
                                 impl.alpha.digits.size());
    return alpha_lookup(impl.alpha, k);
}

DigitWord alpha_prefix(const Base& base, std::size_t n) {
    std::vector<int> d;
    d.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) d.push_back(alpha_digit(base, k));
    return DigitWord(d, base.M());
}

std::optional<EventuallyPeriodicSeq> alpha_if_periodic(const Base& base, std::size_t within) {
    auto& impl = *base.impl();
    std::lock_guard<std::mutex> lk(impl.alpha_mu);
    alpha_ensure(base, within);
    auto& a = impl.alpha;
    if (!a.cycle) return std::nullopt;
    std::vector<int> pre(a.digits.begin(),
                         a.digits.begin() + static_cast<long>(a.cycle_start));
    std::vector<int> per(a.digits.begin() + static_cast<long>(a.cycle_start),
                         a.digits.begin() + static_cast<long>(a.cycle_start + a.cycle_len));
    return EventuallyPeriodicSeq(DigitWord(pre, base.M()), DigitWord(per, base.M()));
}

// --- uniqueness ---------------------------------------------------------------

namespace {

enum class TailCompare { Strict, Violated, Equal, Unknown };

// strict lexicographic comparison of the eventually periodic tail against
// the alpha digits, with cycle closure when alpha's orbit is known periodic
TailCompare compare_tail(const EventuallyPeriodicSeq& t, const Base& base, long depth) {
    auto& impl = *base.impl();
    for (long k = 1; k <= depth; ++k) {
        int a = alpha_digit(base, static_cast<std::size_t>(k));
        int tv = t.at(static_cast<std::size_t>(k - 1));
        if (tv < a) return TailCompare::Strict;
        if (tv > a) return TailCompare::Violated;
        std::lock_guard<std::mutex> lk(impl.alpha_mu);
        if (impl.alpha.cycle) {
            std::size_t k0 = std::max(t.preperiod_len(), impl.alpha.cycle_start);
            std::size_t l = std::lcm(t.period_len(), impl.alpha.cycle_len);
            if (static_cast<std::size_t>(k) >= k0 + l) return TailCompare::Equal;
        }
    }
    return TailCompare::Unknown;
}

} // namespace

UniquenessVerdict uniqueness_certificate(const EventuallyPeriodicSeq& s, const Base& base,
                                         long depth) {
    if (s.alphabet_max() > base.M())
        throw DigitRangeError("sequence alphabet exceeds base alphabet");
    const int M = base.M();
    std::size_t span = s.preperiod_len() + s.period_len();
    bool unknown = false;
    for (std::size_t n = 1; n <= span; ++n) {
        int guard = s.at(n - 1);
        if (guard < M) {
            switch (compare_tail(shift(s, n), base, depth)) {
            case TailCompare::Violated:
            case TailCompare::Equal:
                return {UniquenessVerdict::Kind::NotUniqueCertified, n, depth};
            case TailCompare::Unknown: unknown = true; break;
            case TailCompare::Strict: break;
            }
        }
        if (guard > 0) {
            switch (compare_tail(reflect(shift(s, n)), base, depth)) {
            case TailCompare::Violated:
            case TailCompare::Equal:
                return {UniquenessVerdict::Kind::NotUniqueCertified, n, depth};
            case TailCompare::Unknown: unknown = true; break;
            case TailCompare::Strict: break;
            }
        }
    }
    if (unknown) return {UniquenessVerdict::Kind::UnknownToDepth, 0, depth};
    return {UniquenessVerdict::Kind::UniqueCertified, 0, depth};
}

} // namespace qexp
