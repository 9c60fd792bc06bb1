#include "qexp/two_expansion.hpp"

#include "qexp/constants.hpp"
#include "qexp/series.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qexp {

namespace {

// w m a as one eventually periodic sequence
EventuallyPeriodicSeq prepend(const DigitWord& w, int digit, const EventuallyPeriodicSeq& tail) {
    std::vector<int> pre(w.digits);
    pre.push_back(digit);
    for (std::size_t i = 0; i < tail.preperiod_len(); ++i) pre.push_back(tail.preperiod()[i]);
    return EventuallyPeriodicSeq(DigitWord(pre, tail.alphabet_max()),
                                 tail.period());
}

// sign of pi(s) - A(q)/B(q) with B > 0 for q > 1, as an exact polynomial query
int pi_vs_fraction_sign(const Base& base, const EventuallyPeriodicSeq& s, const Poly& A,
                        const Poly& B) {
    PiFraction f = pi_fraction(s);
    return poly_sign_at_base(base, f.num * B - A * f.den);
}

bool value_equality_check(const Base& base, const EventuallyPeriodicSeq& s1,
                          const EventuallyPeriodicSeq& s2, long depth) {
    if (base.is_exact()) {
        PiFraction f1 = pi_fraction(s1), f2 = pi_fraction(s2);
        return poly_sign_at_base(base, f1.num * f2.den - f2.num * f1.den) == 0;
    }
    // enclosure base: accept when the difference contains 0 at the
    // separation-scale tolerance C q^{-depth}
    BaseEnclosure enc = base.enclosure();
    RationalInterval d = pi_value(base, s1).enclosure() - pi_value(base, s2).enclosure();
    Rat c = (Rat(enc.M) / (enc.q.hi() - 1) - 1) / 2;
    if (c <= 0) c = make_rat(1, 1000000);
    Rat tol = c * pow_rat(enc.q.hi(), -depth);
    return d.contains_zero() && d.width() < tol;
}

// certified "value of s avoids every switch block"
bool outside_switch_region(const Base& base, const EventuallyPeriodicSeq& s) {
    const int M = base.M();
    if (base.is_exact()) {
        for (int i = 1; i <= M; ++i) {
            // left of block: pi < i/q  <=>  pi*q - i < 0
            int s_left = pi_vs_fraction_sign(base, s, Poly::constant(Rat(i)),
                                             Poly::monomial(Rat(1), 1));
            if (s_left < 0) continue;
            // right of block: pi > ((i-1)(q-1)+M)/(q^2-q)
            Poly r_num(std::vector<Rat>{Rat(M - (i - 1)), Rat(i - 1)}); // (i-1)q + M-(i-1)
            Poly q2q(std::vector<Rat>{Rat(0), Rat(-1), Rat(1)});
            int s_right = pi_vs_fraction_sign(base, s, r_num, q2q);
            if (s_right > 0) continue;
            return false;
        }
        return true;
    }
    RationalInterval v = pi_value(base, s).enclosure();
    SwitchRegion sr = switch_region(base.enclosure());
    for (const auto& blk : sr.blocks) {
        bool outside = v.hi() < blk.interval.lo() || v.lo() > blk.interval.hi();
        if (!outside) return false;
    }
    return true;
}

} // namespace

U2Certificate check_u2_point(const DigitWord& w, int m, const EventuallyPeriodicSeq& a,
                             const EventuallyPeriodicSeq& b, const Base& base, long depth) {
    const int M = base.M();
    if (m < 0 || m >= M) throw DomainError("m must satisfy 0 <= m < M");
    if (w.alphabet_max > M || a.alphabet_max() > M || b.alphabet_max() > M)
        throw DigitRangeError("digits exceed base alphabet");

    U2Certificate cert{w, m, a, b, base.enclosure(), {}, false};
    cert.checks.a_unique = uniqueness_certificate(a, base, depth);
    cert.checks.b_unique = uniqueness_certificate(b, base, depth);

    EventuallyPeriodicSeq seq_ma = prepend(w, m, a);
    EventuallyPeriodicSeq seq_mb = prepend(w, m + 1, b);
    cert.checks.value_equality = value_equality_check(base, seq_ma, seq_mb, depth);

    // condition (3.2): every prefix value pi(w_{j+1}..w_n m a) avoids S_q
    for (std::size_t j = 0; j < w.size(); ++j) {
        std::vector<int> sub(w.digits.begin() + static_cast<long>(j), w.digits.end());
        EventuallyPeriodicSeq tail_j = prepend(DigitWord(sub, M), m, a);
        bool outside = false;
        try {
            outside = outside_switch_region(base, tail_j);
        } catch (const PrecisionExhausted&) {
            outside = false; // ambiguous counts against the certificate
        }
        cert.checks.prefix_outside_switch.push_back(outside);
        if (!outside) cert.checks.prefix_ok = false;
    }

    // cross-validation: the point has exactly two surviving paths
    EnumerateOptions opts;
    opts.max_paths = 64;
    ExpansionTree tree = base.is_exact()
                             ? enumerate_expansions_value(base, pi_value(base, seq_ma), depth, opts)
                             : enumerate_expansions(base, pi_value(base, seq_ma).enclosure(),
                                                    depth, opts);
    cert.checks.live_paths = tree.live_count;
    cert.checks.ambiguous_paths = tree.ambiguous_count;
    cert.checks.enumeration_two = tree.live_count == 2 && tree.ambiguous_count == 0;

    cert.valid = cert.checks.a_unique.unique() && cert.checks.b_unique.unique() &&
                 cert.checks.value_equality && cert.checks.prefix_ok &&
                 cert.checks.enumeration_two;
    return cert;
}

std::vector<EventuallyPeriodicSeq> all_canonical_seqs(int M, std::size_t preperiod_bound,
                                                      std::size_t period_bound) {
    std::set<EventuallyPeriodicSeq> out;
    std::vector<int> per, pre;
    // enumerate digit tuples odometer-style
    auto enumerate = [&](std::size_t len, auto&& emit) {
        std::vector<int> word(len, 0);
        for (;;) {
            emit(word);
            std::size_t i = 0;
            while (i < len && word[i] == M) word[i++] = 0;
            if (i == len) break;
            ++word[i];
        }
    };
    for (std::size_t pl = 1; pl <= period_bound; ++pl) {
        enumerate(pl, [&](const std::vector<int>& period) {
            for (std::size_t el = 0; el <= preperiod_bound; ++el) {
                enumerate(el, [&](const std::vector<int>& prefix) {
                    out.emplace(DigitWord(prefix, M), DigitWord(period, M));
                });
            }
        });
    }
    return {out.begin(), out.end()};
}

std::vector<PairSearchRecord> construct_u2_candidates(int M, const RationalInterval& q_window,
                                                      std::size_t period_bound,
                                                      std::size_t preperiod_bound,
                                                      long verdict_depth) {
    RationalInterval kl = komornik_loreti(M, make_rat(1, 100000000));
    if (!(q_window.lo() > kl.hi()) || !(q_window.hi() < Rat(M + 1)))
        throw DomainError("pair search window must lie inside (q_KL, M+1)");

    std::vector<EventuallyPeriodicSeq> seqs = all_canonical_seqs(M, preperiod_bound, period_bound);
    std::vector<PairSearchRecord> records;
    for (const auto& a : seqs) {
        for (const auto& b : seqs) {
            if (a == b) continue;
            // (a,b) and (reflect b, reflect a) share the same difference series
            EventuallyPeriodicSeq ra = reflect(b), rb = reflect(a);
            if (std::make_pair(ra, rb) < std::make_pair(a, b)) continue;
            DiffSeries diff = DiffSeries::between(a, b);
            RootResult rr = transversality_root(diff, q_window, make_rat(1, Int("1000000000000")));
            if (!rr.unique()) continue;
            PairSearchRecord rec{a, b, rr, {}, {}, false};
            rec.a_unique = uniqueness_certificate(a, *rr.base, verdict_depth);
            rec.b_unique = uniqueness_certificate(b, *rr.base, verdict_depth);
            rec.constructive = rec.a_unique.unique() && rec.b_unique.unique();
            records.push_back(std::move(rec));
        }
    }
    std::sort(records.begin(), records.end(), [](const PairSearchRecord& x, const PairSearchRecord& y) {
        if (x.root.enclosure.lo() != y.root.enclosure.lo())
            return x.root.enclosure.lo() < y.root.enclosure.lo();
        if (!(x.a == y.a)) return x.a < y.a;
        return x.b < y.b;
    });
    return records;
}

RationalInterval theorem_bound(const RationalInterval& dim) {
    if (dim.lo() < 0 || dim.hi() > 1) throw DomainError("dimension interval outside [0,1]");
    auto f = [](const Rat& d) { return std::max(Rat(0), Rat(2 * d - 1)); };
    return RationalInterval(f(dim.lo()), f(dim.hi()));
}

namespace {

// greedy digits from an exact point until the remainder orbit closes
std::optional<EventuallyPeriodicSeq> greedy_cycle_seq(const Base& base, const QNum& start,
                                                      std::size_t max_steps) {
    const int M = base.M();
    std::vector<int> digits;
    std::map<std::string, std::size_t> seen;
    QNum r = start;
    seen.emplace(r.key(), 0);
    for (std::size_t step = 0; step < max_steps; ++step) {
        QNum t = r.mul_q();
        int chosen = -1;
        for (int c = M; c >= 0; --c) {
            auto s = t.sub_int(c).sign();
            if (!s) return std::nullopt;
            if (*s >= 0) {
                chosen = c;
                break;
            }
        }
        if (chosen < 0) return std::nullopt; // remainder escaped I_q
        digits.push_back(chosen);
        r = t.sub_int(chosen);
        auto [it, inserted] = seen.emplace(r.key(), digits.size());
        if (!inserted) {
            std::size_t cs = it->second;
            std::vector<int> pre(digits.begin(), digits.begin() + static_cast<long>(cs));
            std::vector<int> per(digits.begin() + static_cast<long>(cs), digits.end());
            return EventuallyPeriodicSeq(DigitWord(pre, M), DigitWord(per, M));
        }
    }
    return std::nullopt;
}

struct ReduceSearch {
    const Base& base;
    int M;
    long depth;
    std::optional<std::pair<std::size_t, RationalInterval>> found;

    bool qualifies(const QNum& r) {
        DigitOptions opts = digit_options_value(base, r);
        if (opts.ambiguous || opts.digits.size() != 2) return false;
        for (int c : opts.digits) {
            QNum tail = r.mul_q().sub_int(c);
            auto seq = greedy_cycle_seq(base, tail, static_cast<std::size_t>(depth) + 64);
            if (!seq) return false;
            if (!uniqueness_certificate(*seq, base, depth + 64).unique()) return false;
        }
        return true;
    }

    void visit(const QNum& r, std::size_t k) {
        if (found) return;
        if (qualifies(r)) {
            found = {k, r.enclosure()};
            return;
        }
        if (static_cast<long>(k) >= depth) return;
        for (int c = 0; c <= M && !found; ++c) {
            QNum r2 = r.mul_q().sub_int(c);
            auto s1 = r2.sign();
            if (s1 && *s1 < 0) continue;
            QNum u = r2.mul_q().sub(r2).sub_int(M);
            auto s2 = u.sign();
            if (s2 && *s2 > 0) continue;
            if (!s1 || !s2) continue; // only certified branches qualify
            visit(r2, k + 1);
        }
    }
};

} // namespace

std::optional<std::pair<std::size_t, RationalInterval>> reduce_to_u2_value(const Base& base,
                                                                           const QNum& x,
                                                                           long depth) {
    if (!base.is_exact()) throw DomainError("reduce_to_u2 requires an exact base");
    ReduceSearch search{base, base.M(), depth, std::nullopt};
    search.visit(x, 0);
    return search.found;
}

std::optional<std::pair<std::size_t, RationalInterval>> reduce_to_u2(const Base& base,
                                                                     const RationalInterval& x,
                                                                     long depth) {
    if (!x.is_point()) throw DomainError("reduce_to_u2 requires a point value");
    return reduce_to_u2_value(base, base.value_of(x.lo()), depth);
}

} // namespace qexp
