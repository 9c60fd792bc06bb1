#include "qexp/series.hpp"

#include "qexp/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qexp {

namespace {

void check_digits(const BaseEnclosure& base, const EventuallyPeriodicSeq& seq) {
    if (seq.alphabet_max() > base.M)
        throw DigitRangeError("sequence alphabet exceeds base alphabet");
}

// canonical (pre, per): primitive period, minimal preperiod
void canonicalize_int(std::vector<int>& pre, std::vector<int>& per) {
    std::size_t len = per.size();
    for (std::size_t d = 1; d <= len; ++d) {
        if (len % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < len && ok; ++i)
            if (per[i] != per[i % d]) ok = false;
        if (ok) {
            per.resize(d);
            break;
        }
    }
    while (!pre.empty() && pre.back() == per.back()) {
        pre.pop_back();
        std::rotate(per.begin(), per.end() - 1, per.end());
    }
}

} // namespace

Rat eval_pi_exact(const Rat& q, const EventuallyPeriodicSeq& seq) {
    std::size_t p = seq.preperiod_len(), r = seq.period_len();
    Rat qi = 1 / q;
    // Horner over the preperiod
    Rat pre_sum = 0;
    for (std::size_t i = p; i-- > 0;) pre_sum = (pre_sum + seq.preperiod()[i]) * qi;
    Rat per_sum = 0;
    for (std::size_t j = r; j-- > 0;) per_sum = (per_sum + seq.period()[j]) * qi;
    Rat qr = pow_rat(qi, static_cast<long>(r));
    return pre_sum + pow_rat(qi, static_cast<long>(p)) * per_sum / (1 - qr);
}

RationalInterval eval_pi(const BaseEnclosure& base, const EventuallyPeriodicSeq& seq,
                         long depth) {
    if (depth < 1) throw DomainError("eval_pi depth must be >= 1");
    check_digits(base, seq);
    if (base.q.is_point()) {
        return RationalInterval(eval_pi_exact(base.q.lo(), seq));
    }
    // digits are >= 0 so partial sums are decreasing in q
    auto truncated = [&](const Rat& q) {
        Rat acc = 0;
        for (long i = depth; i >= 1; --i)
            acc = (acc + seq.at(static_cast<std::size_t>(i - 1))) / q;
        return acc;
    };
    Rat lo = truncated(base.q.hi());
    Rat hi = truncated(base.q.lo());
    Rat tail = Rat(base.M) * pow_rat(base.q.lo(), -depth) / (base.q.lo() - 1);
    return RationalInterval(lo, hi + tail);
}

DiffSeries::DiffSeries(std::vector<int> pre, std::vector<int> per, int alphabet_max)
    : pre_(std::move(pre)), per_(std::move(per)), m_(alphabet_max) {
    if (per_.empty()) throw DomainError("diff series period must be nonempty");
    for (int d : pre_)
        if (d < -m_ || d > m_) throw DigitRangeError("diff coefficient out of range");
    for (int d : per_)
        if (d < -m_ || d > m_) throw DigitRangeError("diff coefficient out of range");
    canonicalize_int(pre_, per_);
}

DiffSeries DiffSeries::between(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
    if (a.alphabet_max() != b.alphabet_max())
        throw DomainError("diff of sequences over different alphabets");
    std::size_t p = std::max(a.preperiod_len(), b.preperiod_len());
    std::size_t r = std::lcm(a.period_len(), b.period_len());
    std::vector<int> pre, per;
    for (std::size_t i = 0; i < p; ++i) pre.push_back(b.at(i) - a.at(i));
    for (std::size_t i = p; i < p + r; ++i) per.push_back(b.at(i) - a.at(i));
    return DiffSeries(std::move(pre), std::move(per), a.alphabet_max());
}

DiffSeries DiffSeries::parse(const std::string& text, int alphabet_max) {
    auto parse_group = [](const std::string& part) {
        std::vector<int> out;
        std::istringstream is(part);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) out.push_back(std::stoi(tok));
        return out;
    };
    std::vector<std::string> groups;
    std::string bare;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '(') {
            auto close = text.find(')', i);
            if (close == std::string::npos) throw DomainError("unbalanced parens in '" + text + "'");
            groups.push_back(text.substr(i + 1, close - i - 1));
            i = close + 1;
        } else {
            bare += text[i++];
        }
    }
    if (groups.empty()) throw DomainError("diff series needs a (period) group");
    std::vector<int> pre, per;
    if (groups.size() == 2) {
        pre = parse_group(groups[0]);
        per = parse_group(groups[1]);
    } else {
        pre = parse_group(bare);
        per = parse_group(groups[0]);
    }
    return DiffSeries(std::move(pre), std::move(per), alphabet_max);
}

Rat DiffSeries::value_at(const Rat& x) const {
    std::size_t p = pre_.size(), r = per_.size();
    Rat pre_sum = 0;
    for (std::size_t i = p; i-- > 0;) pre_sum = (pre_sum + pre_[i]) * x;
    Rat per_sum = 0;
    for (std::size_t j = r; j-- > 0;) per_sum = (per_sum + per_[j]) * x;
    Rat xr = pow_rat(x, static_cast<long>(r));
    if (xr == 1) throw DomainError("diff series closed form undefined at |x| = 1");
    return 1 + pre_sum + pow_rat(x, static_cast<long>(p)) * per_sum / (1 - xr);
}

Poly DiffSeries::numerator_x() const {
    std::size_t p = pre_.size(), r = per_.size();
    std::vector<Rat> one_plus_p(p + 1, Rat(0));
    one_plus_p[0] = 1;
    for (std::size_t i = 0; i < p; ++i) one_plus_p[i + 1] = pre_[i];
    std::vector<Rat> one_minus_xr(r + 1, Rat(0));
    one_minus_xr[0] = 1;
    one_minus_xr[r] = -1;
    std::vector<Rat> q_part(p + r + 1, Rat(0));
    for (std::size_t j = 0; j < r; ++j) q_part[p + j + 1] = per_[j];
    return Poly(one_plus_p) * Poly(one_minus_xr) + Poly(q_part);
}

Poly DiffSeries::numerator_q() const { return numerator_x().reversed(); }

std::string DiffSeries::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < pre_.size(); ++i) {
        if (i) os << ',';
        os << pre_[i];
    }
    os << ")(";
    for (std::size_t i = 0; i < per_.size(); ++i) {
        if (i) os << ',';
        os << per_[i];
    }
    os << ")";
    return os.str();
}

SignResult certified_sign(const DiffSeries& diff, const RationalInterval& x, long depth) {
    if (depth < 1) throw DomainError("certified_sign depth must be >= 1");
    if (!(x.lo() > 0 && x.hi() < 1))
        throw DomainError("certified_sign requires x inside (0,1)");
    // exact range of the truncated series: each term is monotone in x
    Rat tmin = 1, tmax = 1;
    Rat plo = 1, phi = 1; // running powers of x.lo / x.hi
    for (long i = 1; i <= depth; ++i) {
        plo *= x.lo();
        phi *= x.hi();
        int d = diff.at(static_cast<std::size_t>(i - 1));
        if (d > 0) {
            tmin += d * plo;
            tmax += d * phi;
        } else if (d < 0) {
            tmin += d * phi;
            tmax += d * plo;
        }
    }
    // exact |coefficient| tail from depth+1 on (the series data is periodic)
    std::size_t p = diff.preperiod_len(), r = diff.period_len();
    Rat xh = x.hi();
    Rat tail = 0;
    long s = depth;
    if (static_cast<std::size_t>(s) < p) {
        Rat pw = pow_rat(xh, s);
        for (std::size_t i = static_cast<std::size_t>(s); i < p; ++i) {
            pw *= xh;
            tail += Rat(std::abs(diff.at(i))) * pw;
        }
        s = static_cast<long>(p);
    }
    // periodic remainder starting after position s (>= p)
    std::size_t phase = (static_cast<std::size_t>(s) - p) % r;
    Rat w = 0, pw = 1;
    for (std::size_t t = 1; t <= r; ++t) {
        pw *= xh;
        std::size_t idx = p + ((phase + t - 1) % r);
        w += Rat(std::abs(diff.at(idx))) * pw;
    }
    Rat xr = pow_rat(xh, static_cast<long>(r));
    tail += pow_rat(xh, s) * w / (1 - xr);

    Rat lo = tmin - tail, hi = tmax + tail;
    if (lo > 0) return SignResult::positive();
    if (hi < 0) return SignResult::negative();
    return SignResult::contains_zero(hi - lo);
}

PiFraction pi_fraction(const EventuallyPeriodicSeq& seq) {
    std::size_t p = seq.preperiod_len(), r = seq.period_len();
    // den = q^p (q^r - 1) > 0 for q > 1
    Poly den = Poly::monomial(Rat(1), p) * (Poly::monomial(Rat(1), r) - Poly::constant(Rat(1)));
    std::vector<Rat> pre_poly(p, Rat(0)); // sum u_i q^{p-i}, i = 1..p
    for (std::size_t i = 1; i <= p; ++i) pre_poly[p - i] = seq.preperiod()[i - 1];
    std::vector<Rat> per_poly(r, Rat(0)); // sum v_j q^{r-j}, j = 1..r
    for (std::size_t j = 1; j <= r; ++j) per_poly[r - j] = seq.period()[j - 1];
    Poly num = (Poly::monomial(Rat(1), r) - Poly::constant(Rat(1))) * Poly(pre_poly) +
               Poly(per_poly);
    return {num, den};
}

Poly pi_minus_rat_numerator(const EventuallyPeriodicSeq& seq, const Rat& t) {
    PiFraction f = pi_fraction(seq);
    return f.num - f.den.scaled(t);
}

QNum pi_value(const Base& base, const EventuallyPeriodicSeq& seq) {
    if (seq.alphabet_max() > base.M())
        throw DigitRangeError("sequence alphabet exceeds base alphabet");
    if (!base.is_exact()) {
        // exact closed forms at the enclosure endpoints; pi is decreasing in q
        BaseEnclosure enc = base.enclosure();
        Rat lo = eval_pi_exact(enc.q.hi(), seq);
        Rat hi = eval_pi_exact(enc.q.lo(), seq);
        return QNum::from_interval(base.impl(),
                                   RationalInterval(std::min(lo, hi), std::max(lo, hi)));
    }
    PiFraction f = pi_fraction(seq);
    return QNum::make_fraction(base.impl(), f.num, f.den);
}

} // namespace qexp
