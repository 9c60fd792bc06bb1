#include "qexp/base.hpp"

#include <sstream>

namespace qexp {

using detail::BaseImpl;
using detail::QVal;

namespace {

constexpr int kRefineBatch = 16;
constexpr int kMaxRefineRounds = 64; // 16*64 bisections is far past any test's needs

std::string qval_key(const QVal& v) {
    std::ostringstream os;
    if (std::holds_alternative<Rat>(v)) {
        os << "r:" << rat_to_string(std::get<Rat>(v));
    } else if (std::holds_alternative<Poly>(v)) {
        os << "p:";
        for (const auto& c : std::get<Poly>(v).coeffs()) os << rat_to_string(c) << ";";
    } else {
        os << "i:?";
    }
    return os.str();
}

} // namespace

namespace detail {

RationalInterval BaseImpl::enclosure_nolock() const {
    switch (kind) {
    case Kind::Rational: return RationalInterval(q_rat);
    case Kind::Algebraic: return iso;
    case Kind::IntervalOnly: return fixed;
    }
    throw DomainError("unreachable");
}

void BaseImpl::refine_once_nolock() const {
    if (kind != Kind::Algebraic || iso.is_point()) return;
    Rat mid = iso.mid();
    Rat pm = pmin.eval(mid);
    if (pm == 0) { // rational root: collapse to a point
        iso = RationalInterval(mid);
        return;
    }
    Rat plo = pmin.eval(iso.lo());
    if (sign_of(plo) * sign_of(pm) < 0)
        iso = RationalInterval(iso.lo(), mid);
    else
        iso = RationalInterval(mid, iso.hi());
}

} // namespace detail

Base Base::rational(int M, const Rat& q) {
    if (!(q > 1 && q <= Rat(M + 1))) throw DomainError("base must lie in (1, M+1]");
    auto impl = std::make_shared<BaseImpl>();
    impl->kind = BaseImpl::Kind::Rational;
    impl->M = M;
    impl->q_rat = q;
    return Base(impl);
}

Base Base::algebraic(int M, const Poly& pmin_in, const RationalInterval& iso) {
    Poly p = squarefree_part(pmin_in).monic();
    Rat plo = p.eval(iso.lo()), phi = p.eval(iso.hi());
    if (plo == 0) return Base::rational(M, iso.lo());
    if (phi == 0) return Base::rational(M, iso.hi());
    if (sign_of(plo) * sign_of(phi) >= 0)
        throw DomainError("algebraic base: no sign change over isolating interval");
    if (!(iso.lo() > 1 && iso.hi() <= Rat(M + 1)))
        throw DomainError("algebraic base: isolating interval outside (1, M+1]");
    auto impl = std::make_shared<BaseImpl>();
    impl->kind = BaseImpl::Kind::Algebraic;
    impl->M = M;
    impl->pmin = p;
    impl->iso = iso;
    return Base(impl);
}

Base Base::interval_only(int M, const RationalInterval& q) {
    BaseEnclosure check(M, q); // validates
    auto impl = std::make_shared<BaseImpl>();
    impl->kind = BaseImpl::Kind::IntervalOnly;
    impl->M = M;
    impl->fixed = q;
    return Base(impl);
}

BaseEnclosure Base::enclosure() const {
    std::lock_guard<std::mutex> lk(impl_->mu);
    return BaseEnclosure(impl_->M, impl_->enclosure_nolock());
}

void Base::refine_to(const Rat& eps) const {
    if (impl_->kind != BaseImpl::Kind::Algebraic) return;
    std::lock_guard<std::mutex> lk(impl_->mu);
    int guard = 0;
    while (impl_->iso.width() > eps && guard++ < kRefineBatch * kMaxRefineRounds)
        impl_->refine_once_nolock();
}

QNum Base::value_of(const Rat& x) const { return QNum::from_rat(impl_, x); }
QNum Base::q() const { return QNum::base_value(impl_); }
QNum Base::zero() const { return QNum::from_rat(impl_, Rat(0)); }

QVal QNum::reduce(const QVal& v) const {
    if (b_->kind == BaseImpl::Kind::Algebraic && std::holds_alternative<Poly>(v))
        return std::get<Poly>(v).rem_monic(b_->pmin);
    return v;
}

QNum QNum::from_rat(const std::shared_ptr<const BaseImpl>& b, const Rat& x) {
    QNum r;
    r.b_ = b;
    switch (b->kind) {
    case BaseImpl::Kind::Rational: r.num_ = x; break;
    case BaseImpl::Kind::Algebraic: r.num_ = Poly::constant(x); break;
    case BaseImpl::Kind::IntervalOnly: r.num_ = RationalInterval(x); break;
    }
    return r;
}

QNum QNum::from_interval(const std::shared_ptr<const BaseImpl>& b, const RationalInterval& x) {
    if (b->kind != BaseImpl::Kind::IntervalOnly)
        throw DomainError("from_interval is for interval-only bases");
    QNum r;
    r.b_ = b;
    r.num_ = x;
    return r;
}

QNum QNum::base_value(const std::shared_ptr<const BaseImpl>& b) {
    QNum r;
    r.b_ = b;
    switch (b->kind) {
    case BaseImpl::Kind::Rational: r.num_ = b->q_rat; break;
    case BaseImpl::Kind::Algebraic: r.num_ = Poly::monomial(Rat(1), 1); break;
    case BaseImpl::Kind::IntervalOnly: r.num_ = b->fixed; break;
    }
    return r;
}

QNum QNum::make_fraction(const std::shared_ptr<const BaseImpl>& b, const Poly& num,
                         const Poly& den) {
    QNum r;
    r.b_ = b;
    switch (b->kind) {
    case BaseImpl::Kind::Rational:
        r.num_ = num.eval(b->q_rat) / den.eval(b->q_rat);
        break;
    case BaseImpl::Kind::Algebraic:
        r.num_ = num.rem_monic(b->pmin);
        r.den_ = den.rem_monic(b->pmin);
        break;
    case BaseImpl::Kind::IntervalOnly: {
        std::lock_guard<std::mutex> lk(b->mu);
        r.num_ = num.eval_interval(b->fixed) / den.eval_interval(b->fixed);
        break;
    }
    }
    return r;
}

QNum QNum::mul_q() const {
    QNum r;
    r.b_ = b_;
    r.den_ = den_;
    switch (b_->kind) {
    case BaseImpl::Kind::Rational: r.num_ = std::get<Rat>(num_) * b_->q_rat; break;
    case BaseImpl::Kind::Algebraic:
        r.num_ = reduce(std::get<Poly>(num_) * Poly::monomial(Rat(1), 1));
        break;
    case BaseImpl::Kind::IntervalOnly: {
        std::lock_guard<std::mutex> lk(b_->mu);
        r.num_ = std::get<RationalInterval>(num_) * b_->fixed;
        break;
    }
    }
    return r;
}

QNum QNum::sub_int(long c) const {
    if (c == 0) return *this;
    QNum r;
    r.b_ = b_;
    r.den_ = den_;
    Rat cc(c);
    switch (b_->kind) {
    case BaseImpl::Kind::Rational:
        r.num_ = std::get<Rat>(num_) - cc; // rational/interval bases fold denominators at build
        break;
    case BaseImpl::Kind::Algebraic: {
        Poly sub = den_ ? std::get<Poly>(*den_).scaled(cc) : Poly::constant(cc);
        r.num_ = std::get<Poly>(num_) - sub;
        break;
    }
    case BaseImpl::Kind::IntervalOnly:
        r.num_ = std::get<RationalInterval>(num_) - RationalInterval(cc);
        break;
    }
    return r;
}

QNum QNum::add(const QNum& o) const {
    QNum r;
    r.b_ = b_;
    bool dl = den_.has_value(), dr = o.den_.has_value();
    if (dl != dr || (dl && !(qval_key(*den_) == qval_key(*o.den_))))
        throw DomainError("QNum::add requires matching denominators");
    r.den_ = den_;
    switch (b_->kind) {
    case BaseImpl::Kind::Rational: r.num_ = std::get<Rat>(num_) + std::get<Rat>(o.num_); break;
    case BaseImpl::Kind::Algebraic: r.num_ = std::get<Poly>(num_) + std::get<Poly>(o.num_); break;
    case BaseImpl::Kind::IntervalOnly:
        r.num_ = std::get<RationalInterval>(num_) + std::get<RationalInterval>(o.num_);
        break;
    }
    return r;
}

QNum QNum::sub(const QNum& o) const { return add(o.neg()); }

QNum QNum::neg() const {
    QNum r;
    r.b_ = b_;
    r.den_ = den_;
    switch (b_->kind) {
    case BaseImpl::Kind::Rational: r.num_ = -std::get<Rat>(num_); break;
    case BaseImpl::Kind::Algebraic: r.num_ = -std::get<Poly>(num_); break;
    case BaseImpl::Kind::IntervalOnly: r.num_ = -std::get<RationalInterval>(num_); break;
    }
    return r;
}

QNum QNum::scale(const Rat& k) const {
    QNum r;
    r.b_ = b_;
    r.den_ = den_;
    switch (b_->kind) {
    case BaseImpl::Kind::Rational: r.num_ = std::get<Rat>(num_) * k; break;
    case BaseImpl::Kind::Algebraic: r.num_ = std::get<Poly>(num_).scaled(k); break;
    case BaseImpl::Kind::IntervalOnly:
        r.num_ = std::get<RationalInterval>(num_) * RationalInterval(k);
        break;
    }
    return r;
}

namespace {

// Sign of v(q*) for the unique root q* of pmin in iso. Zero is decided by a
// gcd test: any common factor with a sign change over iso must vanish at q*.
int algebraic_sign(const BaseImpl& b, const Poly& v) {
    if (v.is_zero()) return 0;
    Poly g = poly_gcd(v, b.pmin);
    std::lock_guard<std::mutex> lk(b.mu);
    if (g.degree() >= 1) {
        if (b.iso.is_point()) {
            if (g.eval(b.iso.lo()) == 0) return 0;
        } else {
            Rat ga = g.eval(b.iso.lo()), gb = g.eval(b.iso.hi());
            if (ga == 0 || gb == 0)
                throw DomainError("isolating interval endpoint is a root"); // excluded by construction
            if (sign_of(ga) * sign_of(gb) < 0) return 0;
        }
    }
    for (int round = 0; round < kMaxRefineRounds; ++round) {
        auto s = v.eval_interval(b.iso).sign();
        if (s) return *s;
        for (int i = 0; i < kRefineBatch; ++i) b.refine_once_nolock();
    }
    throw PrecisionExhausted("algebraic sign did not resolve");
}

} // namespace

std::optional<int> QNum::sign() const {
    switch (b_->kind) {
    case BaseImpl::Kind::Rational: return sign_of(std::get<Rat>(num_));
    case BaseImpl::Kind::Algebraic: return algebraic_sign(*b_, std::get<Poly>(num_));
    case BaseImpl::Kind::IntervalOnly: return std::get<RationalInterval>(num_).sign();
    }
    throw DomainError("unreachable");
}

int QNum::sign_exact() const {
    auto s = sign();
    if (!s) throw PrecisionExhausted("sign undecidable over base enclosure");
    return *s;
}

RationalInterval QNum::enclosure() const {
    RationalInterval num_ivl, den_ivl{Rat(1)};
    switch (b_->kind) {
    case BaseImpl::Kind::Rational: num_ivl = RationalInterval(std::get<Rat>(num_)); break;
    case BaseImpl::Kind::Algebraic: {
        std::lock_guard<std::mutex> lk(b_->mu);
        num_ivl = std::get<Poly>(num_).eval_interval(b_->iso);
        if (den_) den_ivl = std::get<Poly>(*den_).eval_interval(b_->iso);
        break;
    }
    case BaseImpl::Kind::IntervalOnly: num_ivl = std::get<RationalInterval>(num_); break;
    }
    if (den_) {
        if (den_ivl.contains_zero()) {
            // refine until the positive denominator separates from zero
            for (int round = 0; round < kMaxRefineRounds && den_ivl.contains_zero(); ++round) {
                std::lock_guard<std::mutex> lk(b_->mu);
                for (int i = 0; i < kRefineBatch; ++i) b_->refine_once_nolock();
                den_ivl = std::get<Poly>(*den_).eval_interval(b_->iso);
                num_ivl = std::get<Poly>(num_).eval_interval(b_->iso);
            }
        }
        return num_ivl / den_ivl;
    }
    return num_ivl;
}

bool QNum::is_exact() const { return b_->kind != BaseImpl::Kind::IntervalOnly; }

std::string QNum::key() const {
    std::string k = qval_key(num_);
    if (den_) k += "|" + qval_key(*den_);
    return k;
}

int poly_sign_at_base(const Base& b, const Poly& p) {
    const auto& impl = *b.impl();
    switch (impl.kind) {
    case BaseImpl::Kind::Rational: return sign_of(p.eval(impl.q_rat));
    case BaseImpl::Kind::Algebraic: return algebraic_sign(impl, p.rem_monic(impl.pmin));
    case BaseImpl::Kind::IntervalOnly: {
        std::lock_guard<std::mutex> lk(impl.mu);
        auto s = p.eval_interval(impl.fixed).sign();
        if (!s) throw PrecisionExhausted("polynomial sign undecidable over enclosure");
        return *s;
    }
    }
    throw DomainError("unreachable");
}

} // namespace qexp
