#include "qexp/transversality.hpp"

#include "qexp/constants.hpp"

#include <deque>
#include <map>
#include <mutex>

namespace qexp {

RationalInterval StarFunctionSpec::eval_h(const RationalInterval& x) const {
    RationalInterval head_v = head.eval_interval(x);
    RationalInterval tail = RationalInterval(tail_coef) * x.pow(static_cast<unsigned long>(tail_from)) /
                            (RationalInterval(Rat(1)) - x);
    return head_v + tail;
}

RationalInterval StarFunctionSpec::eval_dh(const RationalInterval& x) const {
    RationalInterval head_v = head.derivative().eval_interval(x);
    // d/dx [x^j/(1-x)] = (j x^{j-1} - (j-1) x^j) / (1-x)^2
    RationalInterval num =
        RationalInterval(Rat(tail_from)) * x.pow(static_cast<unsigned long>(tail_from - 1)) -
        RationalInterval(Rat(tail_from - 1)) * x.pow(static_cast<unsigned long>(tail_from));
    RationalInterval den = (RationalInterval(Rat(1)) - x).pow(2);
    return head_v + RationalInterval(tail_coef) * num / den;
}

Rat StarFunctionSpec::eval_h_exact(const Rat& x) const {
    return head.eval(x) + tail_coef * pow_rat(x, tail_from) / (1 - x);
}

Rat StarFunctionSpec::eval_dh_exact(const Rat& x) const {
    Rat num = Rat(tail_from) * pow_rat(x, tail_from - 1) -
              Rat(tail_from - 1) * pow_rat(x, tail_from);
    return head.derivative().eval(x) + tail_coef * num / ((1 - x) * (1 - x));
}

namespace {

RationalInterval bisect_poly_root(const Poly& p, RationalInterval bracket, const Rat& eps) {
    Rat fa = p.eval(bracket.lo());
    if (fa == 0) return RationalInterval(bracket.lo());
    if (p.eval(bracket.hi()) == 0) return RationalInterval(bracket.hi());
    while (bracket.width() > eps) {
        Rat mid = bracket.mid();
        Rat fm = p.eval(mid);
        if (fm == 0) return RationalInterval(mid);
        if (sign_of(fa) * sign_of(fm) < 0)
            bracket = RationalInterval(bracket.lo(), mid);
        else {
            bracket = RationalInterval(mid, bracket.hi());
            fa = fm;
        }
    }
    return bracket;
}

const Rat kXmEps = make_rat(1, Int("1000000000000")); // 1e-12

} // namespace

StarFunctionSpec star_function(int M) {
    if (M < 1) throw DomainError("alphabet max must be >= 1");
    StarFunctionSpec s;
    s.M = M;
    s.k = M / 2;
    s.odd = M % 2 == 1;
    const int k = s.k;
    if (s.odd) {
        if (k == 0) {
            s.head = Poly({Rat(1), Rat(-1), Rat(-1), Rat(-1), make_rat(1, 2)});
            s.tail_coef = 1;
            s.tail_from = 5;
        } else if (k == 1) {
            s.head = Poly({Rat(1), Rat(-3), make_rat(-1, 2)});
            s.tail_coef = 3;
            s.tail_from = 3;
        } else {
            s.head = Poly({Rat(1), Rat(-(k + 3))});
            s.tail_coef = 2 * k + 1;
            s.tail_from = 2;
        }
        if (k == 0) {
            s.xM_poly = Poly({make_rat(-1, 4), Rat(0), Rat(0), Rat(1)}); // x^3 = 1/4
            s.xM = bisect_poly_root(s.xM_poly, RationalInterval(make_rat(5, 8), make_rat(21, 32)), kXmEps);
        } else if (k < 3) {
            s.xM_poly = Poly({Rat(-1), Rat(k + 1), Rat(k + 1)});
            s.xM = bisect_poly_root(s.xM_poly, RationalInterval(make_rat(1, 8), make_rat(1, 2)), kXmEps);
        } else {
            s.xM_rational = true;
            s.xM_rat = make_rat(1, k + 1);
            s.xM = RationalInterval(s.xM_rat);
        }
    } else {
        if (k == 1) {
            s.head = Poly({Rat(1), Rat(-2), make_rat(-1, 2)});
            s.tail_coef = 2;
            s.tail_from = 3;
        } else {
            s.head = Poly({Rat(1), Rat(-(k + 2))});
            s.tail_coef = 2 * k;
            s.tail_from = 2;
        }
        if (k < 3) {
            s.xM_poly = Poly({Rat(-1), Rat(k + 1), Rat(k)});
            s.xM = bisect_poly_root(s.xM_poly, RationalInterval(make_rat(1, 8), make_rat(1, 2)), kXmEps);
        } else {
            s.xM_rational = true;
            s.xM_rat = make_rat(1, k + 1);
            s.xM = RationalInterval(s.xM_rat);
        }
    }
    return s;
}

namespace {

std::mutex star_mutex;
std::map<int, TransversalityCertificate> star_memo;

const Rat kKlPrecision = make_rat(1, Int("1000000000")); // 1e-9

} // namespace

TransversalityCertificate verify_star(int M) {
    {
        std::lock_guard<std::mutex> lk(star_mutex);
        auto it = star_memo.find(M);
        if (it != star_memo.end()) return it->second;
    }
    StarFunctionSpec s = star_function(M);
    TransversalityCertificate cert;
    cert.M = M;
    cert.xM = s.xM;
    if (s.xM_rational) {
        Rat h = s.eval_h_exact(s.xM_rat);
        Rat dh = s.eval_dh_exact(s.xM_rat);
        cert.h_at_xM = RationalInterval(h);
        cert.dh_at_xM = RationalInterval(dh);
    } else {
        cert.h_at_xM = s.eval_h(s.xM);
        cert.dh_at_xM = s.eval_dh(s.xM);
    }
    if (!(cert.h_at_xM.lo() > 0))
        throw CertificationFailure("h(x_M) > 0 not certified for M=" + std::to_string(M));
    if (!(cert.dh_at_xM.hi() < 0))
        throw CertificationFailure("h'(x_M) < 0 not certified for M=" + std::to_string(M));
    cert.delta = std::min(Rat(cert.h_at_xM.lo() / 2), Rat(-cert.dh_at_xM.hi() / 2));
    cert.interval = RationalInterval(Rat(0), cert.xM.lo());
    RationalInterval kl = komornik_loreti(M, kKlPrecision);
    cert.kl_range_inside = kl.lo() * cert.xM.lo() >= 1; // 1/q_KL <= x_M certified
    if (!cert.kl_range_inside)
        throw CertificationFailure("[1/(M+1), 1/q_KL] not inside [0, x_M] for M=" +
                                   std::to_string(M));
    std::lock_guard<std::mutex> lk(star_mutex);
    star_memo.emplace(M, cert);
    return cert;
}

RootResult transversality_root(const DiffSeries& diff, const RationalInterval& search,
                               const Rat& precision) {
    const int M = diff.alphabet_max();
    if (precision <= 0) throw DomainError("precision must be positive");
    RationalInterval kl = komornik_loreti(M, kKlPrecision);
    if (search.lo() < kl.lo() || search.hi() > Rat(M + 1))
        throw DomainError("search window outside [q_KL, M+1]");
    TransversalityCertificate cert = verify_star(M);
    // x = 1/q; transversality must cover the whole x-window
    Rat xl = 1 / search.hi(), xr = 1 / search.lo();
    if (!(xr <= cert.xM.lo()))
        throw DomainError("search window escapes the certified transversality range");

    auto g = [&](const Rat& x) { return diff.value_at(x); };
    Rat gl = g(xl), gr = g(xr);
    // Under delta-transversality g can only cross downward, so endpoint signs decide.
    if (gl == 0) {
        Base b = Base::rational(M, search.hi());
        return {RootResult::Kind::UniqueRoot, b, RationalInterval(search.hi()), ""};
    }
    if (gr == 0) {
        Base b = Base::rational(M, search.lo());
        return {RootResult::Kind::UniqueRoot, b, RationalInterval(search.lo()), ""};
    }
    if (gl < 0) return {RootResult::Kind::NoRootCertified, std::nullopt, {}, ""};
    if (gr > 0) return {RootResult::Kind::NoRootCertified, std::nullopt, {}, ""};

    // gl > 0 > gr: bisect; exact closed-form signs at rational points
    Rat a = xl, b = xr;
    for (;;) {
        // q-enclosure is [1/b, 1/a]
        Rat qlo = 1 / b, qhi = 1 / a;
        if (qhi - qlo <= precision) break;
        Rat mid = (a + b) / 2;
        Rat gm = g(mid);
        if (gm == 0) {
            Base base = Base::rational(M, 1 / mid);
            return {RootResult::Kind::UniqueRoot, base, RationalInterval(Rat(1 / mid)), ""};
        }
        if (gm > 0)
            a = mid;
        else
            b = mid;
    }
    RationalInterval q_enc(1 / b, 1 / a);
    Base base = Base::algebraic(M, diff.numerator_q(), q_enc);
    return {RootResult::Kind::UniqueRoot, base, base.enclosure().q, ""};
}

namespace {

// Certifies F < 0 on [a,b] by adaptive subdivision with interval arithmetic.
template <typename F>
InspectionCertificate certify_negative(const std::string& label, const RationalInterval& dom,
                                       F&& f, const RefinementBudget& budget) {
    InspectionCertificate cert;
    cert.label = label;
    cert.domain = dom;
    cert.sup_bound = Rat(-1);
    std::deque<RationalInterval> work{dom};
    std::size_t pieces = 0;
    while (!work.empty()) {
        RationalInterval seg = work.front();
        work.pop_front();
        RationalInterval v = f(seg);
        if (v.hi() < 0) {
            ++pieces;
            if (v.hi() > cert.sup_bound || pieces == 1) cert.sup_bound = v.hi();
            continue;
        }
        if (static_cast<long>(pieces + work.size()) > budget.max_splits)
            throw CertificationFailure("inspection subdivision budget exhausted near " +
                                       seg.str() + " for " + label);
        Rat mid = seg.mid();
        work.emplace_back(seg.lo(), mid);
        work.emplace_back(mid, seg.hi());
    }
    cert.pieces = pieces;
    cert.certified = true;
    return cert;
}

} // namespace

std::vector<InspectionCertificate> verify_inspection_inequalities(int M,
                                                                  const RefinementBudget& budget) {
    const Rat omega(1, 100);
    std::vector<InspectionCertificate> out;
    if (M == 1) {
        RationalInterval kl = komornik_loreti(1, make_rat(1, 100000000));
        RationalInterval dom(kl.hi(), Rat(2));
        auto common = [&](const RationalInterval& q, const RationalInterval& extra) {
            RationalInterval q2 = q.pow(2);
            RationalInterval q4 = q.pow(4);
            RationalInterval last = (q2 * (q - RationalInterval(Rat(1))).pow(2)).recip();
            return RationalInterval(Rat(-1) + 2 * omega) / q2 -
                   RationalInterval(Rat(2)) / q4 + extra + last;
        };
        out.push_back(certify_negative(
            "case-1a", dom,
            [&](const RationalInterval& q) {
                return common(q, -(RationalInterval(Rat(2)) / q.pow(5)));
            },
            budget));
        out.push_back(certify_negative(
            "case-1b", dom,
            [&](const RationalInterval& q) {
                return common(q, -(RationalInterval(Rat(6)) / q.pow(6)));
            },
            budget));
        return out;
    }
    // M >= 2: -1 + 2w + p/(q-1)^2 < 0 on the q-range each digit block allows
    for (int p = 2; p <= M; ++p) {
        RationalInterval dom = p == 2 ? RationalInterval(make_rat(243, 100), Rat(M + 1))
                                      : RationalInterval(Rat(p), Rat(M + 1));
        if (p == 2 && M > 3) continue; // p=2 arises only for M in {2,3}
        out.push_back(certify_negative(
            "p=" + std::to_string(p), dom,
            [&](const RationalInterval& q) {
                return RationalInterval(Rat(-1) + 2 * omega) +
                       RationalInterval(Rat(p)) / (q - RationalInterval(Rat(1))).pow(2);
            },
            budget));
    }
    return out;
}

} // namespace qexp
