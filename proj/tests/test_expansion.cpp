#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qexp/constants.hpp"
#include "qexp/expansion.hpp"
#include "qexp/series.hpp"

#include <algorithm>
#include <random>

using namespace qexp;

namespace {

// independent feasibility oracle: word w can start an expansion of x iff
// pi(w 0^inf) <= x <= pi(w 0^inf) + q^{-n} M/(q-1), by partial sums
std::vector<std::string> brute_force_paths(const Rat& x, const Rat& q, int M, int n) {
    std::vector<std::string> out;
    Rat bound = Rat(M) / (q - 1);
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    std::vector<Rat> qpow(static_cast<std::size_t>(n) + 1);
    qpow[0] = 1;
    for (int i = 1; i <= n; ++i) qpow[static_cast<std::size_t>(i)] = qpow[static_cast<std::size_t>(i - 1)] / q;
    for (;;) {
        Rat partial = 0;
        for (int i = 0; i < n; ++i) partial += w[static_cast<std::size_t>(i)] * qpow[static_cast<std::size_t>(i + 1)];
        if (partial <= x && x <= partial + qpow[static_cast<std::size_t>(n)] * bound) {
            std::string s;
            for (int d : w) s += static_cast<char>('0' + d);
            out.push_back(s);
        }
        int i = n - 1;
        while (i >= 0 && w[static_cast<std::size_t>(i)] == M) w[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++w[static_cast<std::size_t>(i)];
    }
    std::sort(out.begin(), out.end());
    return out;
}

Rat random_rat(std::mt19937& rng, int num_lo, int num_hi, int den_hi) {
    std::uniform_int_distribution<int> num(num_lo, num_hi), den(1, den_hi);
    int d = den(rng);
    return make_rat(num(rng), d);
}

} // namespace

TEST_CASE("greedy expansion spec examples") {
    Base q2 = Base::rational(1, Rat(2));
    CHECK(greedy_expansion(q2, Rat(1), 8).str() == "11111111");
    CHECK(greedy_expansion(q2, make_rat(2, 3), 8).str() == "10101010");
    Base phi = golden_ratio_base(1);
    CHECK(greedy_expansion(phi, Rat(1), 5).str() == "11000");
    CHECK_THROWS_AS(greedy_expansion(q2, Rat(3), 4), DomainError);
}

TEST_CASE("quasi-greedy expansion spec examples") {
    Base q2 = Base::rational(1, Rat(2));
    CHECK(quasi_greedy_expansion(q2, Rat(1), 6).str() == "111111");
    Base phi = golden_ratio_base(1);
    auto a = quasi_greedy_expansion(phi, Rat(1), 6);
    CHECK(a.str() == "101010");
    // pi_phi((10)^inf) = 1: verify through the defining polynomial q^2 = q + 1
    PiFraction f = pi_fraction(EventuallyPeriodicSeq::parse("(10)", 1));
    CHECK(poly_sign_at_base(phi, f.num - f.den) == 0);

    Base trib = tribonacci_base();
    CHECK(quasi_greedy_expansion(trib, Rat(1), 6).str() == "110110");
    PiFraction g = pi_fraction(EventuallyPeriodicSeq::parse("(110)", 1));
    CHECK(poly_sign_at_base(trib, g.num - g.den) == 0);
    CHECK(is_self_admissible(EventuallyPeriodicSeq::parse("(110)", 1)));

    CHECK_THROWS_AS(quasi_greedy_expansion(q2, Rat(0), 4), DomainError);
}

TEST_CASE("lazy expansion spec examples and duality") {
    Base q2 = Base::rational(1, Rat(2));
    CHECK(lazy_expansion(q2, make_rat(1, 2), 5).str() == "01111");
    CHECK(lazy_expansion(q2, Rat(0), 5).str() == "00000");
    CHECK(lazy_expansion(golden_ratio_base(1), Rat(0), 5).str() == "00000");

    // lazy(x) = reflect(greedy(M/(q-1) - x)) on random rational inputs
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int M = trial % 2 ? 1 : 2;
        Rat q = Rat(1) + random_rat(rng, 1, M * 10, 10);
        if (q <= 1 || q > M + 1) continue;
        Base b = Base::rational(M, q);
        Rat bound = Rat(M) / (q - 1);
        Rat x = random_rat(rng, 0, 50, 50);
        while (x > bound) x -= bound; // wrap into range
        if (x < 0 || x > bound) continue;
        auto lazy = lazy_expansion(b, x, 10);
        auto greedy_dual = greedy_expansion(b, Rat(bound - x), 10);
        for (int i = 0; i < 10; ++i) CHECK(lazy[static_cast<std::size_t>(i)] == M - greedy_dual[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("switch region spec examples") {
    auto sr1 = switch_region(BaseEnclosure(1, RationalInterval(Rat(2))));
    REQUIRE(sr1.blocks.size() == 1);
    CHECK(sr1.blocks[0].interval == RationalInterval(make_rat(1, 2)));

    auto sr2 = switch_region(BaseEnclosure(2, RationalInterval(make_rat(5, 2))));
    REQUIRE(sr2.blocks.size() == 2);
    CHECK(sr2.blocks[0].interval == RationalInterval(make_rat(2, 5), make_rat(8, 15)));
    CHECK(sr2.blocks[1].interval == RationalInterval(make_rat(4, 5), make_rat(14, 15)));

    // block at the golden ratio encloses [phi - 1, 1]
    Base phi = golden_ratio_base(1);
    phi.refine_to(make_rat(1, Int("1000000000000")));
    auto srp = switch_region(phi.enclosure());
    CHECK(srp.blocks[0].interval.contains(Rat(1)));
    CHECK(srp.blocks[0].interval.hi() - 1 < make_rat(1, 100000000));
    CHECK(srp.blocks[0].interval.lo() < make_rat(619, 1000));
    CHECK(srp.blocks[0].interval.lo() > make_rat(617, 1000));
}

TEST_CASE("digit options spec examples") {
    Base q2 = Base::rational(1, Rat(2));
    auto o0 = digit_options(q2, RationalInterval(Rat(0)));
    CHECK((!o0.ambiguous && o0.digits == std::vector<int>{0}));

    Base phi = golden_ratio_base(1);
    auto o1 = digit_options(phi, RationalInterval(make_rat(4, 5)));
    CHECK((!o1.ambiguous && o1.digits == std::vector<int>{0, 1}));

    Base q52 = Base::rational(2, make_rat(5, 2));
    auto o2 = digit_options(q52, RationalInterval(make_rat(7, 10)));
    CHECK((!o2.ambiguous && o2.digits == std::vector<int>{1}));

    // boundary hit resolves exactly in the rational case: x = 1/q
    auto o3 = digit_options(q52, RationalInterval(make_rat(2, 5)));
    CHECK((!o3.ambiguous && o3.digits == std::vector<int>{0, 1}));

    CHECK_THROWS_AS(digit_options(q2, RationalInterval(Rat(3))), DomainError);
}

TEST_CASE("enumerate_expansions spec examples") {
    Base q2 = Base::rational(1, Rat(2));
    auto t0 = enumerate_expansions(q2, RationalInterval(Rat(0)), 8);
    CHECK(t0.live_count == 1);
    CHECK(t0.paths[0].digits.str() == "00000000");

    auto t1 = enumerate_expansions(q2, RationalInterval(make_rat(1, 2)), 6);
    REQUIRE(t1.live_count == 2);
    CHECK(t1.paths[0].digits.str() == "011111");
    CHECK(t1.paths[1].digits.str() == "100000");

    // golden ratio, x = 1: engine count equals the brute-force count taken at
    // the defining value (the enclosure is exact so live paths are certified)
    Base phi = golden_ratio_base(1);
    auto tp = enumerate_expansions_value(phi, phi.value_of(Rat(1)), 12);
    CHECK(tp.ambiguous_count == 0);
    CHECK(tp.live_count > 2);
    // every live path prefix must itself be feasible: remainder in I_q
    for (const auto& p : tp.paths) {
        CHECK(p.status == PathStatus::Live);
    }
    // cross-check count against an independent DP on the fibonacci recursion:
    // expansions of 1 in base phi at depth n are counted by F(n) pattern;
    // verify against a direct feasibility scan using exact arithmetic
    std::size_t direct = 0;
    for (unsigned mask = 0; mask < (1u << 12); ++mask) {
        // w feasible iff remainder after w stays in [0, M/(q-1)] throughout
        QNum r = phi.value_of(Rat(1));
        bool ok = true;
        for (int i = 0; i < 12 && ok; ++i) {
            int d = (mask >> i) & 1u;
            r = r.mul_q().sub_int(d);
            if (r.sign_exact() < 0) ok = false;
            QNum u = r.mul_q().sub(r).sub_int(1);
            if (ok && u.sign_exact() > 0) ok = false;
        }
        if (ok) ++direct;
    }
    CHECK(tp.live_count == direct);
}

TEST_CASE("oracle equivalence on random rational instances") {
    std::mt19937 rng(3111);
    int done = 0;
    while (done < 25) {
        int M = done % 2 ? 2 : 1;
        std::uniform_int_distribution<int> qnum(11, 10 * (M + 1) - 1);
        Rat q(qnum(rng), 10);
        if (q <= make_rat(13, 10) || q > M + 1) continue;
        Rat bound = Rat(M) / (q - 1);
        std::uniform_int_distribution<int> xnum(0, 40);
        Rat x = bound * make_rat(xnum(rng), 40);
        Base b = Base::rational(M, q);
        int depth = 8;
        auto tree = enumerate_expansions(b, RationalInterval(x), depth);
        auto oracle = brute_force_paths(x, q, M, depth);
        REQUIRE(tree.live_count == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i)
            CHECK(tree.paths[i].digits.str() == oracle[i]);
        if (!oracle.empty()) {
            auto g = greedy_expansion(b, x, depth);
            CHECK(g.str() == oracle.back()); // greedy = lexicographically largest
        }
        ++done;
    }
}

TEST_CASE("greedy order compatibility") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        int M = 1;
        std::uniform_int_distribution<int> qnum(11, 19);
        Rat q(qnum(rng), 10);
        Base b = Base::rational(M, q);
        Rat bound = Rat(M) / (q - 1);
        std::uniform_int_distribution<int> xnum(0, 60);
        Rat x = bound * make_rat(xnum(rng), 60), y = bound * make_rat(xnum(rng), 60);
        if (x == y) continue;
        if (x > y) std::swap(x, y);
        auto gx = greedy_expansion(b, x, 12), gy = greedy_expansion(b, y, 12);
        CHECK(gx.digits <= gy.digits); // lexicographic on equal-length prefixes
    }
}

TEST_CASE("quasi-greedy below greedy, equal when greedy infinite") {
    std::mt19937 rng(78);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> qnum(11, 19), xn(1, 30);
        Rat q(qnum(rng), 10);
        Base b = Base::rational(1, q);
        Rat bound = Rat(1) / (q - 1);
        Rat x = bound * make_rat(xn(rng), 30);
        auto g = greedy_expansion(b, x, 14);
        auto a = quasi_greedy_expansion(b, x, 14);
        CHECK(a.digits <= g.digits);
        if (a.digits != g.digits) {
            // greedy must have terminated: its value is exact on a prefix
            Rat partial = 0;
            for (int i = 0; i < 14; ++i)
                partial += g[static_cast<std::size_t>(i)] * pow_rat(q, -(i + 1));
            CHECK(partial == x);
        }
    }
}

TEST_CASE("uniqueness certificate spec examples") {
    Base q2 = Base::rational(1, Rat(2));
    CHECK(uniqueness_certificate(EventuallyPeriodicSeq::constant(0, 1), q2, 40).unique());

    Base phi = golden_ratio_base(1);
    auto v = uniqueness_certificate(EventuallyPeriodicSeq::parse("(10)", 1), phi, 40);
    CHECK(v.not_unique());

    Base q39 = Base::rational(1, make_rat(39, 20));
    auto w = uniqueness_certificate(EventuallyPeriodicSeq::parse("110(0)", 1), q39, 40);
    CHECK(w.not_unique());
    // the reflected condition fails on the all-zero tail: 0^inf after a 1
    CHECK(w.witness >= 1);
}

TEST_CASE("unique sequences have a single live path") {
    Base q19 = Base::rational(1, make_rat(19, 10));
    std::vector<EventuallyPeriodicSeq> unique_seqs;
    std::mt19937 rng(500);
    std::uniform_int_distribution<int> digit(0, 1), prelen(0, 3), perlen(1, 4);
    int found = 0;
    for (int trial = 0; trial < 400 && found < 30; ++trial) {
        std::vector<int> pre, per;
        int pl = prelen(rng), el = perlen(rng);
        for (int i = 0; i < pl; ++i) pre.push_back(digit(rng));
        for (int i = 0; i < el; ++i) per.push_back(digit(rng));
        EventuallyPeriodicSeq s(DigitWord(pre, 1), DigitWord(per, 1));
        auto v = uniqueness_certificate(s, q19, 48);
        if (!v.unique()) continue;
        ++found;
        QNum x = pi_value(q19, s);
        auto tree = enumerate_expansions_value(q19, x, 40);
        CHECK(tree.live_count == 1);
        CHECK(tree.ambiguous_count == 0);
    }
    CHECK(found >= 5);
}

TEST_CASE("switch blocks pairwise disjoint above the golden ratio") {
    std::mt19937 rng(600);
    for (int M : {2, 3}) {
        Rat gr = golden_ratio_general(M).q.hi();
        for (int trial = 0; trial < 50; ++trial) {
            std::uniform_int_distribution<int> step(1, 99);
            Rat q = gr + (Rat(M + 1) - gr) * make_rat(step(rng), 100);
            if (q >= M + 1) continue;
            auto sr = switch_region(BaseEnclosure(M, RationalInterval(q)));
            for (std::size_t i = 0; i + 1 < sr.blocks.size(); ++i)
                CHECK(sr.blocks[i].interval.hi() < sr.blocks[i + 1].interval.lo());
        }
    }
}

TEST_CASE("inflated switch blocks stay disjoint above the Komornik-Loreti base") {
    for (int M : {2, 3, 4}) {
        RationalInterval kl = komornik_loreti(M, make_rat(1, 1000000));
        // delta = (1/3)(2 q_KL - 2 - M)/(q_KL^2 - q_KL), outward-rounded up
        Rat delta = (2 * kl.hi() - 2 - M) / (3 * (kl.lo() * kl.lo() - kl.hi()));
        REQUIRE(delta > 0);
        std::mt19937 rng(700 + M);
        std::uniform_int_distribution<int> step(1, 9);
        for (int trial = 0; trial < 20; ++trial) {
            Rat q = kl.hi() + (Rat(M + 1) - kl.hi()) * make_rat(step(rng), 10);
            if (q >= M + 1) continue;
            auto sr = switch_region(BaseEnclosure(M, RationalInterval(q)));
            for (std::size_t i = 0; i + 1 < sr.blocks.size(); ++i)
                CHECK(sr.blocks[i].interval.hi() + delta < sr.blocks[i + 1].interval.lo() - delta);
        }
    }
}

TEST_CASE("separation of univoque points at the switch-region scale") {
    // |pi(a) - pi(b)| <= C q^{-n} forces agreement on the first n digits
    Base b = Base::rational(1, make_rat(19, 10));
    Rat q(19, 10);
    Rat c = (Rat(1) / (q - 1) - 1) / 2;
    REQUIRE(c > 0);
    std::mt19937 rng(900);
    std::uniform_int_distribution<int> digit(0, 1), prelen(0, 3), perlen(1, 4);
    std::vector<EventuallyPeriodicSeq> uniques;
    for (int trial = 0; trial < 600 && uniques.size() < 40; ++trial) {
        std::vector<int> pre, per;
        int pl = prelen(rng), el = perlen(rng);
        for (int i = 0; i < pl; ++i) pre.push_back(digit(rng));
        for (int i = 0; i < el; ++i) per.push_back(digit(rng));
        EventuallyPeriodicSeq s(DigitWord(pre, 1), DigitWord(per, 1));
        if (uniqueness_certificate(s, b, 48).unique()) uniques.push_back(s);
    }
    REQUIRE(uniques.size() >= 10);
    int pairs = 0;
    for (std::size_t i = 0; i < uniques.size(); ++i)
        for (std::size_t j = i + 1; j < uniques.size(); ++j) {
            Rat xa = eval_pi_exact(q, uniques[i]);
            Rat xb = eval_pi_exact(q, uniques[j]);
            Rat gap = xa > xb ? xa - xb : xb - xa;
            if (gap == 0) continue;
            // largest n with gap <= C q^{-n}
            int n = 0;
            while (gap <= c * pow_rat(q, -(n + 1)) && n < 64) ++n;
            for (int k = 0; k < n; ++k)
                CHECK(uniques[i].at(static_cast<std::size_t>(k)) ==
                      uniques[j].at(static_cast<std::size_t>(k)));
            ++pairs;
        }
    CHECK(pairs > 0);
}

TEST_CASE("interval-only bases report ambiguity instead of guessing") {
    // an enclosure strictly containing the golden ratio cannot decide digit 2
    Base phi_ivl = Base::interval_only(1, RationalInterval(make_rat(1618, 1000), make_rat(1619, 1000)));
    CHECK_THROWS_AS(greedy_expansion(phi_ivl, Rat(1), 5), PrecisionExhausted);
    // but digits certifiable over the whole enclosure still come out
    CHECK(greedy_expansion(phi_ivl, Rat(1), 1).str() == "1");
}

TEST_CASE("alpha digits and periodicity detection") {
    Base phi = golden_ratio_base(1);
    auto ap = alpha_if_periodic(phi, 16);
    REQUIRE(ap.has_value());
    CHECK(ap->str() == "(10)");
    Base trib = tribonacci_base();
    auto at = alpha_if_periodic(trib, 16);
    REQUIRE(at.has_value());
    CHECK(at->str() == "(110)");
    CHECK(alpha_prefix(Base::rational(1, Rat(2)), 6).str() == "111111");
    CHECK(alpha_prefix(Base::rational(2, Rat(2)), 6).str() == "111111");
}
