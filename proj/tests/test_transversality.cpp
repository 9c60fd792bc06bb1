#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qexp/constants.hpp"
#include "qexp/transversality.hpp"

#include <cmath>
#include <random>

using namespace qexp;

TEST_CASE("star function case rows") {
    auto s1 = star_function(1);
    CHECK(s1.head == Poly(std::vector<Rat>{Rat(1), Rat(-1), Rat(-1), Rat(-1), make_rat(1, 2)}));
    CHECK(s1.tail_coef == 1);
    CHECK(s1.tail_from == 5);
    // x_1 = 2^{-2/3}: the enclosure cubes into [1/4 - eps, 1/4 + eps]
    CHECK(s1.xM.pow(3).contains(make_rat(1, 4)));

    auto s7 = star_function(7);
    CHECK(s7.head == Poly(std::vector<Rat>{Rat(1), Rat(-6)}));
    CHECK(s7.tail_coef == 7);
    CHECK(s7.tail_from == 2);
    CHECK(s7.xM_rational);
    CHECK(s7.xM_rat == make_rat(1, 4));

    auto s6 = star_function(6);
    CHECK(s6.head == Poly(std::vector<Rat>{Rat(1), Rat(-5)}));
    CHECK(s6.tail_coef == 6);
    CHECK(s6.xM_rat == make_rat(1, 4));

    auto s3 = star_function(3);
    CHECK(s3.head == Poly(std::vector<Rat>{Rat(1), Rat(-3), make_rat(-1, 2)}));
    CHECK(s3.tail_coef == 3);
    CHECK(s3.tail_from == 3);
    // x_3 = (-1 + sqrt(3))/2 solves 2x^2 + 2x - 1 = 0
    CHECK(s3.xM_poly == Poly(std::vector<Rat>{Rat(-1), Rat(2), Rat(2)}));

    auto s2 = star_function(2);
    CHECK(s2.head == Poly(std::vector<Rat>{Rat(1), Rat(-2), make_rat(-1, 2)}));
    CHECK(s2.xM_poly == Poly(std::vector<Rat>{Rat(-1), Rat(2), Rat(1)}));
}

TEST_CASE("verify_star exact evidence") {
    auto c7 = verify_star(7);
    CHECK(c7.h_at_xM == RationalInterval(make_rat(1, 12)));
    CHECK(c7.dh_at_xM == RationalInterval(make_rat(-5, 9)));
    CHECK(c7.delta == make_rat(1, 24));
    CHECK(c7.kl_range_inside);

    auto c6 = verify_star(6);
    CHECK(c6.h_at_xM == RationalInterval(make_rat(1, 4)));
    CHECK(c6.dh_at_xM == RationalInterval(make_rat(-1, 3)));
    CHECK(c6.delta == make_rat(1, 8));
}

TEST_CASE("verify_star succeeds for M = 1..50 with the proof formulas") {
    for (int M = 1; M <= 50; ++M) {
        auto cert = verify_star(M);
        CHECK(cert.h_at_xM.lo() > 0);
        CHECK(cert.dh_at_xM.hi() < 0);
        CHECK(cert.delta > 0);
        CHECK(cert.kl_range_inside);
        int k = M / 2;
        if (k >= 3) {
            if (M % 2 == 1) {
                CHECK(cert.h_at_xM == RationalInterval(make_rat(1, k + k * k)));
                CHECK(cert.dh_at_xM ==
                      RationalInterval(Rat(1) + make_rat(1, k * k) + make_rat(4, k) - Rat(k)));
            } else {
                CHECK(cert.h_at_xM == RationalInterval(make_rat(1, k + 1)));
                CHECK(cert.dh_at_xM == RationalInterval(Rat(2) + make_rat(2, k) - Rat(k)));
            }
        }
    }
}

TEST_CASE("M=1 star evidence via interval arithmetic") {
    auto c1 = verify_star(1);
    // h(2^{-2/3}) ~ 0.0700, h'(2^{-2/3}) ~ -0.0979
    CHECK(c1.h_at_xM.lo() > make_rat(69, 1000));
    CHECK(c1.h_at_xM.hi() < make_rat(71, 1000));
    CHECK(c1.dh_at_xM.hi() < make_rat(-97, 1000));
    CHECK(c1.dh_at_xM.lo() > make_rat(-99, 1000));
    CHECK(c1.h_at_xM.width() < make_rat(1, 1000000));
}

TEST_CASE("transversality_root spec examples") {
    Rat prec(1, Int("1000000000000"));
    // a = 1110^inf, b = 0^inf: g(x) = 1 - x - x^2 - x^3, root at the
    // positive solution of x^3 = x^2 + x + 1 in q-coordinates
    DiffSeries trib({-1, -1, -1}, {0}, 1);
    auto r1 = transversality_root(trib, RationalInterval(make_rat(179, 100), make_rat(199, 100)), prec);
    REQUIRE(r1.unique());
    CHECK(r1.enclosure.width() <= prec);
    CHECK(r1.enclosure.lo() > make_rat(Int("1839286755"), Int("1000000000")) - make_rat(1, 100000000));
    CHECK(r1.enclosure.hi() < make_rat(Int("1839286756"), Int("1000000000")) + make_rat(1, 100000000));

    // a = 1^inf, b = 0^inf: root exactly at the endpoint q = 2
    DiffSeries ones({}, {-1}, 1);
    auto r2 = transversality_root(ones, RationalInterval(make_rat(179, 100), Rat(2)), prec);
    REQUIRE(r2.unique());
    CHECK(r2.enclosure == RationalInterval(Rat(2)));

    // a = (10)^inf, b = 0^inf: the root is the golden ratio, below the window
    DiffSeries fib({}, {-1, 0}, 1);
    auto r3 = transversality_root(fib, RationalInterval(make_rat(179, 100), make_rat(199, 100)), prec);
    CHECK(r3.no_root());
}

TEST_CASE("transversality_root window validation") {
    DiffSeries trib({-1, -1, -1}, {0}, 1);
    CHECK_THROWS_AS(
        transversality_root(trib, RationalInterval(make_rat(3, 2), make_rat(19, 10)), make_rat(1, 1000)),
        DomainError);
}

TEST_CASE("root uniqueness against a brute-force sign scan") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> coeff(-1, 1), len(1, 3);
    Rat lo(180, 100), hi(199, 100);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> pre, per;
        int pl = len(rng) - 1, el = len(rng);
        for (int i = 0; i < pl; ++i) pre.push_back(coeff(rng));
        for (int i = 0; i < el; ++i) per.push_back(coeff(rng));
        DiffSeries d(pre, per, 1);
        auto rr = transversality_root(d, RationalInterval(lo, hi), make_rat(1, Int("1000000000")));
        // 10^4-point scan of g(1/q) over the window
        int sign_changes = 0;
        double root_at = -1;
        double prev = 0;
        bool have_prev = false;
        for (int i = 0; i <= 10000; ++i) {
            double q = 1.80 + (1.99 - 1.80) * i / 10000.0;
            double x = 1.0 / q, xp = 1.0, val = 1.0;
            for (std::size_t j = 0; j < 64; ++j) {
                xp *= x;
                val += d.at(j) * xp;
            }
            if (have_prev && prev * val < 0) {
                ++sign_changes;
                root_at = q;
            }
            if (val != 0) {
                prev = val;
                have_prev = true;
            }
        }
        CHECK(sign_changes <= 1);
        if (rr.unique() && rr.enclosure.hi() < hi && rr.enclosure.lo() > lo) {
            // interior unique root: the scan finds it in the right place
            if (sign_changes == 1) {
                double lo_d = std::stod(rat_to_decimal(rr.enclosure.lo(), 12, false));
                double hi_d = std::stod(rat_to_decimal(rr.enclosure.hi(), 12, true));
                CHECK(root_at >= lo_d - 2e-4);
                CHECK(root_at <= hi_d + 2e-4);
                ++checked;
            }
        }
        if (rr.no_root()) CHECK(sign_changes == 0);
    }
    CHECK(checked > 0);
}

TEST_CASE("unique roots reproduce the defining value equation") {
    // if pi_q(a) = pi_q(b) + 1 at the root, the series numerator vanishes there
    DiffSeries d({-1, -1, 0, -1}, {0}, 1);
    auto rr = transversality_root(d, RationalInterval(make_rat(180, 100), make_rat(199, 100)),
                                  make_rat(1, Int("1000000000")));
    if (rr.unique() && rr.base) {
        CHECK(poly_sign_at_base(*rr.base, d.numerator_q()) == 0);
        // reconstruct explicit digit sequences: a_i = max(-d_i, 0), b_i = max(d_i, 0)
        std::vector<int> apre, bpre;
        for (std::size_t i = 0; i < 8; ++i) {
            apre.push_back(std::max(-d.at(i), 0));
            bpre.push_back(std::max(d.at(i), 0));
        }
        EventuallyPeriodicSeq a(DigitWord(apre, 1), DigitWord({0}, 1));
        EventuallyPeriodicSeq b(DigitWord(bpre, 1), DigitWord({0}, 1));
        PiFraction fa = pi_fraction(a), fb = pi_fraction(b);
        // pi(a) - pi(b) - 1 = 0 at the root
        Poly lhs = fa.num * fb.den - (fb.num + fb.den) * fa.den;
        CHECK(poly_sign_at_base(*rr.base, lhs) == 0);
    }
}

TEST_CASE("no-root and unique-root verdicts are stable under refinement") {
    DiffSeries d({-1, -1, -1}, {0}, 1);
    RationalInterval window(make_rat(180, 100), make_rat(199, 100));
    auto coarse = transversality_root(d, window, make_rat(1, 1000));
    auto fine = transversality_root(d, window, make_rat(1, Int("1000000000000000")));
    CHECK(coarse.unique() == fine.unique());
    if (coarse.unique()) CHECK(coarse.enclosure.contains(fine.enclosure));
}

TEST_CASE("inspection inequalities certified") {
    auto certs1 = verify_inspection_inequalities(1);
    REQUIRE(certs1.size() == 2);
    for (const auto& c : certs1) {
        CHECK(c.certified);
        CHECK(c.sup_bound < 0);
        CHECK(c.domain.hi() == Rat(2));
    }
    for (int M : {2, 3}) {
        auto certs = verify_inspection_inequalities(M);
        REQUIRE(!certs.empty());
        CHECK(certs[0].label == "p=2");
        CHECK(certs[0].domain.lo() == make_rat(243, 100));
        for (const auto& c : certs) CHECK(c.certified);
    }
    // exact single-point check for p >= 3: -1 + 2w + p/(p-1)^2 < 0
    for (int p = 3; p <= 8; ++p)
        CHECK(Rat(-1) + make_rat(2, 100) + Rat(p) / ((Rat(p) - 1) * (Rat(p) - 1)) < 0);
    auto certs5 = verify_inspection_inequalities(5);
    CHECK(certs5.size() == 3); // p = 3, 4, 5
}
