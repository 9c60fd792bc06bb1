#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qexp/constants.hpp"
#include "qexp/series.hpp"
#include "qexp/two_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace qexp;

namespace {

// canonical key identifying a pair with its reflection partner
std::string pair_key(const EventuallyPeriodicSeq& a, const EventuallyPeriodicSeq& b) {
    std::string k1 = a.str() + "|" + b.str();
    std::string k2 = reflect(b).str() + "|" + reflect(a).str();
    return std::min(k1, k2);
}

double pi_double(const EventuallyPeriodicSeq& s, double q, int terms = 64) {
    double x = 1.0 / q, xp = 1.0, acc = 0.0;
    for (int i = 0; i < terms; ++i) {
        xp *= x;
        acc += s.at(static_cast<std::size_t>(i)) * xp;
    }
    return acc;
}

} // namespace

TEST_CASE("theorem_bound") {
    CHECK(theorem_bound(RationalInterval(make_rat(7, 10))) == RationalInterval(make_rat(2, 5)));
    CHECK(theorem_bound(RationalInterval(make_rat(2, 5))) == RationalInterval(Rat(0)));
    CHECK(theorem_bound(RationalInterval(make_rat(9, 20), make_rat(11, 20))) ==
          RationalInterval(Rat(0), make_rat(1, 10)));
    CHECK_THROWS_AS(theorem_bound(RationalInterval(make_rat(1, 2), make_rat(3, 2))), DomainError);
    // monotone and at most 2-Lipschitz as an interval map
    for (int i = 0; i <= 20; ++i)
        for (int j = i; j <= 20; ++j) {
            RationalInterval d(make_rat(i, 20), make_rat(j, 20));
            auto b = theorem_bound(d);
            CHECK(b.lo() <= b.hi());
            CHECK(b.width() <= 2 * d.width());
            auto wider = theorem_bound(RationalInterval(Rat(0), make_rat(j, 20)));
            CHECK(wider.hi() >= b.hi());
        }
}

TEST_CASE("check_u2_point rejects the tribonacci greedy pair") {
    // value equality holds via q^3 = q^2 + q + 1, but 1110^inf is not univoque
    Base trib = tribonacci_base();
    auto a = EventuallyPeriodicSeq::parse("1110(0)", 1);
    auto b = EventuallyPeriodicSeq::constant(0, 1);
    auto cert = check_u2_point(DigitWord({}, 1), 0, a, b, trib, 32);
    CHECK_FALSE(cert.valid);
    CHECK(cert.checks.a_unique.not_unique());
    CHECK(cert.checks.value_equality); // pi(0 a) = pi(1 b) does hold
}

TEST_CASE("check_u2_point rejects unequal values") {
    auto zero = EventuallyPeriodicSeq::constant(0, 1);
    auto cert = check_u2_point(DigitWord({}, 1), 0, zero, zero, Base::rational(1, make_rat(19, 10)), 24);
    CHECK_FALSE(cert.valid);
    CHECK_FALSE(cert.checks.value_equality);
    CHECK_THROWS_AS(
        check_u2_point(DigitWord({}, 1), 1, zero, zero, Base::rational(1, make_rat(19, 10)), 8),
        DomainError);
}

TEST_CASE("pair search window precondition") {
    CHECK_THROWS_AS(
        construct_u2_candidates(1, RationalInterval(make_rat(162, 100), make_rat(170, 100)), 3, 2),
        DomainError);
}

TEST_CASE("trivial pair set has no interior root") {
    // period 1, no preperiod: sequences 0^inf and 1^inf only; the only
    // nonzero difference roots at q = 2, outside an interior window
    auto recs =
        construct_u2_candidates(1, RationalInterval(make_rat(180, 100), make_rat(199, 100)), 1, 0);
    CHECK(recs.empty());
}

TEST_CASE("constructive records validate and enumerate to exactly two paths") {
    auto recs =
        construct_u2_candidates(1, RationalInterval(make_rat(180, 100), make_rat(190, 100)), 3, 2);
    REQUIRE(!recs.empty());
    int constructive = 0, validated = 0;
    for (const auto& r : recs) {
        CHECK(r.root.unique());
        if (!r.constructive) continue;
        ++constructive;
        if (validated < 6) { // full validation is repeated in the acceptance run
            auto cert = check_u2_point(DigitWord({}, 1), 0, r.a, r.b, *r.root.base, 40);
            CHECK(cert.valid);
            CHECK(cert.checks.live_paths == 2);
            // soundness at greater depth
            auto deep = enumerate_expansions_value(
                *r.root.base,
                pi_value(*r.root.base, EventuallyPeriodicSeq(DigitWord(std::vector<int>{0}, 1),
                                                             r.a.period())),
                60);
            (void)deep;
            ++validated;
        }
    }
    CHECK(constructive > 0);
    // records sorted by root location
    for (std::size_t i = 0; i + 1 < recs.size(); ++i)
        CHECK(recs[i].root.enclosure.lo() <= recs[i + 1].root.enclosure.lo());
}

TEST_CASE("pair search completeness against a grid-scan oracle") {
    RationalInterval window(make_rat(180, 100), make_rat(195, 100));
    auto records = construct_u2_candidates(1, window, 3, 2);
    std::map<std::string, const PairSearchRecord*> found;
    for (const auto& r : records) found[pair_key(r.a, r.b)] = &r;

    // independent scan: 10^4 grid, per-sequence value tables in doubles
    auto seqs = all_canonical_seqs(1, 2, 3);
    const int grid = 10000;
    std::vector<std::vector<double>> value(seqs.size(), std::vector<double>(grid + 1));
    for (std::size_t s = 0; s < seqs.size(); ++s)
        for (int i = 0; i <= grid; ++i) {
            double q = 1.80 + (1.95 - 1.80) * i / grid;
            value[s][static_cast<std::size_t>(i)] = pi_double(seqs[s], q);
        }
    std::set<std::string> oracle_pairs;
    std::map<std::string, double> oracle_root;
    for (std::size_t ia = 0; ia < seqs.size(); ++ia)
        for (std::size_t ib = 0; ib < seqs.size(); ++ib) {
            if (ia == ib) continue;
            bool hit = false;
            double where = 0;
            double prev = 0;
            for (int i = 0; i <= grid && !hit; ++i) {
                double f = value[ia][static_cast<std::size_t>(i)] -
                           value[ib][static_cast<std::size_t>(i)] - 1.0;
                if (std::fabs(f) < 1e-8 || (i > 0 && prev * f < 0)) {
                    hit = true;
                    where = 1.80 + (1.95 - 1.80) * i / grid;
                }
                prev = f;
            }
            if (hit) {
                oracle_pairs.insert(pair_key(seqs[ia], seqs[ib]));
                oracle_root[pair_key(seqs[ia], seqs[ib])] = where;
            }
        }

    // every oracle hit is found by the certified search, at the same root
    for (const auto& key : oracle_pairs) {
        auto it = found.find(key);
        REQUIRE_MESSAGE(it != found.end(), "oracle pair missing from search: " << key);
        double lo = std::stod(rat_to_decimal(it->second->root.enclosure.lo(), 12, false));
        double hi = std::stod(rat_to_decimal(it->second->root.enclosure.hi(), 12, true));
        CHECK(oracle_root[key] >= lo - 3e-4);
        CHECK(oracle_root[key] <= hi + 3e-4);
    }
    // and the search finds nothing the oracle misses
    for (const auto& [key, rec] : found) CHECK(oracle_pairs.count(key) == 1);
    CHECK(found.size() == oracle_pairs.size());
}

TEST_CASE("no pair yields two disjoint roots under window splitting") {
    auto seqs = all_canonical_seqs(1, 1, 3);
    RationalInterval left(make_rat(180, 100), make_rat(189, 100));
    RationalInterval right(make_rat(189, 100), make_rat(198, 100));
    for (const auto& a : seqs)
        for (const auto& b : seqs) {
            if (a == b) continue;
            DiffSeries d = DiffSeries::between(a, b);
            auto r1 = transversality_root(d, left, make_rat(1, 1000000000));
            auto r2 = transversality_root(d, right, make_rat(1, 1000000000));
            if (r1.unique() && r2.unique()) {
                // both windows can only report the shared endpoint root
                bool touching = r1.enclosure.hi() >= right.lo() - Rat(1, 1000000) &&
                                r2.enclosure.lo() <= left.hi() + Rat(1, 1000000);
                CHECK(touching);
            }
        }
}

TEST_CASE("reduce_to_u2 spec examples") {
    auto recs =
        construct_u2_candidates(1, RationalInterval(make_rat(180, 100), make_rat(190, 100)), 3, 2);
    const PairSearchRecord* pick = nullptr;
    for (const auto& r : recs)
        if (r.constructive) {
            pick = &r;
            break;
        }
    REQUIRE(pick != nullptr);
    const Base& base = *pick->root.base;

    // a valid two-expansion point reduces to itself
    EventuallyPeriodicSeq ma(DigitWord(std::vector<int>{0}, 1), pick->a.period());
    std::vector<int> ma_pre{0};
    for (std::size_t i = 0; i < pick->a.preperiod_len(); ++i)
        ma_pre.push_back(pick->a.preperiod()[i]);
    EventuallyPeriodicSeq ma_full(DigitWord(ma_pre, 1), pick->a.period());
    QNum x = pi_value(base, ma_full);
    auto self = reduce_to_u2_value(base, x, 10);
    REQUIRE(self.has_value());
    CHECK(self->first == 0);

    // x = 0 has a unique expansion and no branch point
    CHECK_FALSE(reduce_to_u2_value(base, base.value_of(Rat(0)), 8).has_value());

    // prefixing one digit shifts the branch point to k = 1
    std::vector<int> w1_pre{1};
    for (int d : ma_pre) w1_pre.push_back(d);
    EventuallyPeriodicSeq w1(DigitWord(w1_pre, 1), pick->a.period());
    auto shifted = reduce_to_u2_value(base, pi_value(base, w1), 10);
    REQUIRE(shifted.has_value());
    CHECK(shifted->first == 1);
}
