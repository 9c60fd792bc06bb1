#include "qexp/dimension.hpp"

#include "qexp/constants.hpp"
#include "qexp/expansion.hpp"
#include "qexp/two_expansion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace qexp {

namespace {

// State component: 0 = no active match, 1..L = match of length idx-1,
// L+1 = saturated (upper automaton only).
struct Automaton {
    int M;
    long L;
    std::vector<int> alpha; // alpha[1..L], 1-based

    int sat() const { return static_cast<int>(L) + 1; }
    int states_per_side(bool with_sat) const { return static_cast<int>(L) + (with_sat ? 2 : 1); }

    // returns false on certified violation; with_sat=false treats reaching
    // the window edge as a dead end (lower automaton)
    bool step(bool with_sat, int ia, int ib, int d, int& na, int& nb) const {
        // side tracking matches against alpha
        if (with_sat && ia == sat()) {
            na = sat();
        } else if (ia == 0) {
            na = d < M ? 1 : 0;
        } else {
            int a = alpha[static_cast<std::size_t>(ia)];
            if (d > a) return false;
            if (d == a) {
                if (ia == static_cast<int>(L) && !with_sat) return false;
                na = ia + 1; // == sat() at the window edge
            } else {
                na = d < M ? 1 : 0;
            }
        }
        // side tracking matches against the reflection of alpha
        if (with_sat && ib == sat()) {
            nb = sat();
        } else if (ib == 0) {
            nb = d > 0 ? 1 : 0;
        } else {
            int b = M - alpha[static_cast<std::size_t>(ib)];
            if (d < b) return false;
            if (d == b) {
                if (ib == static_cast<int>(L) && !with_sat) return false;
                nb = ib + 1;
            } else {
                nb = d > 0 ? 1 : 0;
            }
        }
        return true;
    }
};

Automaton build_automaton(const Base& base, long L) {
    Automaton a;
    a.M = base.M();
    a.L = L;
    a.alpha.assign(static_cast<std::size_t>(L) + 1, 0);
    for (long k = 1; k <= L; ++k)
        a.alpha[static_cast<std::size_t>(k)] = alpha_digit(base, static_cast<std::size_t>(k));
    return a;
}

struct CountSnapshots {
    std::vector<std::pair<long, Int>> at; // (k, total count) along the doubling chain
    Int final_count;
};

// total accepted-word count after n steps of the upper automaton
CountSnapshots upper_counts(const Automaton& a, long n) {
    int side = a.states_per_side(true);
    std::size_t ns = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
    auto id = [side](int ia, int ib) {
        return static_cast<std::size_t>(ia) * static_cast<std::size_t>(side) +
               static_cast<std::size_t>(ib);
    };
    std::vector<Int> v(ns, 0), next(ns, 0);
    v[id(0, 0)] = 1;
    std::vector<long> chain;
    for (long k = n; k >= 1; k /= 2) chain.push_back(k);
    CountSnapshots out;
    for (long step = 1; step <= n; ++step) {
        std::fill(next.begin(), next.end(), Int(0));
        for (int ia = 0; ia < side; ++ia)
            for (int ib = 0; ib < side; ++ib) {
                const Int& c = v[id(ia, ib)];
                if (c == 0) continue;
                for (int d = 0; d <= a.M; ++d) {
                    int na, nb;
                    if (a.step(true, ia, ib, d, na, nb)) next[id(na, nb)] += c;
                }
            }
        v.swap(next);
        if (std::find(chain.begin(), chain.end(), step) != chain.end()) {
            Int total = 0;
            for (const Int& c : v) total += c;
            out.at.emplace_back(step, total);
        }
    }
    Int total = 0;
    for (const Int& c : v) total += c;
    out.final_count = total;
    return out;
}

struct LowerMachine {
    int side;
    std::vector<bool> live;   // forever-extendable states
    std::vector<bool> reach;  // reachable from the fresh start within live
    std::size_t id(int ia, int ib) const {
        return static_cast<std::size_t>(ia) * static_cast<std::size_t>(side) +
               static_cast<std::size_t>(ib);
    }
};

LowerMachine build_lower(const Automaton& a) {
    LowerMachine m;
    m.side = a.states_per_side(false);
    std::size_t ns = static_cast<std::size_t>(m.side) * static_cast<std::size_t>(m.side);
    m.live.assign(ns, true);
    // greatest fixed point: keep states with an outgoing edge into the live set
    bool changed = true;
    while (changed) {
        changed = false;
        for (int ia = 0; ia < m.side; ++ia)
            for (int ib = 0; ib < m.side; ++ib) {
                std::size_t s = m.id(ia, ib);
                if (!m.live[s]) continue;
                bool ok = false;
                for (int d = 0; d <= a.M && !ok; ++d) {
                    int na, nb;
                    if (a.step(false, ia, ib, d, na, nb) && m.live[m.id(na, nb)]) ok = true;
                }
                if (!ok) {
                    m.live[s] = false;
                    changed = true;
                }
            }
    }
    m.reach.assign(ns, false);
    std::vector<std::size_t> stack;
    if (m.live[m.id(0, 0)]) {
        m.reach[m.id(0, 0)] = true;
        stack.push_back(m.id(0, 0));
    }
    while (!stack.empty()) {
        std::size_t s = stack.back();
        stack.pop_back();
        int ia = static_cast<int>(s) / m.side, ib = static_cast<int>(s) % m.side;
        for (int d = 0; d <= a.M; ++d) {
            int na, nb;
            if (!a.step(false, ia, ib, d, na, nb)) continue;
            std::size_t t = m.id(na, nb);
            if (m.live[t] && !m.reach[t]) {
                m.reach[t] = true;
                stack.push_back(t);
            }
        }
    }
    return m;
}

// length-n words from the fresh start whose whole path stays live
Int lower_word_count(const Automaton& a, const LowerMachine& m, long n) {
    std::size_t ns = m.live.size();
    std::vector<Int> v(ns, 0), next(ns, 0);
    if (m.live[m.id(0, 0)]) v[m.id(0, 0)] = 1;
    for (long step = 1; step <= n; ++step) {
        std::fill(next.begin(), next.end(), Int(0));
        for (int ia = 0; ia < m.side; ++ia)
            for (int ib = 0; ib < m.side; ++ib) {
                std::size_t s = m.id(ia, ib);
                if (!m.live[s]) continue;
                const Int& c = v[s];
                if (c == 0) continue;
                for (int d = 0; d <= a.M; ++d) {
                    int na, nb;
                    if (a.step(false, ia, ib, d, na, nb) && m.live[m.id(na, nb)])
                        next[m.id(na, nb)] += c;
                }
            }
        v.swap(next);
    }
    Int total = 0;
    for (const Int& c : v) total += c;
    return total;
}

// cycle count (T^n)_{ss} at a well-connected live state s
Int lower_cycle_count(const Automaton& a, const LowerMachine& m, long n) {
    std::size_t ns = m.live.size();
    // double-precision mass to pick a promising diagonal state
    std::vector<double> fwd(ns, 0.0), tmp(ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s)
        if (m.live[s] && m.reach[s]) fwd[s] = 1.0;
    for (int it = 0; it < 24; ++it) {
        std::fill(tmp.begin(), tmp.end(), 0.0);
        double norm = 0;
        for (int ia = 0; ia < m.side; ++ia)
            for (int ib = 0; ib < m.side; ++ib) {
                std::size_t s = m.id(ia, ib);
                if (!m.live[s] || fwd[s] == 0.0) continue;
                for (int d = 0; d <= a.M; ++d) {
                    int na, nb;
                    if (a.step(false, ia, ib, d, na, nb) && m.live[m.id(na, nb)]) {
                        tmp[m.id(na, nb)] += fwd[s];
                        norm += fwd[s];
                    }
                }
            }
        if (norm == 0) break;
        for (auto& x : tmp) x /= norm;
        fwd.swap(tmp);
    }
    // candidates: largest stationary mass among reachable live states
    std::vector<std::size_t> cand;
    for (std::size_t s = 0; s < ns; ++s)
        if (m.live[s] && m.reach[s]) cand.push_back(s);
    std::sort(cand.begin(), cand.end(),
              [&](std::size_t x, std::size_t y) { return fwd[x] > fwd[y]; });
    if (cand.size() > 4) cand.resize(4);

    Int best = 0;
    for (std::size_t s0 : cand) {
        std::vector<Int> v(ns, 0), next(ns, 0);
        v[s0] = 1;
        for (long step = 1; step <= n; ++step) {
            std::fill(next.begin(), next.end(), Int(0));
            for (int ia = 0; ia < m.side; ++ia)
                for (int ib = 0; ib < m.side; ++ib) {
                    std::size_t s = m.id(ia, ib);
                    if (!m.live[s]) continue;
                    const Int& c = v[s];
                    if (c == 0) continue;
                    for (int d = 0; d <= a.M; ++d) {
                        int na, nb;
                        if (a.step(false, ia, ib, d, na, nb) && m.live[m.id(na, nb)])
                            next[m.id(na, nb)] += c;
                    }
                }
            v.swap(next);
        }
        if (v[s0] > best) best = v[s0];
    }
    return best;
}

// Certified growth-rate bound for the upper automaton. The word count after
// n steps is bounded by poly(n) * lambda^n where lambda is the largest
// spectral radius over strongly connected components; within an irreducible
// component, any positive vector v certifies lambda <= max_i (T v)_i / v_i.
Rat spectral_upper_bound(const Automaton& a) {
    int side = a.states_per_side(true);
    auto id = [side](int ia, int ib) {
        return static_cast<std::size_t>(ia) * static_cast<std::size_t>(side) +
               static_cast<std::size_t>(ib);
    };
    std::size_t ns = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
    std::vector<int> index_of(ns, -1);
    std::vector<std::size_t> states;
    states.push_back(id(0, 0));
    index_of[id(0, 0)] = 0;
    std::vector<std::vector<int>> succ; // multigraph successors by digit
    for (std::size_t head = 0; head < states.size(); ++head) {
        std::size_t s = states[head];
        int ia = static_cast<int>(s) / side, ib = static_cast<int>(s) % side;
        succ.emplace_back();
        for (int d = 0; d <= a.M; ++d) {
            int na, nb;
            if (!a.step(true, ia, ib, d, na, nb)) continue;
            std::size_t t = id(na, nb);
            if (index_of[t] < 0) {
                index_of[t] = static_cast<int>(states.size());
                states.push_back(t);
            }
            succ[head].push_back(index_of[t]);
        }
    }
    const int n = static_cast<int>(states.size());

    // Kosaraju strongly connected components
    std::vector<std::vector<int>> rev(n);
    for (int u = 0; u < n; ++u)
        for (int v : succ[u]) rev[v].push_back(u);
    std::vector<int> fin;
    std::vector<char> seen(n, 0);
    for (int s0 = 0; s0 < n; ++s0) {
        if (seen[s0]) continue;
        std::vector<std::pair<int, std::size_t>> st{{s0, 0}};
        seen[s0] = 1;
        while (!st.empty()) {
            auto& [u, ei] = st.back();
            if (ei < succ[u].size()) {
                int v = succ[u][ei++];
                if (!seen[v]) {
                    seen[v] = 1;
                    st.emplace_back(v, 0);
                }
            } else {
                fin.push_back(u);
                st.pop_back();
            }
        }
    }
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (auto it = fin.rbegin(); it != fin.rend(); ++it) {
        if (comp[*it] >= 0) continue;
        std::vector<int> stack{*it};
        comp[*it] = ncomp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : rev[u])
                if (comp[v] < 0) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }

    Rat best(1); // the full shift over {0} alone already gives rate 1
    const long scale = 1L << 48;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> members;
        for (int u = 0; u < n; ++u)
            if (comp[u] == c) members.push_back(u);
        // internal multigraph edges
        bool has_edge = false;
        for (int u : members)
            for (int v : succ[u])
                if (comp[v] == c) has_edge = true;
        if (!has_edge) continue;
        // right Perron vector: v <- T v, nx[u] = sum of v over successors
        std::vector<double> v(members.size(), 1.0), nx(members.size(), 0.0);
        std::vector<int> pos(n, -1);
        for (std::size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<int>(i);
        for (int it = 0; it < 300; ++it) {
            double norm = 0;
            for (std::size_t i = 0; i < members.size(); ++i) {
                double acc = 0;
                for (int t : succ[members[i]])
                    if (pos[t] >= 0) acc += v[static_cast<std::size_t>(pos[t])];
                nx[i] = acc;
                norm = std::max(norm, acc);
            }
            if (norm == 0) break;
            for (std::size_t i = 0; i < members.size(); ++i) v[i] = nx[i] / norm;
        }
        std::vector<Rat> vr(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            long num = std::lround(std::max(v[i], 1e-12) * static_cast<double>(scale));
            vr[i] = make_rat(std::max(num, 1L), scale);
        }
        // exact Collatz-Wielandt ratio within the component
        for (std::size_t i = 0; i < members.size(); ++i) {
            Rat acc(0);
            for (int t : succ[members[i]])
                if (pos[t] >= 0) acc += vr[static_cast<std::size_t>(pos[t])];
            Rat ratio = acc / vr[i];
            if (ratio > best) best = ratio;
        }
    }
    return best;
}

const Rat kLnEps = make_rat(1, Int("1000000000000000000000000000000")); // 1e-30

} // namespace

WordCountResult admissible_word_count(const Base& base, long n, long L) {
    if (n < 1 || L < 1) throw DomainError("word count needs n >= 1 and L >= 1");
    Automaton a = build_automaton(base, L);
    WordCountResult r;
    r.n = n;
    r.L = L;
    r.upper = upper_counts(a, n).final_count;
    LowerMachine m = build_lower(a);
    r.lower = lower_word_count(a, m, n);
    return r;
}

DimensionEnclosure dim_u_q(const Base& base, long n, long L) {
    if (n < 1 || L < 1) throw DomainError("dimension estimate needs n >= 1 and L >= 1");
    BaseEnclosure enc = base.enclosure();
    Automaton a = build_automaton(base, L);
    CountSnapshots ups = upper_counts(a, n);

    DimensionEnclosure out;
    out.M = enc.M;
    out.q = enc.q;
    out.n = n;
    out.L = L;

    RationalInterval ln_qlo = ln_enclosure(enc.q.lo(), kLnEps);
    RationalInterval ln_qhi = ln_enclosure(enc.q.hi(), kLnEps);

    Rat hi(1);
    for (const auto& [k, count] : ups.at) {
        if (count <= 1) { // at most one cylinder survives: dimension 0
            hi = 0;
            break;
        }
        RationalInterval ln_c = ln_enclosure(count, kLnEps);
        if (!(ln_qlo.lo() > 0)) continue;
        Rat bound = ln_c.hi() / (Rat(k) * ln_qlo.lo());
        hi = std::min(hi, bound);
    }
    // growth-rate bound discards the transient word count
    Rat rate = spectral_upper_bound(a);
    if (rate <= 1) {
        hi = 0;
    } else if (ln_qlo.lo() > 0) {
        Rat rate_bound = ln_enclosure(rate, kLnEps).hi() / ln_qlo.lo();
        hi = std::min(hi, rate_bound);
    }
    hi = std::min(hi, Rat(1));
    hi = std::max(hi, Rat(0));

    LowerMachine m = build_lower(a);
    Int cycles = lower_cycle_count(a, m, n);
    Rat lo(0);
    if (cycles > 1 && ln_qhi.hi() > 0) {
        RationalInterval ln_k = ln_enclosure(cycles, kLnEps);
        lo = ln_k.lo() / (Rat(n) * ln_qhi.hi());
        lo = std::max(lo, Rat(0));
    }
    lo = std::min(lo, hi);
    out.lo = lo;
    out.hi = hi;
    return out;
}

std::vector<ScanRecord> scan_dimension(int M, const std::vector<Base>& grid, long n, long L,
                                       int jobs) {
    RationalInterval kl = komornik_loreti(M, make_rat(1, 100000000));
    for (const auto& b : grid) {
        BaseEnclosure enc = b.enclosure();
        if (enc.M != M) throw DomainError("grid base alphabet mismatch");
        if (!(enc.q.lo() > kl.hi()) || !(enc.q.hi() < Rat(M + 1)))
            throw DomainError("scan grid must lie inside (q_KL, M+1)");
    }
    std::vector<ScanRecord> records(grid.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= grid.size()) return;
            ScanRecord& rec = records[i];
            rec.q = grid[i].enclosure().q;
            try {
                DimensionEnclosure d = dim_u_q(grid[i], n, L);
                rec.dim = d;
                rec.bound = theorem_bound(RationalInterval(d.lo, d.hi));
                if (d.hi < make_rat(1, 2))
                    rec.in_o = ScanRecord::InO::Yes;
                else if (d.lo >= make_rat(1, 2))
                    rec.in_o = ScanRecord::InO::No;
                else
                    rec.in_o = ScanRecord::InO::Undetermined;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        }
    };
    int nw = std::max(1, jobs);
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

} // namespace qexp
