#include "qexp/cli.hpp"

#include "qexp/json_io.hpp"
#include "qexp/series.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>

namespace qexp {

namespace {

struct Common {
    std::string output;
    long budget_depth = 256;
    long budget_splits = 65536;
    bool selftest = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--output", c.output, "write the JSON/CSV result to this file");
    app->add_option("--budget-depth", c.budget_depth, "refinement budget: max depth");
    app->add_option("--budget-splits", c.budget_splits, "refinement budget: max subdivisions");
    app->add_flag("--selftest", c.selftest, "run built-in examples for this subcommand");
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
    if (!c.output.empty()) {
        std::ofstream f(c.output);
        if (!f) throw DomainError("cannot open output file: " + c.output);
        f << text << "\n";
    } else {
        out << text << "\n";
    }
}

void emit_json(const Common& c, std::ostream& out, json j,
               const std::vector<std::string>& argv) {
    RefinementBudget budget{c.budget_depth, c.budget_splits};
    j["provenance"] = provenance(argv, budget);
    emit(c, out, j.dump(2));
}

struct SelftestFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what, std::ostream& out) {
    if (!ok) throw SelftestFailure(what);
    out << "ok: " << what << "\n";
}

int selftest_constants(std::ostream& out) {
    expect(golden_ratio_general(2).q == RationalInterval(Rat(2)), "gr(2) = 2 exactly", out);
    expect(alpha_of_q(Base::rational(1, Rat(2)), 8).str() == "11111111", "alpha(2) = 1^8", out);
    expect(alpha_of_q(Base::rational(2, Rat(2)), 8).str() == "11111111",
           "alpha(2) = 1^8 over {0,1,2}", out);
    expect(!v_membership_check(Base::rational(1, Rat(2)), 24).violated(),
           "q=2 consistent in V to depth 24", out);
    return 0;
}

int selftest_expand(std::ostream& out) {
    Base q2 = Base::rational(1, Rat(2));
    expect(greedy_expansion(q2, Rat(1), 5).str() == "11111", "greedy(1, q=2) = 1^5", out);
    expect(greedy_expansion(q2, make_rat(2, 3), 6).str() == "101010", "greedy(2/3, q=2) = (10)^3", out);
    expect(quasi_greedy_expansion(q2, Rat(1), 5).str() == "11111", "quasi(1, q=2) = 1^5", out);
    expect(lazy_expansion(q2, make_rat(1, 2), 5).str() == "01111", "lazy(1/2, q=2) = 01^4", out);
    expect(lazy_expansion(q2, Rat(0), 5).str() == "00000", "lazy(0) = 0^5", out);
    auto sr = switch_region(BaseEnclosure(1, RationalInterval(Rat(2))));
    expect(sr.blocks.size() == 1 && sr.blocks[0].interval == RationalInterval(make_rat(1, 2)),
           "switch region at q=2 degenerates to {1/2}", out);
    auto opts = digit_options(q2, RationalInterval(Rat(0)));
    expect(!opts.ambiguous && opts.digits == std::vector<int>{0}, "digit options at 0 = {0}", out);
    auto tree = enumerate_expansions(q2, RationalInterval(make_rat(1, 2)), 6);
    expect(tree.live_count == 2, "x=1/2, q=2 has 2 paths at depth 6", out);
    auto tree0 = enumerate_expansions(q2, RationalInterval(Rat(0)), 6);
    expect(tree0.live_count == 1 && tree0.paths[0].digits.str() == "000000",
           "x=0 has the single path 0^6", out);
    return 0;
}

int selftest_unique(std::ostream& out) {
    Base b = Base::rational(1, make_rat(19, 10));
    expect(uniqueness_certificate(EventuallyPeriodicSeq::constant(0, 1), b, 40).unique(),
           "0^inf is univoque", out);
    expect(uniqueness_certificate(EventuallyPeriodicSeq::constant(1, 1), b, 40).unique(),
           "1^inf is univoque", out);
    return 0;
}

int selftest_root(std::ostream& out) {
    DiffSeries all_m1({}, {-1}, 1);
    auto r = transversality_root(all_m1, RationalInterval(make_rat(9, 5), Rat(2)), make_rat(1, 1000000));
    expect(r.unique() && r.enclosure == RationalInterval(Rat(2)),
           "all -1 coefficients root exactly at q = 2", out);
    DiffSeries pos({}, {1}, 1);
    auto r2 = transversality_root(pos, RationalInterval(make_rat(9, 5), Rat(2)), make_rat(1, 1000000));
    expect(r2.no_root(), "all +1 coefficients have no root", out);
    return 0;
}

int selftest_certify(std::ostream& out) {
    auto c7 = verify_star(7);
    expect(c7.h_at_xM == RationalInterval(make_rat(1, 12)) && c7.dh_at_xM == RationalInterval(make_rat(-5, 9)),
           "M=7 evidence h=1/12, h'=-5/9", out);
    auto c6 = verify_star(6);
    expect(c6.h_at_xM == RationalInterval(make_rat(1, 4)) && c6.dh_at_xM == RationalInterval(make_rat(-1, 3)),
           "M=6 evidence h=1/4, h'=-1/3", out);
    return 0;
}

int selftest_inspect(std::ostream& out) {
    auto certs = verify_inspection_inequalities(4);
    expect(certs.size() == 2 && certs[0].certified && certs[1].certified,
           "M=4 block inequalities certified", out);
    return 0;
}

int selftest_u2(std::ostream& out) {
    expect(theorem_bound(RationalInterval(make_rat(7, 10))) == RationalInterval(make_rat(2, 5)),
           "bound(0.7) = 0.4", out);
    expect(theorem_bound(RationalInterval(make_rat(2, 5))) == RationalInterval(Rat(0)),
           "bound(0.4) = 0 (clamped)", out);
    expect(theorem_bound(RationalInterval(make_rat(9, 20), make_rat(11, 20))) ==
               RationalInterval(Rat(0), make_rat(1, 10)),
           "bound across the kink", out);
    auto zero = EventuallyPeriodicSeq::constant(0, 1);
    auto cert = check_u2_point(DigitWord({}, 1), 0, zero, zero, Base::rational(1, make_rat(19, 10)), 24);
    expect(!cert.valid && !cert.checks.value_equality, "0 = 1 value equality fails", out);
    return 0;
}

int selftest_dim(std::ostream& out) {
    auto wc = admissible_word_count(Base::rational(1, Rat(2)), 10, 12);
    expect(wc.upper == 1024, "q=2, n=10 upper count = 1024", out);
    auto d = dim_u_q(Base::rational(1, make_rat(19, 10)), 16, 16);
    expect(d.lo >= 0 && d.hi <= 1 && d.lo <= d.hi, "dimension enclosure inside [0,1]", out);
    return 0;
}

int selftest_scan(std::ostream& out) {
    std::vector<Base> grid{Base::rational(1, make_rat(9, 5)), Base::rational(1, make_rat(19, 10))};
    auto recs = scan_dimension(1, grid, 12, 12);
    for (const auto& r : recs) {
        expect(r.error.empty(), "scan record computed", out);
        expect(*r.bound == theorem_bound(RationalInterval(r.dim->lo, r.dim->hi)),
               "record bound equals theorem bound of its dimension", out);
    }
    return 0;
}

long checked_depth(long depth) {
    if (depth < 1) throw DomainError("depth must be >= 1");
    return depth;
}

} // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"certified computations for expansions in non-integer bases"};
    app.require_subcommand(0, 1);

    // ---- constants ----
    struct {
        Common common;
        int M = 1;
        std::string which = "kl";
        std::string precision = "1e-12";
        long n = 32;
    } constants_opts;
    std::string constants_q;
    CLI::App* constants_cmd = app.add_subcommand("constants", "distinguished bases");
    constants_cmd->add_option("--M", constants_opts.M, "alphabet max digit");
    constants_cmd->add_option("--which", constants_opts.which, "kl | gr | alpha");
    constants_cmd->add_option("--precision", constants_opts.precision, "enclosure width");
    constants_cmd->add_option("--n", constants_opts.n, "alpha prefix length");
    constants_cmd->add_option("--q", constants_q, "base for --which alpha (default: q_KL)");
    add_common(constants_cmd, constants_opts.common);

    // ---- expand ----
    struct {
        Common common;
        int M = 1;
        std::string q, x = "1", mode = "greedy", precision = "1e-12";
        long depth = 24;
        std::size_t max_paths = std::size_t(1) << 20;
    } expand_opts;
    CLI::App* expand_cmd = app.add_subcommand("expand", "expansion generators and enumeration");
    expand_cmd->add_option("--M", expand_opts.M);
    expand_cmd->add_option("--q", expand_opts.q, "rational or named constant");
    expand_cmd->add_option("--x", expand_opts.x, "point to expand");
    expand_cmd->add_option("--depth", expand_opts.depth);
    expand_cmd->add_option("--mode", expand_opts.mode, "greedy | quasi | lazy | enumerate");
    expand_cmd->add_option("--precision", expand_opts.precision, "precision for named bases");
    expand_cmd->add_option("--max-paths", expand_opts.max_paths);
    add_common(expand_cmd, expand_opts.common);

    // ---- unique ----
    struct {
        Common common;
        int M = 1;
        std::string q, seq, precision = "1e-12";
        long depth = 48;
    } unique_opts;
    CLI::App* unique_cmd = app.add_subcommand("unique", "uniqueness certificate for a sequence");
    unique_cmd->add_option("--M", unique_opts.M);
    unique_cmd->add_option("--q", unique_opts.q);
    unique_cmd->add_option("--seq", unique_opts.seq, "sequence, e.g. \"11(010)\"");
    unique_cmd->add_option("--depth", unique_opts.depth);
    unique_cmd->add_option("--precision", unique_opts.precision);
    add_common(unique_cmd, unique_opts.common);

    // ---- root ----
    struct {
        Common common;
        int M = 1;
        std::string diff, lo, hi, precision = "1e-12";
    } root_opts;
    CLI::App* root_cmd = app.add_subcommand("root", "certified unique root of a difference series");
    root_cmd->add_option("--M", root_opts.M);
    root_cmd->add_option("--diff", root_opts.diff, "coefficients, e.g. \"(-1,-1,-1)(0)\"");
    root_cmd->add_option("--lo", root_opts.lo);
    root_cmd->add_option("--hi", root_opts.hi);
    root_cmd->add_option("--precision", root_opts.precision);
    add_common(root_cmd, root_opts.common);

    // ---- certify ----
    struct {
        Common common;
        int M = 1;
    } certify_opts;
    CLI::App* certify_cmd = app.add_subcommand("certify", "transversality certificate bundle");
    certify_cmd->add_option("--M", certify_opts.M);
    add_common(certify_cmd, certify_opts.common);

    // ---- inspect ----
    struct {
        Common common;
        int M = 1;
    } inspect_opts;
    CLI::App* inspect_cmd = app.add_subcommand("inspect", "closing inequality certificates");
    inspect_cmd->add_option("--M", inspect_opts.M);
    add_common(inspect_cmd, inspect_opts.common);

    // ---- u2 ----
    struct {
        Common common;
        int M = 1;
        std::string q_lo, q_hi;
        std::size_t period_bound = 3, preperiod_bound = 2;
        long depth = 64;
    } u2s_opts;
    struct {
        Common common;
        int M = 1;
        std::string w, a, b, q, precision = "1e-12";
        int m = 0;
        long depth = 40;
    } u2c_opts;
    CLI::App* u2_cmd = app.add_subcommand("u2", "points with exactly two expansions");
    u2_cmd->require_subcommand(0, 1);
    CLI::App* u2_search = u2_cmd->add_subcommand("search", "search pairs over a base window");
    u2_search->add_option("--M", u2s_opts.M);
    u2_search->add_option("--q-lo", u2s_opts.q_lo);
    u2_search->add_option("--q-hi", u2s_opts.q_hi);
    u2_search->add_option("--period-bound", u2s_opts.period_bound);
    u2_search->add_option("--preperiod-bound", u2s_opts.preperiod_bound);
    u2_search->add_option("--depth", u2s_opts.depth);
    u2_search->add_option("--json", u2s_opts.common.output, "write records to this file");
    add_common(u2_search, u2s_opts.common);
    CLI::App* u2_check = u2_cmd->add_subcommand("check", "validate one candidate point");
    u2_check->add_option("--M", u2c_opts.M);
    u2_check->add_option("--w", u2c_opts.w, "finite prefix word (may be empty)");
    u2_check->add_option("--m", u2c_opts.m);
    u2_check->add_option("--a", u2c_opts.a);
    u2_check->add_option("--b", u2c_opts.b);
    u2_check->add_option("--q", u2c_opts.q);
    u2_check->add_option("--depth", u2c_opts.depth);
    u2_check->add_option("--precision", u2c_opts.precision);
    add_common(u2_check, u2c_opts.common);
    Common u2_common; // selftest at the group level
    add_common(u2_cmd, u2_common);

    // ---- dim ----
    struct {
        Common common;
        int M = 1;
        std::string q, precision = "1e-12";
        long n = 32, L = 32;
    } dim_opts;
    CLI::App* dim_cmd = app.add_subcommand("dim", "dimension enclosure of the univoque set");
    dim_cmd->add_option("--M", dim_opts.M);
    dim_cmd->add_option("--q", dim_opts.q);
    dim_cmd->add_option("--n", dim_opts.n);
    dim_cmd->add_option("--L", dim_opts.L);
    dim_cmd->add_option("--precision", dim_opts.precision);
    add_common(dim_cmd, dim_opts.common);

    // ---- scan ----
    struct {
        Common common;
        int M = 1;
        std::string q_lo, q_hi, out_format = "json";
        long steps = 10, n = 32, L = 32;
        int jobs = 1;
    } scan_opts;
    CLI::App* scan_cmd = app.add_subcommand("scan", "dimension scan over a base grid");
    scan_cmd->add_option("--M", scan_opts.M);
    scan_cmd->add_option("--q-lo", scan_opts.q_lo);
    scan_cmd->add_option("--q-hi", scan_opts.q_hi);
    scan_cmd->add_option("--steps", scan_opts.steps);
    scan_cmd->add_option("--n", scan_opts.n);
    scan_cmd->add_option("--L", scan_opts.L);
    scan_cmd->add_option("--out", scan_opts.out_format, "json | csv");
    scan_cmd->add_option("--jobs", scan_opts.jobs);
    add_common(scan_cmd, scan_opts.common);

    std::vector<char*> cargv;
    std::vector<std::string> storage = argv;
    std::string prog = "qexp";
    cargv.push_back(prog.data());
    for (auto& s : storage) cargv.push_back(s.data());

    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (constants_cmd->parsed()) {
            const auto& o = constants_opts;
            if (o.common.selftest) return selftest_constants(out);
            Rat prec = parse_rational(o.precision);
            json j;
            if (o.which == "kl") {
                RationalInterval kl = komornik_loreti(o.M, prec);
                j = json{{"name", "komornik-loreti"},
                         {"M", o.M},
                         {"lo", rat_to_decimal(kl.lo(), 15, false)},
                         {"hi", rat_to_decimal(kl.hi(), 15, true)},
                         {"lo_exact", rat_to_string(kl.lo())},
                         {"hi_exact", rat_to_string(kl.hi())}};
            } else if (o.which == "gr") {
                Base b = golden_ratio_base(o.M);
                b.refine_to(prec);
                RationalInterval gr = b.enclosure().q;
                j = json{{"name", "golden-ratio"},
                         {"M", o.M},
                         {"lo", rat_to_decimal(gr.lo(), 15, false)},
                         {"hi", rat_to_decimal(gr.hi(), 15, true)},
                         {"lo_exact", rat_to_string(gr.lo())},
                         {"hi_exact", rat_to_string(gr.hi())}};
            } else if (o.which == "alpha") {
                if (!constants_q.empty()) {
                    Base b = named_base(constants_q, o.M, prec);
                    RationalInterval enc = b.enclosure().q;
                    j = json{{"name", "alpha"},
                             {"M", o.M},
                             {"lo", rat_to_decimal(enc.lo(), 15, false)},
                             {"hi", rat_to_decimal(enc.hi(), 15, true)},
                             {"digits", alpha_of_q(b, static_cast<std::size_t>(o.n)).str()}};
                } else {
                    RationalInterval kl = komornik_loreti(o.M, prec);
                    j = json{{"name", "alpha-kl"},
                             {"M", o.M},
                             {"lo", rat_to_decimal(kl.lo(), 15, false)},
                             {"hi", rat_to_decimal(kl.hi(), 15, true)},
                             {"digits", kl_sequence(o.M, static_cast<std::size_t>(o.n)).str()}};
                }
            } else {
                throw DomainError("unknown constant: " + o.which);
            }
            emit_json(o.common, out, j, argv);
            return 0;
        }
        if (expand_cmd->parsed()) {
            const auto& o = expand_opts;
            if (o.common.selftest) return selftest_expand(out);
            if (o.q.empty()) throw DomainError("expand needs --q");
            Base base = named_base(o.q, o.M, parse_rational(o.precision));
            Rat x = parse_rational(o.x);
            checked_depth(o.depth);
            json j;
            if (o.mode == "enumerate") {
                EnumerateOptions eo;
                eo.max_paths = o.max_paths;
                ExpansionTree tree = enumerate_expansions(base, RationalInterval(x), o.depth, eo);
                j = to_json(tree);
            } else {
                DigitWord d = o.mode == "greedy" ? greedy_expansion(base, x, o.depth)
                              : o.mode == "quasi" ? quasi_greedy_expansion(base, x, o.depth)
                              : o.mode == "lazy"
                                  ? lazy_expansion(base, x, o.depth)
                                  : throw DomainError("unknown mode: " + o.mode);
                j = json{{"mode", o.mode},
                         {"M", o.M},
                         {"q", to_json(base.enclosure().q)},
                         {"x", o.x},
                         {"digits", d.str()}};
            }
            emit_json(o.common, out, j, argv);
            return 0;
        }
        if (unique_cmd->parsed()) {
            const auto& o = unique_opts;
            if (o.common.selftest) return selftest_unique(out);
            if (o.q.empty() || o.seq.empty()) throw DomainError("unique needs --q and --seq");
            Base base = named_base(o.q, o.M, parse_rational(o.precision));
            auto s = EventuallyPeriodicSeq::parse(o.seq, o.M);
            auto v = uniqueness_certificate(s, base, o.depth);
            json j = to_json(v);
            j["seq"] = s.str();
            j["q"] = to_json(base.enclosure().q);
            emit_json(o.common, out, j, argv);
            return 0;
        }
        if (root_cmd->parsed()) {
            const auto& o = root_opts;
            if (o.common.selftest) return selftest_root(out);
            if (o.diff.empty() || o.lo.empty() || o.hi.empty())
                throw DomainError("root needs --diff, --lo, --hi");
            DiffSeries diff = DiffSeries::parse(o.diff, o.M);
            RationalInterval window(parse_rational(o.lo), parse_rational(o.hi));
            RootResult r = transversality_root(diff, window, parse_rational(o.precision));
            json j = to_json(r);
            j["diff"] = diff.str();
            emit_json(o.common, out, j, argv);
            return 0;
        }
        if (certify_cmd->parsed()) {
            const auto& o = certify_opts;
            if (o.common.selftest) return selftest_certify(out);
            json j{{"star", to_json(star_function(o.M))},
                   {"certificate", to_json(verify_star(o.M))}};
            emit_json(o.common, out, j, argv);
            return 0;
        }
        if (inspect_cmd->parsed()) {
            const auto& o = inspect_opts;
            if (o.common.selftest) return selftest_inspect(out);
            RefinementBudget budget{o.common.budget_depth, o.common.budget_splits};
            json certs = json::array();
            for (const auto& c : verify_inspection_inequalities(o.M, budget))
                certs.push_back(to_json(c));
            emit_json(o.common, out, json{{"M", o.M}, {"certificates", certs}}, argv);
            return 0;
        }
        if (u2_cmd->parsed()) {
            if (u2_search->parsed()) {
                const auto& o = u2s_opts;
                if (o.common.selftest) return selftest_u2(out);
                if (o.q_lo.empty() || o.q_hi.empty())
                    throw DomainError("u2 search needs --q-lo and --q-hi");
                RationalInterval window(parse_rational(o.q_lo), parse_rational(o.q_hi));
                auto records =
                    construct_u2_candidates(o.M, window, o.period_bound, o.preperiod_bound, o.depth);
                json arr = json::array();
                for (const auto& r : records) arr.push_back(to_json(r));
                emit_json(o.common, out, json{{"records", arr}}, argv);
                return 0;
            }
            if (u2_check->parsed()) {
                const auto& o = u2c_opts;
                if (o.common.selftest) return selftest_u2(out);
                if (o.a.empty() || o.b.empty() || o.q.empty())
                    throw DomainError("u2 check needs --a, --b, --q");
                Base base = named_base(o.q, o.M, parse_rational(o.precision));
                std::vector<int> wd;
                for (char ch : o.w) {
                    if (ch < '0' || ch > '9') throw DomainError("bad digit in --w");
                    wd.push_back(ch - '0');
                }
                auto cert = check_u2_point(DigitWord(wd, o.M), o.m,
                                           EventuallyPeriodicSeq::parse(o.a, o.M),
                                           EventuallyPeriodicSeq::parse(o.b, o.M), base, o.depth);
                emit_json(o.common, out, to_json(cert), argv);
                return 0;
            }
            if (u2_common.selftest) return selftest_u2(out);
            err << "error: u2 needs a subcommand (search | check)\n";
            return 2;
        }
        if (dim_cmd->parsed()) {
            const auto& o = dim_opts;
            if (o.common.selftest) return selftest_dim(out);
            if (o.q.empty()) throw DomainError("dim needs --q");
            Base base = named_base(o.q, o.M, parse_rational(o.precision));
            emit_json(o.common, out, to_json(dim_u_q(base, o.n, o.L)), argv);
            return 0;
        }
        if (scan_cmd->parsed()) {
            const auto& o = scan_opts;
            if (o.common.selftest) return selftest_scan(out);
            if (o.q_lo.empty() || o.q_hi.empty()) throw DomainError("scan needs --q-lo and --q-hi");
            if (o.steps < 1) throw DomainError("steps must be >= 1");
            Rat lo = parse_rational(o.q_lo), hi = parse_rational(o.q_hi);
            std::vector<Base> grid;
            for (long i = 0; i < o.steps; ++i) {
                Rat q = o.steps == 1 ? lo : lo + (hi - lo) * Rat(i) / Rat(o.steps - 1);
                grid.push_back(Base::rational(o.M, q));
            }
            auto records = scan_dimension(o.M, grid, o.n, o.L, o.jobs);
            if (o.out_format == "csv") {
                std::string text = scan_csv_header();
                for (const auto& r : records) text += "\n" + scan_csv_line(r);
                emit(o.common, out, text);
            } else {
                json arr = json::array();
                for (const auto& r : records) arr.push_back(to_json(r));
                emit_json(o.common, out, json{{"records", arr}}, argv);
            }
            return 0;
        }
        out << app.help() << "\n";
        return 0;
    } catch (const SelftestFailure& e) {
        err << "selftest failed: " << e.what() << "\n";
        return 1;
    } catch (const PrecisionExhausted& e) {
        json j{{"inconclusive", true}, {"error", e.what()}, {"position", e.position}};
        j["provenance"] = provenance(argv, RefinementBudget{});
        out << j.dump(2) << "\n";
        return 3;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const CertificationFailure& e) {
        err << "certification failure: " << e.what() << "\n";
        return 2;
    }
}

} // namespace qexp
