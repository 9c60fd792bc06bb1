#include "qexp/json_io.hpp"

#include <sstream>

namespace qexp {

json to_json(const RationalInterval& ivl) {
    return json{{"lo", rat_to_string(ivl.lo())}, {"hi", rat_to_string(ivl.hi())}};
}

json to_json(const BaseEnclosure& base) {
    return json{{"M", base.M}, {"q", to_json(base.q)}};
}

json to_json(const DigitWord& w) { return json(w.str()); }

json to_json(const UniquenessVerdict& v) {
    json j;
    switch (v.kind) {
    case UniquenessVerdict::Kind::UniqueCertified: j["kind"] = "UniqueCertified"; break;
    case UniquenessVerdict::Kind::NotUniqueCertified:
        j["kind"] = "NotUniqueCertified";
        j["witness"] = v.witness;
        break;
    case UniquenessVerdict::Kind::UnknownToDepth:
        j["kind"] = "UnknownToDepth";
        j["depth"] = v.depth;
        break;
    }
    return j;
}

json to_json(const SwitchRegion& sr) {
    json blocks = json::array();
    for (const auto& b : sr.blocks)
        blocks.push_back(json{{"digit_high", b.digit_high}, {"interval", to_json(b.interval)}});
    return json{{"blocks", blocks}};
}

json to_json(const ExpansionTree& tree) {
    json paths = json::array();
    for (const auto& p : tree.paths)
        paths.push_back(json{
            {"digits", p.digits.str()},
            {"status", p.status == PathStatus::Live ? "Live" : "Ambiguous"}});
    return json{{"x", to_json(tree.x)},
                {"q", to_json(tree.q)},
                {"M", tree.M},
                {"depth", tree.depth},
                {"paths", paths},
                {"live_count", tree.live_count},
                {"ambiguous_count", tree.ambiguous_count},
                {"truncated", tree.truncated}};
}

json to_json(const VMembershipReport& r) {
    if (r.violated()) return json{{"kind", "ViolatedAtIndex"}, {"index", r.value}};
    return json{{"kind", "ConsistentToDepth"}, {"depth", r.value}};
}

json to_json(const StarFunctionSpec& s) {
    json head = json::array();
    for (const auto& c : s.head.coeffs()) head.push_back(rat_to_string(c));
    return json{{"M", s.M},
                {"k", s.k},
                {"head_coeffs", head},
                {"tail_coef", rat_to_string(s.tail_coef)},
                {"tail_from", s.tail_from},
                {"x_M", to_json(s.xM)},
                {"x_M_exact", s.xM_rational ? rat_to_string(s.xM_rat) : ""}};
}

json to_json(const TransversalityCertificate& c) {
    return json{{"M", c.M},
                {"interval", to_json(c.interval)},
                {"delta", rat_to_string(c.delta)},
                {"h_at_xM", to_json(c.h_at_xM)},
                {"dh_at_xM", to_json(c.dh_at_xM)},
                {"x_M", to_json(c.xM)},
                {"kl_range_inside", c.kl_range_inside}};
}

json to_json(const RootResult& r) {
    json j;
    switch (r.kind) {
    case RootResult::Kind::NoRootCertified: j["kind"] = "NoRootCertified"; break;
    case RootResult::Kind::UniqueRoot:
        j["kind"] = "UniqueRoot";
        j["q"] = to_json(r.enclosure);
        break;
    case RootResult::Kind::Inconclusive:
        j["kind"] = "Inconclusive";
        j["reason"] = r.reason;
        break;
    }
    return j;
}

json to_json(const InspectionCertificate& c) {
    return json{{"label", c.label},
                {"domain", to_json(c.domain)},
                {"certified", c.certified},
                {"pieces", c.pieces},
                {"sup_bound", rat_to_string(c.sup_bound)}};
}

json to_json(const U2Checks& c) {
    json prefix = json::array();
    for (bool b : c.prefix_outside_switch) prefix.push_back(b);
    return json{{"a_unique", to_json(c.a_unique)},
                {"b_unique", to_json(c.b_unique)},
                {"value_equality", c.value_equality},
                {"prefix_outside_switch", prefix},
                {"prefix_ok", c.prefix_ok},
                {"live_paths", c.live_paths},
                {"ambiguous_paths", c.ambiguous_paths},
                {"enumeration_two", c.enumeration_two}};
}

json to_json(const U2Certificate& c) {
    return json{{"w", c.w.str()},
                {"m", c.m},
                {"a", c.a.str()},
                {"b", c.b.str()},
                {"base", to_json(c.base)},
                {"checks", to_json(c.checks)},
                {"valid", c.valid}};
}

json to_json(const PairSearchRecord& r) {
    return json{{"a", r.a.str()},
                {"b", r.b.str()},
                {"root", to_json(r.root)},
                {"a_unique", to_json(r.a_unique)},
                {"b_unique", to_json(r.b_unique)},
                {"constructive", r.constructive}};
}

json to_json(const WordCountResult& r) {
    return json{{"n", r.n},
                {"L", r.L},
                {"lower", r.lower.get_str()},
                {"upper", r.upper.get_str()}};
}

json to_json(const DimensionEnclosure& d) {
    return json{{"M", d.M},
                {"q", to_json(d.q)},
                {"lo", rat_to_string(d.lo)},
                {"hi", rat_to_string(d.hi)},
                {"lo_decimal", rat_to_decimal(d.lo, 12, false)},
                {"hi_decimal", rat_to_decimal(d.hi, 12, true)},
                {"n", d.n},
                {"L", d.L}};
}

json to_json(const ScanRecord& r) {
    json j{{"q", to_json(r.q)}};
    if (!r.error.empty()) {
        j["error"] = r.error;
        return j;
    }
    j["dim"] = to_json(*r.dim);
    j["bound"] = to_json(*r.bound);
    switch (r.in_o) {
    case ScanRecord::InO::Yes: j["inO"] = "Yes"; break;
    case ScanRecord::InO::No: j["inO"] = "No"; break;
    case ScanRecord::InO::Undetermined: j["inO"] = "Undetermined"; break;
    }
    return j;
}

std::string scan_csv_header() { return "q_lo,q_hi,dim_lo,dim_hi,bound_lo,bound_hi,inO"; }

std::string scan_csv_line(const ScanRecord& r) {
    std::ostringstream os;
    os << rat_to_string(r.q.lo()) << "," << rat_to_string(r.q.hi()) << ",";
    if (!r.error.empty()) {
        os << "error,error,error,error,error";
        return os.str();
    }
    os << rat_to_string(r.dim->lo) << "," << rat_to_string(r.dim->hi) << ","
       << rat_to_string(r.bound->lo()) << "," << rat_to_string(r.bound->hi()) << ",";
    switch (r.in_o) {
    case ScanRecord::InO::Yes: os << "Yes"; break;
    case ScanRecord::InO::No: os << "No"; break;
    case ScanRecord::InO::Undetermined: os << "Undetermined"; break;
    }
    return os.str();
}

json provenance(const std::vector<std::string>& argv, const RefinementBudget& budget) {
    return json{{"tool", json{{"name", "qexp"}, {"version", "0.1.0"}}},
                {"budget", json{{"max_depth", budget.max_depth}, {"max_splits", budget.max_splits}}},
                {"argv", argv}};
}

} // namespace qexp
