#pragma once

#include "qexp/base.hpp"
#include "qexp/constants.hpp"
#include "qexp/dimension.hpp"
#include "qexp/digits.hpp"
#include "qexp/expansion.hpp"
#include "qexp/interval.hpp"
#include "qexp/transversality.hpp"
#include "qexp/two_expansion.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qexp {

using nlohmann::json;

json to_json(const RationalInterval& ivl);
json to_json(const BaseEnclosure& base);
json to_json(const DigitWord& w);
json to_json(const UniquenessVerdict& v);
json to_json(const SwitchRegion& sr);
json to_json(const ExpansionTree& tree);
json to_json(const VMembershipReport& r);
json to_json(const StarFunctionSpec& s);
json to_json(const TransversalityCertificate& c);
json to_json(const RootResult& r);
json to_json(const InspectionCertificate& c);
json to_json(const U2Checks& c);
json to_json(const U2Certificate& c);
json to_json(const PairSearchRecord& r);
json to_json(const WordCountResult& r);
json to_json(const DimensionEnclosure& d);
json to_json(const ScanRecord& r);

std::string scan_csv_header();
std::string scan_csv_line(const ScanRecord& r);

json provenance(const std::vector<std::string>& argv, const RefinementBudget& budget);

} // namespace qexp
