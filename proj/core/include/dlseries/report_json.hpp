#pragma once

#include <json.hpp>

#include "dlseries/oracle.hpp"
#include "dlseries/series.hpp"

namespace dls {

using Json = nlohmann::ordered_json;

// canonical ordering scheme for roots; embedded in every report
inline constexpr const char* kRootOrderVersion = "height-lex/1";

Json to_json(const IntMat& m);
Json to_json(const RatVec& v);
Json to_json(const RootDatum& d);
Json to_json(const SheafParam& l);

// groups are rendered as element lists (root permutations + matrices),
// generator indices and a multiplication table
Json group_json(const WeylGroup& w, const std::vector<int>& elements);
Json group_json(const ExtendedWeylGroup& w, const std::vector<ExtendedWeylGroup::Elem>& elements);

Json datum_report(const RootDatum& d);
Json endoscopy_report(const WeylGroup& w, const GeometricSeriesReport& r);
Json geometric_series_json(const WeylGroup& w, const GeometricSeriesReport& r);
Json rational_partition_json(const WeylGroup& w, const RationalPartition& p);
Json disconnected_geometric_json(const ExtendedWeylGroup& w, const DisconnectedGeometricReport& r);
Json disconnected_rational_json(const ExtendedWeylGroup& w, const DisconnectedRationalReport& r);
Json embedding_report(const RootDatum& d, const RegularEmbedding& e);
Json census_json(const oracle::ClassCensus& c);
Json compare_json(const oracle::CompareReport& r);
Json torus_check_json(const oracle::TorusSeriesCheck& t);

}  // namespace dls
