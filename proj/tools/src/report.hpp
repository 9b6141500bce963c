#pragma once

#include <json.hpp>

#include "invex2d/invex2d.hpp"

namespace invex2d::cli {

using Json = nlohmann::ordered_json;

Json to_json(Point2 x);
Json to_json(const Problem2D& p, const KKTPoint& k);
Json to_json(const Problem2D& p, const InvexityReport& r);
Json to_json(const OracleResult& r);
Json to_json(const KTInvexVerdict& v);
Json to_json(const BoundaryPath& path);
Json to_json(const opf::LineParams& q);
Json to_json(const opf::MinWrReport& r);
Json to_json(const opf::AuxKKTReport& r);
Json to_json(const opf::ThermalReport& r);

}  // namespace invex2d::cli
