#pragma once

#include "invex2d/boundary.hpp"
#include "invex2d/error.hpp"
#include "invex2d/expr.hpp"
#include "invex2d/geometry.hpp"
#include "invex2d/invexity.hpp"
#include "invex2d/kkt.hpp"
#include "invex2d/level_curve.hpp"
#include "invex2d/neighborhood.hpp"
#include "invex2d/opf.hpp"
#include "invex2d/oracle.hpp"
#include "invex2d/problem.hpp"
#include "invex2d/vec2.hpp"

namespace invex2d {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace invex2d
