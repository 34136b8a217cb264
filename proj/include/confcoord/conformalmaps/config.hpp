#pragma once

#include "confcoord/conformalmaps/mobius.hpp"

#include "json.hpp"

namespace confcoord::conformalmaps {

/// Parses an ordered primitive list:
///   {"dim": 3, "steps": [{"translate": [..]}, {"rotate": [[..], ..]},
///    {"rotate": {"axes": [0, 1], "angle": θ}}, {"dilate": λ}, {"invert": true}]}
/// or a seeded composition {"dim": 3, "random": {"seed": s, "steps": k, "inversion": true}}.
/// Throws ConfigError on malformed input.
MobiusMap mobius_from_json(const nlohmann::json& spec);

/// Rotation by θ in the (i, j) coordinate plane.
Eigen::MatrixXd plane_rotation(int n, int i, int j, double angle);

} // namespace confcoord::conformalmaps
