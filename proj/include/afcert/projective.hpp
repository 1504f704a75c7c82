#pragma once

#include <vector>

#include "afcert/linalg.hpp"

namespace afcert {

/// sin of the angle between the lines through v and w.
double proj_dist(const Vec& v, const Vec& w);

std::vector<double> principal_angles(const Subspace& a, const Subspace& b);

/// Distance between the projectivized sets: sin of the smallest principal angle.
double subspace_dist(const Subspace& a, const Subspace& b);

/// Hausdorff-type distance; 1 when dimensions differ.
double subspace_hausdorff(const Subspace& a, const Subspace& b);

}  // namespace afcert
