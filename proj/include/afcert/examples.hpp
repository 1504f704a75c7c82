#pragma once

#include "afcert/group.hpp"

namespace afcert {

/// Two transversal boosts in SO(2,1) with translations t * v+ (equal positive signs).
GroupSpec margulis3d_example(double boost_param, double angle, double translation_scale);

/// g+ = (boost(ln 2), (0,1,0)) and its conjugate by rot(pi/2) with the
/// translation reversed; the signs are +1 and -1.
GroupSpec opposite_sign_example();

/// Three generators in SO(2,1) x SL3(R) acting block-diagonally on R^6.
GroupSpec product6_example();

}  // namespace afcert
