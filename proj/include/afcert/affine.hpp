#pragma once

#include <string>

#include "afcert/linalg.hpp"

namespace afcert {

/// x -> linear * x + translation
struct AffineMap {
  Mat linear;
  Vec translation;
  std::string name;

  int dim() const { return static_cast<int>(translation.size()); }
  Vec apply(const Vec& x) const { return linear * x + translation; }

  static AffineMap identity(int n);
  static AffineMap translation_by(const Vec& v);
  static AffineMap linear_only(const Mat& m);
};

AffineMap compose(const AffineMap& a, const AffineMap& b);
AffineMap inverse(const AffineMap& a);
AffineMap power(const AffineMap& a, long n);
/// t g t^-1
AffineMap conjugate(const AffineMap& t, const AffineMap& g);

Mat homogeneous_embed(const AffineMap& a);

/// Affine subspace point + span(dirs).
struct AffineSubspace {
  Vec point;
  Subspace dirs;
};

struct AffineAxis {
  Vec base_point;
  Vec direction;  // t_g
  AffineSubspace e_plus;
  AffineSubspace e_minus;
  AffineSubspace c_g;
};

AffineAxis invariant_axis(const AffineMap& g, const SpectralSplit& split);
Vec fixed_point(const AffineMap& g);

/// Minimum distance from 1 over the eigenvalues of m.
double unit_eigen_gap(const Mat& m);

}  // namespace afcert
