#pragma once

#include <optional>

#include "afcert/affine.hpp"

namespace afcert {

/// Form of signature (p,q): B(v,v) = x1^2 + .. + xp^2 - y1^2 - .. - yq^2 in the
/// basis (v1..vp, w1..wq). The basis vectors double as reference orientations
/// of X = span(v_i) and Y = span(w_j).
struct QuadraticForm {
  int p = 0, q = 0;
  Mat basis;  // columns v1..vp, w1..wq

  static QuadraticForm standard(int p, int q);
  /// Validates that the basis is invertible.
  static QuadraticForm with_basis(int p, int q, const Mat& basis);

  int dim() const { return p + q; }
  /// diag(+1..+1, -1..-1)
  Mat signature_diag() const;
  /// Gram matrix of B in standard coordinates.
  Mat gram() const;
  double operator()(const Vec& a, const Vec& b) const;
  Vec coords(const Vec& x) const;
  Mat coords(const Mat& x) const;
  Subspace x_space() const;
  Subspace y_space() const;
  bool preserved_by(const Mat& m, double tol = 1e-8) const;
};

struct IsotropicSubspace {
  Subspace space;
  static IsotropicSubspace make(const QuadraticForm& form, const Subspace& s);
};

struct SignResult {
  double alpha = 0.0;
  Vec neutral_vector;
  std::optional<AffineAxis> axis;
};

/// V = V1 + V2 with V1 carrying SO(2,1) and V2 carrying SL3. The columns of
/// v1.basis are the form basis (v1, v2, w1) of V1.
struct ProductSplit {
  Subspace v1;
  Subspace v2;
  QuadraticForm form_on_v1;

  static ProductSplit standard();
  void validate() const;
  Mat theta1(const Mat& m) const { return v1.basis.transpose() * m * v1.basis; }
  Mat theta2(const Mat& m) const { return v2.basis.transpose() * m * v2.basis; }
};

/// +1 if (positively oriented basis of W via pi_Y, then v) is a positively
/// oriented basis of W + <v> via pi_X; -1 if negative. Requires p = q + 1.
int orientation_sign(const QuadraticForm& form, const Mat& w_basis, const Vec& v);

/// Sign of det of the Y-coordinates of a basis of an isotropic W.
int y_orientation(const QuadraticForm& form, const Mat& w_basis);

Vec oriented_neutral_vector(const QuadraticForm& form, const IsotropicSubspace& a_plus,
                            const SpectralSplit& split);

SignResult margulis_alpha(const AffineMap& g, const QuadraticForm& form);

SignResult extended_alpha(const AffineMap& g, const ProductSplit& split);

struct PhiSide {
  int side = 0;
  double alpha_w = 0.0;
  Vec w0;
};

PhiSide phi_side(const QuadraticForm& form, const IsotropicSubspace& u, const IsotropicSubspace& w);

/// Standard (2,1) building blocks in the basis (v1, v2, w1).
Mat boost21(double t);
Mat rot21(double theta);

}  // namespace afcert
