#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "afcert/error.hpp"

namespace afcert {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Linear subspace of R^n stored as an orthonormal column basis (n x k).
struct Subspace {
  int ambient = 0;
  Mat basis;

  int dim() const { return static_cast<int>(basis.cols()); }
  bool empty() const { return basis.cols() == 0; }

  static Subspace zero(int n);
  static Subspace full(int n);
  /// Orthonormalizes the column span of `m` (rank decided with `tol`).
  static Subspace span(const Mat& m, double tol = 1e-10);
  static Subspace line(const Vec& v);

  Mat projector() const;
  /// Component of v orthogonal to the subspace.
  Vec residual(const Vec& v) const;
};

/// Sum of two subspaces.
Subspace operator+(const Subspace& a, const Subspace& b);
/// Intersection of two subspaces (via kernels).
Subspace intersect(const Subspace& a, const Subspace& b, double tol = 1e-8);

struct SpectralSplit {
  Subspace a_plus;
  Subspace a_minus;
  Subspace a_zero;
  double alpha_threshold = 1.0;

  Subspace d_plus() const { return a_plus + a_zero; }
  Subspace d_minus() const { return a_minus + a_zero; }
};

/// Coefficients of det(lambda I - m), highest degree first, leading 1.
std::vector<double> char_poly(const Mat& m);

/// Evaluates a polynomial (highest degree first) at a square matrix.
Mat poly_eval(const std::vector<double>& coeffs, const Mat& m);

std::vector<std::complex<double>> eigenvalues(const Mat& m);

/// Moduli of the eigenvalues with multiplicities, sorted descending.
/// Moduli within a relative 1e-7 of each other are merged.
std::vector<std::pair<double, int>> eigen_moduli(const Mat& m);

SpectralSplit spectral_split(const Mat& m, double alpha = 1.0, double unit_band = 1e-9);

/// Orthonormal basis of the numerical null space: singular values below tol * sigma_max.
Subspace kernel(const Mat& m, double tol = 1e-8);

/// Restriction of m to an invariant subspace, in the subspace's basis.
Mat restrict_to(const Mat& m, const Subspace& s);

double op_norm(const Mat& m);
double min_singular(const Mat& m);

/// Matrix integer power (negative exponents invert).
Mat mat_pow(const Mat& m, long n);

}  // namespace afcert
