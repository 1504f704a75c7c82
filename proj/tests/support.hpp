#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "afcert/certificates.hpp"

namespace testsupport {

using afcert::AffineMap;
using afcert::Mat;
using afcert::Vec;

// Seeded case generator shared by the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vec vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Mat matrix(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = normal();
    return m;
  }

  // Gaussian matrix, redrawn until comfortably invertible.
  Mat invertible(int n) {
    for (;;) {
      Mat m = matrix(n);
      if (afcert::min_singular(m) > 1e-2 * afcert::op_norm(m)) return m;
    }
  }

  Mat orthogonal(int n) {
    Eigen::HouseholderQR<Mat> qr(matrix(n));
    Mat q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1;
    return q;
  }

  // Element of SO(p,q) in the standard basis: rotations in X and Y between boosts.
  Mat so_element(int p, int q, double boost_scale = 0.6) {
    const int n = p + q;
    Mat x = Mat::Identity(n, n);
    Mat rx = Mat::Identity(n, n), ry = Mat::Identity(n, n);
    rx.topLeftCorner(p, p) = orthogonal(p);
    if (q > 0) ry.bottomRightCorner(q, q) = orthogonal(q);
    x = rx * ry;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < q; ++j) {
        const double t = uniform(-boost_scale, boost_scale);
        Mat b = Mat::Identity(n, n);
        b(i, i) = b(p + j, p + j) = std::cosh(t);
        b(i, p + j) = b(p + j, i) = std::sinh(t);
        x = b * x;
      }
    Mat r2 = Mat::Identity(n, n);
    r2.topLeftCorner(p, p) = orthogonal(p);
    return r2 * x;
  }

  // R-regular hyperbolic isometry of signature (k+1,k): distinct boosts in the
  // planes (v_i, w_i), conjugated by a random element of SO(k+1,k).
  Mat regular_isometry(int k) {
    const int n = 2 * k + 1;
    Mat d = Mat::Identity(n, n);
    double t = 0.0;
    for (int i = 0; i < k; ++i) {
      t += uniform(0.3, 1.0);
      const int vi = i, wi = k + 1 + i;
      d(vi, vi) = d(wi, wi) = std::cosh(t);
      d(vi, wi) = d(wi, vi) = std::sinh(t);
    }
    const Mat x = so_element(k + 1, k);
    return x * d * x.inverse();
  }

 private:
  std::mt19937_64 rng_;
};

// Faddeev-LeVerrier: characteristic polynomial from traces, highest degree first.
inline std::vector<double> faddeev_leverrier(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Mat m = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[k - 1] * Mat::Identity(n, n);
    c[k] = -(a * m).trace() / k;
  }
  return c;
}

// Residual of a subspace under m: |(I - P) m B| for the basis B.
inline double invariance_residual(const Mat& m, const afcert::Subspace& s) {
  if (s.empty()) return 0.0;
  const Mat mb = m * s.basis;
  return (mb - s.basis * (s.basis.transpose() * mb)).norm();
}

inline AffineMap affine(const Mat& l, const Vec& t, const std::string& name = "") { return AffineMap{l, t, name}; }

inline Mat block(const Mat& a, const Mat& b) {
  Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

inline Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace testsupport
