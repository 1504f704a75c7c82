#include "afcert/affine.hpp"

#include <cmath>

namespace afcert {

AffineMap AffineMap::identity(int n) { return {Mat::Identity(n, n), Vec::Zero(n), ""}; }

AffineMap AffineMap::translation_by(const Vec& v) {
  const int n = static_cast<int>(v.size());
  return {Mat::Identity(n, n), v, ""};
}

AffineMap AffineMap::linear_only(const Mat& m) { return {m, Vec::Zero(m.rows()), ""}; }

AffineMap compose(const AffineMap& a, const AffineMap& b) {
  if (a.dim() != b.dim() || a.linear.rows() != b.linear.rows())
    throw Error(ErrorKind::DimMismatch, "compose: dimensions " + std::to_string(a.dim()) + " and " +
                                            std::to_string(b.dim()));
  return {a.linear * b.linear, a.linear * b.translation + a.translation, ""};
}

AffineMap inverse(const AffineMap& a) {
  Mat li = a.linear.inverse();
  return {li, -(li * a.translation), ""};
}

AffineMap power(const AffineMap& a, long n) {
  AffineMap base = n < 0 ? inverse(a) : a;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  AffineMap acc = AffineMap::identity(a.dim());
  while (e) {
    if (e & 1) acc = compose(acc, base);
    base = compose(base, base);
    e >>= 1;
  }
  return acc;
}

AffineMap conjugate(const AffineMap& t, const AffineMap& g) {
  return compose(compose(t, g), inverse(t));
}

Mat homogeneous_embed(const AffineMap& a) {
  const int n = a.dim();
  Mat m = Mat::Identity(n + 1, n + 1);
  m.topLeftCorner(n, n) = a.linear;
  m.topRightCorner(n, 1) = a.translation;
  return m;
}

double unit_eigen_gap(const Mat& m) {
  double best = INFINITY;
  for (const auto& lam : eigenvalues(m)) best = std::min(best, std::abs(lam - 1.0));
  return best;
}

AffineAxis invariant_axis(const AffineMap& g, const SpectralSplit& split) {
  const int n = g.dim();
  const Mat a = g.linear - Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  int rank = 0;
  while (rank < n && s(rank) > 1e-8 * std::max(smax, 1.0)) ++rank;
  if (rank == n) throw Error(ErrorKind::NoUnitEigenvalue, "linear part has no eigenvalue 1");

  const Mat ker = svd.matrixV().rightCols(n - rank);
  const Mat im = svd.matrixU().leftCols(rank);
  Mat both(n, n);
  both << ker, im;
  if (min_singular(both) < 1e-7)
    throw Error(ErrorKind::NonSemisimpleNeutral, "ker(L-I) and im(L-I) do not complement");

  const Vec coef = both.colPivHouseholderQr().solve(g.translation);
  const Vec t = ker * coef.head(n - rank);
  const Vec v1 = im * coef.tail(rank);

  // minimum-norm solution of (L - I) p = -v1 through the pseudo-inverse
  Vec p = Vec::Zero(n);
  const Vec ut = svd.matrixU().transpose() * (-v1);
  for (int i = 0; i < rank; ++i) p += (ut(i) / s(i)) * svd.matrixV().col(i);

  AffineAxis ax;
  ax.base_point = p;
  ax.direction = t;
  ax.e_plus = {p, split.d_plus()};
  ax.e_minus = {p, split.d_minus()};
  ax.c_g = {p, intersect(ax.e_plus.dirs, ax.e_minus.dirs)};
  return ax;
}

Vec fixed_point(const AffineMap& g) {
  const double gap = unit_eigen_gap(g.linear);
  if (gap <= 1e-8) throw Error(ErrorKind::UnitEigenvalue, "linear part has eigenvalue 1");
  const int n = g.dim();
  const Mat a = Mat::Identity(n, n) - g.linear;
  Vec p = a.colPivHouseholderQr().solve(g.translation);
  // one step of iterative refinement
  p += a.colPivHouseholderQr().solve(g.translation - a * p);
  return p;
}

}  // namespace afcert
