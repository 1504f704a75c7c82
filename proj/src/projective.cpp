#include "afcert/projective.hpp"

#include <algorithm>
#include <cmath>

namespace afcert {

double proj_dist(const Vec& v, const Vec& w) {
  const double nv = v.squaredNorm();
  const double nw = w.squaredNorm();
  if (nv <= 1e-24 || nw <= 1e-24) throw Error(ErrorKind::ZeroVector, "proj_dist of a zero vector");
  const double d = v.dot(w);
  const double wedge2 = std::max(0.0, nv * nw - d * d);
  return std::min(1.0, std::sqrt(wedge2 / (nv * nw)));
}

static Eigen::VectorXd cosines(const Subspace& a, const Subspace& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySubspace, "principal angles of {0}");
  if (a.ambient != b.ambient) throw Error(ErrorKind::DimMismatch, "principal angles");
  Mat g = a.basis.transpose() * b.basis;
  Eigen::JacobiSVD<Mat> svd(g);
  Eigen::VectorXd c = svd.singularValues();
  for (int i = 0; i < c.size(); ++i) c(i) = std::clamp(c(i), 0.0, 1.0);
  return c;  // descending
}

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  const auto c = cosines(a, b);
  std::vector<double> out;
  for (int i = 0; i < c.size(); ++i) out.push_back(std::acos(c(i)));
  return out;
}

// sin from cos without the cancellation of sqrt(1 - c^2) near c = 1
static double sine_between(const Subspace& a, const Subspace& b, bool smallest) {
  const auto c = cosines(a, b);
  const int k = static_cast<int>(c.size());
  const int idx = smallest ? 0 : k - 1;
  // sin of an angle also equals the residual of the matching principal vector
  Mat g = a.basis.transpose() * b.basis;
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec u = a.basis * svd.matrixU().col(idx);
  const Vec r = b.residual(u);
  const double s1 = r.norm();
  const double s2 = std::sqrt(std::max(0.0, 1.0 - c(idx) * c(idx)));
  return std::min(1.0, c(idx) > 0.7 ? s1 : s2);
}

double subspace_dist(const Subspace& a, const Subspace& b) { return sine_between(a, b, true); }

double subspace_hausdorff(const Subspace& a, const Subspace& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySubspace, "hausdorff distance of {0}");
  if (a.dim() != b.dim()) return 1.0;
  return sine_between(a, b, false);
}

}  // namespace afcert
