#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "afcert/certificates.hpp"

namespace afcert {

// min over |u| <= 1 of |d + A u| for invertible A
static double min_ellipsoid_norm(const Vec& d, const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec sig = svd.singularValues();
  const Vec b = svd.matrixU().transpose() * d;
  auto unorm2 = [&](double mu) {
    double s = 0;
    for (int i = 0; i < sig.size(); ++i) {
      const double c = sig(i) * b(i) / (sig(i) * sig(i) + mu);
      s += c * c;
    }
    return s;
  };
  if (unorm2(0.0) <= 1.0) return 0.0;
  double lo = 0.0, hi = std::max(1.0, sig(0) * b.norm());
  while (unorm2(hi) > 1.0) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (unorm2(mid) > 1.0 ? lo : hi) = mid;
  }
  // residual d + A u at the boundary minimiser, in the U basis
  double r = 0;
  for (int i = 0; i < sig.size(); ++i) {
    const double c = b(i) * hi / (sig(i) * sig(i) + hi);
    r += c * c;
  }
  return std::sqrt(r);
}

double ball_image_distance(const AffineMap& g, const Vec& center, double radius) {
  const Vec d = g.apply(center) - center;
  return std::max(0.0, min_ellipsoid_norm(d, radius * g.linear) - radius);
}

Certificate proper_scan(const GroupSpec& spec, const Vec& center, double radius, int max_len) {
  if (center.size() != spec.dim) throw Error(ErrorKind::DimMismatch, "scan center has the wrong dimension");
  EvidenceScanPayload p;
  p.center = center;
  p.radius = radius;
  p.max_len = max_len;
  p.growth.resize(max_len + 1);
  for (int l = 0; l <= max_len; ++l) p.growth[l].length = l;
  Certificate c;
  c.kind = Certificate::Kind::EvidenceScan;
  enumerate_words(spec, max_len, [&](const Word& w, const AffineMap& g) {
    auto& row = p.growth[w.length()];
    ++row.enumerated;
    const Vec d = g.apply(center) - center;
    const double lower = d.norm() - radius * (1.0 + op_norm(g.linear));
    if (lower > 0) return true;
    const double gap = min_ellipsoid_norm(d, radius * g.linear);
    if (gap > radius) return true;
    ++row.returns;
    c.words.push_back(w);
    c.word_text.push_back(w.str(spec));
    c.matrices.push_back(g);
    p.distances.push_back(gap);
    return true;
  });
  c.payload = std::move(p);
  return c;
}

DirectionSample direction_set_estimate(const GroupSpec& spec, const Vec& center, double radius, int max_len) {
  if (center.size() != spec.dim) throw Error(ErrorKind::DimMismatch, "center has the wrong dimension");
  std::vector<Vec> samples{center};
  for (int i = 0; i < spec.dim; ++i) {
    samples.push_back(center + radius * Vec::Unit(spec.dim, i));
    samples.push_back(center - radius * Vec::Unit(spec.dim, i));
  }
  DirectionSample out;
  out.center = center;
  out.radius = radius;
  const double cos_tol = std::cos(1e-2);
  enumerate_words(spec, max_len, [&](const Word& w, const AffineMap& g) {
    if (w.empty()) return true;
    for (const auto& x : samples) {
      const Vec disp = g.apply(x) - x;
      const double n = disp.norm();
      if (!(n > 10.0 * radius)) continue;
      const Vec u = disp / n;
      const bool seen = std::any_of(out.directions.begin(), out.directions.end(),
                                    [&](const DirectionEntry& e) { return e.direction.dot(u) >= cos_tol; });
      if (!seen) out.directions.push_back({u, w, n});
    }
    return true;
  });
  return out;
}

}  // namespace afcert
