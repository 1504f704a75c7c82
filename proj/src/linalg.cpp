#include "afcert/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace afcert {

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::AmbiguousModulus: return "AmbiguousModulus";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NoUnitEigenvalue: return "NoUnitEigenvalue";
    case ErrorKind::NonSemisimpleNeutral: return "NonSemisimpleNeutral";
    case ErrorKind::UnitEigenvalue: return "UnitEigenvalue";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::EmptySubspace: return "EmptySubspace";
    case ErrorKind::NotContracting: return "NotContracting";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::NotTransversal: return "NotTransversal";
    case ErrorKind::NotMaximalIsotropic: return "NotMaximalIsotropic";
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NotRRegular: return "NotRRegular";
    case ErrorKind::NeutralDimWrong: return "NeutralDimWrong";
    case ErrorKind::NotProductCompatible: return "NotProductCompatible";
    case ErrorKind::EqualSubspaces: return "EqualSubspaces";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::DegenerateSide: return "DegenerateSide";
    case ErrorKind::BallTooLarge: return "BallTooLarge";
    case ErrorKind::AxesIntersect: return "AxesIntersect";
    case ErrorKind::NoVerifiedN: return "NoVerifiedN";
    case ErrorKind::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorKind::SignMismatch: return "SignMismatch";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::DegenerateAngle: return "DegenerateAngle";
    case ErrorKind::UnknownDescriptor: return "UnknownDescriptor";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

Subspace Subspace::zero(int n) { return Subspace{n, Mat(n, 0)}; }

Subspace Subspace::full(int n) { return Subspace{n, Mat::Identity(n, n)}; }

Subspace Subspace::span(const Mat& m, double tol) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() == 0) return zero(n);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 1e-300) return zero(n);
  int r = 0;
  while (r < s.size() && s(r) > tol * s(0)) ++r;
  return Subspace{n, svd.matrixU().leftCols(r)};
}

Subspace Subspace::line(const Vec& v) {
  const double nv = v.norm();
  if (nv == 0.0) throw Error(ErrorKind::ZeroVector, "line through the zero vector");
  Mat b = v / nv;
  return Subspace{static_cast<int>(v.size()), b};
}

Mat Subspace::projector() const { return basis * basis.transpose(); }

Vec Subspace::residual(const Vec& v) const {
  if (empty()) return v;
  return v - basis * (basis.transpose() * v);
}

Subspace operator+(const Subspace& a, const Subspace& b) {
  if (a.ambient != b.ambient) throw Error(ErrorKind::DimMismatch, "subspace sum");
  Mat m(a.ambient, a.dim() + b.dim());
  m << a.basis, b.basis;
  return Subspace::span(m, 1e-9);
}

Subspace intersect(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient != b.ambient) throw Error(ErrorKind::DimMismatch, "subspace intersection");
  if (a.empty() || b.empty()) return Subspace::zero(a.ambient);
  Mat m(a.ambient, a.dim() + b.dim());
  m << a.basis, -b.basis;
  Subspace k = kernel(m, tol);
  if (k.empty()) return Subspace::zero(a.ambient);
  Mat pts = a.basis * k.basis.topRows(a.dim());
  return Subspace::span(pts, 1e-9);
}

std::vector<std::complex<double>> eigenvalues(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + es.eigenvalues().size());
  return ev;
}

std::vector<double> char_poly(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::complex<double>> c(1, 1.0);
  for (const auto& lam : eigenvalues(m)) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= lam * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = c[i].real();
  return out;
}

Mat poly_eval(const std::vector<double>& coeffs, const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Mat acc = Mat::Zero(n, n);
  for (double c : coeffs) acc = acc * m + c * Mat::Identity(n, n);
  return acc;
}

static void require_invertible(const Mat& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimMismatch, "matrix not square");
  const double d = m.determinant();
  if (!std::isfinite(d) || std::abs(d) < 1e-12)
    throw Error(ErrorKind::SingularMatrix, "|det| below 1e-12");
}

std::vector<std::pair<double, int>> eigen_moduli(const Mat& m) {
  require_invertible(m);
  std::vector<double> mods;
  for (const auto& lam : eigenvalues(m)) mods.push_back(std::abs(lam));
  std::sort(mods.begin(), mods.end(), std::greater<>());
  std::vector<std::pair<double, int>> out;
  for (double v : mods) {
    if (!out.empty() && std::abs(out.back().first - v) <= 1e-6 * out.back().first) {
      // running mean keeps merged clusters centered
      auto& [mu, k] = out.back();
      mu = (mu * k + v) / (k + 1);
      ++k;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

Subspace kernel(const Mat& m, double tol) {
  const int n = static_cast<int>(m.cols());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  if (smax > 0.0)
    while (rank < s.size() && s(rank) >= tol * smax) ++rank;
  return Subspace{n, svd.matrixV().rightCols(n - rank)};
}

// Null space of prod (m - lam_i I) over the given conjugate-closed root group,
// with the dimension fixed to the number of roots.
static Subspace root_group_kernel(const Mat& m, const std::vector<std::complex<double>>& roots) {
  const int n = static_cast<int>(m.rows());
  const int k = static_cast<int>(roots.size());
  if (k == 0) return Subspace::zero(n);
  if (k == n) return Subspace::full(n);
  Mat p = Mat::Identity(n, n);
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto lam = roots[i];
    Mat factor;
    if (std::abs(lam.imag()) > 0.0) {
      // pair with the conjugate root
      size_t best = i;
      double bd = INFINITY;
      for (size_t j = i + 1; j < roots.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(roots[j] - std::conj(lam));
        if (d < bd) { bd = d; best = j; }
      }
      if (best != i) used[best] = true;
      factor = m * m - 2.0 * lam.real() * m + std::norm(lam) * Mat::Identity(n, n);
    } else {
      factor = m - lam.real() * Mat::Identity(n, n);
    }
    p = factor * p;
    const double s = p.norm();
    if (s > 0.0) p /= s;
  }
  Eigen::JacobiSVD<Mat> svd(p, Eigen::ComputeFullV);
  return Subspace{n, svd.matrixV().rightCols(k)};
}

SpectralSplit spectral_split(const Mat& m, double alpha, double unit_band) {
  require_invertible(m);
  // Moduli just outside the neutral band are numerically undecidable.
  const double guard = std::max(1e-7, 10.0 * unit_band);
  std::vector<std::complex<double>> plus, minus, zero;
  for (const auto& lam : eigenvalues(m)) {
    const double r = std::abs(lam) / alpha - 1.0;
    if (std::abs(r) <= unit_band) {
      zero.push_back(lam);
    } else if (std::abs(r) < guard) {
      throw Error(ErrorKind::AmbiguousModulus,
                  "eigenvalue modulus " + std::to_string(std::abs(lam)) + " next to the threshold band");
    } else if (r > 0) {
      plus.push_back(lam);
    } else {
      minus.push_back(lam);
    }
  }
  SpectralSplit s;
  s.alpha_threshold = alpha;
  s.a_plus = root_group_kernel(m, plus);
  s.a_minus = root_group_kernel(m, minus);
  s.a_zero = root_group_kernel(m, zero);
  return s;
}

Mat restrict_to(const Mat& m, const Subspace& s) { return s.basis.transpose() * m * s.basis; }

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double min_singular(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

Mat mat_pow(const Mat& m, long n) {
  Mat base = n < 0 ? Mat(m.inverse()) : m;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Mat acc = Mat::Identity(m.rows(), m.cols());
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

}  // namespace afcert
