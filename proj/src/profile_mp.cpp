#include <complex>

#include <boost/multiprecision/eigen.hpp>

#include "afcert/dynamics.hpp"
#include "afcert/projective.hpp"
#include "mp_support.hpp"

namespace afcert {

namespace {

using MpMatrix = Eigen::Matrix<mpf, Eigen::Dynamic, Eigen::Dynamic>;
using MpComplex = std::complex<mpf>;

// same classification as spectral_split, on exact-ish eigenvalues
MpMatrix root_kernel(const MpMatrix& m, const std::vector<MpComplex>& roots) {
  const int n = static_cast<int>(m.rows());
  const int k = static_cast<int>(roots.size());
  if (k == 0) return MpMatrix(n, 0);
  if (k == n) return MpMatrix::Identity(n, n);
  MpMatrix p = MpMatrix::Identity(n, n);
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto lam = roots[i];
    MpMatrix factor;
    if (abs(lam.imag()) > 0) {
      size_t best = i;
      mpf bd = -1;
      for (size_t j = i + 1; j < roots.size(); ++j) {
        if (used[j]) continue;
        const mpf d = abs(roots[j] - std::conj(lam));
        if (bd < 0 || d < bd) {
          bd = d;
          best = j;
        }
      }
      if (best != i) used[best] = true;
      factor = m * m - mpf(2) * lam.real() * m + (lam.real() * lam.real() + lam.imag() * lam.imag()) *
                                                     MpMatrix::Identity(n, n);
    } else {
      factor = m - lam.real() * MpMatrix::Identity(n, n);
    }
    p = factor * p;
    const mpf s = p.norm();
    if (s > 0) p /= s;
  }
  Eigen::JacobiSVD<MpMatrix> svd(p, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(k);
}

Mat to_double(const MpMatrix& m) {
  Mat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = static_cast<double>(m(i, j));
  return r;
}

double mp_op_norm(const MpMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MpMatrix> svd(m);
  return static_cast<double>(svd.singularValues()(0));
}

}  // namespace

HyperbolicProfile profile_product(const std::vector<AffineMap>& factors, int bits) {
  if (factors.empty()) throw Error(ErrorKind::InvalidArgument, "profile_product needs at least one factor");
  const int n = factors.front().dim();
  for (const auto& f : factors)
    if (f.dim() != n) throw Error(ErrorKind::DimMismatch, "factor dimensions differ");
  if (bits < 64) throw Error(ErrorKind::InvalidArgument, "at least 64 bits are required");

  MpPrecision guard(bits);
  MpMatrix m = MpMatrix::Identity(n, n), minv = MpMatrix::Identity(n, n);
  for (const auto& f : factors) {
    if (std::abs(f.linear.determinant()) < 1e-12) throw Error(ErrorKind::SingularMatrix, "|det| below 1e-12");
    MpMatrix l(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) l(i, j) = mpf(f.linear(i, j));
    m = m * l;
    minv = MpMatrix(l.inverse()) * minv;
  }

  const double unit_band = 1e-9, guard_band = 1e-7;
  Eigen::EigenSolver<MpMatrix> es(m, false);
  std::vector<MpComplex> plus, minus, zero;
  for (int i = 0; i < n; ++i) {
    const MpComplex lam = es.eigenvalues()(i);
    const double r = static_cast<double>(abs(lam)) - 1.0;
    if (std::abs(r) <= unit_band) zero.push_back(lam);
    else if (std::abs(r) < guard_band)
      throw Error(ErrorKind::AmbiguousModulus, "eigenvalue modulus next to the threshold band");
    else if (r > 0) plus.push_back(lam);
    else minus.push_back(lam);
  }
  const MpMatrix bp = root_kernel(m, plus), bm = root_kernel(m, minus), bz = root_kernel(m, zero);

  HyperbolicProfile p;
  p.split.a_plus = Subspace{n, to_double(bp)};
  p.split.a_minus = Subspace{n, to_double(bm)};
  p.split.a_zero = Subspace{n, to_double(bz)};
  if (plus.empty() || minus.empty()) return p;
  p.norm_minus = mp_op_norm(m * bm);
  p.norm_plus = mp_op_norm(minv * bp);
  p.s = std::max(p.norm_plus, p.norm_minus);
  p.eps_hyperbolic = std::min(subspace_dist(p.split.a_plus, p.split.d_minus()),
                              subspace_dist(p.split.a_minus, p.split.d_plus()));
  p.contracting = p.s < 1.0;
  return p;
}

}  // namespace afcert
