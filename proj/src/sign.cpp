#include "afcert/sign.hpp"

#include <cmath>

#include "afcert/projective.hpp"

namespace afcert {

QuadraticForm QuadraticForm::standard(int p, int q) {
  return QuadraticForm{p, q, Mat::Identity(p + q, p + q)};
}

QuadraticForm QuadraticForm::with_basis(int p, int q, const Mat& basis) {
  if (basis.rows() != p + q || basis.cols() != p + q)
    throw Error(ErrorKind::DimMismatch, "form basis must be (p+q) x (p+q)");
  if (min_singular(basis) < 1e-10) throw Error(ErrorKind::SingularMatrix, "form basis is singular");
  return QuadraticForm{p, q, basis};
}

Mat QuadraticForm::signature_diag() const {
  Vec d(p + q);
  d.head(p).setOnes();
  d.tail(q).setConstant(-1.0);
  return d.asDiagonal();
}

Mat QuadraticForm::gram() const {
  const Mat inv = basis.inverse();
  return inv.transpose() * signature_diag() * inv;
}

Vec QuadraticForm::coords(const Vec& x) const { return basis.colPivHouseholderQr().solve(x); }

Mat QuadraticForm::coords(const Mat& x) const { return basis.colPivHouseholderQr().solve(x); }

double QuadraticForm::operator()(const Vec& a, const Vec& b) const {
  const Vec ca = coords(a), cb = coords(b);
  return ca.head(p).dot(cb.head(p)) - ca.tail(q).dot(cb.tail(q));
}

Subspace QuadraticForm::x_space() const { return Subspace::span(basis.leftCols(p)); }
Subspace QuadraticForm::y_space() const { return Subspace::span(basis.rightCols(q)); }

bool QuadraticForm::preserved_by(const Mat& m, double tol) const {
  const Mat g = gram();
  return (m.transpose() * g * m - g).norm() <= tol * std::max(1.0, m.squaredNorm());
}

IsotropicSubspace IsotropicSubspace::make(const QuadraticForm& form, const Subspace& s) {
  const Mat c = form.coords(s.basis);
  const Mat b = c.topRows(form.p).transpose() * c.topRows(form.p) -
                c.bottomRows(form.q).transpose() * c.bottomRows(form.q);
  if (b.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, c.squaredNorm()))
    throw Error(ErrorKind::NotIsotropic, "B does not vanish on the subspace");
  return IsotropicSubspace{s};
}

static int det_sign(const Mat& m, double rel_tol, ErrorKind err, const char* what) {
  const double d = m.determinant();
  double scale = 1.0;
  for (int j = 0; j < m.cols(); ++j) scale *= std::max(m.col(j).norm(), 1e-300);
  if (!(std::abs(d) > rel_tol * scale)) throw Error(err, what);
  return d > 0 ? 1 : -1;
}

int y_orientation(const QuadraticForm& form, const Mat& w_basis) {
  const Mat c = form.coords(w_basis);
  return det_sign(c.bottomRows(form.q), 1e-10, ErrorKind::DegenerateProjection,
                  "pi_Y restricted to the isotropic subspace is singular");
}

int orientation_sign(const QuadraticForm& form, const Mat& w_basis, const Vec& v) {
  if (form.p != form.q + 1)
    throw Error(ErrorKind::InvalidArgument, "orientation transport needs signature (k+1,k)");
  if (w_basis.cols() != form.q)
    throw Error(ErrorKind::NotMaximalIsotropic, "isotropic subspace must have dimension q");
  const int sy = y_orientation(form, w_basis);
  Mat full(form.dim(), form.p);
  full << w_basis, v;
  const Mat c = form.coords(full);
  const int sx = det_sign(c.topRows(form.p), 1e-10, ErrorKind::DegenerateProjection,
                          "pi_X restricted to the orthogonal complement is singular");
  return sx * sy;
}

Vec oriented_neutral_vector(const QuadraticForm& form, const IsotropicSubspace& a_plus,
                            const SpectralSplit& split) {
  if (a_plus.space.dim() != form.q)
    throw Error(ErrorKind::NotMaximalIsotropic, "A+ must have dimension q");
  try {
    IsotropicSubspace::make(form, a_plus.space);
  } catch (const Error&) {
    throw Error(ErrorKind::NotMaximalIsotropic, "A+ is not B-isotropic");
  }
  if (split.a_zero.dim() != 1)
    throw Error(ErrorKind::NeutralDimWrong, "neutral part must be a line");
  Vec v = split.a_zero.basis.col(0);
  v *= orientation_sign(form, a_plus.space.basis, v);
  const double b = form(v, v);
  if (!(b > 1e-12)) throw Error(ErrorKind::DegenerateProjection, "neutral vector is not spacelike");
  return v / std::sqrt(b);
}

SignResult margulis_alpha(const AffineMap& g, const QuadraticForm& form) {
  if (g.dim() != form.dim()) throw Error(ErrorKind::DimMismatch, "form and map dimensions differ");
  if (!form.preserved_by(g.linear)) throw Error(ErrorKind::NotIsometry, "l(g) does not preserve B");
  if (form.p != form.q + 1) throw Error(ErrorKind::InvalidArgument, "signature must be (k+1,k)");
  SpectralSplit split;
  try {
    split = spectral_split(g.linear);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotRRegular, e.what());
  }
  if (split.a_zero.dim() != 1 || split.a_plus.dim() != form.q)
    throw Error(ErrorKind::NotRRegular, "dim A0 must be 1");
  SignResult r;
  r.neutral_vector = oriented_neutral_vector(form, IsotropicSubspace{split.a_plus}, split);
  r.alpha = form(g.translation, r.neutral_vector);
  try {
    r.axis = invariant_axis(g, split);
  } catch (const Error&) {
    r.axis.reset();
  }
  return r;
}

ProductSplit ProductSplit::standard() {
  ProductSplit s;
  Mat b1 = Mat::Zero(6, 3), b2 = Mat::Zero(6, 3);
  b1.topRows(3).setIdentity();
  b2.bottomRows(3).setIdentity();
  s.v1 = Subspace{6, b1};
  s.v2 = Subspace{6, b2};
  s.form_on_v1 = QuadraticForm::standard(2, 1);
  return s;
}

void ProductSplit::validate() const {
  if (v1.ambient != 6 || v2.ambient != 6 || v1.dim() != 3 || v2.dim() != 3)
    throw Error(ErrorKind::NotProductCompatible, "need V1 + V2 = R^6 with dims 3 + 3");
  if ((v1.basis.transpose() * v2.basis).norm() > 1e-10)
    throw Error(ErrorKind::NotProductCompatible, "V1 and V2 must be orthogonal");
  if ((v1.basis.transpose() * v1.basis - Mat::Identity(3, 3)).norm() > 1e-10 ||
      (v2.basis.transpose() * v2.basis - Mat::Identity(3, 3)).norm() > 1e-10)
    throw Error(ErrorKind::NotProductCompatible, "V1 and V2 bases must be orthonormal");
  if (form_on_v1.p != 2 || form_on_v1.q != 1)
    throw Error(ErrorKind::NotProductCompatible, "form on V1 must have signature (2,1)");
}

SignResult extended_alpha(const AffineMap& g, const ProductSplit& ps) {
  ps.validate();
  if (g.dim() != 6) throw Error(ErrorKind::NotProductCompatible, "extended sign needs dimension 6");
  const Mat& l = g.linear;
  const double scale = std::max(1.0, l.norm());
  // V2 must be invariant so that the action on V/V2 ~ V1 is a homomorphism
  if ((ps.v1.basis.transpose() * l * ps.v2.basis).norm() > 1e-9 * scale)
    throw Error(ErrorKind::NotProductCompatible, "l(g) does not preserve V2");
  const Mat t1 = ps.theta1(l);
  if (!ps.form_on_v1.preserved_by(t1))
    throw Error(ErrorKind::NotProductCompatible, "theta1(l(g)) is not in SO(2,1)");

  const SpectralSplit split = spectral_split(l);
  if (split.a_zero.dim() != 1) throw Error(ErrorKind::NeutralDimWrong, "dim A0(g) must be 1");
  const SpectralSplit split1 = spectral_split(t1);
  if (split1.a_zero.dim() != 1 || split1.a_plus.dim() != 1)
    throw Error(ErrorKind::NeutralDimWrong, "theta1(g) must have a neutral line");
  const Vec vplus = oriented_neutral_vector(ps.form_on_v1, IsotropicSubspace{split1.a_plus}, split1);

  // v_g in A0(g) projecting to v+
  const Vec a0 = split.a_zero.basis.col(0);
  const Vec pa0 = ps.v1.basis.transpose() * a0;
  const double s = pa0.dot(vplus) / vplus.squaredNorm();
  if (std::abs(s) < 1e-9 || (pa0 - s * vplus).norm() > 1e-7 * pa0.norm())
    throw Error(ErrorKind::NotProductCompatible, "A0(g) does not project onto A0(theta1(g))");
  const Vec vg = a0 / s;

  // displacement along L_g: the A0 component of g(0) - 0 along A+ + A-
  Mat basis(6, 6);
  basis << split.a_plus.basis, split.a_minus.basis, split.a_zero.basis;
  const Vec coef = basis.colPivHouseholderQr().solve(g.translation);
  const Vec t = a0 * coef(5);

  SignResult r;
  r.neutral_vector = vg;
  r.alpha = ps.form_on_v1(ps.v1.basis.transpose() * t, vplus);
  try {
    r.axis = invariant_axis(g, split);
  } catch (const Error&) {
    r.axis.reset();
  }
  return r;
}

PhiSide phi_side(const QuadraticForm& form, const IsotropicSubspace& u, const IsotropicSubspace& w) {
  if (form.p != 2 || form.q != 1) throw Error(ErrorKind::InvalidArgument, "phi_side needs a (2,1) form");
  IsotropicSubspace::make(form, u.space);
  IsotropicSubspace::make(form, w.space);
  if (u.space.dim() != 1 || w.space.dim() != 1)
    throw Error(ErrorKind::NotIsotropic, "maximal isotropic subspaces of a (2,1) form are lines");
  const Vec cu = form.coords(Vec(u.space.basis.col(0)));
  const Vec cw = form.coords(Vec(w.space.basis.col(0)));
  if (proj_dist(cu, cw) < 1e-10)
    throw Error(ErrorKind::EqualSubspaces, "u and w coincide");

  auto b = [](const Vec& a, const Vec& c) { return a(0) * c(0) + a(1) * c(1) - a(2) * c(2); };
  const Vec v = cu / cu(2);  // pi_Y(v) = w1
  Vec v0(3);
  v0 << -v(1), v(0), 0.0;
  v0 /= v0.head(2).norm();  // det(pi_X v, v0) = |pi_X v|^2 > 0
  const double alpha = -b(v0, cw) / b(v, cw);
  const Vec w0 = v0 + alpha * v;
  Vec w1 = Vec::Zero(3);
  w1(2) = 1.0;
  if (std::abs(b(w0, w1) + alpha) > 1e-9 * std::max(1.0, std::abs(alpha)))
    throw Error(ErrorKind::InvalidArgument, "consistency check B(w0,w1) = -alpha failed");
  if (std::abs(alpha) < 1e-12)
    throw Error(ErrorKind::DegenerateSide, "w lies in U + <w1>; alpha(W) = 0");
  return PhiSide{alpha > 0 ? 1 : -1, alpha, form.basis * w0};
}

Mat boost21(double t) {
  Mat m = Mat::Identity(3, 3);
  m(0, 0) = std::cosh(t);
  m(0, 2) = std::sinh(t);
  m(2, 0) = std::sinh(t);
  m(2, 2) = std::cosh(t);
  return m;
}

Mat rot21(double theta) {
  Mat m = Mat::Identity(3, 3);
  m(0, 0) = std::cos(theta);
  m(0, 1) = -std::sin(theta);
  m(1, 0) = std::sin(theta);
  m(1, 1) = std::cos(theta);
  return m;
}

}  // namespace afcert
