#include <sstream>

#include "afcert/certificates.hpp"
#include "afcert/projective.hpp"
#include "mp_support.hpp"

namespace afcert {

namespace {

using MpVec = std::vector<mpf>;
struct MpMat {
  int n = 0;
  std::vector<mpf> a;
  mpf& operator()(int i, int j) { return a[i * n + j]; }
  const mpf& operator()(int i, int j) const { return a[i * n + j]; }
};

MpMat to_mp(const Mat& m) {
  MpMat r{static_cast<int>(m.rows()), {}};
  r.a.resize(r.n * r.n);
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j) r(i, j) = mpf(m(i, j));
  return r;
}

MpVec to_mp(const Vec& v) {
  MpVec r(v.size());
  for (int i = 0; i < v.size(); ++i) r[i] = mpf(v(i));
  return r;
}

MpVec apply(const MpMat& l, const MpVec& t, const MpVec& x) {
  MpVec y(l.n);
  for (int i = 0; i < l.n; ++i) {
    mpf s = t[i];
    for (int j = 0; j < l.n; ++j) s += l(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

mpf dist(const MpVec& a, const MpVec& b) {
  mpf s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return sqrt(s);
}

// f = h^m g^n applied one letter at a time
MpVec image(const AffineMap& g, const AffineMap& h, long n, long m, const MpVec& y) {
  const MpMat gl = to_mp(g.linear), hl = to_mp(h.linear);
  const MpVec gt = to_mp(g.translation), ht = to_mp(h.translation);
  MpVec x = y;
  for (long k = 0; k < n; ++k) x = apply(gl, gt, x);
  for (long k = 0; k < m; ++k) x = apply(hl, ht, x);
  return x;
}

// linear part F and f(0) of h^m g^n
void compose_power(const AffineMap& g, const AffineMap& h, long n, long m, MpMat& f, MpVec& c) {
  const int d = g.dim();
  f = MpMat{d, std::vector<mpf>(d * d)};
  for (int i = 0; i < d; ++i) f(i, i) = 1;
  c = MpVec(d, mpf(0));
  auto step = [&](const MpMat& l, const MpVec& t) {
    MpMat nf{d, std::vector<mpf>(d * d)};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        mpf s = 0;
        for (int k = 0; k < d; ++k) s += l(i, k) * f(k, j);
        nf(i, j) = s;
      }
    f = std::move(nf);
    c = apply(l, t, c);
  };
  const MpMat gl = to_mp(g.linear), hl = to_mp(h.linear);
  const MpVec gt = to_mp(g.translation), ht = to_mp(h.translation);
  for (long k = 0; k < n; ++k) step(gl, gt);
  for (long k = 0; k < m; ++k) step(hl, ht);
}

// Gaussian elimination with partial pivoting
MpVec solve(MpMat a, MpVec b) {
  const int n = a.n;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (abs(a(r, col)) > abs(a(piv, col))) piv = r;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const mpf f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  MpVec x(n);
  for (int i = n - 1; i >= 0; --i) {
    mpf s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

std::string to_string(const mpf& x, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace

int witness_precision_bits(const AffineMap& g, const AffineMap& h, long n, long m) {
  const double lg = std::log2(std::max(1.0, op_norm(g.linear)));
  const double lh = std::log2(std::max(1.0, op_norm(h.linear)));
  return 128 + static_cast<int>(std::ceil(3.0 * (n * lg + m * lh)));
}

static WitnessEntry witness_entry(const AffineMap& g, const AffineMap& h, long n, long m, const Vec& p1,
                                  const Vec& p2) {
  WitnessEntry e;
  e.n = n;
  e.m = m;
  e.precision_bits = witness_precision_bits(g, h, n, m);
  MpPrecision prec(e.precision_bits);
  const int d = g.dim();
  MpMat f;
  MpVec c;
  compose_power(g, h, n, m, f, c);
  const MpVec mp1 = to_mp(p1), mp2 = to_mp(p2);
  // minimise |delta|^2 + |F delta + f(p1) - p2|^2
  MpVec r = apply(f, c, mp1);
  for (int i = 0; i < d; ++i) r[i] -= mp2[i];
  MpMat a{d, std::vector<mpf>(d * d)};
  MpVec b(d, mpf(0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      mpf s = (i == j) ? mpf(1) : mpf(0);
      for (int k = 0; k < d; ++k) s += f(k, i) * f(k, j);
      a(i, j) = s;
    }
  for (int i = 0; i < d; ++i) {
    mpf s = 0;
    for (int k = 0; k < d; ++k) s -= f(k, i) * r[k];
    b[i] = s;
  }
  const MpVec delta = solve(a, b);
  MpVec y(d);
  for (int i = 0; i < d; ++i) y[i] = mp1[i] + delta[i];
  const int digits = static_cast<int>(std::ceil(e.precision_bits * 0.30103)) + 5;
  for (int i = 0; i < d; ++i) e.y.push_back(to_string(y[i], digits));
  // distances from the serialized point, as a checker would see it
  MpVec ys(d);
  for (int i = 0; i < d; ++i) ys[i] = mpf(e.y[i]);
  e.dist_start = static_cast<double>(dist(ys, mp1));
  e.dist_image = static_cast<double>(dist(image(g, h, n, m, ys), mp2));
  return e;
}

CheckResult check_ball_entry(const AffineMap& g, const AffineMap& h, const WitnessEntry& e, const Vec& p1,
                             const Vec& p2, double radius) {
  if (e.n < 1 || e.m < 1) return {false, "non-positive exponent"};
  if (static_cast<int>(e.y.size()) != g.dim()) return {false, "witness point has the wrong dimension"};
  MpPrecision prec(std::max(e.precision_bits, witness_precision_bits(g, h, e.n, e.m)));
  MpVec y(e.y.size());
  try {
    for (size_t i = 0; i < e.y.size(); ++i) y[i] = mpf(e.y[i]);
  } catch (const std::exception&) {
    return {false, "unparseable witness coordinate"};
  }
  const double d1 = static_cast<double>(dist(y, to_mp(p1)));
  const double d2 = static_cast<double>(dist(image(g, h, e.n, e.m, y), to_mp(p2)));
  if (!(d1 < radius)) return {false, "n=" + std::to_string(e.n) + ": start point outside B(p1,r)"};
  if (!(d2 < radius)) return {false, "n=" + std::to_string(e.n) + ": image outside B(p2,r)"};
  return {true, ""};
}

static bool same_map(const AffineMap& a, const AffineMap& b) {
  const Mat ea = homogeneous_embed(a), eb = homogeneous_embed(b);
  return (ea - eb).norm() <= 1e-12 * std::max(1.0, ea.norm());
}

Certificate nonproper_witness(const AffineMap& g, const AffineMap& h, std::optional<SignData> sign_data,
                              long n_max, double radius) {
  const int d = g.dim();
  if (h.dim() != d) throw Error(ErrorKind::DimMismatch, "witness pair dimensions differ");
  if (n_max < 1 || !(radius > 0)) throw Error(ErrorKind::InvalidArgument, "n_max >= 1 and radius > 0");
  if (same_map(g, h)) throw Error(ErrorKind::NotTransversal, "g and h are the same element");
  const auto pg = profile(g), ph = profile(h);
  if (!pg.contracting || !ph.contracting)
    throw Error(ErrorKind::NotHyperbolic, "witness needs hyperbolic elements");
  if (pg.split.a_zero.dim() != 1 || ph.split.a_zero.dim() != 1)
    throw Error(ErrorKind::UnsupportedGeometry, "neutral parts must be lines");
  const auto ax_g = invariant_axis(g, pg.split);
  const auto ax_h = invariant_axis(h, ph.split);
  const Vec& tg = ax_g.direction;
  const Vec& th = ax_h.direction;
  if (tg.norm() < 1e-12 || th.norm() < 1e-12)
    throw Error(ErrorKind::UnsupportedGeometry, "an element has a fixed point (t = 0)");

  // coinciding axes: parallel, and the base points differ along the axis only
  const bool parallel = proj_dist(tg, th) < 1e-9;
  const Vec off = ax_h.base_point - ax_g.base_point;
  const bool same_line = parallel && proj_dist(tg, tg + off) < 1e-9 &&
                         (off - off.dot(tg) / tg.squaredNorm() * tg).norm() < 1e-9 * std::max(1.0, off.norm());
  const Mat eg = homogeneous_embed(g), eh = homogeneous_embed(h);
  const bool commute = (eg * eh - eh * eg).norm() <= 1e-9 * std::max(1.0, eg.norm() * eh.norm());
  if (same_line && (commute || parallel))
    throw Error(ErrorKind::AxesIntersect, "L_g and L_h coincide; the pair is not a ping-pong pair");

  const double eps = transversality(pg, ph);
  if (eps <= 1e-9) throw Error(ErrorKind::NotTransversal, "g and h are not transversal");
  if (sign_data && !(sign_data->alpha_g * sign_data->alpha_h < 0))
    throw Error(ErrorKind::SignMismatch, "signs of g and h are not opposite");

  const Subspace a_line = intersect(pg.split.d_plus(), ph.split.d_minus());
  if (a_line.dim() != 1) throw Error(ErrorKind::UnsupportedGeometry, "D+(g) and D-(h) must meet in a line");

  auto neutral_coef = [&](const SpectralSplit& sp, const Vec& x, const Vec& t) {
    Mat b(d, d);
    b << sp.a_plus.basis, sp.a_minus.basis, sp.a_zero.basis;
    const Vec c = b.colPivHouseholderQr().solve(x);
    const Vec x0 = sp.a_zero.basis * c.tail(1);
    return x0.dot(t) / t.squaredNorm();
  };
  const Vec a = a_line.basis.col(0);
  const double cg = neutral_coef(pg.split, a, tg);
  if (std::abs(cg) < 1e-9) throw Error(ErrorKind::UnsupportedGeometry, "D+(g) ∩ D-(h) lies in A+(g)");
  const Vec v = a / cg;  // A0(g)-component of v is t_g
  const double lambda = -neutral_coef(ph.split, v, th);
  if (!(lambda > 1e-9))
    throw Error(ErrorKind::SignMismatch, "displacements along the axes are not opposite");

  BallWitnessPayload w;
  w.radius = radius;
  w.lambda = lambda;
  w.v = v;
  w.p1 = ax_g.base_point;
  // p = p1 + a+ with a+ in A+(g) and p - b_h in D-(h)
  const Subspace dm = ph.split.d_minus();
  Mat sys(d, pg.split.a_plus.dim() + dm.dim());
  sys << pg.split.a_plus.basis, dm.basis;
  if (sys.cols() != d) throw Error(ErrorKind::UnsupportedGeometry, "A+(g) and D-(h) do not complement");
  const Vec sol = sys.colPivHouseholderQr().solve(ax_h.base_point - w.p1);
  w.p = w.p1 + pg.split.a_plus.basis * sol.head(pg.split.a_plus.dim());
  {
    Mat b(d, d);
    b << ph.split.a_plus.basis, ph.split.a_minus.basis, ph.split.a_zero.basis;
    const Vec c = b.colPivHouseholderQr().solve(w.p - ax_h.base_point);
    w.p2 = ax_h.base_point + ph.split.a_zero.basis * c.tail(1);
  }

  for (long n = 1; n <= n_max; ++n) {
    const long m = std::lround(lambda * static_cast<double>(n));
    if (m < 1) continue;
    WitnessEntry e = witness_entry(g, h, n, m, w.p1, w.p2);
    e.start = w.p + static_cast<double>(n) * v;
    if (e.dist_start < radius && e.dist_image < radius) w.entries.push_back(std::move(e));
  }
  if (w.entries.empty()) throw Error(ErrorKind::NoVerifiedN, "no exponent verified up to n_max");

  Certificate c;
  c.kind = Certificate::Kind::BallIntersectionWitness;
  c.matrices = {g, h};
  c.payload = std::move(w);
  return c;
}

}  // namespace afcert

namespace afcert {

static double recompute_alpha(const OppositeSignPayload& p, const AffineMap& g) {
  if (p.form) return margulis_alpha(g, *p.form).alpha;
  if (p.product_split) return extended_alpha(g, *p.product_split).alpha;
  throw Error(ErrorKind::InvalidArgument, "sign certificate without form data");
}

CheckResult check_certificate(const Certificate& c) {
  try {
    switch (c.kind) {
      case Certificate::Kind::FixedPointViolation: {
        const auto& p = std::get<FixedPointPayload>(c.payload);
        if (c.matrices.size() != 1) return {false, "expected one matrix"};
        const auto& g = c.matrices[0];
        const double gap = unit_eigen_gap(g.linear);
        if (!(gap > 1e-8)) return {false, "linear part has eigenvalue 1"};
        const double res = (g.apply(p.fixed_point) - p.fixed_point).norm();
        if (!(res < 1e-8)) return {false, "fixed point residual " + std::to_string(res)};
        return {true, ""};
      }
      case Certificate::Kind::OppositeSignPair: {
        const auto& p = std::get<OppositeSignPayload>(c.payload);
        if (c.matrices.size() != 2) return {false, "expected two matrices"};
        const double ag = recompute_alpha(p, c.matrices[0]);
        const double ah = recompute_alpha(p, c.matrices[1]);
        if (!(ag * ah < 0)) return {false, "recomputed signs are not opposite"};
        auto close = [](double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); };
        if (!close(ag, p.alpha_g) || !close(ah, p.alpha_h)) return {false, "recomputed alphas differ"};
        const double eps = transversality(c.matrices[0], c.matrices[1]);
        if (!(eps > 0)) return {false, "pair is not transversal"};
        return {true, ""};
      }
      case Certificate::Kind::BallIntersectionWitness: {
        const auto& p = std::get<BallWitnessPayload>(c.payload);
        if (c.matrices.size() != 2) return {false, "expected two matrices"};
        if (p.entries.empty()) return {false, "no witness entries"};
        for (const auto& e : p.entries) {
          auto r = check_ball_entry(c.matrices[0], c.matrices[1], e, p.p1, p.p2, p.radius);
          if (!r.ok) return r;
        }
        return {true, ""};
      }
      case Certificate::Kind::EvidenceScan: {
        const auto& p = std::get<EvidenceScanPayload>(c.payload);
        if (c.matrices.size() != p.distances.size()) return {false, "return set and distances differ in size"};
        for (size_t i = 0; i < c.matrices.size(); ++i)
          if (ball_image_distance(c.matrices[i], p.center, p.radius) > 0)
            return {false, "element " + std::to_string(i) + " does not return to K"};
        return {true, ""};
      }
    }
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
  return {false, "unknown certificate kind"};
}

}  // namespace afcert
