#include "afcert/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "afcert/projective.hpp"

namespace afcert {

AmbientGroup AmbientGroup::so(int p, int q) {
  AmbientGroup a;
  a.kind = Kind::SO_pq;
  a.p = p;
  a.q = q;
  // a maximal split torus of SO(p,q) has rank min(p,q)
  a.expected_neutral_dim = std::abs(p - q);
  a.expected_fixed_dim = std::abs(p - q);
  return a;
}

AmbientGroup AmbientGroup::sl(int n, int neutral_dim, int fixed_dim) {
  AmbientGroup a;
  a.kind = Kind::SL;
  a.p = n;
  a.expected_neutral_dim = neutral_dim;
  a.expected_fixed_dim = fixed_dim;
  return a;
}

AmbientGroup AmbientGroup::product_so21_sl3() {
  AmbientGroup a;
  a.kind = Kind::ProductSO21xSL3;
  a.expected_neutral_dim = 1;
  a.expected_fixed_dim = 1;
  return a;
}

AmbientGroup AmbientGroup::generic(int neutral_dim, int fixed_dim) {
  AmbientGroup a;
  a.kind = Kind::Generic;
  a.expected_neutral_dim = neutral_dim;
  a.expected_fixed_dim = fixed_dim;
  return a;
}

std::string AmbientGroup::descriptor() const {
  switch (kind) {
    case Kind::SO_pq: return "SO(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Kind::SL:
      return "SL(" + std::to_string(p) + ";neutral=" + std::to_string(expected_neutral_dim) +
             ";fixed=" + std::to_string(expected_fixed_dim) + ")";
    case Kind::ProductSO21xSL3: return "SO(2,1)xSL3(R)";
    case Kind::Generic:
      return "generic(neutral=" + std::to_string(expected_neutral_dim) +
             ";fixed=" + std::to_string(expected_fixed_dim) + ")";
  }
  return "generic";
}

static double restricted_norm(const Mat& m, const Subspace& s) {
  if (s.empty()) return 0.0;
  return op_norm(m * s.basis);
}

HyperbolicProfile profile(const AffineMap& g, double alpha) {
  HyperbolicProfile p;
  p.split = spectral_split(g.linear, alpha);
  const auto& sp = p.split;
  if (sp.a_plus.empty() || sp.a_minus.empty()) {
    p.contracting = false;
    return p;
  }
  p.norm_minus = restricted_norm(g.linear, sp.a_minus);
  p.norm_plus = restricted_norm(g.linear.inverse(), sp.a_plus);
  p.s = std::max(p.norm_plus, p.norm_minus);
  p.eps_hyperbolic = std::min(subspace_dist(sp.a_plus, sp.d_minus()),
                              subspace_dist(sp.a_minus, sp.d_plus()));
  p.contracting = p.s < 1.0;
  return p;
}

Regularity is_regular(const AffineMap& g, const AmbientGroup& amb) {
  const int n = g.dim();
  const auto sp = spectral_split(g.linear);
  const auto fixed = kernel(g.linear - Mat::Identity(n, n), 1e-8);
  return {fixed.dim() == amb.expected_fixed_dim, sp.a_zero.dim() == amb.expected_neutral_dim};
}

bool is_hyperbolic(const AffineMap& g, const AmbientGroup& amb) {
  if (!is_regular(g, amb).regular) return false;
  return profile(g).contracting;
}

long power_to_hyperbolic(const AffineMap& g, const AmbientGroup& amb, double s_target) {
  if (!(s_target > 0.0 && s_target < 1.0))
    throw Error(ErrorKind::InvalidArgument, "s_target must lie in (0,1)");
  const auto base = profile(g);
  if (!base.contracting || !is_regular(g, amb).regular)
    throw Error(ErrorKind::NotContracting, "s(g) >= 1 or A+/A- trivial");
  constexpr long kMax = 1000000;
  // spectral lower bound on s(g^n)
  double rate = 0.0;
  for (const auto& lam : eigenvalues(g.linear)) {
    const double r = std::abs(lam);
    if (std::abs(r - 1.0) <= 1e-7) continue;  // neutral part does not limit s
    rate = std::max(rate, r < 1.0 ? r : 1.0 / r);
  }
  if (std::log(rate) * kMax >= std::log(s_target))
    throw Error(ErrorKind::Overflow, "power would exceed 1e6");

  auto s_of = [&](long n) { return profile(power(g, n)).s; };
  long n = 1;
  for (; n <= 64; ++n)
    if (s_of(n) < s_target) return n;
  long lo = 64, hi = 128;
  while (s_of(hi) >= s_target) {
    lo = hi;
    hi *= 2;
    if (lo > kMax) throw Error(ErrorKind::Overflow, "power would exceed 1e6");
  }
  while (hi - lo > 1) {
    const long mid = (lo + hi) / 2;
    (s_of(mid) < s_target ? hi : lo) = mid;
  }
  if (hi > kMax) throw Error(ErrorKind::Overflow, "power would exceed 1e6");
  return hi;
}

double transversality(const HyperbolicProfile& g, const HyperbolicProfile& h) {
  if (!g.contracting || !h.contracting)
    throw Error(ErrorKind::NotHyperbolic, "transversality needs contracting elements");
  const auto& a = g.split;
  const auto& b = h.split;
  return std::min({subspace_dist(a.a_plus, b.d_minus()), subspace_dist(a.a_minus, b.d_plus()),
                   subspace_dist(b.a_plus, a.d_minus()), subspace_dist(b.a_minus, a.d_plus())});
}

double transversality(const AffineMap& g, const AffineMap& h) {
  return transversality(profile(g), profile(h));
}

ProductEstimates product_estimates(const AffineMap& g, const AffineMap& h, double eps) {
  const auto pg = profile_product({g});
  const auto ph = profile_product({h});
  if (!pg.contracting || !ph.contracting)
    throw Error(ErrorKind::NotHyperbolic, "product_estimates needs hyperbolic elements");
  if (pg.eps_hyperbolic < eps || ph.eps_hyperbolic < eps)
    throw Error(ErrorKind::NotHyperbolic, "elements are not eps-hyperbolic");
  if (transversality(pg, ph) < eps)
    throw Error(ErrorKind::NotTransversal, "elements are not eps-transversal");
  const auto pgh = profile_product({g, h});
  ProductEstimates e;
  e.gh_eps = pgh.eps_hyperbolic;
  if (pgh.split.a_plus.empty() || pgh.split.a_minus.empty())
    throw Error(ErrorKind::NotHyperbolic, "product has trivial A+ or A-");
  e.drift_plus = subspace_hausdorff(pgh.split.a_plus, pg.split.a_plus) / pg.s;
  e.drift_minus = subspace_hausdorff(pgh.split.a_minus, ph.split.a_minus) / ph.s;
  e.s_ratio = pgh.s / (pg.s * ph.s);
  return e;
}

bool transversal_pair_test(const AffineMap& g, const AffineMap& t, const Subspace& w) {
  const int n = g.dim();
  const auto sp = spectral_split(g.linear);
  const auto dplus = sp.d_plus();
  if (w.dim() + dplus.dim() != n)
    throw Error(ErrorKind::DimMismatch, "dim w + dim D+(g) must equal the ambient dimension");
  for (int i = 0; i < w.dim(); ++i)
    if (sp.a_plus.residual(w.basis.col(i)).norm() > 1e-8)
      throw Error(ErrorKind::InvalidArgument, "w is not contained in A+(g)");
  const auto tw = Subspace::span(t.linear * w.basis);
  if (tw.dim() != w.dim()) return false;
  Mat stacked(n, n);
  stacked << tw.basis, dplus.basis;
  return min_singular(stacked) > 1e-8;
}

}  // namespace afcert
