#include <algorithm>
#include <cmath>

#include "afcert/certificates.hpp"

namespace afcert {

const char* kind_name(Certificate::Kind k) {
  switch (k) {
    case Certificate::Kind::FixedPointViolation: return "FixedPointViolation";
    case Certificate::Kind::OppositeSignPair: return "OppositeSignPair";
    case Certificate::Kind::BallIntersectionWitness: return "BallIntersectionWitness";
    case Certificate::Kind::EvidenceScan: return "EvidenceScan";
  }
  return "?";
}

std::vector<Certificate> eigenvalue_one_screen(const GroupSpec& spec, int max_len, double tol) {
  std::vector<Certificate> out;
  enumerate_words(spec, max_len, [&](const Word& w, const AffineMap& g) {
    if (w.empty()) return true;
    std::vector<double> dists;
    double gap = INFINITY;
    for (const auto& lam : eigenvalues(g.linear)) {
      dists.push_back(std::abs(lam - 1.0));
      gap = std::min(gap, dists.back());
    }
    if (gap <= tol) return true;
    Certificate c;
    c.kind = Certificate::Kind::FixedPointViolation;
    c.words = {w};
    c.word_text = {w.str(spec)};
    c.matrices = {g};
    FixedPointPayload p;
    p.fixed_point = fixed_point(g);
    std::sort(dists.begin(), dists.end());
    p.eigen_distances = dists;
    p.residual = (g.apply(p.fixed_point) - p.fixed_point).norm();
    c.payload = p;
    out.push_back(std::move(c));
    return true;
  });
  return out;
}

static double sign_of(const GroupSpec& spec, const AffineMap& g) {
  if (spec.form) return margulis_alpha(g, *spec.form).alpha;
  return extended_alpha(g, *spec.product_split).alpha;
}

std::vector<SignedElement> signed_elements(const GroupSpec& spec, const SearchOptions& opt) {
  if (!spec.form && !spec.product_split)
    throw Error(ErrorKind::InvalidArgument, "sign search needs a (k+1,k) form or a product split");
  const auto ball = word_ball(spec, opt.max_len);
  std::vector<std::optional<SignedElement>> slots(ball.size());
  parallel_for(static_cast<long>(ball.size()), opt.jobs, [&](long i) {
    const auto& el = ball[i];
    if (el.word.empty()) return;
    try {
      if (!is_regular(el.map, spec.ambient).regular) return;
      SignedElement s{el.word, el.map, 1, 0.0, profile(el.map)};
      if (!s.prof.contracting) {
        const long n = power_to_hyperbolic(el.map, spec.ambient, 0.5);
        if (n > opt.power_cap) return;
        s.power = n;
        s.map = power(el.map, n);
        Word pw;
        for (long k = 0; k < n; ++k) pw = pw * el.word;
        s.word = pw;
        s.prof = profile(s.map);
        if (!s.prof.contracting) return;
      }
      if (s.prof.split.a_zero.dim() != spec.ambient.expected_neutral_dim) return;
      s.alpha = sign_of(spec, s.map);
      slots[i] = std::move(s);
    } catch (const Error&) {
      // non-regular or degenerate elements are skipped
    }
  });
  std::vector<SignedElement> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

std::optional<Certificate> opposite_sign_search(const GroupSpec& spec, const SearchOptions& opt) {
  const auto els = signed_elements(spec, opt);
  for (size_t j = 0; j < els.size(); ++j) {
    for (size_t i = 0; i < j; ++i) {
      const double ai = els[i].alpha, aj = els[j].alpha;
      if (!(ai * aj < 0.0)) continue;
      if (std::abs(ai) < 1e-12 || std::abs(aj) < 1e-12) continue;
      const double eps = transversality(els[i].prof, els[j].prof);
      if (eps <= opt.min_transversality) continue;
      Certificate c;
      c.kind = Certificate::Kind::OppositeSignPair;
      c.words = {els[i].word, els[j].word};
      c.word_text = {els[i].word.str(spec), els[j].word.str(spec)};
      c.matrices = {els[i].map, els[j].map};
      OppositeSignPayload p;
      p.alpha_g = ai;
      p.alpha_h = aj;
      p.eps = eps;
      p.form = spec.form;
      p.product_split = spec.product_split;
      c.payload = p;
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace afcert
