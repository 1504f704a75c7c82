#include <algorithm>
#include <cmath>
#include <array>
#include <functional>

#include <Eigen/SVD>

#include "afcert/certificates.hpp"
#include "afcert/projective.hpp"

namespace afcert {

namespace {

struct V1View {
  QuadraticForm form;
  std::function<Mat(const Mat&)> theta1;
};

V1View v1_view(const GroupSpec& spec) {
  if (spec.product_split) {
    const ProductSplit ps = *spec.product_split;
    return {ps.form_on_v1, [ps](const Mat& m) { return ps.theta1(m); }};
  }
  if (spec.form && spec.form->p == 2 && spec.form->q == 1) return {*spec.form, [](const Mat& m) { return m; }};
  throw Error(ErrorKind::InvalidArgument, "configuration search needs a (2,1) form");
}

// theta1 part hyperbolic in SO(2,1): one expanding, one neutral, one contracting direction
std::optional<HyperbolicProfile> theta1_profile(const Mat& t1) {
  try {
    auto p = profile(AffineMap::linear_only(t1));
    if (!p.contracting || p.split.a_plus.dim() != 1 || p.split.a_zero.dim() != 1) return std::nullopt;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

double sphere_search(const std::function<double(const Vec&)>& f, int mesh) {
  mesh = std::max(mesh, 4);
  auto point = [](double th, double ph) {
    Vec u(3);
    u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
    return u;
  };
  struct Cand {
    double v, th, ph;
  };
  std::vector<Cand> grid;
  for (int i = 0; i < mesh; ++i)
    for (int j = 0; j < 2 * mesh; ++j) {
      const double th = M_PI * (i + 0.5) / mesh, ph = M_PI * j / mesh;
      grid.push_back({f(point(th, ph)), th, ph});
    }
  std::partial_sort(grid.begin(), grid.begin() + 3, grid.end(),
                    [](const Cand& a, const Cand& b) { return a.v < b.v; });
  double best = grid[0].v;
  for (int k = 0; k < 3; ++k) {
    Cand c = grid[k];
    double step = M_PI / mesh;
    while (step > 1e-10) {
      bool moved = false;
      for (auto [dt, dp] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const double th = c.th + dt * step, ph = c.ph + dp * step;
        const double v = f(point(th, ph));
        if (v < c.v) {
          c = {v, th, ph};
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::min(best, c.v);
  }
  return best;
}

Vec plane_normal(const Subspace& s) {
  const Vec a = s.basis.col(0), b = s.basis.col(1);
  return Vec(Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2)))).normalized();
}

// A-(theta2(g)) and A-(theta1(g)) in V2 / V1 coordinates
struct Parts {
  HyperbolicProfile full;
  Subspace minus1, minus2;
};

std::optional<Parts> parts_of(const AffineMap& g, const ProductSplit& ps) {
  try {
    Parts p;
    p.full = profile(g);
    if (!p.full.contracting) return std::nullopt;
    const auto s1 = spectral_split(ps.theta1(g.linear));
    const auto s2 = spectral_split(ps.theta2(g.linear));
    if (s1.a_minus.dim() != 1 || s2.a_zero.dim() != 0) return std::nullopt;
    p.minus1 = s1.a_minus;
    p.minus2 = s2.a_minus;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

double triple_condition(const std::vector<Subspace>& subs, int want_dim) {
  Mat m(3, 3);
  for (int k = 0; k < 3; ++k) {
    if (subs[k].dim() != want_dim) return 0.0;
    m.col(k) = want_dim == 2 ? plane_normal(subs[k]) : Vec(subs[k].basis.col(0));
  }
  return min_singular(m);
}

bool distinct_moduli(const Mat& m) {
  try {
    const auto mods = eigen_moduli(m);
    if (mods.size() != 3) return false;
    for (const auto& [mod, mult] : mods)
      if (std::abs(mod - 1.0) < 1e-6) return false;
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

double mesh_infimum_lines(const std::vector<Subspace>& subs, int mesh) {
  std::vector<Vec> lines, normals;
  for (const auto& s : subs) {
    if (s.ambient != 3 || s.dim() < 1 || s.dim() > 2)
      throw Error(ErrorKind::InvalidArgument, "mesh infimum needs lines or planes in R^3");
    if (s.dim() == 1) lines.push_back(s.basis.col(0).normalized());
    else normals.push_back(plane_normal(s));
  }
  return sphere_search(
      [&](const Vec& u) {
        double s = 0;
        for (const auto& l : lines) {
          const double c = u.dot(l);
          s += std::sqrt(std::max(0.0, 1.0 - c * c));
        }
        for (const auto& n : normals) s += std::abs(u.dot(n));
        return s;
      },
      mesh);
}

double mesh_infimum_planes(const std::vector<Subspace>& lines, int mesh) {
  std::vector<Vec> ls;
  for (const auto& s : lines) {
    if (s.ambient != 3 || s.dim() != 1) throw Error(ErrorKind::InvalidArgument, "expected lines in R^3");
    ls.push_back(s.basis.col(0).normalized());
  }
  return sphere_search(
      [&](const Vec& u) {
        double s = 0;
        for (const auto& l : ls) s += std::abs(u.dot(l));
        return s;
      },
      mesh);
}

std::optional<FourConfig> four_transversal_config(const GroupSpec& spec, int max_len) {
  const V1View view = v1_view(spec);
  struct Cand {
    SignedElement el;
    HyperbolicProfile p1;
  };
  std::vector<Cand> chosen;
  std::vector<int> idx;
  int counter = 0;
  enumerate_words(spec, max_len, [&](const Word& w, const AffineMap& g) {
    if (w.empty()) return true;
    const int my_index = counter++;
    auto p1 = theta1_profile(view.theta1(g.linear));
    if (!p1) return true;
    for (const auto& c : chosen)
      if (!(transversality(c.p1, *p1) > 1e-6) || !(subspace_dist(c.p1.split.a_plus, p1->split.a_plus) > 1e-6))
        return true;
    SignedElement el;
    el.word = w;
    el.map = g;
    el.prof = *p1;
    chosen.push_back({el, *p1});
    idx.push_back(my_index);
    return chosen.size() < 4;
  });
  if (chosen.size() < 4) return std::nullopt;

  const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  for (const auto& order : pairings) {
    auto line = [&](int k) { return chosen[order[k]].p1.split.a_plus; };
    const Subspace meet = intersect(line(0) + line(1), line(2) + line(3));
    if (meet.dim() != 1) continue;
    const Vec v = meet.basis.col(0);
    const double value = view.form(v, v) / v.squaredNorm();
    if (!(value < -1e-6)) continue;
    FourConfig out;
    for (int k = 0; k < 4; ++k) {
      out.elements.push_back(chosen[order[k]].el);
      out.attracting.push_back(line(k));
      out.ordering.push_back(idx[order[k]]);
    }
    out.cone_vector = view.form.coords(v);
    out.cone_value = value;
    return out;
  }
  return std::nullopt;
}

std::string verify_gadget(const Gadget& gd, const std::vector<Subspace>& targets, const ProductSplit& ps,
                          double delta) {
  if (gd.sets.size() != targets.size()) return "one set pair per target is required";
  if (!(gd.eps > 0) || !(gd.q > 0 && gd.q < 1)) return "eps and q must be positive with q < 1";
  for (size_t i = 0; i < targets.size(); ++i) {
    const auto& set = gd.sets[i];
    if (set.g.size() != 3 || set.h.size() != 3) return "sets must have three elements";
    std::vector<Subspace> gm, hm;
    for (int pass = 0; pass < 2; ++pass) {
      const auto& els = pass == 0 ? set.g : set.h;
      for (const auto& g : els) {
        auto p = parts_of(g, ps);
        const std::string tag = "target " + std::to_string(i + 1) + (pass == 0 ? " S: " : " T: ");
        if (!p) return tag + "element is not hyperbolic";
        if (!(subspace_dist(p->minus1, targets[i]) < delta)) return tag + "condition (1) fails";
        if (!(p->full.eps_hyperbolic >= gd.eps)) return tag + "condition (2) fails";
        if (!(p->full.s < gd.q)) return tag + "condition (3) fails";
        if (p->minus2.dim() != (pass == 0 ? 2 : 1)) return tag + "condition (4) fails";
        (pass == 0 ? gm : hm).push_back(p->minus2);
      }
    }
    if (!(triple_condition(gm, 2) > 1e-6)) return "target " + std::to_string(i + 1) + ": condition (5) fails";
    if (!(triple_condition(hm, 1) > 1e-6)) return "target " + std::to_string(i + 1) + ": condition (6) fails";
  }
  return "";
}

Gadget sign_gadget_build(const GroupSpec& spec, const FourConfig& config, const GadgetOptions& opt) {
  if (!spec.product_split || spec.dim != 6)
    throw Error(ErrorKind::NotProductCompatible, "gadget needs the 6-dimensional product case");
  if (config.elements.size() != 4) throw Error(ErrorKind::InvalidArgument, "configuration needs four elements");
  const ProductSplit& ps = *spec.product_split;
  const auto ball = word_ball(spec, opt.max_len);

  std::vector<std::pair<AffineMap, std::string>> hyperbolic;
  for (const auto& el : ball) {
    if (el.word.empty()) continue;
    if (!distinct_moduli(ps.theta2(el.map.linear))) continue;
    if (!theta1_profile(ps.theta1(el.map.linear))) continue;
    if (!parts_of(el.map, ps)) continue;
    hyperbolic.push_back({el.map, el.word.str(spec)});
  }

  Gadget gd;
  for (int i = 0; i < 4; ++i) {
    const AffineMap& gi = config.elements[i].map;
    const std::string gi_text = config.elements[i].word.str(spec);
    const Subspace& target = config.attracting[i];
    const auto pi1 = theta1_profile(ps.theta1(gi.linear));
    if (!pi1) throw Error(ErrorKind::NotHyperbolic, "configuration element is not hyperbolic on V1");

    // one triple with theta2-contraction of dimension want (2 for S, 1 for T).
    // Candidates are g0^b (gi^n seed gi^-n)^b; consecutive n alone squeeze the
    // theta2 parts together, so the triple is picked from a pool.
    auto build_triple = [&](int want, std::vector<AffineMap>& out, std::vector<std::string>& text) {
      struct PoolEntry {
        AffineMap map;
        std::string text;
        Subspace minus2;
      };
      std::vector<PoolEntry> pool;
      const size_t pool_cap = 60;
      for (const auto& [seed0, seed_text0] : hyperbolic) {
        if (pool.size() >= pool_cap) break;
        AffineMap seed = seed0;
        std::string seed_text = seed_text0;
        if (spectral_split(ps.theta2(seed.linear)).a_minus.dim() != want) {
          seed = inverse(seed);
          seed_text = "(" + seed_text + ")^-1";
        }
        const auto ps1 = theta1_profile(ps.theta1(seed.linear));
        const auto ps1i = theta1_profile(ps.theta1(inverse(seed).linear));
        if (!ps1 || !ps1i || !(transversality(*ps1, *pi1) > 1e-6) || !(transversality(*ps1i, *pi1) > 1e-6))
          continue;
        auto conj = [&](long n) { return conjugate(power(gi, n), seed); };
        long m0 = -1;
        for (long n = 1; n <= opt.budget; ++n) {
          auto p = parts_of(conj(n), ps);
          if (p && subspace_hausdorff(p->minus1, target) <= opt.delta / 4) {
            m0 = n;
            break;
          }
        }
        if (m0 < 0) continue;
        for (long n = m0; n <= m0 + 2 && pool.size() < pool_cap; ++n) {
          const auto pn = parts_of(conj(n), ps);
          if (!pn) continue;
          const std::string nn = std::to_string(n);
          const std::string conj_text = "(" + gi_text + ")^" + nn + " (" + seed_text + ") (" + gi_text + ")^-" + nn;
          for (const auto& [g0, g0_text] : hyperbolic) {
            if (pool.size() >= pool_cap) break;
            const auto p0 = parts_of(g0, ps);
            if (!p0 || !(transversality(p0->full, pn->full) > 1e-6)) continue;
            for (long big = 1; big <= opt.budget; ++big) {
              const AffineMap el = compose(power(g0, big), power(conj(n), big));
              auto p = parts_of(el, ps);
              if (!p || p->minus2.dim() != want || !(subspace_dist(p->minus1, target) < opt.delta) ||
                  !(p->full.eps_hyperbolic > 0))
                continue;
              const std::string b = std::to_string(big);
              pool.push_back({el, "(" + g0_text + ")^" + b + " (" + conj_text + ")^" + b, p->minus2});
              break;
            }
          }
        }
      }
      double best = 1e-6;
      std::array<size_t, 3> pick{};
      bool found = false;
      for (size_t x = 0; x < pool.size(); ++x)
        for (size_t y = x + 1; y < pool.size(); ++y)
          for (size_t z = y + 1; z < pool.size(); ++z) {
            const double v = triple_condition({pool[x].minus2, pool[y].minus2, pool[z].minus2}, want);
            if (v > best) {
              best = v;
              pick = {x, y, z};
              found = true;
            }
          }
      if (!found) return false;
      out.clear();
      text.clear();
      for (size_t k : pick) {
        out.push_back(pool[k].map);
        text.push_back(pool[k].text);
      }
      return true;
    };

    GadgetSet set;
    if (!build_triple(2, set.g, set.g_text) || !build_triple(1, set.h, set.h_text))
      throw Error(ErrorKind::BudgetExhausted, "no gadget for target " + std::to_string(i + 1) + " within budget");
    gd.sets.push_back(std::move(set));
  }

  double eps = INFINITY, smax = 0;
  std::vector<Subspace> s1, t1, s2, t2;
  for (const auto& set : gd.sets)
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& g : pass == 0 ? set.g : set.h) {
        const auto p = *parts_of(g, ps);
        eps = std::min(eps, p.full.eps_hyperbolic);
        smax = std::max(smax, p.full.s);
        (pass == 0 ? s1 : t1).push_back(p.minus1);
        (pass == 0 ? s2 : t2).push_back(p.minus2);
      }
  gd.eps = eps;
  gd.q = 0.5 * (1.0 + smax);
  gd.d1_s = mesh_infimum_lines(s1, opt.mesh) / opt.divisor;
  gd.d1_t = mesh_infimum_lines(t1, opt.mesh) / opt.divisor;
  gd.d2_s = mesh_infimum_lines(s2, opt.mesh) / opt.divisor;
  gd.d2_t = mesh_infimum_planes(t2, opt.mesh) / opt.divisor;

  const std::string why = verify_gadget(gd, config.attracting, ps, opt.delta);
  if (!why.empty()) throw Error(ErrorKind::BudgetExhausted, "gadget failed re-verification: " + why);
  return gd;
}

}  // namespace afcert
