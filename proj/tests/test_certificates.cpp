#include <doctest.h>

#include <set>

#include "afcert/certificates.hpp"
#include "afcert/examples.hpp"
#include "afcert/projective.hpp"
#include "support.hpp"

using namespace afcert;
using testsupport::Gen;
using testsupport::vec3;

namespace {

GroupSpec spec_of(std::vector<AffineMap> gens, std::optional<QuadraticForm> form = std::nullopt) {
  GroupSpec s;
  s.dim = gens.front().dim();
  for (size_t i = 0; i < gens.size(); ++i)
    if (gens[i].name.empty()) gens[i].name = std::string(1, static_cast<char>('a' + i));
  s.generators = std::move(gens);
  s.form = form;
  s.ambient = form ? AmbientGroup::so(form->p, form->q) : AmbientGroup::generic(0, 0);
  return s;
}

Mat diag3(double a, double b, double c) {
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << a, b, c;
  return d;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

GroupSpec rotated_boosts(const std::vector<double>& angles) {
  std::vector<AffineMap> gens;
  for (double a : angles) {
    const Mat r = rot21(a);
    gens.push_back(AffineMap{r * boost21(std::log(2.0)) * r.transpose(), Vec::Zero(3), ""});
  }
  return spec_of(gens, QuadraticForm::standard(2, 1));
}

}  // namespace

TEST_CASE("words: reduction, inverse and rendering") {
  const std::vector<std::string> names{"a", "b"};
  const Word w = parse_word("a b^-1 a^3", names);
  CHECK(w.letters == std::vector<int>{1, -2, 1, 1, 1});
  CHECK(w.str(names) == "a b^-1 a a a");
  CHECK((w * w.inverse()).empty());
  CHECK(Word{}.str(names) == "e");
  CHECK(parse_word("a a^-1 b", names).letters == std::vector<int>{2});
  CHECK_THROWS_AS(parse_word("c", names), Error);
  CHECK_THROWS_AS(parse_word("a^x", names), Error);
  CHECK(length_lex_less(Word{{1}}, Word{{-1}}));
  CHECK(length_lex_less(Word{{-2}}, Word{{1, 1}}));
  CHECK_FALSE(length_lex_less(Word{{1}}, Word{{1}}));
}

TEST_CASE("words: enumeration counts and order") {
  for (int f = 1; f <= 3; ++f) {
    std::vector<AffineMap> gens;
    for (int i = 0; i < f; ++i) gens.push_back(AffineMap::translation_by(Vec::Unit(3, i % 3) * (i + 1)));
    const auto spec = spec_of(gens);
    for (int len = 1; len <= 5; ++len) {
      std::vector<long long> by_len(len + 1, 0);
      std::set<std::vector<int>> seen;
      Word prev;
      bool first = true, ordered = true;
      enumerate_words(spec, len, [&](const Word& w, const AffineMap&) {
        ++by_len[w.length()];
        seen.insert(w.letters);
        for (size_t i = 1; i < w.letters.size(); ++i) CHECK(w.letters[i] != -w.letters[i - 1]);
        if (!first && !length_lex_less(prev, w)) ordered = false;
        prev = w;
        first = false;
        return true;
      });
      CHECK(ordered);
      CHECK(by_len[0] == 1);
      long long total = 1;
      for (int l = 1; l <= len; ++l) {
        const long long expect = 2LL * f * static_cast<long long>(std::pow(2 * f - 1, l - 1));
        CHECK(by_len[l] == expect);
        CHECK(reduced_word_count(f, l) == expect);
        total += expect;
      }
      CHECK(static_cast<long long>(seen.size()) == total);
    }
  }
  const auto spec = spec_of({AffineMap::translation_by(vec3(1, 0, 0)), AffineMap::translation_by(vec3(0, 1, 0))});
  std::vector<std::string> order;
  enumerate_words(spec, 2, [&](const Word& w, const AffineMap&) {
    order.push_back(w.str(spec));
    return true;
  });
  REQUIRE(order.size() == 17);
  CHECK(order[0] == "e");
  CHECK(order[1] == "a");
  CHECK(order[2] == "a^-1");
  CHECK(order[5] == "a a");
}

TEST_CASE("words: evaluation matches composition") {
  Gen gen(43);
  const auto spec = spec_of({AffineMap{gen.invertible(3), gen.vec(3), ""}, AffineMap{gen.invertible(3), gen.vec(3), ""}});
  for (const auto& el : word_ball(spec, 3)) {
    AffineMap m = AffineMap::identity(3);
    for (int l : el.word.letters) {
      const AffineMap& g = spec.generators[std::abs(l) - 1];
      m = compose(m, l > 0 ? g : inverse(g));
    }
    CHECK((m.linear - el.map.linear).norm() < 1e-8 * (1 + m.linear.norm()));
    CHECK((m.translation - el.map.translation).norm() < 1e-8 * (1 + m.translation.norm()));
  }
}

TEST_CASE("eigenvalue-one screen") {
  const auto bad = spec_of({AffineMap{diag3(2, 3, 1.0 / 6), vec3(1, 1, 1), ""}});
  auto v = eigenvalue_one_screen(bad, 3);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().words.front().length() == 1);
  const auto& p = std::get<FixedPointPayload>(v.front().payload);
  CHECK(p.residual < 1e-10);
  CHECK(check_certificate(v.front()).ok);

  Mat m = Mat::Zero(4, 4);
  m(0, 1) = -1;
  m(1, 0) = 1;
  m(2, 2) = 2;
  m(3, 3) = 0.5;
  const auto rot = spec_of({AffineMap{m, Vec::Ones(4), ""}});
  v = eigenvalue_one_screen(rot, 1);
  REQUIRE(v.size() >= 1);
  CHECK(v.front().words.front().length() == 1);

  CHECK(eigenvalue_one_screen(margulis3d_example(std::log(4.0), M_PI / 2, 10), 4).empty());
}

TEST_CASE("opposite sign search") {
  const auto spec = opposite_sign_example();
  SearchOptions opt;
  opt.max_len = 2;
  const auto c = opposite_sign_search(spec, opt);
  REQUIRE(c.has_value());
  CHECK(c->words[0].length() == 1);
  CHECK(c->words[1].length() == 1);
  const auto& p = std::get<OppositeSignPayload>(c->payload);
  CHECK(p.alpha_g * p.alpha_h < 0);
  CHECK(std::abs(std::abs(p.alpha_g) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(p.alpha_h) - 1.0) < 1e-12);
  CHECK(check_certificate(*c).ok);

  opt.max_len = 4;
  CHECK_FALSE(opposite_sign_search(margulis3d_example(std::log(4.0), M_PI / 2, 10), opt).has_value());

  GroupSpec single = spec;
  single.generators.resize(1);
  CHECK_FALSE(opposite_sign_search(single, opt).has_value());
}

TEST_CASE("property: opposite sign search is stable under conjugation") {
  Gen gen(47);
  const auto spec = opposite_sign_example();
  SearchOptions opt;
  opt.max_len = 2;
  const auto base = opposite_sign_search(spec, opt);
  REQUIRE(base.has_value());
  const auto& bp = std::get<OppositeSignPayload>(base->payload);
  for (int trial = 0; trial < 10; ++trial) {
    const AffineMap x{gen.so_element(2, 1), gen.vec(3), ""};
    GroupSpec conj = spec;
    for (auto& g : conj.generators) g = AffineMap{conjugate(x, g).linear, conjugate(x, g).translation, g.name};
    const auto c = opposite_sign_search(conj, opt);
    REQUIRE(c.has_value());
    const auto& cp = std::get<OppositeSignPayload>(c->payload);
    CHECK(std::abs(cp.alpha_g - bp.alpha_g) < 1e-7);
    CHECK(std::abs(cp.alpha_h - bp.alpha_h) < 1e-7);
    CHECK(c->words[0].length() == base->words[0].length());
    CHECK(c->words[1].length() == base->words[1].length());
  }
}

TEST_CASE("ball intersection witness") {
  const auto spec = opposite_sign_example();
  const AffineMap& g = spec.generators[0];
  const AffineMap& h = spec.generators[1];
  const auto c = nonproper_witness(g, h, SignData{1.0, -1.0}, 200, 1.0);
  const auto& p = std::get<BallWitnessPayload>(c.payload);
  CHECK(p.entries.size() >= 10);
  for (const auto& e : p.entries) {
    CHECK(e.dist_start < 1.0);
    CHECK(e.dist_image < 1.0);
  }
  CHECK(check_certificate(c).ok);

  // once some n verifies, most larger n verify as well
  const long first = p.entries.front().n;
  CHECK(static_cast<double>(p.entries.size()) >= 0.8 * static_cast<double>(200 - first + 1));

  // a witness whose point is moved away is rejected
  Certificate bad = c;
  auto& bp = std::get<BallWitnessPayload>(bad.payload);
  bp.p2 = bp.p2 + vec3(5, 0, 0);
  CHECK_FALSE(check_certificate(bad).ok);

  CHECK(kind_of([&] { nonproper_witness(g, g, std::nullopt, 50, 1.0); }) == ErrorKind::NotTransversal);
  const AffineMap g2{boost21(std::log(3.0)), vec3(0, -1, 0), "h"};
  CHECK(kind_of([&] { nonproper_witness(g, g2, std::nullopt, 50, 1.0); }) == ErrorKind::AxesIntersect);
  CHECK(kind_of([&] { nonproper_witness(g, h, SignData{1.0, 1.0}, 50, 1.0); }) == ErrorKind::SignMismatch);
  CHECK(kind_of([&] { nonproper_witness(g, h, std::nullopt, 0, 1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("certificate checker rejects tampered payloads") {
  const auto spec = opposite_sign_example();
  SearchOptions opt;
  opt.max_len = 1;
  auto c = *opposite_sign_search(spec, opt);
  std::get<OppositeSignPayload>(c.payload).alpha_h = 1.0;
  CHECK_FALSE(check_certificate(c).ok);

  const auto bad = spec_of({AffineMap{diag3(2, 3, 1.0 / 6), vec3(1, 1, 1), ""}});
  auto f = eigenvalue_one_screen(bad, 1).front();
  std::get<FixedPointPayload>(f.payload).fixed_point(0) += 1e-3;
  CHECK_FALSE(check_certificate(f).ok);
}

TEST_CASE("ball image distance against sampling") {
  Gen gen(53);
  for (int trial = 0; trial < 30; ++trial) {
    const AffineMap g{gen.invertible(3), 3.0 * gen.vec(3), ""};
    const Vec c = gen.vec(3);
    const double r = gen.uniform(0.3, 1.5);
    const double d = ball_image_distance(g, c, r);
    CHECK(d >= 0.0);
    // sampled upper bound: any y in the ball gives |g(y) - c| - r >= d
    double best = INFINITY;
    for (int i = 0; i < 4000; ++i) {
      Vec u = gen.vec(3);
      u *= std::pow(gen.uniform(0, 1), 1.0 / 3) / u.norm();
      best = std::min(best, std::max(0.0, (g.apply(c + r * u) - c).norm() - r));
    }
    CHECK(d <= best + 1e-9);
    CHECK(best - d < 0.1 * (1.0 + op_norm(g.linear)) * r);
  }
  CHECK(ball_image_distance(AffineMap::identity(3), vec3(0, 0, 0), 1.0) == 0.0);
  CHECK(ball_image_distance(AffineMap::translation_by(vec3(5, 0, 0)), vec3(0, 0, 0), 1.0) ==
        doctest::Approx(3.0));
}

TEST_CASE("proper scan") {
  const auto tr = spec_of({AffineMap::translation_by(vec3(10, 0, 0))});
  auto c = proper_scan(tr, vec3(0, 0, 0), 1.0, 5);
  CHECK(c.word_text == std::vector<std::string>{"e"});
  CHECK(check_certificate(c).ok);

  const auto id = spec_of({AffineMap::identity(3)});
  CHECK(proper_scan(id, vec3(0, 0, 0), 1.0, 0).word_text == std::vector<std::string>{"e"});

  c = proper_scan(opposite_sign_example(), vec3(0, 0, 0), 1.0, 8);
  const auto& p = std::get<EvidenceScanPayload>(c.payload);
  REQUIRE(p.growth.size() == 9);
  CHECK(p.growth.back().returns > p.growth[2].returns);
  CHECK(c.word_text.size() > 1);
}

TEST_CASE("direction set estimate") {
  const auto one = spec_of({AffineMap::translation_by(vec3(20, 0, 0))});
  auto d = direction_set_estimate(one, vec3(0, 0, 0), 1.0, 3);
  REQUIRE(d.directions.size() == 2);  // v and -v from the inverse
  for (const auto& e : d.directions) CHECK(std::abs(std::abs(e.direction(0)) - 1.0) < 1e-12);

  const auto two = spec_of({AffineMap::translation_by(vec3(20, 0, 0)), AffineMap::translation_by(vec3(0, 20, 0))});
  d = direction_set_estimate(two, vec3(0, 0, 0), 1.0, 2);
  auto has = [&](const Vec& v) {
    for (const auto& e : d.directions)
      if ((e.direction - v.normalized()).norm() < 1e-9) return true;
    return false;
  };
  CHECK(has(vec3(1, 0, 0)));
  CHECK(has(vec3(0, 1, 0)));
  CHECK(has(vec3(1, 1, 0)));
}

TEST_CASE("four element configuration") {
  const auto spec = rotated_boosts({0.0, M_PI / 3, 2 * M_PI / 3, M_PI / 2});
  const auto cfg = four_transversal_config(spec, 1);
  REQUIRE(cfg.has_value());
  CHECK(cfg->elements.size() == 4);
  CHECK(cfg->cone_value < -1e-6);
  // independent recomputation of the cone vector from the four null lines
  auto null_line = [&](int i) { return Vec(cfg->attracting[i].basis.col(0)); };
  auto normal = [](const Vec& a, const Vec& b) {
    return Vec(Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2))));
  };
  const Vec n1 = normal(null_line(0), null_line(1)), n2 = normal(null_line(2), null_line(3));
  const Vec v = normal(n1, n2);
  const auto f = QuadraticForm::standard(2, 1);
  CHECK(f(v, v) < -1e-6 * v.squaredNorm());
  for (int i = 0; i < 4; ++i) CHECK(std::abs(f(null_line(i), null_line(i))) < 1e-9);

  CHECK_FALSE(four_transversal_config(rotated_boosts({0.0}), 3).has_value());
  CHECK(four_transversal_config(opposite_sign_example(), 2).has_value());
}

TEST_CASE("mesh infima against a dense grid") {
  const std::vector<Subspace> lines{Subspace::line(vec3(1, 0, 0)), Subspace::line(vec3(0, 1, 0)),
                                    Subspace::line(vec3(1, 1, 1))};
  auto brute = [&](bool planes) {
    double best = INFINITY;
    const int m = 400;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j < 2 * m; ++j) {
        const double th = M_PI * i / m, ph = M_PI * j / m;
        const Vec u = vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
        double s = 0;
        for (const auto& l : lines) {
          const double c = u.dot(l.basis.col(0));
          s += planes ? std::abs(c) : std::sqrt(std::max(0.0, 1 - c * c));
        }
        best = std::min(best, s);
      }
    return best;
  };
  const double lv = mesh_infimum_lines(lines, 24), pv = mesh_infimum_planes(lines, 24);
  CHECK(lv <= brute(false) + 1e-9);
  CHECK(lv > brute(false) - 1e-2);
  CHECK(pv <= brute(true) + 1e-9);
  CHECK(pv > brute(true) - 1e-2);
  CHECK(pv > 0.0);
}

TEST_CASE("sign gadget on the product example") {
  const auto spec = product6_example();
  const auto cfg = four_transversal_config(spec, 2);
  REQUIRE(cfg.has_value());
  GadgetOptions opt;
  const auto gd = sign_gadget_build(spec, *cfg, opt);
  const auto& ps = *spec.product_split;
  CHECK(gd.sets.size() == 4);
  CHECK(gd.eps > 0);
  CHECK(gd.q > 0);
  CHECK(gd.q < 1);
  CHECK(gd.d1_s > 0);
  CHECK(gd.d2_t > 0);
  CHECK(verify_gadget(gd, cfg->attracting, ps, opt.delta).empty());
  for (const auto& set : gd.sets) {
    Mat normals(3, 3), lines(3, 3);
    for (int k = 0; k < 3; ++k) {
      const auto sg = spectral_split(ps.theta2(set.g[k].linear));
      const auto sh = spectral_split(ps.theta2(set.h[k].linear));
      CHECK(sg.a_minus.dim() == 2);
      CHECK(sh.a_minus.dim() == 1);
      // orthogonal complement of the plane
      normals.col(k) = kernel(sg.a_minus.basis.transpose()).basis.col(0);
      lines.col(k) = sh.a_minus.basis.col(0);
    }
    CHECK(min_singular(normals) > 1e-6);
    CHECK(min_singular(lines) > 1e-6);
  }
  // a gadget with a broken element fails re-verification
  Gadget broken = gd;
  broken.sets[0].g[0] = inverse(broken.sets[0].g[0]);
  CHECK_FALSE(verify_gadget(broken, cfg->attracting, ps, opt.delta).empty());
}

TEST_CASE("built-in examples") {
  const auto m = margulis3d_example(std::log(4.0), M_PI / 2, 10);
  for (const auto& g : m.generators) CHECK(margulis_alpha(g, *m.form).alpha == doctest::Approx(10.0).epsilon(1e-10));
  CHECK(transversality(m.generators[0], m.generators[1]) > 0);
  CHECK(kind_of([] { margulis3d_example(1.0, M_PI, 1.0); }) == ErrorKind::DegenerateAngle);
  CHECK(kind_of([] { margulis3d_example(-1.0, 1.0, 1.0); }) == ErrorKind::InvalidArgument);

  const auto o = opposite_sign_example();
  CHECK(margulis_alpha(o.generators[0], *o.form).alpha == doctest::Approx(1.0));
  CHECK(margulis_alpha(o.generators[1], *o.form).alpha == doctest::Approx(-1.0));

  const auto p = product6_example();
  REQUIRE(p.product_split.has_value());
  for (const auto& g : p.generators) {
    CHECK(p.product_split->form_on_v1.preserved_by(p.product_split->theta1(g.linear)));
    CHECK(std::abs(p.product_split->theta2(g.linear).determinant() - 1.0) < 1e-12);
  }
}
