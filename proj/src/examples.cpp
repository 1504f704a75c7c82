#include "afcert/examples.hpp"

#include <cmath>

namespace afcert {

static Vec neutral_of(const Mat& l, const QuadraticForm& form) {
  return margulis_alpha(AffineMap::linear_only(l), form).neutral_vector;
}

GroupSpec margulis3d_example(double boost_param, double angle, double translation_scale) {
  if (!(boost_param > 0) || !(translation_scale > 0))
    throw Error(ErrorKind::InvalidArgument, "boost parameter and translation scale must be positive");
  if (std::abs(std::sin(angle)) < 1e-12) throw Error(ErrorKind::DegenerateAngle, "angle must not be 0 mod pi");
  GroupSpec s;
  s.dim = 3;
  s.form = QuadraticForm::standard(2, 1);
  s.ambient = AmbientGroup::so(2, 1);
  s.descriptor = "SO(2,1)";
  const Mat la = boost21(boost_param);
  const Mat lb = rot21(angle) * la * rot21(-angle);
  AffineMap a{la, translation_scale * neutral_of(la, *s.form), "a"};
  AffineMap b{lb, translation_scale * neutral_of(lb, *s.form), "b"};
  s.generators = {a, b};
  s.validate();
  return s;
}

GroupSpec opposite_sign_example() {
  GroupSpec s;
  s.dim = 3;
  s.form = QuadraticForm::standard(2, 1);
  s.ambient = AmbientGroup::so(2, 1);
  s.descriptor = "SO(2,1)";
  const Mat l = boost21(std::log(2.0));
  const Mat r = rot21(M_PI / 2);
  Vec t(3);
  t << 0, 1, 0;
  AffineMap a{l, t, "a"};
  AffineMap b{r * l * r.transpose(), -(r * t), "b"};
  s.generators = {a, b};
  s.validate();
  return s;
}

GroupSpec product6_example() {
  GroupSpec s;
  s.dim = 6;
  s.product_split = ProductSplit::standard();
  s.ambient = AmbientGroup::product_so21_sl3();
  s.descriptor = "SO(2,1)xSL3(R)";
  const QuadraticForm f = QuadraticForm::standard(2, 1);
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 3.0, 0.5, 2.0 / 3.0;
  Mat r1 = Mat::Identity(3, 3), r2(3, 3), r3(3, 3);
  r2 << 1, 1, 0, 0, 1, 1, 1, 0, 1;
  r3 << 2, 1, 1, 1, 3, 0, 0, 1, 1;
  const Mat v1[3] = {boost21(std::log(2.0)), rot21(M_PI / 2) * boost21(std::log(3.0)) * rot21(-M_PI / 2),
                     rot21(1.0) * boost21(std::log(2.5)) * rot21(-1.0)};
  const Mat v2[3] = {r1 * d * r1.inverse(), r2 * d * r2.inverse(), r3 * d.inverse() * r3.inverse()};
  const char* names[3] = {"a", "b", "c"};
  for (int k = 0; k < 3; ++k) {
    Mat l = Mat::Zero(6, 6);
    l.topLeftCorner(3, 3) = v1[k];
    l.bottomRightCorner(3, 3) = v2[k];
    Vec t = Vec::Zero(6);
    t.head(3) = neutral_of(v1[k], f);
    t(3 + k) = 0.25;
    s.generators.push_back({l, t, names[k]});
  }
  s.validate();
  return s;
}

}  // namespace afcert
