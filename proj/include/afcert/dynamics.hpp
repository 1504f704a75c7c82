#pragma once

#include <cstdint>
#include <vector>
#include <random>
#include <string>

#include "afcert/affine.hpp"

namespace afcert {

struct AmbientGroup {
  enum class Kind { SO_pq, SL, ProductSO21xSL3, Generic };
  Kind kind = Kind::Generic;
  int p = 0, q = 0;  // SO_pq signature, or SL(n) with p = n
  int expected_neutral_dim = 0;
  int expected_fixed_dim = 0;

  static AmbientGroup so(int p, int q);
  /// SL(n); the neutral dimension is configurable.
  static AmbientGroup sl(int n, int neutral_dim = 0, int fixed_dim = 0);
  static AmbientGroup product_so21_sl3();
  static AmbientGroup generic(int neutral_dim, int fixed_dim);

  std::string descriptor() const;
};

struct HyperbolicProfile {
  double s = 0.0;
  double norm_plus = 0.0;
  double norm_minus = 0.0;
  double eps_hyperbolic = 0.0;
  bool contracting = false;  // A+ and A- both nontrivial, s < 1
  SpectralSplit split;
};

HyperbolicProfile profile(const AffineMap& g, double alpha = 1.0);

/// Profile of factors[0] * factors[1] * ... computed in `bits`-bit arithmetic.
/// For long products whose neutral eigenvalues drown in double rounding.
HyperbolicProfile profile_product(const std::vector<AffineMap>& factors, int bits = 256);

struct Regularity {
  bool regular = false;
  bool r_regular = false;
};

Regularity is_regular(const AffineMap& g, const AmbientGroup& amb);

/// Regular with s < 1.
bool is_hyperbolic(const AffineMap& g, const AmbientGroup& amb);

long power_to_hyperbolic(const AffineMap& g, const AmbientGroup& amb, double s_target);

/// Exact min of the four cross distances; requires hyperbolic (contracting) profiles.
double transversality(const AffineMap& g, const AffineMap& h);
double transversality(const HyperbolicProfile& g, const HyperbolicProfile& h);

struct ProductEstimates {
  double gh_eps = 0.0;
  double drift_plus = 0.0;
  double drift_minus = 0.0;
  double s_ratio = 0.0;
};

ProductEstimates product_estimates(const AffineMap& g, const AffineMap& h, double eps);

/// true iff l(t) w + D+(g) = V numerically.
bool transversal_pair_test(const AffineMap& g, const AffineMap& t, const Subspace& w);

}  // namespace afcert
