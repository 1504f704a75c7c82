#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "afcert/group.hpp"

namespace afcert {

struct FixedPointPayload {
  Vec fixed_point;
  std::vector<double> eigen_distances;  // |lambda_i - 1|
  double residual = 0.0;                // |g(p) - p|
};

struct OppositeSignPayload {
  double alpha_g = 0.0;
  double alpha_h = 0.0;
  double eps = 0.0;  // transversality of the pair
  std::optional<QuadraticForm> form;
  std::optional<ProductSplit> product_split;
};

struct WitnessEntry {
  long n = 0;  // power of g
  long m = 0;  // power of h
  Vec start;   // x_n = p + n v (double approximation)
  std::vector<std::string> y;  // witness point, extended-precision decimals
  int precision_bits = 0;
  double dist_start = 0.0;  // |y - p1|
  double dist_image = 0.0;  // |h^m g^n y - p2|
};

struct BallWitnessPayload {
  Vec p1, p2, p, v;
  double radius = 1.0;
  double lambda = 1.0;  // m ~ lambda n
  std::vector<WitnessEntry> entries;
};

struct ScanRow {
  int length = 0;
  long long enumerated = 0;
  long long returns = 0;
};

struct EvidenceScanPayload {
  Vec center;
  double radius = 1.0;
  int max_len = 0;
  std::vector<ScanRow> growth;
  std::vector<double> distances;  // refined distance for each returning word
};

struct Certificate {
  enum class Kind { FixedPointViolation, OppositeSignPair, BallIntersectionWitness, EvidenceScan };
  Kind kind = Kind::EvidenceScan;
  std::vector<Word> words;
  std::vector<std::string> word_text;
  std::vector<AffineMap> matrices;
  std::variant<FixedPointPayload, OppositeSignPayload, BallWitnessPayload, EvidenceScanPayload> payload;
};

const char* kind_name(Certificate::Kind k);

struct CheckResult {
  bool ok = false;
  std::string detail;
};

/// Re-verifies a certificate from its matrices alone.
CheckResult check_certificate(const Certificate& c);

std::vector<Certificate> eigenvalue_one_screen(const GroupSpec& spec, int max_len, double tol = 1e-8);

struct SearchOptions {
  int max_len = 6;
  int jobs = 1;
  double min_transversality = 1e-9;
  long power_cap = 64;  // cap for power_to_hyperbolic on non-hyperbolic words
};

/// One analysed ball element: hyperbolic, regular, with its sign.
struct SignedElement {
  Word word;
  AffineMap map;
  long power = 1;  // the word is raised to this power
  double alpha = 0.0;
  HyperbolicProfile prof;
};

std::vector<SignedElement> signed_elements(const GroupSpec& spec, const SearchOptions& opt);

std::optional<Certificate> opposite_sign_search(const GroupSpec& spec, const SearchOptions& opt);

struct SignData {
  double alpha_g = 0.0;
  double alpha_h = 0.0;
};

Certificate nonproper_witness(const AffineMap& g, const AffineMap& h, std::optional<SignData> sign_data,
                              long n_max, double radius);

/// Working precision in bits for the witness of h^m g^n.
int witness_precision_bits(const AffineMap& g, const AffineMap& h, long n, long m);

/// Re-checks one witness entry in extended precision by applying g n times, then h m times.
CheckResult check_ball_entry(const AffineMap& g, const AffineMap& h, const WitnessEntry& e, const Vec& p1,
                             const Vec& p2, double radius);

/// Minimum over y in B(c, r) of the distance from g(y) to B(c, r) (0 when they meet).
double ball_image_distance(const AffineMap& g, const Vec& center, double radius);

Certificate proper_scan(const GroupSpec& spec, const Vec& center, double radius, int max_len);

struct DirectionEntry {
  Vec direction;
  Word word;
  double displacement = 0.0;
};

struct DirectionSample {
  Vec center;
  double radius = 1.0;
  std::vector<DirectionEntry> directions;
};

DirectionSample direction_set_estimate(const GroupSpec& spec, const Vec& center, double radius, int max_len);

struct FourConfig {
  std::vector<SignedElement> elements;  // gamma_1..gamma_4 in the returned order
  std::vector<Subspace> attracting;     // A+(theta1(gamma_i))
  std::vector<int> ordering;            // indices into the candidate list
  Vec cone_vector;                      // in the V1 form coordinates
  double cone_value = 0.0;              // B(v,v) / |v|^2
};

std::optional<FourConfig> four_transversal_config(const GroupSpec& spec, int max_len);

struct GadgetOptions {
  double delta = 0.5;
  long budget = 40;       // max conjugation exponent and mixing power
  int mesh = 24;          // mesh resolution for the d-constant infima
  double divisor = 100.0; // safety factor on the d-constants
  int max_len = 3;        // word length for seed elements
};

struct GadgetSet {
  std::vector<AffineMap> g;  // g_{i1..i3}
  std::vector<AffineMap> h;  // h_{i1..i3}
  std::vector<std::string> g_text, h_text;
};

struct Gadget {
  std::vector<GadgetSet> sets;  // one per target A_i
  double eps = 0.0;
  double q = 0.0;
  double d1_s = 0.0, d1_t = 0.0, d2_s = 0.0, d2_t = 0.0;
};

/// Re-verifies conditions (1)-(6) of the gadget; returns the failure or "".
std::string verify_gadget(const Gadget& gd, const std::vector<Subspace>& targets, const ProductSplit& ps,
                          double delta);

Gadget sign_gadget_build(const GroupSpec& spec, const FourConfig& config, const GadgetOptions& opt);

/// Infimum over lines U of sum_j dhat(U, S_j) on a mesh of the unit sphere
/// with local refinement; subspaces live in R^3.
double mesh_infimum_lines(const std::vector<Subspace>& subs, int mesh);

/// Infimum over planes U of sum_j dhat(U, L_j) for lines L_j in R^3.
double mesh_infimum_planes(const std::vector<Subspace>& lines, int mesh);

}  // namespace afcert
