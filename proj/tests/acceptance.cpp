// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include "afcert/classification.hpp"
#include "afcert/examples.hpp"
#include "afcert/io.hpp"
#include "afcert/projective.hpp"
#include "support.hpp"

using namespace afcert;
using nlohmann::json;
using testsupport::Gen;

namespace {

// pinned tolerances
constexpr double kInvarianceTol = 1e-8;
constexpr double kCayleyHamiltonTol = 1e-8;
constexpr double kParityRelTol = 1e-9;
constexpr double kConjugationRelTol = 1e-8;
constexpr double kDriftSpread = 10.0;
constexpr double kScreenResidual = 1e-10;
constexpr double kMaxAmbiguousFraction = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Run {
  int rc = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(AFCERT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data_file(const std::string& name) { return std::string(AFCERT_DATA_DIR) + "/" + name; }

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", x);
  return b;
}

Outcome splitting_soundness() {
  Gen gen(101);
  int ambiguous = 0, total = 0, bad_dim = 0;
  double worst_inv = 0, worst_ch = 0;
  for (int n = 2; n <= 7; ++n)
    for (int trial = 0; trial < 500; ++trial) {
      ++total;
      const Mat m = gen.invertible(n);
      const double scale = op_norm(m);
      const double ch = poly_eval(char_poly(m), m).norm() / std::pow(std::max(1.0, scale), n);
      worst_ch = std::max(worst_ch, ch);
      SpectralSplit s;
      try {
        s = spectral_split(m);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::AmbiguousModulus) throw;
        ++ambiguous;
        continue;
      }
      Mat all(n, n);
      all << s.a_plus.basis, s.a_minus.basis, s.a_zero.basis;
      if (s.a_plus.dim() + s.a_minus.dim() + s.a_zero.dim() != n || Subspace::span(all).dim() != n) ++bad_dim;
      for (const auto* sub : {&s.a_plus, &s.a_minus, &s.a_zero})
        worst_inv = std::max(worst_inv, testsupport::invariance_residual(m, *sub) / scale);
    }
  Outcome o;
  o.pass = bad_dim == 0 && worst_inv < kInvarianceTol && worst_ch < kCayleyHamiltonTol &&
           ambiguous <= kMaxAmbiguousFraction * total;
  o.detail = std::to_string(total) + " matrices, dimension failures " + std::to_string(bad_dim) +
             ", guard-zone skips " + std::to_string(ambiguous) + ", max invariance " + sci(worst_inv) +
             ", max Cayley-Hamilton " + sci(worst_ch);
  return o;
}

Outcome sign_parity() {
  Gen gen(202);
  double worst_par = 0, worst_conj = 0;
  int cases = 0;
  for (int k = 1; k <= 3; ++k) {
    const auto f = QuadraticForm::standard(k + 1, k);
    const int n = 2 * k + 1;
    const double sign = k % 2 == 1 ? 1.0 : -1.0;
    for (int trial = 0; trial < 200; ++trial) {
      const AffineMap g{gen.regular_isometry(k), gen.vec(n), ""};
      const double a = margulis_alpha(g, f).alpha;
      const double ai = margulis_alpha(inverse(g), f).alpha;
      const double rel = std::max(1.0, std::abs(a));
      worst_par = std::max(worst_par, std::abs(ai - sign * a) / rel);
      for (int c = 0; c < 20; ++c) {
        const AffineMap x{gen.so_element(k + 1, k), gen.vec(n), ""};
        worst_conj = std::max(worst_conj, std::abs(margulis_alpha(conjugate(x, g), f).alpha - a) / rel);
      }
      ++cases;
    }
  }
  return {worst_par < kParityRelTol && worst_conj < kConjugationRelTol,
          std::to_string(cases) + " elements, max parity error " + sci(worst_par) + ", max conjugation error " +
              sci(worst_conj)};
}

Outcome standard_pairs() {
  std::string detail;
  bool ok = true;
  for (int k = 1; k <= 3; ++k) {
    const auto f = QuadraticForm::standard(k + 1, k);
    const int n = 2 * k + 1;
    Mat v1 = Mat::Zero(n, k), v2 = Mat::Zero(n, k);
    for (int i = 0; i < k; ++i) {
      v1(i, i) = 1.0;
      v2(i, i) = -1.0;
      v1(k + 1 + i, i) = v2(k + 1 + i, i) = 1.0;
    }
    Vec vk = Vec::Zero(n);
    vk(k) = 1.0;
    const int o1 = orientation_sign(f, v1, vk), o2 = orientation_sign(f, v2, vk);
    const int expect = k % 2 == 0 ? 1 : -1;
    ok = ok && o1 == expect * o2;
    detail += (detail.empty() ? "" : ", ") + std::string("k=") + std::to_string(k) + ": " + std::to_string(o1) +
              " vs " + std::to_string(o2);
  }
  return {ok, detail};
}

Outcome transported_orientations() {
  Gen gen(303);
  int agree = 0, total = 0;
  for (int q = 1; q <= 2; ++q) {
    const int p = q + 1;
    const auto f = QuadraticForm::standard(p, q);
    for (int trial = 0; trial < 100; ++trial) {
      Mat w1(p + q, q), w2(p + q, q);
      w1 << gen.orthogonal(p).leftCols(q), Mat::Identity(q, q);
      w2 << gen.orthogonal(p).leftCols(q), Mat::Identity(q, q);
      const auto c1 = kernel((f.gram() * w1).transpose()), c2 = kernel((f.gram() * w2).transpose());
      const auto line = intersect(c1, c2);
      ++total;
      if (line.dim() != 1) continue;
      const Vec v = line.basis.col(0);
      const int o1 = orientation_sign(f, w1, v), o2 = orientation_sign(f, w2, v);
      if ((o1 == o2) == (q % 2 == 0)) ++agree;
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " pairs match the parity rule"};
}

// Boost of the (x, z) plane with eigenvalue 2^e; every entry is exact in double.
Mat dyadic_boost(int e) {
  const double c = (std::ldexp(1.0, e) + std::ldexp(1.0, -e)) / 2, s = (std::ldexp(1.0, e) - std::ldexp(1.0, -e)) / 2;
  Mat m = Mat::Identity(3, 3);
  m(0, 0) = m(2, 2) = c;
  m(0, 2) = m(2, 0) = s;
  return m;
}

// Twenty dyadic elements of SO(2,1): a quarter turn times at most one (5/4, 3/4) boost.
// Conjugating dyadic_boost by these stays exact, so the product profile sees the true isometries.
Mat dyadic_conjugator(int i) {
  const double cs[4] = {1, 0, -1, 0}, sn[4] = {0, 1, 0, -1};
  Mat r = Mat::Identity(3, 3);
  r(0, 0) = r(1, 1) = cs[i % 4];
  r(0, 1) = -sn[i % 4];
  r(1, 0) = sn[i % 4];
  Mat b = Mat::Identity(3, 3);
  if (const int f = i / 4; f > 0) {
    const int ax = (f - 1) / 2;
    b(ax, ax) = b(2, 2) = 1.25;
    b(ax, 2) = b(2, ax) = f % 2 ? 0.75 : -0.75;
  }
  return r * b;
}

Outcome product_stability() {
  Gen gen(404);
  int pairs = 0, hyperbolic_ok = 0, families = 0;
  double worst_spread = 1.0;
  auto make = [](const Mat& c, int e) { return AffineMap::linear_only(c * dyadic_boost(e) * c.inverse()); };
  while (families < 40) {
    const Mat x = dyadic_conjugator(gen.integer(0, 19)), y = dyadic_conjugator(gen.integer(0, 19));
    // two different elements: transversal, with distinct attracting and repelling lines
    const auto sg = spectral_split(make(x, 8).linear), sh = spectral_split(make(y, 8).linear);
    if (transversality(make(x, 8), make(y, 8)) < 0.05 || subspace_dist(sg.a_plus, sh.a_plus) < 0.05 ||
        subspace_dist(sg.a_minus, sh.a_minus) < 0.05)
      continue;
    ++families;
    double lo = INFINITY, hi = 0;
    for (int e = 8; e <= 20; ++e) {
      const AffineMap g = make(x, e), h = make(y, e);
      const auto pg = profile_product({g}), ph = profile_product({h});
      const double eps = std::min({transversality(pg, ph), pg.eps_hyperbolic, ph.eps_hyperbolic});
      const auto est = product_estimates(g, h, eps);
      ++pairs;
      if (est.gh_eps >= eps / 2) ++hyperbolic_ok;
      lo = std::min(lo, est.drift_plus);
      hi = std::max(hi, est.drift_plus);
    }
    worst_spread = std::max(worst_spread, hi / lo);
  }
  return {hyperbolic_ok == pairs && worst_spread < kDriftSpread,
          std::to_string(hyperbolic_ok) + "/" + std::to_string(pairs) +
              " products eps/2-hyperbolic, worst drift spread across s = 2^-8..2^-20: " + sci(worst_spread)};
}

Outcome end_to_end_witness() {
  const auto t0 = std::chrono::steady_clock::now();
  const Run r = run_cli("certify --input " + data_file("opposite_sign.grp") +
                        " --max-word-len 4 --n-max 200 --radius 1");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.rc != 0) return {false, "exit status " + std::to_string(r.rc)};
  const json rep = json::parse(r.out);
  int verified = 0, rechecked = 0;
  for (const auto& cj : rep.at("certificates")) {
    const Certificate c = certificate_from_json(cj);
    if (c.kind != Certificate::Kind::BallIntersectionWitness) continue;
    const auto& p = std::get<BallWitnessPayload>(c.payload);
    for (const auto& e : p.entries) {
      ++verified;
      if (check_ball_entry(c.matrices[0], c.matrices[1], e, p.p1, p.p2, p.radius).ok) ++rechecked;
    }
  }
  return {verified >= 10 && rechecked == verified && secs < 10.0,
          std::to_string(rechecked) + "/" + std::to_string(verified) + " exponents re-checked, exit 0, " +
              std::to_string(secs).substr(0, 5) + " s"};
}

Outcome positive_control() {
  const auto spec = margulis3d_example(std::log(4.0), M_PI / 2, 10);
  const auto screen = eigenvalue_one_screen(spec, 8);
  const auto scan = proper_scan(spec, Vec::Zero(3), 1.0, 8);
  SearchOptions opt;
  opt.max_len = 6;
  const auto pair = opposite_sign_search(spec, opt);
  const bool only_e = scan.word_text == std::vector<std::string>{"e"};
  return {screen.empty() && only_e && !pair,
          "screen violations " + std::to_string(screen.size()) + ", return set size " +
              std::to_string(scan.word_text.size()) + ", opposite pair " + (pair ? "found" : "absent")};
}

Outcome fixed_point_screen() {
  const auto spec = load_group_file(data_file("no_unit_eigenvalue.grp"));
  const auto v = eigenvalue_one_screen(spec, 1);
  if (v.empty()) return {false, "not flagged"};
  const auto& p = std::get<FixedPointPayload>(v.front().payload);
  const Vec fp = p.fixed_point;
  const double direct = (v.front().matrices[0].apply(fp) - fp).norm();
  return {v.front().words.front().length() == 1 && p.residual < kScreenResidual && direct < kScreenResidual,
          "flagged at length " + std::to_string(v.front().words.front().length()) + ", residual " + sci(direct)};
}

Outcome classification_golden() {
  std::ifstream in(std::string(AFCERT_TEST_DIR) + "/golden/classification_expected.txt");
  if (!in) return {false, "golden file missing"};
  std::string line, expected, got;
  int rows = 0, case_rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto a = line.find('|'), b = line.find('|', a + 1);
    const std::string render = classification_lookup(std::stoi(line.substr(0, a)), line.substr(a + 1, b - a - 1)).render();
    expected += line.substr(b + 1) + "\n";
    got += render + "\n";
    ++rows;
    if (render.rfind("PossibleLinearPart", 0) == 0) ++case_rows;
  }
  return {rows > 0 && got == expected,
          std::to_string(rows) + " lookups (" + std::to_string(case_rows) + " case-list entries), " +
              (got == expected ? "byte-identical" : "mismatch")};
}

Outcome determinism() {
  const std::string base = "certify --input " + data_file("opposite_sign.grp") + " --max-word-len 4 --seed 7";
  const Run a = run_cli(base), b = run_cli(base), c = run_cli(base + " --jobs 4");
  if (a.rc != 0 || b.rc != 0 || c.rc != 0) return {false, "certify failed"};
  const json ja = json::parse(a.out), jb = json::parse(b.out), jc = json::parse(c.out);
  const bool same = ja.at("certificates").dump() == jb.at("certificates").dump();
  const bool primary = !ja["certificates"].empty() && ja["certificates"][0].dump() == jc["certificates"][0].dump();
  return {same && primary, std::string("repeat ") + (same ? "identical" : "differs") + ", jobs 4 vs 1 primary " +
                               (primary ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"splitting soundness", splitting_soundness},
      {"sign parity and conjugation invariance", sign_parity},
      {"standard isotropic pairs", standard_pairs},
      {"transported orientations", transported_orientations},
      {"product hyperbolicity and drift", product_stability},
      {"end-to-end ball witness", end_to_end_witness},
      {"positive control", positive_control},
      {"eigenvalue-one screen", fixed_point_screen},
      {"classification golden data", classification_golden},
      {"determinism", determinism},
  };
  const std::vector<double> limits{10, 30, 0, 0, 60, 10, 60, 0, 0, 0};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limits[i] > 0 && secs >= limits[i]) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(static_cast<int>(limits[i])) + " s budget)";
    }
    char t[32];
    std::snprintf(t, sizeof t, "%.2f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << " ["
              << t << "]\n";
    if (!o.pass) ++failed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (criteria.size() - failed) << "/" << criteria.size() << "\n";
  return failed ? 1 : 0;
}
