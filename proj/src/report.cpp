#include "afcert/io.hpp"

namespace afcert {

using nlohmann::json;

json to_json(const Vec& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json to_json(const Mat& m) {
  json j = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(row);
  }
  return j;
}

json to_json(const AffineMap& g) {
  return {{"name", g.name}, {"linear", to_json(g.linear)}, {"translation", to_json(g.translation)}};
}

json to_json(const QuadraticForm& f) { return {{"p", f.p}, {"q", f.q}, {"basis", to_json(f.basis)}}; }

json to_json(const ProductSplit& ps) {
  return {{"v1", to_json(ps.v1.basis)}, {"v2", to_json(ps.v2.basis)}, {"form_on_v1", to_json(ps.form_on_v1)}};
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected a number array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::ParseError, "expected a matrix");
  Mat m(j.size(), j[0].size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw Error(ErrorKind::ParseError, "ragged matrix");
    for (size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

AffineMap affine_from_json(const json& j) {
  AffineMap g{mat_from_json(j.at("linear")), vec_from_json(j.at("translation")), j.value("name", "")};
  if (g.linear.rows() != g.linear.cols() || g.linear.rows() != g.translation.size())
    throw Error(ErrorKind::DimMismatch, "affine map dimensions differ");
  return g;
}

QuadraticForm form_from_json(const json& j) {
  return QuadraticForm::with_basis(j.at("p").get<int>(), j.at("q").get<int>(), mat_from_json(j.at("basis")));
}

ProductSplit split_from_json(const json& j) {
  ProductSplit ps;
  const Mat b1 = mat_from_json(j.at("v1")), b2 = mat_from_json(j.at("v2"));
  ps.v1 = Subspace{static_cast<int>(b1.rows()), b1};
  ps.v2 = Subspace{static_cast<int>(b2.rows()), b2};
  ps.form_on_v1 = form_from_json(j.at("form_on_v1"));
  ps.validate();
  return ps;
}

json to_json(const Certificate& c) {
  json j;
  j["kind"] = kind_name(c.kind);
  j["words"] = c.word_text;
  json letters = json::array();
  for (const auto& w : c.words) letters.push_back(w.letters);
  j["letters"] = letters;
  json mats = json::array();
  for (const auto& g : c.matrices) mats.push_back(to_json(g));
  j["matrices"] = mats;
  json p;
  std::visit(
      [&](const auto& pl) {
        using T = std::decay_t<decltype(pl)>;
        if constexpr (std::is_same_v<T, FixedPointPayload>) {
          p = {{"fixed_point", to_json(pl.fixed_point)},
               {"eigen_distances", pl.eigen_distances},
               {"residual", pl.residual}};
        } else if constexpr (std::is_same_v<T, OppositeSignPayload>) {
          p = {{"alpha_g", pl.alpha_g}, {"alpha_h", pl.alpha_h}, {"eps", pl.eps}};
          if (pl.form) p["form"] = to_json(*pl.form);
          if (pl.product_split) p["product_split"] = to_json(*pl.product_split);
        } else if constexpr (std::is_same_v<T, BallWitnessPayload>) {
          p = {{"p1", to_json(pl.p1)}, {"p2", to_json(pl.p2)}, {"p", to_json(pl.p)},   {"v", to_json(pl.v)},
               {"radius", pl.radius},  {"lambda", pl.lambda}, {"verified", pl.entries.size()}};
          json es = json::array();
          for (const auto& e : pl.entries)
            es.push_back({{"n", e.n},
                          {"m", e.m},
                          {"start", to_json(e.start)},
                          {"y", e.y},
                          {"precision_bits", e.precision_bits},
                          {"dist_start", e.dist_start},
                          {"dist_image", e.dist_image}});
          p["entries"] = es;
        } else {
          p = {{"center", to_json(pl.center)}, {"radius", pl.radius}, {"max_len", pl.max_len},
               {"distances", pl.distances}};
          json g = json::array();
          for (const auto& r : pl.growth)
            g.push_back({{"length", r.length}, {"enumerated", r.enumerated}, {"returns", r.returns}});
          p["growth"] = g;
        }
      },
      c.payload);
  j["payload"] = p;
  return j;
}

Certificate certificate_from_json(const json& j) {
  try {
    Certificate c;
    const std::string kind = j.at("kind").get<std::string>();
    for (const auto& w : j.at("words")) c.word_text.push_back(w.get<std::string>());
    for (const auto& l : j.at("letters")) c.words.push_back(Word{l.get<std::vector<int>>()});
    for (const auto& m : j.at("matrices")) c.matrices.push_back(affine_from_json(m));
    const json& p = j.at("payload");
    if (kind == "FixedPointViolation") {
      c.kind = Certificate::Kind::FixedPointViolation;
      c.payload = FixedPointPayload{vec_from_json(p.at("fixed_point")),
                                    p.at("eigen_distances").get<std::vector<double>>(),
                                    p.at("residual").get<double>()};
    } else if (kind == "OppositeSignPair") {
      c.kind = Certificate::Kind::OppositeSignPair;
      OppositeSignPayload pl;
      pl.alpha_g = p.at("alpha_g").get<double>();
      pl.alpha_h = p.at("alpha_h").get<double>();
      pl.eps = p.at("eps").get<double>();
      if (p.contains("form")) pl.form = form_from_json(p["form"]);
      if (p.contains("product_split")) pl.product_split = split_from_json(p["product_split"]);
      c.payload = pl;
    } else if (kind == "BallIntersectionWitness") {
      c.kind = Certificate::Kind::BallIntersectionWitness;
      BallWitnessPayload pl;
      pl.p1 = vec_from_json(p.at("p1"));
      pl.p2 = vec_from_json(p.at("p2"));
      pl.p = vec_from_json(p.at("p"));
      pl.v = vec_from_json(p.at("v"));
      pl.radius = p.at("radius").get<double>();
      pl.lambda = p.at("lambda").get<double>();
      for (const auto& e : p.at("entries")) {
        WitnessEntry w;
        w.n = e.at("n").get<long>();
        w.m = e.at("m").get<long>();
        w.start = vec_from_json(e.at("start"));
        w.y = e.at("y").get<std::vector<std::string>>();
        w.precision_bits = e.at("precision_bits").get<int>();
        w.dist_start = e.at("dist_start").get<double>();
        w.dist_image = e.at("dist_image").get<double>();
        pl.entries.push_back(std::move(w));
      }
      c.payload = pl;
    } else if (kind == "EvidenceScan") {
      c.kind = Certificate::Kind::EvidenceScan;
      EvidenceScanPayload pl;
      pl.center = vec_from_json(p.at("center"));
      pl.radius = p.at("radius").get<double>();
      pl.max_len = p.at("max_len").get<int>();
      pl.distances = p.at("distances").get<std::vector<double>>();
      for (const auto& r : p.at("growth"))
        pl.growth.push_back({r.at("length").get<int>(), r.at("enumerated").get<long long>(),
                             r.at("returns").get<long long>()});
      c.payload = pl;
    } else {
      throw Error(ErrorKind::ParseError, "unknown certificate kind '" + kind + "'");
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace afcert
