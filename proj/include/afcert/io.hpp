#pragma once

#include <string>

#include <json.hpp>

#include "afcert/certificates.hpp"

namespace afcert {

/// Group file: line-oriented keywords, see README. Errors carry file:line:col.
GroupSpec parse_group_text(const std::string& text, const std::string& source = "<input>");
GroupSpec load_group_file(const std::string& path);
std::string write_group_text(const GroupSpec& spec);

/// %.17g
std::string fmt_double(double x);

nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const Mat& m);
nlohmann::json to_json(const AffineMap& g);
nlohmann::json to_json(const QuadraticForm& f);
nlohmann::json to_json(const ProductSplit& ps);
nlohmann::json to_json(const Certificate& c);

Vec vec_from_json(const nlohmann::json& j);
Mat mat_from_json(const nlohmann::json& j);
AffineMap affine_from_json(const nlohmann::json& j);
QuadraticForm form_from_json(const nlohmann::json& j);
ProductSplit split_from_json(const nlohmann::json& j);
Certificate certificate_from_json(const nlohmann::json& j);

inline constexpr int kReportVersion = 1;
inline constexpr int kGroupFileVersion = 1;

}  // namespace afcert
