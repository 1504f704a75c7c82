#include "afcert/classification.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "afcert/error.hpp"

namespace afcert {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, '|')) out.push_back(trim(f));
  return out;
}

int source_rank(const std::string& s) {
  if (s == "case") return 0;
  if (s == "table2") return 1;
  if (s == "table3") return 2;
  return 3;
}

}  // namespace

std::string default_classification_path() { return std::string(AFCERT_DATA_DIR) + "/classification.txt"; }

std::vector<ClassRow> load_classification(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::vector<ClassRow> rows;
  std::string line;
  int lineno = 0;
  bool versioned = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("version", 0) == 0) {
      if (trim(t.substr(7)) != "1")
        throw Error(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ":1: unsupported version");
      versioned = true;
      continue;
    }
    const auto f = split_fields(t);
    if (f.size() != 7)
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ":1: expected 7 fields");
    ClassRow r;
    r.source = f[0];
    r.group = f[1];
    try {
      r.dim = std::stoi(f[2]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": bad dimension");
    }
    r.case_tag = f[3];
    r.family = f[4];
    r.exclusion = f[5];
    r.note = f[6];
    rows.push_back(std::move(r));
  }
  if (!versioned) throw Error(ErrorKind::ParseError, path + ": missing version line");
  return rows;
}

std::string canonical_descriptor(const std::string& s) {
  std::string t = s;
  // the multiplication sign in UTF-8
  for (size_t pos; (pos = t.find("\xC3\x97")) != std::string::npos;) t.replace(pos, 2, "x");
  std::string u;
  for (char c : t)
    if (c != ' ' && c != '_' && c != '\t') u += c;
  for (size_t pos; (pos = u.find("(R)")) != std::string::npos;) u.erase(pos, 3);
  u = std::regex_replace(u, std::regex(R"(SO\((\d)\))"), "SO$1");
  // factors are order independent
  std::vector<std::string> factors;
  std::stringstream ss(u);
  std::string f;
  while (std::getline(ss, f, 'x')) {
    for (auto& c : f) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    factors.push_back(f);
  }
  std::sort(factors.begin(), factors.end());
  std::string out;
  for (size_t i = 0; i < factors.size(); ++i) out += (i ? "x" : "") + factors[i];
  return out;
}

std::string Verdict::render() const {
  std::string k;
  switch (kind) {
    case Kind::PossibleLinearPart: k = "PossibleLinearPart"; break;
    case Kind::Excluded: k = "Excluded"; break;
    case Kind::NotInTables: k = "NotInTables"; break;
  }
  std::string out = k + " dim=" + std::to_string(dim) + " group=" + group;
  if (kind == Kind::PossibleLinearPart) out += " case=" + case_tag + " family=" + family;
  if (kind != Kind::NotInTables) out += " exclusion=" + exclusion;
  return out;
}

Verdict classification_lookup(int dim, const std::string& descriptor, const std::vector<ClassRow>& rows) {
  if (dim < 1 || dim > 6) throw Error(ErrorKind::InvalidArgument, "dimension must be in 1..6");
  const std::string key = canonical_descriptor(descriptor);
  const ClassRow* best = nullptr;
  const ClassRow* known = nullptr;
  for (const auto& r : rows) {
    if (canonical_descriptor(r.group) != key) continue;
    if (!known) known = &r;
    if (r.dim != dim) continue;
    if (!best || source_rank(r.source) < source_rank(best->source)) best = &r;
  }
  if (!known) throw Error(ErrorKind::UnknownDescriptor, "unknown group descriptor '" + descriptor + "'");
  Verdict v;
  v.dim = dim;
  if (!best) {
    v.kind = Verdict::Kind::NotInTables;
    v.group = known->group;
    return v;
  }
  v.group = best->group;
  v.exclusion = best->exclusion;
  if (best->source == "case") {
    v.kind = Verdict::Kind::PossibleLinearPart;
    v.case_tag = best->case_tag;
    v.family = best->family;
  } else {
    v.kind = Verdict::Kind::Excluded;
  }
  return v;
}

Verdict classification_lookup(int dim, const std::string& descriptor) {
  static const std::vector<ClassRow> rows = load_classification(default_classification_path());
  return classification_lookup(dim, descriptor, rows);
}

}  // namespace afcert
