#include <cstdio>
#include <fstream>
#include <sstream>

#include "afcert/io.hpp"

namespace afcert {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
  std::string raw;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto hash = raw.find('#');
    const std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    Line line{n, {}, body};
    size_t i = 0;
    while (i < body.size()) {
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      if (i >= body.size()) break;
      const size_t start = i;
      while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      line.tokens.push_back({body.substr(start, i - start), static_cast<int>(start) + 1});
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

class Parser {
 public:
  Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const Line& l, int col, const std::string& what) const {
    throw Error(ErrorKind::ParseError,
                source_ + ":" + std::to_string(l.number) + ":" + std::to_string(col) + ": " + what);
  }

  double number(const Line& l, const Token& t) const {
    try {
      size_t used = 0;
      const double v = std::stod(t.text, &used);
      if (used != t.text.size()) fail(l, t.col, "invalid number '" + t.text + "'");
      return v;
    } catch (const std::invalid_argument&) {
      fail(l, t.col, "invalid number '" + t.text + "'");
    } catch (const std::out_of_range&) {
      fail(l, t.col, "number out of range '" + t.text + "'");
    }
  }

  int integer(const Line& l, const Token& t) const {
    const double v = number(l, t);
    if (v != static_cast<int>(v)) fail(l, t.col, "expected an integer");
    return static_cast<int>(v);
  }

  std::vector<double> numbers(const Line& l, size_t from, size_t count) const {
    if (l.tokens.size() - from != count)
      fail(l, l.tokens.empty() ? 1 : l.tokens.back().col,
           "expected " + std::to_string(count) + " numbers, found " + std::to_string(l.tokens.size() - from));
    std::vector<double> out;
    for (size_t i = from; i < l.tokens.size(); ++i) out.push_back(number(l, l.tokens[i]));
    return out;
  }

  void arity(const Line& l, size_t n) const {
    if (l.tokens.size() != n)
      fail(l, l.tokens[0].col, "'" + l.tokens[0].text + "' expects " + std::to_string(n - 1) + " argument(s)");
  }

  GroupSpec parse(const std::string& text) {
    const auto lines = tokenize(text);
    if (lines.empty()) throw Error(ErrorKind::ParseError, source_ + ":1:1: empty group file");
    const Line& head = lines[0];
    if (head.tokens[0].text != "afcert-group") fail(head, 1, "expected 'afcert-group <version>'");
    arity(head, 2);
    if (integer(head, head.tokens[1]) != kGroupFileVersion) fail(head, head.tokens[1].col, "unsupported version");

    GroupSpec spec;
    std::optional<AmbientGroup> ambient;
    std::optional<std::pair<int, int>> sig;
    std::optional<std::vector<double>> basis;
    const Line* sig_line = nullptr;
    struct Pending {
      AffineMap map;
      const Line* decl;
      bool has_linear = false, has_translation = false;
    };
    std::vector<Pending> gens;

    for (size_t k = 1; k < lines.size(); ++k) {
      const Line& l = lines[k];
      const std::string& kw = l.tokens[0].text;
      auto need_dim = [&] {
        if (spec.dim == 0) fail(l, 1, "'dim' must come before '" + kw + "'");
      };
      if (kw == "dim") {
        arity(l, 2);
        spec.dim = integer(l, l.tokens[1]);
        if (spec.dim < 1 || spec.dim > 8) fail(l, l.tokens[1].col, "dimension must lie in 1..8");
      } else if (kw == "ambient") {
        if (l.tokens.size() < 2) fail(l, 1, "ambient kind missing");
        const std::string& a = l.tokens[1].text;
        if (a == "so") {
          arity(l, 4);
          ambient = AmbientGroup::so(integer(l, l.tokens[2]), integer(l, l.tokens[3]));
        } else if (a == "sl") {
          if (l.tokens.size() < 3 || l.tokens.size() > 5) fail(l, l.tokens[1].col, "ambient sl N [neutral] [fixed]");
          ambient = AmbientGroup::sl(integer(l, l.tokens[2]), l.tokens.size() > 3 ? integer(l, l.tokens[3]) : 0,
                                     l.tokens.size() > 4 ? integer(l, l.tokens[4]) : 0);
        } else if (a == "product") {
          arity(l, 2);
          ambient = AmbientGroup::product_so21_sl3();
        } else if (a == "generic") {
          arity(l, 4);
          ambient = AmbientGroup::generic(integer(l, l.tokens[2]), integer(l, l.tokens[3]));
        } else {
          fail(l, l.tokens[1].col, "unknown ambient kind '" + a + "'");
        }
      } else if (kw == "form") {
        arity(l, 3);
        sig = {integer(l, l.tokens[1]), integer(l, l.tokens[2])};
        sig_line = &l;
      } else if (kw == "form-basis") {
        need_dim();
        basis = numbers(l, 1, static_cast<size_t>(spec.dim * spec.dim));
      } else if (kw == "product-split") {
        arity(l, 2);
        if (l.tokens[1].text != "standard") fail(l, l.tokens[1].col, "only 'product-split standard' is supported");
        spec.product_split = ProductSplit::standard();
      } else if (kw == "descriptor") {
        if (l.tokens.size() < 2) fail(l, 1, "descriptor text missing");
        spec.descriptor = l.raw.substr(l.tokens[1].col - 1);
        while (!spec.descriptor.empty() && std::isspace(static_cast<unsigned char>(spec.descriptor.back())))
          spec.descriptor.pop_back();
      } else if (kw == "generator") {
        need_dim();
        arity(l, 2);
        for (const auto& g : gens)
          if (g.map.name == l.tokens[1].text) fail(l, l.tokens[1].col, "duplicate generator name");
        Pending p{AffineMap::identity(spec.dim), &l};
        p.map.name = l.tokens[1].text;
        gens.push_back(p);
      } else if (kw == "linear" || kw == "translation") {
        need_dim();
        if (gens.empty()) fail(l, 1, "'" + kw + "' outside a generator block");
        auto& g = gens.back();
        if (kw == "linear") {
          const auto v = numbers(l, 1, static_cast<size_t>(spec.dim * spec.dim));
          for (int i = 0; i < spec.dim; ++i)
            for (int j = 0; j < spec.dim; ++j) g.map.linear(i, j) = v[i * spec.dim + j];
          g.has_linear = true;
        } else {
          const auto v = numbers(l, 1, static_cast<size_t>(spec.dim));
          for (int i = 0; i < spec.dim; ++i) g.map.translation(i) = v[i];
          g.has_translation = true;
        }
      } else {
        fail(l, 1, "unknown keyword '" + kw + "'");
      }
    }

    if (spec.dim == 0) throw Error(ErrorKind::ParseError, source_ + ": missing 'dim'");
    if (gens.empty()) throw Error(ErrorKind::ParseError, source_ + ": no generators");
    for (const auto& g : gens) {
      if (!g.has_linear) fail(*g.decl, 1, "generator '" + g.map.name + "' has no 'linear' line");
      if (!g.has_translation) fail(*g.decl, 1, "generator '" + g.map.name + "' has no 'translation' line");
      if (std::abs(g.map.linear.determinant()) < 1e-12)
        fail(*g.decl, 1, "generator '" + g.map.name + "' is not invertible");
      spec.generators.push_back(g.map);
    }
    if (sig) {
      if (sig->first + sig->second != spec.dim) fail(*sig_line, 1, "form signature does not match dim");
      if (basis) {
        Mat b(spec.dim, spec.dim);
        for (int i = 0; i < spec.dim; ++i)
          for (int j = 0; j < spec.dim; ++j) b(i, j) = (*basis)[i * spec.dim + j];
        spec.form = QuadraticForm::with_basis(sig->first, sig->second, b);
      } else {
        spec.form = QuadraticForm::standard(sig->first, sig->second);
      }
    }
    if (ambient) spec.ambient = *ambient;
    else if (spec.form) spec.ambient = AmbientGroup::so(spec.form->p, spec.form->q);
    else if (spec.product_split) spec.ambient = AmbientGroup::product_so21_sl3();
    else spec.ambient = AmbientGroup::generic(0, 0);
    try {
      spec.validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, source_ + ": " + e.what());
    }
    return spec;
  }

 private:
  std::string source_;
};

std::string join_numbers(const double* data, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += " " + fmt_double(data[i]);
  return out;
}

}  // namespace

GroupSpec parse_group_text(const std::string& text, const std::string& source) {
  return Parser(source).parse(text);
}

GroupSpec load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open group file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_text(ss.str(), path);
}

std::string write_group_text(const GroupSpec& spec) {
  std::ostringstream out;
  out << "afcert-group " << kGroupFileVersion << "\n";
  out << "dim " << spec.dim << "\n";
  const auto& a = spec.ambient;
  switch (a.kind) {
    case AmbientGroup::Kind::SO_pq: out << "ambient so " << a.p << " " << a.q << "\n"; break;
    case AmbientGroup::Kind::SL:
      out << "ambient sl " << a.p << " " << a.expected_neutral_dim << " " << a.expected_fixed_dim << "\n";
      break;
    case AmbientGroup::Kind::ProductSO21xSL3: out << "ambient product\n"; break;
    case AmbientGroup::Kind::Generic:
      out << "ambient generic " << a.expected_neutral_dim << " " << a.expected_fixed_dim << "\n";
      break;
  }
  if (spec.form) {
    out << "form " << spec.form->p << " " << spec.form->q << "\n";
    const Mat b = spec.form->basis;
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = b;
    out << "form-basis" << join_numbers(rm.data(), static_cast<int>(rm.size())) << "\n";
  }
  if (spec.product_split) out << "product-split standard\n";
  if (!spec.descriptor.empty()) out << "descriptor " << spec.descriptor << "\n";
  for (const auto& g : spec.generators) {
    out << "generator " << g.name << "\n";
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = g.linear;
    out << "linear" << join_numbers(rm.data(), static_cast<int>(rm.size())) << "\n";
    out << "translation" << join_numbers(g.translation.data(), g.dim()) << "\n";
  }
  return out.str();
}

}  // namespace afcert
