#include "afcert/group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace afcert {

void GroupSpec::validate() const {
  if (dim < 1 || dim > 8) throw Error(ErrorKind::InvalidArgument, "dimension must lie in 1..8");
  if (form && form->dim() != dim) throw Error(ErrorKind::DimMismatch, "form dimension");
  for (const auto& g : generators) {
    if (g.dim() != dim || g.linear.rows() != dim || g.linear.cols() != dim)
      throw Error(ErrorKind::DimMismatch, "generator '" + g.name + "' has the wrong dimension");
    if (!g.linear.allFinite() || !g.translation.allFinite())
      throw Error(ErrorKind::InvalidArgument, "generator '" + g.name + "' has non-finite entries");
    if (std::abs(g.linear.determinant()) < 1e-12)
      throw Error(ErrorKind::SingularMatrix, "generator '" + g.name + "' is not invertible");
    if (form && !form->preserved_by(g.linear, 1e-7))
      throw Error(ErrorKind::NotIsometry, "generator '" + g.name + "' does not preserve the form");
  }
  if (product_split && dim != 6) throw Error(ErrorKind::NotProductCompatible, "product split needs dim 6");
  if (product_split) product_split->validate();
}

Word Word::inverse() const {
  Word w;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(-*it);
  return w;
}

Word Word::operator*(const Word& o) const {
  Word w = *this;
  for (int l : o.letters) {
    if (!w.letters.empty() && w.letters.back() == -l)
      w.letters.pop_back();
    else
      w.letters.push_back(l);
  }
  return w;
}

std::string Word::str(const std::vector<std::string>& names) const {
  if (letters.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ' ';
    const int l = letters[i];
    out += names.at(std::abs(l) - 1);
    if (l < 0) out += "^-1";
  }
  return out;
}

std::string Word::str(const GroupSpec& spec) const {
  std::vector<std::string> names;
  for (const auto& g : spec.generators) names.push_back(g.name);
  return str(names);
}

static int letter_rank(int l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

bool length_lex_less(const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  for (int i = 0; i < a.length(); ++i) {
    const int ra = letter_rank(a.letters[i]), rb = letter_rank(b.letters[i]);
    if (ra != rb) return ra < rb;
  }
  return false;
}

Word parse_word(const std::string& text, const std::vector<std::string>& names) {
  std::istringstream in(text);
  std::string tok;
  Word w;
  while (in >> tok) {
    std::string name = tok;
    long exp = 1;
    const auto caret = tok.find('^');
    if (caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string e = tok.substr(caret + 1);
      try {
        size_t used = 0;
        exp = std::stol(e, &used);
        if (used != e.size()) throw std::invalid_argument(e);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "bad exponent in word token '" + tok + "'");
      }
    }
    if (name == "e" && exp == 1) continue;
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(ErrorKind::ParseError, "unknown generator '" + name + "'");
    const int idx = static_cast<int>(it - names.begin()) + 1;
    Word piece;
    for (long k = 0; k < std::abs(exp); ++k) piece.letters.push_back(exp > 0 ? idx : -idx);
    w = w * piece;
  }
  return w;
}

AffineMap evaluate(const GroupSpec& spec, const Word& w) {
  AffineMap acc = AffineMap::identity(spec.dim);
  for (int l : w.letters) {
    const auto& g = spec.generators.at(std::abs(l) - 1);
    acc = compose(acc, l > 0 ? g : inverse(g));
  }
  return acc;
}

long long reduced_word_count(int f, int len) {
  if (len == 0) return 1;
  long long c = 2LL * f;
  for (int i = 1; i < len; ++i) c *= (2LL * f - 1);
  return c;
}

void enumerate_words(const GroupSpec& spec, int max_len,
                     const std::function<bool(const Word&, const AffineMap&)>& visitor) {
  if (max_len < 0) throw Error(ErrorKind::InvalidArgument, "negative word length");
  if (max_len > 16) throw Error(ErrorKind::BallTooLarge, "max word length is 16");
  const int f = spec.num_generators();
  long long total = 0;
  for (int L = 0; L <= max_len; ++L) total += reduced_word_count(f, L);
  if (total > 20000000LL) throw Error(ErrorKind::BallTooLarge, "ball exceeds 2e7 words");

  std::vector<int> order;  // letters in rank order
  std::vector<AffineMap> letter_map;
  for (int i = 1; i <= f; ++i) {
    order.push_back(i);
    order.push_back(-i);
  }
  for (int l : order) {
    const auto& g = spec.generators[std::abs(l) - 1];
    letter_map.push_back(l > 0 ? g : inverse(g));
  }

  Word w;
  std::vector<AffineMap> prefix{AffineMap::identity(spec.dim)};
  bool stop = false;
  // depth-first generation of all words of one exact length is lex ordered
  std::function<void(int)> rec = [&](int remaining) {
    if (stop) return;
    if (remaining == 0) {
      if (!visitor(w, prefix.back())) stop = true;
      return;
    }
    for (size_t k = 0; k < order.size() && !stop; ++k) {
      const int l = order[k];
      if (!w.letters.empty() && w.letters.back() == -l) continue;
      w.letters.push_back(l);
      prefix.push_back(compose(prefix.back(), letter_map[k]));
      rec(remaining - 1);
      prefix.pop_back();
      w.letters.pop_back();
    }
  };
  for (int L = 0; L <= max_len && !stop; ++L) rec(L);
}

std::vector<WordElement> word_ball(const GroupSpec& spec, int max_len) {
  std::vector<WordElement> out;
  enumerate_words(spec, max_len, [&](const Word& w, const AffineMap& m) {
    out.push_back({w, m});
    return true;
  });
  return out;
}

void parallel_for(long n, int jobs, const std::function<void(long)>& fn) {
  if (jobs <= 1 || n < 2) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  const int t = static_cast<int>(std::min<long>(jobs, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(t);
  for (int k = 0; k < t; ++k) {
    pool.emplace_back([&, k] {
      try {
        for (long i = k; i < n; i += t) fn(i);
      } catch (...) {
        errs[k] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace afcert
