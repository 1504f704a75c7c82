#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "afcert/dynamics.hpp"
#include "afcert/sign.hpp"

namespace afcert {

struct GroupSpec {
  int dim = 0;
  std::vector<AffineMap> generators;
  AmbientGroup ambient;
  std::optional<QuadraticForm> form;
  std::optional<ProductSplit> product_split;
  std::string descriptor;  // optional ambient descriptor string

  int num_generators() const { return static_cast<int>(generators.size()); }
  /// Checks dimensions, invertibility and form preservation.
  void validate() const;
};

/// Freely reduced word in signed 1-based generator indices (negative = inverse).
struct Word {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  Word inverse() const;
  Word operator*(const Word& o) const;  // concatenation with free reduction
  bool operator==(const Word& o) const { return letters == o.letters; }

  /// Rendered with generator names, e.g. "a b A" -> "a b a^-1"; identity is "e".
  std::string str(const GroupSpec& spec) const;
  std::string str(const std::vector<std::string>& names) const;
};

/// Length-lexicographic order with letters ranked 1, -1, 2, -2, ...
bool length_lex_less(const Word& a, const Word& b);

/// Parses "a b^-1 a^3"; tokens are generator names with an optional ^k.
Word parse_word(const std::string& text, const std::vector<std::string>& names);

AffineMap evaluate(const GroupSpec& spec, const Word& w);

struct WordElement {
  Word word;
  AffineMap map;
};

/// Visits every freely reduced word of length <= max_len exactly once in
/// length-lex order (identity first). The visitor returns false to stop.
void enumerate_words(const GroupSpec& spec, int max_len,
                     const std::function<bool(const Word&, const AffineMap&)>& visitor);

std::vector<WordElement> word_ball(const GroupSpec& spec, int max_len);

/// Number of reduced words of length exactly L over f generators.
long long reduced_word_count(int f, int len);

/// Runs fn(i) for i in [0, n) on `jobs` threads; fn must write only to slot i.
void parallel_for(long n, int jobs, const std::function<void(long)>& fn);

}  // namespace afcert
