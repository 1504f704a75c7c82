#pragma once

#include <string>
#include <vector>

namespace afcert {

struct ClassRow {
  std::string source;      // "table1", "table2", "table3", "case"
  std::string group;       // canonical descriptor
  int dim = 0;             // dimension of V
  std::string case_tag;    // e.g. "Case 2 (1)"
  std::string family;      // "s1", "s2" or "-"
  std::string exclusion;   // argument excluding the case, or "-"
  std::string note;        // free text column from the table
};

struct Verdict {
  enum class Kind { PossibleLinearPart, Excluded, NotInTables };
  Kind kind = Kind::NotInTables;
  int dim = 0;
  std::string group;
  std::string case_tag;
  std::string family;
  std::string exclusion;

  /// Single canonical line, used for golden comparisons.
  std::string render() const;
};

std::vector<ClassRow> load_classification(const std::string& path);
std::string default_classification_path();

/// Canonical form of a descriptor such as "SL_3(R)" or "SO(2,1) x SL3(R)".
std::string canonical_descriptor(const std::string& s);

Verdict classification_lookup(int dim, const std::string& descriptor,
                              const std::vector<ClassRow>& rows);
Verdict classification_lookup(int dim, const std::string& descriptor);

}  // namespace afcert
