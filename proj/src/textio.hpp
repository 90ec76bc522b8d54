#pragma once

#include <string>
#include <vector>

#include "pkb.hpp"

namespace liftcount {

// Model text, one statement per line, '#' starts a comment:
//   domain person = 5              constants Person1..Person5
//   domain color = {Red, Green}    explicit constants
//   predicate Smokes(person)
//   0.3 Smokes(x) => Cancer(x)     potential paid per violating grounding
//   hard Friends(x,y) => Friends(y,x)
//   w 1.2 Smokes(x)                potential exp(-1.2)
// Formulas use ! ^ v => <=> (tightest first), parentheses allowed.
// Lowercase identifiers are variables; capitalized ones are constants.
PKB parse_model(const std::string &text);

// One ground literal per line, '!' prefix for negation:
//   Smokes(Person1)
//   !Cancer(Person2)
std::vector<GroundLiteral> parse_evidence(const std::string &text, const Vocabulary &voc);

struct Query {
  Formula formula;
  std::vector<FormulaVar> vars;
};
// A single formula over the model's vocabulary; free variables universal.
Query parse_query(const std::string &text, const Vocabulary &voc);

// Propositional weighted-counting input, DIMACS-flavored:
//   c comment
//   p cnf <vars> <clauses>
//   w <var> <true-weight> <false-weight>   (unstated weights are 1 1)
//   <lit> ... <lit> 0
struct GroundWcnf {
  uint32_t num_vars = 0;
  std::vector<std::vector<int32_t>> clauses;
  std::vector<std::pair<LogNum, LogNum>> weights;  // by var - 1
};
GroundWcnf parse_wcnf(const std::string &text);

// Round-trip printers. print_model emits declarations and formulas in input
// syntax, preserving how each weight was stated.
std::string print_model(const PKB &pkb);
std::string format_formula(const Formula &f, const std::vector<FormulaVar> &vars,
                           const Vocabulary &voc);
std::string print_ground_literal(const Vocabulary &voc, const GroundLiteral &l);

// Shortest decimal string that parses back to exactly v.
std::string fmt_double(double v);

}  // namespace liftcount
