#include "textio.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace liftcount {

namespace {

struct Tok {
  enum Kind { Word, Num, LParen, RParen, Comma, LBrace, RBrace, Eq,
              Bang, Caret, Arrow, DArrow, End } kind;
  std::string text;
  double num = 0;
};

bool is_word_char(char c) { return std::isalnum(uint8_t(c)) || c == '_'; }

std::vector<Tok> tokenize(const std::string &s) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(uint8_t(c))) { ++i; continue; }
    if (c == '#') break;
    if (std::isalpha(uint8_t(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && is_word_char(s[j])) ++j;
      out.push_back({Tok::Word, s.substr(i, j - i), 0});
      i = j;
      continue;
    }
    if (std::isdigit(uint8_t(c)) || c == '.' ||
        ((c == '-' || c == '+') && i + 1 < s.size() &&
         (std::isdigit(uint8_t(s[i + 1])) || s[i + 1] == '.'))) {
      size_t used = 0;
      double v = 0;
      try {
        v = std::stod(s.substr(i), &used);
      } catch (const std::exception &) {
        throw ModelError("malformed number");
      }
      out.push_back({Tok::Num, s.substr(i, used), v});
      i += used;
      continue;
    }
    if (s.compare(i, 3, "<=>") == 0) { out.push_back({Tok::DArrow, "<=>", 0}); i += 3; continue; }
    if (s.compare(i, 2, "=>") == 0) { out.push_back({Tok::Arrow, "=>", 0}); i += 2; continue; }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", 0}); break;
      case ')': out.push_back({Tok::RParen, ")", 0}); break;
      case ',': out.push_back({Tok::Comma, ",", 0}); break;
      case '{': out.push_back({Tok::LBrace, "{", 0}); break;
      case '}': out.push_back({Tok::RBrace, "}", 0}); break;
      case '=': out.push_back({Tok::Eq, "=", 0}); break;
      case '!': out.push_back({Tok::Bang, "!", 0}); break;
      case '^': out.push_back({Tok::Caret, "^", 0}); break;
      default:
        throw ModelError(std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tok::End, "", 0});
  return out;
}

bool reserved_word(const std::string &w) {
  return w == "v" || w == "hard" || w == "w" || w == "domain" || w == "predicate" ||
         w == "exists";
}

class FormulaParser {
 public:
  FormulaParser(const std::vector<Tok> &toks, size_t pos, const Vocabulary &voc,
                std::vector<FormulaVar> &vars)
      : toks_(toks), pos_(pos), voc_(voc), vars_(vars) {}

  Formula parse() {
    Formula f = parse_iff();
    expect_end();
    return f;
  }
  size_t pos() const { return pos_; }

 private:
  const Tok &peek() const { return toks_[pos_]; }
  Tok take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string &msg) {
    throw ModelError(msg + (peek().kind == Tok::End ? " at end of line"
                                                    : " near '" + peek().text + "'"));
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("trailing input");
  }

  bool at_or() const { return peek().kind == Tok::Word && peek().text == "v"; }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (peek().kind == Tok::DArrow) {
      take();
      f = Formula::binary(Formula::Iff, std::move(f), parse_implies());
    }
    return f;
  }
  Formula parse_implies() {
    Formula f = parse_or();
    if (peek().kind == Tok::Arrow) {
      take();
      return Formula::binary(Formula::Implies, std::move(f), parse_implies());
    }
    return f;
  }
  Formula parse_or() {
    Formula f = parse_and();
    while (at_or()) {
      take();
      f = Formula::binary(Formula::Or, std::move(f), parse_and());
    }
    return f;
  }
  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Tok::Caret) {
      take();
      f = Formula::binary(Formula::And, std::move(f), parse_unary());
    }
    return f;
  }
  Formula parse_unary() {
    if (peek().kind == Tok::Bang) {
      take();
      return Formula::unary(Formula::Not, parse_unary());
    }
    return parse_primary();
  }
  Formula parse_primary() {
    if (peek().kind == Tok::LParen) {
      take();
      Formula f = parse_iff();
      if (take().kind != Tok::RParen) fail("expected ')'");
      return f;
    }
    if (peek().kind != Tok::Word) fail("expected an atom");
    if (peek().text == "exists")
      throw ModelError("existential quantification is not supported");
    if (reserved_word(peek().text) || std::islower(uint8_t(peek().text[0])))
      fail("expected a predicate name");
    return parse_atom();
  }

  Formula parse_atom() {
    std::string name = take().text;
    auto pred = voc_.find_pred(name);
    if (!pred) throw ModelError("unknown predicate '" + name + "'");
    const auto &decl = voc_.pred(*pred);
    std::vector<Term> args;
    if (peek().kind == Tok::LParen) {
      take();
      if (peek().kind == Tok::RParen) {
        take();
      } else {
        for (;;) {
          if (args.size() >= decl.arg_sorts.size())
            throw ModelError("too many arguments to '" + name + "'");
          args.push_back(parse_term(decl.arg_sorts[args.size()], name));
          Tok t = take();
          if (t.kind == Tok::RParen) break;
          if (t.kind != Tok::Comma) fail("expected ',' or ')'");
        }
      }
    }
    if (args.size() != decl.arg_sorts.size())
      throw ModelError("predicate '" + name + "' takes " +
                       std::to_string(decl.arg_sorts.size()) + " argument(s)");
    return Formula::atom(*pred, std::move(args));
  }

  Term parse_term(SortId want, const std::string &pred_name) {
    if (peek().kind != Tok::Word) fail("expected a term");
    std::string name = take().text;
    if (std::isupper(uint8_t(name[0]))) {
      auto c = voc_.find_const(name);
      if (!c) throw ModelError("unknown constant '" + name + "'");
      if (c->first != want)
        throw ModelError("constant '" + name + "' is not in domain '" +
                         voc_.sort(want).name + "'");
      return Term::constant(c->second);
    }
    if (reserved_word(name)) throw ModelError("'" + name + "' is reserved");
    for (uint32_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) {
        if (vars_[i].sort != want)
          throw ModelError("variable '" + name + "' used in domains '" +
                           voc_.sort(vars_[i].sort).name + "' and '" +
                           voc_.sort(want).name + "'");
        return Term::var(i);
      }
    vars_.push_back(FormulaVar{name, want});
    (void)pred_name;
    return Term::var(uint32_t(vars_.size() - 1));
  }

  const std::vector<Tok> &toks_;
  size_t pos_;
  const Vocabulary &voc_;
  std::vector<FormulaVar> &vars_;
};

void parse_domain(const std::vector<Tok> &toks, PKB &pkb) {
  // domain <name> = <N>  |  domain <name> = { A, B, ... }
  size_t i = 1;
  if (toks[i].kind != Tok::Word) throw ModelError("expected a domain name");
  std::string name = toks[i++].text;
  if (toks[i++].kind != Tok::Eq) throw ModelError("expected '=' after domain name");
  if (toks[i].kind == Tok::Num) {
    double n = toks[i].num;
    if (n < 1 || n != uint32_t(n)) throw ModelError("domain size must be a positive integer");
    if (toks[i + 1].kind != Tok::End) throw ModelError("trailing input after domain size");
    pkb.voc.add_sort_sized(name, uint32_t(n));
    return;
  }
  if (toks[i++].kind != Tok::LBrace) throw ModelError("expected a size or '{'");
  std::vector<std::string> consts;
  for (;;) {
    if (toks[i].kind != Tok::Word || !std::isupper(uint8_t(toks[i].text[0])))
      throw ModelError("constants must be capitalized names");
    consts.push_back(toks[i++].text);
    if (toks[i].kind == Tok::Comma) { ++i; continue; }
    if (toks[i].kind == Tok::RBrace) { ++i; break; }
    throw ModelError("expected ',' or '}'");
  }
  if (toks[i].kind != Tok::End) throw ModelError("trailing input after domain");
  pkb.voc.add_sort(name, consts);
}

void parse_predicate(const std::vector<Tok> &toks, PKB &pkb) {
  size_t i = 1;
  if (toks[i].kind != Tok::Word || !std::isupper(uint8_t(toks[i].text[0])))
    throw ModelError("predicate names must be capitalized");
  std::string name = toks[i++].text;
  std::vector<SortId> args;
  if (toks[i].kind == Tok::LParen) {
    ++i;
    if (toks[i].kind == Tok::RParen) {
      ++i;
    } else {
      for (;;) {
        if (toks[i].kind != Tok::Word) throw ModelError("expected a domain name");
        auto s = pkb.voc.find_sort(toks[i].text);
        if (!s) throw ModelError("unknown domain '" + toks[i].text + "'");
        args.push_back(*s);
        ++i;
        if (toks[i].kind == Tok::Comma) { ++i; continue; }
        if (toks[i].kind == Tok::RParen) { ++i; break; }
        throw ModelError("expected ',' or ')'");
      }
    }
  }
  if (toks[i].kind != Tok::End) throw ModelError("trailing input after predicate");
  pkb.voc.add_pred(name, std::move(args));
}

void parse_formula_line(const std::vector<Tok> &toks, PKB &pkb, WeightForm form,
                        double stated, size_t start) {
  WeightedFormula wf;
  wf.form = form;
  wf.stated = stated;
  FormulaParser p(toks, start, pkb.voc, wf.vars);
  wf.formula = p.parse();
  if (form == WeightForm::Potential && (stated < 0 || !std::isfinite(stated)))
    throw ModelError("potentials must be finite and nonnegative");
  pkb.formulas.push_back(std::move(wf));
}

GroundLiteral parse_literal_line(const std::vector<Tok> &toks, const Vocabulary &voc) {
  GroundLiteral out;
  size_t i = 0;
  if (toks[i].kind == Tok::Bang) {
    out.neg = true;
    ++i;
  }
  std::vector<FormulaVar> vars;
  FormulaParser p(toks, i, voc, vars);
  // Reuse the atom grammar, then insist on groundness.
  Formula f = p.parse();
  if (f.kind != Formula::Atom || !vars.empty())
    throw ModelError("expected a ground literal");
  out.pred = f.pred;
  for (Term t : f.args) out.consts.push_back(ConstId(t.idx));
  return out;
}

// Strips whitespace and returns false for blank/comment-only lines.
bool significant(const std::string &line) {
  for (char c : line) {
    if (c == '#') return false;
    if (!std::isspace(uint8_t(c))) return true;
  }
  return false;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Trim to the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::stod(shorter) == v) return shorter;
  }
  return buf;
}

namespace {

}  // namespace

PKB parse_model(const std::string &text) {
  PKB pkb;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!significant(line)) continue;
    try {
      auto toks = tokenize(line);
      const Tok &head = toks[0];
      if (head.kind == Tok::Word && head.text == "domain") {
        parse_domain(toks, pkb);
      } else if (head.kind == Tok::Word && head.text == "predicate") {
        parse_predicate(toks, pkb);
      } else if (head.kind == Tok::Word && head.text == "hard") {
        parse_formula_line(toks, pkb, WeightForm::Hard, 0, 1);
      } else if (head.kind == Tok::Word && head.text == "w") {
        if (toks[1].kind != Tok::Num) throw ModelError("expected a weight after 'w'");
        parse_formula_line(toks, pkb, WeightForm::LogWeight, toks[1].num, 2);
      } else if (head.kind == Tok::Num) {
        parse_formula_line(toks, pkb, WeightForm::Potential, head.num, 1);
      } else {
        throw ModelError("expected 'domain', 'predicate', 'hard', 'w', or a potential");
      }
    } catch (const ModelError &e) {
      throw ModelError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pkb;
}

std::vector<GroundLiteral> parse_evidence(const std::string &text, const Vocabulary &voc) {
  std::vector<GroundLiteral> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!significant(line)) continue;
    try {
      out.push_back(parse_literal_line(tokenize(line), voc));
    } catch (const ModelError &e) {
      throw ModelError("evidence line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Query parse_query(const std::string &text, const Vocabulary &voc) {
  Query q;
  auto toks = tokenize(text);
  FormulaParser p(toks, 0, voc, q.vars);
  q.formula = p.parse();
  return q;
}

GroundWcnf parse_wcnf(const std::string &text) {
  GroundWcnf out;
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  size_t declared_clauses = 0;
  std::vector<int32_t> current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") continue;
    try {
      if (first == "p") {
        std::string kind;
        size_t nv, nc;
        if (!(ls >> kind >> nv >> nc) || kind != "cnf")
          throw ModelError("malformed problem line");
        out.num_vars = uint32_t(nv);
        declared_clauses = nc;
        out.weights.assign(nv, {LogNum::one(), LogNum::one()});
        seen_header = true;
        continue;
      }
      if (!seen_header) throw ModelError("missing 'p cnf' header");
      if (first == "w") {
        uint32_t var;
        double wt, wf;
        if (!(ls >> var >> wt >> wf)) throw ModelError("malformed weight line");
        if (var < 1 || var > out.num_vars) throw ModelError("weight for undeclared variable");
        if (wt < 0 || wf < 0) throw ModelError("weights must be nonnegative");
        out.weights[var - 1] = {LogNum::from_linear(wt), LogNum::from_linear(wf)};
        continue;
      }
      int32_t lit = std::stoi(first);
      for (;;) {
        if (lit == 0) {
          out.clauses.push_back(current);
          current.clear();
        } else {
          if (uint32_t(std::abs(lit)) > out.num_vars)
            throw ModelError("literal names an undeclared variable");
          current.push_back(lit);
        }
        if (!(ls >> lit)) break;
      }
    } catch (const ModelError &e) {
      throw ModelError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception &) {
      throw ModelError("line " + std::to_string(lineno) + ": malformed input");
    }
  }
  if (!seen_header) throw ModelError("missing 'p cnf' header");
  if (!current.empty()) throw ModelError("last clause is not terminated by 0");
  if (declared_clauses != out.clauses.size())
    throw ModelError("clause count does not match the header");
  return out;
}

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Iff: return 0;
    case Formula::Implies: return 1;
    case Formula::Or: return 2;
    case Formula::And: return 3;
    case Formula::Not: return 4;
    default: return 5;
  }
}

void format_rec(const Formula &f, const std::vector<FormulaVar> &vars,
                const Vocabulary &voc, int parent_prec, std::string &out) {
  int prec = precedence(f.kind);
  bool paren = prec < parent_prec;
  if (paren) out += "(";
  switch (f.kind) {
    case Formula::Atom: {
      const auto &decl = voc.pred(f.pred);
      out += decl.name;
      if (!f.args.empty()) {
        out += "(";
        for (size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += ",";
          Term t = f.args[i];
          out += t.is_var() ? vars[t.idx].name : voc.const_name(decl.arg_sorts[i], t.idx);
        }
        out += ")";
      }
      break;
    }
    case Formula::Not:
      out += "!";
      format_rec(f.kids[0], vars, voc, prec, out);
      break;
    case Formula::And:
    case Formula::Or:
    case Formula::Implies:
    case Formula::Iff: {
      const char *op = f.kind == Formula::And ? " ^ "
                       : f.kind == Formula::Or ? " v "
                       : f.kind == Formula::Implies ? " => " : " <=> ";
      // Right operand of => binds looser (right associative); others chain left.
      format_rec(f.kids[0], vars, voc, f.kind == Formula::Implies ? prec + 1 : prec, out);
      for (size_t i = 1; i < f.kids.size(); ++i) {
        out += op;
        format_rec(f.kids[i], vars, voc,
                   f.kind == Formula::Implies ? prec : prec + 1, out);
      }
      break;
    }
    case Formula::Exists:
      throw ModelError("cannot print an existential formula");
  }
  if (paren) out += ")";
}

}  // namespace

std::string format_formula(const Formula &f, const std::vector<FormulaVar> &vars,
                           const Vocabulary &voc) {
  std::string out;
  format_rec(f, vars, voc, 0, out);
  return out;
}

std::string print_model(const PKB &pkb) {
  std::string out;
  for (SortId s = 0; s < pkb.voc.num_sorts(); ++s) {
    const auto &sort = pkb.voc.sort(s);
    out += "domain " + sort.name + " = ";
    if (sort.auto_named) {
      out += std::to_string(sort.constants.size());
    } else {
      out += "{";
      for (size_t i = 0; i < sort.constants.size(); ++i) {
        if (i) out += ", ";
        out += sort.constants[i];
      }
      out += "}";
    }
    out += "\n";
  }
  for (PredId p = 0; p < pkb.voc.num_preds(); ++p) {
    const auto &pred = pkb.voc.pred(p);
    if (pred.internal) continue;
    out += "predicate " + pred.name + "(";
    for (size_t i = 0; i < pred.arg_sorts.size(); ++i) {
      if (i) out += ",";
      out += pkb.voc.sort(pred.arg_sorts[i]).name;
    }
    out += ")\n";
  }
  for (const WeightedFormula &wf : pkb.formulas) {
    switch (wf.form) {
      case WeightForm::Hard: out += "hard "; break;
      case WeightForm::LogWeight: out += "w " + fmt_double(wf.stated) + " "; break;
      case WeightForm::Potential: out += fmt_double(wf.stated) + " "; break;
    }
    out += format_formula(wf.formula, wf.vars, pkb.voc) + "\n";
  }
  return out;
}

std::string print_ground_literal(const Vocabulary &voc, const GroundLiteral &l) {
  std::string out = l.neg ? "!" : "";
  const auto &pred = voc.pred(l.pred);
  out += pred.name;
  if (!l.consts.empty()) {
    out += "(";
    for (size_t i = 0; i < l.consts.size(); ++i) {
      if (i) out += ",";
      out += voc.const_name(pred.arg_sorts[i], l.consts[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace liftcount
