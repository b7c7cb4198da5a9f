#pragma once

// First-order arithmetic terms and quantified set/number formulas in negation
// normal form, with a canonical printed syntax used as the identity of
// sequent members.

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ordlab {

enum class TermK { Num, Succ, Add, Mul, Var, Hole };

struct NTerm;
using NTermPtr = std::shared_ptr<const NTerm>;

struct NTerm {
  TermK k;
  std::uint64_t num = 0;   // Num
  std::string var;         // Var
  std::uint64_t hole = 0;  // Hole
  NTermPtr a, b;           // Succ(a); Add/Mul(a,b)
};

inline NTermPtr nt_num(std::uint64_t n) {
  auto t = std::make_shared<NTerm>();
  t->k = TermK::Num;
  t->num = n;
  return t;
}

inline NTermPtr nt_succ(NTermPtr a) {
  auto t = std::make_shared<NTerm>();
  t->k = TermK::Succ;
  t->a = std::move(a);
  return t;
}

inline NTermPtr nt_add(NTermPtr a, NTermPtr b) {
  auto t = std::make_shared<NTerm>();
  t->k = TermK::Add;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

inline NTermPtr nt_mul(NTermPtr a, NTermPtr b) {
  auto t = std::make_shared<NTerm>();
  t->k = TermK::Mul;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

inline NTermPtr nt_var(std::string name) {
  auto t = std::make_shared<NTerm>();
  t->k = TermK::Var;
  t->var = std::move(name);
  return t;
}

inline NTermPtr nt_hole(std::uint64_t id) {
  auto t = std::make_shared<NTerm>();
  t->k = TermK::Hole;
  t->hole = id;
  return t;
}

// Either a declared constant (C0, C1, ...) or a set variable.
struct SetRef {
  bool is_const = false;
  std::uint64_t cidx = 0;
  std::string var;
};

inline SetRef set_const(std::uint64_t i) { return SetRef{true, i, {}}; }
inline SetRef set_var(std::string name) { return SetRef{false, 0, std::move(name)}; }
inline bool setref_eq(const SetRef& a, const SetRef& b) {
  return a.is_const == b.is_const && (a.is_const ? a.cidx == b.cidx : a.var == b.var);
}
inline std::string set_key(const SetRef& r) {
  return r.is_const ? "C" + std::to_string(r.cidx) : r.var;
}

enum class FK { Eq, Neq, In, NotIn, And, Or, All1, Ex1, All2, Ex2 };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FK k;
  NTermPtr s, t;     // Eq/Neq: s,t; In/NotIn: s
  SetRef K;          // In/NotIn
  std::string bvar;  // quantifiers
  FormulaPtr a, b;   // And/Or: a,b; quantifiers: a
};

inline FormulaPtr f_eq(NTermPtr s, NTermPtr t) {
  auto f = std::make_shared<Formula>();
  f->k = FK::Eq;
  f->s = std::move(s);
  f->t = std::move(t);
  return f;
}

inline FormulaPtr f_neq(NTermPtr s, NTermPtr t) {
  auto f = std::make_shared<Formula>();
  f->k = FK::Neq;
  f->s = std::move(s);
  f->t = std::move(t);
  return f;
}

inline FormulaPtr f_in(NTermPtr s, SetRef K) {
  auto f = std::make_shared<Formula>();
  f->k = FK::In;
  f->s = std::move(s);
  f->K = std::move(K);
  return f;
}

inline FormulaPtr f_notin(NTermPtr s, SetRef K) {
  auto f = std::make_shared<Formula>();
  f->k = FK::NotIn;
  f->s = std::move(s);
  f->K = std::move(K);
  return f;
}

inline FormulaPtr f_bin(FK k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->k = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return f_bin(FK::And, std::move(a), std::move(b));
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return f_bin(FK::Or, std::move(a), std::move(b));
}

inline FormulaPtr f_quant(FK k, std::string v, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->k = k;
  f->bvar = std::move(v);
  f->a = std::move(body);
  return f;
}

// De Morgan dual; formulas stay in negation normal form.
inline FormulaPtr negate(const FormulaPtr& f) {
  switch (f->k) {
    case FK::Eq: return f_neq(f->s, f->t);
    case FK::Neq: return f_eq(f->s, f->t);
    case FK::In: return f_notin(f->s, f->K);
    case FK::NotIn: return f_in(f->s, f->K);
    case FK::And: return f_or(negate(f->a), negate(f->b));
    case FK::Or: return f_and(negate(f->a), negate(f->b));
    case FK::All1: return f_quant(FK::Ex1, f->bvar, negate(f->a));
    case FK::Ex1: return f_quant(FK::All1, f->bvar, negate(f->a));
    case FK::All2: return f_quant(FK::Ex2, f->bvar, negate(f->a));
    case FK::Ex2: return f_quant(FK::All2, f->bvar, negate(f->a));
  }
  throw DomainError("unknown formula kind");
}

inline NTermPtr subst_num_term(const NTermPtr& t, const std::string& var, const NTermPtr& val) {
  switch (t->k) {
    case TermK::Num:
    case TermK::Hole: return t;
    case TermK::Var: return t->var == var ? val : t;
    case TermK::Succ: return nt_succ(subst_num_term(t->a, var, val));
    case TermK::Add:
      return nt_add(subst_num_term(t->a, var, val), subst_num_term(t->b, var, val));
    case TermK::Mul:
      return nt_mul(subst_num_term(t->a, var, val), subst_num_term(t->b, var, val));
  }
  throw DomainError("unknown term kind");
}

inline FormulaPtr subst_num(const FormulaPtr& f, const std::string& var, const NTermPtr& val) {
  switch (f->k) {
    case FK::Eq: return f_eq(subst_num_term(f->s, var, val), subst_num_term(f->t, var, val));
    case FK::Neq: return f_neq(subst_num_term(f->s, var, val), subst_num_term(f->t, var, val));
    case FK::In: return f_in(subst_num_term(f->s, var, val), f->K);
    case FK::NotIn: return f_notin(subst_num_term(f->s, var, val), f->K);
    case FK::And:
    case FK::Or: return f_bin(f->k, subst_num(f->a, var, val), subst_num(f->b, var, val));
    case FK::All1:
    case FK::Ex1:
      if (f->bvar == var) return f;  // shadowed
      return f_quant(f->k, f->bvar, subst_num(f->a, var, val));
    case FK::All2:
    case FK::Ex2: return f_quant(f->k, f->bvar, subst_num(f->a, var, val));
  }
  throw DomainError("unknown formula kind");
}

inline NTermPtr subst_hole_term(const NTermPtr& t, std::uint64_t id, const NTermPtr& val) {
  switch (t->k) {
    case TermK::Num:
    case TermK::Var: return t;
    case TermK::Hole: return t->hole == id ? val : t;
    case TermK::Succ: return nt_succ(subst_hole_term(t->a, id, val));
    case TermK::Add:
      return nt_add(subst_hole_term(t->a, id, val), subst_hole_term(t->b, id, val));
    case TermK::Mul:
      return nt_mul(subst_hole_term(t->a, id, val), subst_hole_term(t->b, id, val));
  }
  throw DomainError("unknown term kind");
}

inline FormulaPtr subst_hole(const FormulaPtr& f, std::uint64_t id, const NTermPtr& val) {
  switch (f->k) {
    case FK::Eq: return f_eq(subst_hole_term(f->s, id, val), subst_hole_term(f->t, id, val));
    case FK::Neq: return f_neq(subst_hole_term(f->s, id, val), subst_hole_term(f->t, id, val));
    case FK::In: return f_in(subst_hole_term(f->s, id, val), f->K);
    case FK::NotIn: return f_notin(subst_hole_term(f->s, id, val), f->K);
    case FK::And:
    case FK::Or: return f_bin(f->k, subst_hole(f->a, id, val), subst_hole(f->b, id, val));
    case FK::All1:
    case FK::Ex1:
    case FK::All2:
    case FK::Ex2: return f_quant(f->k, f->bvar, subst_hole(f->a, id, val));
  }
  throw DomainError("unknown formula kind");
}

inline FormulaPtr subst_set(const FormulaPtr& f, const std::string& var, const SetRef& K) {
  switch (f->k) {
    case FK::Eq:
    case FK::Neq: return f;
    case FK::In:
    case FK::NotIn: {
      if (!f->K.is_const && f->K.var == var) {
        auto g = std::make_shared<Formula>(*f);
        g->K = K;
        return g;
      }
      return f;
    }
    case FK::And:
    case FK::Or: return f_bin(f->k, subst_set(f->a, var, K), subst_set(f->b, var, K));
    case FK::All1:
    case FK::Ex1: return f_quant(f->k, f->bvar, subst_set(f->a, var, K));
    case FK::All2:
    case FK::Ex2:
      if (f->bvar == var) return f;  // shadowed
      return f_quant(f->k, f->bvar, subst_set(f->a, var, K));
  }
  throw DomainError("unknown formula kind");
}

namespace detail {

inline void term_vars(const NTermPtr& t, const std::set<std::string>& bound,
                      std::set<std::string>& out) {
  switch (t->k) {
    case TermK::Num:
    case TermK::Hole: return;
    case TermK::Var:
      if (!bound.count(t->var)) out.insert(t->var);
      return;
    case TermK::Succ: term_vars(t->a, bound, out); return;
    case TermK::Add:
    case TermK::Mul:
      term_vars(t->a, bound, out);
      term_vars(t->b, bound, out);
      return;
  }
}

inline void term_holes(const NTermPtr& t, std::set<std::uint64_t>& out) {
  switch (t->k) {
    case TermK::Num:
    case TermK::Var: return;
    case TermK::Hole: out.insert(t->hole); return;
    case TermK::Succ: term_holes(t->a, out); return;
    case TermK::Add:
    case TermK::Mul:
      term_holes(t->a, out);
      term_holes(t->b, out);
      return;
  }
}

inline void fv1_go(const FormulaPtr& f, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  switch (f->k) {
    case FK::Eq:
    case FK::Neq:
      term_vars(f->s, bound, out);
      term_vars(f->t, bound, out);
      return;
    case FK::In:
    case FK::NotIn: term_vars(f->s, bound, out); return;
    case FK::And:
    case FK::Or:
      fv1_go(f->a, bound, out);
      fv1_go(f->b, bound, out);
      return;
    case FK::All1:
    case FK::Ex1: {
      bool fresh = bound.insert(f->bvar).second;
      fv1_go(f->a, bound, out);
      if (fresh) bound.erase(f->bvar);
      return;
    }
    case FK::All2:
    case FK::Ex2: fv1_go(f->a, bound, out); return;
  }
}

inline void fv2_go(const FormulaPtr& f, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  switch (f->k) {
    case FK::Eq:
    case FK::Neq: return;
    case FK::In:
    case FK::NotIn:
      if (!f->K.is_const && !bound.count(f->K.var)) out.insert(f->K.var);
      return;
    case FK::And:
    case FK::Or:
      fv2_go(f->a, bound, out);
      fv2_go(f->b, bound, out);
      return;
    case FK::All1:
    case FK::Ex1: fv2_go(f->a, bound, out); return;
    case FK::All2:
    case FK::Ex2: {
      bool fresh = bound.insert(f->bvar).second;
      fv2_go(f->a, bound, out);
      if (fresh) bound.erase(f->bvar);
      return;
    }
  }
}

}  // namespace detail

inline std::set<std::string> fv1(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  detail::fv1_go(f, bound, out);
  return out;
}

inline std::set<std::string> fv2(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  detail::fv2_go(f, bound, out);
  return out;
}

inline std::set<std::uint64_t> formula_holes(const FormulaPtr& f) {
  std::set<std::uint64_t> out;
  switch (f->k) {
    case FK::Eq:
    case FK::Neq:
      detail::term_holes(f->s, out);
      detail::term_holes(f->t, out);
      break;
    case FK::In:
    case FK::NotIn: detail::term_holes(f->s, out); break;
    case FK::And:
    case FK::Or: {
      auto x = formula_holes(f->a);
      auto y = formula_holes(f->b);
      out.insert(x.begin(), x.end());
      out.insert(y.begin(), y.end());
      break;
    }
    case FK::All1:
    case FK::Ex1:
    case FK::All2:
    case FK::Ex2: out = formula_holes(f->a); break;
  }
  return out;
}

inline std::uint64_t eval_term(const NTermPtr& t) {
  switch (t->k) {
    case TermK::Num: return t->num;
    case TermK::Var: throw EvalError("cannot evaluate open term (variable " + t->var + ")");
    case TermK::Hole:
      throw EvalError("cannot evaluate term with placeholder #" + std::to_string(t->hole));
    case TermK::Succ: {
      std::uint64_t v = eval_term(t->a);
      if (v == ~0ull) throw EvalError("numeric overflow");
      return v + 1;
    }
    case TermK::Add: {
      std::uint64_t x = eval_term(t->a), y = eval_term(t->b), r;
      if (__builtin_add_overflow(x, y, &r)) throw EvalError("numeric overflow");
      return r;
    }
    case TermK::Mul: {
      std::uint64_t x = eval_term(t->a), y = eval_term(t->b), r;
      if (__builtin_mul_overflow(x, y, &r)) throw EvalError("numeric overflow");
      return r;
    }
  }
  throw DomainError("unknown term kind");
}

inline std::string print_nterm(const NTermPtr& t) {
  switch (t->k) {
    case TermK::Num: return std::to_string(t->num);
    case TermK::Var: return t->var;
    case TermK::Hole: return "#" + std::to_string(t->hole);
    case TermK::Succ: return "S(" + print_nterm(t->a) + ")";
    case TermK::Add: return "(" + print_nterm(t->a) + "+" + print_nterm(t->b) + ")";
    case TermK::Mul: return "(" + print_nterm(t->a) + "*" + print_nterm(t->b) + ")";
  }
  return "?";
}

inline std::string print_formula(const FormulaPtr& f) {
  switch (f->k) {
    case FK::Eq: return print_nterm(f->s) + " = " + print_nterm(f->t);
    case FK::Neq: return print_nterm(f->s) + " != " + print_nterm(f->t);
    case FK::In: return print_nterm(f->s) + " in " + set_key(f->K);
    case FK::NotIn: return print_nterm(f->s) + " notin " + set_key(f->K);
    case FK::And: return "(" + print_formula(f->a) + " & " + print_formula(f->b) + ")";
    case FK::Or: return "(" + print_formula(f->a) + " | " + print_formula(f->b) + ")";
    case FK::All1:
    case FK::All2: return "A " + f->bvar + ". " + print_formula(f->a);
    case FK::Ex1:
    case FK::Ex2: return "E " + f->bvar + ". " + print_formula(f->a);
  }
  return "?";
}

namespace detail {

struct FormulaParser {
  const std::string& src;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(pos) + " in: " + src);
  }

  void skip() {
    while (pos < src.size() && std::isspace((unsigned char)src[pos])) ++pos;
  }

  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool peek(char c) {
    skip();
    return pos < src.size() && src[pos] == c;
  }

  std::string ident() {
    skip();
    if (pos >= src.size() || !std::isalpha((unsigned char)src[pos])) return {};
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum((unsigned char)src[pos]) || src[pos] == '_'))
      ++pos;
    return src.substr(start, pos - start);
  }

  std::uint64_t number() {
    skip();
    if (pos >= src.size() || !std::isdigit((unsigned char)src[pos])) fail("expected a number");
    std::uint64_t n = 0;
    while (pos < src.size() && std::isdigit((unsigned char)src[pos])) {
      n = n * 10 + (std::uint64_t)(src[pos] - '0');
      ++pos;
    }
    return n;
  }

  static bool is_set_name(const std::string& id) {
    return !id.empty() && std::isupper((unsigned char)id[0]);
  }

  static std::optional<std::uint64_t> const_index(const std::string& id) {
    if (id.size() < 2 || id[0] != 'C') return std::nullopt;
    for (std::size_t i = 1; i < id.size(); ++i)
      if (!std::isdigit((unsigned char)id[i])) return std::nullopt;
    return std::stoull(id.substr(1));
  }

  NTermPtr term_atom() {
    skip();
    if (pos >= src.size()) fail("expected a term");
    char c = src[pos];
    if (std::isdigit((unsigned char)c)) return nt_num(number());
    if (c == '#') {
      ++pos;
      return nt_hole(number());
    }
    if (c == '(') {
      ++pos;
      auto t = term();
      if (!eat(')')) fail("expected ')'");
      return t;
    }
    std::string id = ident();
    if (id.empty()) fail("expected a term");
    if (id == "S") {
      if (!eat('(')) fail("expected '(' after S");
      auto t = term();
      if (!eat(')')) fail("expected ')'");
      return nt_succ(t);
    }
    if (is_set_name(id)) fail("set name used as a number term: " + id);
    return nt_var(id);
  }

  NTermPtr prod() {
    auto t = term_atom();
    while (eat('*')) t = nt_mul(t, term_atom());
    return t;
  }

  NTermPtr term() {
    auto t = prod();
    while (true) {
      skip();
      if (pos < src.size() && src[pos] == '+') {
        ++pos;
        t = nt_add(t, prod());
        continue;
      }
      break;
    }
    return t;
  }

  SetRef setref() {
    std::string id = ident();
    if (!is_set_name(id)) fail("expected a set name");
    if (auto ci = const_index(id)) return set_const(*ci);
    return set_var(id);
  }

  FormulaPtr atom_from(NTermPtr lhs) {
    skip();
    if (pos < src.size() && src[pos] == '=') {
      ++pos;
      return f_eq(std::move(lhs), term());
    }
    if (pos + 1 < src.size() && src[pos] == '!' && src[pos + 1] == '=') {
      pos += 2;
      return f_neq(std::move(lhs), term());
    }
    std::size_t save = pos;
    std::string kw = ident();
    if (kw == "in") return f_in(std::move(lhs), setref());
    if (kw == "notin") return f_notin(std::move(lhs), setref());
    pos = save;
    fail("expected =, !=, in or notin");
  }

  FormulaPtr primary() {
    skip();
    if (pos >= src.size()) fail("expected a formula");
    if (src[pos] == '(') {
      std::size_t save = pos;
      ++pos;
      try {
        auto f = formula();
        if (!eat(')')) fail("expected ')'");
        return f;
      } catch (const ParseError&) {
        pos = save;  // parenthesized term starting an atom
      }
      return atom_from(term_atom());
    }
    std::size_t save = pos;
    std::string id = ident();
    if ((id == "A" || id == "E") && quant_follows()) {
      std::string v = ident();
      if (!eat('.')) fail("expected '.' after quantified variable");
      auto body = formula();
      bool second_order = is_set_name(v);
      FK k = id == "A" ? (second_order ? FK::All2 : FK::All1)
                       : (second_order ? FK::Ex2 : FK::Ex1);
      return f_quant(k, v, body);
    }
    pos = save;
    return atom_from(term());
  }

  bool quant_follows() {
    std::size_t save = pos;
    std::string v = ident();
    bool ok = !v.empty() && eat('.');
    pos = save;
    return ok;
  }

  FormulaPtr conj() {
    auto f = primary();
    while (eat('&')) f = f_and(f, primary());
    return f;
  }

  FormulaPtr formula() {
    auto f = conj();
    while (eat('|')) f = f_or(f, conj());
    return f;
  }
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& s) {
  detail::FormulaParser p{s};
  auto f = p.formula();
  p.skip();
  if (p.pos != s.size()) throw ParseError("trailing input after formula: " + s);
  return f;
}

// Sequents are finite sets of formulas; two sequents are the same iff their
// canonical prints coincide as sets.
using Sequent = std::vector<FormulaPtr>;

inline std::vector<std::string> sequent_keys(const Sequent& fs) {
  std::vector<std::string> ks;
  ks.reserve(fs.size());
  for (const auto& f : fs) ks.push_back(print_formula(f));
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

inline bool same_sequent(const Sequent& a, const Sequent& b) {
  return sequent_keys(a) == sequent_keys(b);
}

inline bool sequent_contains(const Sequent& seq, const FormulaPtr& f) {
  std::string key = print_formula(f);
  for (const auto& g : seq)
    if (print_formula(g) == key) return true;
  return false;
}

inline bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
  return print_formula(a) == print_formula(b);
}

// All formulas of seq except (one copy of) f, by canonical identity.
inline Sequent sequent_minus(const Sequent& seq, const FormulaPtr& f) {
  std::string key = print_formula(f);
  Sequent out;
  for (const auto& g : seq)
    if (print_formula(g) != key) out.push_back(g);
  return out;
}

inline Sequent sequent_plus(const Sequent& seq, const FormulaPtr& f) {
  Sequent out = seq;
  if (!sequent_contains(out, f)) out.push_back(f);
  return out;
}

}  // namespace ordlab
