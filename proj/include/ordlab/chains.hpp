#pragma once

// Saturation-based proof search over sequents.  A goal sequent is decomposed
// branch by branch under a fair round schedule; every branch either closes
// with an axiom (yielding a checkable proof tree) or reaches a full round
// with no progress, in which case the open branch is returned together with
// a valuation read off its negative membership literals that falsifies it.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "proof.hpp"

namespace ordlab {

using Valuation = std::map<std::string, std::set<std::uint64_t>>;

inline SetRef ref_from_key(const std::string& k) {
  if (k.size() >= 2 && k[0] == 'C' &&
      k.find_first_not_of("0123456789", 1) == std::string::npos)
    return set_const(std::stoull(k.substr(1)));
  return set_var(k);
}

namespace detail {

inline bool ground_mod_holes(const NTermPtr& t) {
  std::set<std::string> bound, vars;
  term_vars(t, bound, vars);
  return vars.empty();
}

// Closure test used during search: the value-based axioms on placeholder-free
// atoms, plus syntactic identities that survive every placeholder value.
inline std::optional<RuleType> chain_closure(const Sequent& seq, const ConstMap& constants) {
  if (auto r = is_axiomatic(seq, constants)) return r;
  for (const auto& f : seq)
    if (f->k == FK::Eq && ground_mod_holes(f->s) && ground_mod_holes(f->t) &&
        print_nterm(f->s) == print_nterm(f->t))
      return RuleType::Ax1;
  for (const auto& f : seq) {
    if (f->k != FK::In || f->K.is_const || !ground_mod_holes(f->s)) continue;
    for (const auto& g : seq)
      if (g->k == FK::NotIn && !g->K.is_const && g->K.var == f->K.var &&
          ground_mod_holes(g->s) && print_nterm(g->s) == print_nterm(f->s))
        return RuleType::Ax5;
  }
  return std::nullopt;
}

inline FormulaPtr fill_all_holes(FormulaPtr f, std::uint64_t n) {
  for (auto h : formula_holes(f)) f = subst_hole(f, h, nt_num(n));
  return f;
}

}  // namespace detail

// Sets named by the branch's negative membership literals; placeholder-bearing
// literals are replayed at the numerals 0..replay_bound.
inline Valuation extract_valuation(const Sequent& path, std::uint64_t replay_bound) {
  Valuation val;
  auto scan = [&](const FormulaPtr& f) {
    if (f->k == FK::NotIn && detail::closed_nterm(f->s))
      val[set_key(f->K)].insert(eval_term(f->s));
  };
  for (const auto& f : path) {
    if (formula_holes(f).empty()) {
      scan(f);
    } else {
      for (std::uint64_t n = 0; n <= replay_bound; ++n) scan(detail::fill_all_holes(f, n));
    }
  }
  return val;
}

// Truth under a valuation: membership in declared constants is fixed, other
// sets come from the valuation (absent means empty), number quantifiers range
// over 0..bound and set quantifiers over the named sets.
inline bool eval_under(const FormulaPtr& f, const Valuation& val, const ConstMap& constants,
                       std::uint64_t bound) {
  switch (f->k) {
    case FK::Eq: return eval_term(f->s) == eval_term(f->t);
    case FK::Neq: return eval_term(f->s) != eval_term(f->t);
    case FK::In:
    case FK::NotIn: {
      std::uint64_t v = eval_term(f->s);
      bool in;
      if (f->K.is_const && constants.count(f->K.cidx)) {
        in = constants.at(f->K.cidx).count(v) > 0;
      } else {
        auto it = val.find(set_key(f->K));
        in = it != val.end() && it->second.count(v) > 0;
      }
      return f->k == FK::In ? in : !in;
    }
    case FK::And: return eval_under(f->a, val, constants, bound) &&
                         eval_under(f->b, val, constants, bound);
    case FK::Or: return eval_under(f->a, val, constants, bound) ||
                        eval_under(f->b, val, constants, bound);
    case FK::All1: {
      for (std::uint64_t n = 0; n <= bound; ++n)
        if (!eval_under(subst_num(f->a, f->bvar, nt_num(n)), val, constants, bound)) return false;
      return true;
    }
    case FK::Ex1: {
      for (std::uint64_t n = 0; n <= bound; ++n)
        if (eval_under(subst_num(f->a, f->bvar, nt_num(n)), val, constants, bound)) return true;
      return false;
    }
    case FK::All2:
    case FK::Ex2: {
      std::set<std::string> domain;
      for (const auto& [k, _] : val) domain.insert(k);
      for (const auto& [idx, _] : constants) domain.insert("C" + std::to_string(idx));
      for (const auto& k : domain) {
        bool v = eval_under(subst_set(f->a, f->bvar, ref_from_key(k)), val, constants, bound);
        if (f->k == FK::Ex2 && v) return true;
        if (f->k == FK::All2 && !v) return false;
      }
      return f->k == FK::All2;
    }
  }
  throw DomainError("unknown formula kind");
}

enum class ProveOutcome { Proved, Refuted, OutOfFuel };

struct ProveResult {
  ProveOutcome outcome = ProveOutcome::OutOfFuel;
  PreProof proof;                      // Proved
  std::vector<Violation> violations;   // nonempty iff the assembled proof failed its recheck
  Sequent branch;                      // Refuted: the saturated branch
  Valuation valuation;                 // Refuted
  std::uint64_t rounds = 0;
  std::uint64_t eval_bound = 2;
};

namespace detail {

struct Branch {
  std::vector<FormulaPtr> items;
  std::set<std::string> present;
  std::set<std::string> expanded;                       // one-shot connectives done
  std::map<std::string, std::uint64_t> ex1_next;        // next numeral witness
  std::map<std::string, std::set<std::string>> ex2_done;  // set symbols used
  std::uint64_t round = 0;
  std::size_t idx = 0;
  std::size_t round_size = 0;
  bool changed = false;
  std::uint64_t steps = 0;
  std::uint64_t attach = 0;
  bool has_attach = false;

  bool add(const FormulaPtr& f) {
    std::string key = print_formula(f);
    if (!present.insert(key).second) return false;
    items.push_back(f);
    changed = true;
    return true;
  }
};

}  // namespace detail

namespace detail {

inline void collect_consts(const FormulaPtr& f, std::set<std::uint64_t>& out) {
  switch (f->k) {
    case FK::Eq:
    case FK::Neq: return;
    case FK::In:
    case FK::NotIn:
      if (f->K.is_const) out.insert(f->K.cidx);
      return;
    case FK::And:
    case FK::Or:
      collect_consts(f->a, out);
      collect_consts(f->b, out);
      return;
    default: collect_consts(f->a, out); return;
  }
}

}  // namespace detail

inline ProveResult prove_sequent(const Sequent& goal, const ConstMap& constants,
                                 std::uint64_t fuel = 400, std::uint64_t check_fuel = 3) {
  for (const auto& f : goal) {
    if (!formula_holes(f).empty())
      throw DomainError("goal formulas must not contain placeholders");
    if (!fv1(f).empty())
      throw DomainError("goal formulas must not have free number variables: " +
                        print_formula(f));
    std::set<std::uint64_t> cs;
    detail::collect_consts(f, cs);
    for (auto c : cs)
      if (!constants.count(c))
        throw DomainError("constant C" + std::to_string(c) + " is not declared");
  }

  ProveResult res;
  std::map<std::uint64_t, PNode> nodes;
  std::uint64_t next_id = 0;
  bool used_schematic = false;

  auto new_node = [&](detail::Branch& b, RuleType rt, Sequent seq, RuleApp rule,
                      bool leaf) -> std::uint64_t {
    std::uint64_t id = next_id++;
    PNode v;
    v.id = id;
    v.sequent = std::move(seq);
    rule.type = rt;
    v.rule = std::move(rule);
    if (b.has_attach) nodes.at(b.attach).children.push_back(id);
    nodes.emplace(id, std::move(v));
    if (!leaf) {
      b.attach = id;
      b.has_attach = true;
    }
    return id;
  };

  detail::Branch start;
  for (const auto& f : goal) start.add(f);
  start.changed = false;
  start.round_size = start.items.size();
  std::vector<detail::Branch> stack{std::move(start)};

  while (!stack.empty()) {
    detail::Branch b = std::move(stack.back());
    stack.pop_back();
    bool branch_done = false;
    while (!branch_done) {
      Sequent cur = b.items;
      if (auto ax = detail::chain_closure(cur, constants)) {
        new_node(b, *ax, cur, {}, true);
        branch_done = true;
        break;
      }
      if (b.idx >= b.round_size) {
        if (!b.changed) {
          res.branch = cur;
          res.rounds = b.round;
          res.eval_bound = b.round + 2;
          res.valuation = extract_valuation(cur, res.eval_bound);
          // A saturated branch only refutes the goal if everything on it
          // really evaluates false under the extracted sets; saturation alone
          // can miss value-level truths such as S(#0) != 0.
          bool falsified = true;
          try {
            for (const auto& f : cur) {
              if (formula_holes(f).empty()) {
                if (eval_under(f, res.valuation, constants, res.eval_bound)) {
                  falsified = false;
                  break;
                }
              } else {
                for (std::uint64_t n = 0; n <= res.eval_bound && falsified; ++n)
                  if (eval_under(detail::fill_all_holes(f, n), res.valuation,
                                 constants, res.eval_bound))
                    falsified = false;
                if (!falsified) break;
              }
            }
          } catch (const EvalError&) {
            falsified = false;
          }
          res.outcome = falsified ? ProveOutcome::Refuted : ProveOutcome::OutOfFuel;
          return res;
        }
        b.round++;
        b.idx = 0;
        b.round_size = b.items.size();
        b.changed = false;
        continue;
      }
      if (b.steps >= fuel) {
        res.outcome = ProveOutcome::OutOfFuel;
        res.rounds = b.round;
        return res;
      }
      FormulaPtr f = b.items[b.idx++];
      b.steps++;
      std::string key = print_formula(f);

      switch (f->k) {
        case FK::Eq:
        case FK::Neq:
        case FK::In:
        case FK::NotIn: {
          new_node(b, RuleType::Rep, cur, {}, false);
          break;
        }
        case FK::And: {
          if (b.expanded.count(key)) break;
          b.expanded.insert(key);
          RuleApp r;
          r.principal = f;
          new_node(b, RuleType::AndInt, cur, std::move(r), false);
          detail::Branch right = b;
          b.add(f->a);
          right.add(f->b);
          right.changed = true;
          b.changed = true;
          stack.push_back(std::move(right));
          break;
        }
        case FK::Or: {
          if (b.expanded.count(key)) break;
          b.expanded.insert(key);
          if (b.present.count(print_formula(f->a)) && b.present.count(print_formula(f->b)))
            break;
          RuleApp r;
          r.principal = f;
          new_node(b, RuleType::OrInt, cur, std::move(r), false);
          b.add(f->a);
          b.add(f->b);
          break;
        }
        case FK::All1: {
          if (b.expanded.count(key)) break;
          b.expanded.insert(key);
          used_schematic = true;
          RuleApp r;
          r.principal = f;
          std::uint64_t id = new_node(b, RuleType::All1Int, cur, std::move(r), false);
          b.add(subst_num(f->a, f->bvar, nt_hole(id)));
          b.changed = true;
          break;
        }
        case FK::Ex1: {
          std::uint64_t n = b.ex1_next[key];
          if (n > b.round) break;
          b.ex1_next[key] = n + 1;
          FormulaPtr inst = subst_num(f->a, f->bvar, nt_num(n));
          if (b.present.count(print_formula(inst))) break;
          RuleApp r;
          r.principal = f;
          r.witness = nt_num(n);
          new_node(b, RuleType::Ex1Int, cur, std::move(r), false);
          b.add(inst);
          break;
        }
        case FK::All2: {
          if (b.expanded.count(key)) break;
          b.expanded.insert(key);
          std::set<std::string> taken;
          for (const auto& g : b.items)
            for (const auto& x : fv2(g)) taken.insert(x);
          std::string name = "Y" + std::to_string(next_id);
          while (taken.count(name)) name += "x";
          RuleApp r;
          r.principal = f;
          r.var = name;
          new_node(b, RuleType::All2Int, cur, std::move(r), false);
          b.add(subst_set(f->a, f->bvar, set_var(name)));
          b.changed = true;
          break;
        }
        case FK::Ex2: {
          std::set<std::string> symbols;
          for (const auto& [idx, _] : constants) symbols.insert("C" + std::to_string(idx));
          for (const auto& g : b.items)
            for (const auto& x : fv2(g)) symbols.insert(x);
          std::string pick;
          for (const auto& s : symbols)
            if (!b.ex2_done[key].count(s)) {
              pick = s;
              break;
            }
          if (pick.empty()) break;
          b.ex2_done[key].insert(pick);
          SetRef ref = ref_from_key(pick);
          FormulaPtr inst = subst_set(f->a, f->bvar, ref);
          if (b.present.count(print_formula(inst))) break;
          RuleApp r;
          r.principal = f;
          if (ref.is_const) {
            r.constant = ref.cidx;
            new_node(b, RuleType::Ex2IntC, cur, std::move(r), false);
          } else {
            r.var = ref.var;
            new_node(b, RuleType::Ex2IntV, cur, std::move(r), false);
          }
          b.add(inst);
          break;
        }
      }
    }
  }

  PreProof p;
  p.root = 0;
  p.schematic = used_schematic;
  p.nodes = std::move(nodes);
  p.constants = constants;
  res.violations = check_preproof(p, check_fuel);
  res.proof = std::move(p);
  res.outcome = res.violations.empty() ? ProveOutcome::Proved : ProveOutcome::OutOfFuel;
  return res;
}

// Problem files: the goal carries the sequent to prove; an optional fragment
// merges extra constants and formulas searched alongside it.
struct ChainProblem {
  Sequent sequent;
  ConstMap constants;
};

inline ChainProblem problem_from_json(const Json& goal, const Json& frag = Json()) {
  if (!goal.is_object() || !goal.contains("sequent") || !goal["sequent"].is_array())
    throw ParseError("goal needs a sequent array");
  ChainProblem p;
  for (const auto& s : goal["sequent"]) {
    if (!s.is_string()) throw ParseError("sequent entries are formula strings");
    p.sequent.push_back(parse_formula(s.get<std::string>()));
  }
  if (goal.contains("constants")) p.constants = constants_from_json(goal["constants"]);
  if (!frag.is_null()) {
    if (!frag.is_object()) throw ParseError("fragment must be a JSON object");
    if (frag.contains("formulas")) {
      if (!frag["formulas"].is_array()) throw ParseError("fragment formulas must be an array");
      for (const auto& s : frag["formulas"]) {
        if (!s.is_string()) throw ParseError("fragment formulas are strings");
        p.sequent.push_back(parse_formula(s.get<std::string>()));
      }
    }
    if (frag.contains("constants")) {
      for (auto& [idx, ext] : constants_from_json(frag["constants"]))
        p.constants[idx].insert(ext.begin(), ext.end());
    }
  }
  return p;
}

}  // namespace ordlab
