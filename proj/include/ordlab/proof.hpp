#pragma once

// Proof trees over sequents of formulas, with a local rule checker.  Finite
// proofs are ordinary trees; schematic proofs may apply the numeral rule
// whose single child is a template carrying a placeholder term that the
// checker instantiates with sample numerals.  Ranks of proof trees are
// ordinal terms: a finite tree ranks as its node count, a template branch
// as its rank times omega.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "formula.hpp"
#include "notation.hpp"

namespace ordlab {

enum class RuleType {
  Ax1,      // true closed equation
  Ax2,      // true closed inequation
  Ax3,      // closed membership in a declared constant
  Ax4,      // closed non-membership in a declared constant
  Ax5,      // s in X and t notin X with equal closed values
  AndInt,
  OrInt,
  All1Int,  // numeral rule (schematic mode only)
  Ex1Int,
  All2Int,  // eigenvariable rule
  Ex2IntC,  // witness is a declared constant
  Ex2IntV,  // witness is a set variable
  Cut,
  Rep,
};

inline const char* rule_name(RuleType r) {
  switch (r) {
    case RuleType::Ax1: return "Ax1";
    case RuleType::Ax2: return "Ax2";
    case RuleType::Ax3: return "Ax3";
    case RuleType::Ax4: return "Ax4";
    case RuleType::Ax5: return "Ax5";
    case RuleType::AndInt: return "AndInt";
    case RuleType::OrInt: return "OrInt";
    case RuleType::All1Int: return "All1Int";
    case RuleType::Ex1Int: return "Ex1Int";
    case RuleType::All2Int: return "All2Int";
    case RuleType::Ex2IntC: return "Ex2IntC";
    case RuleType::Ex2IntV: return "Ex2IntV";
    case RuleType::Cut: return "Cut";
    case RuleType::Rep: return "Rep";
  }
  return "?";
}

inline std::optional<RuleType> rule_from_name(const std::string& s) {
  static const std::map<std::string, RuleType> table = {
      {"Ax1", RuleType::Ax1},         {"Ax2", RuleType::Ax2},
      {"Ax3", RuleType::Ax3},         {"Ax4", RuleType::Ax4},
      {"Ax5", RuleType::Ax5},         {"AndInt", RuleType::AndInt},
      {"OrInt", RuleType::OrInt},     {"All1Int", RuleType::All1Int},
      {"Ex1Int", RuleType::Ex1Int},   {"All2Int", RuleType::All2Int},
      {"Ex2IntC", RuleType::Ex2IntC}, {"Ex2IntV", RuleType::Ex2IntV},
      {"Cut", RuleType::Cut},         {"Rep", RuleType::Rep},
  };
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

struct RuleApp {
  RuleType type = RuleType::Rep;
  FormulaPtr principal;        // AndInt..Ex2IntV
  NTermPtr witness;            // Ex1Int
  std::string var;             // All2Int eigenvariable, Ex2IntV witness
  std::uint64_t constant = 0;  // Ex2IntC
  FormulaPtr cut;              // Cut
};

struct PNode {
  std::uint64_t id = 0;
  Sequent sequent;
  RuleApp rule;
  std::vector<std::uint64_t> children;
};

using ConstMap = std::map<std::uint64_t, std::set<std::uint64_t>>;

struct PreProof {
  std::uint64_t root = 0;
  bool schematic = false;
  std::map<std::uint64_t, PNode> nodes;
  ConstMap constants;
};

struct Violation {
  std::uint64_t node = 0;
  std::string msg;
};

namespace detail {

inline bool closed_nterm(const NTermPtr& t) {
  std::set<std::string> bound, vars;
  term_vars(t, bound, vars);
  std::set<std::uint64_t> holes;
  term_holes(t, holes);
  return vars.empty() && holes.empty();
}

inline bool closed_atom(const FormulaPtr& f) {
  switch (f->k) {
    case FK::Eq:
    case FK::Neq: return closed_nterm(f->s) && closed_nterm(f->t);
    case FK::In:
    case FK::NotIn: return closed_nterm(f->s);
    default: return false;
  }
}

}  // namespace detail

// First axiom (scanning Ax1..Ax5) that closes the sequent, if any.
inline std::optional<RuleType> is_axiomatic(const Sequent& seq, const ConstMap& constants) {
  for (const auto& f : seq)
    if (f->k == FK::Eq && detail::closed_atom(f) && eval_term(f->s) == eval_term(f->t))
      return RuleType::Ax1;
  for (const auto& f : seq)
    if (f->k == FK::Neq && detail::closed_atom(f) && eval_term(f->s) != eval_term(f->t))
      return RuleType::Ax2;
  for (const auto& f : seq)
    if (f->k == FK::In && f->K.is_const && detail::closed_atom(f)) {
      auto it = constants.find(f->K.cidx);
      if (it != constants.end() && it->second.count(eval_term(f->s))) return RuleType::Ax3;
    }
  for (const auto& f : seq)
    if (f->k == FK::NotIn && f->K.is_const && detail::closed_atom(f)) {
      auto it = constants.find(f->K.cidx);
      if (it != constants.end() && !it->second.count(eval_term(f->s))) return RuleType::Ax4;
    }
  for (const auto& f : seq) {
    if (f->k != FK::In || f->K.is_const || !detail::closed_atom(f)) continue;
    for (const auto& g : seq)
      if (g->k == FK::NotIn && !g->K.is_const && g->K.var == f->K.var &&
          detail::closed_atom(g) && eval_term(f->s) == eval_term(g->s))
        return RuleType::Ax5;
  }
  return std::nullopt;
}

namespace detail {

using HoleEnv = std::map<std::uint64_t, std::uint64_t>;

inline FormulaPtr apply_env(FormulaPtr f, const HoleEnv& env) {
  for (const auto& [id, n] : env) f = subst_hole(f, id, nt_num(n));
  return f;
}

inline NTermPtr apply_env(NTermPtr t, const HoleEnv& env) {
  for (const auto& [id, n] : env) t = subst_hole_term(t, id, nt_num(n));
  return t;
}

inline Sequent apply_env(const Sequent& seq, const HoleEnv& env) {
  Sequent out;
  out.reserve(seq.size());
  for (const auto& f : seq) out.push_back(apply_env(f, env));
  return out;
}

// Premise may keep or drop the principal formula of the conclusion.
inline bool premise_matches(const Sequent& premise, const Sequent& conclusion,
                            const FormulaPtr& principal, const Sequent& added) {
  Sequent keep = conclusion;
  Sequent drop = principal ? sequent_minus(conclusion, principal) : conclusion;
  for (const auto& f : added) {
    keep = sequent_plus(keep, f);
    drop = sequent_plus(drop, f);
  }
  return same_sequent(premise, keep) || same_sequent(premise, drop);
}

struct ProofChecker {
  const PreProof& p;
  std::uint64_t fuel;
  std::vector<Violation>& out;

  void flag(std::uint64_t id, std::string msg) { out.push_back({id, std::move(msg)}); }

  bool holes_ok(std::uint64_t id, const Sequent& seq) {
    for (const auto& f : seq)
      if (!formula_holes(f).empty()) {
        flag(id, "placeholder term escapes its template: " + print_formula(f));
        return false;
      }
    return true;
  }

  bool expect_children(const PNode& v, std::size_t n) {
    if (v.children.size() != n) {
      flag(v.id, std::string(rule_name(v.rule.type)) + " takes " + std::to_string(n) +
                     " premise(s), found " + std::to_string(v.children.size()));
      return false;
    }
    return true;
  }

  void check_axiom(const PNode& v, const Sequent& seq) {
    if (!v.children.empty()) {
      flag(v.id, "axiom node must be a leaf");
      return;
    }
    auto ok = [&](bool cond) {
      if (!cond)
        flag(v.id, std::string(rule_name(v.rule.type)) + " does not close this sequent");
    };
    switch (v.rule.type) {
      case RuleType::Ax1: {
        for (const auto& f : seq)
          if (f->k == FK::Eq && closed_atom(f) && eval_term(f->s) == eval_term(f->t)) return;
        ok(false);
        return;
      }
      case RuleType::Ax2: {
        for (const auto& f : seq)
          if (f->k == FK::Neq && closed_atom(f) && eval_term(f->s) != eval_term(f->t)) return;
        ok(false);
        return;
      }
      case RuleType::Ax3: {
        for (const auto& f : seq)
          if (f->k == FK::In && f->K.is_const && closed_atom(f)) {
            auto it = p.constants.find(f->K.cidx);
            if (it != p.constants.end() && it->second.count(eval_term(f->s))) return;
          }
        ok(false);
        return;
      }
      case RuleType::Ax4: {
        for (const auto& f : seq)
          if (f->k == FK::NotIn && f->K.is_const && closed_atom(f)) {
            auto it = p.constants.find(f->K.cidx);
            if (it != p.constants.end() && !it->second.count(eval_term(f->s))) return;
          }
        ok(false);
        return;
      }
      case RuleType::Ax5: {
        for (const auto& f : seq) {
          if (f->k != FK::In || f->K.is_const || !closed_atom(f)) continue;
          for (const auto& g : seq)
            if (g->k == FK::NotIn && !g->K.is_const && g->K.var == f->K.var &&
                closed_atom(g) && eval_term(f->s) == eval_term(g->s))
              return;
        }
        ok(false);
        return;
      }
      default: return;
    }
  }

  // Principal formula of the rule, after placeholder substitution; must be a
  // member of the conclusion with the required shape.
  FormulaPtr principal_of(const PNode& v, const Sequent& seq, const HoleEnv& env, FK shape,
                          const char* what) {
    if (!v.rule.principal) {
      flag(v.id, std::string(rule_name(v.rule.type)) + " needs a principal formula");
      return nullptr;
    }
    FormulaPtr pr = apply_env(v.rule.principal, env);
    if (!formula_holes(pr).empty()) {
      flag(v.id, "placeholder term escapes its template: " + print_formula(pr));
      return nullptr;
    }
    if (pr->k != shape) {
      flag(v.id, std::string("principal formula is not ") + what + ": " + print_formula(pr));
      return nullptr;
    }
    if (!sequent_contains(seq, pr)) {
      flag(v.id, "principal formula missing from conclusion: " + print_formula(pr));
      return nullptr;
    }
    return pr;
  }

  void check_node(std::uint64_t id, const HoleEnv& env) {
    const PNode& v = p.nodes.at(id);
    Sequent seq = apply_env(v.sequent, env);
    if (!holes_ok(id, seq)) return;

    switch (v.rule.type) {
      case RuleType::Ax1:
      case RuleType::Ax2:
      case RuleType::Ax3:
      case RuleType::Ax4:
      case RuleType::Ax5: check_axiom(v, seq); return;

      case RuleType::AndInt: {
        auto pr = principal_of(v, seq, env, FK::And, "a conjunction");
        if (!pr || !expect_children(v, 2)) break;
        Sequent left = apply_env(p.nodes.at(v.children[0]).sequent, env);
        Sequent right = apply_env(p.nodes.at(v.children[1]).sequent, env);
        if (!premise_matches(left, seq, pr, {pr->a}))
          flag(id, "left premise does not add the first conjunct");
        if (!premise_matches(right, seq, pr, {pr->b}))
          flag(id, "right premise does not add the second conjunct");
        break;
      }

      case RuleType::OrInt: {
        auto pr = principal_of(v, seq, env, FK::Or, "a disjunction");
        if (!pr || !expect_children(v, 1)) break;
        Sequent prem = apply_env(p.nodes.at(v.children[0]).sequent, env);
        if (!premise_matches(prem, seq, pr, {pr->a, pr->b}))
          flag(id, "premise does not add both disjuncts");
        break;
      }

      case RuleType::All1Int: {
        if (!p.schematic) flag(id, "numeral rule requires schematic mode");
        auto pr = principal_of(v, seq, env, FK::All1, "a first-order universal");
        if (!expect_children(v, 1)) return;
        if (pr) {
          // The template keeps its own placeholder; substitute only the
          // enclosing environment when matching shapes.
          FormulaPtr inst = subst_num(pr->a, pr->bvar, nt_hole(id));
          Sequent prem = apply_env(p.nodes.at(v.children[0]).sequent, env);
          Sequent keep = sequent_plus(seq, inst);
          Sequent drop = sequent_plus(sequent_minus(seq, pr), inst);
          if (!same_sequent(prem, keep) && !same_sequent(prem, drop))
            flag(id, "template premise does not add the placeholder instance");
        }
        for (std::uint64_t n = 0; n <= fuel; ++n) {
          HoleEnv sub = env;
          sub[id] = n;
          check_node(v.children[0], sub);
        }
        return;
      }

      case RuleType::Ex1Int: {
        auto pr = principal_of(v, seq, env, FK::Ex1, "a first-order existential");
        if (!pr || !expect_children(v, 1)) break;
        if (!v.rule.witness) {
          flag(id, "Ex1Int needs a witness term");
          break;
        }
        NTermPtr w = apply_env(v.rule.witness, env);
        if (!closed_nterm(w)) {
          flag(id, "witness term is not closed: " + print_nterm(w));
          break;
        }
        Sequent prem = apply_env(p.nodes.at(v.children[0]).sequent, env);
        if (!premise_matches(prem, seq, pr, {subst_num(pr->a, pr->bvar, w)}))
          flag(id, "premise does not add the witness instance");
        break;
      }

      case RuleType::All2Int: {
        auto pr = principal_of(v, seq, env, FK::All2, "a second-order universal");
        if (!pr || !expect_children(v, 1)) break;
        if (v.rule.var.empty() || !std::isupper((unsigned char)v.rule.var[0])) {
          flag(id, "All2Int needs an eigenvariable set name");
          break;
        }
        for (const auto& f : seq) {
          if (fv2(f).count(v.rule.var)) {
            flag(id, "eigenvariable " + v.rule.var + " occurs free in the conclusion");
            return;
          }
        }
        Sequent prem = apply_env(p.nodes.at(v.children[0]).sequent, env);
        if (!premise_matches(prem, seq, pr, {subst_set(pr->a, pr->bvar, set_var(v.rule.var))}))
          flag(id, "premise does not add the eigenvariable instance");
        break;
      }

      case RuleType::Ex2IntC: {
        auto pr = principal_of(v, seq, env, FK::Ex2, "a second-order existential");
        if (!pr || !expect_children(v, 1)) break;
        if (!p.constants.count(v.rule.constant)) {
          flag(id, "undeclared constant C" + std::to_string(v.rule.constant));
          break;
        }
        Sequent prem = apply_env(p.nodes.at(v.children[0]).sequent, env);
        if (!premise_matches(prem, seq, pr,
                             {subst_set(pr->a, pr->bvar, set_const(v.rule.constant))}))
          flag(id, "premise does not add the constant instance");
        break;
      }

      case RuleType::Ex2IntV: {
        auto pr = principal_of(v, seq, env, FK::Ex2, "a second-order existential");
        if (!pr || !expect_children(v, 1)) break;
        if (v.rule.var.empty() || !std::isupper((unsigned char)v.rule.var[0])) {
          flag(id, "Ex2IntV needs a set variable name");
          break;
        }
        Sequent prem = apply_env(p.nodes.at(v.children[0]).sequent, env);
        if (!premise_matches(prem, seq, pr, {subst_set(pr->a, pr->bvar, set_var(v.rule.var))}))
          flag(id, "premise does not add the variable instance");
        break;
      }

      case RuleType::Cut: {
        if (!v.rule.cut) {
          flag(id, "Cut needs a cut formula");
          return;
        }
        FormulaPtr cf = apply_env(v.rule.cut, env);
        if (!formula_holes(cf).empty()) {
          flag(id, "placeholder term escapes its template: " + print_formula(cf));
          return;
        }
        if (!expect_children(v, 2)) break;
        Sequent left = apply_env(p.nodes.at(v.children[0]).sequent, env);
        Sequent right = apply_env(p.nodes.at(v.children[1]).sequent, env);
        if (!same_sequent(left, sequent_plus(seq, cf)))
          flag(id, "left premise does not add the cut formula");
        if (!same_sequent(right, sequent_plus(seq, negate(cf))))
          flag(id, "right premise does not add the negated cut formula");
        break;
      }

      case RuleType::Rep: {
        if (!expect_children(v, 1)) break;
        Sequent prem = apply_env(p.nodes.at(v.children[0]).sequent, env);
        if (!same_sequent(prem, seq)) flag(id, "repeated premise differs from conclusion");
        break;
      }
    }

    for (auto c : v.children) check_node(c, env);
  }
};

}  // namespace detail

inline std::vector<Violation> check_preproof(const PreProof& p, std::uint64_t fuel = 3) {
  std::vector<Violation> out;
  if (!p.nodes.count(p.root)) {
    out.push_back({p.root, "root node is missing"});
    return out;
  }
  bool broken = false;
  std::map<std::uint64_t, int> indeg;
  for (const auto& [id, v] : p.nodes) {
    for (auto c : v.children) {
      if (!p.nodes.count(c)) {
        out.push_back({id, "child node " + std::to_string(c) + " is missing"});
        broken = true;
      } else if (++indeg[c] > 1) {
        out.push_back({c, "node has more than one parent"});
        broken = true;
      }
    }
  }
  if (indeg.count(p.root)) {
    out.push_back({p.root, "root node has a parent"});
    broken = true;
  }
  if (broken) return out;
  // With unique parents and a parentless root, the graph is a forest; every
  // node not reached from the root is stray, and no cycles are possible.
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> stack = {p.root};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    for (auto c : p.nodes.at(id).children) stack.push_back(c);
  }
  for (const auto& [id, v] : p.nodes)
    if (!seen.count(id)) out.push_back({id, "node is not reachable from the root"});
  if (!out.empty()) return out;

  detail::ProofChecker ck{p, fuel, out};
  ck.check_node(p.root, {});
  return out;
}

// Rank of the proof tree: finite trees rank as their node count; the single
// branch under a numeral rule counts as its own rank times omega.
inline TermPtr kb_rank(const PreProof& p) {
  const NotationSystemSpec& A = absolute_spec();
  if (!p.nodes.count(p.root)) throw DomainError("root node is missing");
  std::set<std::uint64_t> onpath;
  TermPtr omega = mk_phi(A, t_zero(), numeral(A, 1));

  std::function<TermPtr(std::uint64_t)> rank = [&](std::uint64_t id) -> TermPtr {
    if (!p.nodes.count(id)) throw DomainError("child node " + std::to_string(id) + " is missing");
    if (!onpath.insert(id).second) throw DomainError("proof graph has a cycle");
    const PNode& v = p.nodes.at(id);
    std::vector<TermPtr> parts;
    for (auto c : v.children) {
      TermPtr r = rank(c);
      if (v.rule.type == RuleType::All1Int) r = mul(r, omega);
      parts.push_back(r);
    }
    parts.push_back(numeral(A, 1));
    onpath.erase(id);
    return mk_sum(A, parts);
  };
  return rank(p.root);
}

inline ConstMap constants_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("constants must be an object");
  ConstMap out;
  for (const auto& [key, val] : j.items()) {
    if (key.size() < 2 || key[0] != 'C' ||
        key.find_first_not_of("0123456789", 1) != std::string::npos)
      throw ParseError("constant names look like C0, C1, ...: " + key);
    if (!val.is_array()) throw ParseError("constant extension must be an array");
    std::set<std::uint64_t>& ext = out[std::stoull(key.substr(1))];
    for (const auto& x : val) {
      if (!x.is_number_unsigned()) throw ParseError("constant extensions hold naturals");
      ext.insert(x.get<std::uint64_t>());
    }
  }
  return out;
}

inline PreProof proof_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("proof must be a JSON object");
  PreProof p;
  if (!j.contains("root") || !j["root"].is_number_unsigned())
    throw ParseError("proof needs a numeric root id");
  p.root = j["root"].get<std::uint64_t>();
  std::string mode = j.value("mode", "finite");
  if (mode != "finite" && mode != "schematic")
    throw ParseError("mode must be finite or schematic");
  p.schematic = mode == "schematic";
  if (j.contains("constants")) p.constants = constants_from_json(j["constants"]);
  if (!j.contains("nodes") || !j["nodes"].is_array()) throw ParseError("proof needs a node array");
  for (const auto& n : j["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n["id"].is_number_unsigned())
      throw ParseError("each node needs a numeric id");
    PNode v;
    v.id = n["id"].get<std::uint64_t>();
    if (p.nodes.count(v.id)) throw ParseError("duplicate node id " + std::to_string(v.id));
    if (!n.contains("sequent") || !n["sequent"].is_array())
      throw ParseError("each node needs a sequent array");
    for (const auto& s : n["sequent"]) {
      if (!s.is_string()) throw ParseError("sequent entries are formula strings");
      v.sequent.push_back(parse_formula(s.get<std::string>()));
    }
    if (!n.contains("rule") || !n["rule"].is_object() || !n["rule"].contains("type") ||
        !n["rule"]["type"].is_string())
      throw ParseError("each node needs a rule with a type");
    const Json& r = n["rule"];
    auto rt = rule_from_name(r["type"].get<std::string>());
    if (!rt) throw ParseError("unknown rule type: " + r["type"].get<std::string>());
    v.rule.type = *rt;
    if (r.contains("principal")) {
      if (!r["principal"].is_string()) throw ParseError("principal must be a formula string");
      v.rule.principal = parse_formula(r["principal"].get<std::string>());
    }
    if (r.contains("witness")) {
      if (!r["witness"].is_string()) throw ParseError("witness must be a term string");
      std::string w = r["witness"].get<std::string>();
      detail::FormulaParser tp{w};
      v.rule.witness = tp.term();
      tp.skip();
      if (tp.pos != w.size()) throw ParseError("trailing input after witness term: " + w);
    }
    if (r.contains("var")) {
      if (!r["var"].is_string()) throw ParseError("var must be a name");
      v.rule.var = r["var"].get<std::string>();
    }
    if (r.contains("constant")) {
      if (!r["constant"].is_number_unsigned()) throw ParseError("constant must be an index");
      v.rule.constant = r["constant"].get<std::uint64_t>();
    }
    if (r.contains("formula")) {
      if (!r["formula"].is_string()) throw ParseError("cut formula must be a string");
      v.rule.cut = parse_formula(r["formula"].get<std::string>());
    }
    if (n.contains("children")) {
      if (!n["children"].is_array()) throw ParseError("children must be an id array");
      for (const auto& c : n["children"]) {
        if (!c.is_number_unsigned()) throw ParseError("child ids are numeric");
        v.children.push_back(c.get<std::uint64_t>());
      }
    }
    p.nodes.emplace(v.id, std::move(v));
  }
  return p;
}

inline Json proof_to_json(const PreProof& p) {
  Json j;
  j["root"] = p.root;
  j["mode"] = p.schematic ? "schematic" : "finite";
  if (!p.constants.empty()) {
    Json cs = Json::object();
    for (const auto& [idx, ext] : p.constants) {
      Json arr = Json::array();
      for (auto x : ext) arr.push_back(x);
      cs["C" + std::to_string(idx)] = arr;
    }
    j["constants"] = cs;
  }
  Json nodes = Json::array();
  for (const auto& [id, v] : p.nodes) {
    Json n;
    n["id"] = id;
    Json seq = Json::array();
    for (const auto& f : v.sequent) seq.push_back(print_formula(f));
    n["sequent"] = seq;
    Json r;
    r["type"] = rule_name(v.rule.type);
    if (v.rule.principal) r["principal"] = print_formula(v.rule.principal);
    if (v.rule.witness) r["witness"] = print_nterm(v.rule.witness);
    if (!v.rule.var.empty()) r["var"] = v.rule.var;
    if (v.rule.type == RuleType::Ex2IntC) r["constant"] = v.rule.constant;
    if (v.rule.cut) r["formula"] = print_formula(v.rule.cut);
    n["rule"] = r;
    Json ch = Json::array();
    for (auto c : v.children) ch.push_back(c);
    n["children"] = ch;
    nodes.push_back(n);
  }
  j["nodes"] = nodes;
  return j;
}

}  // namespace ordlab
