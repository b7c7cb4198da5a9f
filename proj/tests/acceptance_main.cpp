// Acceptance gate: one line per criterion, PASS or FAIL, with timing.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ordlab/ordlab.hpp"
#include "oracle.hpp"

using namespace ordlab;

namespace {

int failures = 0;

void criterion(int n, const std::string& what, double budget_ms,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    ok = false;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  if (ms > budget_ms) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("%s criterion %d: %s (%.0f ms%s%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(), ms,
              detail.empty() ? "" : "; ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

TermPtr abs_term(const std::string& s) { return parse_term(absolute_spec(), s); }

bool ord_is(const char* theory, const char* expect, std::string& detail) {
  TermPtr got = pi11_ordinal(parse_theory(theory));
  if (term_eq(got, abs_term(expect))) return true;
  detail += std::string(theory) + " gave " + print_term(absolute_spec(), got) + " not " +
            expect + "; ";
  return false;
}

// Atom renaming induced by a monotone injection between finite base orders.
TermPtr rename_base(const TermPtr& t, const std::map<std::uint64_t, std::uint64_t>& f) {
  switch (t->kind) {
    case TermKind::Zero: return t;
    case TermKind::Atom:
      if (t->sort == AtomSort::Base) return t_atom(AtomSort::Base, Json(f.at(t->pos.get<std::uint64_t>())));
      return t;
    case TermKind::Phi:
      return t_phi_raw(rename_base(t->parts[0], f), rename_base(t->parts[1], f));
    case TermKind::Gamma: return t_gamma_raw(rename_base(t->parts[0], f));
    case TermKind::Sum: {
      std::vector<TermPtr> ps;
      for (const auto& p : t->parts) ps.push_back(rename_base(p, f));
      return t_sum_raw(std::move(ps));
    }
  }
  return t;
}

OrderPtr canonical_finite(std::uint64_t n) {
  std::vector<Json> codes;
  for (std::uint64_t i = 0; i < n; ++i) codes.push_back(Json(i));
  return ord_finite(std::move(codes));
}

}  // namespace

int main() {
  criterion(1, "theory ordinals and reflection stages match their pinned values", 1000,
            [](std::string& d) {
              bool ok = true;
              ok &= ord_is("ACA0", "phi(1,0)", d);
              ok &= ord_is("ACA0+", "phi(2,0)", d);
              ok &= ord_is("Sigma11-AC", "phi(phi(1,0),0)", d);
              ok &= ord_is("ATR0", "G(0)", d);
              ok &= ord_is("ATR", "G(phi(1,0))", d);
              // stage-indexed reflection over both graded bases, at the
              // stages 0, 1 and the order of the plain notation system
              const char* eps = "(notation (eps+ (finite)))";
              ok &= ord_is("(rfn 1 (finite) ACA0)", "phi(1,0)", d);
              ok &= ord_is("(rfn 1 (finite 0) ACA0)", "phi(1,1)", d);
              ok &= ord_is(("(rfn 1 " + std::string(eps) + " ACA0)").c_str(),
                           "phi(1,phi(1,0))", d);
              ok &= ord_is("(rfn 1 (finite) ATR0)", "G(0)", d);
              ok &= ord_is("(rfn 1 (finite 0) ATR0)", "G(1)", d);
              ok &= ord_is(("(rfn 1 " + std::string(eps) + " ATR0)").c_str(), "G(phi(1,0))", d);
              for (const char* t : {"(rfn 1 (finite) ACA0)", "(rfn 1 (finite 0) ATR0)"}) {
                TermPtr a = iter_ordinal(parse_theory(t));
                TermPtr b = pi11_ordinal(parse_theory(t));
                if (!term_eq(a, b)) {
                  d += std::string("iter_ordinal disagrees for ") + t + "; ";
                  ok = false;
                }
              }
              return ok;
            });

  criterion(2, "comparison is a total order on all small relativized-Gamma terms", 60000,
            [](std::string& d) {
              auto S = parse_spec("(gamma+ (finite))");
              auto pool = enumerate_terms(*S, 6);
              std::size_t n = pool.size();
              std::vector<std::vector<Cmp>> m(n, std::vector<Cmp>(n));
              for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m[i][j] = compare(*S, pool[i], pool[j]);
              std::uint64_t checks = 0;
              for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                  ++checks;
                  if ((m[i][j] == Cmp::Equal) != (i == j)) {
                    d = "equality mismatch at pair " + std::to_string(i) + "," + std::to_string(j);
                    return false;
                  }
                  if (m[i][j] != flip(m[j][i])) {
                    d = "antisymmetry mismatch";
                    return false;
                  }
                }
              for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                  for (std::size_t k = 0; k < n; ++k) {
                    ++checks;
                    if (m[i][j] != Cmp::Greater && m[j][k] != Cmp::Greater &&
                        m[i][k] == Cmp::Greater) {
                      d = "transitivity failure";
                      return false;
                    }
                  }
              if (checks < 100000) {
                d = "only " + std::to_string(checks) + " checks";
                return false;
              }
              d = std::to_string(n) + " terms, " + std::to_string(checks) + " checks";
              return true;
            });

  criterion(3, "comparison agrees with an independent normal-form oracle", 10000,
            [](std::string& d) {
              auto S = parse_spec("(eps+ (finite))");
              auto pool = enumerate_terms(*S, 7);
              std::vector<oracle::Cnf> cnf;
              cnf.reserve(pool.size());
              for (const auto& t : pool) cnf.push_back(oracle::to_cnf(t));
              std::uint64_t pairs = 0;
              for (std::size_t i = 0; i < pool.size(); ++i)
                for (std::size_t j = 0; j < pool.size(); ++j) {
                  ++pairs;
                  int o = oracle::cnf_cmp(cnf[i], cnf[j]);
                  Cmp c = compare(*S, pool[i], pool[j]);
                  Cmp expect = o < 0 ? Cmp::Less : o > 0 ? Cmp::Greater : Cmp::Equal;
                  if (c != expect) {
                    d = "disagreement on pair " + print_term(*S, pool[i]) + " vs " +
                        print_term(*S, pool[j]);
                    return false;
                  }
                }
              d = std::to_string(pool.size()) + " terms, " + std::to_string(pairs) + " pairs";
              return true;
            });

  criterion(4, "dilator application reproduces the relativized system and rewrites cohere", 1000,
            [](std::string& d) {
              auto eps = ord_notation(parse_spec("(eps+ (finite))"));
              auto applied = apply_dilator(dil_phi_plus(canonical_finite(1)), ord_finite({}));
              auto pa = enumerate_prefix(*eps, 30);
              auto pb = enumerate_prefix(*applied, 30);
              if (pa.size() != 30 || pb.size() != 30) {
                d = "prefix shorter than 30";
                return false;
              }
              for (std::size_t i = 0; i < 30; ++i)
                for (std::size_t j = 0; j < 30; ++j)
                  if (less(*eps, pa[i], pa[j]) != less(*applied, pb[i], pb[j])) {
                    d = "matrix mismatch at " + std::to_string(i) + "," + std::to_string(j);
                    return false;
                  }
              auto same = [&](const char* a, const char* b) {
                if (dilator_eq(theory_dilator(parse_theory(a)), theory_dilator(parse_theory(b))))
                  return true;
                d += std::string(a) + " != " + b + "; ";
                return false;
              };
              bool ok = true;
              ok &= same("ACA0+", "(omega-rfn (finite 0) ACA0)");
              ok &= same("Sigma11-AC", "(full-rfn Sigma11-AC0)");
              ok &= same("ATR", "(full-rfn ATR0)");
              ok &= ord_is("(omega-rfn omega ACA0)", "phi(phi(0,1),0)", d);
              return ok;
            });

  criterion(5, "induced base maps preserve verdicts, identity and composition", 30000,
            [](std::string& d) {
              std::mt19937 rng(20240815);
              // pools over the canonical finite bases, computed once per size
              std::vector<SpecPtr> spec(6);
              std::vector<std::vector<TermPtr>> pool(6);
              for (std::uint64_t a = 0; a <= 5; ++a) {
                spec[a] = make_spec(SpecKind::GammaPlus, canonical_finite(a), nullptr, nullptr);
                pool[a] = enumerate_terms(*spec[a], 5);
              }
              std::uint64_t verdicts = 0;
              for (int trial = 0; trial < 200; ++trial) {
                std::uint64_t a = rng() % 6;
                std::uint64_t b = a + rng() % (6 - a);
                std::vector<std::uint64_t> codes(b);
                for (std::uint64_t i = 0; i < b; ++i) codes[i] = i;
                std::shuffle(codes.begin(), codes.end(), rng);
                codes.resize(a);
                std::sort(codes.begin(), codes.end());
                std::map<std::uint64_t, std::uint64_t> f;
                for (std::uint64_t i = 0; i < a; ++i) f[i] = codes[i];

                const auto& P = pool[a];
                std::vector<TermPtr> mapped;
                mapped.reserve(P.size());
                for (const auto& t : P) {
                  TermPtr m = rename_base(t, f);
                  if (!legal(*spec[b], m) || !is_normal(*spec[b], m)) {
                    d = "mapped term is not normal: " + print_term(*spec[a], t);
                    return false;
                  }
                  mapped.push_back(m);
                }
                for (std::size_t i = 0; i < P.size(); ++i)
                  for (std::size_t j = i + 1; j < P.size(); ++j) {
                    ++verdicts;
                    if (compare(*spec[a], P[i], P[j]) !=
                        compare(*spec[b], mapped[i], mapped[j])) {
                      d = "verdict not preserved: " + print_term(*spec[a], P[i]) + " vs " +
                          print_term(*spec[a], P[j]);
                      return false;
                    }
                  }

                // identity and composition laws
                std::map<std::uint64_t, std::uint64_t> id;
                for (std::uint64_t i = 0; i < a; ++i) id[i] = i;
                std::uint64_t c = b + rng() % (6 - b);
                std::vector<std::uint64_t> gcodes(c);
                for (std::uint64_t i = 0; i < c; ++i) gcodes[i] = i;
                std::shuffle(gcodes.begin(), gcodes.end(), rng);
                gcodes.resize(b);
                std::sort(gcodes.begin(), gcodes.end());
                std::map<std::uint64_t, std::uint64_t> g, gf;
                for (std::uint64_t i = 0; i < b; ++i) g[i] = gcodes[i];
                for (std::uint64_t i = 0; i < a; ++i) gf[i] = g[f[i]];
                for (const auto& t : P) {
                  if (!term_eq(rename_base(t, id), t)) {
                    d = "identity law failed";
                    return false;
                  }
                  if (!term_eq(rename_base(rename_base(t, f), g), rename_base(t, gf))) {
                    d = "composition law failed";
                    return false;
                  }
                }
              }
              d = std::to_string(verdicts) + " verdict pairs across 200 maps";
              return true;
            });

  criterion(6, "chain orders are total on finite inputs and admit the two embeddings", 10000,
            [](std::string& d) {
              std::uint64_t checks = 0;
              for (std::uint64_t a = 0; a <= 4; ++a)
                for (std::uint64_t b = 0; b <= 4; ++b) {
                  auto D = ord_disj(canonical_finite(a), canonical_finite(b));
                  auto sz = size_if_finite(*D);
                  if (!sz) {
                    d = "chain order over finite inputs is not finite";
                    return false;
                  }
                  auto all = enumerate_prefix(*D, *sz + 3);
                  if (all.size() != *sz) {
                    d = "enumeration size mismatch";
                    return false;
                  }
                  for (std::size_t i = 0; i < all.size(); ++i)
                    for (std::size_t j = 0; j < all.size(); ++j) {
                      ++checks;
                      bool lt = less(*D, all[i], all[j]);
                      bool gt = less(*D, all[j], all[i]);
                      if ((i == j) ? (lt || gt) : (lt == gt)) {
                        d = "totality failure at sizes " + std::to_string(a) + "," +
                            std::to_string(b);
                        return false;
                      }
                    }
                  for (std::size_t i = 0; i < all.size(); ++i)
                    for (std::size_t j = 0; j < all.size(); ++j)
                      for (std::size_t k = 0; k < all.size(); ++k)
                        if (less(*D, all[i], all[j]) && less(*D, all[j], all[k]) &&
                            !less(*D, all[i], all[k])) {
                          d = "transitivity failure";
                          return false;
                        }
                }
              auto wstar = ord_omega_star();
              for (const char* src : {"omega", "(prodlex omega omega)"}) {
                auto A = parse_order(src);
                CodeMap f = embed_from_chain(A, wstar, descending_stream(wstar), 50);
                if (f.pairs.size() != 50) {
                  d = std::string("embedding prefix from ") + src + " has " +
                      std::to_string(f.pairs.size()) + " pairs";
                  return false;
                }
                std::string why;
                if (!check_embedding(f, *A, *ord_disj(A, wstar), &why)) {
                  d = std::string("embedding from ") + src + " failed: " + why;
                  return false;
                }
              }
              d = std::to_string(checks) + " totality checks plus two 50-point embeddings";
              return true;
            });

  criterion(7, "proof search proves tautologies and refutes with honest countermodels", 5000,
            [](std::string& d) {
              auto prove = [&](std::initializer_list<const char*> fs, ConstMap cm) {
                Sequent s;
                for (auto f : fs) s.push_back(parse_formula(f));
                return prove_sequent(s, cm);
              };
              auto r1 = prove({"0 = 0"}, {});
              if (r1.outcome != ProveOutcome::Proved || !check_preproof(r1.proof).empty()) {
                d = "failed to prove the trivial equation";
                return false;
              }
              auto r2 =
                  prove({"((0 = 0 | 1 = 2) & ((1 = 1 & S(1) = 2) | 0 = 1))"}, {});
              if (r2.outcome != ProveOutcome::Proved || !check_preproof(r2.proof).empty()) {
                d = "failed to prove the nested tautology";
                return false;
              }
              struct Case {
                std::initializer_list<const char*> goal;
                ConstMap cm;
              };
              std::vector<Case> refutations = {{{"0 = S(0)"}, {}},
                                               {{"E X. 3 in X"}, {}},
                                               {{"0 in C0"}, {{0, {}}}}};
              for (const auto& c : refutations) {
                auto r = prove(c.goal, c.cm);
                if (r.outcome != ProveOutcome::Refuted) {
                  d = "expected a refutation";
                  return false;
                }
                for (const auto* src : c.goal)
                  if (eval_under(parse_formula(src), r.valuation, c.cm, r.eval_bound)) {
                    d = "countermodel does not falsify the goal";
                    return false;
                  }
                // path property: everything on the saturated branch is false
                for (const auto& f : r.branch) {
                  if (formula_holes(f).empty()) {
                    if (eval_under(f, r.valuation, c.cm, r.eval_bound)) {
                      d = "branch formula true under valuation: " + print_formula(f);
                      return false;
                    }
                  } else {
                    for (std::uint64_t n = 0; n <= r.eval_bound; ++n) {
                      auto g = f;
                      for (auto h : formula_holes(f)) g = subst_hole(g, h, nt_num(n));
                      if (eval_under(g, r.valuation, c.cm, r.eval_bound)) {
                        d = "branch instance true under valuation";
                        return false;
                      }
                    }
                  }
                }
              }
              return true;
            });

  criterion(8, "one hundred single-field proof mutants are all rejected", 10000,
            [](std::string& d) {
              const char* base = R"js({
                "root": 0, "mode": "schematic", "constants": {"C0": [2]}, "nodes": [
                  {"id": 0, "sequent": ["((E X. 2 in X) & (A x. S(x) != 0))"],
                   "rule": {"type": "AndInt",
                            "principal": "((E X. 2 in X) & (A x. S(x) != 0))"},
                   "children": [1, 2]},
                  {"id": 1, "sequent": ["E X. 2 in X"],
                   "rule": {"type": "Ex2IntC", "principal": "E X. 2 in X", "constant": 0},
                   "children": [3]},
                  {"id": 2, "sequent": ["A x. S(x) != 0"],
                   "rule": {"type": "All1Int", "principal": "A x. S(x) != 0"},
                   "children": [4]},
                  {"id": 3, "sequent": ["2 in C0"], "rule": {"type": "Ax3"}, "children": []},
                  {"id": 4, "sequent": ["S(#2) != 0"], "rule": {"type": "Ax2"}, "children": []}
                ]})js";
              Json good = Json::parse(base);
              if (!check_preproof(proof_from_json(good)).empty()) {
                d = "base proof does not check";
                return false;
              }
              std::map<std::string, std::string> swap_rule = {
                  {"AndInt", "OrInt"},  {"Ex2IntC", "Ex2IntV"}, {"All1Int", "Ex1Int"},
                  {"Ax3", "Ax4"},       {"Ax2", "Ax1"}};
              auto bump_digit = [](std::string s, std::mt19937& rng) {
                std::vector<std::size_t> at;
                for (std::size_t i = 0; i < s.size(); ++i)
                  if (std::isdigit((unsigned char)s[i])) at.push_back(i);
                std::size_t i = at[rng() % at.size()];
                s[i] = s[i] == '9' ? '3' : char(s[i] + 1);
                return s;
              };
              std::mt19937 rng(1105);
              int rejected = 0;
              for (int trial = 0; trial < 100; ++trial) {
                Json mut = good;
                switch (rng() % 7) {
                  case 0: {  // corrupt one sequent formula
                    auto& node = mut["nodes"][rng() % 5];
                    auto& seqs = node["sequent"];
                    auto& f = seqs[rng() % seqs.size()];
                    f = bump_digit(f.get<std::string>(), rng);
                    break;
                  }
                  case 1: {  // swap the rule type
                    auto& node = mut["nodes"][rng() % 5];
                    node["rule"]["type"] = swap_rule.at(node["rule"]["type"].get<std::string>());
                    break;
                  }
                  case 2: {  // reroute a child edge to the root
                    std::size_t parents[] = {0, 1, 2};
                    auto& node = mut["nodes"][parents[rng() % 3]];
                    node["children"][0] = std::uint64_t(0);
                    break;
                  }
                  case 3: {  // corrupt the principal formula
                    std::size_t withp[] = {0, 1, 2};
                    auto& node = mut["nodes"][withp[rng() % 3]];
                    node["rule"]["principal"] =
                        bump_digit(node["rule"]["principal"].get<std::string>(), rng);
                    break;
                  }
                  case 4: mut["mode"] = "finite"; break;
                  case 5: mut["constants"]["C0"] = Json::parse("[3]"); break;
                  default: mut["root"] = 1 + rng() % 4; break;
                }
                try {
                  auto vs = check_preproof(proof_from_json(mut));
                  if (vs.empty()) {
                    d = "mutant accepted: " + mut.dump();
                    return false;
                  }
                  (void)vs.front().node;  // located at a node
                  ++rejected;
                } catch (const ParseError&) {
                  // still a rejection, but these operators should keep the
                  // file parseable; count it as a failure to stay strict
                  d = "mutant failed to parse: " + mut.dump();
                  return false;
                }
              }
              d = std::to_string(rejected) + " mutants rejected";
              return rejected == 100;
            });

  criterion(9, "tree ranks equal brute-force order sizes; templates weigh omega", 5000,
            [](std::string& d) {
              std::mt19937 rng(606);
              for (int i = 0; i < 50; ++i) {
                auto shape = oracle::random_tree(rng, 1 + rng() % 31, 3);
                // brute-force KB order on the node set
                auto sorted = shape;
                std::sort(sorted.begin(), sorted.end(), oracle::kb_less_ref);
                FiniteTree ft{shape};
                auto kb = kb_order(ft);
                auto sz = size_if_finite(*kb);
                auto all = enumerate_prefix(*kb, shape.size() + 5);
                if (!sz || *sz != sorted.size() || all.size() != sorted.size()) {
                  d = "order size disagrees with brute-force sort";
                  return false;
                }
                // a finite proof shaped like the tree ranks as the order size
                PreProof p;
                std::map<std::vector<std::uint64_t>, std::uint64_t> ids;
                for (std::size_t k = 0; k < shape.size(); ++k) ids[shape[k]] = k;
                Sequent leafseq{parse_formula("0 = 0")};
                for (std::size_t k = 0; k < shape.size(); ++k) {
                  PNode n;
                  n.id = k;
                  n.sequent = leafseq;
                  p.nodes[k] = n;
                }
                for (const auto& node : shape) {
                  if (node.empty()) continue;
                  auto pre = node;
                  pre.pop_back();
                  p.nodes[ids[pre]].children.push_back(ids[node]);
                }
                p.root = 0;  // random_tree always emits the root first
                if (!term_eq(kb_rank(p), numeral(absolute_spec(), sorted.size()))) {
                  d = "kb_rank differs from brute-force order size";
                  return false;
                }
              }
              auto r = prove_sequent({parse_formula("A x. x = x")}, {});
              if (r.outcome != ProveOutcome::Proved) {
                d = "schematic example did not prove";
                return false;
              }
              std::string rank = print_term(absolute_spec(), kb_rank(r.proof));
              if (rank != "phi(0,1)+1") {
                d = "schematic rank is " + rank;
                return false;
              }
              return true;
            });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
