#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "ordlab/ordlab.hpp"

using namespace ordlab;

namespace {

struct Opts {
  bool json = false;
  bool pretty = false;
  std::uint64_t fuel = 0;  // 0 = per-command default
  std::uint64_t max_size = 5;
  std::uint64_t seed = 0;  // reserved for future randomized commands
};

std::uint64_t fuel_or(const Opts& o, std::uint64_t dflt) { return o.fuel ? o.fuel : dflt; }

Json parse_code(const std::string& s) {
  Json j = Json::parse(s, nullptr, false);
  if (j.is_discarded()) throw ParseError("not valid JSON: " + s);
  return j;
}

void emit(const Opts& o, const Json& j, const std::string& text) {
  if (o.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << text;
}

Json valuation_json(const Valuation& v) {
  Json out = Json::object();
  for (const auto& [k, xs] : v) {
    Json arr = Json::array();
    for (auto x : xs) arr.push_back(x);
    out[k] = arr;
  }
  return out;
}

Json chain_json(const std::optional<std::vector<Json>>& c) {
  if (!c) return nullptr;
  Json arr = Json::array();
  for (const auto& x : *c) arr.push_back(x);
  return arr;
}

std::string chain_text(const std::optional<std::vector<Json>>& c) {
  if (!c) return "none";
  std::string out;
  for (std::size_t i = 0; i < c->size(); ++i) {
    if (i) out += " ";
    out += (*c)[i].dump();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordinal notation systems, presented orders and proof search"};
  app.require_subcommand(1);

  Opts opt;
  app.add_flag("--json", opt.json, "machine-readable JSON output");
  app.add_flag("--pretty", opt.pretty, "unicode glyphs in term output");
  app.add_option("--fuel", opt.fuel, "search/check effort bound (command-specific default)");
  app.add_option("--max-size", opt.max_size, "term size bound for listings (default 5)");
  app.add_option("--seed", opt.seed, "reserved");

  int rc = 0;
  std::string arg1, arg2, arg3, system_expr, goal_file, frag_file, apply_expr;
  std::uint64_t count = 0;

  auto spec_of = [&]() -> SpecPtr {
    if (system_expr.empty()) return nullptr;  // absolute
    return parse_spec(system_expr);
  };
  auto spec_ref = [&](const SpecPtr& s) -> const NotationSystemSpec& {
    return s ? *s : absolute_spec();
  };

  {
    auto* c = app.add_subcommand("ord-compare", "compare two ordinal terms");
    c->fallthrough();
    c->add_option("left", arg1, "term")->required();
    c->add_option("right", arg2, "term")->required();
    c->add_option("--system", system_expr, "notation-system spec (default: absolute terms)");
    c->callback([&] {
      auto S = spec_of();
      const auto& R = spec_ref(S);
      Cmp v = compare(R, parse_term(R, arg1), parse_term(R, arg2));
      emit(opt, Json{{"result", cmp_name(v)}}, std::string(cmp_name(v)) + "\n");
    });
  }
  {
    auto* c = app.add_subcommand("ord-normalize", "parse a term and print its normal form");
    c->fallthrough();
    c->add_option("term", arg1, "term")->required();
    c->add_option("--system", system_expr, "notation-system spec (default: absolute terms)");
    c->callback([&] {
      auto S = spec_of();
      const auto& R = spec_ref(S);
      std::string out = print_term(R, parse_term(R, arg1), opt.pretty);
      emit(opt, Json{{"term", out}}, out + "\n");
    });
  }
  {
    auto* c = app.add_subcommand("terms", "list all normal terms up to --max-size");
    c->fallthrough();
    c->add_option("--system", system_expr, "notation-system spec (default: absolute terms)");
    c->callback([&] {
      if (opt.max_size > 12) throw DomainError("--max-size is capped at 12");
      auto S = spec_of();
      const auto& R = spec_ref(S);
      Json arr = Json::array();
      std::string text;
      for (const auto& t : enumerate_terms(R, opt.max_size)) {
        std::string s = print_term(R, t, opt.pretty);
        arr.push_back(s);
        text += s + "\n";
      }
      emit(opt, Json{{"terms", arr}}, text);
    });
  }
  {
    auto* c = app.add_subcommand("theory-ordinal", "proof-theoretic ordinal of a theory");
    c->fallthrough();
    c->add_option("theory", arg1, "theory expression")->required();
    c->callback([&] {
      auto t = parse_theory(arg1);
      std::string out = print_term(absolute_spec(), pi11_ordinal(t), opt.pretty);
      emit(opt, Json{{"theory", print_theory(t)}, {"ordinal", out}}, out + "\n");
    });
  }
  {
    auto* c = app.add_subcommand("theory-dilator", "dilator assigned to a theory");
    c->fallthrough();
    c->add_option("theory", arg1, "theory expression")->required();
    c->callback([&] {
      auto t = parse_theory(arg1);
      std::string out = print_dilator(theory_dilator(t));
      emit(opt, Json{{"theory", print_theory(t)}, {"dilator", out}}, out + "\n");
    });
  }
  {
    auto* c = app.add_subcommand("theory-wop", "well-ordering principle matching a theory");
    c->fallthrough();
    c->add_option("theory", arg1, "theory expression")->required();
    c->add_option("--apply", apply_expr, "order to run the transform on");
    c->callback([&] {
      auto w = theory_wop(parse_theory(arg1));
      Json j{{"statement", w.statement}};
      std::string text = w.statement + "\n";
      if (!apply_expr.empty()) {
        std::string out = print_order(w.transform(parse_order(apply_expr)));
        j["order"] = out;
        text += out + "\n";
      }
      emit(opt, j, text);
    });
  }
  {
    auto* c = app.add_subcommand("order-member", "test membership of a code in an order");
    c->fallthrough();
    c->add_option("order", arg1, "order expression")->required();
    c->add_option("code", arg2, "JSON code")->required();
    c->callback([&] {
      bool v = member(*parse_order(arg1), parse_code(arg2));
      emit(opt, Json{{"member", v}}, std::string(v ? "true" : "false") + "\n");
    });
  }
  {
    auto* c = app.add_subcommand("order-less", "compare two codes in an order");
    c->fallthrough();
    c->add_option("order", arg1, "order expression")->required();
    c->add_option("left", arg2, "JSON code")->required();
    c->add_option("right", arg3, "JSON code")->required();
    c->callback([&] {
      auto o = parse_order(arg1);
      bool v = less(*o, parse_code(arg2), parse_code(arg3));
      emit(opt, Json{{"less", v}}, std::string(v ? "true" : "false") + "\n");
    });
  }
  {
    auto* c = app.add_subcommand("enumerate", "list the first n elements of an order");
    c->fallthrough();
    c->add_option("order", arg1, "order expression")->required();
    c->add_option("n", count, "how many elements")->required();
    c->callback([&] {
      if (count > 1000000) throw DomainError("enumeration request too large");
      auto o = parse_order(arg1);
      Json arr = Json::array();
      std::string text;
      for (const auto& x : enumerate_prefix(*o, count)) {
        arr.push_back(x);
        text += x.dump() + "\n";
      }
      emit(opt, Json{{"elements", arr}}, text);
    });
  }
  {
    auto* c = app.add_subcommand("order-descending",
                                 "search for a strictly descending chain of length --fuel");
    c->fallthrough();
    c->add_option("order", arg1, "order expression")->required();
    c->callback([&] {
      auto ch = find_descending(*parse_order(arg1), fuel_or(opt, 5));
      emit(opt, Json{{"chain", chain_json(ch)}}, chain_text(ch) + "\n");
    });
  }
  {
    auto* c = app.add_subcommand(
        "order-disj", "probe descending chains in two orders and in their chain order");
    c->fallthrough();
    c->add_option("left", arg1, "order expression")->required();
    c->add_option("right", arg2, "order expression")->required();
    c->callback([&] {
      auto a = parse_order(arg1);
      auto b = parse_order(arg2);
      std::size_t k = fuel_or(opt, 3);
      auto ca = find_descending(*a, k);
      auto cb = find_descending(*b, k);
      auto cd = find_descending(*ord_disj(a, b), k);
      emit(opt,
           Json{{"left", chain_json(ca)}, {"right", chain_json(cb)}, {"disj", chain_json(cd)}},
           "left: " + chain_text(ca) + "\nright: " + chain_text(cb) +
               "\ndisj: " + chain_text(cd) + "\n");
    });
  }
  {
    auto* c = app.add_subcommand(
        "order-embed", "embed an order into its chain order along a descending chain");
    c->fallthrough();
    c->add_option("order", arg1, "order to embed")->required();
    c->add_option("chain-order", arg2, "order supplying the descending chain")->required();
    c->callback([&] {
      auto a = parse_order(arg1);
      auto b = parse_order(arg2);
      std::size_t prefix = fuel_or(opt, 10);
      CodeMap f = embed_from_chain(a, b, descending_stream(b), prefix);
      auto target = ord_disj(a, b);
      std::string why;
      if (!check_embedding(f, *a, *target, &why))
        throw WitnessError("constructed map failed verification: " + why);
      Json arr = Json::array();
      std::string text;
      for (const auto& [x, y] : f.pairs) {
        arr.push_back(Json::array({x, y}));
        text += x.dump() + " -> " + y.dump() + "\n";
      }
      text += "ok\n";
      emit(opt, Json{{"pairs", arr}, {"ok", true}}, text);
    });
  }
  {
    auto* c = app.add_subcommand("proof-check", "check a proof file");
    c->fallthrough();
    c->add_option("file", arg1, "proof JSON file")->required();
    c->callback([&] {
      auto p = proof_from_json(load_json_file(arg1));
      auto vs = check_preproof(p, fuel_or(opt, 3));
      Json arr = Json::array();
      std::string text;
      for (const auto& v : vs) {
        arr.push_back(Json{{"node", v.node}, {"msg", v.msg}});
        text += "node " + std::to_string(v.node) + ": " + v.msg + "\n";
      }
      if (vs.empty()) text = "ok\n";
      emit(opt, Json{{"violations", arr}}, text);
      if (!vs.empty()) rc = 2;
    });
  }
  {
    auto* c = app.add_subcommand("prove", "search for a proof of a goal sequent");
    c->fallthrough();
    c->add_option("--goal", goal_file, "goal JSON file")->required();
    c->add_option("--frag", frag_file, "fragment JSON file merged into the goal");
    c->callback([&] {
      Json frag;
      if (!frag_file.empty()) frag = load_json_file(frag_file);
      auto prob = problem_from_json(load_json_file(goal_file), frag);
      auto r = prove_sequent(prob.sequent, prob.constants, fuel_or(opt, 400));
      if (r.outcome == ProveOutcome::Proved) {
        Json pj = proof_to_json(r.proof);
        emit(opt, Json{{"outcome", "proved"}, {"proof", pj}}, pj.dump(2) + "\n");
        return;
      }
      if (r.outcome == ProveOutcome::Refuted) {
        Json goal_eval = Json::object();
        std::string text = "refuted\nvaluation: " + valuation_json(r.valuation).dump() + "\n";
        text += "saturated branch:\n";
        for (const auto& f : r.branch) text += "  " + print_formula(f) + "\n";
        text += "goal under valuation (bound " + std::to_string(r.eval_bound) + "):\n";
        for (const auto& f : prob.sequent) {
          bool v = eval_under(f, r.valuation, prob.constants, r.eval_bound);
          goal_eval[print_formula(f)] = v;
          text += "  " + print_formula(f) + " -> " + (v ? "true" : "false") + "\n";
        }
        Json branch = Json::array();
        for (const auto& f : r.branch) branch.push_back(print_formula(f));
        emit(opt,
             Json{{"outcome", "refuted"},
                  {"valuation", valuation_json(r.valuation)},
                  {"branch", branch},
                  {"eval_bound", r.eval_bound},
                  {"goal", goal_eval}},
             text);
        rc = 3;
        return;
      }
      std::string text = "out of fuel\n";
      Json j{{"outcome", "out-of-fuel"}};
      if (!r.violations.empty()) {
        Json arr = Json::array();
        text += "assembled proof failed its recheck:\n";
        for (const auto& v : r.violations) {
          arr.push_back(Json{{"node", v.node}, {"msg", v.msg}});
          text += "  node " + std::to_string(v.node) + ": " + v.msg + "\n";
        }
        j["violations"] = arr;
      }
      emit(opt, j, text);
      rc = 4;
    });
  }
  {
    auto* c = app.add_subcommand("kb-rank", "rank of a proof file or finite tree file");
    c->fallthrough();
    c->add_option("file", arg1, "proof or tree JSON file")->required();
    c->callback([&] {
      Json j = load_json_file(arg1);
      std::string out;
      if (j.is_object() && j.contains("root")) {
        out = print_term(absolute_spec(), kb_rank(proof_from_json(j)), opt.pretty);
      } else {
        FiniteTree t = tree_from_json(j);
        out = print_term(absolute_spec(), numeral(absolute_spec(), t.nodes.size()), opt.pretty);
      }
      emit(opt, Json{{"rank", out}}, out + "\n");
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const RewriteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 66;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  }
  return rc;
}
