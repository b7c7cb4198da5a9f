#pragma once

// S-expression syntax for order expressions and notation-system specs, plus
// JSON tree files for the Kleene-Brouwer order.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "notation.hpp"
#include "order.hpp"

namespace ordlab {

namespace detail {

struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
};

struct SExprParser {
  const std::string& src;
  std::size_t pos = 0;

  void skip() {
    while (pos < src.size() && std::isspace((unsigned char)src[pos])) ++pos;
  }

  SExpr parse() {
    skip();
    if (pos >= src.size()) throw ParseError("unexpected end of expression");
    if (src[pos] == '(') {
      ++pos;
      SExpr e;
      for (;;) {
        skip();
        if (pos >= src.size()) throw ParseError("unbalanced '('");
        if (src[pos] == ')') {
          ++pos;
          return e;
        }
        e.items.push_back(parse());
      }
    }
    if (src[pos] == ')') throw ParseError("unexpected ')'");
    SExpr e;
    e.is_atom = true;
    std::size_t start = pos;
    int depth = 0;  // allow inline JSON arrays like [1,2] as single atoms
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (depth == 0 && (std::isspace((unsigned char)c) || c == '(' || c == ')')) break;
      ++pos;
    }
    e.atom = src.substr(start, pos - start);
    return e;
  }
};

inline Json atom_to_code(const std::string& a) {
  Json j = Json::parse(a, nullptr, false);
  if (j.is_discarded()) return Json(a);  // bare words become string codes
  return j;
}

}  // namespace detail

OrderPtr order_from_sexpr(const detail::SExpr& e);

inline SpecPtr spec_from_sexpr(const detail::SExpr& e) {
  if (e.is_atom || e.items.empty() || !e.items[0].is_atom)
    throw ParseError("expected a notation-system spec");
  const std::string& h = e.items[0].atom;
  auto want = [&](std::size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError(h + " takes " + std::to_string(n) + " argument(s)");
  };
  if (h == "eps+") {
    want(1);
    return make_spec(SpecKind::EpsPlus, order_from_sexpr(e.items[1]), nullptr, nullptr);
  }
  if (h == "phi+") {
    want(2);
    return make_spec(SpecKind::PhiPlus, order_from_sexpr(e.items[2]),
                     order_from_sexpr(e.items[1]), nullptr);
  }
  if (h == "phi+iter") {
    want(3);
    return make_spec(SpecKind::PhiPlusIter, order_from_sexpr(e.items[3]),
                     order_from_sexpr(e.items[1]), order_from_sexpr(e.items[2]));
  }
  if (h == "gamma+") {
    want(1);
    return make_spec(SpecKind::GammaPlus, order_from_sexpr(e.items[1]), nullptr, nullptr);
  }
  if (h == "gamma+iter") {
    want(2);
    return make_spec(SpecKind::GammaPlusIter, order_from_sexpr(e.items[2]), nullptr,
                     order_from_sexpr(e.items[1]));
  }
  throw ParseError("unknown notation-system spec: " + h);
}

inline FiniteTree tree_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object() && j.contains("nodes")) arr = &j["nodes"];
  if (!arr->is_array()) throw ParseError("tree file must be an array of node paths");
  FiniteTree t;
  for (const auto& n : *arr) {
    if (!n.is_array()) throw ParseError("tree node must be an array of naturals");
    std::vector<std::uint64_t> path;
    for (const auto& x : n) {
      if (!x.is_number_unsigned()) throw ParseError("tree node entries must be naturals");
      path.push_back(x.get<std::uint64_t>());
    }
    t.nodes.push_back(std::move(path));
  }
  validate_tree(t);
  return t;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("file is not valid JSON: " + path);
  return j;
}

inline OrderPtr order_from_sexpr(const detail::SExpr& e) {
  if (e.is_atom) {
    if (e.atom == "omega") return ord_omega();
    if (e.atom == "omega*") return ord_omega_star();
    throw ParseError("unknown order: " + e.atom);
  }
  if (e.items.empty() || !e.items[0].is_atom) throw ParseError("expected an order expression");
  const std::string& h = e.items[0].atom;
  if (h == "finite") {
    std::vector<Json> codes;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (!e.items[i].is_atom) throw ParseError("finite codes must be atoms");
      codes.push_back(detail::atom_to_code(e.items[i].atom));
    }
    return ord_finite(std::move(codes));
  }
  auto want = [&](std::size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError(h + " takes " + std::to_string(n) + " argument(s)");
  };
  if (h == "sum") {
    want(2);
    return ord_sum(order_from_sexpr(e.items[1]), order_from_sexpr(e.items[2]));
  }
  if (h == "prodlex") {
    want(2);
    return ord_prod_lex(order_from_sexpr(e.items[1]), order_from_sexpr(e.items[2]));
  }
  if (h == "w^") {
    want(1);
    return ord_omega_power(order_from_sexpr(e.items[1]));
  }
  if (h == "cone") {
    want(2);
    if (!e.items[2].is_atom) throw ParseError("cone bound must be a code atom");
    return ord_cone(order_from_sexpr(e.items[1]), detail::atom_to_code(e.items[2].atom));
  }
  if (h == "notation") {
    want(1);
    return ord_notation(spec_from_sexpr(e.items[1]));
  }
  if (h == "kb") {
    want(1);
    if (!e.items[1].is_atom) throw ParseError("kb takes a tree file path");
    return kb_order(tree_from_json(load_json_file(e.items[1].atom)));
  }
  if (h == "disj") {
    want(2);
    return ord_disj(order_from_sexpr(e.items[1]), order_from_sexpr(e.items[2]));
  }
  throw ParseError("unknown order constructor: " + h);
}

inline OrderPtr parse_order(const std::string& s) {
  detail::SExprParser p{s};
  auto e = p.parse();
  p.skip();
  if (p.pos != s.size()) throw ParseError("trailing input after order expression");
  return order_from_sexpr(e);
}

inline SpecPtr parse_spec(const std::string& s) {
  detail::SExprParser p{s};
  auto e = p.parse();
  p.skip();
  if (p.pos != s.size()) throw ParseError("trailing input after spec expression");
  return spec_from_sexpr(e);
}

inline std::string print_order(const OrderPtr& o);

inline std::string print_spec(const SpecPtr& s) {
  switch (s->kind) {
    case SpecKind::EpsPlus: return "(eps+ " + print_order(s->base) + ")";
    case SpecKind::PhiPlus:
      return "(phi+ " + print_order(s->index) + " " + print_order(s->base) + ")";
    case SpecKind::PhiPlusIter:
      return "(phi+iter " + print_order(s->index) + " " + print_order(s->count) + " " +
             print_order(s->base) + ")";
    case SpecKind::GammaPlus: return "(gamma+ " + print_order(s->base) + ")";
    case SpecKind::GammaPlusIter:
      return "(gamma+iter " + print_order(s->count) + " " + print_order(s->base) + ")";
    case SpecKind::Absolute: return "(absolute)";
  }
  return "?";
}

inline std::string print_order(const OrderPtr& o) {
  switch (o->kind) {
    case OrderKind::Finite: {
      std::string out = "(finite";
      for (const auto& c : o->codes) out += " " + c.dump();
      return out + ")";
    }
    case OrderKind::Omega: return "omega";
    case OrderKind::OmegaStar: return "omega*";
    case OrderKind::Sum: return "(sum " + print_order(o->left) + " " + print_order(o->right) + ")";
    case OrderKind::ProdLex:
      return "(prodlex " + print_order(o->left) + " " + print_order(o->right) + ")";
    case OrderKind::OmegaPower: return "(w^ " + print_order(o->arg) + ")";
    case OrderKind::Cone: return "(cone " + print_order(o->arg) + " " + o->bound.dump() + ")";
    case OrderKind::Notation: return "(notation " + print_spec(o->spec) + ")";
    case OrderKind::KB: {
      std::string out = "(kb-tree";
      for (const auto& n : o->tree.nodes) {
        Json j = Json::array();
        for (auto x : n) j.push_back(x);
        out += " " + j.dump();
      }
      return out + ")";
    }
    case OrderKind::Disj:
      return "(disj " + print_order(o->left) + " " + print_order(o->right) + ")";
  }
  return "?";
}

}  // namespace ordlab
