#pragma once

// Presented countable linear orders: a closed expression language whose
// elements are JSON codes, with decidable membership and comparison plus
// deterministic enumeration and best-effort descending-chain search.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace ordlab {

using Json = nlohmann::json;

enum class Cmp { Less, Equal, Greater };

inline Cmp flip(Cmp c) {
  if (c == Cmp::Less) return Cmp::Greater;
  if (c == Cmp::Greater) return Cmp::Less;
  return Cmp::Equal;
}

inline const char* cmp_name(Cmp c) {
  switch (c) {
    case Cmp::Less: return "LESS";
    case Cmp::Equal: return "EQUAL";
    default: return "GREATER";
  }
}

// ---------------------------------------------------------------------------
// Finite trees (for the Kleene-Brouwer order)

struct FiniteTree {
  // Nodes are sequences of naturals; the set must be closed under prefixes.
  std::vector<std::vector<std::uint64_t>> nodes;
};

inline void validate_tree(const FiniteTree& t) {
  std::set<std::vector<std::uint64_t>> seen(t.nodes.begin(), t.nodes.end());
  if (seen.size() != t.nodes.size()) throw DomainError("tree has duplicate nodes");
  for (const auto& n : t.nodes) {
    if (n.empty()) continue;
    auto pre = n;
    pre.pop_back();
    if (!seen.count(pre)) throw DomainError("tree is not prefix-closed");
  }
  if (!t.nodes.empty() && !seen.count({})) throw DomainError("nonempty tree lacks a root");
}

// ---------------------------------------------------------------------------
// Order expressions

enum class OrderKind {
  Finite,      // explicit code list, in order
  Omega,       // naturals ascending
  OmegaStar,   // naturals descending
  Sum,         // left then right, codes tagged ["l",x] / ["r",y]
  ProdLex,     // pairs [base,exp], exponent significant first (type base*exp)
  OmegaPower,  // finite decreasing exponent-multiplicity stacks over exp
  Cone,        // proper initial segment of parent strictly below bound
  Notation,    // terms of a notation system, compared by term order
  KB,          // Kleene-Brouwer order on a finite tree
  Disj,        // nonempty chains descending in both coordinates
};

struct OrderExpr;
using OrderPtr = std::shared_ptr<const OrderExpr>;

enum class SpecKind { EpsPlus, PhiPlus, PhiPlusIter, GammaPlus, GammaPlusIter, Absolute };

// A relativized notation-system descriptor: which schema, plus the component
// orders it is parameterized by (base: the order being relativized over;
// index: legal phi subscripts; count: how many values above the base).
struct NotationSystemSpec {
  SpecKind kind = SpecKind::Absolute;
  OrderPtr base;   // all kinds except Absolute
  OrderPtr index;  // PhiPlus, PhiPlusIter
  OrderPtr count;  // PhiPlusIter, GammaPlusIter
};
using SpecPtr = std::shared_ptr<const NotationSystemSpec>;

struct OrderExpr {
  OrderKind kind;
  std::vector<Json> codes;     // Finite
  OrderPtr left, right;        // Sum(l,r), ProdLex(base=l, exp=r), Disj(l,r)
  OrderPtr arg;                // OmegaPower(arg), Cone(parent=arg)
  Json bound;                  // Cone
  SpecPtr spec;                // Notation
  FiniteTree tree;             // KB
};

bool member(const OrderExpr& o, const Json& code);
bool less(const OrderExpr& o, const Json& x, const Json& y);

inline OrderPtr ord_finite(std::vector<Json> codes) {
  std::set<std::string> seen;
  for (const auto& c : codes)
    if (!seen.insert(c.dump()).second) throw DomainError("finite order has duplicate codes");
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::Finite;
  e->codes = std::move(codes);
  return e;
}

inline OrderPtr ord_omega() {
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::Omega;
  return e;
}

inline OrderPtr ord_omega_star() {
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::OmegaStar;
  return e;
}

inline OrderPtr ord_sum(OrderPtr l, OrderPtr r) {
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::Sum;
  e->left = std::move(l);
  e->right = std::move(r);
  return e;
}

inline OrderPtr ord_prod_lex(OrderPtr base, OrderPtr exp) {
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::ProdLex;
  e->left = std::move(base);
  e->right = std::move(exp);
  return e;
}

inline OrderPtr ord_omega_power(OrderPtr exp) {
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::OmegaPower;
  e->arg = std::move(exp);
  return e;
}

inline OrderPtr ord_cone(OrderPtr parent, Json bound) {
  if (!member(*parent, bound)) throw DomainError("cone bound is not a member of the parent order");
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::Cone;
  e->arg = std::move(parent);
  e->bound = std::move(bound);
  return e;
}

inline OrderPtr ord_notation(SpecPtr spec) {
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::Notation;
  e->spec = std::move(spec);
  return e;
}

inline OrderPtr kb_order(FiniteTree tree) {
  validate_tree(tree);
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::KB;
  e->tree = std::move(tree);
  return e;
}

inline OrderPtr ord_disj(OrderPtr a, OrderPtr b) {
  auto e = std::make_shared<OrderExpr>();
  e->kind = OrderKind::Disj;
  e->left = std::move(a);
  e->right = std::move(b);
  return e;
}

// Hooks implemented by the notation layer (notation.hpp); order.hpp is only
// usable through the umbrella header for Notation-kind orders.
bool notation_member(const NotationSystemSpec& s, const Json& code);
Cmp notation_compare_codes(const NotationSystemSpec& s, const Json& x, const Json& y);
std::vector<Json> notation_prefix(const NotationSystemSpec& s, std::size_t n);
std::optional<std::vector<Json>> notation_descending(const NotationSystemSpec& s, std::size_t fuel);

// ---------------------------------------------------------------------------
// Structural equality of order expressions

inline bool order_eq(const OrderPtr& a, const OrderPtr& b);

inline bool spec_eq(const SpecPtr& a, const SpecPtr& b) {
  if (!a || !b) return !a && !b;
  return a->kind == b->kind && order_eq(a->base, b->base) && order_eq(a->index, b->index) &&
         order_eq(a->count, b->count);
}

inline bool order_eq(const OrderPtr& a, const OrderPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case OrderKind::Finite: return a->codes == b->codes;
    case OrderKind::Omega:
    case OrderKind::OmegaStar: return true;
    case OrderKind::Sum:
    case OrderKind::ProdLex:
    case OrderKind::Disj: return order_eq(a->left, b->left) && order_eq(a->right, b->right);
    case OrderKind::OmegaPower: return order_eq(a->arg, b->arg);
    case OrderKind::Cone: return order_eq(a->arg, b->arg) && a->bound == b->bound;
    case OrderKind::Notation: return spec_eq(a->spec, b->spec);
    case OrderKind::KB: return a->tree.nodes == b->tree.nodes;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Canonical pairing for disjunction-order codes

inline bool is_nat(const Json& j) {
  // Accept any non-negative integral code; json literals built from plain
  // int constants carry the signed integer type.
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

// Iterated Cantor pairing squares the magnitude at every nesting level, so
// even shallow structured codes overflow any fixed-width integer.  The
// encoding therefore works on an arbitrary-precision natural carrying just
// the operations the pairing needs: add, multiply, halve, compare.
struct BigNat {
  std::vector<std::uint64_t> limbs;  // little-endian base 2^64, no leading zeros
  BigNat() = default;
  explicit BigNat(std::uint64_t v) {
    if (v) limbs.push_back(v);
  }
};

inline int big_cmp(const BigNat& a, const BigNat& b) {
  if (a.limbs.size() != b.limbs.size()) return a.limbs.size() < b.limbs.size() ? -1 : 1;
  for (std::size_t i = a.limbs.size(); i-- > 0;)
    if (a.limbs[i] != b.limbs[i]) return a.limbs[i] < b.limbs[i] ? -1 : 1;
  return 0;
}
inline bool operator<(const BigNat& a, const BigNat& b) { return big_cmp(a, b) < 0; }
inline bool operator>(const BigNat& a, const BigNat& b) { return big_cmp(a, b) > 0; }
inline bool operator==(const BigNat& a, const BigNat& b) { return big_cmp(a, b) == 0; }
inline bool operator!=(const BigNat& a, const BigNat& b) { return big_cmp(a, b) != 0; }

inline BigNat big_add(const BigNat& a, const BigNat& b) {
  BigNat r;
  std::size_t n = std::max(a.limbs.size(), b.limbs.size());
  r.limbs.reserve(n + 1);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    unsigned __int128 s = carry;
    if (i < a.limbs.size()) s += a.limbs[i];
    if (i < b.limbs.size()) s += b.limbs[i];
    r.limbs.push_back((std::uint64_t)s);
    carry = (std::uint64_t)(s >> 64);
  }
  if (carry) r.limbs.push_back(carry);
  return r;
}

inline BigNat big_mul(const BigNat& a, const BigNat& b) {
  BigNat r;
  if (a.limbs.empty() || b.limbs.empty()) return r;
  r.limbs.assign(a.limbs.size() + b.limbs.size(), 0);
  for (std::size_t i = 0; i < a.limbs.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.limbs.size(); ++j) {
      unsigned __int128 cur = (unsigned __int128)a.limbs[i] * b.limbs[j] + r.limbs[i + j] + carry;
      r.limbs[i + j] = (std::uint64_t)cur;
      carry = (std::uint64_t)(cur >> 64);
    }
    r.limbs[i + b.limbs.size()] = carry;
  }
  while (!r.limbs.empty() && r.limbs.back() == 0) r.limbs.pop_back();
  return r;
}

inline BigNat big_half(BigNat a) {
  std::uint64_t carry = 0;
  for (std::size_t i = a.limbs.size(); i-- > 0;) {
    std::uint64_t cur = a.limbs[i];
    a.limbs[i] = (cur >> 1) | (carry << 63);
    carry = cur & 1;
  }
  while (!a.limbs.empty() && a.limbs.back() == 0) a.limbs.pop_back();
  return a;
}

inline BigNat cantor_pair(const BigNat& x, const BigNat& y) {
  // (x+y)(x+y+1)/2 + y; divide whichever factor is even to stay integral
  BigNat s = big_add(x, y);
  BigNat s1 = big_add(s, BigNat(1));
  bool s_even = s.limbs.empty() || (s.limbs[0] & 1) == 0;
  BigNat tri = s_even ? big_mul(big_half(s), s1) : big_mul(s, big_half(s1));
  return big_add(tri, y);
}

// Canonical natural-number encoding of the code shapes the catalog produces
// (naturals, strings, arrays). Object-shaped codes are not pairable.
inline BigNat enc_code(const Json& j) {
  if (is_nat(j)) return cantor_pair(BigNat(), BigNat(j.get<std::uint64_t>()));
  if (j.is_string()) {
    BigNat acc;
    for (unsigned char c : j.get<std::string>())
      acc = big_add(cantor_pair(acc, BigNat(c)), BigNat(1));
    return cantor_pair(BigNat(2), acc);
  }
  if (j.is_array()) {
    BigNat acc;
    for (const auto& e : j) acc = big_add(cantor_pair(acc, enc_code(e)), BigNat(1));
    return cantor_pair(BigNat(1), acc);
  }
  throw DomainError("element code shape not supported by the canonical pairing");
}

inline BigNat enc_pair(const Json& x, const Json& y) {
  return cantor_pair(enc_code(x), enc_code(y));
}

// ---------------------------------------------------------------------------
// Membership

inline std::optional<std::size_t> finite_index(const OrderExpr& o, const Json& code) {
  for (std::size_t i = 0; i < o.codes.size(); ++i)
    if (o.codes[i] == code) return i;
  return std::nullopt;
}

inline bool is_tagged(const Json& j, const char* tag) {
  return j.is_array() && j.size() == 2 && j[0].is_string() && j[0].get<std::string>() == tag;
}

inline bool member(const OrderExpr& o, const Json& code) {
  switch (o.kind) {
    case OrderKind::Finite: return finite_index(o, code).has_value();
    case OrderKind::Omega:
    case OrderKind::OmegaStar: return is_nat(code);
    case OrderKind::Sum:
      if (is_tagged(code, "l")) return member(*o.left, code[1]);
      if (is_tagged(code, "r")) return member(*o.right, code[1]);
      return false;
    case OrderKind::ProdLex:
      return code.is_array() && code.size() == 2 && member(*o.left, code[0]) &&
             member(*o.right, code[1]);
    case OrderKind::OmegaPower: {
      if (!code.is_array()) return false;
      for (std::size_t i = 0; i < code.size(); ++i) {
        const auto& e = code[i];
        if (!e.is_array() || e.size() != 2 || !member(*o.arg, e[0]) || !is_nat(e[1]) ||
            e[1].get<std::uint64_t>() == 0)
          return false;
        if (i > 0 && !less(*o.arg, e[0], code[i - 1][0])) return false;  // strictly decreasing
      }
      return true;
    }
    case OrderKind::Cone:
      return member(*o.arg, code) && less(*o.arg, code, o.bound);
    case OrderKind::Notation: return notation_member(*o.spec, code);
    case OrderKind::KB: {
      if (!code.is_array()) return false;
      std::vector<std::uint64_t> path;
      for (const auto& e : code) {
        if (!is_nat(e)) return false;
        path.push_back(e.get<std::uint64_t>());
      }
      for (const auto& n : o.tree.nodes)
        if (n == path) return true;
      return false;
    }
    case OrderKind::Disj: {
      if (!code.is_array() || code.empty()) return false;
      for (std::size_t i = 0; i < code.size(); ++i) {
        const auto& p = code[i];
        if (!p.is_array() || p.size() != 2 || !member(*o.left, p[0]) || !member(*o.right, p[1]))
          return false;
        if (i > 0) {
          // strictly descending in both coordinates
          if (!less(*o.left, p[0], code[i - 1][0])) return false;
          if (!less(*o.right, p[1], code[i - 1][1])) return false;
        }
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Comparison (strict less). Inputs must be members.

inline void require_member(const OrderExpr& o, const Json& code) {
  if (!member(o, code)) throw DomainError("code is not a member of the order: " + code.dump());
}

namespace detail {

inline bool less_unchecked(const OrderExpr& o, const Json& x, const Json& y);

inline bool kb_less(const std::vector<std::uint64_t>& s, const std::vector<std::uint64_t>& r) {
  // s precedes r iff s properly extends r, or they diverge and s has the
  // smaller entry at the first differing coordinate.
  std::size_t n = std::min(s.size(), r.size());
  for (std::size_t i = 0; i < n; ++i)
    if (s[i] != r[i]) return s[i] < r[i];
  return s.size() > r.size();
}

inline std::vector<std::uint64_t> as_path(const Json& code) {
  std::vector<std::uint64_t> p;
  for (const auto& e : code) p.push_back(e.get<std::uint64_t>());
  return p;
}

inline bool less_unchecked(const OrderExpr& o, const Json& x, const Json& y) {
  if (x == y) return false;
  switch (o.kind) {
    case OrderKind::Finite: return *finite_index(o, x) < *finite_index(o, y);
    case OrderKind::Omega: return x.get<std::uint64_t>() < y.get<std::uint64_t>();
    case OrderKind::OmegaStar: return x.get<std::uint64_t>() > y.get<std::uint64_t>();
    case OrderKind::Sum: {
      bool xl = is_tagged(x, "l"), yl = is_tagged(y, "l");
      if (xl != yl) return xl;
      return less_unchecked(xl ? *o.left : *o.right, x[1], y[1]);
    }
    case OrderKind::ProdLex:
      if (x[1] != y[1]) return less_unchecked(*o.right, x[1], y[1]);
      return less_unchecked(*o.left, x[0], y[0]);
    case OrderKind::OmegaPower: {
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i][0] != y[i][0]) return less_unchecked(*o.arg, x[i][0], y[i][0]);
        if (x[i][1] != y[i][1]) return x[i][1].get<std::uint64_t>() < y[i][1].get<std::uint64_t>();
      }
      return x.size() < y.size();
    }
    case OrderKind::Cone: return less_unchecked(*o.arg, x, y);
    case OrderKind::Notation: return notation_compare_codes(*o.spec, x, y) == Cmp::Less;
    case OrderKind::KB: return kb_less(as_path(x), as_path(y));
    case OrderKind::Disj: {
      std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != y[i]) return enc_pair(x[i][0], x[i][1]) < enc_pair(y[i][0], y[i][1]);
      // The proper extension is the smaller element.
      return x.size() > y.size();
    }
  }
  return false;
}

}  // namespace detail

inline bool less(const OrderExpr& o, const Json& x, const Json& y) {
  require_member(o, x);
  require_member(o, y);
  return detail::less_unchecked(o, x, y);
}

inline Cmp compare_codes(const OrderExpr& o, const Json& x, const Json& y) {
  if (less(o, x, y)) return Cmp::Less;
  if (detail::less_unchecked(o, y, x)) return Cmp::Greater;
  return Cmp::Equal;
}

// ---------------------------------------------------------------------------
// Size / emptiness / extrema helpers

inline std::optional<std::uint64_t> size_if_finite(const OrderExpr& o);

inline bool is_empty(const OrderExpr& o) {
  auto n = size_if_finite(o);
  return n && *n == 0;
}

std::vector<Json> enumerate_prefix(const OrderExpr& o, std::size_t n);

inline std::optional<std::uint64_t> size_if_finite(const OrderExpr& o) {
  switch (o.kind) {
    case OrderKind::Finite: return o.codes.size();
    case OrderKind::Omega:
    case OrderKind::OmegaStar:
    case OrderKind::Notation: return std::nullopt;
    case OrderKind::Sum: {
      auto l = size_if_finite(*o.left), r = size_if_finite(*o.right);
      if (l && r) return *l + *r;
      return std::nullopt;
    }
    case OrderKind::ProdLex: {
      auto l = size_if_finite(*o.left), r = size_if_finite(*o.right);
      if ((l && *l == 0) || (r && *r == 0)) return 0;
      if (l && r) return *l * *r;
      return std::nullopt;
    }
    case OrderKind::OmegaPower: {
      auto e = size_if_finite(*o.arg);
      if (e && *e == 0) return 1;  // only the empty stack
      return std::nullopt;
    }
    case OrderKind::Cone: {
      auto p = size_if_finite(*o.arg);
      if (p) {
        std::uint64_t c = 0;
        for (const auto& x : enumerate_prefix(*o.arg, *p))
          if (detail::less_unchecked(*o.arg, x, o.bound)) ++c;
        return c;
      }
      if (o.arg->kind == OrderKind::Omega) return o.bound.get<std::uint64_t>();
      return std::nullopt;
    }
    case OrderKind::KB: return o.tree.nodes.size();
    case OrderKind::Disj: {
      auto l = size_if_finite(*o.left), r = size_if_finite(*o.right);
      if ((l && *l == 0) || (r && *r == 0)) return 0;
      if (!(l && r)) return std::nullopt;
      // Count all valid chains by enumerating: the grid is finite.
      std::size_t cap = 1;
      for (;;) {
        auto xs = enumerate_prefix(o, cap);
        if (xs.size() < cap) return xs.size();
        cap *= 4;
        if (cap > (std::size_t)1 << 24) return std::nullopt;  // defensive
      }
    }
  }
  return std::nullopt;
}

// Greatest element, if the order has one and it is computable for this shape.
inline std::optional<Json> greatest(const OrderExpr& o) {
  switch (o.kind) {
    case OrderKind::Finite:
      if (o.codes.empty()) return std::nullopt;
      return o.codes.back();
    case OrderKind::Omega: return std::nullopt;
    case OrderKind::OmegaStar: return Json(0);
    case OrderKind::Sum: {
      if (!is_empty(*o.right)) {
        auto g = greatest(*o.right);
        if (!g) return std::nullopt;
        return Json::array({"r", *g});
      }
      auto g = greatest(*o.left);
      if (!g) return std::nullopt;
      return Json::array({"l", *g});
    }
    case OrderKind::ProdLex: {
      if (is_empty(*o.left) || is_empty(*o.right)) return std::nullopt;
      auto gl = greatest(*o.left), gr = greatest(*o.right);
      if (gl && gr) return Json::array({*gl, *gr});
      return std::nullopt;
    }
    case OrderKind::OmegaPower:
      if (is_empty(*o.arg)) return Json::array();
      return std::nullopt;
    case OrderKind::Cone: {
      if (o.arg->kind == OrderKind::Omega) {
        std::uint64_t b = o.bound.get<std::uint64_t>();
        if (b == 0) return std::nullopt;
        return Json(b - 1);
      }
      auto p = size_if_finite(*o.arg);
      if (!p) throw DomainError("cannot decide greatest element of this cone");
      std::optional<Json> best;
      for (const auto& x : enumerate_prefix(*o.arg, *p))
        if (detail::less_unchecked(*o.arg, x, o.bound))
          if (!best || detail::less_unchecked(*o.arg, *best, x)) best = x;
      return best;
    }
    case OrderKind::Notation: return std::nullopt;  // t+1 is always a member
    case OrderKind::KB:
      if (o.tree.nodes.empty()) return std::nullopt;
      return Json::array();  // the root: every other node properly extends it
    case OrderKind::Disj: {
      auto n = size_if_finite(o);
      if (!n) return std::nullopt;
      std::optional<Json> best;
      for (const auto& x : enumerate_prefix(o, *n))
        if (!best || detail::less_unchecked(o, *best, x)) best = x;
      return best;
    }
  }
  return std::nullopt;
}

// Least element for the shapes where we need one (index orders, product
// bases). Conservative: nullopt when unknown.
inline std::optional<Json> least(const OrderExpr& o) {
  switch (o.kind) {
    case OrderKind::Finite:
      if (o.codes.empty()) return std::nullopt;
      return o.codes.front();
    case OrderKind::Omega: return Json(0);
    case OrderKind::OmegaStar: return std::nullopt;  // no least element
    case OrderKind::Sum: {
      if (!is_empty(*o.left)) {
        auto g = least(*o.left);
        if (!g) return std::nullopt;
        return Json::array({"l", *g});
      }
      auto g = least(*o.right);
      if (!g) return std::nullopt;
      return Json::array({"r", *g});
    }
    case OrderKind::ProdLex: {
      auto gl = least(*o.left), gr = least(*o.right);
      if (gl && gr) return Json::array({*gl, *gr});
      return std::nullopt;
    }
    case OrderKind::OmegaPower: return Json::array();
    case OrderKind::Notation: return Json(0);  // the Zero term is minimal
    case OrderKind::KB: {
      std::optional<Json> best;
      for (const auto& n : o.tree.nodes) {
        Json c(n);
        if (!best || detail::less_unchecked(o, c, *best)) best = c;
      }
      return best;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Deterministic enumeration

struct Stream {
  std::function<std::optional<Json>(std::size_t)> at;
};

inline Stream cached_stream(std::function<std::optional<Json>()> next) {
  auto cache = std::make_shared<std::vector<Json>>();
  auto done = std::make_shared<bool>(false);
  auto fn = std::make_shared<std::function<std::optional<Json>()>>(std::move(next));
  return Stream{[cache, done, fn](std::size_t k) -> std::optional<Json> {
    while (!*done && cache->size() <= k) {
      auto v = (*fn)();
      if (!v) {
        *done = true;
        break;
      }
      cache->push_back(std::move(*v));
    }
    if (k < cache->size()) return (*cache)[k];
    return std::nullopt;
  }};
}

inline Stream vector_stream(std::vector<Json> items) {
  auto v = std::make_shared<std::vector<Json>>(std::move(items));
  return Stream{[v](std::size_t k) -> std::optional<Json> {
    if (k < v->size()) return (*v)[k];
    return std::nullopt;
  }};
}

Stream order_stream(OrderPtr o);

namespace detail {

inline Stream omega_stream() {
  auto n = std::make_shared<std::uint64_t>(0);
  return cached_stream([n]() -> std::optional<Json> { return Json((*n)++); });
}

inline Stream sum_stream(OrderPtr l, OrderPtr r) {
  // Dovetail l0, r0, l1, r1, ...; once a side is exhausted, drain the other.
  auto ls = std::make_shared<Stream>(order_stream(l));
  auto rs = std::make_shared<Stream>(order_stream(r));
  auto li = std::make_shared<std::size_t>(0);
  auto ri = std::make_shared<std::size_t>(0);
  auto turn = std::make_shared<int>(0);  // 0: left's turn
  return cached_stream([=]() -> std::optional<Json> {
    for (int probe = 0; probe < 2; ++probe) {
      if (*turn == 0) {
        auto v = ls->at((*li));
        *turn = 1;
        if (v) {
          ++*li;
          return Json::array({"l", *v});
        }
      } else {
        auto v = rs->at((*ri));
        *turn = 0;
        if (v) {
          ++*ri;
          return Json::array({"r", *v});
        }
      }
    }
    return std::nullopt;
  });
}

inline Stream prod_lex_stream(OrderPtr b, OrderPtr e) {
  // Anti-diagonals d = i+j; within a diagonal, ascending exponent index j.
  auto bs = std::make_shared<Stream>(order_stream(b));
  auto es = std::make_shared<Stream>(order_stream(e));
  auto d = std::make_shared<std::uint64_t>(0);
  auto j = std::make_shared<std::uint64_t>(0);
  return cached_stream([=]() -> std::optional<Json> {
    for (;;) {
      if (*j > *d) {
        ++*d;
        *j = 0;
        // Termination: if neither stream reaches index d anywhere, the grid
        // is exhausted.
        if (!bs->at(0) || !es->at(0)) return std::nullopt;
        if (!bs->at((std::size_t)*d) && !es->at((std::size_t)*d)) {
          // both finite: check that some pair with i+j == d still exists
          bool any = false;
          for (std::uint64_t jj = 0; jj <= *d && !any; ++jj)
            if (es->at((std::size_t)jj) && bs->at((std::size_t)(*d - jj))) any = true;
          if (!any) return std::nullopt;
        }
      }
      std::uint64_t jj = (*j)++;
      auto ev = es->at((std::size_t)jj);
      if (!ev) continue;
      auto bv = bs->at((std::size_t)(*d - jj));
      if (!bv) continue;
      return Json::array({*bv, *ev});
    }
  });
}

// All exponent stacks of a given weight, where an entry at exponent index i
// with multiplicity m weighs (i+1)*m; exponents strictly decrease in the
// exponent order.
inline void gen_stacks(const Stream& es, const OrderExpr& eord, std::uint64_t weight,
                       std::optional<Json> ubound, std::vector<Json>& cur,
                       std::vector<Json>& out) {
  if (weight == 0) {
    out.push_back(Json(cur));
    return;
  }
  for (std::uint64_t i = 0; i + 1 <= weight; ++i) {
    auto ev = es.at((std::size_t)i);
    if (!ev) break;
    if (ubound && !detail::less_unchecked(eord, *ev, *ubound)) continue;
    for (std::uint64_t m = 1; (i + 1) * m <= weight; ++m) {
      cur.push_back(Json::array({*ev, m}));
      gen_stacks(es, eord, weight - (i + 1) * m, *ev, cur, out);
      cur.pop_back();
    }
  }
}

inline Stream omega_power_stream(OrderPtr e) {
  auto es = std::make_shared<Stream>(order_stream(e));
  auto w = std::make_shared<std::uint64_t>(0);
  auto buf = std::make_shared<std::vector<Json>>();
  auto pos = std::make_shared<std::size_t>(0);
  auto eord = e;
  return cached_stream([=]() -> std::optional<Json> {
    for (;;) {
      if (*pos < buf->size()) return (*buf)[(*pos)++];
      if (*w > 0 && !es->at(0)) return std::nullopt;  // empty exponent order: only []
      buf->clear();
      *pos = 0;
      std::vector<Json> cur;
      gen_stacks(*es, *eord, *w, std::nullopt, cur, *buf);
      ++*w;
      if (buf->empty() && *w > 1) {
        // weight w-1 yielded nothing; for a nonempty exponent order weight
        // (i=0,m=w-1) always exists, so this means exhaustion
        return std::nullopt;
      }
    }
  });
}

inline Stream cone_stream(OrderPtr parent, Json bound) {
  auto ps = std::make_shared<Stream>(order_stream(parent));
  auto i = std::make_shared<std::size_t>(0);
  auto emitted = std::make_shared<std::size_t>(0);
  auto p = parent;
  Json b = bound;
  return cached_stream([=]() -> std::optional<Json> {
    for (;;) {
      // Desk-scale scan cap: treat very sparse cones as exhausted.
      if (*i > 1000 + 50 * (*emitted + 1)) return std::nullopt;
      auto v = ps->at((*i)++);
      if (!v) return std::nullopt;
      if (detail::less_unchecked(*p, *v, b)) {
        ++*emitted;
        return *v;
      }
    }
  });
}

inline Stream kb_stream(const FiniteTree& t) {
  auto nodes = t.nodes;
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<Json> out;
  for (const auto& n : nodes) {
    Json j = Json::array();
    for (auto x : n) j.push_back(x);
    out.push_back(j);
  }
  return vector_stream(std::move(out));
}

// All chains of a given weight over the pair grid of a Disj order, where the
// pair (i,j) weighs i+j+2; coordinates strictly decrease in their orders.
inline void gen_chains(const Stream& as, const Stream& bs, const OrderExpr& a,
                       const OrderExpr& b, std::uint64_t weight,
                       const std::optional<Json>& preva, const std::optional<Json>& prevb,
                       std::vector<Json>& cur, std::vector<Json>& out) {
  if (weight == 0) {
    if (!cur.empty()) out.push_back(Json(cur));
    return;
  }
  for (std::uint64_t i = 0; i + 2 <= weight; ++i) {
    auto av = as.at((std::size_t)i);
    if (!av) break;
    if (preva && !detail::less_unchecked(a, *av, *preva)) continue;
    for (std::uint64_t j = 0; i + j + 2 <= weight; ++j) {
      auto bv = bs.at((std::size_t)j);
      if (!bv) break;
      if (prevb && !detail::less_unchecked(b, *bv, *prevb)) continue;
      cur.push_back(Json::array({*av, *bv}));
      gen_chains(as, bs, a, b, weight - (i + j + 2), *av, *bv, cur, out);
      cur.pop_back();
    }
  }
}

inline Stream disj_stream(OrderPtr a, OrderPtr b) {
  auto as = std::make_shared<Stream>(order_stream(a));
  auto bs = std::make_shared<Stream>(order_stream(b));
  auto w = std::make_shared<std::uint64_t>(2);
  auto buf = std::make_shared<std::vector<Json>>();
  auto pos = std::make_shared<std::size_t>(0);
  auto la = a, lb = b;
  std::optional<std::uint64_t> maxw;
  {
    auto sa = size_if_finite(*a), sb = size_if_finite(*b);
    if (sa && sb) {
      std::uint64_t m = std::min(*sa, *sb);
      maxw = m * (*sa + *sb + 2) + 2;
    }
  }
  return cached_stream([=]() -> std::optional<Json> {
    for (;;) {
      if (*pos < buf->size()) return (*buf)[(*pos)++];
      if (maxw && *w > *maxw) return std::nullopt;
      if (!as->at(0) || !bs->at(0)) return std::nullopt;  // one side empty
      buf->clear();
      *pos = 0;
      std::vector<Json> cur;
      gen_chains(*as, *bs, *la, *lb, *w, std::nullopt, std::nullopt, cur, *buf);
      ++*w;
    }
  });
}

}  // namespace detail

inline Stream order_stream(OrderPtr o) {
  switch (o->kind) {
    case OrderKind::Finite: return vector_stream(o->codes);
    case OrderKind::Omega:
    case OrderKind::OmegaStar: return detail::omega_stream();
    case OrderKind::Sum: return detail::sum_stream(o->left, o->right);
    case OrderKind::ProdLex: return detail::prod_lex_stream(o->left, o->right);
    case OrderKind::OmegaPower: return detail::omega_power_stream(o->arg);
    case OrderKind::Cone: return detail::cone_stream(o->arg, o->bound);
    case OrderKind::Notation: {
      auto spec = o->spec;
      auto n = std::make_shared<std::size_t>(0);
      auto buf = std::make_shared<std::vector<Json>>();
      return cached_stream([spec, n, buf]() -> std::optional<Json> {
        if (*n >= buf->size()) {
          std::size_t want = buf->size() == 0 ? 16 : buf->size() * 2;
          auto more = notation_prefix(*spec, want);
          if (more.size() <= buf->size()) return std::nullopt;
          *buf = std::move(more);
        }
        return (*buf)[(*n)++];
      });
    }
    case OrderKind::KB: return detail::kb_stream(o->tree);
    case OrderKind::Disj: return detail::disj_stream(o->left, o->right);
  }
  throw DomainError("unknown order kind");
}

inline std::vector<Json> enumerate_prefix(const OrderExpr& o, std::size_t n) {
  auto st = order_stream(std::make_shared<OrderExpr>(o));
  std::vector<Json> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = st.at(i);
    if (!v) break;
    out.push_back(std::move(*v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Descending chains (best effort: a miss is not a well-foundedness proof)

inline Stream descending_stream(OrderPtr o);

namespace detail {

inline Stream empty_stream() {
  return Stream{[](std::size_t) -> std::optional<Json> { return std::nullopt; }};
}

inline Stream map_stream(Stream s, std::function<Json(const Json&)> f) {
  auto sp = std::make_shared<Stream>(std::move(s));
  auto fp = std::make_shared<std::function<Json(const Json&)>>(std::move(f));
  return Stream{[sp, fp](std::size_t k) -> std::optional<Json> {
    auto v = sp->at(k);
    if (!v) return std::nullopt;
    return (*fp)(*v);
  }};
}

inline Stream concat_stream(Stream s1, Stream s2) {
  auto a = std::make_shared<Stream>(std::move(s1));
  auto b = std::make_shared<Stream>(std::move(s2));
  auto alen = std::make_shared<std::optional<std::size_t>>();
  return Stream{[a, b, alen](std::size_t k) -> std::optional<Json> {
    if (!*alen) {
      auto v = a->at(k);
      if (v) return v;
      std::size_t n = 0;
      while (a->at(n)) ++n;
      *alen = n;
    }
    if (k < **alen) return a->at(k);
    return b->at(k - **alen);
  }};
}

}  // namespace detail

inline Stream descending_stream(OrderPtr o) {
  using detail::map_stream;
  switch (o->kind) {
    case OrderKind::Finite:
    case OrderKind::Omega:
    case OrderKind::KB: return detail::empty_stream();
    case OrderKind::OmegaStar: return detail::omega_stream();
    case OrderKind::Sum: {
      auto r = map_stream(descending_stream(o->right),
                          [](const Json& v) { return Json::array({"r", v}); });
      auto l = map_stream(descending_stream(o->left),
                          [](const Json& v) { return Json::array({"l", v}); });
      return detail::concat_stream(std::move(r), std::move(l));
    }
    case OrderKind::ProdLex: {
      auto e = descending_stream(o->right);
      if (e.at(0)) {
        auto b0 = order_stream(o->left).at(0);
        if (!b0) return detail::empty_stream();
        Json fixed = *b0;
        return map_stream(std::move(e), [fixed](const Json& v) { return Json::array({fixed, v}); });
      }
      auto b = descending_stream(o->left);
      auto e0 = order_stream(o->right).at(0);
      if (b.at(0) && e0) {
        Json fixed = *e0;
        return map_stream(std::move(b), [fixed](const Json& v) { return Json::array({v, fixed}); });
      }
      return detail::empty_stream();
    }
    case OrderKind::OmegaPower:
      return map_stream(descending_stream(o->arg),
                        [](const Json& v) { return Json::array({Json::array({v, 1})}); });
    case OrderKind::Cone: {
      auto p = descending_stream(o->arg);
      auto parent = o->arg;
      Json b = o->bound;
      auto i = std::make_shared<std::size_t>(0);
      auto emitted = std::make_shared<std::size_t>(0);
      auto ps = std::make_shared<Stream>(std::move(p));
      return cached_stream([=]() -> std::optional<Json> {
        for (;;) {
          if (*i > 1000 + 50 * (*emitted + 1)) return std::nullopt;
          auto v = ps->at((*i)++);
          if (!v) return std::nullopt;
          if (detail::less_unchecked(*parent, *v, b)) {
            ++*emitted;
            return *v;
          }
        }
      });
    }
    case OrderKind::Notation: {
      auto spec = o->spec;
      auto cache = std::make_shared<std::vector<Json>>();
      auto done = std::make_shared<bool>(false);
      return Stream{[spec, cache, done](std::size_t k) -> std::optional<Json> {
        while (!*done && cache->size() <= k) {
          auto more = notation_descending(*spec, std::max<std::size_t>(2 * (k + 1), 8));
          if (!more || more->size() <= cache->size()) {
            *done = true;
            break;
          }
          *cache = std::move(*more);
        }
        if (k < cache->size()) return (*cache)[k];
        return std::nullopt;
      }};
    }
    case OrderKind::Disj: {
      auto a = descending_stream(o->left);
      auto b = descending_stream(o->right);
      if (!a.at(0) || !b.at(0)) return detail::empty_stream();
      auto as = std::make_shared<Stream>(std::move(a));
      auto bs = std::make_shared<Stream>(std::move(b));
      return Stream{[as, bs](std::size_t k) -> std::optional<Json> {
        // k-th element: the chain of the first k+1 pairs (longer = smaller).
        Json chain = Json::array();
        for (std::size_t i = 0; i <= k; ++i) {
          auto av = as->at(i);
          auto bv = bs->at(i);
          if (!av || !bv) return std::nullopt;
          chain.push_back(Json::array({*av, *bv}));
        }
        return chain;
      }};
    }
  }
  return detail::empty_stream();
}

inline std::optional<std::vector<Json>> find_descending(const OrderExpr& o, std::size_t fuel) {
  auto st = descending_stream(std::make_shared<OrderExpr>(o));
  std::vector<Json> out;
  for (std::size_t i = 0; i < fuel; ++i) {
    auto v = st.at(i);
    if (!v) return std::nullopt;
    out.push_back(std::move(*v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding checks

struct CodeMap {
  std::vector<std::pair<Json, Json>> pairs;  // (source code, target code)
};

// An order embedding on its finite domain: strictly monotone and target
// codes are members.
inline bool check_embedding(const CodeMap& f, const OrderExpr& a, const OrderExpr& b,
                            std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  for (const auto& [x, fx] : f.pairs) {
    if (!member(a, x)) return fail("domain code not in source order: " + x.dump());
    if (!member(b, fx)) return fail("image code not in target order: " + fx.dump());
  }
  for (std::size_t i = 0; i < f.pairs.size(); ++i)
    for (std::size_t j = 0; j < f.pairs.size(); ++j) {
      if (i == j) continue;
      const auto& [x, fx] = f.pairs[i];
      const auto& [y, fy] = f.pairs[j];
      if (x == y && !(fx == fy)) return fail("map is not a function at " + x.dump());
      if (x == y) continue;
      bool sx = detail::less_unchecked(a, x, y);
      bool tx = detail::less_unchecked(b, fx, fy);
      if (sx != tx)
        return fail("order not preserved on (" + x.dump() + ", " + y.dump() + ")");
    }
  return true;
}

}  // namespace ordlab
