#pragma once

// Symbolic calculus of theories and the notation-system dilators that bound
// them.  A theory expression rewrites to a dilator; applying the dilator to a
// base order yields a notation system, and applying it to the empty order
// yields the theory's proof-theoretic ordinal as a term.

#include <memory>
#include <string>

#include "notation.hpp"
#include "order.hpp"
#include "sexpr.hpp"

namespace ordlab {

enum class TheoryKind {
  ACA0,
  ACA0plus,
  SigmaAC0,
  SigmaAC,
  DCLike,
  ATR0,
  ATR,
  OmegaR,    // omega-model reflection along an order
  SynR,      // n-th-class syntactic reflection along an order
  FullRFN,   // full uniform reflection
};

struct TheoryExpr;
using TheoryPtr = std::shared_ptr<const TheoryExpr>;

struct TheoryExpr {
  TheoryKind kind;
  OrderPtr along;     // OmegaR, SynR
  int n = 0;          // SynR class
  TheoryPtr inner;    // OmegaR, SynR, FullRFN
};

inline TheoryPtr thy_base(TheoryKind k) {
  auto t = std::make_shared<TheoryExpr>();
  t->kind = k;
  return t;
}

inline TheoryPtr thy_omega_rfn(OrderPtr along, TheoryPtr inner) {
  auto t = std::make_shared<TheoryExpr>();
  t->kind = TheoryKind::OmegaR;
  t->along = std::move(along);
  t->inner = std::move(inner);
  return t;
}

inline TheoryPtr thy_rfn(int n, OrderPtr along, TheoryPtr inner) {
  if (n < 1) throw DomainError("reflection class must be >= 1");
  auto t = std::make_shared<TheoryExpr>();
  t->kind = TheoryKind::SynR;
  t->n = n;
  t->along = std::move(along);
  t->inner = std::move(inner);
  return t;
}

inline TheoryPtr thy_full_rfn(TheoryPtr inner) {
  auto t = std::make_shared<TheoryExpr>();
  t->kind = TheoryKind::FullRFN;
  t->inner = std::move(inner);
  return t;
}

enum class DilKind { PhiPlusD, PhiPlusIterD, GammaPlusD, GammaPlusIterD };

struct DilatorExpr {
  DilKind kind;
  OrderPtr index;  // PhiPlusD, PhiPlusIterD
  OrderPtr count;  // PhiPlusIterD, GammaPlusIterD
};
using DilatorPtr = std::shared_ptr<const DilatorExpr>;

inline DilatorPtr dil_phi_plus(OrderPtr index) {
  auto d = std::make_shared<DilatorExpr>();
  d->kind = DilKind::PhiPlusD;
  d->index = std::move(index);
  return d;
}

inline DilatorPtr dil_phi_plus_iter(OrderPtr index, OrderPtr count) {
  auto d = std::make_shared<DilatorExpr>();
  d->kind = DilKind::PhiPlusIterD;
  d->index = std::move(index);
  d->count = std::move(count);
  return d;
}

inline DilatorPtr dil_gamma_plus() {
  auto d = std::make_shared<DilatorExpr>();
  d->kind = DilKind::GammaPlusD;
  return d;
}

inline DilatorPtr dil_gamma_plus_iter(OrderPtr count) {
  auto d = std::make_shared<DilatorExpr>();
  d->kind = DilKind::GammaPlusIterD;
  d->count = std::move(count);
  return d;
}

inline bool dilator_eq(const DilatorPtr& a, const DilatorPtr& b) {
  if (a->kind != b->kind) return false;
  auto same = [](const OrderPtr& x, const OrderPtr& y) {
    if (!x || !y) return !x && !y;
    return order_eq(x, y);
  };
  return same(a->index, b->index) && same(a->count, b->count);
}

namespace detail {

inline OrderPtr fin_one() { return ord_finite({Json(0)}); }

inline OrderPtr eps_zero_order() {
  return ord_notation(make_spec(SpecKind::EpsPlus, ord_finite({}), nullptr, nullptr));
}

inline bool order_is_singleton(const OrderPtr& o) {
  auto s = size_if_finite(*o);
  return s && *s == 1;
}

// Reflection class assigned to a base theory when expanding full reflection.
inline int full_rfn_class(const TheoryPtr& t) {
  switch (t->kind) {
    case TheoryKind::ATR0: return 1;
    case TheoryKind::ACA0:
    case TheoryKind::SigmaAC0:
    case TheoryKind::DCLike: return 2;
    default: throw RewriteError("no reflection class assigned to this theory");
  }
}

}  // namespace detail

inline std::string print_theory(const TheoryPtr& t);

inline DilatorPtr theory_dilator(const TheoryPtr& t) {
  switch (t->kind) {
    case TheoryKind::ACA0:
      return dil_phi_plus(detail::fin_one());
    case TheoryKind::ATR0:
      return dil_gamma_plus();
    case TheoryKind::ACA0plus:
      return theory_dilator(thy_omega_rfn(detail::fin_one(), thy_base(TheoryKind::ACA0)));
    case TheoryKind::SigmaAC:
      return theory_dilator(thy_full_rfn(thy_base(TheoryKind::SigmaAC0)));
    case TheoryKind::ATR:
      return theory_dilator(thy_full_rfn(thy_base(TheoryKind::ATR0)));
    case TheoryKind::SigmaAC0:
    case TheoryKind::DCLike:
      throw RewriteError("no dilator rule matches " + print_theory(t) +
                         "; wrap it in a reflection principle");
    case TheoryKind::OmegaR: {
      if (t->inner->kind == TheoryKind::ACA0)
        return dil_phi_plus(ord_sum(detail::fin_one(), t->along));
      if (t->inner->kind == TheoryKind::SigmaAC0 && detail::order_is_singleton(t->along))
        return dil_gamma_plus();
      DilatorPtr d = theory_dilator(t->inner);
      if (d->kind == DilKind::PhiPlusD && detail::order_is_singleton(t->along))
        return dil_phi_plus(ord_sum(d->index, detail::fin_one()));
      throw RewriteError("no dilator rule matches " + print_theory(t));
    }
    case TheoryKind::SynR: {
      if (t->n == 2) {
        if (t->inner->kind == TheoryKind::SigmaAC0)
          return theory_dilator(thy_omega_rfn(t->along, thy_base(TheoryKind::ACA0)));
        if (t->inner->kind == TheoryKind::DCLike)
          return theory_dilator(
              thy_omega_rfn(ord_prod_lex(ord_omega(), t->along), thy_base(TheoryKind::ACA0)));
        DilatorPtr d = theory_dilator(t->inner);
        if (d->kind == DilKind::PhiPlusD)
          return dil_phi_plus_iter(d->index, ord_omega_power(t->along));
        throw RewriteError("no dilator rule matches " + print_theory(t));
      }
      if (t->n == 1) {
        if (t->inner->kind == TheoryKind::ACA0)
          return dil_phi_plus_iter(detail::fin_one(), ord_sum(detail::fin_one(), t->along));
        if (t->inner->kind == TheoryKind::ATR0)
          return dil_gamma_plus_iter(ord_sum(detail::fin_one(), t->along));
      }
      throw RewriteError("no dilator rule matches " + print_theory(t));
    }
    case TheoryKind::FullRFN: {
      int cls = detail::full_rfn_class(t->inner);
      return theory_dilator(thy_rfn(cls, detail::eps_zero_order(), t->inner));
    }
  }
  throw RewriteError("no dilator rule matches " + print_theory(t));
}

inline OrderPtr apply_dilator(const DilatorPtr& d, const OrderPtr& base) {
  switch (d->kind) {
    case DilKind::PhiPlusD:
      return ord_notation(make_spec(SpecKind::PhiPlus, base, d->index, nullptr));
    case DilKind::PhiPlusIterD:
      return ord_notation(make_spec(SpecKind::PhiPlusIter, base, d->index, d->count));
    case DilKind::GammaPlusD:
      return ord_notation(make_spec(SpecKind::GammaPlus, base, nullptr, nullptr));
    case DilKind::GammaPlusIterD:
      return ord_notation(make_spec(SpecKind::GammaPlusIter, base, nullptr, d->count));
  }
  throw DomainError("unknown dilator");
}

inline TermPtr pi11_ordinal(const DilatorPtr& d) {
  return order_type_term(*apply_dilator(d, ord_finite({})));
}

inline TermPtr pi11_ordinal(const TheoryPtr& t) { return pi11_ordinal(theory_dilator(t)); }

// Stage-indexed ordinal for iterated reflection over a fixed base; only the
// single-class reflection hierarchies over ACA0 and ATR0 are graded this way.
inline TermPtr iter_ordinal(const TheoryPtr& t) {
  if (t->kind != TheoryKind::SynR || t->n != 1 ||
      (t->inner->kind != TheoryKind::ACA0 && t->inner->kind != TheoryKind::ATR0))
    throw DomainError("iterated-stage ordinal is defined for (rfn 1 <order> ACA0|ATR0) only");
  return pi11_ordinal(t);
}

// Well-ordering principle equivalent to the theory, as a statement template
// plus the order transform it asserts preserves well-foundedness.
struct WopRule {
  std::string statement;
  std::function<OrderPtr(const OrderPtr&)> transform;
};

inline WopRule theory_wop(const TheoryPtr& t) {
  switch (t->kind) {
    case TheoryKind::ACA0:
      return {"WO(a) -> WO(w^a)", [](const OrderPtr& a) { return ord_omega_power(a); }};
    case TheoryKind::ACA0plus:
      return {"WO(a) -> WO(phi(1,a))", [](const OrderPtr& a) {
                return apply_dilator(
                    dil_phi_plus_iter(detail::fin_one(), ord_sum(detail::fin_one(), a)),
                    ord_finite({}));
              }};
    case TheoryKind::ATR0:
      return {"WO(a) -> WO(phi(a,0))", [](const OrderPtr& a) {
                return apply_dilator(dil_phi_plus(ord_sum(detail::fin_one(), a)),
                                     ord_finite({}));
              }};
    default:
      throw RewriteError("no well-ordering principle recorded for " + print_theory(t));
  }
}

inline TheoryPtr theory_from_sexpr(const detail::SExpr& e) {
  if (e.is_atom) {
    const std::string& a = e.atom;
    if (a == "ACA0") return thy_base(TheoryKind::ACA0);
    if (a == "ACA0+") return thy_base(TheoryKind::ACA0plus);
    if (a == "Sigma11-AC0") return thy_base(TheoryKind::SigmaAC0);
    if (a == "Sigma11-AC") return thy_base(TheoryKind::SigmaAC);
    if (a == "Sigma12-DC0") return thy_base(TheoryKind::DCLike);
    if (a == "ATR0") return thy_base(TheoryKind::ATR0);
    if (a == "ATR") return thy_base(TheoryKind::ATR);
    throw ParseError("unknown theory: " + a);
  }
  if (e.items.empty() || !e.items[0].is_atom) throw ParseError("expected a theory expression");
  const std::string& h = e.items[0].atom;
  auto want = [&](std::size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError(h + " takes " + std::to_string(n) + " argument(s)");
  };
  if (h == "omega-rfn") {
    want(2);
    return thy_omega_rfn(order_from_sexpr(e.items[1]), theory_from_sexpr(e.items[2]));
  }
  if (h == "rfn") {
    want(3);
    if (!e.items[1].is_atom) throw ParseError("rfn class must be a number");
    int n = 0;
    try {
      n = std::stoi(e.items[1].atom);
    } catch (...) {
      throw ParseError("rfn class must be a number");
    }
    return thy_rfn(n, order_from_sexpr(e.items[2]), theory_from_sexpr(e.items[3]));
  }
  if (h == "full-rfn") {
    want(1);
    return thy_full_rfn(theory_from_sexpr(e.items[1]));
  }
  throw ParseError("unknown theory constructor: " + h);
}

inline TheoryPtr parse_theory(const std::string& s) {
  detail::SExprParser p{s};
  auto e = p.parse();
  p.skip();
  if (p.pos != s.size()) throw ParseError("trailing input after theory expression");
  return theory_from_sexpr(e);
}

inline std::string print_theory(const TheoryPtr& t) {
  switch (t->kind) {
    case TheoryKind::ACA0: return "ACA0";
    case TheoryKind::ACA0plus: return "ACA0+";
    case TheoryKind::SigmaAC0: return "Sigma11-AC0";
    case TheoryKind::SigmaAC: return "Sigma11-AC";
    case TheoryKind::DCLike: return "Sigma12-DC0";
    case TheoryKind::ATR0: return "ATR0";
    case TheoryKind::ATR: return "ATR";
    case TheoryKind::OmegaR:
      return "(omega-rfn " + print_order(t->along) + " " + print_theory(t->inner) + ")";
    case TheoryKind::SynR:
      return "(rfn " + std::to_string(t->n) + " " + print_order(t->along) + " " +
             print_theory(t->inner) + ")";
    case TheoryKind::FullRFN: return "(full-rfn " + print_theory(t->inner) + ")";
  }
  return "?";
}

inline std::string print_dilator(const DilatorPtr& d) {
  switch (d->kind) {
    case DilKind::PhiPlusD: return "(phi+D " + print_order(d->index) + ")";
    case DilKind::PhiPlusIterD:
      return "(phi+iterD " + print_order(d->index) + " " + print_order(d->count) + ")";
    case DilKind::GammaPlusD: return "gamma+D";
    case DilKind::GammaPlusIterD: return "(gamma+iterD " + print_order(d->count) + ")";
  }
  return "?";
}

}  // namespace ordlab
