#pragma once

// Relativized ordinal notation systems: terms over 0, +, binary phi, Gamma,
// and atoms naming elements of component orders (base elements, phi indices,
// fixed-point stages), with smart constructors that keep terms in normal
// form and a total comparison on each system's legal terms.

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "order.hpp"

namespace ordlab {

enum class TermKind { Zero, Atom, Sum, Phi, Gamma };
enum class AtomSort { Base, Index, Fix };

struct OrdTerm;
using TermPtr = std::shared_ptr<const OrdTerm>;

struct OrdTerm {
  TermKind kind = TermKind::Zero;
  AtomSort sort = AtomSort::Base;   // Atom
  Json pos;                         // Atom: element code of the sort's order
  std::vector<TermPtr> parts;       // Sum: summands; Phi: {index, arg}; Gamma: {arg}
};

inline TermPtr t_zero() {
  static const TermPtr z = std::make_shared<OrdTerm>();
  return z;
}

inline TermPtr t_atom(AtomSort s, Json pos) {
  auto t = std::make_shared<OrdTerm>();
  t->kind = TermKind::Atom;
  t->sort = s;
  t->pos = std::move(pos);
  return t;
}

inline TermPtr t_phi_raw(TermPtr i, TermPtr a) {
  auto t = std::make_shared<OrdTerm>();
  t->kind = TermKind::Phi;
  t->parts = {std::move(i), std::move(a)};
  return t;
}

inline TermPtr t_gamma_raw(TermPtr u) {
  auto t = std::make_shared<OrdTerm>();
  t->kind = TermKind::Gamma;
  t->parts = {std::move(u)};
  return t;
}

inline TermPtr t_sum_raw(std::vector<TermPtr> parts) {
  auto t = std::make_shared<OrdTerm>();
  t->kind = TermKind::Sum;
  t->parts = std::move(parts);
  return t;
}

inline bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Zero: return true;
    case TermKind::Atom: return a->sort == b->sort && a->pos == b->pos;
    default:
      if (a->parts.size() != b->parts.size()) return false;
      for (std::size_t i = 0; i < a->parts.size(); ++i)
        if (!term_eq(a->parts[i], b->parts[i])) return false;
      return true;
  }
}

// ---------------------------------------------------------------------------
// JSON codes for terms (the element codes of Notation orders)

inline Json term_to_json(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero: return Json(0);
    case TermKind::Atom: {
      Json j;
      j["a"] = t->sort == AtomSort::Base ? "base" : (t->sort == AtomSort::Index ? "idx" : "fix");
      j["p"] = t->pos;
      return j;
    }
    case TermKind::Phi: return Json{{"phi", Json::array({term_to_json(t->parts[0]), term_to_json(t->parts[1])})}};
    case TermKind::Gamma: return Json{{"G", term_to_json(t->parts[0])}};
    case TermKind::Sum: {
      Json arr = Json::array();
      for (const auto& p : t->parts) arr.push_back(term_to_json(p));
      return Json{{"s", arr}};
    }
  }
  return Json();
}

// Shape-level decoding; returns nullptr for malformed input.
inline TermPtr term_from_json(const Json& j) {
  if (j.is_number_integer() && j.get<std::int64_t>() == 0) return t_zero();
  if (!j.is_object() || j.size() == 0) return nullptr;
  if (j.contains("a")) {
    if (j.size() != 2 || !j.contains("p") || !j["a"].is_string()) return nullptr;
    std::string s = j["a"].get<std::string>();
    AtomSort sort;
    if (s == "base") sort = AtomSort::Base;
    else if (s == "idx") sort = AtomSort::Index;
    else if (s == "fix") sort = AtomSort::Fix;
    else return nullptr;
    return t_atom(sort, j["p"]);
  }
  if (j.contains("phi")) {
    if (j.size() != 1 || !j["phi"].is_array() || j["phi"].size() != 2) return nullptr;
    auto a = term_from_json(j["phi"][0]);
    auto b = term_from_json(j["phi"][1]);
    if (!a || !b) return nullptr;
    return t_phi_raw(a, b);
  }
  if (j.contains("G")) {
    if (j.size() != 1) return nullptr;
    auto u = term_from_json(j["G"]);
    if (!u) return nullptr;
    return t_gamma_raw(u);
  }
  if (j.contains("s")) {
    if (j.size() != 1 || !j["s"].is_array() || j["s"].size() < 2) return nullptr;
    std::vector<TermPtr> parts;
    for (const auto& e : j["s"]) {
      auto p = term_from_json(e);
      if (!p) return nullptr;
      parts.push_back(p);
    }
    return t_sum_raw(std::move(parts));
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Comparison

inline const NotationSystemSpec& absolute_spec() {
  static const NotationSystemSpec s{};  // kind == Absolute, no component orders
  return s;
}

inline SpecPtr make_spec(SpecKind k, OrderPtr base, OrderPtr index, OrderPtr count) {
  auto s = std::make_shared<NotationSystemSpec>();
  s->kind = k;
  s->base = std::move(base);
  s->index = std::move(index);
  s->count = std::move(count);
  return s;
}

inline bool is_marker(const TermPtr& t) {
  return t->kind == TermKind::Atom && (t->sort == AtomSort::Base || t->sort == AtomSort::Fix);
}

// Strongly-critical shapes: terms x with phi_x(0) = x.
inline bool is_critical(const TermPtr& t) { return t->kind == TermKind::Gamma || is_marker(t); }

Cmp compare(const NotationSystemSpec& S, const TermPtr& x, const TermPtr& y);

namespace detail {

inline const OrderExpr& sort_order(const NotationSystemSpec& S, AtomSort s) {
  const OrderPtr* o = nullptr;
  switch (s) {
    case AtomSort::Base: o = &S.base; break;
    case AtomSort::Index: o = &S.index; break;
    case AtomSort::Fix: o = &S.count; break;
  }
  if (!o || !*o) throw SortError("atom sort has no component order in this system");
  return **o;
}

inline Cmp atom_vs_atom(const NotationSystemSpec& S, const TermPtr& x, const TermPtr& y) {
  if (x->sort != y->sort) {
    // Index atoms denote small indices; Base markers sit below Fix markers.
    auto rank = [](AtomSort s) { return s == AtomSort::Index ? 0 : (s == AtomSort::Base ? 1 : 2); };
    return rank(x->sort) < rank(y->sort) ? Cmp::Less : Cmp::Greater;
  }
  const OrderExpr& o = sort_order(S, x->sort);
  if (x->pos == y->pos) return Cmp::Equal;
  return less(o, x->pos, y->pos) ? Cmp::Less : Cmp::Greater;
}

// x = Phi(a,b) against a strongly-critical t (treated as phi_t(0)).
inline Cmp phi_vs_critical(const NotationSystemSpec& S, const TermPtr& x, const TermPtr& t) {
  Cmp c = compare(S, x->parts[0], t);
  if (c == Cmp::Less) return compare(S, x->parts[1], t);
  if (c == Cmp::Equal) return x->parts[1]->kind == TermKind::Zero ? Cmp::Equal : Cmp::Greater;
  return Cmp::Greater;
}

}  // namespace detail

inline Cmp compare(const NotationSystemSpec& S, const TermPtr& x, const TermPtr& y) {
  if (term_eq(x, y)) return Cmp::Equal;
  if (x->kind == TermKind::Zero) return Cmp::Less;
  if (y->kind == TermKind::Zero) return Cmp::Greater;
  bool xs = x->kind == TermKind::Sum, ys = y->kind == TermKind::Sum;
  if (xs && ys) {
    std::size_t n = std::min(x->parts.size(), y->parts.size());
    for (std::size_t i = 0; i < n; ++i) {
      Cmp c = compare(S, x->parts[i], y->parts[i]);
      if (c != Cmp::Equal) return c;
    }
    return x->parts.size() < y->parts.size() ? Cmp::Less : Cmp::Greater;
  }
  if (!xs && ys) {
    Cmp c = compare(S, x, y->parts[0]);
    return c == Cmp::Greater ? Cmp::Greater : Cmp::Less;  // x = head means x < head+rest
  }
  if (xs && !ys) {
    Cmp c = compare(S, x->parts[0], y);
    return c == Cmp::Less ? Cmp::Less : Cmp::Greater;
  }
  // Both additively indecomposable and nonzero: Atom / Phi / Gamma.
  bool xphi = x->kind == TermKind::Phi, yphi = y->kind == TermKind::Phi;
  if (xphi && yphi) {
    Cmp c = compare(S, x->parts[0], y->parts[0]);
    if (c == Cmp::Less) return compare(S, x->parts[1], y);
    if (c == Cmp::Equal) return compare(S, x->parts[1], y->parts[1]);
    return compare(S, x, y->parts[1]);
  }
  if (xphi && is_critical(y)) return detail::phi_vs_critical(S, x, y);
  if (yphi && is_critical(x)) return flip(detail::phi_vs_critical(S, y, x));
  if (x->kind == TermKind::Gamma && y->kind == TermKind::Gamma)
    return compare(S, x->parts[0], y->parts[0]);
  if (x->kind == TermKind::Atom && y->kind == TermKind::Atom)
    return detail::atom_vs_atom(S, x, y);
  // Gamma vs marker atom, or an Index atom against a non-atom: no common
  // system contains both shapes.
  throw SortError("terms are not comparable in one notation system");
}

// ---------------------------------------------------------------------------
// Smart constructors

inline TermPtr mk_sum(const NotationSystemSpec& S, const std::vector<TermPtr>& parts) {
  std::vector<TermPtr> flat;
  for (const auto& p : parts) {
    if (p->kind == TermKind::Zero) continue;
    if (p->kind == TermKind::Sum)
      flat.insert(flat.end(), p->parts.begin(), p->parts.end());
    else
      flat.push_back(p);
  }
  std::vector<TermPtr> out;
  for (const auto& t : flat) {
    while (!out.empty() && compare(S, out.back(), t) == Cmp::Less) out.pop_back();
    out.push_back(t);
  }
  if (out.empty()) return t_zero();
  if (out.size() == 1) return out[0];
  return t_sum_raw(std::move(out));
}

inline TermPtr mk_phi(const NotationSystemSpec& S, const TermPtr& s, const TermPtr& t) {
  // phi_s fixes every phi_{s'}-value with s' strictly above s, and every
  // strongly-critical term above s.
  if (t->kind == TermKind::Phi && compare(S, t->parts[0], s) == Cmp::Greater) return t;
  if (is_critical(t) && compare(S, s, t) == Cmp::Less) return t;
  // phi_A(0) = A for strongly-critical A.
  if (t->kind == TermKind::Zero && is_critical(s)) return s;
  return t_phi_raw(s, t);
}

inline TermPtr mk_gamma(const TermPtr& u) {
  if (u->kind == TermKind::Gamma) return u;
  return t_gamma_raw(u);
}

// The least positive term of the system, if it has a canonical one.
inline std::optional<TermPtr> unit_opt(const NotationSystemSpec& S) {
  if (S.kind == SpecKind::PhiPlus || S.kind == SpecKind::PhiPlusIter) {
    auto l = least(*S.index);
    if (!l) return std::nullopt;
    return t_phi_raw(t_atom(AtomSort::Index, *l), t_zero());
  }
  return t_phi_raw(t_zero(), t_zero());
}

inline TermPtr unit(const NotationSystemSpec& S) {
  auto u = unit_opt(S);
  if (!u) throw DomainError("system has no canonical least positive term");
  return *u;
}

inline TermPtr numeral(const NotationSystemSpec& S, std::uint64_t n) {
  if (n == 0) return t_zero();
  TermPtr u = unit(S);
  if (n == 1) return u;
  return t_sum_raw(std::vector<TermPtr>(n, u));
}

inline bool is_unit(const NotationSystemSpec& S, const TermPtr& t) {
  auto u = unit_opt(S);
  return u && term_eq(t, *u);
}

// Numeral value of a term, when it is a finite sum of units.
inline std::optional<std::uint64_t> numeral_value(const NotationSystemSpec& S, const TermPtr& t) {
  if (t->kind == TermKind::Zero) return 0;
  if (is_unit(S, t)) return 1;
  if (t->kind != TermKind::Sum) return std::nullopt;
  for (const auto& p : t->parts)
    if (!is_unit(S, p)) return std::nullopt;
  return t->parts.size();
}

inline TermPtr one_plus(const NotationSystemSpec& S, const TermPtr& t) {
  return mk_sum(S, {unit(S), t});
}

// ---------------------------------------------------------------------------
// Term size (drives enumeration)

inline std::uint64_t bitlen(std::uint64_t n) {
  return n == 0 ? 0 : (std::uint64_t)(64 - std::countl_zero(n));
}

// Does this index come for free in Phi(index, arg)? True for the system's
// canonical least index (Zero, or the least Index atom).
inline bool is_free_index(const NotationSystemSpec& S, const TermPtr& a) {
  if (S.kind == SpecKind::PhiPlus || S.kind == SpecKind::PhiPlusIter) {
    if (a->kind != TermKind::Atom || a->sort != AtomSort::Index) return false;
    auto l = least(*S.index);
    return l && a->pos == *l;
  }
  return a->kind == TermKind::Zero;
}

inline std::uint64_t term_size(const NotationSystemSpec& S, const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero:
    case TermKind::Atom: return 1;
    case TermKind::Gamma: return 1 + term_size(S, t->parts[0]);
    case TermKind::Phi: {
      if (is_unit(S, t)) return 2;  // the numeral 1
      std::uint64_t i = is_free_index(S, t->parts[0]) ? 0 : term_size(S, t->parts[0]);
      return 1 + i + term_size(S, t->parts[1]);
    }
    case TermKind::Sum: {
      // Trailing units are coded compactly as one numeral.
      std::size_t k = 0;
      while (k < t->parts.size() && is_unit(S, t->parts[t->parts.size() - 1 - k])) ++k;
      std::size_t nu = t->parts.size() - k;
      if (nu == 0) return 1 + bitlen(k);  // a pure numeral
      std::uint64_t s = 1;
      for (std::size_t i = 0; i < nu; ++i) s += term_size(S, t->parts[i]);
      if (k > 0) s += 1 + bitlen(k);
      return s;
    }
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Legality and normality

inline bool legal(const NotationSystemSpec& S, const TermPtr& t);

namespace detail {

inline bool legal_index(const NotationSystemSpec& S, const TermPtr& a) {
  switch (S.kind) {
    case SpecKind::EpsPlus: return a->kind == TermKind::Zero;
    case SpecKind::PhiPlus:
    case SpecKind::PhiPlusIter:
      return a->kind == TermKind::Atom && a->sort == AtomSort::Index && member(*S.index, a->pos);
    case SpecKind::GammaPlus:
    case SpecKind::GammaPlusIter:
    case SpecKind::Absolute: return legal(S, a);
  }
  return false;
}

}  // namespace detail

inline bool legal(const NotationSystemSpec& S, const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero: return true;
    case TermKind::Atom:
      switch (t->sort) {
        case AtomSort::Index: return false;  // only legal as a phi index
        case AtomSort::Base: return S.base && member(*S.base, t->pos);
        case AtomSort::Fix: {
          if (S.kind != SpecKind::PhiPlusIter && S.kind != SpecKind::GammaPlusIter) return false;
          if (!member(*S.count, t->pos)) return false;
          auto g = greatest(*S.count);
          return !(g && *g == t->pos);  // the top stage names the sup itself
        }
      }
      return false;
    case TermKind::Phi:
      return detail::legal_index(S, t->parts[0]) && legal(S, t->parts[1]);
    case TermKind::Gamma:
      return S.kind == SpecKind::Absolute && legal(S, t->parts[0]);
    case TermKind::Sum: {
      // Legality is about shape only; summand ordering is is_normal's job.
      if (t->parts.size() < 2) return false;
      for (const auto& p : t->parts) {
        if (p->kind == TermKind::Zero || p->kind == TermKind::Sum) return false;
        if (!legal(S, p)) return false;
      }
      return true;
    }
  }
  return false;
}

inline TermPtr rebuild(const NotationSystemSpec& S, const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero:
    case TermKind::Atom: return t;
    case TermKind::Phi: return mk_phi(S, rebuild(S, t->parts[0]), rebuild(S, t->parts[1]));
    case TermKind::Gamma: return mk_gamma(rebuild(S, t->parts[0]));
    case TermKind::Sum: {
      std::vector<TermPtr> ps;
      for (const auto& p : t->parts) ps.push_back(rebuild(S, p));
      return mk_sum(S, ps);
    }
  }
  return t;
}

inline bool is_normal(const NotationSystemSpec& S, const TermPtr& t) {
  return term_eq(t, rebuild(S, t));
}

// ---------------------------------------------------------------------------
// Deterministic enumeration of legal normal terms

class TermEnumerator {
 public:
  TermEnumerator(const NotationSystemSpec& S, std::size_t pool_bound) : S_(S) {
    if (S.base)
      for (const auto& c : enumerate_prefix(*S.base, pool_bound))
        base_pool_.push_back(t_atom(AtomSort::Base, c));
    if (S.count) {
      auto g = greatest(*S.count);
      for (const auto& c : enumerate_prefix(*S.count, pool_bound))
        if (!(g && *g == c)) fix_pool_.push_back(t_atom(AtomSort::Fix, c));
    }
    if (S.kind == SpecKind::PhiPlus || S.kind == SpecKind::PhiPlusIter) {
      auto l = least(*S.index);
      for (const auto& c : enumerate_prefix(*S.index, pool_bound)) {
        index_pool_.push_back(t_atom(AtomSort::Index, c));
        index_free_.push_back(l && c == *l);
      }
    }
    unit_ = unit_opt(S);
    by_size_.push_back({});  // size 0: nothing
  }

  // All legal normal terms of exactly this size, in generation order.
  const std::vector<TermPtr>& of_size(std::size_t s) {
    while (by_size_.size() <= s) advance();
    return by_size_[s];
  }

 private:
  void advance() {
    std::size_t s = by_size_.size();
    std::vector<TermPtr> out;
    if (s == 1) {
      out.push_back(t_zero());
      for (const auto& a : base_pool_) out.push_back(a);
      for (const auto& a : fix_pool_) out.push_back(a);
    }
    if (s >= 2 && unit_) {
      // numerals n with 1 + bitlen(n) == s
      std::uint64_t lo = std::uint64_t(1) << (s - 2);
      std::uint64_t hi = std::uint64_t(1) << (s - 1);
      for (std::uint64_t n = lo; n < hi; ++n) out.push_back(numeral(S_, n));
    }
    if (s >= 2) gen_phi(s, out);
    if (s >= 2 && S_.kind == SpecKind::Absolute)
      for (const auto& u : by_size_[s - 1]) {
        auto t = mk_gamma(u);
        if (t->kind == TermKind::Gamma && term_eq(t->parts[0], u)) out.push_back(t);
      }
    if (s >= 3) gen_sums(s, out);
    by_size_.push_back(std::move(out));
  }

  void try_phi(const TermPtr& idx, bool free_idx, const TermPtr& arg, std::vector<TermPtr>& out) {
    if (free_idx && arg->kind == TermKind::Zero) return;  // that's the numeral 1
    auto t = mk_phi(S_, idx, arg);
    if (t->kind == TermKind::Phi && term_eq(t->parts[0], idx) && term_eq(t->parts[1], arg))
      out.push_back(t);
  }

  void gen_phi(std::size_t s, std::vector<TermPtr>& out) {
    switch (S_.kind) {
      case SpecKind::EpsPlus:
        for (const auto& b : by_size_[s - 1]) try_phi(t_zero(), true, b, out);
        break;
      case SpecKind::PhiPlus:
      case SpecKind::PhiPlusIter:
        for (std::size_t j = 0; j < index_pool_.size(); ++j) {
          std::size_t cost = index_free_[j] ? 0 : 1;
          if (s < 1 + cost + 1) continue;
          for (const auto& b : by_size_[s - 1 - cost])
            try_phi(index_pool_[j], index_free_[j], b, out);
        }
        break;
      case SpecKind::GammaPlus:
      case SpecKind::GammaPlusIter:
      case SpecKind::Absolute: {
        for (const auto& b : by_size_[s - 1]) try_phi(t_zero(), true, b, out);
        for (std::size_t isz = 1; isz + 2 <= s; ++isz)
          for (const auto& idx : by_size_[isz]) {
            if (idx->kind == TermKind::Zero) continue;
            for (const auto& b : by_size_[s - 1 - isz]) try_phi(idx, false, b, out);
          }
        break;
      }
    }
  }

  // Nonunit additively-indecomposable terms of a given size.
  std::vector<TermPtr> indec(std::size_t sz) {
    std::vector<TermPtr> v;
    for (const auto& t : by_size_[sz]) {
      if (t->kind == TermKind::Sum || t->kind == TermKind::Zero) continue;
      if (unit_ && term_eq(t, *unit_)) continue;
      v.push_back(t);
    }
    return v;
  }

  void gen_seq(std::size_t budget, std::size_t minlen, const TermPtr& ubound,
               std::vector<TermPtr>& cur, std::uint64_t krun,
               std::vector<TermPtr>& out) {
    if (budget == 0) {
      if (cur.size() >= minlen || (krun > 0 && !cur.empty())) {
        std::vector<TermPtr> parts = cur;
        if (krun > 0) {
          TermPtr u = *unit_;
          for (std::uint64_t i = 0; i < krun; ++i) parts.push_back(u);
        }
        out.push_back(t_sum_raw(std::move(parts)));
      }
      return;
    }
    for (std::size_t sz = 1; sz <= budget; ++sz)
      for (const auto& t : indec(sz)) {
        if (ubound && compare(S_, t, ubound) == Cmp::Greater) continue;
        cur.push_back(t);
        gen_seq(budget - sz, minlen, t, cur, krun, out);
        cur.pop_back();
      }
  }

  void gen_sums(std::size_t s, std::vector<TermPtr>& out) {
    // size = 1 + sum(nonunit sizes) + (krun ? 1 + bitlen(krun) : 0)
    for (std::uint64_t k = 0;; ++k) {
      if (k > 0 && !unit_) break;
      std::uint64_t kcost = k ? 1 + bitlen(k) : 0;
      std::uint64_t minimal = 1 + kcost + (k ? 1 : 2);  // at least 1 or 2 nonunits of size >= 1
      if (minimal > s) {
        if (k == 0) continue;  // k=0 may be impossible while k=1 fits
        break;
      }
      std::uint64_t budget = s - 1 - kcost;
      std::vector<TermPtr> cur;
      gen_seq((std::size_t)budget, k ? 1 : 2, nullptr, cur, k, out);
    }
  }

  const NotationSystemSpec& S_;
  std::vector<TermPtr> base_pool_, fix_pool_, index_pool_;
  std::vector<bool> index_free_;
  std::optional<TermPtr> unit_;
  std::vector<std::vector<TermPtr>> by_size_;
};

// All legal normal terms of size <= max_size; atom pools are bounded by
// max_size as well. Deterministic.
inline std::vector<TermPtr> enumerate_terms(const NotationSystemSpec& S, std::size_t max_size) {
  TermEnumerator e(S, max_size);
  std::vector<TermPtr> out;
  for (std::size_t s = 1; s <= max_size; ++s)
    for (const auto& t : e.of_size(s)) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// Order hooks (declared in order.hpp)

inline bool notation_member(const NotationSystemSpec& s, const Json& code) {
  auto t = term_from_json(code);
  if (!t) return false;
  if (!legal(s, t)) return false;
  return is_normal(s, t);
}

inline Cmp notation_compare_codes(const NotationSystemSpec& s, const Json& x, const Json& y) {
  auto tx = term_from_json(x), ty = term_from_json(y);
  if (!tx || !ty) throw DomainError("malformed notation code");
  return compare(s, tx, ty);
}

// The canonical element sequence of a Notation order: rounds r = 1, 2, ...
// emit the not-yet-seen terms of enumerate_terms(S, r). (Pools grow with the
// round, so the sequence is stable under extension.)
inline std::vector<Json> notation_prefix(const NotationSystemSpec& s, std::size_t n) {
  std::vector<Json> out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r <= 64 && out.size() < n; ++r) {
    for (const auto& t : enumerate_terms(s, r)) {
      Json j = term_to_json(t);
      if (seen.insert(j.dump()).second) {
        out.push_back(j);
        if (out.size() >= n) break;
      }
    }
  }
  return out;
}

inline std::optional<std::vector<Json>> notation_descending(const NotationSystemSpec& s,
                                                            std::size_t fuel) {
  std::vector<TermPtr> chain;
  if (s.base) {
    if (auto c = find_descending(*s.base, fuel)) {
      for (const auto& x : *c) chain.push_back(t_atom(AtomSort::Base, x));
    }
  }
  if (chain.empty() && s.count) {
    if (auto c = find_descending(*s.count, fuel + 1)) {
      auto g = greatest(*s.count);
      for (const auto& x : *c) {
        if (g && *g == x) continue;
        chain.push_back(t_atom(AtomSort::Fix, x));
        if (chain.size() == fuel) break;
      }
      if (chain.size() < fuel) chain.clear();
    }
  }
  if (chain.empty() && s.index) {
    if (auto c = find_descending(*s.index, fuel)) {
      for (const auto& x : *c)
        chain.push_back(t_phi_raw(t_atom(AtomSort::Index, x), t_zero()));
    }
  }
  if (chain.size() < fuel) return std::nullopt;
  std::vector<Json> out;
  for (const auto& t : chain) out.push_back(term_to_json(t));
  return out;
}

// ---------------------------------------------------------------------------
// Printing and parsing (ASCII term grammar)

inline std::string print_term(const NotationSystemSpec& S, const TermPtr& t, bool pretty = false);

namespace detail {

inline std::string print_pos(const Json& p) {
  if (p.is_number_integer()) return std::to_string(p.get<std::int64_t>());
  return p.dump();
}

inline std::string print_atom(const TermPtr& t) {
  const char* s = t->sort == AtomSort::Base ? "base" : (t->sort == AtomSort::Index ? "idx" : "fix");
  return std::string("a(") + s + "," + print_pos(t->pos) + ")";
}

}  // namespace detail

inline std::string print_term(const NotationSystemSpec& S, const TermPtr& t, bool pretty) {
  const char* phi = pretty ? "\xCF\x86" : "phi";    // φ
  const char* gam = pretty ? "\xCE\x93" : "G";      // Γ
  if (auto n = numeral_value(S, t)) return std::to_string(*n);
  switch (t->kind) {
    case TermKind::Zero: return "0";
    case TermKind::Atom: return detail::print_atom(t);
    case TermKind::Phi:
      return std::string(phi) + "(" + print_term(S, t->parts[0], pretty) + "," +
             print_term(S, t->parts[1], pretty) + ")";
    case TermKind::Gamma:
      return std::string(gam) + "(" + print_term(S, t->parts[0], pretty) + ")";
    case TermKind::Sum: {
      std::size_t k = 0;
      while (k < t->parts.size() && is_unit(S, t->parts[t->parts.size() - 1 - k])) ++k;
      std::string out;
      for (std::size_t i = 0; i < t->parts.size() - k; ++i) {
        if (i) out += "+";
        out += print_term(S, t->parts[i], pretty);
      }
      if (k > 0) out += "+" + std::to_string(k);
      return out;
    }
  }
  return "0";
}

namespace detail {

struct TermParser {
  const NotationSystemSpec& S;
  const std::string& src;
  std::size_t pos = 0;

  void skip() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(pos));
  }
  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < src.size() && (std::isalpha((unsigned char)src[pos]) || src[pos] == '_')) ++pos;
    return src.substr(start, pos - start);
  }
  std::uint64_t nat() {
    skip();
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
    if (start == pos) throw ParseError("expected a number at offset " + std::to_string(pos));
    return std::stoull(src.substr(start, pos - start));
  }

  TermPtr primary() {
    skip();
    if (pos >= src.size()) throw ParseError("unexpected end of term");
    char c = src[pos];
    if (std::isdigit((unsigned char)c)) return numeral(S, nat());
    std::string id = ident();
    if (id == "phi") {
      expect('(');
      TermPtr a = sum();
      expect(',');
      TermPtr b = sum();
      expect(')');
      return mk_phi(S, a, b);
    }
    if (id == "G") {
      expect('(');
      TermPtr u = sum();
      expect(')');
      return mk_gamma(u);
    }
    if (id == "a") {
      expect('(');
      std::string sn = ident();
      expect(',');
      std::uint64_t p = nat();
      expect(')');
      AtomSort sort;
      if (sn == "base") sort = AtomSort::Base;
      else if (sn == "idx") sort = AtomSort::Index;
      else if (sn == "fix") sort = AtomSort::Fix;
      else throw ParseError("unknown atom sort: " + sn);
      return t_atom(sort, Json(p));
    }
    throw ParseError("unexpected token at offset " + std::to_string(pos) +
                     (id.empty() ? "" : ": " + id));
  }

  TermPtr sum() {
    std::vector<TermPtr> parts{primary()};
    while (eat('+')) parts.push_back(primary());
    return mk_sum(S, parts);
  }
};

}  // namespace detail

// Parse (and normalize) a term. Index atoms may appear only as phi indices;
// the result must be legal in the given system.
inline TermPtr parse_term(const NotationSystemSpec& S, const std::string& s) {
  detail::TermParser p{S, s};
  TermPtr t;
  try {
    t = p.sum();
  } catch (const SortError&) {
    // normalization compared atoms of mismatched sorts: the term is ill-sorted
    throw DomainError("term is not legal in this system: " + s);
  }
  p.skip();
  if (p.pos != s.size()) throw ParseError("trailing input after term: " + s.substr(p.pos));
  if (!legal(S, t)) throw DomainError("term is not legal in this system: " + s);
  return t;
}

// ---------------------------------------------------------------------------
// Closed order-type rendering and ordinal arithmetic on absolute terms

inline TermPtr abs_numeral(std::uint64_t n) { return numeral(absolute_spec(), n); }

// Leading exponent of a nonzero absolute term x (the e with omega^e the
// largest omega-power <= x).
inline TermPtr leading_exp(const TermPtr& x) {
  const TermPtr& head = x->kind == TermKind::Sum ? x->parts[0] : x;
  if (is_unit(absolute_spec(), head)) return t_zero();
  if (head->kind == TermKind::Phi && head->parts[0]->kind == TermKind::Zero)
    return head->parts[1];
  return head;  // epsilon-class indecomposables are their own logarithm
}

// Ordinal product of absolute normal terms.
inline TermPtr mul(const TermPtr& x, const TermPtr& y) {
  const NotationSystemSpec& A = absolute_spec();
  if (x->kind == TermKind::Zero || y->kind == TermKind::Zero) return t_zero();
  std::vector<TermPtr> ysum = y->kind == TermKind::Sum ? y->parts : std::vector<TermPtr>{y};
  std::vector<TermPtr> acc;
  std::uint64_t run = 0;  // pending finite multiplier
  auto flush_run = [&]() {
    if (run == 0) return;
    // x * k = x + ... + x (k times); mk_sum absorbs correctly.
    std::vector<TermPtr> rep;
    for (std::uint64_t i = 0; i < run; ++i) rep.push_back(x);
    acc.push_back(mk_sum(A, rep));
    run = 0;
  };
  for (const auto& s : ysum) {
    if (is_unit(A, s)) {
      ++run;
      continue;
    }
    flush_run();
    // x * omega^e = omega^(leading_exp(x) + e)
    TermPtr e = leading_exp(s);
    acc.push_back(mk_phi(A, t_zero(), mk_sum(A, {leading_exp(x), e})));
  }
  flush_run();
  return mk_sum(A, acc);
}

// The 0-based stage index named by a count of this order type: predecessor
// for successors, the type itself for limits.
inline TermPtr stage_index(const TermPtr& count_type) {
  const NotationSystemSpec& A = absolute_spec();
  if (count_type->kind == TermKind::Zero) throw RenderError("empty count order");
  if (auto n = numeral_value(A, count_type)) return abs_numeral(*n - 1);
  if (count_type->kind == TermKind::Sum && is_unit(A, count_type->parts.back())) {
    std::vector<TermPtr> ps = count_type->parts;
    ps.pop_back();
    return mk_sum(A, ps);
  }
  return count_type;
}

// Closed absolute term for the order type, where one exists.
inline TermPtr order_type_term(const OrderExpr& o) {
  const NotationSystemSpec& A = absolute_spec();
  switch (o.kind) {
    case OrderKind::Finite: return abs_numeral(o.codes.size());
    case OrderKind::Omega: return mk_phi(A, t_zero(), abs_numeral(1));
    case OrderKind::OmegaStar: throw RenderError("omega* is not well-ordered");
    case OrderKind::Sum:
      return mk_sum(A, {order_type_term(*o.left), order_type_term(*o.right)});
    case OrderKind::ProdLex: return mul(order_type_term(*o.left), order_type_term(*o.right));
    case OrderKind::OmegaPower: return mk_phi(A, t_zero(), order_type_term(*o.arg));
    case OrderKind::Cone: {
      if (o.arg->kind == OrderKind::Omega) return abs_numeral(o.bound.get<std::uint64_t>());
      auto n = size_if_finite(o);
      if (n) return abs_numeral(*n);
      throw RenderError("no closed rendering for this cone");
    }
    case OrderKind::KB: return abs_numeral(o.tree.nodes.size());
    case OrderKind::Notation: {
      const auto& s = *o.spec;
      if (s.base && !is_empty(*s.base))
        throw RenderError("notation order over a nonempty base has no closed rendering");
      switch (s.kind) {
        case SpecKind::EpsPlus: return mk_phi(A, abs_numeral(1), t_zero());
        case SpecKind::PhiPlus: return mk_phi(A, order_type_term(*s.index), t_zero());
        case SpecKind::PhiPlusIter:
          return mk_phi(A, order_type_term(*s.index), stage_index(order_type_term(*s.count)));
        case SpecKind::GammaPlus: return mk_gamma(t_zero());
        case SpecKind::GammaPlusIter:
          return mk_gamma(stage_index(order_type_term(*s.count)));
        case SpecKind::Absolute: throw RenderError("absolute context is not an order");
      }
      throw RenderError("unknown notation kind");
    }
    case OrderKind::Disj: throw RenderError("no closed rendering for a disjunction order");
  }
  throw RenderError("unknown order kind");
}

}  // namespace ordlab
