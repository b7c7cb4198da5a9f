#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ordlab/ordlab.hpp"
#include "oracle.hpp"

using namespace ordlab;

namespace {

const NotationSystemSpec& A() { return absolute_spec(); }

SpecPtr eps_empty() {
  static SpecPtr s = make_spec(SpecKind::EpsPlus, ord_finite({}), nullptr, nullptr);
  return s;
}

std::string norm(const NotationSystemSpec& S, const std::string& in) {
  return print_term(S, parse_term(S, in));
}

int cmp_int(Cmp c) { return c == Cmp::Less ? -1 : (c == Cmp::Equal ? 0 : 1); }

std::vector<TermPtr> pool_upto(const NotationSystemSpec& S, std::size_t maxsz) {
  TermEnumerator en(S, 6);
  std::vector<TermPtr> out;
  for (std::size_t s = 1; s <= maxsz; ++s)
    for (const auto& t : en.of_size(s)) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("term counts by size are stable") {
  TermEnumerator en(*eps_empty(), 6);
  const std::size_t expected[] = {1, 1, 3, 7, 15, 32, 70};
  for (std::size_t s = 1; s <= 7; ++s) CHECK(en.of_size(s).size() == expected[s - 1]);
}

TEST_CASE("the smallest terms are the numerals") {
  auto pool = pool_upto(*eps_empty(), 4);
  REQUIRE(pool.size() == 12);
  std::sort(pool.begin(), pool.end(), [&](const TermPtr& a, const TermPtr& b) {
    return compare(*eps_empty(), a, b) == Cmp::Less;
  });
  const char* expected[] = {"0", "1", "2", "3", "4", "5", "6", "7", "phi(0,1)", "phi(0,2)"};
  for (std::size_t i = 0; i < 10; ++i) CHECK(print_term(*eps_empty(), pool[i]) == expected[i]);
}

TEST_CASE("comparison below epsilon_0 agrees with Cantor normal forms") {
  auto pool = pool_upto(*eps_empty(), 6);
  std::vector<oracle::Cnf> cnfs;
  for (const auto& t : pool) cnfs.push_back(oracle::to_cnf(t));
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j)
      REQUIRE(cmp_int(compare(*eps_empty(), pool[i], pool[j])) ==
              oracle::cnf_cmp(cnfs[i], cnfs[j]));
  // distinct normal terms denote distinct ordinals
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      REQUIRE(!(cnfs[i] == cnfs[j]));
}

TEST_CASE("smart constructors normalize the classic identities") {
  CHECK(norm(A(), "1+phi(0,1)") == "phi(0,1)");
  CHECK(norm(A(), "phi(0,1)+1") == "phi(0,1)+1");
  CHECK(norm(A(), "0+5+0") == "5");
  CHECK(norm(A(), "phi(0,phi(1,0))") == "phi(1,0)");       // fixed point absorbed
  CHECK(norm(A(), "phi(1,phi(2,0))") == "phi(2,0)");
  CHECK(norm(A(), "phi(1,phi(1,0))") == "phi(1,phi(1,0))");  // same level stays
  CHECK(norm(A(), "phi(G(0),0)") == "G(0)");
  CHECK(norm(A(), "phi(0,G(0))") == "G(0)");
  CHECK(norm(A(), "G(G(0))") == "G(0)");
  CHECK(norm(A(), "phi(0,0)") == "1");
  CHECK(norm(A(), "phi(2,phi(1,0))") == "phi(2,phi(1,0))");
}

TEST_CASE("parsing rejects garbage and illegal terms") {
  CHECK_THROWS_AS(parse_term(A(), "phi("), ParseError);
  CHECK_THROWS_AS(parse_term(A(), "phi(1,0) junk"), ParseError);
  CHECK_THROWS_AS(parse_term(A(), "wibble"), ParseError);
  CHECK_THROWS_AS(parse_term(A(), ""), ParseError);
  CHECK_THROWS_AS(parse_term(A(), "a(wat,0)"), ParseError);
  // atoms need a system that provides their component order
  CHECK_THROWS_AS(parse_term(A(), "a(base,0)"), DomainError);
  CHECK_THROWS_AS(parse_term(A(), "a(fix,0)"), DomainError);
}

TEST_CASE("printing and parsing are inverse on enumerated terms") {
  std::vector<SpecPtr> systems = {
      eps_empty(),
      make_spec(SpecKind::EpsPlus, ord_finite({Json(0), Json(1)}), nullptr, nullptr),
      make_spec(SpecKind::PhiPlus, ord_finite({}), ord_omega(), nullptr),
      make_spec(SpecKind::GammaPlus, ord_finite({Json(0)}), nullptr, nullptr),
      make_spec(SpecKind::GammaPlusIter, ord_finite({}), nullptr,
                ord_finite({Json(0), Json(1), Json(2)})),
  };
  for (const auto& S : systems) {
    for (const auto& t : pool_upto(*S, 5)) {
      CHECK(legal(*S, t));
      CHECK(is_normal(*S, t));
      CHECK(term_eq(rebuild(*S, t), t));
      auto back = parse_term(*S, print_term(*S, t));
      CHECK(term_eq(back, t));
      // json codes round-trip as well
      auto viaj = term_from_json(term_to_json(t));
      REQUIRE(viaj);
      CHECK(term_eq(viaj, t));
    }
  }
}

TEST_CASE("the comparison is a strict total order on sampled triples") {
  auto gS = make_spec(SpecKind::GammaPlus, ord_finite({}), nullptr, nullptr);
  auto pool = pool_upto(*gS, 5);
  std::mt19937 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const auto& a = pool[rng() % pool.size()];
    const auto& b = pool[rng() % pool.size()];
    const auto& c = pool[rng() % pool.size()];
    auto ab = compare(*gS, a, b);
    REQUIRE(cmp_int(ab) == -cmp_int(compare(*gS, b, a)));
    REQUIRE((ab == Cmp::Equal) == term_eq(a, b));
    if (ab == Cmp::Less && compare(*gS, b, c) == Cmp::Less)
      REQUIRE(compare(*gS, a, c) == Cmp::Less);
  }
}

TEST_CASE("relativized base atoms behave like new epsilon numbers") {
  auto S = make_spec(SpecKind::EpsPlus, ord_finite({Json(0), Json(1)}), nullptr, nullptr);
  auto x0 = parse_term(*S, "a(base,0)"), x1 = parse_term(*S, "a(base,1)");
  CHECK(compare(*S, x0, x1) == Cmp::Less);
  CHECK(compare(*S, parse_term(*S, "phi(0,phi(0,1))"), x0) == Cmp::Less);
  CHECK(norm(*S, "phi(0,a(base,0))") == "a(base,0)");
  CHECK(norm(*S, "1+a(base,0)") == "a(base,0)");
  CHECK(norm(*S, "a(base,0)+1") == "a(base,0)+1");
  CHECK_THROWS_AS(parse_term(*S, "a(base,2)"), DomainError);
}

TEST_CASE("index atoms only occur as first arguments") {
  auto S = make_spec(SpecKind::PhiPlus, ord_finite({}), ord_omega(), nullptr);
  CHECK(norm(*S, "phi(a(idx,0),0)") == "1");  // the least index at 0 is the unit
  CHECK(norm(*S, "phi(a(idx,1),0)") == "phi(a(idx,1),0)");
  CHECK(compare(*S, parse_term(*S, "phi(a(idx,1),0)"), parse_term(*S, "phi(a(idx,2),0)")) ==
        Cmp::Less);
  CHECK_THROWS_AS(parse_term(*S, "a(idx,1)"), DomainError);
  CHECK_THROWS_AS(parse_term(*S, "a(idx,1)+1"), DomainError);
  CHECK_THROWS_AS(parse_term(*S, "G(0)"), DomainError);  // no gamma terms here
}

TEST_CASE("stage markers exclude the final stage") {
  auto S = make_spec(SpecKind::GammaPlusIter, ord_finite({}), nullptr,
                     ord_finite({Json(0), Json(1), Json(2)}));
  auto f0 = parse_term(*S, "a(fix,0)"), f1 = parse_term(*S, "a(fix,1)");
  CHECK(compare(*S, f0, f1) == Cmp::Less);
  CHECK_THROWS_AS(parse_term(*S, "a(fix,2)"), DomainError);
  // the enumeration only ever emits legal normal terms
  for (const auto& t : pool_upto(*S, 4)) {
    CHECK(legal(*S, t));
    CHECK(is_normal(*S, t));
  }
}

TEST_CASE("non-normal shapes are recognized and rebuilt") {
  auto one = parse_term(A(), "1"), w = parse_term(A(), "phi(0,1)");
  auto bad = t_sum_raw({one, w});  // 1 + omega written backwards
  CHECK(legal(A(), bad));
  CHECK_FALSE(is_normal(A(), bad));
  CHECK(print_term(A(), rebuild(A(), bad)) == "phi(0,1)");
  auto badphi = t_phi_raw(t_zero(), t_phi_raw(one, t_zero()));  // phi(0, phi(1,0))
  CHECK_FALSE(is_normal(A(), badphi));
  CHECK(print_term(A(), rebuild(A(), badphi)) == "phi(1,0)");
}

TEST_CASE("term sizes follow the catalog metric") {
  struct Row { const char* term; std::uint64_t size; };
  for (auto r : {Row{"0", 1}, Row{"1", 2}, Row{"2", 3}, Row{"3", 3}, Row{"4", 4},
                 Row{"phi(0,1)", 3}, Row{"phi(0,1)+1", 6}, Row{"phi(1,0)", 4}, Row{"G(0)", 2}})
    CHECK(term_size(A(), parse_term(A(), r.term)) == r.size);
}

TEST_CASE("ordinal product on closed terms") {
  struct Row { const char* a, *b, *out; };
  for (auto r : {Row{"phi(0,1)", "phi(0,1)", "phi(0,2)"},
                 Row{"phi(0,1)", "phi(1,0)", "phi(1,0)"},
                 Row{"phi(0,1)+1", "2", "phi(0,1)+phi(0,1)+1"},
                 Row{"phi(0,1)+1", "phi(0,1)", "phi(0,2)"},
                 Row{"2", "phi(0,1)", "phi(0,1)"},
                 Row{"3", "4", "12"},
                 Row{"0", "phi(1,0)", "0"}})
    CHECK(print_term(A(), mul(parse_term(A(), r.a), parse_term(A(), r.b))) == r.out);
}

TEST_CASE("closed order types of catalog orders") {
  CHECK(print_term(A(), order_type_term(*ord_finite({Json(0), Json(1)}))) == "2");
  CHECK(print_term(A(), order_type_term(*ord_omega())) == "phi(0,1)");
  CHECK(print_term(A(), order_type_term(*ord_sum(ord_finite({Json(0)}), ord_omega()))) ==
        "phi(0,1)");
  CHECK(print_term(A(), order_type_term(*ord_prod_lex(ord_omega(), ord_omega()))) == "phi(0,2)");
  CHECK(print_term(A(), order_type_term(*ord_omega_power(ord_omega()))) == "phi(0,phi(0,1))");
  CHECK(print_term(A(), order_type_term(*ord_cone(ord_omega(), Json(4)))) == "4");
  CHECK(print_term(A(), order_type_term(*kb_order(FiniteTree{{{}, {0}, {1}}}))) == "3");
  CHECK(print_term(A(), order_type_term(*ord_notation(eps_empty()))) == "phi(1,0)");
  CHECK_THROWS_AS(order_type_term(*ord_omega_star()), RenderError);
  CHECK_THROWS_AS(order_type_term(*ord_sum(ord_omega(), ord_omega_star())), RenderError);
  CHECK_THROWS_AS(order_type_term(*ord_disj(ord_omega(), ord_omega_star())), RenderError);
  auto overbase = make_spec(SpecKind::EpsPlus, ord_finite({Json(0)}), nullptr, nullptr);
  CHECK_THROWS_AS(order_type_term(*ord_notation(overbase)), RenderError);
}

TEST_CASE("stage indices take predecessors exactly at successors") {
  CHECK(print_term(A(), stage_index(parse_term(A(), "3"))) == "2");
  CHECK(print_term(A(), stage_index(parse_term(A(), "1"))) == "0");
  CHECK(print_term(A(), stage_index(parse_term(A(), "phi(0,1)+1"))) == "phi(0,1)");
  CHECK(print_term(A(), stage_index(parse_term(A(), "phi(0,1)"))) == "phi(0,1)");
  CHECK(print_term(A(), stage_index(parse_term(A(), "phi(1,0)"))) == "phi(1,0)");
  CHECK_THROWS_AS(stage_index(t_zero()), RenderError);
}

TEST_CASE("pretty printing uses the traditional symbols") {
  CHECK(print_term(A(), parse_term(A(), "phi(1,0)"), true) == "\xCF\x86(1,0)");
  CHECK(print_term(A(), parse_term(A(), "G(0)"), true) == "\xCE\x93(0)");
}

TEST_CASE("two presentations of the same system order their codes alike") {
  auto phiS = make_spec(SpecKind::PhiPlus, ord_finite({}), ord_finite({Json(0)}), nullptr);
  auto oe = ord_notation(eps_empty()), op = ord_notation(phiS);
  auto xe = enumerate_prefix(*oe, 12), xp = enumerate_prefix(*op, 12);
  REQUIRE(xe.size() == 12);
  REQUIRE(xp.size() == 12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j)
      CHECK(compare_codes(*oe, xe[i], xe[j]) == compare_codes(*op, xp[i], xp[j]));
}
