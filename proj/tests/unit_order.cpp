#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ordlab/ordlab.hpp"
#include "oracle.hpp"

using namespace ordlab;

namespace {

Json J(std::uint64_t n) { return Json(n); }

std::vector<Json> codes(std::initializer_list<std::uint64_t> xs) {
  std::vector<Json> v;
  for (auto x : xs) v.push_back(J(x));
  return v;
}

std::string dump_all(const std::vector<Json>& xs) {
  std::string s;
  for (const auto& x : xs) s += x.dump() + " ";
  return s;
}

}  // namespace

TEST_CASE("finite orders follow the listed sequence") {
  auto o = ord_finite(codes({5, 2, 9}));
  CHECK(member(*o, J(5)));
  CHECK(member(*o, J(2)));
  CHECK_FALSE(member(*o, J(4)));
  CHECK(less(*o, J(5), J(2)));
  CHECK(less(*o, J(2), J(9)));
  CHECK_FALSE(less(*o, J(9), J(9)));
  CHECK(compare_codes(*o, J(9), J(5)) == Cmp::Greater);
  CHECK(*least(*o) == J(5));
  CHECK(*greatest(*o) == J(9));
  CHECK(*size_if_finite(*o) == 3);
  CHECK(enumerate_prefix(*o, 10) == codes({5, 2, 9}));
  CHECK_THROWS_AS(less(*o, J(5), J(4)), DomainError);
}

TEST_CASE("finite orders reject duplicate codes") {
  CHECK_THROWS_AS(ord_finite(codes({1, 1})), DomainError);
}

TEST_CASE("omega and its reverse") {
  auto w = ord_omega(), ws = ord_omega_star();
  CHECK(less(*w, J(3), J(4)));
  CHECK(less(*ws, J(4), J(3)));
  CHECK_FALSE(member(*w, Json("x")));
  CHECK(member(*w, J(0)));
  CHECK(*least(*w) == J(0));
  CHECK_FALSE(greatest(*w).has_value());
  CHECK(*greatest(*ws) == J(0));
  CHECK_FALSE(least(*ws).has_value());
  CHECK_FALSE(size_if_finite(*w).has_value());
  CHECK(enumerate_prefix(*w, 4) == codes({0, 1, 2, 3}));
}

TEST_CASE("sum orders tag their sides and dovetail their streams") {
  auto o = ord_sum(ord_omega(), ord_finite(codes({7, 9})));
  Json l1 = Json::array({"l", J(1)}), r7 = Json::array({"r", J(7)}), r9 = Json::array({"r", J(9)});
  CHECK(member(*o, l1));
  CHECK(member(*o, r7));
  CHECK_FALSE(member(*o, Json::array({"m", J(1)})));
  CHECK(less(*o, l1, r7));
  CHECK(less(*o, r7, r9));
  CHECK_FALSE(less(*o, r7, l1));
  auto xs = enumerate_prefix(*o, 8);
  CHECK(dump_all(xs) == "[\"l\",0] [\"r\",7] [\"l\",1] [\"r\",9] [\"l\",2] [\"l\",3] [\"l\",4] [\"l\",5] ");
  CHECK(*least(*o) == Json::array({"l", J(0)}));
  CHECK(*greatest(*o) == r9);
}

TEST_CASE("lexicographic products compare exponent first") {
  auto o = ord_prod_lex(ord_finite(codes({0, 1})), ord_omega());
  Json a = Json::array({J(0), J(2)}), b = Json::array({J(1), J(2)}), c = Json::array({J(0), J(3)});
  CHECK(member(*o, a));
  CHECK_FALSE(member(*o, Json::array({J(2), J(0)})));
  CHECK(less(*o, a, b));   // same exponent, base decides
  CHECK(less(*o, b, c));   // larger exponent dominates
  auto xs = enumerate_prefix(*o, 8);
  CHECK(dump_all(xs) == "[0,0] [1,0] [0,1] [1,1] [0,2] [1,2] [0,3] [1,3] ");
  CHECK(*size_if_finite(*ord_prod_lex(ord_finite(codes({0, 1})), ord_finite(codes({0, 1, 2})))) == 6);
}

TEST_CASE("base-omega power orders use descending exponent stacks") {
  auto o = ord_omega_power(ord_finite(codes({0, 1})));
  Json zero = Json::array();
  Json one = Json::array({Json::array({J(0), J(1)})});
  Json w = Json::array({Json::array({J(1), J(1)})});
  Json wp1 = Json::array({Json::array({J(1), J(1)}), Json::array({J(0), J(1)})});
  CHECK(member(*o, zero));
  CHECK(member(*o, wp1));
  CHECK_FALSE(member(*o, Json::array({Json::array({J(0), J(0)})})));  // zero multiplicity
  CHECK_FALSE(member(*o, Json::array({Json::array({J(0), J(1)}), Json::array({J(1), J(1)})})));
  CHECK(less(*o, zero, one));
  CHECK(less(*o, one, w));
  CHECK(less(*o, w, wp1));
  auto xs = enumerate_prefix(*o, 8);
  CHECK(dump_all(xs) == "[] [[0,1]] [[0,2]] [[1,1]] [[0,3]] [[1,1],[0,1]] [[0,4]] [[1,1],[0,2]] ");
  CHECK(*least(*o) == zero);
}

TEST_CASE("cones restrict a parent order below a bound") {
  auto o = ord_cone(ord_omega(), J(3));
  CHECK(member(*o, J(2)));
  CHECK_FALSE(member(*o, J(3)));
  CHECK(*size_if_finite(*o) == 3);
  CHECK(enumerate_prefix(*o, 8) == codes({0, 1, 2}));
  CHECK(*greatest(*o) == J(2));
  auto deep = ord_cone(ord_prod_lex(ord_omega(), ord_omega()), Json::array({J(0), J(1)}));
  CHECK(member(*deep, Json::array({J(5), J(0)})));
  CHECK_FALSE(member(*deep, Json::array({J(0), J(1)})));
}

TEST_CASE("tree orders agree with the sequence definition") {
  FiniteTree t{{{}, {0}, {0, 0}, {1}}};
  auto o = kb_order(t);
  Json root = Json::array(), n0 = Json(std::vector<std::uint64_t>{0}),
       n00 = Json(std::vector<std::uint64_t>{0, 0}), n1 = Json(std::vector<std::uint64_t>{1});
  CHECK(less(*o, n00, n0));  // extension first
  CHECK(less(*o, n0, root));
  CHECK(less(*o, n0, n1));   // split at the first entry
  CHECK(less(*o, n00, n1));
  CHECK(*greatest(*o) == root);
  CHECK(*least(*o) == n00);
  CHECK(*size_if_finite(*o) == 4);
  auto xs = enumerate_prefix(*o, 8);
  CHECK(dump_all(xs) == "[] [0] [1] [0,0] ");
}

TEST_CASE("malformed trees are rejected") {
  CHECK_THROWS_AS(kb_order(FiniteTree{{{0}}}), DomainError);           // no root
  CHECK_THROWS_AS(kb_order(FiniteTree{{{}, {0, 0}}}), DomainError);    // gap
  CHECK_THROWS_AS(kb_order(FiniteTree{{{}, {0}, {0}}}), DomainError);  // duplicate
}

TEST_CASE("tree orders match the reference comparator on random trees") {
  std::mt19937 rng(20240817);
  for (int round = 0; round < 12; ++round) {
    auto nodes = oracle::random_tree(rng, 4 + round, 3);
    auto o = kb_order(FiniteTree{nodes});
    for (const auto& x : nodes)
      for (const auto& y : nodes)
        CHECK(less(*o, Json(x), Json(y)) == oracle::kb_less_ref(x, y));
  }
}

TEST_CASE("pair codes are deterministic and injective") {
  CHECK(enc_pair(J(0), J(0)) == enc_pair(J(0), J(0)));
  std::set<BigNat> seen;
  for (std::uint64_t a = 0; a < 12; ++a)
    for (std::uint64_t b = 0; b < 12; ++b)
      CHECK(seen.insert(enc_pair(J(a), J(b))).second);
  // huge and deeply nested codes stay codable and ordered
  CHECK(enc_code(Json(std::uint64_t(UINT64_MAX) - 1)) <
        enc_code(Json(std::uint64_t(UINT64_MAX))));
  Json deep = Json::array({J(1000), J(1000)});
  for (int i = 0; i < 4; ++i) deep = Json::array({deep, deep});
  CHECK(enc_code(deep) == enc_code(deep));
  CHECK_THROWS_AS(enc_code(Json(1.5)), DomainError);
  // strings and nested arrays are codable
  CHECK(enc_code(Json("l")) != enc_code(Json("r")));
  CHECK(enc_code(Json::array({J(1), J(2)})) != enc_code(Json::array({J(2), J(1)})));
}

TEST_CASE("every catalog stream enumerates distinct members") {
  std::vector<OrderPtr> catalog = {
      ord_finite(codes({3, 1, 4})),
      ord_omega(),
      ord_omega_star(),
      ord_sum(ord_finite(codes({0})), ord_omega()),
      ord_prod_lex(ord_omega(), ord_finite(codes({0, 1}))),
      ord_omega_power(ord_omega()),
      ord_cone(ord_omega(), J(5)),
      kb_order(FiniteTree{{{}, {0}, {1}, {1, 0}}}),
      ord_disj(ord_omega(), ord_omega_star()),
      ord_disj(ord_finite(codes({0, 1, 2})), ord_finite(codes({0, 1}))),
  };
  for (const auto& o : catalog) {
    auto xs = enumerate_prefix(*o, 25);
    std::set<std::string> seen;
    for (const auto& x : xs) {
      CHECK(member(*o, x));
      CHECK(seen.insert(x.dump()).second);
    }
    auto n = size_if_finite(*o);
    if (n) CHECK(xs.size() == std::min<std::size_t>(*n, 25));
    else CHECK(xs.size() == 25);
  }
}

TEST_CASE("descending probes find chains exactly when one exists") {
  CHECK_FALSE(find_descending(*ord_omega(), 3).has_value());
  CHECK_FALSE(find_descending(*ord_finite(codes({0, 1, 2})), 2).has_value());
  auto c = find_descending(*ord_omega_star(), 5);
  REQUIRE(c.has_value());
  CHECK(*c == codes({0, 1, 2, 3, 4}));

  std::vector<OrderPtr> ill = {
      ord_omega_star(),
      ord_sum(ord_omega_star(), ord_omega()),
      ord_prod_lex(ord_omega(), ord_omega_star()),
      ord_prod_lex(ord_omega_star(), ord_omega()),
      ord_omega_power(ord_omega_star()),
      ord_disj(ord_omega_star(), ord_omega_star()),
      ord_cone(ord_omega_star(), J(2)),
  };
  for (const auto& o : ill) {
    auto chain = find_descending(*o, 4);
    REQUIRE(chain.has_value());
    REQUIRE(chain->size() == 4);
    for (std::size_t i = 0; i + 1 < chain->size(); ++i)
      CHECK(less(*o, (*chain)[i + 1], (*chain)[i]));
  }
  // the disjunction of a well order with anything is well ordered
  CHECK_FALSE(find_descending(*ord_disj(ord_omega(), ord_omega_star()), 3).has_value());
  CHECK_FALSE(find_descending(*ord_disj(ord_omega_star(), ord_omega()), 3).has_value());
}

TEST_CASE("embedding checks accept monotone maps and explain failures") {
  auto a = ord_finite(codes({0, 1}));
  auto b = ord_finite(codes({5, 2, 9}));
  CodeMap good{{{J(0), J(5)}, {J(1), J(9)}}};
  std::string why;
  CHECK(check_embedding(good, *a, *b, &why));

  CodeMap flipped{{{J(0), J(9)}, {J(1), J(5)}}};
  CHECK_FALSE(check_embedding(flipped, *a, *b, &why));
  CHECK(why.find("order not preserved") != std::string::npos);

  CodeMap offmap{{{J(0), J(4)}}};
  CHECK_FALSE(check_embedding(offmap, *a, *b, &why));
  CHECK(why.find("image code not in target order") != std::string::npos);

  CodeMap offdom{{{J(7), J(5)}}};
  CHECK_FALSE(check_embedding(offdom, *a, *b, &why));
  CHECK(why.find("domain code not in source order") != std::string::npos);

  CodeMap twovalued{{{J(0), J(5)}, {J(0), J(2)}}};
  CHECK_FALSE(check_embedding(twovalued, *a, *b, &why));
  CHECK(why.find("not a function") != std::string::npos);
}

TEST_CASE("notation orders expose normal terms as codes") {
  auto S = make_spec(SpecKind::EpsPlus, ord_finite({}), nullptr, nullptr);
  auto o = ord_notation(S);
  Json zero = J(0);
  Json one = Json{{"phi", Json::array({J(0), J(0)})}};
  Json omega = Json{{"phi", Json::array({J(0), one})}};
  CHECK(member(*o, zero));
  CHECK(member(*o, one));
  CHECK(member(*o, omega));
  // 1 + omega is not in normal form, so it is not a code
  CHECK_FALSE(member(*o, Json{{"s", Json::array({one, omega})}}));
  CHECK(less(*o, one, omega));
  CHECK(*least(*o) == zero);
  CHECK_FALSE(greatest(*o).has_value());
  CHECK_FALSE(find_descending(*o, 3).has_value());
  // over an ill-founded base the notation order is ill-founded too
  auto Sbad = make_spec(SpecKind::EpsPlus, ord_omega_star(), nullptr, nullptr);
  auto chain = find_descending(*ord_notation(Sbad), 4);
  REQUIRE(chain.has_value());
  auto ob = ord_notation(Sbad);
  for (std::size_t i = 0; i + 1 < chain->size(); ++i)
    CHECK(less(*ob, (*chain)[i + 1], (*chain)[i]));
}

TEST_CASE("structural equality distinguishes the catalog") {
  auto w = ord_omega();
  CHECK(order_eq(w, ord_omega()));
  CHECK_FALSE(order_eq(w, ord_omega_star()));
  CHECK(order_eq(ord_sum(w, w), ord_sum(ord_omega(), ord_omega())));
  CHECK_FALSE(order_eq(ord_sum(w, w), ord_prod_lex(w, w)));
  CHECK(order_eq(ord_finite(codes({1, 2})), ord_finite(codes({1, 2}))));
  CHECK_FALSE(order_eq(ord_finite(codes({1, 2})), ord_finite(codes({2, 1}))));
}
