#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "escalier/exponent.hpp"
#include "escalier/field.hpp"

using namespace escalier;

static Exponent E(std::vector<int> v) { return Exponent(std::move(v)); }

TEST_CASE("exponent basics") {
  Exponent a = E({2, 0, 1});
  CHECK(a.degree() == 3);
  CHECK(a.dominates(E({1, 0, 1})));
  CHECK_FALSE(a.dominates(E({0, 1, 0})));
  CHECK(a.plus(E({1, 2, 3})) == E({3, 2, 4}));
  CHECK(a.minus(E({1, 0, 0})).value() == E({1, 0, 1}));
  CHECK_FALSE(a.minus(E({0, 1, 0})).has_value());
  CHECK(a.minus_clamped(E({3, 0, 0})) == E({0, 0, 1}));
  CHECK(a.join(E({0, 5, 0})) == E({2, 5, 1}));
  CHECK(a.prefix(2) == E({2, 0}));
  CHECK(a.padded(5) == E({2, 0, 1, 0, 0}));
  CHECK(a.group() == 3);
  CHECK(E({4, 0}).group() == 1);
  CHECK(Exponent::zero(3).group() == 0);
  CHECK(Exponent::unit(3, 1) == E({0, 1, 0}));
}

TEST_CASE("revlex order") {
  // compare (a_n,...,a_1) lexicographically
  CHECK(revlex_less(E({3, 0}), E({0, 1})));
  CHECK(revlex_less(E({2, 0}), E({0, 3})));
  CHECK(revlex_less(E({0, 3}), E({1, 3})));
  CHECK_FALSE(revlex_less(E({1, 1}), E({1, 1})));
  // total order on a sample
  auto pts = exponents_up_to_degree(3, 4);
  for (size_t i = 0; i + 1 < pts.size(); ++i) CHECK(revlex_less(pts[i], pts[i + 1]));
}

TEST_CASE("degree enumeration") {
  auto deg2 = exponents_of_degree(2, 2);
  REQUIRE(deg2.size() == 3);
  for (const auto& e : deg2) CHECK(e.degree() == 2);
  auto upto = exponents_up_to_degree(2, 3);
  CHECK(upto.size() == 10);  // C(3+2,2)
  std::set<std::vector<int>> seen;
  for (const auto& e : upto) seen.insert(e.c);
  CHECK(seen.size() == upto.size());
  CHECK(exponents_of_degree(4, 6).size() == 84);  // C(6+3,3)
}

TEST_CASE("compare follows lexicographic value vectors") {
  auto T1 = MonomialOrder::from_integer_forms(2, {{1, 1}});
  CHECK(T1.compare(E({1, 0}), E({0, 2})) == -1);  // degree 1 < 2
  auto T2 = MonomialOrder::from_integer_forms(2, {{1, 1}, {0, 1}});
  // values (2,0) vs (2,1): lex -> less
  CHECK(T2.compare(E({2, 0}), E({1, 1})) == -1);
  CHECK(T2.compare(E({1, 1}), E({2, 0})) == 1);
  CHECK(T2.compare(E({2, 0}), E({2, 0})) == 0);
  // ties under a non-total order
  CHECK(T1.compare(E({2, 0}), E({1, 1})) == 0);
}

TEST_CASE("classification flags") {
  // x1+...+xn, x2+...+xn, ..., xn: all four flags
  for (int n = 1; n <= 4; ++n) {
    auto T = MonomialOrder::canonical(n);
    CHECK(T.is_positive());
    CHECK(T.is_normalized());
    CHECK(T.is_total());
    CHECK(T.is_monotone());
  }
  // n=2, (x1): e2 maps to 0 -> not positive
  auto Tx = MonomialOrder::from_integer_forms(2, {{1, 0}});
  CHECK_FALSE(Tx.is_positive());
  CHECK_FALSE(Tx.is_normalized());
  CHECK_FALSE(Tx.is_total());
  // (x1+x2, x1): T(e1)=(1,1) >lex T(e2)=(1,0) -> not monotone
  auto Tm = MonomialOrder::from_integer_forms(2, {{1, 1}, {1, 0}});
  CHECK(Tm.is_positive());
  CHECK(Tm.is_normalized());
  CHECK(Tm.is_total());
  CHECK_FALSE(Tm.is_monotone());
  // monotone variant: (x1+x2, x2)
  auto Tg = MonomialOrder::from_integer_forms(2, {{1, 1}, {0, 1}});
  CHECK(Tg.is_monotone());
  CHECK(Tg.is_total());
}

TEST_CASE("rational forms are cleared to integers exactly") {
  auto T = MonomialOrder::from_rational_forms(
      2, {{Q(1, 2), Q(1, 3)}, {Q(0), Q(2, 7)}});
  // (1/2, 1/3) -> (3, 2); (0, 2/7) -> (0, 1)
  CHECK(T.forms()[0] == std::vector<long long>{3, 2});
  CHECK(T.forms()[1] == std::vector<long long>{0, 1});
  auto U = MonomialOrder::from_rational_forms(2, {{Q(1, 2), Q(1, 3)}});
  for (long a = 0; a <= 6; ++a)
    for (long b = 0; b <= 6; ++b)
      for (long c = 0; c <= 6; ++c)
        for (long d = 0; d <= 6; ++d) {
          // clearing denominators preserves every comparison
          Q va = Q(1, 2) * a + Q(1, 3) * b, vb = Q(1, 2) * c + Q(1, 3) * d;
          int want = va < vb ? -1 : va > vb ? 1 : 0;
          CHECK(U.compare(E({int(a), int(b)}), E({int(c), int(d)})) == want);
        }
}

TEST_CASE("negative or empty forms rejected") {
  CHECK_THROWS_AS(MonomialOrder::from_integer_forms(2, {}), Error);
  CHECK_THROWS_AS(MonomialOrder::from_integer_forms(2, {{1, -1}}), Error);
  CHECK_THROWS_AS(
      MonomialOrder::from_rational_forms(2, {{Q(-1, 2), Q(1)}}), Error);
}

TEST_CASE("completion appends reverse-lex tie-breaks") {
  auto T1 = MonomialOrder::from_integer_forms(3, {{1, 1, 1}});
  CHECK_FALSE(T1.is_total());
  auto C = T1.completed();
  CHECK(C.is_total());
  CHECK(C.forms().size() == 4);
  CHECK(C.forms()[1] == std::vector<long long>{0, 0, 1});
  CHECK(C.forms()[3] == std::vector<long long>{1, 0, 0});
  // completed degree-first order refines revlex within a degree
  auto pts = exponents_up_to_degree(3, 5);
  for (const auto& a : pts)
    for (const auto& b : pts) {
      if (a == b) continue;
      CHECK(C.compare(a, b) != 0);
      if (a.degree() == b.degree())
        CHECK((C.compare(a, b) < 0) == revlex_less(a, b));
    }
  // completing a total order changes no comparison
  auto T = MonomialOrder::canonical(3).completed();
  for (const auto& a : pts)
    for (const auto& b : pts)
      CHECK(T.compare(a, b) == MonomialOrder::canonical(3).compare(a, b));
}

TEST_CASE("totality flag matches exhaustive distinctness") {
  auto check_total = [](const MonomialOrder& T, int n, long D) {
    auto pts = exponents_up_to_degree(n, D);
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        if (T.compare(pts[i], pts[j]) == 0) return false;
    return true;
  };
  auto A = MonomialOrder::from_integer_forms(3, {{1, 1, 1}, {0, 1, 2}, {0, 0, 1}});
  CHECK(A.is_total());
  CHECK(check_total(A, 3, 6));
  auto B = MonomialOrder::from_integer_forms(3, {{1, 1, 1}, {0, 1, 1}});
  CHECK_FALSE(B.is_total());
  CHECK_FALSE(check_total(B, 3, 6));
  // two forms in four variables have rank at most 2: never total
  auto Cc = MonomialOrder::from_integer_forms(4, {{1, 1, 1, 1}, {1, 2, 3, 4}});
  CHECK_FALSE(Cc.is_total());
  CHECK_FALSE(check_total(Cc, 4, 8));
  auto Dd = MonomialOrder::from_integer_forms(
      4, {{1, 1, 1, 1}, {0, 1, 2, 3}, {0, 0, 1, 2}, {0, 0, 0, 1}});
  CHECK(Dd.is_total());
  CHECK(check_total(Dd, 4, 6));
}

TEST_CASE("positivity bounds sublevel sets") {
  // for positive orders, only finitely many alpha sit lex-below a fixed bound:
  // among |alpha| <= D the count below T(beta) stabilizes as D grows
  auto T = MonomialOrder::from_integer_forms(2, {{1, 2}, {1, 0}});
  CHECK(T.is_positive());
  Exponent beta = E({3, 3});
  long prev = -1;
  for (long D = 9; D <= 12; ++D) {
    long cnt = 0;
    for (const auto& a : exponents_up_to_degree(2, D))
      if (T.compare(a, beta) <= 0) ++cnt;
    if (prev >= 0) CHECK(cnt == prev);
    prev = cnt;
  }
  // a non-positive order keeps gaining smaller elements along the dead axis
  auto S = MonomialOrder::from_integer_forms(2, {{0, 1}});
  long c9 = 0, c12 = 0;
  for (const auto& a : exponents_up_to_degree(2, 9))
    if (S.compare(a, beta) <= 0) ++c9;
  for (const auto& a : exponents_up_to_degree(2, 12))
    if (S.compare(a, beta) <= 0) ++c12;
  CHECK(c12 > c9);
}

TEST_CASE("monotone flag matches random transfer probes") {
  Rng rng(0x5eed0001);
  std::vector<MonomialOrder> orders;
  orders.push_back(MonomialOrder::canonical(3));
  orders.push_back(MonomialOrder::from_integer_forms(3, {{1, 1, 1}, {1, 0, 0}}));
  orders.push_back(MonomialOrder::from_integer_forms(3, {{1, 1, 1}, {0, 0, 1}}));
  orders.push_back(MonomialOrder::from_integer_forms(3, {{1, 2, 3}}));
  orders.push_back(MonomialOrder::from_integer_forms(3, {{3, 2, 1}}));
  for (const auto& T : orders) {
    bool violated = false;
    for (int t = 0; t < 1000; ++t) {
      Exponent a = E({int(rng.below(7)), int(rng.below(7)), int(rng.below(7))});
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          Exponent r = a;
          r.c[i] += r.c[j];
          r.c[j] = 0;
          if (T.compare(r, a) > 0) violated = true;
        }
    }
    CHECK(T.is_monotone() == !violated);
  }
}

TEST_CASE("rng determinism") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(42);
  for (int i = 0; i < 1000; ++i) {
    long v = c.range(-3, 9);
    CHECK(v >= -3);
    CHECK(v <= 9);
  }
}

TEST_CASE("field arithmetic over Q and F_p") {
  Field q = Field::rationals();
  CHECK(q.div(Q(1), Q(3)) == Q(1, 3));
  CHECK(q.binomial(5, 2) == Q(10));
  CHECK(q.parse("-7/3") == Q(-7, 3));
  CHECK(Field::print(Q(-7, 3)) == "-7/3");

  Field f7 = Field::prime(7);
  CHECK(f7.reduce(Q(10)) == Q(3));
  CHECK(f7.reduce(Q(1, 2)) == Q(4));  // 2^{-1} = 4 mod 7
  CHECK(f7.mul(Q(3), Q(5)) == Q(1));
  CHECK(f7.inv(Q(3)) == Q(5));
  CHECK_THROWS_AS(f7.inv(Q(0)), Error);
  CHECK_THROWS_AS(Field::prime(8), Error);
  // Lucas: C(7,2) = 21 = 0 mod 7; digitwise C(1,0)*C(0,2) = 0
  CHECK(f7.binomial(7, 2) == Q(0));
  CHECK(f7.binomial(8, 1) == Q(1));  // C(8,1)=8=1 mod 7
  Field f2 = Field::prime(2);
  for (long b = 0; b <= 16; ++b)
    for (long a = 0; a <= b; ++a) {
      Z exact;
      mpz_bin_uiui(exact.get_mpz_t(), b, a);
      CHECK(f2.binomial(b, a) == Q(exact % 2));
    }
  CHECK(Field::from_tag("fp:101").characteristic() == 101);
  CHECK(Field::from_tag("q").is_rationals());
  CHECK(f7.tag() == "fp:7");
}
