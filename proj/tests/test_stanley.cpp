#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "escalier/stanley.hpp"

using namespace escalier;

static const Field kQ = Field::rationals();

static TruncatedSeries P(const std::string& s, int nm = 2, long D = 12) {
  return TruncatedSeries::parse(kQ, nm, 0, D, s);
}

static TruncatedSeries Zs(int nm = 2, long D = 12) {
  return TruncatedSeries::zero(kQ, nm, 0, D);
}

static Exponent E(std::vector<int> v) { return Exponent(std::move(v)); }

static StanleyEntry entry(std::vector<TruncatedSeries> gen, int ring, long deg) {
  return {std::move(gen), ring, deg};
}

// compare against a parsed polynomial at the series' own truncation degree
static bool same(const TruncatedSeries& f, const std::string& s) {
  return f.equals(TruncatedSeries::parse(kQ, f.n_main(), 0, f.trunc(), s));
}

// dim M/m^{s+1}M by a dense rank computation, independent of the module code
static Z brute_cumulative(const GradedModule& m, long s) {
  auto cols = exponents_up_to_degree(m.n(), s);
  std::map<Exponent, int, RevLexLess> idx;
  for (int i = 0; i < int(cols.size()); ++i) idx[cols[i]] = i;
  std::vector<std::vector<Q>> rows;
  for (int t = 0; t < int(m.relations().size()); ++t) {
    long r = m.relation_degree(t);
    if (r > s) continue;
    for (const auto& beta : exponents_up_to_degree(m.n(), s - r)) {
      std::vector<Q> row(size_t(m.rank()) * cols.size(), Q(0));
      for (int c = 0; c < m.rank(); ++c)
        for (const auto& [e, q] : m.relations()[t][c].coeffs())
          row[size_t(c) * cols.size() + idx.at(e.plus(beta))] = q;
      rows.push_back(std::move(row));
    }
  }
  QMatrix M(int(rows.size()), int(size_t(m.rank()) * cols.size()));
  for (int i = 0; i < int(rows.size()); ++i)
    for (int j = 0; j < M.cols(); ++j) M.at(i, j) = rows[i][j];
  Z total = Z(m.rank()) * phi(s, m.n());
  return total - Z(M.rank(kQ));
}

TEST_CASE("phi worked values") {
  CHECK(phi(-1, 3) == Z(0));
  CHECK(phi(0, 0) == Z(1));
  CHECK(phi(0, 5) == Z(1));
  CHECK(phi(2, 2) == Z(6));
  // phi(m,k) counts monomials of degree <= m in k variables
  for (long m = 0; m <= 6; ++m)
    CHECK(phi(m, 2) == Z((m + 1) * (m + 2) / 2));
}

TEST_CASE("decomposition of the double line quotient") {
  GradedModule m(kQ, 2, 1, {{P("x1^2")}});
  auto basis = stanley_decomposition(m, 1);
  REQUIRE(basis.entries.size() == 2);
  CHECK(basis.change == QMatrix::identity(2));
  CHECK(same(basis.entries[0].gen[0], "1"));
  CHECK(basis.entries[0].ring_index == 1);
  CHECK(basis.entries[0].degree == 0);
  CHECK(same(basis.entries[1].gen[0], "x1"));
  CHECK(basis.entries[1].ring_index == 1);
  CHECK(basis.entries[1].degree == 1);

  CHECK(hilbert_from_basis(basis, 0) == Z(1));
  for (long s = 1; s <= 8; ++s) CHECK(hilbert_from_basis(basis, s) == Z(2 * s + 1));
  for (long s = 0; s <= 8; ++s) CHECK(hilbert_from_basis(basis, s) == brute_cumulative(m, s));
  CHECK(check_basis(m, basis, basis.bound).ok);
}

TEST_CASE("free modules split coordinatewise") {
  GradedModule m(kQ, 2, 2, {});
  auto basis = stanley_decomposition(m, 3);
  REQUIRE(basis.entries.size() == 2);
  CHECK(same(basis.entries[0].gen[0], "1"));
  CHECK(basis.entries[0].gen[1].is_zero());
  CHECK(basis.entries[0].ring_index == 2);
  CHECK(same(basis.entries[1].gen[1], "1"));
  CHECK(basis.entries[1].ring_index == 2);
  for (long s = 0; s <= 6; ++s)
    CHECK(hilbert_from_basis(basis, s) == Z((s + 1) * (s + 2)));
}

TEST_CASE("fat point quotient lands in the base field") {
  GradedModule m(kQ, 2, 1, {{P("x1^2")}, {P("x1 x2")}, {P("x2^2")}});
  auto basis = stanley_decomposition(m, 5);
  REQUIRE(basis.entries.size() == 3);
  CHECK(same(basis.entries[0].gen[0], "1"));
  CHECK(basis.entries[0].ring_index == 0);
  CHECK(same(basis.entries[1].gen[0], "x1"));
  CHECK(basis.entries[1].ring_index == 0);
  CHECK(basis.entries[1].degree == 1);
  CHECK(same(basis.entries[2].gen[0], "x2"));
  CHECK(basis.entries[2].ring_index == 0);
  CHECK(hilbert_from_basis(basis, 0) == Z(1));
  for (long s = 1; s <= 6; ++s) CHECK(hilbert_from_basis(basis, s) == Z(3));
  CHECK(check_basis(m, basis, 8).ok);
}

TEST_CASE("rank-two presentation with a mixing relation") {
  // R^2 / (x e1 - y e2): coordinate 2 needs a generic change, the kernel
  // relation module is trivial, coordinate 1 stays free
  GradedModule m(kQ, 2, 2, {{P("x1"), P("-x2")}});
  auto basis = stanley_decomposition(m, 11);
  CHECK(check_basis(m, basis, basis.bound).ok);
  std::multiset<std::pair<int, long>> profile;
  for (const auto& e : basis.entries) profile.insert({e.ring_index, e.degree});
  CHECK(profile == std::multiset<std::pair<int, long>>{{1, 0}, {2, 0}});
  for (long s = 0; s <= 8; ++s) CHECK(hilbert_from_basis(basis, s) == brute_cumulative(m, s));
}

TEST_CASE("kernel relations are regenerated across coordinates") {
  // R^2 / (x e1 + y e2, y^2 e2): eliminating coordinate 2 leaves the
  // induced relation x*y e1, which needs its own generic change
  GradedModule m(kQ, 2, 2, {{P("x1"), P("x2")}, {Zs(), P("x2^2")}});
  auto basis = stanley_decomposition(m, 11);
  CHECK(check_basis(m, basis, basis.bound).ok);
  std::multiset<std::pair<int, long>> profile;
  for (const auto& e : basis.entries) profile.insert({e.ring_index, e.degree});
  CHECK(profile == std::multiset<std::pair<int, long>>{{1, 0}, {1, 1}, {1, 0}});
  for (long s = 0; s <= 8; ++s) CHECK(hilbert_from_basis(basis, s) == brute_cumulative(m, s));
}

TEST_CASE("verdicts point at the broken degree") {
  GradedModule m(kQ, 2, 1, {{P("x1^2")}});
  // too small: never spans degree 1
  StanleyBasis small;
  small.change = QMatrix::identity(2);
  small.entries = {entry({P("1")}, 0, 0)};
  auto v = check_basis(m, small, 4);
  CHECK_FALSE(v.ok);
  CHECK(v.what == "span");
  CHECK(v.witness == 1);
  // dependent: y is already the product y*1
  StanleyBasis dep;
  dep.change = QMatrix::identity(2);
  dep.entries = {entry({P("1")}, 1, 0), entry({P("x2")}, 1, 1)};
  auto w = check_basis(m, dep, 4);
  CHECK_FALSE(w.ok);
  CHECK(w.what == "independence");
  CHECK(w.witness == 1);
}

TEST_CASE("majorization by tailed staircase monomials") {
  GradedModule m(kQ, 2, 1, {{P("x1^2")}, {P("x2^3")}});
  auto basis = stanley_decomposition(m, 2);
  REQUIRE(basis.entries.size() == 6);

  // same staircase with order-greater homogeneous tails added
  std::vector<StanleyEntry> tailed = {
      entry({P("1")}, 0, 0),          entry({P("x1 + 2 x2")}, 0, 1),
      entry({P("x2")}, 0, 1),         entry({P("x1 x2 - x2^2")}, 0, 2),
      entry({P("x2^2")}, 0, 2),       entry({P("x1 x2^2")}, 0, 3)};
  CHECK(majorizes(basis, tailed, m, 8));
  CHECK(majorizes(basis, basis.entries, m, 8));

  // profile mismatch: a degree got bumped
  std::vector<StanleyEntry> wrong = tailed;
  wrong[1] = entry({P("x1^2 x2")}, 0, 3);
  CHECK_FALSE(majorizes(basis, wrong, m, 8));
  // right profile, but y^2 appears twice and xy is never reached
  std::vector<StanleyEntry> gappy = tailed;
  gappy[3] = entry({P("2 x2^2")}, 0, 2);
  CHECK_FALSE(majorizes(basis, gappy, m, 8));
}

TEST_CASE("stabilization threshold and oracle windows") {
  GradedModule m(kQ, 2, 1, {{P("x1^2")}});
  // shifted generators still generate: passing the threshold settles it
  std::vector<StanleyEntry> good = {entry({P("1")}, 1, 0), entry({P("x1 + x2")}, 1, 1)};
  auto rep = stabilization_check(m, good);
  CHECK(rep.d_of_module == 1);
  CHECK(rep.threshold_pass);
  CHECK(rep.oracle_pass);

  // {1, y} never reaches x
  std::vector<StanleyEntry> bad = {entry({P("1")}, 1, 0), entry({P("x2")}, 1, 1)};
  auto worse = stabilization_check(m, bad);
  CHECK_FALSE(worse.threshold_pass);
  CHECK(worse.threshold_witness == 1);
  CHECK_FALSE(worse.oracle_pass);

  // the produced basis is in particular a generating system
  auto basis = stanley_decomposition(m, 9);
  auto self = stabilization_check(m, basis.entries);
  CHECK(self.threshold_pass);
  CHECK(self.oracle_pass);
}

TEST_CASE("threshold generation forces full generation on samples") {
  Rng rng(0x57ab);
  int threshold_passes = 0;
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + int(rng.below(2));
    long deg = 1 + long(rng.below(3));
    // one random homogeneous relation vector
    std::vector<TruncatedSeries> rel(k, Zs());
    bool nonzero = false;
    for (int c = 0; c < k; ++c)
      for (const auto& e : exponents_of_degree(2, deg)) {
        long coeff = rng.range(-2, 2);
        if (coeff != 0) nonzero = true;
        rel[c].add_term(e, kQ.from_long(coeff));
      }
    if (!nonzero) rel[0].add_term(E({int(deg), 0}), Q(1));
    GradedModule m(kQ, 2, k, {rel});
    StanleyBasis basis = stanley_decomposition(m, 0x9000 + trial);

    // perturb entries by same-degree shifts of other entries
    std::vector<StanleyEntry> cand = basis.entries;
    for (size_t i = 0; i < cand.size(); ++i)
      for (size_t j = 0; j < basis.entries.size(); ++j) {
        if (i == j || basis.entries[j].degree > cand[i].degree) continue;
        if (rng.below(2) == 0) continue;
        long gap = cand[i].degree - basis.entries[j].degree;
        Exponent shift = exponents_of_degree(2, gap)[0];
        for (int c = 0; c < k; ++c) {
          auto bump = TruncatedSeries::monomial(kQ, kQ.from_long(rng.range(-2, 2)), shift,
                                                2, 0, cand[i].gen[c].trunc());
          cand[i].gen[c] = cand[i].gen[c].add(basis.entries[j].gen[c].mul(bump));
        }
      }
    bool all_nonzero = true;
    for (const auto& e : cand) {
      bool seen = false;
      for (const auto& f : e.gen) seen = seen || !f.is_zero();
      all_nonzero = all_nonzero && seen;
    }
    if (!all_nonzero) continue;

    auto rep = stabilization_check(m, cand);
    if (rep.threshold_pass) {
      ++threshold_passes;
      CHECK(rep.oracle_pass);
    }
  }
  CHECK(threshold_passes >= 30);
}

TEST_CASE("restriction: lifted entries with degree-preserving tails") {
  // a basis of K[x] over (K, K[x]): {x^2 over R_1, 1 and x over R_0}
  GradedModule line(kQ, 1, 1, {});
  StanleyBasis low;
  low.change = QMatrix::identity(1);
  low.entries = {entry({P("x1^2", 1)}, 1, 2), entry({P("1", 1)}, 0, 0),
                 entry({P("x1", 1)}, 0, 1)};
  CHECK(check_basis(line, low, 6).ok);

  // lift to K[x,y] with tails vanishing at y=0; rings shift by one
  GradedModule plane(kQ, 2, 1, {});
  StanleyBasis lifted;
  lifted.change = QMatrix::identity(2);
  lifted.entries = {entry({P("x1^2 + x1 x2")}, 2, 2), entry({P("1")}, 1, 0),
                    entry({P("x1 + x2")}, 1, 1)};
  CHECK(check_basis(plane, lifted, 6).ok);

  // a second tail pattern on the same skeleton
  StanleyBasis lifted2;
  lifted2.change = QMatrix::identity(2);
  lifted2.entries = {entry({P("x1^2 - 3 x1 x2 + x2^2")}, 2, 2), entry({P("1")}, 1, 0),
                     entry({P("x1 - 2 x2")}, 1, 1)};
  CHECK(check_basis(plane, lifted2, 6).ok);
}

TEST_CASE("initial-form bases lift to filtered bases") {
  // graded skeleton for the staircase of {(2,0),(0,3)}: x^2 over R_2,
  // y^3 and x y^3 over R_1 = K[y], six monomials over K
  struct Piece {
    TruncatedSeries gen;
    int ring;
    long deg;
  };
  std::vector<Piece> graded = {
      {P("x1^2"), 2, 2},      {P("x2^3"), 1, 3},  {P("x1 x2^3"), 1, 4},
      {P("1"), 0, 0},         {P("x1"), 0, 1},    {P("x2"), 0, 1},
      {P("x1 x2"), 0, 2},     {P("x2^2"), 0, 2},  {P("x1 x2^2"), 0, 3}};
  // perturb each generator by junk of strictly higher degree
  std::vector<Piece> filtered = graded;
  filtered[0].gen = filtered[0].gen.add(P("x2^3 + x1^3 x2"));
  filtered[1].gen = filtered[1].gen.add(P("x1^3 x2"));
  filtered[4].gen = filtered[4].gen.add(P("x1 x2 - x2^2"));
  filtered[5].gen = filtered[5].gen.add(P("x1^2"));
  filtered[7].gen = filtered[7].gen.add(P("x2^4"));

  // filtered bijectivity mod m^{s+1}: the products of formal degree <= s,
  // truncated at degree s, are independent and span
  for (long s = 0; s <= 8; ++s) {
    auto cols = exponents_up_to_degree(2, s);
    std::map<Exponent, int, RevLexLess> idx;
    for (int i = 0; i < int(cols.size()); ++i) idx[cols[i]] = i;
    std::vector<std::vector<Q>> rows;
    for (const auto& p : filtered) {
      if (p.deg > s) continue;
      std::vector<Exponent> mults;
      if (p.ring == 0)
        mults = {Exponent::zero(2)};
      else
        for (long t = 0; t + p.deg <= s; ++t)
          for (const auto& g : exponents_of_degree(p.ring, t)) {
            Exponent e = Exponent::zero(2);
            for (int q = 0; q < p.ring; ++q) e.c[2 - p.ring + q] = g.c[q];
            mults.push_back(e);
          }
      for (const auto& g : mults) {
        std::vector<Q> row(cols.size(), Q(0));
        for (const auto& [e, q] : p.gen.coeffs()) {
          Exponent target = e.plus(g);
          if (target.degree() <= s) row[idx.at(target)] = q;
        }
        rows.push_back(std::move(row));
      }
    }
    QMatrix M(int(rows.size()), int(cols.size()));
    for (int i = 0; i < int(rows.size()); ++i)
      for (int j = 0; j < int(cols.size()); ++j) M.at(i, j) = rows[i][j];
    CHECK(Z(int(rows.size())) == phi(s, 2));
    CHECK(Z(M.rank(kQ)) == phi(s, 2));
  }
}
