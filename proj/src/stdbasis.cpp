#include "escalier/stdbasis.hpp"

#include <algorithm>
#include <map>

#include "escalier/division.hpp"
#include "escalier/jacobians.hpp"

namespace escalier {

namespace {

// Forward row echelon of the ideal's image in R/m^{D+1}.  Columns are the
// degree-<=D monomials sorted ascending by the completed order, so a row's
// first entry is the initial exponent of the series it represents.  Rows
// carry exactness flags: a clean flag certifies the row as a genuine element
// of the ideal, not only a truncated representative.
class Echelon {
 public:
  struct Row {
    std::map<int, Q> a;
    bool exact = true;
  };

  Echelon(const Field& field, const MonomialOrder& order, int n, long trunc)
      : field_(field) {
    cols_ = exponents_up_to_degree(n, trunc);
    std::sort(cols_.begin(), cols_.end(),
              [&](const Exponent& x, const Exponent& y) { return order.less(x, y); });
    for (int i = 0; i < int(cols_.size()); ++i) index_[cols_[i]] = i;
  }

  int col_of(const Exponent& e) const { return index_.at(e); }
  const Exponent& exp_of(int c) const { return cols_[c]; }

  Row to_row(const TruncatedSeries& f) const {
    Row r;
    r.exact = f.is_exact();
    for (const auto& [e, c] : f.coeffs()) r.a[index_.at(e)] = c;
    return r;
  }

  // returns the pivot column claimed by the row, or -1 when it dies
  int insert(Row r) {
    while (!r.a.empty()) {
      int c = r.a.begin()->first;
      auto it = rows_.find(c);
      if (it == rows_.end()) {
        Q lead = r.a.begin()->second;
        for (auto& [col, v] : r.a) v = field_.div(v, lead);
        rows_.emplace(c, std::move(r));
        return c;
      }
      Q f = field_.neg(r.a.begin()->second);
      axpy(r, f, it->second);
      r.exact = r.exact && it->second.exact;
    }
    return -1;
  }

  // tail-reduce the stored pivot row so no other pivot column survives in it
  Row reduced_row(int pivot) const {
    Row r = rows_.at(pivot);
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto it = std::next(r.a.begin()); it != r.a.end(); ++it) {
        auto p = rows_.find(it->first);
        if (p == rows_.end()) continue;
        Q f = field_.neg(it->second);
        axpy(r, f, p->second);
        r.exact = r.exact && p->second.exact;
        progress = true;
        break;
      }
    }
    return r;
  }

  std::vector<Exponent> pivot_exponents() const {
    std::vector<Exponent> out;
    for (const auto& [c, row] : rows_) out.push_back(cols_[c]);
    return out;
  }

  long pivot_count() const { return long(rows_.size()); }

  long pivots_up_to_degree(long s) const {
    long k = 0;
    for (const auto& [c, row] : rows_)
      if (cols_[c].degree() <= s) ++k;
    return k;
  }

 private:
  void axpy(Row& r, const Q& f, const Row& p) const {
    for (const auto& [col, v] : p.a) {
      auto it = r.a.find(col);
      Q nv = field_.add(it == r.a.end() ? Q(0) : it->second, field_.mul(f, v));
      if (nv == 0) {
        if (it != r.a.end()) r.a.erase(it);
      } else {
        r.a[col] = nv;
      }
    }
  }

  Field field_;
  std::vector<Exponent> cols_;
  std::map<Exponent, int, RevLexLess> index_;
  std::map<int, Row> rows_;
};

Echelon build_echelon(const IdealPresentation& ideal) {
  const long D = ideal.trunc();
  Echelon ech(ideal.field(), ideal.order(), ideal.n(), D);
  for (const auto& g : ideal.generators()) {
    long room = D - g.ord();
    for (const auto& beta : exponents_up_to_degree(ideal.n(), room)) {
      auto prod = g.mul(TruncatedSeries::monomial(ideal.field(), Q(1), beta, ideal.n(), 0, D));
      if (prod.is_zero()) continue;
      ech.insert(ech.to_row(prod));
    }
  }
  return ech;
}

Z count_upto(int n, long s) {
  if (s < 0) return Z(0);
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), unsigned(s + n), unsigned(n));
  return r;
}

}  // namespace

IdealPresentation::IdealPresentation(std::vector<TruncatedSeries> gens,
                                     const MonomialOrder& order)
    : gens_(std::move(gens)), order_(order.completed()) {
  if (gens_.empty()) throw Error("BadInput", "ideal needs at least one generator");
  if (!order.is_normalized() || !order.is_total())
    throw Error("BadOrder", "initial diagrams need a normalized total order");
  const auto& g0 = gens_[0];
  if (order.dim() != g0.n_main()) throw Error("DimensionMismatch", "order dimension");
  for (const auto& g : gens_) {
    check_same_field(g0.field(), g.field());
    if (g.n_main() != g0.n_main() || g.n_param() != 0)
      throw Error("DimensionMismatch", "generators live in different rings");
    if (g.trunc() != g0.trunc())
      throw Error("DimensionMismatch", "generators carry different truncations");
    if (g.is_zero()) throw Error("BadInput", "zero generator");
  }
}

IdealPresentation IdealPresentation::translated(const std::vector<Q>& q) const {
  std::vector<TruncatedSeries> moved;
  for (const auto& g : gens_) moved.push_back(g.translate(q));
  return IdealPresentation(std::move(moved), order_);
}

IdealPresentation IdealPresentation::substituted(const QMatrix& m) const {
  std::vector<TruncatedSeries> changed;
  for (const auto& g : gens_) changed.push_back(g.substitute_linear(m));
  return IdealPresentation(std::move(changed), order_);
}

TruncatedDiagram truncated_initial_diagram(const IdealPresentation& ideal) {
  Echelon ech = build_echelon(ideal);
  TruncatedDiagram out{Diagram::from_exponents(ideal.n(), ech.pivot_exponents()),
                       {ideal.trunc(), ech.pivot_count()}};
  return out;
}

StandardBasisReport standard_basis(const IdealPresentation& ideal) {
  Echelon ech = build_echelon(ideal);
  Diagram delta = Diagram::from_exponents(ideal.n(), ech.pivot_exponents());
  StandardBasisReport report{delta, {}, {ideal.trunc(), ech.pivot_count()}};

  for (const auto& alpha : delta.vertices()) {
    auto row = ech.reduced_row(ech.col_of(alpha));
    if (!row.exact)
      throw Error("TruncationTooSmall",
                  "reduction of the vertex row lost terms above the truncation degree");
    TruncatedSeries f = TruncatedSeries::zero(ideal.field(), ideal.n(), 0, ideal.trunc());
    for (const auto& [c, v] : row.a) f.add_term(ech.exp_of(c), v);
    if (f.ord() != alpha.degree())
      throw Error("Internal", "vertex row order drifted from the vertex degree");
    report.basis.push_back(std::move(f));
  }

  // regeneration: every original generator divides to a vanishing remainder
  auto problem = DivisionProblem::create(report.basis, delta.vertices(), ideal.order());
  for (const auto& g : ideal.generators()) {
    auto res = problem.divide(g);
    if (!res.r.is_zero()) throw Error("Internal", "standard basis fails to regenerate a generator");
  }
  return report;
}

std::vector<Z> hilbert_samuel_at(const IdealPresentation& ideal, const std::vector<Q>& q,
                                 long s_max) {
  if (s_max >= ideal.trunc())
    throw Error("BadInput", "Hilbert-Samuel range must stay below the truncation degree");
  bool at_origin = true;
  for (const auto& v : q)
    if (ideal.field().reduce(v) != 0) at_origin = false;
  Echelon ech = build_echelon(at_origin ? ideal : ideal.translated(q));
  std::vector<Z> h;
  for (long s = 0; s <= s_max; ++s)
    h.push_back(count_upto(ideal.n(), s) - Z(ech.pivots_up_to_degree(s)));
  return h;
}

namespace {

long char_power_part(const Field& field, long m) {
  // the p-power factor of m in characteristic p, 1 in characteristic zero
  if (field.tag() == "q") return 1;
  long p = std::stol(field.tag().substr(3));
  long a = 1;
  while (m % p == 0) {
    a *= p;
    m /= p;
  }
  return a;
}

}  // namespace

std::vector<SamuelVerdict> check_samuel_basis(const std::vector<TruncatedSeries>& basis,
                                              const Diagram& delta,
                                              const std::vector<std::vector<Q>>& points) {
  if (basis.empty() || basis.size() != delta.vertices().size())
    throw Error("BadInput", "need exactly one basis element per vertex");
  const Field& field = basis[0].field();
  int n = basis[0].n_main();
  int s = delta.dim();
  if (s > n) throw Error("DimensionMismatch", "diagram block exceeds the ring");
  for (const auto& f : basis)
    if (f.n_param() != 0 || f.n_main() != n)
      throw Error("DimensionMismatch", "basis elements live in different rings");
  if (!delta.is_monotone()) throw Error("BadInput", "diagram must be monotone");
  for (int i = 0; i < s; ++i) {
    bool hit = false;
    for (const auto& v : delta.vertices()) hit = hit || v.c[i] > 0;
    if (!hit) throw Error("BadInput", "vertices must span the diagram block");
  }

  std::vector<Exponent> padded;
  for (const auto& v : delta.vertices()) padded.push_back(v.padded(n));
  Diagram top = Diagram::from_exponents(n, padded);
  auto order = MonomialOrder::canonical(n);

  std::vector<SamuelVerdict> out;
  for (const auto& pt : points) {
    SamuelVerdict v;
    std::vector<TruncatedSeries> tb;
    try {
      for (const auto& f : basis) tb.push_back(f.translate(pt));
    } catch (const Error& e) {
      v.witness = std::string("cannot recenter the basis: ") + e.what();
      v.first_failing = 1;
      out.push_back(v);
      continue;
    }

    // (1) Hilbert-Samuel function matches the diagram
    {
      long cutoff = 0;
      bool nonzero = true;
      for (const auto& f : tb) nonzero = nonzero && !f.is_zero();
      if (nonzero) {
        auto tdg = truncated_initial_diagram(IdealPresentation(tb, order));
        v.holds[0] = Diagram::hs_compare(tdg.diagram, top, &cutoff) == 0;
      }
      if (!v.holds[0])
        v.witness = "Hilbert-Samuel function differs from the diagram's";
    }
    // (2) orders match vertex degrees
    {
      v.holds[1] = true;
      for (size_t i = 0; i < tb.size(); ++i)
        if (tb[i].is_zero() || tb[i].ord() != delta.vertices()[i].degree()) v.holds[1] = false;
      if (!v.holds[1] && v.witness.empty()) v.witness = "ord at the point drifted from |alpha|";
    }
    // (3) differential supports confined to {alpha_i} + Gamma block
    {
      v.holds[2] = true;
      for (size_t i = 0; i < basis.size(); ++i) {
        Exponent ap = delta.vertices()[i].padded(n);
        for (const auto& dlt : basis[i].supd())
          if (!(dlt == ap) && delta.contains(dlt.prefix(s))) v.holds[2] = false;
        if (tb[i].coeff(ap) != Q(1)) v.holds[2] = false;
      }
      if (!v.holds[2] && v.witness.empty()) v.witness = "differential support escapes Gamma";
    }
    // (4) generalized Jacobians invertible through d(Delta)+1
    if (v.holds[1]) {
      try {
        JacobianProblem jp(tb, delta.vertices());
        v.holds[3] = jp.check_conditions().full_pass();
      } catch (const Error& e) {
        v.holds[3] = false;
        if (v.witness.empty()) v.witness = std::string("Jacobian conditions: ") + e.what();
      }
      if (!v.holds[3] && v.witness.empty()) v.witness = "a generalized Jacobian vanishes";
    }
    // (5) the resultant-Jacobian operator does not vanish
    if (v.holds[1]) {
      try {
        std::vector<TruncatedSeries> forms;
        std::vector<long> abar;
        for (int i = 0; i < s; ++i) {
          int j = -1;
          for (size_t t = 0; t < delta.vertices().size() && j < 0; ++t)
            if (delta.vertices()[t].c[i] > 0) j = int(t);
          long a = char_power_part(field, delta.vertices()[j].c[i]);
          Exponent beta = delta.vertices()[j].padded(n);
          beta.c[i] -= int(a);
          forms.push_back(tb[j].hasse(beta));
          abar.push_back(a);
        }
        v.holds[4] = jr_operator(forms, {}, abar) != 0;
      } catch (const Error& e) {
        v.holds[4] = false;
        if (v.witness.empty()) v.witness = std::string("JR operator: ") + e.what();
      }
      if (!v.holds[4] && v.witness.empty()) v.witness = "the resultant Jacobian vanishes";
    }

    for (int i = 0; i < 5; ++i)
      if (!v.holds[i]) {
        v.first_failing = i + 1;
        break;
      }
    if (v.first_failing == 0) v.witness.clear();
    out.push_back(v);
  }
  return out;
}

std::vector<StratumProbe> samuel_stratum_probe(const IdealPresentation& ideal,
                                               const StandardBasisReport& report,
                                               const std::vector<std::vector<Q>>& points) {
  std::vector<StratumProbe> out;
  for (const auto& pt : points) {
    StratumProbe probe;
    probe.in_stratum = true;
    for (size_t i = 0; i < report.basis.size(); ++i) {
      auto moved = report.basis[i].translate(pt);
      if (moved.is_zero() || moved.ord() != report.diagram.vertices()[i].degree())
        probe.in_stratum = false;
    }
    auto tdg = truncated_initial_diagram(ideal.translated(pt));
    probe.hs_versus_top = Diagram::hs_compare(tdg.diagram, report.diagram);
    out.push_back(probe);
  }
  return out;
}

MonotoneChange generic_monotone_change(const IdealPresentation& ideal, std::uint64_t seed) {
  Rng rng(seed ^ 0xa076'1d64'78bd'642fULL);
  int n = ideal.n();
  for (int attempt = 0; attempt < 32; ++attempt) {
    QMatrix A = QMatrix::identity(n);
    if (attempt > 0) {
      for (int t = 0; t < 2 * n + 2; ++t) {
        int i = int(rng.below(n));
        int j = int(rng.below(n));
        if (i == j) continue;
        long c = rng.range(-3, 3);
        if (c == 0) c = 1;
        for (int col = 0; col < n; ++col)
          A.at(i, col) = ideal.field().add(
              A.at(i, col), ideal.field().mul(ideal.field().from_long(c), A.at(j, col)));
      }
    }
    auto tdg = truncated_initial_diagram(attempt == 0 ? ideal : ideal.substituted(A));
    if (tdg.diagram.is_monotone()) return {A, tdg.diagram, attempt + 1};
  }
  throw Error("DegenerateAfterRetries", "no sampled coordinate change made the diagram monotone");
}

}  // namespace escalier
