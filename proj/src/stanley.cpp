#include "escalier/stanley.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "escalier/diagram.hpp"
#include "escalier/stdbasis.hpp"

namespace escalier {

namespace {

TruncatedSeries lifted(const TruncatedSeries& f, long trunc) {
  return f.trunc() >= trunc ? f : f.retruncate(trunc);
}

// incremental rank over integer-indexed columns; rows normalized to pivot 1
class Reducer {
 public:
  explicit Reducer(const Field& field) : field_(field) {}

  // true when the row was independent of everything inserted so far
  bool add(std::map<int, Q> row) {
    while (!row.empty()) {
      int c = row.begin()->first;
      auto it = rows_.find(c);
      if (it == rows_.end()) {
        Q lead = row.begin()->second;
        for (auto& [col, v] : row) v = field_.div(v, lead);
        rows_.emplace(c, std::move(row));
        return true;
      }
      Q f = field_.neg(row.begin()->second);
      for (const auto& [col, v] : it->second) {
        auto jt = row.find(col);
        Q nv = field_.add(jt == row.end() ? Q(0) : jt->second, field_.mul(f, v));
        if (nv == 0) {
          if (jt != row.end()) row.erase(jt);
        } else {
          row[col] = nv;
        }
      }
    }
    return false;
  }

  int rank() const { return int(rows_.size()); }
  const std::map<int, std::map<int, Q>>& rows() const { return rows_; }

 private:
  Field field_;
  std::map<int, std::map<int, Q>> rows_;
};

// column bookkeeping for one graded slice (R^k)_d; an optional priority
// coordinate owns the leftmost column block
struct Slice {
  int k = 0, n = 0;
  long d = 0;
  std::vector<Exponent> monos;
  std::map<Exponent, int, RevLexLess> idx;
  int front = -1;  // coordinate owning the first block, or -1 for 0,1,2,...

  Slice(int k_, int n_, long d_, int front_ = -1) : k(k_), n(n_), d(d_), front(front_) {
    monos = exponents_of_degree(n, d);
    for (int i = 0; i < int(monos.size()); ++i) idx[monos[i]] = i;
  }

  int block(int coord) const {
    if (front < 0) return coord;
    if (coord == front) return 0;
    return coord < front ? coord + 1 : coord;
  }

  std::map<int, Q> row(const std::vector<TruncatedSeries>& v, const Exponent& shift) const {
    std::map<int, Q> r;
    for (int c = 0; c < k; ++c) {
      if (v[c].is_zero()) continue;
      int base = block(c) * int(monos.size());
      for (const auto& [e, q] : v[c].coeffs()) r[base + idx.at(e.plus(shift))] = q;
    }
    return r;
  }

  std::vector<TruncatedSeries> vector_of(const std::map<int, Q>& row, const Field& field,
                                         long trunc) const {
    std::vector<TruncatedSeries> v(k, TruncatedSeries::zero(field, n, 0, trunc));
    int m = int(monos.size());
    for (const auto& [col, q] : row) {
      int b = col / m;
      int coord = b;
      if (front >= 0) coord = b == 0 ? front : (b <= front ? b - 1 : b);
      v[coord].add_term(monos[col % m], q);
    }
    return v;
  }
};

Exponent embed_last(const Exponent& g, int n) {
  // place a monomial of R_i (i = g.dim()) on the last i coordinates
  Exponent e = Exponent::zero(n);
  for (int t = 0; t < g.dim(); ++t) e.c[n - g.dim() + t] = g.c[t];
  return e;
}

long degree_of_vector(const std::vector<TruncatedSeries>& v) {
  long d = -1;
  for (const auto& f : v)
    if (!f.is_zero()) d = std::max(d, f.max_degree());
  return d;
}

// all relation products of degree exactly d fed into the reducer
void feed_relation_products(Reducer& red, const Slice& sl,
                            const std::vector<std::vector<TruncatedSeries>>& rels,
                            const std::vector<long>& degs) {
  for (size_t t = 0; t < rels.size(); ++t) {
    if (degs[t] > sl.d) continue;
    for (const auto& g : exponents_of_degree(sl.n, sl.d - degs[t]))
      red.add(sl.row(rels[t], g));
  }
}

// structured products of one entry at degree d: multipliers range over the
// entry's ring R_i (monomials in the last i variables)
int feed_entry_products(Reducer& red, const Slice& sl, const StanleyEntry& e,
                        long* dependent_at = nullptr) {
  if (e.degree > sl.d) return 0;
  if (e.ring_index == 0) {
    if (e.degree != sl.d) return 0;
    if (!red.add(sl.row(e.gen, Exponent::zero(sl.n))) && dependent_at) *dependent_at = sl.d;
    return 1;
  }
  int fed = 0;
  for (const auto& g : exponents_of_degree(e.ring_index, sl.d - e.degree)) {
    ++fed;
    if (!red.add(sl.row(e.gen, embed_last(g, sl.n))) && dependent_at) *dependent_at = sl.d;
  }
  return fed;
}

struct StepOutcome {
  bool monotone = true;
  std::vector<StanleyEntry> entries;
  std::vector<std::vector<TruncatedSeries>> next_rels;
};

// one induction step: coordinate t of the presentation
StepOutcome run_step(const Field& field, int n, int k, long work,
                     const std::vector<std::vector<TruncatedSeries>>& rels, int t) {
  StepOutcome out;
  std::vector<TruncatedSeries> comps;
  for (const auto& r : rels)
    if (!r[t].is_zero()) comps.push_back(r[t]);

  if (comps.empty()) {
    StanleyEntry e;
    e.gen.assign(k, TruncatedSeries::zero(field, n, 0, work));
    e.gen[t].add_term(Exponent::zero(n), Q(1));
    e.ring_index = n;
    e.degree = 0;
    out.entries.push_back(std::move(e));
    out.next_rels = rels;
    return out;
  }

  IdealPresentation ideal(comps, MonomialOrder::canonical(n));
  Diagram delta = truncated_initial_diagram(ideal).diagram;
  if (!delta.is_monotone()) {
    out.monotone = false;
    return out;
  }
  const auto& dec = delta.decomposition();
  for (int i = 1; i <= n; ++i)
    for (const auto& a : dec.A[i - 1]) {
      StanleyEntry e;
      e.gen.assign(k, TruncatedSeries::zero(field, n, 0, work));
      e.gen[t].add_term(a.padded(n), Q(1));
      e.ring_index = n - i;
      e.degree = a.degree();
      out.entries.push_back(std::move(e));
    }

  // regenerate the relations with vanishing coordinate t, degree by degree:
  // in each slice the echelon rows pivoted outside the t-block span exactly
  // the kernel of the projection, and rows new over the shifts of the
  // generators collected so far become generators themselves
  std::vector<long> degs;
  for (const auto& r : rels) degs.push_back(degree_of_vector(r));
  std::vector<long> newdegs;
  for (long d = 0; d <= work; ++d) {
    Slice sl(k, n, d, t);
    Reducer full(field);
    feed_relation_products(full, sl, rels, degs);
    int tcols = int(sl.monos.size());
    Reducer known(field);
    for (size_t j = 0; j < out.next_rels.size(); ++j)
      if (newdegs[j] <= d)
        for (const auto& g : exponents_of_degree(n, d - newdegs[j]))
          known.add(sl.row(out.next_rels[j], g));
    for (const auto& [pivot, row] : full.rows()) {
      if (pivot < tcols) continue;  // projects onto coordinate t
      if (!known.add(row)) continue;
      out.next_rels.push_back(sl.vector_of(row, field, work));
      newdegs.push_back(d);
    }
  }
  return out;
}

StanleyBasis construct(const GradedModule& m, const QMatrix& change, long work) {
  GradedModule cur = m.substituted(change);
  int n = m.n(), k = m.rank();
  std::vector<std::vector<TruncatedSeries>> rels;
  for (const auto& r : cur.relations()) {
    std::vector<TruncatedSeries> v;
    for (const auto& f : r) v.push_back(lifted(f, work));
    rels.push_back(std::move(v));
  }

  std::vector<std::vector<StanleyEntry>> per_coord(k);
  for (int t = k - 1; t >= 0; --t) {
    StepOutcome step = run_step(m.field(), n, k, work, rels, t);
    if (!step.monotone) return {};  // signalled by empty change
    per_coord[t] = std::move(step.entries);
    rels = std::move(step.next_rels);
  }

  StanleyBasis basis;
  basis.change = change;
  for (int t = 0; t < k; ++t)
    for (auto& e : per_coord[t]) basis.entries.push_back(std::move(e));
  return basis;
}

QMatrix sampled_change(const Field& field, int n, Rng& rng) {
  QMatrix a = QMatrix::identity(n);
  for (int t = 0; t < 2 * n + 2; ++t) {
    int i = int(rng.below(n));
    int j = int(rng.below(n));
    if (i == j) continue;
    long c = rng.range(-3, 3);
    if (c == 0) c = 1;
    for (int col = 0; col < n; ++col)
      a.at(i, col) = field.add(a.at(i, col), field.mul(field.from_long(c), a.at(j, col)));
  }
  return a;
}

}  // namespace

GradedModule::GradedModule(const Field& field, int n, int rank,
                           std::vector<std::vector<TruncatedSeries>> relations)
    : field_(field), n_(n), rank_(rank), rels_(std::move(relations)) {
  if (n < 1 || rank < 1) throw Error("BadInput", "module needs n >= 1 and rank >= 1");
  for (const auto& r : rels_) {
    if (int(r.size()) != rank_)
      throw Error("DimensionMismatch", "relation vector length differs from the rank");
    long deg = -1;
    for (const auto& f : r) {
      check_same_field(field_, f.field());
      if (f.n_main() != n_ || f.n_param() != 0)
        throw Error("DimensionMismatch", "relation component ring mismatch");
      if (f.is_zero()) continue;
      if (!f.is_exact()) throw Error("BadInput", "relation components must be exact");
      if (f.ord() != f.max_degree())
        throw Error("BadInput", "relation components must be homogeneous");
      if (deg >= 0 && f.ord() != deg)
        throw Error("BadInput", "relation components must share one degree");
      deg = f.ord();
    }
    if (deg < 0) throw Error("BadInput", "zero relation vector");
    degs_.push_back(deg);
  }
}

long GradedModule::max_relation_degree() const {
  long d = 0;
  for (long v : degs_) d = std::max(d, v);
  return d;
}

GradedModule GradedModule::substituted(const QMatrix& m) const {
  std::vector<std::vector<TruncatedSeries>> out;
  for (const auto& r : rels_) {
    std::vector<TruncatedSeries> v;
    for (const auto& f : r) v.push_back(f.substitute_linear(m));
    out.push_back(std::move(v));
  }
  return GradedModule(field_, n_, rank_, std::move(out));
}

Z phi(long m, int k) {
  if (m < 0) return Z(0);
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), unsigned(m + k), unsigned(k));
  return r;
}

StanleyBasis stanley_decomposition(const GradedModule& m, std::uint64_t seed) {
  Rng rng(seed ^ 0x7f4a'7c15'9e37'79b9ULL);
  long work = std::max(2 * m.max_relation_degree() + m.n() + 5, 10L);
  for (int attempt = 0; attempt < 32; ++attempt) {
    QMatrix change =
        attempt == 0 ? QMatrix::identity(m.n()) : sampled_change(m.field(), m.n(), rng);
    StanleyBasis basis;
    for (int deepen = 0; deepen < 4; ++deepen) {
      basis = construct(m, change, work);
      if (basis.change.rows() == 0) break;  // non-monotone step: next change
      long d_m = 0;
      for (const auto& e : basis.entries) d_m = std::max(d_m, e.degree);
      long bound = std::max(2 * d_m + 5, m.max_relation_degree() + m.n() + 1);
      if (bound <= work) {
        basis.bound = bound;
        break;
      }
      work = bound;
      basis.bound = 0;
    }
    if (basis.change.rows() == 0) continue;
    if (basis.bound == 0)
      throw Error("VerificationFailed", "working degree failed to stabilize");
    BasisVerdict v = check_basis(m, basis, basis.bound);
    if (!v.ok)
      throw Error("VerificationFailed",
                  v.what + " fails at degree " + std::to_string(v.witness));
    return basis;
  }
  throw Error("RetryExhausted", "no sampled change made every projection diagram monotone");
}

Z hilbert_from_basis(const StanleyBasis& b, long s) {
  Z h(0);
  for (const auto& e : b.entries) h += phi(s - e.degree, e.ring_index);
  return h;
}

BasisVerdict check_basis(const GradedModule& m, const StanleyBasis& b, long bound) {
  GradedModule cur = b.change.rows() > 0 ? m.substituted(b.change) : m;
  long work = bound;
  for (const auto& e : b.entries) {
    if (int(e.gen.size()) != m.rank())
      throw Error("DimensionMismatch", "entry length differs from the rank");
    if (e.ring_index < 0 || e.ring_index > m.n())
      throw Error("BadInput", "ring index out of range");
    bool seen = false;
    for (const auto& f : e.gen) {
      if (f.is_zero()) continue;
      seen = true;
      if (f.ord() != e.degree || f.max_degree() != e.degree)
        throw Error("BadInput", "entry is not homogeneous of its declared degree");
    }
    if (!seen) throw Error("BadInput", "zero basis entry");
  }
  std::vector<std::vector<TruncatedSeries>> rels;
  std::vector<long> degs;
  for (int t = 0; t < int(cur.relations().size()); ++t) {
    std::vector<TruncatedSeries> v;
    for (const auto& f : cur.relations()[t]) v.push_back(lifted(f, work));
    rels.push_back(std::move(v));
    degs.push_back(cur.relation_degree(t));
  }

  BasisVerdict verdict;
  for (long d = 0; d <= bound; ++d) {
    Slice sl(m.rank(), m.n(), d);
    Reducer red(m.field());
    feed_relation_products(red, sl, rels, degs);
    long dependent = -1;
    for (const auto& e : b.entries) feed_entry_products(red, sl, e, &dependent);
    if (dependent >= 0) {
      verdict = {false, d, "independence"};
      return verdict;
    }
    // dim (R^k)_d = k * #monomials of degree exactly d
    Z dim_slice = Z(m.rank()) * (phi(d, m.n()) - phi(d - 1, m.n()));
    if (Z(red.rank()) != dim_slice) {
      verdict = {false, d, "span"};
      return verdict;
    }
  }
  return verdict;
}

bool majorizes(const StanleyBasis& a, const std::vector<StanleyEntry>& candidates,
               const GradedModule& m, long bound) {
  std::multiset<std::pair<int, long>> pa, pb;
  for (const auto& e : a.entries) pa.insert({e.ring_index, e.degree});
  for (const auto& e : candidates) pb.insert({e.ring_index, e.degree});
  if (pa != pb) return false;

  GradedModule cur = a.change.rows() > 0 ? m.substituted(a.change) : m;
  std::vector<std::vector<TruncatedSeries>> rels;
  std::vector<long> degs;
  for (int t = 0; t < int(cur.relations().size()); ++t) {
    std::vector<TruncatedSeries> v;
    for (const auto& f : cur.relations()[t]) v.push_back(lifted(f, bound));
    rels.push_back(std::move(v));
    degs.push_back(cur.relation_degree(t));
  }
  for (long d = 0; d <= bound; ++d) {
    Slice sl(m.rank(), m.n(), d);
    Reducer red(m.field());
    feed_relation_products(red, sl, rels, degs);
    for (const auto& e : candidates) feed_entry_products(red, sl, e);
    Z dim_slice = Z(m.rank()) * (phi(d, m.n()) - phi(d - 1, m.n()));
    if (Z(red.rank()) != dim_slice) return false;
  }
  return true;
}

StabilizationReport stabilization_check(const GradedModule& m,
                                        const std::vector<StanleyEntry>& candidates,
                                        long oracle_bound) {
  StabilizationReport rep;
  for (const auto& e : candidates) rep.d_of_module = std::max(rep.d_of_module, e.degree);
  long threshold = rep.d_of_module + 1;
  if (oracle_bound < 0) oracle_bound = 2 * rep.d_of_module + 5;

  std::vector<std::vector<TruncatedSeries>> rels;
  std::vector<long> degs;
  long work = std::max(threshold, oracle_bound);
  for (int t = 0; t < int(m.relations().size()); ++t) {
    std::vector<TruncatedSeries> v;
    for (const auto& f : m.relations()[t]) v.push_back(lifted(f, work));
    rels.push_back(std::move(v));
    degs.push_back(m.relation_degree(t));
  }

  rep.threshold_pass = rep.oracle_pass = true;
  for (long d = 0; d <= std::max(threshold, oracle_bound); ++d) {
    Slice sl(m.rank(), m.n(), d);
    Reducer red(m.field());
    feed_relation_products(red, sl, rels, degs);
    for (const auto& e : candidates) feed_entry_products(red, sl, e);
    Z dim_slice = Z(m.rank()) * (phi(d, m.n()) - phi(d - 1, m.n()));
    bool generated = Z(red.rank()) == dim_slice;
    if (!generated && d <= threshold && rep.threshold_pass) {
      rep.threshold_pass = false;
      rep.threshold_witness = d;
    }
    if (!generated && d <= oracle_bound && rep.oracle_pass) {
      rep.oracle_pass = false;
      rep.oracle_witness = d;
    }
  }
  return rep;
}

}  // namespace escalier
