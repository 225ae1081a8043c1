#include "escalier/resolution.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "escalier/stdbasis.hpp"

namespace escalier {

namespace {

// Order-compatible total order on exponents (degree first, reverse-lex to
// break ties).  The minimal term of a polynomial under this order is its
// local leading term, so a triangular basis keyed by these pivots yields
// membership certificates valid in the local ring at the origin.
struct LocalLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    long da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return revlex_less(a, b);
  }
};

using Row = std::map<Exponent, Q, LocalLess>;

Row row_of(const TruncatedSeries& f, const Exponent& shift) {
  Row r;
  for (const auto& [e, c] : f.coeffs()) r.emplace(e.plus(shift), c);
  return r;
}

class Echelon {
 public:
  explicit Echelon(const Field& k) : k_(&k) {}

  Row reduce(Row v) const {
    while (!v.empty()) {
      auto it = rows_.find(v.begin()->first);
      if (it == rows_.end()) break;
      Q c = v.begin()->second;
      for (const auto& [e, w] : it->second) {
        auto [pos, fresh] = v.try_emplace(e, Q(0));
        pos->second = k_->sub(pos->second, k_->mul(c, w));
        if (pos->second == 0) v.erase(pos);
      }
    }
    return v;
  }

  bool insert(Row v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Q inv = k_->inv(v.begin()->second);
    if (inv != 1)
      for (auto& [e, c] : v) c = k_->mul(c, inv);
    Exponent p = v.begin()->first;
    rows_.emplace(std::move(p), std::move(v));
    return true;
  }

  const std::map<Exponent, Row, LocalLess>& rows() const { return rows_; }

 private:
  const Field* k_;
  std::map<Exponent, Row, LocalLess> rows_;
};

// Truncated span of an ideal: every product x^beta * g whose terms all stay
// within the degree bound is row-reduced in, so reduction to zero is an exact
// membership certificate (conservative: failure to reduce proves nothing).
class IdealSpan {
 public:
  IdealSpan(const Field& k, int n, long bound) : k_(k), n_(n), bound_(bound), ech_(k) {}

  void absorb(const TruncatedSeries& g) {
    if (g.is_zero()) return;
    if (g.ord() > bound_) return;
    long room = bound_ - g.max_degree();
    if (room < 0) room = 0;
    for (const Exponent& b : exponents_up_to_degree(n_, room)) ech_.insert(row_of(g, b));
  }

  bool contains(const TruncatedSeries& f) const {
    if (f.is_zero()) return true;
    return ech_.reduce(row_of(f, Exponent::zero(f.n_main() + f.n_param()))).empty();
  }

  bool contains_one() const {
    Row one;
    one.emplace(Exponent::zero(n_), Q(1));
    return ech_.reduce(std::move(one)).empty();
  }

  std::set<int> pure_pivot_coords() const {
    std::set<int> out;
    for (const auto& [p, row] : ech_.rows()) {
      int nz = -1, count = 0;
      for (int i = 0; i < p.dim(); ++i)
        if (p.c[i] > 0) {
          nz = i;
          ++count;
        }
      if (count == 1) out.insert(nz);
    }
    return out;
  }

 private:
  Field k_;
  int n_ = 0;
  long bound_ = 0;
  Echelon ech_;
};

long poly_max_degree(const std::vector<TruncatedSeries>& gens) {
  long d = 1;
  for (const auto& g : gens)
    if (!g.is_zero()) d = std::max(d, g.max_degree());
  return d;
}

bool vanishes_at_origin(const TruncatedSeries& f) {
  auto it = f.coeffs().find(Exponent::zero(f.n_main() + f.n_param()));
  return it == f.coeffs().end();
}

bool all_exact(const std::vector<TruncatedSeries>& gens) {
  for (const auto& g : gens)
    if (!g.is_exact()) return false;
  return true;
}

// move toward truncation degree d when legal: lowering always works, raising
// only on exact series
TruncatedSeries at_trunc(const TruncatedSeries& f, long d) {
  if (f.trunc() == d) return f;
  if (d < f.trunc() || f.is_exact()) return f.retruncate(d);
  return f;
}

// the restriction {x_c = 0 : c in coords}, an exact operation termwise
TruncatedSeries restrict_zero(const TruncatedSeries& f, const std::vector<int>& coords) {
  TruncatedSeries r = TruncatedSeries::zero(f.field(), f.n_main(), f.n_param(), f.trunc());
  for (const auto& [e, c] : f.coeffs()) {
    bool keep = true;
    for (int i : coords)
      if (e.c[i] > 0) {
        keep = false;
        break;
      }
    if (keep) r.add_term(e, c);
  }
  if (!f.is_exact()) r = r.mark_inexact();
  return r;
}

// restrictions of a generator list, zero results dropped (an empty list is
// the zero ideal)
std::vector<TruncatedSeries> restrict_all(const std::vector<TruncatedSeries>& gens,
                                          const std::vector<int>& coords) {
  std::vector<TruncatedSeries> out;
  for (const auto& g : gens) {
    TruncatedSeries r = restrict_zero(g, coords);
    if (!r.is_zero()) out.push_back(std::move(r));
  }
  return out;
}

long ideal_ord(const std::vector<TruncatedSeries>& gens) {
  long o = -1;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    long v = g.ord();
    if (o < 0 || v < o) o = v;
  }
  return o;
}

std::vector<int> complement(int n, const std::vector<int>& mask) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (std::find(mask.begin(), mask.end(), i) == mask.end()) out.push_back(i);
  return out;
}

long quick_bound(const std::vector<TruncatedSeries>& gens) {
  return std::min<long>(std::max<long>(poly_max_degree(gens) + 4, 4), 16);
}

// multiply a list of factors at a shared truncation degree that keeps exact
// factors exact and never raises an inexact one
TruncatedSeries product_of(const Field& k, int n, const std::vector<TruncatedSeries>& fac,
                           long safe) {
  long w = safe;
  for (const auto& f : fac)
    if (!f.is_exact()) w = std::min(w, f.trunc());
  TruncatedSeries prod = TruncatedSeries::constant(k, Q(1), n, 0, w);
  for (const auto& f : fac) prod = prod.mul(at_trunc(f, w));
  return prod;
}

// shared core of the cosupport probes; probe_bound == 0 runs the ladder
Cosupport cosupport_impl(const std::vector<TruncatedSeries>& gens, long mu,
                         const std::vector<int>& ambient, long probe_bound) {
  Cosupport out;
  out.gens = derivative_ideal(gens, static_cast<int>(mu) - 1);
  if (out.gens.empty()) {  // the zero ideal vanishes everywhere
    out.at_origin = true;
    return out;
  }
  const Field& k = out.gens[0].field();
  int n = out.gens[0].n_main() + out.gens[0].n_param();
  out.at_origin = true;
  for (const auto& g : out.gens)
    if (!vanishes_at_origin(g)) out.at_origin = false;

  long maxdeg = poly_max_degree(out.gens);
  std::vector<long> ladder;
  if (probe_bound > 0) {
    ladder.push_back(probe_bound);
  } else {
    ladder = {maxdeg + 3, 2 * maxdeg * std::max<long>(mu, 1),
              4 * maxdeg * std::max<long>(mu, 1)};
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
    // when every generator vanishes at the origin emptiness is impossible,
    // and only the cheapest rung is worth running for the pivot information
    if (out.at_origin) ladder.resize(1);
  }

  for (long b : ladder) {
    IdealSpan span(k, n, std::max(b, maxdeg + 1));
    for (const auto& g : out.gens) span.absorb(g);
    if (span.contains_one()) {
      out.empty = true;
      return out;
    }
    std::set<int> pure = span.pure_pivot_coords();
    bool zd = !ambient.empty();
    for (int i : ambient)
      if (!pure.count(i)) zd = false;
    if (zd) {
      out.zero_dimensional = true;
      return out;
    }
  }
  return out;
}

}  // namespace

// -- charts -------------------------------------------------------------------

BlowupChart root_chart(int n, const std::vector<int>& divisors) {
  if (n < 1) throw Error("BadInput", "ambient dimension must be positive");
  BlowupChart c;
  c.id = 0;
  c.n = n;
  for (int i = 0; i < n; ++i) c.names.push_back("x" + std::to_string(i + 1));
  for (int d : divisors) {
    if (d < 0 || d >= n) throw Error("BadInput", "divisor coordinate out of range");
    c.E.push_back({d, 0});
  }
  std::sort(c.E.begin(), c.E.end(),
            [](const ExceptionalRecord& a, const ExceptionalRecord& b) {
              return std::tie(a.birth, a.coord) < std::tie(b.birth, b.coord);
            });
  for (size_t i = 1; i < c.E.size(); ++i)
    if (c.E[i].coord == c.E[i - 1].coord)
      throw Error("BadInput", "duplicate divisor coordinate");
  for (int j = 0; j < n; ++j) c.subst.push_back(Exponent::unit(n, j));
  return c;
}

// -- derivative ideals and cosupport --------------------------------------------

std::vector<TruncatedSeries> derivative_ideal(const std::vector<TruncatedSeries>& gens,
                                              int order) {
  std::vector<TruncatedSeries> nonzero;
  for (const auto& g : gens)
    if (!g.is_zero()) nonzero.push_back(g);
  if (nonzero.empty()) return {};
  if (order < 0) throw Error("BadInput", "derivative order must be nonnegative");
  const Field& k = nonzero[0].field();
  int n = nonzero[0].n_main() + nonzero[0].n_param();

  std::vector<TruncatedSeries> candidates = nonzero;
  for (int s = 1; s <= order; ++s)
    for (const Exponent& a : exponents_of_degree(n, s))
      for (const auto& g : nonzero) {
        TruncatedSeries h = g.hasse(a);
        if (!h.is_zero()) candidates.push_back(std::move(h));
      }

  long bound = std::min<long>(poly_max_degree(candidates) + 2, 18);
  IdealSpan span(k, n, bound);
  std::vector<TruncatedSeries> kept;
  for (const auto& c : candidates) {
    if (!kept.empty() && span.contains(c)) continue;
    kept.push_back(c);
    span.absorb(c);
  }
  return kept;
}

Cosupport cosupport(const std::vector<TruncatedSeries>& gens, long mu) {
  int n = 0;
  for (const auto& g : gens)
    if (!g.is_zero()) {
      n = g.n_main() + g.n_param();
      break;
    }
  std::vector<int> ambient;
  for (int i = 0; i < n; ++i) ambient.push_back(i);
  return cosupport_impl(gens, mu, ambient, 0);
}

Cosupport cosupport(const std::vector<TruncatedSeries>& gens, long mu,
                    const std::vector<int>& ambient, long probe_bound) {
  return cosupport_impl(gens, mu, ambient, probe_bound);
}

bool cosupport_contains(const Cosupport& c, const std::vector<Q>& q) {
  for (const auto& g : c.gens)
    if (g.field().reduce(g.eval(q)) != 0) return false;
  return true;
}

// -- blow-ups and transforms ------------------------------------------------------

std::vector<BlowupChart> blow_up(const BlowupChart& chart, const std::vector<int>& center,
                                 int step) {
  if (center.empty()) throw Error("BadInput", "blow-up center is empty");
  std::vector<int> c = center;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  if (c.size() != center.size()) throw Error("BadInput", "center coordinates repeat");
  for (int i : c)
    if (i < 0 || i >= chart.n) throw Error("BadInput", "center coordinate out of range");

  std::vector<BlowupChart> out;
  for (int p : c) {
    BlowupChart ch;
    ch.id = static_cast<int>(out.size());
    ch.n = chart.n;
    ch.names = chart.names;
    ch.parent = chart.id;
    ch.center = c;
    ch.pivot = p;
    ch.birth_step = step;
    for (int j = 0; j < chart.n; ++j) {
      bool in_center = std::find(c.begin(), c.end(), j) != c.end();
      Exponent e = Exponent::unit(chart.n, j);
      if (in_center && j != p) e = e.plus(Exponent::unit(chart.n, p));
      ch.subst.push_back(e);
    }
    for (const auto& rec : chart.E)
      if (rec.coord != p) ch.E.push_back(rec);
    ch.E.push_back({p, step});
    out.push_back(std::move(ch));
  }
  return out;
}

TruncatedSeries pullback(const TruncatedSeries& f, const BlowupChart& chart) {
  if (f.n_param() != 0 || f.n_main() != chart.n)
    throw Error("BadInput", "pullback dimension mismatch");
  long need = 0;
  std::vector<Exponent> images;
  for (const auto& [e, c] : f.coeffs()) {
    Exponent img = Exponent::zero(chart.n);
    for (int j = 0; j < chart.n; ++j)
      for (int t = 0; t < e.c[j]; ++t) img = img.plus(chart.subst[j]);
    need = std::max(need, img.degree());
    images.push_back(std::move(img));
  }
  // the substitution never lowers total degree, so an unknown tail above the
  // truncation stays above it and the truncation degree carries over
  long w = f.is_exact() ? std::max(f.trunc(), need) : f.trunc();
  TruncatedSeries r = TruncatedSeries::zero(f.field(), chart.n, 0, w);
  size_t i = 0;
  for (const auto& [e, c] : f.coeffs()) r.add_term(images[i++], c);
  if (!f.is_exact()) r = r.mark_inexact();
  return r;
}

namespace {

std::vector<TruncatedSeries> divide_out_pivot(const std::vector<TruncatedSeries>& gens,
                                              const BlowupChart& chart, long power,
                                              bool fixed) {
  if (chart.pivot < 0) throw Error("BadInput", "chart carries no exceptional coordinate");
  std::vector<TruncatedSeries> out;
  for (const auto& g : gens) {
    if (g.is_zero()) throw Error("BadInput", "zero generator in a marked ideal");
    TruncatedSeries pb = pullback(g, chart);
    long m = -1;
    for (const auto& [e, c] : pb.coeffs())
      if (m < 0 || e.c[chart.pivot] < m) m = e.c[chart.pivot];
    long drop = power;
    if (fixed) {
      if (m < power)
        throw Error("InadmissibleCenter",
                    "pullback of a generator is not divisible by the " +
                        std::to_string(power) + "-th power of the exceptional coordinate");
    } else {
      drop = m;
    }
    long w = pb.trunc();
    if (!pb.is_exact()) {
      w = pb.trunc() - drop;
      if (w < 1)
        throw Error("TruncationTooSmall",
                    "dividing out the exceptional power leaves no certified terms");
    }
    TruncatedSeries t = TruncatedSeries::zero(pb.field(), chart.n, 0, w);
    for (const auto& [e, c] : pb.coeffs()) {
      Exponent d = e;
      d.c[chart.pivot] -= static_cast<int>(drop);
      t.add_term(d, c);
    }
    if (!pb.is_exact()) t = t.mark_inexact();
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<TruncatedSeries> controlled_transform(const std::vector<TruncatedSeries>& gens,
                                                  const BlowupChart& chart, long mu) {
  return divide_out_pivot(gens, chart, mu, true);
}

std::vector<TruncatedSeries> strict_transform(const std::vector<TruncatedSeries>& gens,
                                              const BlowupChart& chart) {
  return divide_out_pivot(gens, chart, 0, false);
}

// -- companion and capacitor --------------------------------------------------------

Companion companion_ideal(const std::vector<TruncatedSeries>& gens, long mu,
                          const std::vector<int>& divisor_coords) {
  if (gens.empty()) throw Error("BadInput", "companion of the zero ideal");
  const Field& k = gens[0].field();
  int n = gens[0].n_main();
  for (const auto& g : gens)
    if (g.is_zero()) throw Error("BadInput", "zero generator in a marked ideal");

  Companion out;
  out.monomial.assign(n, 0);
  for (int c : divisor_coords) {
    if (c < 0 || c >= n) throw Error("BadInput", "divisor coordinate out of range");
    long m = -1;
    for (const auto& g : gens)
      for (const auto& [e, q] : g.coeffs())
        if (m < 0 || e.c[c] < m) m = e.c[c];
    out.monomial[c] = m;
  }

  Exponent shift = Exponent::zero(n);
  for (int i = 0; i < n; ++i) shift.c[i] = static_cast<int>(out.monomial[i]);
  std::vector<TruncatedSeries> ngens;
  for (const auto& g : gens) {
    TruncatedSeries t = TruncatedSeries::zero(k, n, 0, g.trunc());
    for (const auto& [e, c] : g.coeffs()) t.add_term(*e.minus(shift), c);
    if (!g.is_exact()) t = t.mark_inexact();
    ngens.push_back(std::move(t));
  }
  long a = ideal_ord(ngens);
  out.ord_n = a;
  if (a == 0) {
    out.tag = CompanionTag::NeedsMonomialStep;
    out.gens = std::move(ngens);
    out.mu = 0;
    return out;
  }
  out.tag = CompanionTag::MaximalOrder;
  if (a >= mu) {
    out.gens = std::move(ngens);
    out.mu = a;
    return out;
  }

  // sum of (N, a) and (M, mu - a): the generators are the (mu-a)-fold products
  // of N together with the pure monomial M^a, marked with a * (mu - a)
  long p = mu - a;
  long safe = std::max<long>(gens[0].trunc(), poly_max_degree(ngens) * p + 2);
  std::vector<TruncatedSeries> prods;
  std::vector<size_t> pick(static_cast<size_t>(p), 0);
  while (true) {
    std::vector<TruncatedSeries> fac;
    for (size_t s = 0; s < pick.size(); ++s) fac.push_back(ngens[pick[s]]);
    TruncatedSeries prod = product_of(k, n, fac, safe);
    if (!prod.is_zero()) prods.push_back(std::move(prod));
    size_t i = pick.size();
    while (i > 0 && pick[i - 1] == ngens.size() - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (size_t j = i; j < pick.size(); ++j) pick[j] = pick[i - 1];
  }
  Exponent me = Exponent::zero(n);
  for (int i = 0; i < n; ++i) me.c[i] = static_cast<int>(a * out.monomial[i]);
  prods.push_back(TruncatedSeries::monomial(k, Q(1), me, n, 0, safe));

  long bound = std::min<long>(poly_max_degree(prods) + 2, 18);
  IdealSpan span(k, n, bound);
  for (const auto& g : prods) {
    if (!out.gens.empty() && span.contains(g)) continue;
    out.gens.push_back(g);
    span.absorb(g);
  }
  out.mu = a * (mu - a);
  return out;
}

std::vector<TruncatedSeries> coefficient_capacitor(const std::vector<TruncatedSeries>& gens,
                                                   long mu, long* gradation) {
  if (mu < 1) throw Error("BadInput", "marking must be at least one");
  if (mu > 3)
    throw Error("GuardExceeded",
                "the capacitor gradation mu! is only tabulated for mu <= 3");
  if (gens.empty()) throw Error("BadInput", "capacitor of the zero ideal");
  const Field& k = gens[0].field();
  int n = gens[0].n_main();
  long c = 1;
  for (long i = 2; i <= mu; ++i) c *= i;
  if (gradation) *gradation = c;

  // pools[a] generates the a-th derivative ideal; its elements carry weight mu-a
  std::vector<std::vector<TruncatedSeries>> pools;
  for (long a = 0; a < mu; ++a)
    pools.push_back(derivative_ideal(gens, static_cast<int>(a)));

  // weight patterns: nonincreasing tuples whose proper prefix sums stay below
  // the gradation and whose totals reach it -- exactly the minimal products
  std::vector<std::vector<long>> patterns;
  std::vector<long> cur;
  auto rec = [&](auto&& self, long prev, long sum) -> void {
    for (long w = std::min(prev, mu); w >= 1; --w) {
      cur.push_back(w);
      if (sum + w >= c)
        patterns.push_back(cur);
      else
        self(self, w, sum + w);
      cur.pop_back();
    }
  };
  rec(rec, mu, 0);

  long maxpool = 1;
  for (const auto& p : pools) maxpool = std::max(maxpool, poly_max_degree(p));
  std::vector<TruncatedSeries> cands;
  for (const auto& pat : patterns) {
    long safe = std::max<long>(gens[0].trunc(),
                               maxpool * static_cast<long>(pat.size()) + 2);
    // one element per slot; equal weights take nondecreasing pool indices
    std::vector<size_t> pick(pat.size(), 0);
    auto emit = [&]() {
      std::vector<TruncatedSeries> fac;
      for (size_t s = 0; s < pat.size(); ++s) fac.push_back(pools[mu - pat[s]][pick[s]]);
      TruncatedSeries prod = product_of(k, n, fac, safe);
      if (!prod.is_zero()) cands.push_back(std::move(prod));
    };
    auto step = [&](auto&& self, size_t slot) -> void {
      const auto& pool = pools[mu - pat[slot]];
      size_t lo = (slot > 0 && pat[slot] == pat[slot - 1]) ? pick[slot - 1] : 0;
      for (size_t i = lo; i < pool.size(); ++i) {
        pick[slot] = i;
        if (slot + 1 == pat.size())
          emit();
        else
          self(self, slot + 1);
      }
    };
    if (!pat.empty()) step(step, 0);
  }

  long bound = std::min<long>(poly_max_degree(cands) + 2, 18);
  IdealSpan span(k, n, bound);
  std::vector<TruncatedSeries> kept;
  for (const auto& g : cands) {
    if (!kept.empty() && span.contains(g)) continue;
    kept.push_back(g);
    span.absorb(g);
  }
  return kept;
}

// -- tangent directions ---------------------------------------------------------------

TruncatedSeries apply_normalization(const TruncatedSeries& f, int coord,
                                    const TruncatedSeries& replacement) {
  if (coord < 0 || coord >= f.n_main()) throw Error("BadInput", "coordinate out of range");
  long wt = (replacement.is_exact() || replacement.trunc() >= f.trunc())
                ? f.trunc()
                : replacement.trunc();
  TruncatedSeries base = at_trunc(f, wt);
  TruncatedSeries rep = at_trunc(replacement, wt);

  // split f into slices by the exponent of the replaced coordinate
  std::map<int, TruncatedSeries> slices;
  for (const auto& [e, c] : base.coeffs()) {
    int d = e.c[coord];
    auto it = slices.find(d);
    if (it == slices.end())
      it = slices.emplace(d, TruncatedSeries::zero(f.field(), f.n_main(), f.n_param(), wt))
               .first;
    Exponent flat = e;
    flat.c[coord] = 0;
    it->second.add_term(flat, c);
  }
  TruncatedSeries out = TruncatedSeries::zero(f.field(), f.n_main(), f.n_param(), wt);
  if (!base.is_exact()) out = out.mark_inexact();
  TruncatedSeries power =
      TruncatedSeries::constant(f.field(), Q(1), f.n_main(), f.n_param(), wt);
  int at = 0;
  for (const auto& [d, slice] : slices) {
    while (at < d) {
      power = power.mul(rep);
      ++at;
    }
    out = out.add(slice.mul(power));
  }
  return out;
}

TangentDirection tangent_direction(const std::vector<TruncatedSeries>& dgens,
                                   const std::vector<int>& divisor_coords, Rng& rng) {
  std::vector<TruncatedSeries> pool;
  for (const auto& g : dgens)
    if (!g.is_zero()) pool.push_back(g);
  if (pool.empty()) throw Error("NoTangentDirection", "the derivative ideal is zero");
  const Field& k = pool[0].field();
  int n = pool[0].n_main();
  long wt = pool[0].trunc();
  for (const auto& g : pool) wt = std::min(wt, g.trunc());

  auto target_of = [&](const TruncatedSeries& u, bool transverse_only) -> int {
    TruncatedSeries lin = u.homogeneous_part(1);
    if (lin.is_zero()) return -1;
    int fallback = -1;
    for (const auto& [e, c] : lin.coeffs()) {
      int i = 0;
      while (e.c[i] == 0) ++i;
      bool divisor = std::find(divisor_coords.begin(), divisor_coords.end(), i) !=
                     divisor_coords.end();
      if (!divisor) return i;
      if (fallback < 0) fallback = i;
    }
    return transverse_only ? -1 : fallback;
  };

  TruncatedSeries chosen = pool[0];
  int target = -1;
  for (const auto& g : pool) {
    int t = target_of(g, true);
    if (t >= 0) {
      chosen = g;
      target = t;
      break;
    }
  }
  if (target < 0)
    for (int trial = 0; trial < 8 && target < 0; ++trial) {
      TruncatedSeries u = TruncatedSeries::zero(k, n, 0, wt);
      for (const auto& g : pool) {
        long c = rng.range(-2, 2);
        if (c != 0) u = u.add(at_trunc(g, wt).scale(k.from_long(c)));
      }
      int t = target_of(u, true);
      if (t >= 0) {
        chosen = u;
        target = t;
      }
    }
  if (target < 0)
    for (const auto& g : pool) {
      int t = target_of(g, false);
      if (t >= 0) {
        chosen = g;
        target = t;
        break;
      }
    }
  if (target < 0)
    throw Error("NoTangentDirection", "no element of order one in the derivative ideal");

  TangentDirection out;
  out.coord = target;
  Exponent et = Exponent::unit(n, target);
  Q lambda = chosen.homogeneous_part(1).coeffs().find(et)->second;
  TruncatedSeries u = chosen.scale(k.inv(lambda));
  out.u = u;
  if (u.coeffs().size() == 1 && u.coeffs().begin()->first == et) {
    out.changed = false;
    out.replacement = TruncatedSeries::zero(k, n, 0, u.trunc());
    return out;
  }

  // invert the triangular change x_t -> u(x): iterate r = x_t - tail(x_t <- r)
  out.changed = true;
  TruncatedSeries var = TruncatedSeries::variable(k, target, n, 0, u.trunc());
  TruncatedSeries tail = u.sub(var);
  TruncatedSeries r = var;
  for (int iter = 0; iter < 96; ++iter) {
    TruncatedSeries an = apply_normalization(tail, target, r);
    TruncatedSeries next = at_trunc(var, an.trunc()).sub(an);
    bool same = next.trunc() == r.trunc() && next.coeffs() == r.coeffs();
    r = next;
    if (same) break;
  }
  if (r.is_exact() && u.is_exact()) {
    // a polynomial fixed point modulo the truncation need not be the exact
    // inverse; recheck the composition in twice the degree window
    long wc = 2 * std::max<long>(u.trunc(), 2) + 2;
    TruncatedSeries comp = apply_normalization(at_trunc(u, wc), target, at_trunc(r, wc));
    TruncatedSeries vc = TruncatedSeries::variable(k, target, n, 0, wc);
    if (!comp.equals(vc)) r = r.mark_inexact();
  }
  out.truncated = !r.is_exact();
  out.replacement = r;
  return out;
}

std::vector<int> monomial_center(const std::vector<long>& exponents,
                                 const std::vector<ExceptionalRecord>& divisors, long mu) {
  std::vector<ExceptionalRecord> divs = divisors;
  std::sort(divs.begin(), divs.end(),
            [](const ExceptionalRecord& a, const ExceptionalRecord& b) {
              return std::tie(a.birth, a.coord) < std::tie(b.birth, b.coord);
            });
  std::vector<long> a;
  for (const auto& d : divs) {
    if (d.coord < 0 || d.coord >= static_cast<int>(exponents.size()))
      throw Error("BadInput", "divisor coordinate out of range");
    a.push_back(exponents[d.coord]);
  }
  int m = static_cast<int>(divs.size());
  std::vector<int> best;
  bool have = false;
  for (int mask = 1; mask < (1 << m); ++mask) {
    long sum = 0, least = -1;
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) {
        sum += a[i];
        least = (least < 0 || a[i] < least) ? a[i] : least;
        idx.push_back(i);
      }
    if (sum < mu || sum - least >= mu) continue;
    if (!have || idx < best) {
      best = idx;
      have = true;
    }
  }
  if (!have)
    throw Error("EmptyCosupport", "no subset of the divisor exponents reaches the marking");
  std::vector<int> out;
  for (int i : best) out.push_back(divs[i].coord);
  std::sort(out.begin(), out.end());
  return out;
}

// -- the driver -------------------------------------------------------------------

namespace {

// A descent frame.  Stage frames carry the companion capacitor being resolved
// (transformed along the branch); restriction frames record coordinates a
// deeper analysis was restricted to, either an intersection with divisors
// that predate the stage (step 1a) or a maximal-contact hypersurface (1b).
struct Frame {
  enum Kind { Stage = 0, Divisors = 1, Contact = 2 };
  int kind = Stage;
  std::vector<TruncatedSeries> ideal;  // stage frames only
  long mu = 0;                         // stage frames only
  int cutoff = 0;                      // stage frames: divisor-age cutoff
  int stage_id = -1;                   // stage frames
  std::vector<int> coords;             // restriction frames
};

class Resolver {
 public:
  Resolver(const Field& k, int n, std::vector<TruncatedSeries> gens, long mu,
           const std::vector<int>& divisors, std::uint64_t seed, const ResolveLimits& lim)
      : k_(k), n_(n), mu_(mu), lim_(lim), rng_(seed) {
    trace_.seed = seed;
    trace_.charts.push_back(root_chart(n, divisors));
    TraceNode root;
    root.chart = 0;
    root.state = {0, std::move(gens), mu};
    trace_.nodes.push_back(std::move(root));
  }

  ResolutionTrace run() {
    process(0, {});
    trace_.complete = true;
    return trace_;
  }

 private:
  Field k_;
  int n_;
  long mu_;
  ResolveLimits lim_;
  Rng rng_;
  ResolutionTrace trace_;
  int stage_counter_ = 0;

  std::vector<int> all_coords() const {
    std::vector<int> v;
    for (int i = 0; i < n_; ++i) v.push_back(i);
    return v;
  }

  ResolutionTrace snapshot(int ni) {
    trace_.nodes[ni].status = "limit";
    trace_.complete = false;
    return trace_;
  }

  // walk the stack to recover the mask and the deepest restricted ideal
  void rebuild(const std::vector<Frame>& st, const std::vector<TruncatedSeries>& I,
               std::vector<int>& mask, std::vector<TruncatedSeries>& cur, long& cmu) {
    mask.clear();
    cur = I;
    cmu = mu_;
    for (const auto& f : st) {
      if (f.kind == Frame::Stage) {
        cur = f.ideal;
        cmu = f.mu;
      } else {
        for (int c : f.coords) mask.push_back(c);
        cur = restrict_all(cur, f.coords);
      }
    }
    std::sort(mask.begin(), mask.end());
  }

  void harmonize(std::vector<TruncatedSeries>& I, std::vector<Frame>& frames) {
    long w = lim_.trunc;
    long ceiling = -1;
    auto scan = [&](const std::vector<TruncatedSeries>& v) {
      for (const auto& g : v) {
        if (!g.is_zero()) w = std::max(w, g.max_degree() + 1);
        if (!g.is_exact() && (ceiling < 0 || g.trunc() < ceiling)) ceiling = g.trunc();
      }
    };
    scan(I);
    for (const auto& f : frames)
      if (f.kind == Frame::Stage) scan(f.ideal);
    if (ceiling >= 0) w = std::min(w, ceiling);
    for (auto& g : I) g = at_trunc(g, w);
    for (auto& f : frames)
      if (f.kind == Frame::Stage)
        for (auto& g : f.ideal) g = at_trunc(g, w);
  }

  int chart_age(const BlowupChart& chart) const {
    int a = 0;
    for (const auto& rec : chart.E) a = std::max(a, rec.birth);
    return a;
  }

  // sanity probe at a maximal-contact descent: a sampled point of the
  // capacitor's equimultiple locus lying on the hypersurface must also lie
  // in the locus of the restricted capacitor
  void contact_probe(const std::vector<TruncatedSeries>& cap, long cmu, int contact,
                     const std::vector<int>& mask) {
    if (!all_exact(cap)) return;
    std::vector<TruncatedSeries> restricted = restrict_all(cap, {contact});
    if (restricted.empty()) return;
    Cosupport full = cosupport_impl(cap, cmu, {}, quick_bound(cap));
    Cosupport part = cosupport_impl(restricted, cmu, {}, quick_bound(restricted));
    if (!all_exact(full.gens) || !all_exact(part.gens)) return;
    std::vector<int> free;
    for (int i = 0; i < n_; ++i)
      if (i != contact && std::find(mask.begin(), mask.end(), i) == mask.end())
        free.push_back(i);
    long count = 1;
    for (size_t i = 0; i < free.size(); ++i) count *= 3;
    for (long t = 0; t < count; ++t) {
      std::vector<Q> q(static_cast<size_t>(n_), Q(0));
      long rest = t;
      for (int f : free) {
        q[static_cast<size_t>(f)] = Q(rest % 3 - 1);
        rest /= 3;
      }
      if (cosupport_contains(full, q) && !cosupport_contains(part, q))
        throw Error("Internal", "restriction probe mismatch at a maximal-contact descent");
    }
  }

  void process(int ni, std::vector<Frame> frames) {
    const BlowupChart chart = trace_.charts[trace_.nodes[ni].chart];
    std::vector<TruncatedSeries> I = trace_.nodes[ni].state.gens;
    harmonize(I, frames);

    Cosupport cos = cosupport_impl(I, mu_, all_coords(), 0);
    trace_.nodes[ni].ord_origin = ideal_ord(I);
    if (cos.empty) {
      trace_.nodes[ni].status = "resolved";
      return;
    }
    if (!cos.at_origin)
      throw LimitError("cosupport neither certified empty nor seen at the chart origin",
                       snapshot(ni));

    // validate inherited frames top-down; the first exhausted frame pops
    // together with everything below it
    std::vector<Frame> st;
    std::vector<int> mask;
    std::vector<TruncatedSeries> cur = I;
    long cmu = mu_;
    for (auto& f : frames) {
      if (f.kind == Frame::Stage) {
        Cosupport cf =
            cosupport_impl(f.ideal, f.mu, complement(n_, mask), quick_bound(f.ideal));
        if (cf.empty || !cf.at_origin) break;
        cur = f.ideal;
        cmu = f.mu;
        st.push_back(std::move(f));
      } else {
        bool lost = false;
        for (int c : f.coords)
          if (std::find(mask.begin(), mask.end(), c) != mask.end()) lost = true;
        if (lost) break;
        std::vector<TruncatedSeries> R = restrict_all(cur, f.coords);
        if (!R.empty()) {
          Cosupport cr = cosupport_impl(R, cmu, complement(n_, mask), quick_bound(R));
          if (cr.empty || !cr.at_origin) break;
        }
        for (int c : f.coords) mask.push_back(c);
        std::sort(mask.begin(), mask.end());
        cur = std::move(R);
        st.push_back(std::move(f));
      }
    }

    // derive the center by extending the stack until a subspace falls out
    std::vector<int> center;
    for (int guard = 0; guard < 64 && center.empty(); ++guard) {
      std::vector<int> ambient = complement(n_, mask);
      if (!st.empty() && st.back().kind == Frame::Stage) {
        const long stage_mu = st.back().mu;
        const int stage_cutoff = st.back().cutoff;
        Cosupport cs = cosupport_impl(st.back().ideal, stage_mu, ambient,
                                      quick_bound(st.back().ideal));
        if (cs.empty || !cs.at_origin) {
          st.pop_back();
          rebuild(st, I, mask, cur, cmu);
          continue;
        }
        if (cs.zero_dimensional) {
          center = mask;
          center.insert(center.end(), ambient.begin(), ambient.end());
          break;
        }
        // step 1a: intersections with divisors that predate the stage
        std::vector<ExceptionalRecord> cands;
        for (const auto& rec : chart.E)
          if (rec.birth <= stage_cutoff &&
              std::find(ambient.begin(), ambient.end(), rec.coord) != ambient.end())
            cands.push_back(rec);
        std::sort(cands.begin(), cands.end(),
                  [](const ExceptionalRecord& x, const ExceptionalRecord& y) {
                    return std::tie(x.birth, x.coord) < std::tie(y.birth, y.coord);
                  });
        bool descended = false;
        int m = static_cast<int>(cands.size());
        for (int size = m; size >= 1 && !descended; --size) {
          std::vector<std::vector<int>> subsets;
          std::vector<int> pickidx;
          auto gen = [&](auto&& self, int from) -> void {
            if (static_cast<int>(pickidx.size()) == size) {
              subsets.push_back(pickidx);
              return;
            }
            for (int i = from; i < m; ++i) {
              pickidx.push_back(i);
              self(self, i + 1);
              pickidx.pop_back();
            }
          };
          gen(gen, 0);
          for (const auto& sel : subsets) {
            std::vector<int> sc;
            for (int i : sel) sc.push_back(cands[i].coord);
            std::sort(sc.begin(), sc.end());
            std::vector<TruncatedSeries> R = restrict_all(st.back().ideal, sc);
            bool take = R.empty();
            if (!take) {
              std::vector<int> amb2;
              for (int i : ambient)
                if (std::find(sc.begin(), sc.end(), i) == sc.end()) amb2.push_back(i);
              Cosupport cr = cosupport_impl(R, stage_mu, amb2, quick_bound(R));
              take = !cr.empty && cr.at_origin;
            }
            if (take) {
              Frame f;
              f.kind = Frame::Divisors;
              f.coords = sc;
              st.push_back(std::move(f));
              for (int c : sc) mask.push_back(c);
              std::sort(mask.begin(), mask.end());
              cur = std::move(R);
              cmu = stage_mu;
              descended = true;
              break;
            }
          }
        }
        if (descended) continue;
        // step 1b: descend to a maximal-contact hypersurface
        std::vector<int> edivs;
        for (const auto& rec : chart.E)
          if (std::find(ambient.begin(), ambient.end(), rec.coord) != ambient.end())
            edivs.push_back(rec.coord);
        TangentDirection td = tangent_direction(cs.gens, edivs, rng_);
        if (td.changed) {
          trace_.nodes[ni].normalizations.push_back({td.coord, td.replacement});
          trace_.nodes[ni].truncation_flag =
              trace_.nodes[ni].truncation_flag || td.truncated;
          for (auto& g : I) g = apply_normalization(g, td.coord, td.replacement);
          for (auto& f : st)
            if (f.kind == Frame::Stage)
              for (auto& g : f.ideal) g = apply_normalization(g, td.coord, td.replacement);
          if (td.truncated) harmonize(I, st);
        }
        contact_probe(st.back().ideal, stage_mu, td.coord, mask);
        Frame f;
        f.kind = Frame::Contact;
        f.coords = {td.coord};
        cur = restrict_all(st.back().ideal, f.coords);
        cmu = stage_mu;
        st.push_back(std::move(f));
        mask.push_back(td.coord);
        std::sort(mask.begin(), mask.end());
        continue;
      }

      // restriction level: run a fresh companion analysis
      if (cur.empty()) {
        center = mask;  // the restricted ideal is zero: blow up the subspace
        break;
      }
      std::vector<int> ehere;
      for (const auto& rec : chart.E)
        if (std::find(ambient.begin(), ambient.end(), rec.coord) != ambient.end())
          ehere.push_back(rec.coord);
      Companion comp = companion_ideal(cur, cmu, ehere);
      if (comp.tag == CompanionTag::NeedsMonomialStep) {
        std::vector<ExceptionalRecord> recs;
        for (const auto& rec : chart.E)
          if (std::find(ehere.begin(), ehere.end(), rec.coord) != ehere.end())
            recs.push_back(rec);
        std::vector<int> sc = monomial_center(comp.monomial, recs, cmu);
        center = mask;
        center.insert(center.end(), sc.begin(), sc.end());
        trace_.nodes[ni].monomial_step = st.empty();
        break;
      }
      Cosupport co = cosupport_impl(comp.gens, comp.mu, ambient, quick_bound(comp.gens));
      if (co.zero_dimensional && co.at_origin) {
        center = mask;
        center.insert(center.end(), ambient.begin(), ambient.end());
        break;
      }
      long grad = 0;
      std::vector<TruncatedSeries> cap = coefficient_capacitor(comp.gens, comp.mu, &grad);
      Frame f;
      f.kind = Frame::Stage;
      f.ideal = std::move(cap);
      f.mu = grad;
      f.cutoff = chart_age(chart);
      f.stage_id = stage_counter_++;
      if (st.empty()) trace_.nodes[ni].ord_n = comp.ord_n;
      st.push_back(std::move(f));
      cur = st.back().ideal;
      cmu = st.back().mu;
    }
    if (center.empty()) throw Error("Internal", "center derivation did not converge");
    std::sort(center.begin(), center.end());
    center.erase(std::unique(center.begin(), center.end()), center.end());

    for (const auto& f : st)
      if (f.kind == Frame::Stage && f.stage_id >= 0) {
        trace_.nodes[ni].stage = f.stage_id;
        break;
      }
    trace_.nodes[ni].center = center;

    // the center must sit inside the cosupport of the (possibly renormalized)
    // marked ideal: each derivative generator restricts to zero on it
    for (const auto& g : derivative_ideal(I, static_cast<int>(mu_) - 1))
      if (!restrict_zero(g, center).is_zero())
        throw Error("Internal", "selected center leaves the cosupport");

    if (trace_.blowups >= lim_.max_blowups)
      throw LimitError("blow-up budget exhausted", snapshot(ni));
    int step = ++trace_.blowups;
    std::vector<BlowupChart> kids = blow_up(chart, center, step);
    trace_.nodes[ni].status = "blown-up";
    for (auto& kc : kids) {
      if (static_cast<int>(trace_.charts.size()) >= lim_.max_charts)
        throw LimitError("chart budget exhausted", snapshot(ni));
      kc.id = static_cast<int>(trace_.charts.size());
      trace_.charts.push_back(kc);
      std::vector<TruncatedSeries> cgens = controlled_transform(I, kc, mu_);
      std::vector<Frame> cframes;
      for (const auto& f : st) {
        if (f.kind == Frame::Stage) {
          Frame g = f;
          g.ideal = controlled_transform(f.ideal, kc, f.mu);
          cframes.push_back(std::move(g));
        } else {
          if (std::find(f.coords.begin(), f.coords.end(), kc.pivot) != f.coords.end())
            break;  // the pivot chart loses this hypersurface and all below
          cframes.push_back(f);
        }
      }
      TraceNode child;
      child.chart = kc.id;
      child.state = {kc.id, std::move(cgens), mu_};
      child.parent = ni;
      int ci = static_cast<int>(trace_.nodes.size());
      trace_.nodes.push_back(std::move(child));
      trace_.nodes[ni].children.push_back(ci);
      process(ci, std::move(cframes));
    }
  }
};

}  // namespace

ResolutionTrace resolve_marked(const Field& k, int n,
                               const std::vector<TruncatedSeries>& gens, long mu,
                               const std::vector<int>& initial_divisors,
                               std::uint64_t seed, const ResolveLimits& limits) {
  if (!k.is_rationals())
    throw Error("BadInput", "the resolution driver requires characteristic zero");
  if (n < 1 || n > 3) throw Error("BadInput", "the driver handles at most three variables");
  if (mu < 1) throw Error("BadInput", "the marking must be at least one");
  if (gens.empty()) throw Error("BadInput", "a marked ideal needs at least one generator");
  std::vector<TruncatedSeries> in;
  for (const auto& g : gens) {
    check_same_field(k, g.field());
    if (g.is_zero()) throw Error("BadInput", "zero generator in a marked ideal");
    if (!g.is_exact()) throw Error("BadInput", "generators must be exact polynomials");
    if (g.n_main() != n || g.n_param() != 0)
      throw Error("BadInput", "generator dimension mismatch");
    in.push_back(at_trunc(g, std::max(limits.trunc, g.max_degree() + 1)));
  }
  Resolver r(k, n, std::move(in), mu, initial_divisors, seed, limits);
  return r.run();
}

// -- verification ----------------------------------------------------------------------

namespace {

std::vector<Z> hs_values(const std::vector<TruncatedSeries>& gens, const std::vector<Q>& q,
                         long s_max) {
  std::vector<TruncatedSeries> nz;
  for (const auto& g : gens)
    if (!g.is_zero()) nz.push_back(g);
  if (nz.empty()) return {};
  // the presentation wants one uniform truncation degree across generators
  long w = std::max(s_max + 2, poly_max_degree(nz) + 1);
  std::vector<TruncatedSeries> lifted;
  for (const auto& g : nz) lifted.push_back(at_trunc(g, w));
  IdealPresentation pres(lifted, MonomialOrder::canonical(lifted[0].n_main()));
  return hilbert_samuel_at(pres, q, s_max);
}

bool hs_leq(const std::vector<Z>& a, const std::vector<Z>& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool same_ideal_lists(const std::vector<TruncatedSeries>& a,
                      const std::vector<TruncatedSeries>& b) {
  if (a.size() != b.size()) return false;
  for (size_t j = 0; j < a.size(); ++j) {
    long w = std::min(a[j].trunc(), b[j].trunc());
    if (!at_trunc(a[j], w).equals(at_trunc(b[j], w))) return false;
  }
  return true;
}

}  // namespace

VerifyReport verify_resolution(const ResolutionTrace& trace, const Field& k, int n,
                               const std::vector<TruncatedSeries>& gens, long mu,
                               bool hilbert_probes) {
  VerifyReport rep;
  if (trace.nodes.empty() || trace.charts.empty()) {
    rep.leaves_resolved = false;
    rep.notes.push_back("empty trace");
    return rep;
  }

  size_t nn = trace.nodes.size();
  std::vector<std::vector<TruncatedSeries>> work(nn);    // state after normalizations
  std::vector<std::vector<TruncatedSeries>> strict(nn);  // strict transform of the input

  for (size_t ni = 0; ni < nn; ++ni) {
    const TraceNode& node = trace.nodes[ni];
    if (node.chart < 0 || node.chart >= static_cast<int>(trace.charts.size())) {
      rep.divisors_consistent = false;
      rep.notes.push_back("node points at a missing chart");
      continue;
    }
    const BlowupChart& chart = trace.charts[node.chart];

    work[ni] = node.state.gens;
    if (ni == 0) {
      strict[0] = gens;
      if (!same_ideal_lists(work[0], gens)) {
        rep.divisibility = false;
        rep.notes.push_back("root state differs from the input ideal");
      }
    }
    try {
      for (const auto& [coord, repl] : node.normalizations) {
        for (auto& g : work[ni]) g = apply_normalization(g, coord, repl);
        for (auto& g : strict[ni]) g = apply_normalization(g, coord, repl);
      }
    } catch (const Error& e) {
      rep.divisibility = false;
      rep.notes.push_back(std::string("normalization replay failed: ") + e.what());
    }

    if (ideal_ord(node.state.gens) != node.ord_origin) {
      rep.ord_monotone = false;
      rep.notes.push_back("recorded order disagrees with the generators");
    }

    if (node.center.empty()) {
      bool ok = node.status == "resolved";
      if (ok) {
        try {
          ok = cosupport(work[ni], mu).empty;
        } catch (const Error&) {
          ok = false;
        }
      }
      if (!ok) {
        rep.leaves_resolved = false;
        rep.notes.push_back("leaf without an emptiness certificate");
      }
      continue;
    }

    // centers must stay inside the cosupport
    try {
      for (const auto& g : derivative_ideal(work[ni], static_cast<int>(mu) - 1))
        if (!restrict_zero(g, node.center).is_zero()) {
          rep.centers_admissible = false;
          rep.notes.push_back("center leaves the cosupport");
          break;
        }
    } catch (const Error& e) {
      rep.centers_admissible = false;
      rep.notes.push_back(std::string("admissibility replay failed: ") + e.what());
    }

    // children: chart bookkeeping and the controlled transforms
    for (int ci : node.children) {
      if (ci < 0 || ci >= static_cast<int>(nn)) {
        rep.divisors_consistent = false;
        rep.notes.push_back("child index out of range");
        continue;
      }
      const TraceNode& cn = trace.nodes[ci];
      if (cn.chart < 0 || cn.chart >= static_cast<int>(trace.charts.size())) continue;
      const BlowupChart& cc = trace.charts[cn.chart];
      if (cc.parent != node.chart || cc.center != node.center ||
          std::find(node.center.begin(), node.center.end(), cc.pivot) ==
              node.center.end()) {
        rep.divisors_consistent = false;
        rep.notes.push_back("child chart disagrees with the recorded center");
      }
      std::vector<ExceptionalRecord> expected;
      for (const auto& rec : chart.E)
        if (rec.coord != cc.pivot) expected.push_back(rec);
      expected.push_back({cc.pivot, cc.birth_step});
      bool esame = expected.size() == cc.E.size();
      for (size_t j = 0; esame && j < expected.size(); ++j)
        esame = expected[j].coord == cc.E[j].coord && expected[j].birth == cc.E[j].birth;
      if (!esame) {
        rep.divisors_consistent = false;
        rep.notes.push_back("exceptional bookkeeping mismatch");
      }
      try {
        if (!same_ideal_lists(controlled_transform(work[ni], cc, mu), cn.state.gens)) {
          rep.divisibility = false;
          rep.notes.push_back("child state is not the controlled transform");
        }
        strict[ci] = strict_transform(strict[ni], cc);
      } catch (const Error& e) {
        rep.divisibility = false;
        rep.notes.push_back(std::string("transform replay failed: ") + e.what());
        strict[ci] = strict[ni];
      }
    }
  }

  // invariant monotonicity along branches
  for (size_t ni = 1; ni < nn; ++ni) {
    const TraceNode& node = trace.nodes[ni];
    if (node.parent < 0 || node.parent >= static_cast<int>(nn)) continue;
    const TraceNode& par = trace.nodes[node.parent];
    if (par.monomial_step && node.ord_origin >= par.ord_origin) {
      rep.ord_monotone = false;
      rep.notes.push_back("order failed to drop across a monomial step");
    }
    if (!par.monomial_step && node.stage >= 0 && node.stage == par.stage &&
        node.ord_origin > par.ord_origin) {
      rep.ord_monotone = false;
      rep.notes.push_back("order climbed inside a companion stage");
    }
  }
  // companion orders strictly decrease from one stage opening to the next
  for (size_t ni = 0; ni < nn; ++ni) {
    if (!trace.nodes[ni].children.empty()) continue;
    std::vector<int> path;
    for (int at = static_cast<int>(ni); at >= 0; at = trace.nodes[at].parent)
      path.push_back(at);
    std::reverse(path.begin(), path.end());
    long last = -1;
    for (int at : path) {
      long v = trace.nodes[at].ord_n;
      if (v < 0) continue;
      if (last >= 0 && v >= last) {
        rep.ord_monotone = false;
        rep.notes.push_back("companion order failed to drop between stages");
      }
      last = v;
    }
  }

  if (hilbert_probes) {
    const long s_max = 6;
    try {
      std::vector<Q> origin(static_cast<size_t>(n), Q(0));
      std::vector<Z> h_root = hs_values(gens, origin, s_max);
      for (size_t ni = 0; ni < nn; ++ni) {
        if (!strict[ni].empty() && all_exact(strict[ni])) {
          std::vector<Z> h = hs_values(strict[ni], origin, s_max);
          if (!h.empty() && !hs_leq(h, h_root)) {
            rep.hs_bounded = false;
            rep.notes.push_back("strict transform exceeds the root Hilbert-Samuel values");
          }
        } else if (!all_exact(strict[ni])) {
          rep.notes.push_back("skipping a Hilbert-Samuel probe on an inexact transform");
        }
        const TraceNode& node = trace.nodes[ni];
        if (!node.center.empty() && static_cast<int>(node.center.size()) < n &&
            all_exact(work[ni])) {
          std::vector<std::vector<Z>> samples;
          for (long t = 0; t < 3; ++t) {
            std::vector<Q> q(static_cast<size_t>(n), Q(t));
            for (int c : node.center) q[static_cast<size_t>(c)] = Q(0);
            samples.push_back(hs_values(work[ni], q, s_max));
          }
          if (samples[0] != samples[1] || samples[1] != samples[2]) {
            rep.hs_constant_on_centers = false;
            rep.notes.push_back("Hilbert-Samuel values vary along a center");
          }
        }
      }
    } catch (const Error& e) {
      rep.hs_bounded = false;
      rep.notes.push_back(std::string("Hilbert-Samuel probe failed: ") + e.what());
    }
  }
  return rep;
}

}  // namespace escalier
