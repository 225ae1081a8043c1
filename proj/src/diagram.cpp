#include "escalier/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace escalier {

Diagram Diagram::from_exponents(int n, std::vector<Exponent> exps) {
  for (const auto& e : exps)
    if (e.dim() != n) throw Error("DimensionMismatch", "exponent dimension != diagram dimension");
  std::vector<Exponent> verts;
  for (const auto& e : exps) {
    bool dominated = false;
    for (const auto& f : exps)
      if (!(f == e) && e.dominates(f)) dominated = true;
    if (!dominated) verts.push_back(e);
  }
  std::sort(verts.begin(), verts.end(), revlex_less);
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  Diagram d;
  d.n_ = n;
  d.verts_ = std::move(verts);
  return d;
}

bool Diagram::contains(const Exponent& a) const { return locate(a) >= 0; }

int Diagram::locate(const Exponent& a) const {
  if (a.dim() != n_) throw Error("DimensionMismatch", "exponent dimension != diagram dimension");
  for (size_t j = 0; j < verts_.size(); ++j)
    if (a.dominates(verts_[j])) return static_cast<int>(j);
  return -1;
}

bool Diagram::is_monotone() const {
  if (verts_.empty()) return false;
  for (const auto& v : verts_)
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        if (v.c[j] == 0) continue;
        Exponent r = v;
        r.c[i] += r.c[j];
        r.c[j] = 0;
        if (!contains(r)) return false;
      }
  return true;
}

bool Diagram::is_finite_type() const {
  if (verts_.empty()) return false;  // A_1 would be all of N
  for (const auto& a : verts_)
    for (int j = 1; j < n_; ++j) {
      if (a.c[j] == 0) continue;
      for (int i = 0; i < j; ++i) {
        bool found = false;
        for (const auto& v : verts_) {
          if (v.c[j] != 0) continue;
          bool ok = true;
          for (int l = 0; l < n_; ++l)
            if (l != i && l != j && v.c[l] > a.c[l]) ok = false;
          if (ok) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
    }
  return true;
}

Diagram Diagram::project(int i) const {
  std::vector<Exponent> p;
  for (const auto& v : verts_) p.push_back(v.prefix(i));
  return from_exponents(i, p);
}

GammaSet gamma_complement(const Diagram& e) {
  int d = e.dim();
  GammaSet out;
  if (e.is_empty()) {
    if (d == 0) {
      out.finite = true;
      out.elems.push_back(Exponent::zero(0));
    }
    return out;  // complement of the empty diagram is all of N^d
  }
  std::vector<long> box(d, -1);
  for (const auto& v : e.vertices()) {
    int g = -1;
    bool pure = true;
    for (int j = 0; j < d; ++j)
      if (v.c[j] != 0) {
        if (g >= 0) pure = false;
        g = j;
      }
    if (!pure) continue;
    if (g < 0) {  // origin vertex: E = N^d, complement empty
      out.finite = true;
      return out;
    }
    box[g] = v.c[g];
  }
  for (int j = 0; j < d; ++j)
    if (box[j] < 0) return out;  // no pure power on axis j: infinite complement
  out.finite = true;
  std::vector<int> cur(d, 0);
  for (;;) {
    Exponent a{std::vector<int>(cur.begin(), cur.end())};
    if (!e.contains(a)) out.elems.push_back(a);
    int k = 0;
    while (k < d) {
      if (++cur[k] < box[k]) break;
      cur[k] = 0;
      ++k;
    }
    if (k == d) break;
  }
  std::sort(out.elems.begin(), out.elems.end(), revlex_less);
  return out;
}

GammaSet staircase_difference(const Diagram& d, const Diagram& dp) {
  GammaSet out;
  std::set<Exponent, RevLexLess> acc;
  for (const auto& w : d.vertices()) {
    std::vector<Exponent> shifted;
    for (const auto& v : dp.vertices()) shifted.push_back(v.minus_clamped(w));
    GammaSet g = gamma_complement(Diagram::from_exponents(d.dim(), shifted));
    if (!g.finite) return out;  // infinite piece
    for (const auto& a : g.elems) acc.insert(a.plus(w));
  }
  out.finite = true;
  out.elems.assign(acc.begin(), acc.end());
  return out;
}

void Diagram::build_decomposition() const {
  if (dec_ || !reject_.empty()) return;
  if (verts_.empty()) {
    reject_ = "EmptyDiagram";
    return;
  }
  Decomposition dec;
  // gamma parts: A_i = (pi_{i-1}(Delta) x N) minus pi_i(Delta), both in N^i
  for (int i = 1; i <= n_; ++i) {
    Diagram lower = project(i - 1);  // nonempty since Delta is
    std::vector<Exponent> padded;
    for (const auto& v : lower.vertices()) padded.push_back(v.padded(i));
    GammaSet ai = staircase_difference(from_exponents(i, padded), project(i));
    if (!ai.finite) {
      reject_ = "NotFiniteType";
      return;
    }
    dec.A.push_back(ai.elems);
  }
  // Bbar per vertex: the slice gamma_i = alpha_i of the relative complement
  for (size_t j = 0; j < verts_.size(); ++j) {
    const Exponent& a = verts_[j];
    int i = std::max(a.group(), 1);
    dec.group.push_back(i);
    Exponent abar = a.prefix(i - 1);
    std::vector<Exponent> earlier;
    for (size_t k = 0; k < j; ++k) {
      if (verts_[k].group() > i)
        throw Error("Internal", "reverse-lex vertex order violates group monotonicity");
      if (verts_[k].c[i - 1] <= a.c[i - 1])
        earlier.push_back(verts_[k].prefix(i - 1).minus_clamped(abar));
    }
    GammaSet g = gamma_complement(from_exponents(i - 1, earlier));
    if (!g.finite) {
      reject_ = "NotFiniteType";
      return;
    }
    std::vector<Exponent> bbar;
    for (const auto& delta : g.elems) {
      Exponent b = delta.plus(abar).padded(n_);
      b.c[i - 1] = a.c[i - 1];
      bbar.push_back(b);
    }
    std::sort(bbar.begin(), bbar.end(), revlex_less);
    dec.Bbar.push_back(bbar);
  }
  // C_i = pi_{n,i}(Delta) minus (Delta intersect N^i), i = 1..n-1
  for (int i = 1; i < n_; ++i) {
    std::vector<Exponent> low;
    for (const auto& v : verts_)
      if (v.group() <= i) low.push_back(v.prefix(i));
    GammaSet ci = staircase_difference(project(i), from_exponents(i, low));
    if (!ci.finite) {
      reject_ = "NotFiniteType";
      return;
    }
    dec.C.push_back(ci.elems);
  }
  long d = 0;
  for (const auto& part : dec.A)
    for (const auto& e : part) d = std::max(d, e.degree());
  for (const auto& part : dec.Bbar)
    for (const auto& e : part) d = std::max(d, e.degree());
  dec.d = d;
  dec_ = std::move(dec);
}

const Diagram::Decomposition& Diagram::decomposition() const {
  build_decomposition();
  if (!dec_) throw Error(reject_, "diagram has no finite decomposition");
  return *dec_;
}

static Z count_upto(long s, int n) {
  // #{alpha in N^n : |alpha| <= s}
  if (s < 0) return Z(0);
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(s + n), static_cast<unsigned long>(n));
  return r;
}

std::vector<Z> Diagram::hs_profile(long s_max) const {
  if (verts_.size() > 20)
    throw Error("LimitExceeded", "hilbert_samuel supports at most 20 vertices");
  std::map<long, long> joins;  // join degree -> signed multiplicity
  size_t k = verts_.size();
  for (size_t mask = 1; mask < (size_t{1} << k); ++mask) {
    Exponent join = Exponent::zero(n_);
    int bits = 0;
    for (size_t t = 0; t < k; ++t)
      if (mask & (size_t{1} << t)) {
        join = join.join(verts_[t]);
        ++bits;
      }
    joins[join.degree()] += bits % 2 == 1 ? 1 : -1;
  }
  std::vector<Z> out;
  for (long s = 0; s <= s_max; ++s) {
    Z inside(0);
    for (const auto& [deg, mult] : joins) inside += Z(mult) * count_upto(s - deg, n_);
    out.push_back(count_upto(s, n_) - inside);
  }
  return out;
}

Z Diagram::hilbert_samuel(long s) const { return hs_profile(s).back(); }

int Diagram::hs_compare(const Diagram& a, const Diagram& b, long* s_star) {
  if (a.dim() != b.dim()) throw Error("DimensionMismatch", "hs_compare needs equal dimensions");
  int n = a.dim();
  long bound = 0;
  for (const Diagram* d : {&a, &b}) {
    for (const auto& v : d->vertices()) bound = std::max(bound, v.degree());
    if (!d->is_empty() && d->is_finite_type())
      bound = std::max(bound, d->d_of());
    else if (!d->is_empty()) {
      // fallback: the coordinatewise max of all vertices bounds the
      // Taylor-complex regularity, after which H is polynomial
      Exponent all = Exponent::zero(n);
      for (const auto& v : d->vertices()) all = all.join(v);
      bound = std::max(bound, all.degree());
    }
  }
  long s_lim = bound + n + 1;
  if (s_star) *s_star = s_lim;
  auto ha = a.hs_profile(s_lim), hb = b.hs_profile(s_lim);
  for (long s = 0; s <= s_lim; ++s) {
    if (ha[s] != hb[s]) return ha[s] < hb[s] ? -1 : 1;
  }
  return 0;
}

int Diagram::partition_multiplicity(const Exponent& a) const {
  const Decomposition& dec = decomposition();
  int hits = 0;
  for (int i = 1; i <= n_; ++i) {
    Exponent pre = a.prefix(i);
    for (const auto& el : dec.A[i - 1])
      if (el == pre) ++hits;
  }
  for (size_t j = 0; j < verts_.size(); ++j) {
    int i = dec.group[j];
    for (const auto& b : dec.Bbar[j]) {
      // cell: coords < i pinned, coord i >= beta_i, coords > i free
      bool in = a.c[i - 1] >= b.c[i - 1];
      for (int l = 0; l + 1 < i && in; ++l)
        if (a.c[l] != b.c[l]) in = false;
      if (in) ++hits;
    }
  }
  return hits;
}

std::vector<Exponent> Diagram::slice(long s) const {
  std::vector<Exponent> out;
  for (const auto& a : exponents_of_degree(n_, s))
    if (contains(a)) out.push_back(a);
  return out;
}

std::vector<Exponent> Diagram::reduced_slice(long s) const {
  bool has_vertex = false;
  for (const auto& v : verts_)
    if (v.degree() == s) has_vertex = true;
  if (!has_vertex) return {};
  std::vector<Exponent> out;
  for (const auto& a : slice(s)) {
    bool is_vertex = false;
    for (const auto& v : verts_)
      if (v == a) is_vertex = true;
    if (!is_vertex) out.push_back(a);
  }
  return out;
}

}  // namespace escalier
