#include "escalier/division.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace escalier {

namespace {

// Exact sparse Gauss-Jordan; nullopt unless the square system has a unique
// solution.  Rows are sparse maps; near-identity systems stay sparse.
std::optional<std::vector<Q>> sparse_solve(const Field& k, int n,
                                           std::vector<std::map<int, Q>> rows,
                                           std::vector<Q> rhs) {
  for (int col = 0; col < n; ++col) {
    int p = -1;
    for (int i = col; i < n; ++i)
      if (rows[i].count(col)) {
        p = i;
        break;
      }
    if (p < 0) return std::nullopt;
    std::swap(rows[p], rows[col]);
    std::swap(rhs[p], rhs[col]);
    Q inv = k.inv(rows[col][col]);
    for (auto& [j, v] : rows[col]) v = k.mul(v, inv);
    rhs[col] = k.mul(rhs[col], inv);
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      auto it = rows[i].find(col);
      if (it == rows[i].end()) continue;
      Q f = it->second;
      rows[i].erase(it);
      for (const auto& [j, v] : rows[col]) {
        if (j == col) continue;
        Q nv = k.sub(rows[i].count(j) ? rows[i][j] : Q(0), k.mul(f, v));
        if (nv == 0)
          rows[i].erase(j);
        else
          rows[i][j] = nv;
      }
      rhs[i] = k.sub(rhs[i], k.mul(f, rhs[col]));
    }
  }
  return rhs;
}

std::string exp_str(const Exponent& e) {
  std::string s = "(";
  for (int i = 0; i < e.dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(e.c[i]);
  }
  return s + ")";
}

}  // namespace

DivisionProblem DivisionProblem::create(std::vector<TruncatedSeries> fs,
                                        std::vector<Exponent> alphas, const MonomialOrder& T) {
  if (fs.empty()) throw Error("BadArgument", "no divisors");
  if (alphas.size() != fs.size())
    throw Error("BadArgument", "divisor and exponent counts differ");
  DivisionProblem p;
  p.field_ = fs[0].field();
  p.nm_ = fs[0].n_main();
  p.np_ = fs[0].n_param();
  p.trunc_ = fs[0].trunc();
  for (const auto& f : fs) {
    check_same_field(f.field(), p.field_);
    if (f.n_main() != p.nm_ || f.n_param() != p.np_ || f.trunc() != p.trunc_)
      throw Error("DimensionMismatch", "divisors disagree on blocks or truncation");
  }
  if (T.dim() != p.nm_) throw Error("DimensionMismatch", "order acts on the u-block");
  if (!T.is_positive())
    throw Error("OrderNotPositive", "division requires a positive order for termination");
  p.torder_ = T.completed();
  for (size_t i = 0; i < fs.size(); ++i) {
    TruncatedSeries f0 = fs[i].at_params_zero();
    if (f0.is_zero())
      throw Error("InitialExponentMismatch",
                  "divisor " + std::to_string(i + 1) + " vanishes at v = 0");
    auto lead = f0.leading(p.torder_);
    if (alphas[i].dim() != p.nm_)
      throw Error("DimensionMismatch", "alpha dimension is the u-block dimension");
    if (!(lead.exp == alphas[i]))
      throw Error("InitialExponentMismatch",
                  "stated alpha of divisor " + std::to_string(i + 1) +
                      " is not the initial exponent of f(u,0)");
    p.lead_.push_back(lead.coeff);
    p.fs_norm_.push_back(fs[i].scale(p.field_.inv(lead.coeff)));
  }
  p.fs_ = std::move(fs);
  p.alphas_ = std::move(alphas);
  p.delta_ = Diagram::from_exponents(p.nm_, p.alphas_);
  return p;
}

DivisionProblem DivisionProblem::infer(std::vector<TruncatedSeries> fs, const MonomialOrder& T) {
  if (fs.empty()) throw Error("BadArgument", "no divisors");
  MonomialOrder tc = T.completed();
  std::vector<Exponent> alphas;
  for (const auto& f : fs) {
    TruncatedSeries f0 = f.at_params_zero();
    if (f0.is_zero()) throw Error("InitialExponentMismatch", "divisor vanishes at v = 0");
    alphas.push_back(f0.leading(tc).exp);
  }
  return create(std::move(fs), std::move(alphas), T);
}

int DivisionProblem::subdivide(const Exponent& beta_u) const {
  if (beta_u.dim() != nm_) throw Error("DimensionMismatch", "subdivision exponent dimension");
  for (size_t i = 0; i < alphas_.size(); ++i)
    if (beta_u.dominates(alphas_[i])) return int(i);
  return -1;
}

bool DivisionProblem::in_gamma_i(int i, const Exponent& gamma_u) const {
  return subdivide(gamma_u.plus(alphas_[i])) == i;
}

DivisionResult DivisionProblem::divide(const TruncatedSeries& g, DivisionSchedule sched) const {
  check_same_field(g.field(), field_);
  if (g.n_main() != nm_ || g.n_param() != np_ || g.trunc() != trunc_)
    throw Error("DimensionMismatch", "dividend disagrees with the problem");
  if (sched == DivisionSchedule::kAuto)
    sched = np_ == 0 ? DivisionSchedule::kMonomial : DivisionSchedule::kGraded;
  if (sched == DivisionSchedule::kMonomial && np_ != 0)
    throw Error("BadArgument", "monomial schedule requires an empty parameter block");
  DivisionResult res =
      sched == DivisionSchedule::kMonomial ? divide_monomial(g) : divide_graded(g);
  // report quotients against the original (unnormalized) divisors
  for (int i = 0; i < k(); ++i) res.h[i] = res.h[i].scale(field_.inv(lead_[i]));
  check_contracts(g, res);
  return res;
}

DivisionResult DivisionProblem::divide_monomial(const TruncatedSeries& g) const {
  TruncatedSeries w = g;
  std::vector<TruncatedSeries> h(k(), TruncatedSeries::zero(field_, nm_, np_, trunc_));
  TruncatedSeries r = TruncatedSeries::zero(field_, nm_, np_, trunc_);
  std::optional<Exponent> prev;
  while (!w.is_zero()) {
    // T-least monomial of the residual
    const Exponent* beta = nullptr;
    for (const auto& [e, c] : w.coeffs())
      if (!beta || torder_.less(e, *beta)) beta = &e;
    Exponent b = *beta;
    if (prev && !torder_.less(*prev, b))
      throw Error("JacobianSingular", "residual order failed to increase at " + exp_str(b));
    prev = b;
    Q c = w.coeff(b);
    int i = subdivide(b);
    if (i < 0) {
      r.add_term(b, c);
      w.add_term(b, field_.neg(c));
    } else {
      Exponent q = *b.minus(alphas_[i]);
      h[i].add_term(q, c);
      w = w.sub(TruncatedSeries::monomial(field_, c, q, nm_, np_, trunc_).mul(fs_norm_[i]));
    }
  }
  bool exact = g.is_exact() && w.is_exact();
  for (const auto& f : fs_norm_) exact = exact && f.is_exact();
  if (!exact) {
    for (auto& hi : h) hi = hi.mark_inexact();
    r = r.mark_inexact();
  }
  return DivisionResult{std::move(h), std::move(r)};
}

DivisionResult DivisionProblem::divide_graded(const TruncatedSeries& g) const {
  for (int i = 0; i < k(); ++i)
    if (fs_norm_[i].ord() != alphas_[i].degree())
      throw Error("InitialExponentMismatch",
                  "graded division requires ord(f_i) = |alpha_i| (divisor " +
                      std::to_string(i + 1) + ")");
  int nt = nm_ + np_;
  TruncatedSeries w = g;
  std::vector<TruncatedSeries> h(k(), TruncatedSeries::zero(field_, nm_, np_, trunc_));
  TruncatedSeries r = TruncatedSeries::zero(field_, nm_, np_, trunc_);
  // initial-degree parts of the divisors drive the per-degree square system
  std::vector<TruncatedSeries> f_init, f_tail;
  for (int i = 0; i < k(); ++i) {
    f_init.push_back(fs_norm_[i].homogeneous_part(alphas_[i].degree()));
    f_tail.push_back(fs_norm_[i].sub(f_init.back()));
  }
  for (long s = 0; s <= trunc_; ++s) {
    TruncatedSeries ws = w.homogeneous_part(s);
    // unknown h-slots and equation rows, both indexed by degree-s monomials
    // with u-part inside Delta
    std::vector<Exponent> all = exponents_of_degree(nt, s);
    std::map<Exponent, int, RevLexLess> row_of;
    std::vector<std::pair<int, Exponent>> slots;  // (divisor, h-exponent)
    for (const auto& e : all) {
      int i = subdivide(e.prefix(nm_));
      if (i < 0) continue;
      row_of[e] = int(slots.size());
      Exponent he = e;
      for (int t = 0; t < nm_; ++t) he.c[t] -= alphas_[i].c[t];
      slots.emplace_back(i, he);
    }
    int nsys = int(slots.size());
    if (nsys > 0) {
      std::vector<std::map<int, Q>> rows(nsys);
      std::vector<Q> rhs(nsys, Q(0));
      for (int colidx = 0; colidx < nsys; ++colidx) {
        const auto& [i, he] = slots[colidx];
        for (const auto& [te, tc] : f_init[i].coeffs()) {
          Exponent target = he.plus(te);
          auto it = row_of.find(target);
          if (it == row_of.end()) continue;  // lands in a Gamma row; r absorbs it
          Q& cell = rows[it->second][colidx];
          cell = field_.add(cell, tc);
          if (cell == 0) rows[it->second].erase(colidx);
        }
      }
      for (const auto& [e, rowidx] : row_of) rhs[rowidx] = ws.coeff(e);
      auto sol = sparse_solve(field_, nsys, std::move(rows), std::move(rhs));
      if (!sol)
        throw Error("JacobianSingular",
                    "generalized division system singular at degree " + std::to_string(s));
      std::vector<TruncatedSeries> piece(k(), TruncatedSeries::zero(field_, nm_, np_, trunc_));
      for (int colidx = 0; colidx < nsys; ++colidx) {
        if ((*sol)[colidx] == 0) continue;
        const auto& [i, he] = slots[colidx];
        piece[i].add_term(he, (*sol)[colidx]);
      }
      for (int i = 0; i < k(); ++i) {
        if (piece[i].is_zero()) continue;
        h[i] = h[i].add(piece[i]);
        w = w.sub(piece[i].mul(fs_norm_[i]));
      }
    }
    // whatever remains in degree s has u-part in Gamma: it is the remainder
    TruncatedSeries rest = w.homogeneous_part(s);
    for (const auto& [e, c] : rest.coeffs()) {
      if (subdivide(e.prefix(nm_)) >= 0)
        throw Error("Internal", "graded division left a Delta term unmatched");
      r.add_term(e, c);
    }
    w = w.sub(rest);
  }
  bool exact = g.is_exact() && w.is_exact();
  for (const auto& f : fs_norm_) exact = exact && f.is_exact();
  if (!exact) {
    for (auto& hi : h) hi = hi.mark_inexact();
    r = r.mark_inexact();
  }
  return DivisionResult{std::move(h), std::move(r)};
}

void DivisionProblem::check_contracts(const TruncatedSeries& g, const DivisionResult& res) const {
  // identity g = sum h_i f_i + r mod m^{D+1}
  TruncatedSeries acc = res.r;
  for (int i = 0; i < k(); ++i) acc = acc.add(res.h[i].mul(fs_[i]));
  if (!acc.equals(g)) throw Error("Internal", "division identity failed");
  // supd constraints on the truncated representatives
  for (int i = 0; i < k(); ++i)
    for (const auto& a : res.h[i].supd())
      if (!in_gamma_i(i, a.prefix(nm_)))
        throw Error("Internal", "quotient support escapes Gamma_i");
  for (const auto& a : res.r.supd())
    if (subdivide(a.prefix(nm_)) >= 0)
      throw Error("Internal", "remainder support escapes Gamma");
}

std::vector<TruncatedSeries> DivisionProblem::prepare() const {
  // process divisors by ascending degree, reverse-lex within a degree, so
  // lower multiplicities are prepared before they are used by higher ones
  std::vector<int> order(k());
  for (int i = 0; i < k(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (alphas_[a].degree() != alphas_[b].degree())
      return alphas_[a].degree() < alphas_[b].degree();
    return revlex_less(alphas_[a], alphas_[b]);
  });
  DivisionProblem work = *this;
  std::vector<TruncatedSeries> fbar(k(), TruncatedSeries::zero(field_, nm_, np_, trunc_));
  for (int idx : order) {
    Exponent full = alphas_[idx].padded(nm_ + np_);
    TruncatedSeries mono = TruncatedSeries::monomial(field_, Q(1), full, nm_, np_, trunc_);
    DivisionResult dr = work.divide(mono);
    Q unit = dr.h[idx].coeff(Exponent::zero(nm_ + np_));
    if (unit == 0)
      throw Error("UnitQuotientCheckFailed",
                  "quotient of divisor " + std::to_string(idx + 1) + " is not a unit at 0");
    fbar[idx] = mono.sub(dr.r);
    work.fs_[idx] = fbar[idx];
    work.fs_norm_[idx] = fbar[idx];  // leading coefficient is already 1
    work.lead_[idx] = Q(1);
  }
  // certificate: the original divisors reduce to zero against the new set
  for (int i = 0; i < k(); ++i) {
    DivisionResult dr = work.divide(fs_[i]);
    if (!dr.r.is_zero())
      throw Error("Internal", "prepared set fails to regenerate the original ideal");
  }
  return fbar;
}

DivisionProblem DivisionProblem::prepared() const {
  std::vector<TruncatedSeries> fbar = prepare();
  return create(std::move(fbar), alphas_, torder_);
}

}  // namespace escalier
