#include "escalier/jacobians.hpp"

#include <algorithm>
#include <numeric>

namespace escalier {

namespace {

std::vector<Exponent> sorted_revlex(std::vector<Exponent> v) {
  std::sort(v.begin(), v.end(), revlex_less);
  return v;
}

}  // namespace

JacobianProblem::JacobianProblem(std::vector<TruncatedSeries> fs, std::vector<Exponent> alphas,
                                 std::vector<Q> point)
    : delta_(Diagram::empty(1)) {
  if (fs.empty() || fs.size() != alphas.size())
    throw Error("BadInput", "need one exponent per function");
  field_ = fs[0].field();
  int nm = fs[0].n_main();
  for (const auto& f : fs) {
    check_same_field(field_, f.field());
    if (f.n_main() != nm || f.n_param() != fs[0].n_param())
      throw Error("DimensionMismatch", "functions live in different rings");
  }
  // exponents may live in a leading coordinate block N^s, s <= n_main
  int sdim = alphas[0].dim();
  if (sdim < 1 || sdim > nm) throw Error("DimensionMismatch", "exponent dimension");
  for (const auto& a : alphas)
    if (a.dim() != sdim) throw Error("DimensionMismatch", "exponent dimension");
  if (!point.empty() && int(point.size()) != fs[0].n_total())
    throw Error("DimensionMismatch", "evaluation point length");

  // pair up, then keep reverse-lex vertex order throughout
  std::vector<int> idx(fs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return revlex_less(alphas[a], alphas[b]); });
  for (int i : idx) {
    fs_.push_back(fs[i]);
    alphas_.push_back(alphas[i]);
  }
  for (size_t i = 0; i + 1 < alphas_.size(); ++i)
    if (alphas_[i] == alphas_[i + 1]) throw Error("BadInput", "repeated exponent");

  delta_ = Diagram::from_exponents(sdim, alphas_);
  if (delta_.vertices() != alphas_)
    throw Error("BadInput", "assigned exponents must be incomparable");
  if (!delta_.is_finite_type()) throw Error("NotFiniteType", "diagram of the exponents");

  for (int i = 0; i < k(); ++i) {
    auto f0 = fs_[i].at_params_zero();
    if (f0.is_zero() || f0.ord() != alphas_[i].degree())
      throw Error("InitialExponentMismatch",
                  "ord of f(u,0) must equal the degree of its exponent");
  }
  point_ = std::move(point);
}

int JacobianProblem::assign(const Exponent& beta) const {
  for (int i = 0; i < k(); ++i)
    if (beta.dominates(alphas_[i])) return i;
  throw Error("Internal", "assign called outside the diagram");
}

Q JacobianProblem::entry(const Exponent& alpha, const Exponent& beta) const {
  int i = assign(beta);
  const Exponent gamma = *beta.minus(alphas_[i]);
  std::vector<Q> pt = point_;
  if (pt.empty()) pt.assign(fs_[i].n_total(), Q(0));

  // direct route: D_{u^{alpha - beta + alpha_i}}(f_i)
  Q direct(0);
  auto delta = alpha.minus(gamma);
  if (delta) {
    auto d = fs_[i].hasse(delta->padded(fs_[i].n_total()));
    direct = d.is_exact() ? d.eval(pt) : d.eval_unchecked(pt);
  }

  // product route: D_{u^alpha}(u^gamma f_i); only meaningful when the shifted
  // series keeps every relevant coefficient
  auto shifted = fs_[i].mul(TruncatedSeries::monomial(field_, Q(1),
                                                      gamma.padded(fs_[i].n_total()),
                                                      fs_[i].n_main(), fs_[i].n_param(),
                                                      fs_[i].trunc()));
  if (shifted.is_exact()) {
    Q via_product = shifted.hasse(alpha.padded(fs_[i].n_total())).eval(pt);
    if (via_product != direct) throw Error("Internal", "Hasse entry routes disagree");
  }
  return direct;
}

QMatrix JacobianProblem::jacobian_matrix(long s, JacobianVariant variant) const {
  auto cells = sorted_revlex(variant == JacobianVariant::kFull ? delta_.slice(s)
                                                               : delta_.reduced_slice(s));
  int m = int(cells.size());
  QMatrix M(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) M.at(r, c) = entry(cells[r], cells[c]);
  return M;
}

Q JacobianProblem::jacobian_det(long s, JacobianVariant variant) const {
  return jacobian_matrix(s, variant).det(field_);
}

JacobianVerdict JacobianProblem::check_conditions() const {
  long smin = alphas_[0].degree();
  for (const auto& a : alphas_) smin = std::min(smin, a.degree());
  long smax = d() + 1;
  JacobianVerdict v;
  for (long s = smin; s <= smax; ++s) {
    for (auto variant : {JacobianVariant::kFull, JacobianVariant::kReduced}) {
      Q det = jacobian_det(s, variant);
      bool inv = det != 0;
      auto& rows = variant == JacobianVariant::kFull ? v.full : v.reduced;
      auto& fail =
          variant == JacobianVariant::kFull ? v.first_failure_full : v.first_failure_reduced;
      rows.push_back({s, det, inv});
      if (!inv && !fail) fail = s;
    }
  }
  return v;
}

namespace {

// degree of a nonzero homogeneous polynomial, or -1 if not homogeneous
long homogeneous_degree(const TruncatedSeries& f) {
  if (f.is_zero()) return -1;
  long d = -1;
  for (const auto& [e, c] : f.coeffs()) {
    if (d < 0) d = e.degree();
    if (e.degree() != d) return -1;
  }
  return d;
}

struct MacaulayFrame {
  std::vector<Exponent> cells;       // all degree-d monomials, revlex
  std::vector<int> owner;            // i(beta) per cell
  std::vector<bool> nonreduced;      // divisible by >= 2 of the x_i^{d_i}
};

MacaulayFrame macaulay_frame(int k, const std::vector<long>& degs, long s) {
  MacaulayFrame fr;
  fr.cells = exponents_of_degree(k, s);
  std::sort(fr.cells.begin(), fr.cells.end(), revlex_less);
  for (const auto& b : fr.cells) {
    int owner = -1, hits = 0;
    for (int i = 0; i < k; ++i)
      if (b.c[i] >= degs[i]) {
        ++hits;
        if (owner < 0) owner = i;
      }
    if (owner < 0) throw Error("Internal", "degree-s monomial escapes every corner cone");
    fr.owner.push_back(owner);
    fr.nonreduced.push_back(hits >= 2);
  }
  return fr;
}

Exponent corner(int k, int i, long deg) {
  std::vector<int> c(k, 0);
  c[i] = int(deg);
  return Exponent{c};
}

}  // namespace

Q macaulay_resultant(const std::vector<TruncatedSeries>& forms, std::uint64_t seed) {
  if (forms.empty()) throw Error("BadInput", "no forms given");
  const Field& field = forms[0].field();
  int k = forms[0].n_main();
  if (int(forms.size()) != k)
    throw Error("BadInput", "need exactly as many forms as variables");
  std::vector<long> degs;
  for (const auto& f : forms) {
    check_same_field(field, f.field());
    if (f.n_main() != k || f.n_param() != 0)
      throw Error("DimensionMismatch", "forms live in different rings");
    long d = homogeneous_degree(f);
    if (d <= 0) throw Error("BadInput", "forms must be homogeneous of positive degree");
    degs.push_back(d);
  }
  long d = std::accumulate(degs.begin(), degs.end(), 0L) - k + 1;

  auto fr = macaulay_frame(k, degs, d);
  int m = int(fr.cells.size());
  std::map<Exponent, int, RevLexLess> row_of;
  for (int r = 0; r < m; ++r) row_of[fr.cells[r]] = r;

  // regularity first: the products x^gamma F_i must span the whole degree-d
  // gradation, otherwise the resultant is an exact zero
  {
    std::vector<std::vector<Q>> cols;
    for (int i = 0; i < k; ++i)
      for (const auto& g : exponents_of_degree(k, d - degs[i])) {
        std::vector<Q> col(m, Q(0));
        for (const auto& [e, c] : forms[i].coeffs()) {
          auto it = row_of.find(e.plus(g));
          if (it == row_of.end()) throw Error("Internal", "homogeneous product left degree d");
          col[it->second] = c;
        }
        cols.push_back(std::move(col));
      }
    QMatrix span(m, int(cols.size()));
    for (int c = 0; c < int(cols.size()); ++c)
      for (int r = 0; r < m; ++r) span.at(r, c) = cols[c][r];
    if (span.rank(field) < m) return Q(0);
  }

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<TruncatedSeries> g = forms;
    if (attempt > 0) {
      // unimodular shear product: determinant 1, so the resultant is unchanged
      QMatrix A = QMatrix::identity(k);
      for (int t = 0; t < 2 * k + 2; ++t) {
        int i = int(rng.below(uint64_t(k)));
        int j = int(rng.below(uint64_t(k)));
        if (i == j) continue;
        long c = rng.range(-3, 3);
        if (c == 0) c = 1;
        for (int col = 0; col < k; ++col)
          A.at(i, col) = field.add(A.at(i, col), field.mul(field.from_long(c), A.at(j, col)));
      }
      for (auto& f : g) f = f.substitute_linear(A);
    }
    QMatrix M(m, m);
    for (int c = 0; c < m; ++c) {
      int i = fr.owner[c];
      Exponent shift = *fr.cells[c].minus(corner(k, i, degs[i]));
      for (const auto& [e, coef] : g[i].coeffs()) M.at(row_of.at(e.plus(shift)), c) = coef;
    }
    std::vector<int> sub;
    for (int c = 0; c < m; ++c)
      if (fr.nonreduced[c]) sub.push_back(c);
    QMatrix E(int(sub.size()), int(sub.size()));
    for (int r = 0; r < int(sub.size()); ++r)
      for (int c = 0; c < int(sub.size()); ++c) E.at(r, c) = M.at(sub[r], sub[c]);
    Q de = E.det(field);
    if (de != 0) return field.div(M.det(field), de);
  }
  throw Error("DegenerateAfterRetries", "extraneous minor vanished for every seeded change");
}

Q jr_operator(const std::vector<TruncatedSeries>& fs, const std::vector<Q>& point,
              const std::vector<long>& abar, std::uint64_t seed) {
  int s = int(fs.size());
  if (s == 0 || abar.size() != fs.size())
    throw Error("BadInput", "need one target degree per function");
  const Field& field = fs[0].field();
  long amax = 1;
  for (long a : abar) {
    if (a < 1) throw Error("BadInput", "target degrees must be positive");
    amax = std::max(amax, a);
  }
  std::vector<TruncatedSeries> forms;
  for (int i = 0; i < s; ++i) {
    check_same_field(field, fs[i].field());
    if (fs[i].n_main() < s)
      throw Error("DimensionMismatch", "functions must involve the first s coordinates");
    std::vector<Q> pt = point;
    if (pt.empty()) pt.assign(fs[i].n_total(), Q(0));
    TruncatedSeries form = TruncatedSeries::zero(field, s, 0, amax);
    for (const auto& a : exponents_of_degree(s, abar[i])) {
      auto h = fs[i].hasse(a.padded(fs[i].n_total()));
      Q c = h.is_exact() ? h.eval(pt) : h.eval_unchecked(pt);
      form.add_term(a, c);
    }
    forms.push_back(form);
  }
  return macaulay_resultant(forms, seed);
}

std::vector<TruncatedSeries> essential_space(const TruncatedSeries& form) {
  const Field& field = form.field();
  if (field.tag() != "q")
    throw Error("BadInput", "essential spaces are computed in characteristic zero");
  long d = homogeneous_degree(form);
  if (d <= 0) throw Error("BadInput", "form must be homogeneous of positive degree");
  int n = form.n_total();
  auto ders = exponents_of_degree(n, d - 1);
  QMatrix M(int(ders.size()), n);
  for (int r = 0; r < int(ders.size()); ++r) {
    auto h = form.hasse(ders[r]);
    for (int j = 0; j < n; ++j) M.at(r, j) = h.coeff(Exponent::unit(n, j));
  }
  auto pivots = M.rref(field);
  std::vector<TruncatedSeries> basis;
  for (int r = 0; r < int(pivots.size()); ++r) {
    TruncatedSeries l = TruncatedSeries::zero(field, form.n_main(), form.n_param(), form.trunc());
    for (int j = 0; j < n; ++j)
      if (M.at(r, j) != 0) l.add_term(Exponent::unit(n, j), M.at(r, j));
    basis.push_back(l);
  }
  return basis;
}

}  // namespace escalier
