#include "escalier/series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace escalier {

TruncatedSeries TruncatedSeries::zero(const Field& k, int nm, int np, long trunc) {
  if (nm < 0 || np < 0 || trunc < 0) throw Error("BadArgument", "negative dimension or truncation");
  return TruncatedSeries(k, nm, np, trunc);
}

TruncatedSeries TruncatedSeries::constant(const Field& k, const Q& c, int nm, int np,
                                          long trunc) {
  TruncatedSeries f = zero(k, nm, np, trunc);
  f.add_term(Exponent::zero(nm + np), c);
  return f;
}

TruncatedSeries TruncatedSeries::monomial(const Field& k, const Q& c, const Exponent& e, int nm,
                                          int np, long trunc) {
  if (e.dim() != nm + np) throw Error("DimensionMismatch", "monomial exponent dimension");
  TruncatedSeries f = zero(k, nm, np, trunc);
  f.add_term(e, c);
  return f;
}

TruncatedSeries TruncatedSeries::variable(const Field& k, int i, int nm, int np, long trunc) {
  return monomial(k, Q(1), Exponent::unit(nm + np, i), nm, np, trunc);
}

Q TruncatedSeries::coeff(const Exponent& e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? Q(0) : it->second;
}

void TruncatedSeries::add_term(const Exponent& e, const Q& c) {
  if (e.dim() != n_total()) throw Error("DimensionMismatch", "term exponent dimension");
  for (int v : e.c)
    if (v < 0) throw Error("BadArgument", "negative exponent");
  if (e.degree() > trunc_) {
    Q red = field_.reduce(c);
    if (red != 0) exact_ = false;  // a dropped term loses information
    return;
  }
  Q v = field_.add(coeff(e), c);
  if (v == 0)
    coeffs_.erase(e);
  else
    coeffs_[e] = v;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& o) const {
  check_same_field(field_, o.field_);
  if (n_main_ != o.n_main_ || n_param_ != o.n_param_)
    throw Error("DimensionMismatch", "series variable blocks differ");
  if (trunc_ != o.trunc_)
    throw Error("TruncationMismatch", "series truncation degrees differ");
}

TruncatedSeries TruncatedSeries::add(const TruncatedSeries& o) const {
  check_compatible(o);
  TruncatedSeries r = *this;
  r.exact_ = exact_ && o.exact_;
  for (const auto& [e, c] : o.coeffs_) r.add_term(e, c);
  return r;
}

TruncatedSeries TruncatedSeries::sub(const TruncatedSeries& o) const { return add(o.neg()); }

TruncatedSeries TruncatedSeries::neg() const {
  TruncatedSeries r = *this;
  for (auto& [e, c] : r.coeffs_) c = field_.neg(c);
  return r;
}

TruncatedSeries TruncatedSeries::scale(const Q& c) const {
  TruncatedSeries r = zero(field_, n_main_, n_param_, trunc_);
  r.exact_ = exact_;
  Q cr = field_.reduce(c);
  if (cr == 0) return r;
  for (const auto& [e, v] : coeffs_) r.coeffs_[e] = field_.mul(v, cr);
  return r;
}

TruncatedSeries TruncatedSeries::mul(const TruncatedSeries& o) const {
  check_compatible(o);
  TruncatedSeries r = zero(field_, n_main_, n_param_, trunc_);
  r.exact_ = exact_ && o.exact_;
  for (const auto& [e1, c1] : coeffs_)
    for (const auto& [e2, c2] : o.coeffs_) {
      if (e1.degree() + e2.degree() > trunc_) {
        r.exact_ = false;  // conservative: the pair may contribute above D
        continue;
      }
      r.add_term(e1.plus(e2), field_.mul(c1, c2));
    }
  return r;
}

TruncatedSeries TruncatedSeries::div_unit(const TruncatedSeries& o) const {
  check_compatible(o);
  Q c0 = o.coeff(Exponent::zero(n_total()));
  if (c0 == 0) throw Error("NotAUnit", "division by a series with zero constant term");
  // o = c0 (1 - t) with ord(t) >= 1; o^{-1} = c0^{-1} (1 + t + t^2 + ...)
  TruncatedSeries t =
      constant(field_, Q(1), n_main_, n_param_, trunc_).sub(o.scale(field_.inv(c0)));
  TruncatedSeries inv = constant(field_, Q(1), n_main_, n_param_, trunc_);
  TruncatedSeries pw = t;
  for (long s = 1; s <= trunc_ && !pw.is_zero(); ++s) {
    inv = inv.add(pw);
    pw = pw.mul(t);
  }
  inv = inv.scale(field_.inv(c0));
  TruncatedSeries q = mul(inv);
  // the geometric expansion is generically infinite; certify exactness only
  // when multiplying back reproduces this series without truncation loss
  q.exact_ = true;
  TruncatedSeries back = q.mul(o);
  q.exact_ = exact_ && o.exact_ && back.exact_ && back.coeffs_ == coeffs_;
  return q;
}

bool TruncatedSeries::equals(const TruncatedSeries& o) const {
  check_compatible(o);
  return coeffs_ == o.coeffs_;
}

TruncatedSeries TruncatedSeries::retruncate(long d) const {
  if (d < 0) throw Error("BadArgument", "negative truncation");
  if (d > trunc_ && !exact_)
    throw Error("TruncationTooSmall", "cannot raise truncation of an inexact series");
  TruncatedSeries r = zero(field_, n_main_, n_param_, d);
  r.exact_ = exact_;
  for (const auto& [e, c] : coeffs_) r.add_term(e, c);
  return r;
}

TruncatedSeries TruncatedSeries::mark_inexact() const {
  TruncatedSeries r = *this;
  r.exact_ = false;
  return r;
}

TruncatedSeries TruncatedSeries::homogeneous_part(long s) const {
  TruncatedSeries r = zero(field_, n_main_, n_param_, trunc_);
  // degree-s coefficients are fully known whenever s <= D
  r.exact_ = exact_ || s <= trunc_;
  for (const auto& [e, c] : coeffs_)
    if (e.degree() == s) r.coeffs_[e] = c;
  return r;
}

long TruncatedSeries::ord() const {
  if (coeffs_.empty()) throw Error("ZeroSeries", "order of the zero series");
  long m = -1;
  for (const auto& [e, c] : coeffs_) {
    long d = e.degree();
    if (m < 0 || d < m) m = d;
  }
  return m;
}

long TruncatedSeries::max_degree() const {
  long m = 0;
  for (const auto& [e, c] : coeffs_) m = std::max(m, e.degree());
  return m;
}

std::vector<Exponent> TruncatedSeries::supp() const {
  std::vector<Exponent> out;
  for (const auto& [e, c] : coeffs_) out.push_back(e);
  return out;
}

std::vector<Exponent> TruncatedSeries::supd() const {
  std::map<Exponent, bool, RevLexLess> hit;
  int n = n_total();
  for (const auto& [b, c] : coeffs_) {
    // all a <= b with prod C(b_i, a_i) nonzero in the field
    std::vector<int> a(n, 0);
    for (;;) {
      Q binp(1);
      for (int i = 0; i < n && binp != 0; ++i)
        binp = field_.mul(binp, field_.binomial(b.c[i], a[i]));
      if (binp != 0) hit[Exponent{std::vector<int>(a)}] = true;
      int i = 0;
      while (i < n && ++a[i] > b.c[i]) a[i++] = 0;
      if (i == n) break;
    }
  }
  // a is in supd iff the derivative series sum_b C(b,a) c_b u^{b-a} != 0
  std::vector<Exponent> out;
  for (const auto& [a, _] : hit)
    if (!hasse(a).is_zero()) out.push_back(a);
  return out;
}

TruncatedSeries::Leading TruncatedSeries::leading(const MonomialOrder& T) const {
  if (coeffs_.empty()) throw Error("ZeroSeries", "leading term of the zero series");
  if (T.dim() != n_total()) throw Error("DimensionMismatch", "order dimension");
  if (!T.is_total()) throw Error("OrderNotTotal", "leading term needs a total order");
  const Exponent* best = nullptr;
  for (const auto& [e, c] : coeffs_)
    if (!best || T.less(e, *best)) best = &e;
  return Leading{*best, T.value(*best), coeffs_.at(*best)};
}

TruncatedSeries TruncatedSeries::hasse(const Exponent& a) const {
  if (a.dim() != n_total()) throw Error("DimensionMismatch", "derivative exponent dimension");
  TruncatedSeries r = zero(field_, n_main_, n_param_, trunc_);
  r.exact_ = exact_;
  for (const auto& [b, c] : coeffs_) {
    auto diff = b.minus(a);
    if (!diff) continue;
    Q f(1);
    for (int i = 0; i < n_total() && f != 0; ++i)
      f = field_.mul(f, field_.binomial(b.c[i], a.c[i]));
    if (f != 0) r.add_term(*diff, field_.mul(f, c));
  }
  return r;
}

TruncatedSeries TruncatedSeries::translate(const std::vector<Q>& q) const {
  if (int(q.size()) != n_total()) throw Error("DimensionMismatch", "translation point dimension");
  bool nonzero = false;
  for (const auto& v : q)
    if (field_.reduce(v) != 0) nonzero = true;
  if (!nonzero) return *this;
  if (!exact_)
    throw Error("TruncationTooSmall",
                "recentering an inexact series would need terms above the truncation degree");
  // f(u+q) = sum_a D_{u^a} f(q) u^a  (Hasse-Taylor over any field)
  TruncatedSeries r = zero(field_, n_main_, n_param_, trunc_);
  for (const auto& a : exponents_up_to_degree(n_total(), max_degree())) {
    Q v = hasse(a).eval_unchecked(q);
    if (v != 0) r.add_term(a, v);
  }
  return r;
}

TruncatedSeries TruncatedSeries::initial_form_at(const std::vector<Q>& q) const {
  TruncatedSeries t = translate(q);
  if (t.is_zero()) return t;
  return t.homogeneous_part(t.ord());
}

TruncatedSeries TruncatedSeries::substitute_linear(const QMatrix& m) const {
  int n = n_total();
  if (m.rows() != n || m.cols() != n) throw Error("DimensionMismatch", "substitution matrix shape");
  QMatrix red(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) red.at(i, j) = field_.reduce(m.at(i, j));
  if (red.rank(field_) != n) throw Error("SingularMatrix", "substitution matrix not invertible");
  // images L_i = sum_j m[i][j] x_j as degree-1 series
  std::vector<TruncatedSeries> img;
  for (int i = 0; i < n; ++i) {
    TruncatedSeries li = zero(field_, n_main_, n_param_, trunc_);
    for (int j = 0; j < n; ++j)
      if (red.at(i, j) != 0) li.add_term(Exponent::unit(n, j), red.at(i, j));
    img.push_back(li);
  }
  TruncatedSeries r = zero(field_, n_main_, n_param_, trunc_);
  r.exact_ = exact_;
  for (const auto& [e, c] : coeffs_) {
    TruncatedSeries term = constant(field_, c, n_main_, n_param_, trunc_);
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < e.c[i]; ++t) term = term.mul(img[i]);
    for (const auto& [te, tc] : term.coeffs_) r.add_term(te, tc);
  }
  return r;
}

Q TruncatedSeries::eval(const std::vector<Q>& q) const {
  bool nonzero = false;
  for (const auto& v : q)
    if (field_.reduce(v) != 0) nonzero = true;
  if (nonzero && !exact_)
    throw Error("TruncationTooSmall", "evaluating an inexact series away from the origin");
  return eval_unchecked(q);
}

Q TruncatedSeries::eval_unchecked(const std::vector<Q>& q) const {
  if (int(q.size()) != n_total()) throw Error("DimensionMismatch", "evaluation point dimension");
  Q total(0);
  for (const auto& [e, c] : coeffs_) {
    Q term = c;
    for (int i = 0; i < n_total() && term != 0; ++i)
      for (int t = 0; t < e.c[i]; ++t) term = field_.mul(term, field_.reduce(q[i]));
    total = field_.add(total, term);
  }
  return total;
}

TruncatedSeries TruncatedSeries::at_params_zero() const {
  TruncatedSeries r = zero(field_, n_main_, 0, trunc_);
  r.exact_ = exact_;
  for (const auto& [e, c] : coeffs_) {
    bool pure = true;
    for (int i = n_main_; i < n_total(); ++i)
      if (e.c[i] != 0) pure = false;
    if (pure) r.coeffs_[e.prefix(n_main_)] = c;
  }
  return r;
}

TruncatedSeries TruncatedSeries::with_params(int np) const {
  if (np < n_param_) throw Error("BadArgument", "cannot drop parameters");
  TruncatedSeries r = zero(field_, n_main_, np, trunc_);
  r.exact_ = exact_;
  for (const auto& [e, c] : coeffs_) r.coeffs_[e.padded(n_main_ + np)] = c;
  return r;
}

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;
  int line = 1, col = 1;

  void advance() {
    if (i < s.size() && s[i] == '\n') {
      ++line;
      col = 0;
    }
    ++i;
    ++col;
  }
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) advance();
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("ParseError",
                "line " + std::to_string(line) + " col " + std::to_string(col) + ": " + msg);
  }
  long integer() {
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected integer");
    long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      if (v > 1000000000L) fail("integer literal too large");
      advance();
    }
    return v;
  }
};

}  // namespace

TruncatedSeries TruncatedSeries::parse(const Field& k, int nm, int np, long trunc,
                                       const std::string& text) {
  TruncatedSeries out = zero(k, nm, np, trunc);
  Lexer lx{text};
  if (lx.eof()) lx.fail("empty polynomial");
  bool first = true;
  while (!lx.eof()) {
    int sign = 1;
    char c = lx.peek();
    if (c == '+' || c == '-') {
      sign = c == '-' ? -1 : 1;
      lx.advance();
    } else if (!first) {
      lx.fail("expected '+' or '-' between terms");
    }
    first = false;
    // coefficient (optional)
    Q coef(1);
    bool saw_coef = false;
    if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
      long num = lx.integer();
      long den = 1;
      if (lx.peek() == '/') {
        lx.advance();
        den = lx.integer();
        if (den == 0) lx.fail("zero denominator");
      }
      coef = Q(num, den);
      coef.canonicalize();
      saw_coef = true;
    }
    // factors
    std::vector<int> e(nm + np, 0);
    bool saw_var = false;
    for (;;) {
      char p = lx.peek();
      if (p == '*') {
        lx.advance();
        p = lx.peek();
      }
      if (p != 'x' && p != 'u' && p != 'v') break;
      lx.advance();
      long idx = lx.integer();
      int slot;
      if (p == 'x') {
        if (idx < 1 || idx > nm + np) lx.fail("variable index out of range");
        slot = int(idx - 1);
      } else if (p == 'u') {
        if (idx < 1 || idx > nm) lx.fail("u-variable index out of range");
        slot = int(idx - 1);
      } else {
        if (idx < 1 || idx > np) lx.fail("v-variable index out of range");
        slot = nm + int(idx - 1);
      }
      long pw = 1;
      if (lx.peek() == '^') {
        lx.advance();
        pw = lx.integer();
      }
      if (pw > 1000) lx.fail("exponent too large");
      e[slot] += int(pw);
      saw_var = true;
    }
    if (!saw_coef && !saw_var) lx.fail("expected a term");
    out.add_term(Exponent{e}, sign < 0 ? Q(-coef) : coef);
  }
  return out;
}

std::string TruncatedSeries::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : coeffs_) {
    Q a = c;
    bool negative = a < 0;
    if (negative) a = -a;
    if (first) {
      if (negative) os << "-";
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    bool has_var = !e.is_zero();
    if (!has_var || a != 1) {
      os << a.get_str();
      if (has_var) os << " * ";
    }
    bool f2 = true;
    for (int i = 0; i < n_total(); ++i) {
      if (e.c[i] == 0) continue;
      if (!f2) os << " ";
      f2 = false;
      os << "x" << (i + 1);
      if (e.c[i] > 1) os << "^" << e.c[i];
    }
  }
  return os.str();
}

}  // namespace escalier
