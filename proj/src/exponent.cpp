#include "escalier/exponent.hpp"

#include <algorithm>
#include <numeric>

namespace escalier {

Exponent Exponent::unit(int n, int i) {
  Exponent e = zero(n);
  e.c[i] = 1;
  return e;
}

long Exponent::degree() const {
  long d = 0;
  for (int v : c) d += v;
  return d;
}

bool Exponent::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](int v) { return v == 0; });
}

bool Exponent::dominates(const Exponent& o) const {
  for (int i = 0; i < dim(); ++i)
    if (c[i] < o.c[i]) return false;
  return true;
}

Exponent Exponent::plus(const Exponent& o) const {
  Exponent r = *this;
  for (int i = 0; i < dim(); ++i) r.c[i] += o.c[i];
  return r;
}

std::optional<Exponent> Exponent::minus(const Exponent& o) const {
  Exponent r = *this;
  for (int i = 0; i < dim(); ++i) {
    r.c[i] -= o.c[i];
    if (r.c[i] < 0) return std::nullopt;
  }
  return r;
}

Exponent Exponent::minus_clamped(const Exponent& o) const {
  Exponent r = *this;
  for (int i = 0; i < dim(); ++i) r.c[i] = std::max(r.c[i] - o.c[i], 0);
  return r;
}

Exponent Exponent::join(const Exponent& o) const {
  Exponent r = *this;
  for (int i = 0; i < dim(); ++i) r.c[i] = std::max(r.c[i], o.c[i]);
  return r;
}

Exponent Exponent::prefix(int i) const {
  return Exponent(std::vector<int>(c.begin(), c.begin() + i));
}

Exponent Exponent::padded(int n) const {
  Exponent r = *this;
  r.c.resize(n, 0);
  return r;
}

int Exponent::group() const {
  for (int i = dim() - 1; i >= 0; --i)
    if (c[i] != 0) return i + 1;
  return 0;
}

bool revlex_less(const Exponent& a, const Exponent& b) {
  for (int i = a.dim() - 1; i >= 0; --i) {
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  }
  return false;
}

static void degree_rec(int n, long s, bool exact, std::vector<int>& cur,
                       std::vector<Exponent>& out) {
  if (static_cast<int>(cur.size()) == n - 1) {
    if (exact) {
      cur.push_back(static_cast<int>(s));
      out.emplace_back(cur);
      cur.pop_back();
    } else {
      for (long v = 0; v <= s; ++v) {
        cur.push_back(static_cast<int>(v));
        out.emplace_back(cur);
        cur.pop_back();
      }
    }
    return;
  }
  for (long v = 0; v <= s; ++v) {
    cur.push_back(static_cast<int>(v));
    degree_rec(n, s - v, exact, cur, out);
    cur.pop_back();
  }
}

std::vector<Exponent> exponents_of_degree(int n, long s) {
  std::vector<Exponent> out;
  if (n == 0) {
    if (s == 0) out.push_back(Exponent::zero(0));
    return out;
  }
  std::vector<int> cur;
  degree_rec(n, s, true, cur, out);
  std::sort(out.begin(), out.end(), revlex_less);
  return out;
}

std::vector<Exponent> exponents_up_to_degree(int n, long s) {
  std::vector<Exponent> out;
  if (n == 0) {
    out.push_back(Exponent::zero(0));
    return out;
  }
  std::vector<int> cur;
  degree_rec(n, s, false, cur, out);
  std::sort(out.begin(), out.end(), revlex_less);
  return out;
}

MonomialOrder::MonomialOrder(int n, std::vector<std::vector<long long>> rows)
    : n_(n), rows_(std::move(rows)) {
  classify();
}

MonomialOrder MonomialOrder::from_integer_forms(int n, const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<Q>> q;
  for (const auto& r : rows) {
    std::vector<Q> row;
    for (long v : r) row.emplace_back(v);
    q.push_back(std::move(row));
  }
  return from_rational_forms(n, q);
}

MonomialOrder MonomialOrder::from_rational_forms(int n, const std::vector<std::vector<Q>>& rows) {
  if (n < 1) throw Error("InvalidOrder", "order needs at least one variable");
  if (rows.empty()) throw Error("InvalidOrder", "order needs at least one form");
  std::vector<std::vector<long long>> cleared;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n)
      throw Error("InvalidOrder", "form arity does not match variable count");
    Z l(1);
    for (const auto& v : r) {
      if (v < 0) throw Error("InvalidOrder", "order forms must have nonnegative coefficients");
      Z den = v.get_den();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    }
    std::vector<Z> ints;
    Z g(0);
    for (const auto& v : r) {
      Z w = v.get_num() * (l / v.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w.get_mpz_t());
      ints.push_back(w);
    }
    if (g == 0) g = 1;  // all-zero row kept as-is (harmless, affects totality only)
    std::vector<long long> out;
    for (const auto& w : ints) {
      Z v = w / g;
      if (!v.fits_slong_p() || v.get_si() > (1LL << 30))
        throw Error("InvalidOrder", "order coefficients too large after clearing denominators");
      out.push_back(v.get_si());
    }
    cleared.push_back(std::move(out));
  }
  return MonomialOrder(n, std::move(cleared));
}

MonomialOrder MonomialOrder::canonical(int n) {
  std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) rows[i][j] = 1;
  return from_integer_forms(n, rows);
}

std::vector<long long> MonomialOrder::value(const Exponent& a) const {
  std::vector<long long> v(rows_.size(), 0);
  for (size_t r = 0; r < rows_.size(); ++r) {
    long long acc = 0;
    for (int i = 0; i < n_; ++i) acc += rows_[r][i] * static_cast<long long>(a.c[i]);
    v[r] = acc;
  }
  return v;
}

int MonomialOrder::compare(const Exponent& a, const Exponent& b) const {
  for (const auto& row : rows_) {
    long long va = 0, vb = 0;
    for (int i = 0; i < n_; ++i) {
      va += row[i] * static_cast<long long>(a.c[i]);
      vb += row[i] * static_cast<long long>(b.c[i]);
    }
    if (va != vb) return va < vb ? -1 : 1;
  }
  return 0;
}

// exact rank over Q of the form matrix
static int rational_rank(const std::vector<std::vector<long long>>& rows, int n) {
  std::vector<std::vector<Q>> m;
  for (const auto& r : rows) {
    std::vector<Q> row;
    for (long long v : r) row.emplace_back(static_cast<long>(v));
    m.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(m.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Q f = m[r][col] / m[rank][col];
      for (int cc = col; cc < n; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

void MonomialOrder::classify() {
  positive_ = true;
  for (int j = 0; j < n_; ++j) {
    bool hit = false;
    for (const auto& row : rows_)
      if (row[j] > 0) hit = true;
    positive_ = positive_ && hit;
  }
  normalized_ = std::all_of(rows_[0].begin(), rows_[0].end(), [](long long v) { return v == 1; });
  total_ = rational_rank(rows_, n_) == n_;
  monotone_ = true;
  for (int i = 0; i < n_ && monotone_; ++i)
    for (int j = i + 1; j < n_ && monotone_; ++j)
      if (compare(Exponent::unit(n_, i), Exponent::unit(n_, j)) > 0) monotone_ = false;
}

MonomialOrder MonomialOrder::completed() const {
  if (total_) return *this;
  auto rows = rows_;
  for (int i = n_ - 1; i >= 0; --i) {
    std::vector<long long> row(n_, 0);
    row[i] = 1;
    rows.push_back(std::move(row));
  }
  return MonomialOrder(n_, std::move(rows));
}

}  // namespace escalier
