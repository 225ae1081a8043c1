#include "escalier/qmatrix.hpp"

namespace escalier {

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Q(1);
  return m;
}

QMatrix QMatrix::mul(const QMatrix& o, const Field& k) const {
  if (cols_ != o.rows_) throw Error("DimensionMismatch", "matrix product shapes");
  QMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int t = 0; t < cols_; ++t) {
      if (at(i, t) == 0) continue;
      for (int j = 0; j < o.cols_; ++j)
        r.at(i, j) = k.add(r.at(i, j), k.mul(at(i, t), o.at(t, j)));
    }
  return r;
}

std::vector<int> QMatrix::rref(const Field& k) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int p = -1;
    for (int i = row; i < rows_; ++i)
      if (at(i, col) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(row, j));
    Q inv = k.inv(at(row, col));
    for (int j = col; j < cols_; ++j) at(row, j) = k.mul(at(row, j), inv);
    for (int i = 0; i < rows_; ++i) {
      if (i == row || at(i, col) == 0) continue;
      Q f = at(i, col);
      for (int j = col; j < cols_; ++j)
        at(i, j) = k.sub(at(i, j), k.mul(f, at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int QMatrix::rank(const Field& k) const {
  QMatrix m = *this;
  return int(m.rref(k).size());
}

Q QMatrix::det(const Field& k) const {
  if (rows_ != cols_) throw Error("DimensionMismatch", "determinant of non-square matrix");
  QMatrix m = *this;
  Q d(1);
  for (int col = 0; col < cols_; ++col) {
    int p = -1;
    for (int i = col; i < rows_; ++i)
      if (m.at(i, col) != 0) {
        p = i;
        break;
      }
    if (p < 0) return Q(0);
    if (p != col) {
      for (int j = 0; j < cols_; ++j) std::swap(m.at(p, j), m.at(col, j));
      d = k.neg(d);
    }
    d = k.mul(d, m.at(col, col));
    Q inv = k.inv(m.at(col, col));
    for (int i = col + 1; i < rows_; ++i) {
      if (m.at(i, col) == 0) continue;
      Q f = k.mul(m.at(i, col), inv);
      for (int j = col; j < cols_; ++j)
        m.at(i, j) = k.sub(m.at(i, j), k.mul(f, m.at(col, j)));
    }
  }
  return d;
}

std::optional<QMatrix> QMatrix::inverse(const Field& k) const {
  if (rows_ != cols_) throw Error("DimensionMismatch", "inverse of non-square matrix");
  QMatrix aug(rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = Q(1);
  }
  auto piv = aug.rref(k);
  if (int(piv.size()) != rows_ || piv.back() >= cols_) return std::nullopt;
  for (int t = 0; t < rows_; ++t)
    if (piv[t] != t) return std::nullopt;
  QMatrix inv(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
  return inv;
}

std::optional<std::vector<Q>> QMatrix::solve(const Field& k, const std::vector<Q>& b) const {
  if (int(b.size()) != rows_) throw Error("DimensionMismatch", "rhs length");
  QMatrix aug(rows_, cols_ + 1);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = k.reduce(b[i]);
  }
  auto piv = aug.rref(k);
  std::vector<Q> x(cols_, Q(0));
  int row = 0;
  for (int col : piv) {
    if (col == cols_) return std::nullopt;  // inconsistent
    x[col] = aug.at(row++, cols_);
  }
  if (int(piv.size()) < cols_) return std::nullopt;  // no unique solution
  return x;
}

}  // namespace escalier
