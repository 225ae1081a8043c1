#pragma once

#include <optional>
#include <vector>

#include "escalier/field.hpp"

namespace escalier {

// Dense matrix over the active coefficient field (entries are reduced field
// elements).  Exact Gaussian elimination with deterministic pivoting: first
// nonzero entry in the scan order wins.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, Q(0)) {}
  static QMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Q& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const Q& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  QMatrix mul(const QMatrix& o, const Field& k) const;

  // In-place reduced row echelon form; returns pivot column per pivot row.
  std::vector<int> rref(const Field& k);
  int rank(const Field& k) const;
  Q det(const Field& k) const;
  std::optional<QMatrix> inverse(const Field& k) const;
  // Solve A x = b; nullopt unless a unique solution exists.
  std::optional<std::vector<Q>> solve(const Field& k, const std::vector<Q>& b) const;

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Q> a_;
};

}  // namespace escalier
