#pragma once

#include <optional>
#include <vector>

#include "escalier/field.hpp"

namespace escalier {

// A point of N^n.  Coordinates are small (desk scale); degree fits a long.
struct Exponent {
  std::vector<int> c;

  Exponent() = default;
  explicit Exponent(std::vector<int> v) : c(std::move(v)) {}
  static Exponent zero(int n) { return Exponent(std::vector<int>(n, 0)); }
  static Exponent unit(int n, int i);  // e_i, 0-based

  int dim() const { return static_cast<int>(c.size()); }
  long degree() const;
  bool is_zero() const;
  bool dominates(const Exponent& o) const;  // componentwise >=
  Exponent plus(const Exponent& o) const;
  std::optional<Exponent> minus(const Exponent& o) const;  // nullopt if any coord negative
  Exponent minus_clamped(const Exponent& o) const;         // max(this - o, 0) componentwise
  Exponent join(const Exponent& o) const;                  // componentwise max
  Exponent prefix(int i) const;                            // first i coordinates
  Exponent padded(int n) const;                            // extend with zeros to dim n
  // index of last nonzero coordinate, 1-based; 0 for the origin
  int group() const;

  bool operator==(const Exponent& o) const { return c == o.c; }
  bool operator!=(const Exponent& o) const { return c != o.c; }
};

// Reverse lexicographic: compare (a_n, ..., a_1) with (b_n, ..., b_1)
// lexicographically.  Total order; used wherever a deterministic sweep of
// exponents is needed.
bool revlex_less(const Exponent& a, const Exponent& b);

struct RevLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const { return revlex_less(a, b); }
};

// all alpha in N^n with |alpha| == s (resp. <= s), revlex order
std::vector<Exponent> exponents_of_degree(int n, long s);
std::vector<Exponent> exponents_up_to_degree(int n, long s);

// A monomial order given by a tuple of nonnegative rational linear forms,
// compared lexicographically by value vectors.  Rows are cleared to coprime
// nonnegative integers (row scaling does not change any comparison).
class MonomialOrder {
public:
  static MonomialOrder from_rational_forms(int n, const std::vector<std::vector<Q>>& rows);
  static MonomialOrder from_integer_forms(int n, const std::vector<std::vector<long>>& rows);
  // T_i = x_i + ... + x_n: positive, normalized, total, monotone
  static MonomialOrder canonical(int n);

  int dim() const { return n_; }
  const std::vector<std::vector<long long>>& forms() const { return rows_; }

  std::vector<long long> value(const Exponent& a) const;
  int compare(const Exponent& a, const Exponent& b) const;  // -1, 0, +1
  bool less(const Exponent& a, const Exponent& b) const { return compare(a, b) < 0; }
  bool leq(const Exponent& a, const Exponent& b) const { return compare(a, b) <= 0; }

  bool is_positive() const { return positive_; }
  bool is_normalized() const { return normalized_; }
  bool is_total() const { return total_; }
  bool is_monotone() const { return monotone_; }

  // appends the reverse-lex tie-break forms x_n, ..., x_1; always total
  MonomialOrder completed() const;

private:
  MonomialOrder(int n, std::vector<std::vector<long long>> rows);
  void classify();

  int n_ = 0;
  std::vector<std::vector<long long>> rows_;
  bool positive_ = false, normalized_ = false, total_ = false, monotone_ = false;
};

}  // namespace escalier
