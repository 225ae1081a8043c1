#pragma once

#include <map>
#include <string>
#include <vector>

#include "escalier/exponent.hpp"
#include "escalier/field.hpp"
#include "escalier/qmatrix.hpp"

namespace escalier {

// A polynomial representing a power series mod m^{D+1}.  Variables split into
// a main block of n_main u-variables followed by n_param v-parameters;
// exponents live in the combined block.  `exact` distinguishes a genuine
// polynomial from a truncated representative: ModTrunc results are correct
// mod m^{D+1} but say nothing above degree D.
class TruncatedSeries {
 public:
  static constexpr long kDefaultTrunc = 12;

  TruncatedSeries() = default;
  static TruncatedSeries zero(const Field& k, int n_main, int n_param, long trunc);
  static TruncatedSeries constant(const Field& k, const Q& c, int n_main, int n_param,
                                  long trunc);
  static TruncatedSeries monomial(const Field& k, const Q& c, const Exponent& e, int n_main,
                                  int n_param, long trunc);
  static TruncatedSeries variable(const Field& k, int i, int n_main, int n_param, long trunc);

  const Field& field() const { return field_; }
  int n_main() const { return n_main_; }
  int n_param() const { return n_param_; }
  int n_total() const { return n_main_ + n_param_; }
  long trunc() const { return trunc_; }
  bool is_exact() const { return exact_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<Exponent, Q, RevLexLess>& coeffs() const { return coeffs_; }
  Q coeff(const Exponent& e) const;

  // normalizes (drops zeros, reduces into the field, truncates; truncation
  // loss clears the exact flag)
  void add_term(const Exponent& e, const Q& c);

  TruncatedSeries add(const TruncatedSeries& o) const;
  TruncatedSeries sub(const TruncatedSeries& o) const;
  TruncatedSeries neg() const;
  TruncatedSeries scale(const Q& c) const;
  TruncatedSeries mul(const TruncatedSeries& o) const;
  // divide by a series with invertible constant term (geometric expansion)
  TruncatedSeries div_unit(const TruncatedSeries& o) const;
  bool equals(const TruncatedSeries& o) const;

  // lower D' <= D always; raising allowed only for Exact values
  TruncatedSeries retruncate(long d) const;
  // the same values with the exact flag cleared (the computation that
  // produced them lost information elsewhere)
  TruncatedSeries mark_inexact() const;
  TruncatedSeries homogeneous_part(long s) const;
  long ord() const;         // min total degree; throws ZeroSeries on 0
  long max_degree() const;  // 0 for the zero series

  std::vector<Exponent> supp() const;
  // {alpha : D_{u^alpha} f != 0}, from Hasse coefficients (char-p aware)
  std::vector<Exponent> supd() const;

  struct Leading {
    Exponent exp;
    std::vector<long long> value;  // T(exp)
    Q coeff;
  };
  // unique T-minimum of supp; T must be total over the full block
  Leading leading(const MonomialOrder& T) const;

  TruncatedSeries hasse(const Exponent& a) const;

  // recenter at q: f(u) -> f(u + q); requires Exact when q != 0
  TruncatedSeries translate(const std::vector<Q>& q) const;
  // lowest-degree homogeneous part of the recentering at q
  TruncatedSeries initial_form_at(const std::vector<Q>& q) const;
  // u -> M u with M invertible over the field; degree-preserving
  TruncatedSeries substitute_linear(const QMatrix& m) const;
  // value at q; requires Exact when q != 0
  Q eval(const std::vector<Q>& q) const;
  // value at q of the stored representative, with no exactness guarantee
  Q eval_unchecked(const std::vector<Q>& q) const;

  // restriction v = 0, dropping the parameter block
  TruncatedSeries at_params_zero() const;
  // reinterpret with np extra parameter variables appended
  TruncatedSeries with_params(int np) const;

  // grammar: terms `c * x1^a1 x2^a2` joined by +/-; rationals `p/q`;
  // u<k>/v<k> accepted as aliases into the two blocks
  static TruncatedSeries parse(const Field& k, int n_main, int n_param, long trunc,
                               const std::string& text);
  std::string to_string() const;

 private:
  TruncatedSeries(Field k, int nm, int np, long trunc)
      : field_(k), n_main_(nm), n_param_(np), trunc_(trunc) {}
  void check_compatible(const TruncatedSeries& o) const;

  Field field_;
  int n_main_ = 0, n_param_ = 0;
  long trunc_ = kDefaultTrunc;
  bool exact_ = true;
  std::map<Exponent, Q, RevLexLess> coeffs_;
};

}  // namespace escalier
