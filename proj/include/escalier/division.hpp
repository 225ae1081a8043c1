#pragma once

#include <vector>

#include "escalier/diagram.hpp"
#include "escalier/series.hpp"

namespace escalier {

struct DivisionResult {
  std::vector<TruncatedSeries> h;
  TruncatedSeries r;
};

enum class DivisionSchedule {
  kAuto,      // monomial fixed point when no parameters, graded otherwise
  kMonomial,  // T-least monomial splitting (requires n_param == 0)
  kGraded,    // degree-by-degree linear solve
};

// Division data: divisors f_i with stated initial exponents alpha_i =
// exp_T(f_i(u,0)) over a positive order T on the u-block.  The list order
// fixes the subdivision Delta_i = (alpha_i + N^n) minus earlier parts, with
// Gamma_i its translate to the origin.  Leading coefficients are normalized
// internally; quotients are reported against the original divisors.
class DivisionProblem {
 public:
  static DivisionProblem create(std::vector<TruncatedSeries> fs, std::vector<Exponent> alphas,
                                const MonomialOrder& T);
  // convenience: alphas inferred as exp_T(f_i(u,0))
  static DivisionProblem infer(std::vector<TruncatedSeries> fs, const MonomialOrder& T);

  int k() const { return int(fs_.size()); }
  int n_main() const { return nm_; }
  int n_param() const { return np_; }
  long trunc() const { return trunc_; }
  const Field& field() const { return field_; }
  const std::vector<TruncatedSeries>& divisors() const { return fs_; }
  const std::vector<Exponent>& alphas() const { return alphas_; }
  const MonomialOrder& order() const { return torder_; }  // completed, total
  const Diagram& diagram() const { return delta_; }

  // first divisor index whose alpha divides beta, or -1 (beta in Gamma)
  int subdivide(const Exponent& beta_u) const;
  bool in_gamma(const Exponent& beta_u) const { return subdivide(beta_u) < 0; }
  bool in_gamma_i(int i, const Exponent& gamma_u) const;

  DivisionResult divide(const TruncatedSeries& g,
                        DivisionSchedule sched = DivisionSchedule::kAuto) const;

  // Weierstrass-Hironaka preparation: returns fbar_i = u^{alpha_i} - r_i in
  // original index order, generating the same ideal mod m^{D+1}
  std::vector<TruncatedSeries> prepare() const;
  // the same problem with divisors replaced by their prepared forms
  DivisionProblem prepared() const;

 private:
  DivisionProblem() = default;
  DivisionResult divide_monomial(const TruncatedSeries& g) const;
  DivisionResult divide_graded(const TruncatedSeries& g) const;
  void check_contracts(const TruncatedSeries& g, const DivisionResult& res) const;

  Field field_;
  int nm_ = 0, np_ = 0;
  long trunc_ = TruncatedSeries::kDefaultTrunc;
  std::vector<TruncatedSeries> fs_;        // original divisors
  std::vector<TruncatedSeries> fs_norm_;   // leading coefficient 1
  std::vector<Q> lead_;                    // original leading coefficients
  std::vector<Exponent> alphas_;
  MonomialOrder torder_ = MonomialOrder::canonical(1);
  Diagram delta_;
};

}  // namespace escalier
