#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "escalier/diagram.hpp"
#include "escalier/qmatrix.hpp"
#include "escalier/series.hpp"

namespace escalier {

enum class JacobianVariant { kFull, kReduced };

struct JacobianRow {
  long s = 0;
  Q det;
  bool invertible = false;
};

struct JacobianVerdict {
  std::vector<JacobianRow> full, reduced;
  std::optional<long> first_failure_full, first_failure_reduced;
  bool full_pass() const { return !first_failure_full.has_value(); }
  bool reduced_pass() const { return !first_failure_reduced.has_value(); }
  bool pass() const { return full_pass() && reduced_pass(); }
};

// Functions f_i paired with the vertices alpha_i of a finite-type diagram;
// J^s is the determinant of the Hasse-coefficient matrix over the degree-s
// slice of the diagram, evaluated at the stored point (origin by default).
// Pairs are kept in reverse-lexicographic vertex order internally.  The
// exponents may live in a leading block N^s with s below the number of main
// variables; slices then stay inside that block while derivatives are taken
// in the full ring.
class JacobianProblem {
 public:
  JacobianProblem(std::vector<TruncatedSeries> fs, std::vector<Exponent> alphas,
                  std::vector<Q> point = {});

  int k() const { return int(fs_.size()); }
  const Field& field() const { return field_; }
  const Diagram& diagram() const { return delta_; }
  const std::vector<TruncatedSeries>& functions() const { return fs_; }
  const std::vector<Exponent>& alphas() const { return alphas_; }
  long d() const { return delta_.d_of(); }

  // i(beta): first vertex (in reverse-lex order) whose cone contains beta
  int assign(const Exponent& beta) const;

  QMatrix jacobian_matrix(long s, JacobianVariant variant = JacobianVariant::kFull) const;
  Q jacobian_det(long s, JacobianVariant variant = JacobianVariant::kFull) const;

  // dets of both variants for every s up to d(Delta)+1
  JacobianVerdict check_conditions() const;

 private:
  Q entry(const Exponent& alpha, const Exponent& beta) const;

  Field field_;
  std::vector<TruncatedSeries> fs_;
  std::vector<Exponent> alphas_;
  std::vector<Q> point_;
  Diagram delta_;
};

// Projective resultant of k forms in k variables via the Macaulay quotient at
// degree sum(d_i) - k + 1, normalized so Res(x1^d1, ..., xk^dk) = 1.  Returns
// an exact 0 for non-regular sequences (decided by a rank computation); a
// vanishing extraneous minor triggers seeded unimodular retries.
Q macaulay_resultant(const std::vector<TruncatedSeries>& forms, std::uint64_t seed = 0);

// Resultant-Jacobian operator: from each f_i collect the degree-a_i Hasse
// coefficients at `point` into a form in s fresh unknowns, then take the
// resultant of those s forms.
Q jr_operator(const std::vector<TruncatedSeries>& fs, const std::vector<Q>& point,
              const std::vector<long>& abar, std::uint64_t seed = 0);

// Smallest space of linear forms presenting a homogeneous F (characteristic
// zero): the span of its degree-(d-1) Hasse derivatives, returned as monic
// rref rows.
std::vector<TruncatedSeries> essential_space(const TruncatedSeries& form);

}  // namespace escalier
