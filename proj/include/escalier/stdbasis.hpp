#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "escalier/diagram.hpp"
#include "escalier/qmatrix.hpp"
#include "escalier/series.hpp"

namespace escalier {

// An ideal handed over by generators sharing one ring, one normalized total
// order (completed internally), and one truncation degree.
class IdealPresentation {
 public:
  IdealPresentation(std::vector<TruncatedSeries> gens, const MonomialOrder& order);

  const std::vector<TruncatedSeries>& generators() const { return gens_; }
  const MonomialOrder& order() const { return order_; }
  const Field& field() const { return gens_[0].field(); }
  int n() const { return gens_[0].n_main(); }
  long trunc() const { return gens_[0].trunc(); }

  // generators recentred at q (same order, same truncation)
  IdealPresentation translated(const std::vector<Q>& q) const;
  // generators after the linear substitution u -> M u
  IdealPresentation substituted(const QMatrix& m) const;

 private:
  std::vector<TruncatedSeries> gens_;
  MonomialOrder order_;
};

struct DiagramCertificate {
  long trunc = 0;   // the reported data is complete up to this degree
  long pivots = 0;  // rank of the truncated image of the ideal
};

struct TruncatedDiagram {
  Diagram diagram;
  DiagramCertificate certificate;
};

// exp(I) cut at the truncation degree: pivot exponents of the row-reduced
// image of the ideal in R/m^{D+1}, columns ordered by the ideal's order
TruncatedDiagram truncated_initial_diagram(const IdealPresentation& ideal);

struct StandardBasisReport {
  Diagram diagram;                    // vertices alpha_i, reverse-lex order
  std::vector<TruncatedSeries> basis; // fbar_i = u^{alpha_i} + r_i, supp(r_i) in Gamma
  DiagramCertificate certificate;
};

// reduced vertex rows of the truncated image; throws TruncationTooSmall when
// a vertex row cannot be certified below the truncation ceiling
StandardBasisReport standard_basis(const IdealPresentation& ideal);

// H(s) = dim R/(I_q + m^{s+1}) for s = 0..s_max, with I_q the ideal recentred
// at q; needs s_max < trunc
std::vector<Z> hilbert_samuel_at(const IdealPresentation& ideal, const std::vector<Q>& q,
                                 long s_max);

struct SamuelVerdict {
  bool holds[5] = {false, false, false, false, false};
  int first_failing = 0;  // 1..5, or 0 when every condition holds
  std::string witness;    // what broke first, empty on a pass
  bool pass() const { return first_failing == 0; }
};

// the five standard-basis conditions for basis[i] paired with the i-th vertex
// of a diagram in N^s, probed at each sample point
std::vector<SamuelVerdict> check_samuel_basis(const std::vector<TruncatedSeries>& basis,
                                              const Diagram& delta,
                                              const std::vector<std::vector<Q>>& points);

struct StratumProbe {
  bool in_stratum = false;  // ord_y(f_i) = |alpha_i| for every i
  int hs_versus_top = 0;    // -1/0/+1: H_y against H(Delta x N^{n-s})
};

std::vector<StratumProbe> samuel_stratum_probe(const IdealPresentation& ideal,
                                               const StandardBasisReport& report,
                                               const std::vector<std::vector<Q>>& points);

struct MonotoneChange {
  QMatrix change;      // unimodular substitution that was applied
  Diagram diagram;     // truncated initial diagram after the change, monotone
  long attempts = 0;   // changes tried, identity included
};

// seeded search for a unimodular coordinate change making the truncated
// initial diagram monotone; at most 32 attempts
MonotoneChange generic_monotone_change(const IdealPresentation& ideal, std::uint64_t seed);

}  // namespace escalier
