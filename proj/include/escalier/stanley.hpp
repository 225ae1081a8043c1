#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "escalier/qmatrix.hpp"
#include "escalier/series.hpp"

namespace escalier {

// A free rank-k module over K[x_1,...,x_n] with generators in degree zero,
// presented by homogeneous relation vectors: every nonzero component of one
// relation is homogeneous of the same degree.
class GradedModule {
 public:
  GradedModule(const Field& field, int n, int rank,
               std::vector<std::vector<TruncatedSeries>> relations);

  const Field& field() const { return field_; }
  int n() const { return n_; }
  int rank() const { return rank_; }
  const std::vector<std::vector<TruncatedSeries>>& relations() const { return rels_; }
  long relation_degree(int t) const { return degs_[t]; }
  long max_relation_degree() const;

  // the presentation after the substitution x -> M x
  GradedModule substituted(const QMatrix& m) const;

 private:
  Field field_;
  int n_ = 0, rank_ = 0;
  std::vector<std::vector<TruncatedSeries>> rels_;
  std::vector<long> degs_;
};

// One summand generator: the class of `gen` spans a free module over
// R_i = K[x_{n-i+1},...,x_n] (the last i variables; i = 0 is the base field).
struct StanleyEntry {
  std::vector<TruncatedSeries> gen;  // homogeneous module element, length = rank
  int ring_index = 0;                // i in 0..n
  long degree = 0;                   // degree of gen
};

struct StanleyBasis {
  std::vector<StanleyEntry> entries;
  QMatrix change;  // coordinate change under which the entries form a basis
  long bound = 0;  // the construction verified all degrees <= bound
};

// phi(m, k) = C(m+k, k) for m >= 0, else 0: the number of monomials of
// degree <= m in k variables
Z phi(long m, int k);

// Splits M into free R_i-summands: per coordinate (last first) the projection
// ideal's diagram is made monotone by a seeded generic change, its
// Gamma-decomposition contributes monomial generators, and the relations with
// vanishing last coordinate are regenerated degree by degree.  The result is
// verified degree-by-degree before it is returned.
StanleyBasis stanley_decomposition(const GradedModule& m, std::uint64_t seed);

// H_M(s) = dim M/m^{s+1}M = sum phi(s - d_e, i_e) over the basis entries
Z hilbert_from_basis(const StanleyBasis& b, long s);

struct BasisVerdict {
  bool ok = true;
  long witness = -1;  // first failing degree
  std::string what;   // "independence" or "span", empty on a pass
};

// Rank equality both ways in every degree <= bound: the structured products
// of the entries are independent modulo the relations and span the quotient.
BasisVerdict check_basis(const GradedModule& m, const StanleyBasis& b, long bound);

// True when `candidates` carry the same (ring, degree) profile as the basis
// and their structured products generate M in every degree <= bound.
// Candidates are read in the same coordinates as a.entries.
bool majorizes(const StanleyBasis& a, const std::vector<StanleyEntry>& candidates,
               const GradedModule& m, long bound);

struct StabilizationReport {
  bool threshold_pass = false;  // generation at all degrees <= d(M)+1
  bool oracle_pass = false;     // generation at all degrees <= oracle bound
  long threshold_witness = -1;  // first failing degree at the threshold, or -1
  long oracle_witness = -1;
  long d_of_module = 0;         // d(M) = max candidate degree
};

// The stabilization statement: candidates that generate through degree
// d(M)+1 generate in every degree.  Verifies both the threshold window and
// an independent oracle window (default 2 d(M) + 5) and reports each.
StabilizationReport stabilization_check(const GradedModule& m,
                                        const std::vector<StanleyEntry>& candidates,
                                        long oracle_bound = -1);

}  // namespace escalier
