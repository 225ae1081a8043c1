#pragma once

#include <optional>
#include <string>
#include <vector>

#include "escalier/exponent.hpp"
#include "escalier/field.hpp"

namespace escalier {

// A finite union of translated positive orthants, stored by its minimal
// vertices in reverse-lexicographic order.
class Diagram {
 public:
  struct Decomposition {
    std::vector<std::vector<Exponent>> A;     // A[i-1] subset of N^i, i = 1..n
    std::vector<std::vector<Exponent>> Bbar;  // one finite slice per vertex
    std::vector<int> group;                   // group index i of each vertex (1-based)
    std::vector<std::vector<Exponent>> C;     // C[i-1] subset of N^i, i = 1..n-1
    long d = 0;                               // max degree over all A and Bbar entries
  };

  static Diagram from_exponents(int n, std::vector<Exponent> exps);
  static Diagram empty(int n) { return from_exponents(n, {}); }

  int dim() const { return n_; }
  bool is_empty() const { return verts_.empty(); }
  const std::vector<Exponent>& vertices() const { return verts_; }

  bool contains(const Exponent& a) const;
  // Index of the first stored vertex dominated by a, or -1 if a lies outside.
  int locate(const Exponent& a) const;

  bool is_monotone() const;
  bool is_finite_type() const;

  // Diagram of the first i coordinates.
  Diagram project(int i) const;

  // Throws EmptyDiagram / NotFiniteType when no finite decomposition exists.
  const Decomposition& decomposition() const;
  long d_of() const { return decomposition().d; }

  // Number of decomposition cells containing a; the partition property says
  // this is 1 inside the diagram and 0 outside.
  int partition_multiplicity(const Exponent& a) const;

  std::vector<Z> hs_profile(long s_max) const;
  Z hilbert_samuel(long s) const;
  // -1 / 0 / 1 lexicographically on the profiles; *s_star receives the cutoff
  // that decides the comparison.
  static int hs_compare(const Diagram& a, const Diagram& b, long* s_star = nullptr);

  // All diagram points of total degree s.
  std::vector<Exponent> slice(long s) const;
  // slice(s) minus the vertices of degree s, or {} when no vertex has degree s.
  std::vector<Exponent> reduced_slice(long s) const;

  bool operator==(const Diagram& o) const { return n_ == o.n_ && verts_ == o.verts_; }

 private:
  void build_decomposition() const;

  int n_ = 0;
  std::vector<Exponent> verts_;
  mutable std::optional<Decomposition> dec_;
  mutable std::string reject_;
};

// A finite or cofinite complement of a staircase, as used for the Gamma sets.
struct GammaSet {
  bool finite = false;
  std::vector<Exponent> elems;  // populated only when finite
};

// Complement N^d minus E of the staircase spanned by e's vertices.
GammaSet gamma_complement(const Diagram& e);
// d minus dp, as a union over vertices w of d of w + Gamma(dp - w).
GammaSet staircase_difference(const Diagram& d, const Diagram& dp);

}  // namespace escalier
