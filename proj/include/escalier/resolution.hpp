#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "escalier/series.hpp"

namespace escalier {

// -- charts and marked ideals -------------------------------------------

// An exceptional divisor seen inside one chart: the coordinate hyperplane
// {x_coord = 0} together with the blow-up step that created it.  Divisors
// handed in with the input are born at step 0; the list stays ordered by
// birth, so the last entry is the maximal element of E.
struct ExceptionalRecord {
  int coord = 0;
  int birth = 0;
};

// One affine patch of the blow-up tower.  Centers are coordinate subspaces
// after normalization, so a patch keeps the ambient dimension of its parent
// and reuses the same coordinate names; `subst` records the pullback of each
// parent coordinate as a monomial in the patch coordinates.
struct BlowupChart {
  int id = 0;
  int n = 0;
  std::vector<std::string> names;
  std::vector<ExceptionalRecord> E;
  int parent = -1;          // -1 on the root chart
  std::vector<int> center;  // parent coordinates cutting out the center
  int pivot = -1;           // the center coordinate this patch divides by
  int birth_step = 0;       // blow-up step that created the patch
  std::vector<Exponent> subst;  // parent coordinate j -> exponent of sigma*(x_j)
};

// identity chart on n coordinates, with the listed coordinate hyperplanes
// as input divisors (all born at step 0)
BlowupChart root_chart(int n, const std::vector<int>& divisors = {});

// A marked ideal (I, mu) living on one chart; generators are exact
// polynomials, none of them zero, and the divisor history is the chart's E.
struct MarkedIdeal {
  int chart = 0;
  std::vector<TruncatedSeries> gens;
  long mu = 1;
};

// -- derivative ideals and cosupport ------------------------------------

// D^i(I): generated by the generators together with all Hasse derivatives of
// order <= i; members certified redundant by a truncated membership probe are
// dropped.  D^0(I) = I.
std::vector<TruncatedSeries> derivative_ideal(const std::vector<TruncatedSeries>& gens,
                                              int order);

// cosupp(I, mu) = V(D^{mu-1}(I)), handled through certificates: `empty` means
// 1 passed a truncated membership probe, `zero_dimensional` means the probe
// found pure-power pivots on every coordinate (the locus meets a neighborhood
// of the origin in at most the origin), `at_origin` means every generator
// vanishes at the origin.
struct Cosupport {
  std::vector<TruncatedSeries> gens;
  bool empty = false;
  bool zero_dimensional = false;
  bool at_origin = false;
};

// probe degree defaults to 2 * (max generator degree) * mu, escalated once
// before the emptiness question is given up on
Cosupport cosupport(const std::vector<TruncatedSeries>& gens, long mu);
Cosupport cosupport(const std::vector<TruncatedSeries>& gens, long mu,
                    const std::vector<int>& ambient, long probe_bound = 0);

// does q lie on V(D^{mu-1}(I))?
bool cosupport_contains(const Cosupport& c, const std::vector<Q>& q);

// -- blow-ups and transforms ---------------------------------------------

// blow up the coordinate subspace {x_i = 0 : i in center}; one patch per
// center coordinate, in ascending pivot order, each with the new exceptional
// divisor appended as the maximal element of E.  A codimension-one center
// returns the single identity patch, still with a fresh divisor record.
std::vector<BlowupChart> blow_up(const BlowupChart& chart, const std::vector<int>& center,
                                 int step);

// sigma*(f) under the patch's monomial substitution (exact on polynomials)
TruncatedSeries pullback(const TruncatedSeries& f, const BlowupChart& chart);

// controlled transform sigma*(I) / y^mu, where y is the patch's exceptional
// coordinate; the divisibility demanded by admissibility is asserted and
// its failure raises InadmissibleCenter
std::vector<TruncatedSeries> controlled_transform(const std::vector<TruncatedSeries>& gens,
                                                  const BlowupChart& chart, long mu);

// strict transform: each generator divided by its own maximal power of y
std::vector<TruncatedSeries> strict_transform(const std::vector<TruncatedSeries>& gens,
                                              const BlowupChart& chart);

// -- companion, capacitor, centers ----------------------------------------

enum class CompanionTag { MaximalOrder, NeedsMonomialStep };

// I = M(I) * N(I) with M the maximal monomial in the listed divisor
// coordinates; the companion ideal is marked with ord of N at the origin,
// and picks up the monomial part when that order falls below mu
struct Companion {
  std::vector<TruncatedSeries> gens;
  long mu = 0;
  CompanionTag tag = CompanionTag::MaximalOrder;
  long ord_n = 0;                // order of N(I) at the origin
  std::vector<long> monomial;    // exponent of M(I) on each chart coordinate
};

Companion companion_ideal(const std::vector<TruncatedSeries>& gens, long mu,
                          const std::vector<int>& divisor_coords);

// gradation-mu! slice of the differential Rees algebra of (I, mu): products
// of elements of the D^a(I) whose weights mu - a sum to at least mu!.
// Guarded at mu <= 3 (GuardExceeded beyond); the gradation is written to
// *gradation when requested.
std::vector<TruncatedSeries> coefficient_capacitor(const std::vector<TruncatedSeries>& gens,
                                                   long mu, long* gradation = nullptr);

// A maximal-contact direction: u in D^{mu-1}(I) of order one, normalized to
// the coordinate `coord` by a triangular change when its linear part is not
// already a coordinate.  `replacement` expresses the old coordinate in the
// new ones; `truncated` reports that inverting the change hit the degree cap.
struct TangentDirection {
  int coord = -1;
  TruncatedSeries u;
  bool changed = false;
  bool truncated = false;
  TruncatedSeries replacement;
};

// picks a generator of dgens with nonzero linear part, preferring directions
// transverse to the listed divisor coordinates, then seeded combinations;
// NoTangentDirection when order one is out of reach
TangentDirection tangent_direction(const std::vector<TruncatedSeries>& dgens,
                                   const std::vector<int>& divisor_coords, Rng& rng);

// substitute the replacement for coordinate `coord` in f
TruncatedSeries apply_normalization(const TruncatedSeries& f, int coord,
                                    const TruncatedSeries& replacement);

// Step 2b center: the rho-maximal subset of divisor coordinates whose
// exponents reach mu while every proper subset stays below, ties resolved
// toward the oldest divisors; EmptyCosupport when no subset reaches mu
std::vector<int> monomial_center(const std::vector<long>& exponents,
                                 const std::vector<ExceptionalRecord>& divisors, long mu);

// -- the driver ------------------------------------------------------------

struct ResolveLimits {
  int max_blowups = 48;
  int max_charts = 256;
  long trunc = 24;  // working truncation for membership and order probes
};

// One node of the resolution tree: the marked ideal as it arrived in the
// chart, the center selected there (empty on leaves), and the invariant log.
struct TraceNode {
  int chart = 0;
  MarkedIdeal state;
  std::vector<int> center;
  long ord_origin = -1;   // order of the ideal at the chart origin
  long ord_n = -1;        // companion order when a stage opened here, else -1
  int stage = -1;         // identifier of the companion stage active here
  bool monomial_step = false;   // center produced by the monomial step
  bool truncation_flag = false; // a normalization hit the working truncation
  std::string status;     // "resolved", "blown-up", or "limit"
  int parent = -1;
  std::vector<int> children;
  // triangular coordinate changes applied at this node, oldest first
  std::vector<std::pair<int, TruncatedSeries>> normalizations;
};

struct ResolutionTrace {
  std::vector<BlowupChart> charts;
  std::vector<TraceNode> nodes;
  int blowups = 0;
  bool complete = false;
  std::uint64_t seed = 0;
};

// LimitExceeded keeps the partial trace alongside the usual code/message
struct LimitError : Error {
  ResolutionTrace partial;
  LimitError(const std::string& msg, ResolutionTrace t)
      : Error("LimitExceeded", msg), partial(std::move(t)) {}
};

// resolve the marked ideal (I, mu) on the identity chart with the listed
// input divisors; characteristic zero, n <= 3.  Every leaf of the returned
// tree carries an emptiness certificate for its cosupport.
ResolutionTrace resolve_marked(const Field& k, int n,
                               const std::vector<TruncatedSeries>& gens, long mu,
                               const std::vector<int>& initial_divisors,
                               std::uint64_t seed, const ResolveLimits& limits = {});

// -- verification -----------------------------------------------------------

struct VerifyReport {
  bool centers_admissible = true;   // every center inside the node's cosupport
  bool divisibility = true;         // sigma*(I) divisible by y^mu, transforms match
  bool leaves_resolved = true;      // every leaf certified empty
  bool divisors_consistent = true;  // E bookkeeping matches the chart tree
  bool ord_monotone = true;         // invariant never climbs along a branch
  bool hs_bounded = true;           // strict-transform Hilbert-Samuel probes
  bool hs_constant_on_centers = true;  // normal-flatness probes along centers
  std::vector<std::string> notes;

  bool pass() const {
    return centers_admissible && divisibility && leaves_resolved && divisors_consistent &&
           ord_monotone && hs_bounded && hs_constant_on_centers;
  }
};

// replays the trace against the original input; Hilbert-Samuel probes sample
// strict transforms against the root (and constancy along positive-dimensional
// centers) and are meant for ideal-of-variety inputs
VerifyReport verify_resolution(const ResolutionTrace& trace, const Field& k, int n,
                               const std::vector<TruncatedSeries>& gens, long mu,
                               bool hilbert_probes = false);

}  // namespace escalier
