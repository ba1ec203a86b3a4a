#ifndef STRONGTREES_IDM_BOUNDS_HPP
#define STRONGTREES_IDM_BOUNDS_HPP

#include <span>
#include <vector>

#include "strongtrees/data.hpp"

namespace strongtrees {

enum class TStarRule {
  uniform,    // t* = 1/cells in the center of the simplex
  empirical,  // t* = counts/n (rejected for n = 0)
};

struct IdmConfig {
  double s = 1.0;
  TStarRule tstar_rule = TStarRule::uniform;
  double alpha = 0.95;  // credibility level for credible limits

  void validate() const;
};

enum class BoundKind {
  outer,  // conservative: guaranteed to contain the exact expectation range
  inner,  // witness-based: guaranteed to be contained in it
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  BoundKind kind = BoundKind::outer;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }

  static Interval make(double lo, double hi, BoundKind kind);
};

// Matched conservative/witness pair for one quantity; inner lies inside
// outer up to floating-point noise on the shared terms.
struct BoundsPair {
  Interval outer;
  Interval inner;
};

// Prior mean t* and the induced posterior mean u* = (counts + s*t*)/(n+s).
struct ExpansionPoint {
  std::vector<double> tstar;
  std::vector<double> ustar;

  static ExpansionPoint make(const ContingencyTable& counts,
                             const IdmConfig& cfg);
};

// Posterior-expected entropy sum_i h(u_i) at prior mean t, u_i =
// (n_i + s*t_i)/(n+s). t must be a distribution over the table's cells
// (checked to 1e-9).
double expected_entropy(const ContingencyTable& counts,
                        std::span<const double> t, double s);

// Conservative outer and witness inner intervals for the range of the
// posterior-expected entropy as t varies over the simplex. Both are
// within O(sigma^2) of the exact range, sigma = s/(n+s).
BoundsPair entropy_interval(const ContingencyTable& counts,
                            const IdmConfig& cfg);

// Posterior-expected mutual information of a 2-d table at prior mean t
// (row-major): sum_i h(u_i+) + sum_j h(u_+j) - sum_ij h(u_ij).
double expected_mi(const ContingencyTable& pair, std::span<const double> t,
                   double s);

// Outer/inner intervals for the range of the posterior-expected mutual
// information over the joint simplex. Tables with a unit arity have
// identically zero MI and return exact [0,0] intervals.
BoundsPair mi_interval(const ContingencyTable& pair, const IdmConfig& cfg);

// Pieces of the Taylor expansion of the expected MI around u*. Shared by
// the edge-dominance tests, which combine them across two edges.
struct MiExpansion {
  double i0 = 0.0;     // I(u*)
  double i1_lo = 0.0;  // linear term minimized over simplex vertices
  double i1_hi = 0.0;  // maximized
  double ir_lb = 0.0;  // remainder lower bound (<= 0)
  double ir_ub = 0.0;  // remainder upper bound (>= 0)
  bool trivially_zero = false;  // unit arity: MI vanishes identically

  double outer_lo() const { return trivially_zero ? 0.0 : i0 + i1_lo + ir_lb; }
  double outer_hi() const { return trivially_zero ? 0.0 : i0 + i1_hi + ir_ub; }
};

MiExpansion mi_expansion(const ContingencyTable& pair, const IdmConfig& cfg);

}  // namespace strongtrees

#endif  // STRONGTREES_IDM_BOUNDS_HPP
