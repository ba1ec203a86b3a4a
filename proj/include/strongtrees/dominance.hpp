#ifndef STRONGTREES_DOMINANCE_HPP
#define STRONGTREES_DOMINANCE_HPP

#include <span>

#include "strongtrees/data.hpp"
#include "strongtrees/idm_bounds.hpp"

namespace strongtrees {

// Outcome of a dominance test; margin is the certified lower bound on the
// weight difference, so dominates holds exactly when margin > 0.
struct DominanceVerdict {
  bool dominates = false;
  double margin = 0.0;

  static DominanceVerdict from_margin(double m) {
    return DominanceVerdict{m > 0.0, m};
  }
};

// Gaussian quantile factor r and credibility level alpha, tied together
// by alpha = erf(r/sqrt(2)). The Gaussian step can be a non-conservative
// approximation for small samples.
struct CredibleParams {
  double r;
  double alpha;

  CredibleParams(double r_, double alpha_);
  static CredibleParams from_alpha(double alpha);
  static CredibleParams from_r(double r);
};

// Inverse error function, accurate to better than 1e-10 on (-1, 1).
double inverse_erf(double x);

// Edge a over edge b when the edges share no vertex: compares the
// conservative lower MI bound of a against the conservative upper MI
// bound of b. Both tables must come from the same sample (equal n).
DominanceVerdict dominates_disjoint(const ContingencyTable& pair_a,
                                    const ContingencyTable& pair_b,
                                    const IdmConfig& cfg);

// Edge a = (axis0, axis1) over edge b = (axis1, axis2) of a 3-d table:
// certified lower bound on min over the joint simplex of I^a - I^b,
// with the linear term minimized by the two-stage scan that costs
// O(d0*d1 + d1*d2) after marginalization.
DominanceVerdict dominates_shared(const ContingencyTable& triple,
                                  const IdmConfig& cfg);

// Leading-order posterior variance of the mutual information at prior
// mean t; the O(n^-2) remainder is dropped.
double mi_variance(const ContingencyTable& pair, std::span<const double> t,
                   double s);

// Var[I^b - I^a] = Var[I^b] + Var[I^a] - 2 Cov[I^b, I^a] for the two
// overlapping edges of a 3-d table, to the same leading order.
double mi_diff_variance(const ContingencyTable& triple,
                        std::span<const double> t, double s);

// The expectation-level outer interval widened by r*sqrt(Var_{t*}[I]) on
// both sides, so the true MI is covered with posterior probability at
// least alpha (up to the Gaussian approximation). The variance is
// evaluated at t* only; for very small n its variation with t is not
// negligible and the limit inherits that approximation.
Interval credible_interval(const ContingencyTable& pair, const IdmConfig& cfg);

// Credible-level dominance: the expectation-level margin reduced by
// r*sqrt(Var[I^a - I^b]). Strictly more conservative than the
// expectation-level tests; r = 0 reduces to them exactly.
DominanceVerdict dominates_credible(const ContingencyTable& pair_a,
                                    const ContingencyTable& pair_b,
                                    const IdmConfig& cfg,
                                    const CredibleParams& cp);
DominanceVerdict dominates_credible(const ContingencyTable& triple,
                                    const IdmConfig& cfg,
                                    const CredibleParams& cp);

}  // namespace strongtrees

#endif  // STRONGTREES_DOMINANCE_HPP
