#include "strongtrees/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "strongtrees/special_functions.hpp"

namespace strongtrees {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Shared-vertex margin per the O(sigma^2) expansion of I^a - I^b over the
// joint simplex: the linear term decomposes into a row part A(i,j) and a
// column part B(j,k), so its minimum is found in O(d0*d1 + d1*d2).
double shared_margin(const ContingencyTable& triple, const IdmConfig& cfg) {
  cfg.validate();
  if (triple.dims() != 3) {
    throw std::invalid_argument("dominates_shared: table must be 3-d");
  }
  const int d0 = triple.shape[0];
  const int d1 = triple.shape[1];
  const int d2 = triple.shape[2];
  const HContext ctx{triple.n, cfg.s};
  const double ns = ctx.total();
  const double sigma = cfg.s / ns;

  const ExpansionPoint ep = ExpansionPoint::make(triple, cfg);
  const ContingencyTable c0 = triple.marginal(0);
  const ContingencyTable c1 = triple.marginal(1);
  const ContingencyTable c2 = triple.marginal(2);
  const ContingencyTable c01 = triple.pair_marginal(0, 1);
  const ContingencyTable c12 = triple.pair_marginal(1, 2);

  std::vector<double> t0(d0, 0.0), t1(d1, 0.0), t2(d2, 0.0);
  std::vector<double> t01(static_cast<std::size_t>(d0) * d1, 0.0);
  std::vector<double> t12(static_cast<std::size_t>(d1) * d2, 0.0);
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      for (int k = 0; k < d2; ++k) {
        const double tv = ep.tstar[(static_cast<std::size_t>(i) * d1 + j) * d2 + k];
        t0[i] += tv;
        t1[j] += tv;
        t2[k] += tv;
        t01[static_cast<std::size_t>(i) * d1 + j] += tv;
        t12[static_cast<std::size_t>(j) * d2 + k] += tv;
      }
    }
  }

  auto ustar = [&](std::int64_t count, double t) {
    return (static_cast<double>(count) + cfg.s * t) / ns;
  };

  std::vector<double> hp0(d0), hp2(d2);
  double i0a = 0.0, i0b = 0.0;
  for (int i = 0; i < d0; ++i) {
    const double u = ustar(c0.at(i), t0[i]);
    i0a += h_family(PolyOrder::psi, u, ctx);
    hp0[i] = h_family(PolyOrder::psi_prime, u, ctx);
  }
  for (int j = 0; j < d1; ++j) {
    const double h1 = h_family(PolyOrder::psi, ustar(c1.at(j), t1[j]), ctx);
    i0a += h1;
    i0b += h1;
  }
  for (int k = 0; k < d2; ++k) {
    const double u = ustar(c2.at(k), t2[k]);
    i0b += h_family(PolyOrder::psi, u, ctx);
    hp2[k] = h_family(PolyOrder::psi_prime, u, ctx);
  }

  // A(i,j) = h'(u*_i..) - h'(u*_ij.),  B(j,k) = h'(u*_.jk) - h'(u*_..k)
  std::vector<double> a(static_cast<std::size_t>(d0) * d1);
  std::vector<double> b(static_cast<std::size_t>(d1) * d2);
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * d1 + j;
      const double u = ustar(c01.at(i, j), t01[c]);
      i0a -= h_family(PolyOrder::psi, u, ctx);
      a[c] = hp0[i] - h_family(PolyOrder::psi_prime, u, ctx);
    }
  }
  for (int j = 0; j < d1; ++j) {
    for (int k = 0; k < d2; ++k) {
      const std::size_t c = static_cast<std::size_t>(j) * d2 + k;
      const double u = ustar(c12.at(j, k), t12[c]);
      i0b -= h_family(PolyOrder::psi, u, ctx);
      b[c] = h_family(PolyOrder::psi_prime, u, ctx) - hp2[k];
    }
  }

  double lin_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d1; ++j) {
    double min_a = std::numeric_limits<double>::infinity();
    double min_b = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d0; ++i) {
      min_a = std::min(min_a, a[static_cast<std::size_t>(i) * d1 + j]);
    }
    for (int k = 0; k < d2; ++k) {
      min_b = std::min(min_b, b[static_cast<std::size_t>(j) * d2 + k]);
    }
    lin_min = std::min(lin_min, min_a + min_b);
  }
  double const_term = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) const_term += t01[c] * a[c];
  for (std::size_t c = 0; c < b.size(); ++c) const_term += t12[c] * b[c];
  const double i1_diff_lo = sigma * (lin_min - const_term);

  double hr_a = 0.0;
  for (int i = 0; i < d0; ++i) {
    hr_a += h_family(PolyOrder::psi_second,
                     static_cast<double>(c0.at(i)) / ns, ctx);
  }
  for (int j = 0; j < d1; ++j) {
    hr_a += h_family(PolyOrder::psi_second,
                     static_cast<double>(c1.at(j)) / ns, ctx);
  }
  double hr_b_joint = 0.0;
  for (std::int64_t c = 0; c < c12.cell_count(); ++c) {
    hr_b_joint += h_family(PolyOrder::psi_second,
                           static_cast<double>(c12.counts[c]) / ns, ctx);
  }
  const double ira_lb = 0.5 * sigma * sigma * hr_a;
  const double irb_ub = -0.5 * sigma * sigma * hr_b_joint;

  return i0a - i0b + i1_diff_lo + ira_lb - irb_ub;
}

double variance_from_us(std::span<const double> u, int d0, int d1, double ns) {
  std::vector<double> urow(d0, 0.0), ucol(d1, 0.0);
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      urow[i] += u[static_cast<std::size_t>(i) * d1 + j];
      ucol[j] += u[static_cast<std::size_t>(i) * d1 + j];
    }
  }
  double mean = 0.0, second = 0.0;
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      const double uij = u[static_cast<std::size_t>(i) * d1 + j];
      if (uij <= 0.0) continue;
      const double l = std::log(uij / (urow[i] * ucol[j]));
      mean += uij * l;
      second += uij * l * l;
    }
  }
  return (second - mean * mean) / ns;
}

}  // namespace

double inverse_erf(double x) {
  if (!(x > -1.0 && x < 1.0)) {
    throw std::domain_error("inverse_erf: argument must lie in (-1, 1)");
  }
  if (x == 0.0) return 0.0;
  const double target = std::abs(x);
  double lo = 0.0, hi = 6.0;
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid) < target ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double err = std::erf(r) - target;
    const double deriv = 2.0 / std::sqrt(kPi) * std::exp(-r * r);
    const double step = err / deriv;
    r -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return x < 0.0 ? -r : r;
}

CredibleParams::CredibleParams(double r_, double alpha_) : r(r_), alpha(alpha_) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("CredibleParams: r must be nonnegative");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("CredibleParams: alpha must lie in [0, 1)");
  }
  if (std::abs(alpha - std::erf(r / std::sqrt(2.0))) > 1e-6) {
    throw std::invalid_argument(
        "CredibleParams: alpha and r are inconsistent (alpha = erf(r/sqrt(2)))");
  }
}

CredibleParams CredibleParams::from_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("CredibleParams: alpha must lie in (0, 1)");
  }
  return CredibleParams(std::sqrt(2.0) * inverse_erf(alpha), alpha);
}

CredibleParams CredibleParams::from_r(double r) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("CredibleParams: r must be nonnegative");
  }
  return CredibleParams(r, std::erf(r / std::sqrt(2.0)));
}

DominanceVerdict dominates_disjoint(const ContingencyTable& pair_a,
                                    const ContingencyTable& pair_b,
                                    const IdmConfig& cfg) {
  if (pair_a.n != pair_b.n) {
    throw std::invalid_argument(
        "dominates_disjoint: tables must come from one sample (equal n)");
  }
  const MiExpansion ea = mi_expansion(pair_a, cfg);
  const MiExpansion eb = mi_expansion(pair_b, cfg);
  return DominanceVerdict::from_margin(ea.outer_lo() - eb.outer_hi());
}

DominanceVerdict dominates_shared(const ContingencyTable& triple,
                                  const IdmConfig& cfg) {
  return DominanceVerdict::from_margin(shared_margin(triple, cfg));
}

double mi_variance(const ContingencyTable& pair, std::span<const double> t,
                   double s) {
  if (pair.dims() != 2) {
    throw std::invalid_argument("mi_variance: table must be 2-d");
  }
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  const double ns = static_cast<double>(pair.n) + s;
  std::vector<double> u(pair.cell_count());
  for (std::int64_t c = 0; c < pair.cell_count(); ++c) {
    u[c] = (static_cast<double>(pair.counts[c]) + s * t[c]) / ns;
  }
  return variance_from_us(u, pair.shape[0], pair.shape[1], ns);
}

double mi_diff_variance(const ContingencyTable& triple,
                        std::span<const double> t, double s) {
  if (triple.dims() != 3) {
    throw std::invalid_argument("mi_diff_variance: table must be 3-d");
  }
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  const int d0 = triple.shape[0];
  const int d1 = triple.shape[1];
  const int d2 = triple.shape[2];
  const double ns = static_cast<double>(triple.n) + s;

  std::vector<double> u(triple.cell_count());
  std::vector<double> ua(static_cast<std::size_t>(d0) * d1, 0.0);
  std::vector<double> ub(static_cast<std::size_t>(d1) * d2, 0.0);
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      for (int k = 0; k < d2; ++k) {
        const std::size_t c = (static_cast<std::size_t>(i) * d1 + j) * d2 + k;
        u[c] = (static_cast<double>(triple.counts[c]) + s * t[c]) / ns;
        ua[static_cast<std::size_t>(i) * d1 + j] += u[c];
        ub[static_cast<std::size_t>(j) * d2 + k] += u[c];
      }
    }
  }

  auto log_ratios = [](std::span<const double> m, int r, int c) {
    std::vector<double> row(r, 0.0), col(c, 0.0), l(m.size(), 0.0);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) {
        row[i] += m[static_cast<std::size_t>(i) * c + j];
        col[j] += m[static_cast<std::size_t>(i) * c + j];
      }
    }
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * c + j;
        if (m[idx] > 0.0) l[idx] = std::log(m[idx] / (row[i] * col[j]));
      }
    }
    return l;
  };
  const std::vector<double> la = log_ratios(ua, d0, d1);
  const std::vector<double> lb = log_ratios(ub, d1, d2);

  double mean_a = 0.0, second_a = 0.0, mean_b = 0.0, second_b = 0.0;
  for (std::size_t c = 0; c < ua.size(); ++c) {
    mean_a += ua[c] * la[c];
    second_a += ua[c] * la[c] * la[c];
  }
  for (std::size_t c = 0; c < ub.size(); ++c) {
    mean_b += ub[c] * lb[c];
    second_b += ub[c] * lb[c] * lb[c];
  }
  double cross = 0.0;
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      for (int k = 0; k < d2; ++k) {
        cross += u[(static_cast<std::size_t>(i) * d1 + j) * d2 + k] *
                 la[static_cast<std::size_t>(i) * d1 + j] *
                 lb[static_cast<std::size_t>(j) * d2 + k];
      }
    }
  }
  const double var_a = (second_a - mean_a * mean_a) / ns;
  const double var_b = (second_b - mean_b * mean_b) / ns;
  const double cov = (cross - mean_a * mean_b) / ns;
  return var_b + var_a - 2.0 * cov;
}

Interval credible_interval(const ContingencyTable& pair, const IdmConfig& cfg) {
  const BoundsPair bounds = mi_interval(pair, cfg);
  const ExpansionPoint ep = ExpansionPoint::make(pair, cfg);
  const double var = std::max(0.0, mi_variance(pair, ep.tstar, cfg.s));
  const double widen = CredibleParams::from_alpha(cfg.alpha).r * std::sqrt(var);
  return Interval::make(bounds.outer.lo - widen, bounds.outer.hi + widen,
                        BoundKind::outer);
}

DominanceVerdict dominates_credible(const ContingencyTable& pair_a,
                                    const ContingencyTable& pair_b,
                                    const IdmConfig& cfg,
                                    const CredibleParams& cp) {
  const double base = dominates_disjoint(pair_a, pair_b, cfg).margin;
  // Disjoint edges carry independent posteriors, so the difference
  // variance is the plain sum.
  const ExpansionPoint ea = ExpansionPoint::make(pair_a, cfg);
  const ExpansionPoint eb = ExpansionPoint::make(pair_b, cfg);
  const double var = std::max(0.0, mi_variance(pair_a, ea.tstar, cfg.s)) +
                     std::max(0.0, mi_variance(pair_b, eb.tstar, cfg.s));
  return DominanceVerdict::from_margin(base - cp.r * std::sqrt(var));
}

DominanceVerdict dominates_credible(const ContingencyTable& triple,
                                    const IdmConfig& cfg,
                                    const CredibleParams& cp) {
  const double base = shared_margin(triple, cfg);
  const ExpansionPoint ep = ExpansionPoint::make(triple, cfg);
  const double var =
      std::max(0.0, mi_diff_variance(triple, ep.tstar, cfg.s));
  return DominanceVerdict::from_margin(base - cp.r * std::sqrt(var));
}

}  // namespace strongtrees
