#include "strongtrees/idm_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strongtrees/special_functions.hpp"

namespace strongtrees {

namespace {

void check_simplex(std::span<const double> t, std::int64_t cells) {
  if (static_cast<std::int64_t>(t.size()) != cells) {
    throw std::invalid_argument("t has wrong number of cells");
  }
  double sum = 0.0;
  for (double x : t) {
    if (x < -1e-12 || x > 1.0 + 1e-12) {
      throw std::invalid_argument("t entry outside [0, 1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("t does not sum to 1");
  }
}

std::vector<double> make_tstar(const ContingencyTable& counts,
                               const IdmConfig& cfg) {
  const std::int64_t cells = counts.cell_count();
  std::vector<double> t(cells);
  if (cfg.tstar_rule == TStarRule::uniform) {
    std::fill(t.begin(), t.end(), 1.0 / static_cast<double>(cells));
  } else {
    if (counts.n == 0) {
      throw std::invalid_argument(
          "empirical t* requires a nonempty sample; use the uniform rule");
    }
    for (std::int64_t c = 0; c < cells; ++c) {
      t[c] = static_cast<double>(counts.counts[c]) /
             static_cast<double>(counts.n);
    }
  }
  return t;
}

// Smallest index wins ties, per the row-major tie-break contract.
template <typename T>
std::size_t arg_min(const std::vector<T>& v) {
  return std::min_element(v.begin(), v.end()) - v.begin();
}
template <typename T>
std::size_t arg_max(const std::vector<T>& v) {
  return std::max_element(v.begin(), v.end()) - v.begin();
}

Interval ordered_interval(double a, double b, BoundKind kind) {
  auto [lo, hi] = std::minmax(a, b);
  return Interval::make(lo, hi, kind);
}

struct MiPieces {
  MiExpansion ex;
  std::size_t arg_g_min = 0;
  std::size_t arg_g_max = 0;
};

MiPieces compute_mi_pieces(const ContingencyTable& pair, const IdmConfig& cfg) {
  cfg.validate();
  if (pair.dims() != 2) {
    throw std::invalid_argument("mi bounds: table must be 2-d");
  }
  MiPieces out;
  const int d0 = pair.shape[0];
  const int d1 = pair.shape[1];
  if (d0 == 1 || d1 == 1) {
    out.ex.trivially_zero = true;
    return out;
  }

  const HContext ctx{pair.n, cfg.s};
  const double ns = ctx.total();
  const double sigma = cfg.s / ns;
  const ExpansionPoint ep = ExpansionPoint::make(pair, cfg);
  const ContingencyTable rowc = pair.marginal(0);
  const ContingencyTable colc = pair.marginal(1);

  std::vector<double> trow(d0, 0.0), tcol(d1, 0.0);
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      trow[i] += ep.tstar[i * d1 + j];
      tcol[j] += ep.tstar[i * d1 + j];
    }
  }

  MiExpansion& ex = out.ex;
  std::vector<double> hp_row(d0), hp_col(d1);
  for (int i = 0; i < d0; ++i) {
    const double u = (static_cast<double>(rowc.at(i)) + cfg.s * trow[i]) / ns;
    ex.i0 += h_family(PolyOrder::psi, u, ctx);
    hp_row[i] = h_family(PolyOrder::psi_prime, u, ctx);
  }
  for (int j = 0; j < d1; ++j) {
    const double u = (static_cast<double>(colc.at(j)) + cfg.s * tcol[j]) / ns;
    ex.i0 += h_family(PolyOrder::psi, u, ctx);
    hp_col[j] = h_family(PolyOrder::psi_prime, u, ctx);
  }

  std::vector<double> g(pair.cell_count());
  double sum_tg = 0.0;
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * d1 + j;
      ex.i0 -= h_family(PolyOrder::psi, ep.ustar[c], ctx);
      g[c] = hp_row[i] + hp_col[j] -
             h_family(PolyOrder::psi_prime, ep.ustar[c], ctx);
      sum_tg += ep.tstar[c] * g[c];
    }
  }
  out.arg_g_min = arg_min(g);
  out.arg_g_max = arg_max(g);
  ex.i1_lo = sigma * (g[out.arg_g_min] - sum_tg);
  ex.i1_hi = sigma * (g[out.arg_g_max] - sum_tg);

  double hr_left = 0.0, hr_right = 0.0, hr_joint = 0.0;
  for (int i = 0; i < d0; ++i) {
    hr_left += h_family(PolyOrder::psi_second,
                        static_cast<double>(rowc.at(i)) / ns, ctx);
  }
  for (int j = 0; j < d1; ++j) {
    hr_right += h_family(PolyOrder::psi_second,
                         static_cast<double>(colc.at(j)) / ns, ctx);
  }
  for (std::int64_t c = 0; c < pair.cell_count(); ++c) {
    hr_joint += h_family(PolyOrder::psi_second,
                         static_cast<double>(pair.counts[c]) / ns, ctx);
  }
  ex.ir_lb = 0.5 * sigma * sigma * (hr_left + hr_right);
  ex.ir_ub = -0.5 * sigma * sigma * hr_joint;
  return out;
}

}  // namespace

void IdmConfig::validate() const {
  if (!(s > 0.0)) throw std::invalid_argument("IdmConfig: s must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("IdmConfig: alpha must lie in (0, 1)");
  }
}

Interval Interval::make(double lo, double hi, BoundKind kind) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("Interval: lo must not exceed hi");
  }
  return Interval{lo, hi, kind};
}

ExpansionPoint ExpansionPoint::make(const ContingencyTable& counts,
                                    const IdmConfig& cfg) {
  cfg.validate();
  ExpansionPoint ep;
  ep.tstar = make_tstar(counts, cfg);
  const double ns = static_cast<double>(counts.n) + cfg.s;
  ep.ustar.resize(ep.tstar.size());
  for (std::size_t c = 0; c < ep.tstar.size(); ++c) {
    ep.ustar[c] =
        (static_cast<double>(counts.counts[c]) + cfg.s * ep.tstar[c]) / ns;
  }
  return ep;
}

double expected_entropy(const ContingencyTable& counts,
                        std::span<const double> t, double s) {
  if (counts.dims() != 1) {
    throw std::invalid_argument("expected_entropy: table must be 1-d");
  }
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  check_simplex(t, counts.cell_count());
  const HContext ctx{counts.n, s};
  const double ns = ctx.total();
  double sum = 0.0;
  for (std::int64_t c = 0; c < counts.cell_count(); ++c) {
    const double u = (static_cast<double>(counts.counts[c]) + s * t[c]) / ns;
    sum += h_family(PolyOrder::psi, std::clamp(u, 0.0, 1.0), ctx);
  }
  return sum;
}

BoundsPair entropy_interval(const ContingencyTable& counts,
                            const IdmConfig& cfg) {
  cfg.validate();
  if (counts.dims() != 1) {
    throw std::invalid_argument("entropy_interval: table must be 1-d");
  }
  const int d = counts.shape[0];
  if (d == 1) {
    // One-point simplex: the entropy is exactly zero for every t.
    return BoundsPair{Interval::make(0.0, 0.0, BoundKind::outer),
                      Interval::make(0.0, 0.0, BoundKind::inner)};
  }

  const HContext ctx{counts.n, cfg.s};
  const double ns = ctx.total();
  const double sigma = cfg.s / ns;
  const ExpansionPoint ep = ExpansionPoint::make(counts, cfg);

  double h0 = 0.0;
  double sum_t_hprime = 0.0;
  std::vector<double> hprime(d);
  for (int i = 0; i < d; ++i) {
    h0 += h_family(PolyOrder::psi, ep.ustar[i], ctx);
    hprime[i] = h_family(PolyOrder::psi_prime, ep.ustar[i], ctx);
    sum_t_hprime += ep.tstar[i] * hprime[i];
  }

  // The linear term is extremal at simplex vertices: the upper bound puts
  // all prior mass on the cell with the minimal count, the lower bound on
  // the maximal count.
  const std::size_t i_min_count = arg_min(counts.counts);
  const std::size_t i_max_count = arg_max(counts.counts);
  const double h1_hi = sigma * (hprime[i_min_count] - sum_t_hprime);
  const double h1_lo = sigma * (hprime[i_max_count] - sum_t_hprime);

  double hr_lb = 0.0;
  for (int i = 0; i < d; ++i) {
    hr_lb += h_family(PolyOrder::psi_second,
                      static_cast<double>(counts.counts[i]) / ns, ctx);
  }
  hr_lb *= 0.5 * sigma * sigma;

  const Interval outer =
      Interval::make(h0 + h1_lo + hr_lb, h0 + h1_hi, BoundKind::outer);

  auto witness = [&](std::size_t vertex) {
    std::vector<double> t(d, 0.0);
    t[vertex] = 1.0;
    return expected_entropy(counts, t, cfg.s);
  };
  const Interval inner = ordered_interval(
      witness(i_max_count), witness(i_min_count), BoundKind::inner);
  return BoundsPair{outer, inner};
}

double expected_mi(const ContingencyTable& pair, std::span<const double> t,
                   double s) {
  if (pair.dims() != 2) {
    throw std::invalid_argument("expected_mi: table must be 2-d");
  }
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  check_simplex(t, pair.cell_count());
  const int d0 = pair.shape[0];
  const int d1 = pair.shape[1];
  const HContext ctx{pair.n, s};
  const double ns = ctx.total();

  std::vector<double> urow(d0, 0.0), ucol(d1, 0.0);
  double joint = 0.0;
  for (int i = 0; i < d0; ++i) {
    for (int j = 0; j < d1; ++j) {
      const double u =
          (static_cast<double>(pair.at(i, j)) + s * t[i * d1 + j]) / ns;
      joint += h_family(PolyOrder::psi, std::clamp(u, 0.0, 1.0), ctx);
      urow[i] += u;
      ucol[j] += u;
    }
  }
  double left = 0.0, right = 0.0;
  for (int i = 0; i < d0; ++i) {
    left += h_family(PolyOrder::psi, std::clamp(urow[i], 0.0, 1.0), ctx);
  }
  for (int j = 0; j < d1; ++j) {
    right += h_family(PolyOrder::psi, std::clamp(ucol[j], 0.0, 1.0), ctx);
  }
  return left + right - joint;
}

MiExpansion mi_expansion(const ContingencyTable& pair, const IdmConfig& cfg) {
  return compute_mi_pieces(pair, cfg).ex;
}

BoundsPair mi_interval(const ContingencyTable& pair, const IdmConfig& cfg) {
  const MiPieces pieces = compute_mi_pieces(pair, cfg);
  if (pieces.ex.trivially_zero) {
    return BoundsPair{Interval::make(0.0, 0.0, BoundKind::outer),
                      Interval::make(0.0, 0.0, BoundKind::inner)};
  }
  const Interval outer = Interval::make(pieces.ex.outer_lo(),
                                        pieces.ex.outer_hi(), BoundKind::outer);
  auto witness = [&](std::size_t vertex) {
    std::vector<double> t(pair.cell_count(), 0.0);
    t[vertex] = 1.0;
    return expected_mi(pair, t, cfg.s);
  };
  const Interval inner = ordered_interval(
      witness(pieces.arg_g_min), witness(pieces.arg_g_max), BoundKind::inner);
  return BoundsPair{outer, inner};
}

}  // namespace strongtrees
