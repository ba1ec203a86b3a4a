#include "strongtrees/special_functions.hpp"

#include <cmath>

namespace strongtrees {

namespace {

// B_2, B_4, ..., B_26.
constexpr double kBernoulli[] = {
    1.0 / 6.0,           -1.0 / 30.0,          1.0 / 42.0,
    -1.0 / 30.0,         5.0 / 66.0,           -691.0 / 2730.0,
    7.0 / 6.0,           -3617.0 / 510.0,      43867.0 / 798.0,
    -174611.0 / 330.0,   854513.0 / 138.0,     -236364091.0 / 2730.0,
    8553103.0 / 6.0,
};
constexpr int kBernoulliTerms = 13;

// Arguments are shifted upward past this point before the asymptotic
// series is applied; below it the series is not accurate enough.
constexpr double kAsymptoticMin = 6.0;

void check_positive(double z) {
  if (!(z > 0.0)) {
    throw std::domain_error("polygamma: argument must be positive");
  }
}

// psi(z) ~ log z - 1/(2z) - sum_k B_2k / (2k z^2k)
double digamma_asymptotic(double z) {
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  double result = std::log(z) - 0.5 * inv;
  double power = inv2;
  for (int k = 0; k < kBernoulliTerms; ++k) {
    result -= kBernoulli[k] / (2.0 * (k + 1)) * power;
    power *= inv2;
  }
  return result;
}

// psi'(z) ~ 1/z + 1/(2z^2) + sum_k B_2k / z^(2k+1)
double trigamma_asymptotic(double z) {
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  double result = inv + 0.5 * inv2;
  double power = inv2 * inv;
  for (int k = 0; k < kBernoulliTerms; ++k) {
    result += kBernoulli[k] * power;
    power *= inv2;
  }
  return result;
}

// psi''(z) ~ -1/z^2 - 1/z^3 - sum_k (2k+1) B_2k / z^(2k+2)
double tetragamma_asymptotic(double z) {
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  double result = -inv2 - inv2 * inv;
  double power = inv2 * inv2;
  for (int k = 0; k < kBernoulliTerms; ++k) {
    result -= (2.0 * (k + 1) + 1.0) * kBernoulli[k] * power;
    power *= inv2;
  }
  return result;
}

}  // namespace

double digamma(double z) {
  check_positive(z);
  double shift = 0.0;
  while (z < kAsymptoticMin) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  return digamma_asymptotic(z) + shift;
}

double trigamma(double z) {
  check_positive(z);
  double shift = 0.0;
  while (z < kAsymptoticMin) {
    shift += 1.0 / (z * z);
    z += 1.0;
  }
  return trigamma_asymptotic(z) + shift;
}

double tetragamma(double z) {
  check_positive(z);
  double shift = 0.0;
  while (z < kAsymptoticMin) {
    shift -= 2.0 / (z * z * z);
    z += 1.0;
  }
  return tetragamma_asymptotic(z) + shift;
}

double polygamma(PolyOrder order, double z) {
  switch (order) {
    case PolyOrder::psi:
      return digamma(z);
    case PolyOrder::psi_prime:
      return trigamma(z);
    case PolyOrder::psi_second:
      return tetragamma(z);
  }
  throw std::invalid_argument("polygamma: order must be in {0, 1, 2}");
}

double h_family(PolyOrder order, double u, const HContext& ctx) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::domain_error("h_family: u must lie in [0, 1]");
  }
  const double ns = ctx.total();
  const double z = ns * u + 1.0;
  switch (order) {
    case PolyOrder::psi:
      if (u == 0.0 || u == 1.0) return 0.0;
      return u * (digamma(ns + 1.0) - digamma(z));
    case PolyOrder::psi_prime:
      return digamma(ns + 1.0) - digamma(z) - u * ns * trigamma(z);
    case PolyOrder::psi_second:
      return -2.0 * ns * trigamma(z) - u * ns * ns * tetragamma(z);
  }
  throw std::invalid_argument("h_family: order must be in {0, 1, 2}");
}

}  // namespace strongtrees
