#ifndef STRONGTREES_SPECIAL_FUNCTIONS_HPP
#define STRONGTREES_SPECIAL_FUNCTIONS_HPP

#include <cstdint>
#include <stdexcept>

namespace strongtrees {

// Derivative order of the psi function: psi, psi', psi''.
enum class PolyOrder : int {
  psi = 0,
  psi_prime = 1,
  psi_second = 2,
};

// Sample size and prior weight that parameterize the h family.
struct HContext {
  std::int64_t n = 0;
  double s = 1.0;

  HContext(std::int64_t n_, double s_) : n(n_), s(s_) {
    if (n < 0) throw std::invalid_argument("HContext: n must be nonnegative");
    if (!(s > 0.0)) throw std::invalid_argument("HContext: s must be positive");
  }

  // n + s, the Dirichlet posterior weight.
  double total() const { return static_cast<double>(n) + s; }
};

// psi(z), psi'(z) or psi''(z) for z > 0, relative error <= 1e-12.
// Throws std::domain_error for z <= 0 (poles and the undefined region).
double polygamma(PolyOrder order, double z);

double digamma(double z);
double trigamma(double z);
double tetragamma(double z);

// The per-cell entropy contribution h and its first two derivatives:
//
//   h(u)   = u*psi(n+s+1) - u*psi((n+s)u+1)
//   h'(u)  = psi(n+s+1) - psi((n+s)u+1) - u*(n+s)*psi'((n+s)u+1)
//   h''(u) = -2*(n+s)*psi'((n+s)u+1) - u*(n+s)^2*psi''((n+s)u+1)
//
// h is strictly concave on (0,1) and h'' is monotone increasing.
// Throws std::domain_error for u outside [0,1].
double h_family(PolyOrder order, double u, const HContext& ctx);

}  // namespace strongtrees

#endif  // STRONGTREES_SPECIAL_FUNCTIONS_HPP
