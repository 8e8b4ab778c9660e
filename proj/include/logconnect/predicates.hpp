#pragma once

#include <algorithm>
#include <cmath>

#include "linalg.hpp"

namespace logconnect {

/// P_m: eigenvalues of M with equal m-th powers are equal. Scale invariant,
/// so it is a property of the projective class of M and one lift suffices.
inline bool property_Pm(const ComplexMatrix& m, int power, double tol = kEigenTolerance) {
  require_square(m, "matrix");
  if (power < 1) raise(ErrorCode::InvalidArgument, "exponent must be positive");
  if (std::abs(m.determinant()) < 1e-12 * std::pow(m.norm(), double(m.rows())))
    raise(ErrorCode::SingularMatrix, "P_m needs an invertible matrix");
  const auto ev = eigenvalues(m);
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      const double big = std::max(std::abs(ev[i]), std::abs(ev[j]));
      const double bigm = std::pow(big, power);
      const bool powers_equal = std::abs(std::pow(ev[i], power) - std::pow(ev[j], power)) < tol * bigm;
      const bool equal = std::abs(ev[i] - ev[j]) < tol * big;
      if (powers_equal && !equal) return false;
    }
  return true;
}

inline bool property_Pm(const ComplexMatrix& m, double tol = kEigenTolerance) {
  return property_Pm(m, int(m.rows()), tol);
}

/// No eigenvalue difference mu_1 - mu_2 is a positive integer. Both orderings
/// of every pair are examined.
inline bool nonresonant(const ComplexMatrix& a, double tol = kEigenTolerance) {
  require_square(a, "matrix");
  const auto ev = eigenvalues(a);
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (i == j) continue;
      const Complex d = ev[i] - ev[j];
      const double k = std::round(d.real());
      const double scale = std::max({1.0, std::abs(ev[i]), std::abs(ev[j])});
      if (k >= 1.0 && std::abs(d - Complex(k, 0.0)) <= tol * scale) return false;
    }
  return true;
}

}  // namespace logconnect
