#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace kisram {

/// Multivariate integer polynomial in X_0..X_{n-1}, Y_0..Y_{n-1}: exponent
/// vector (X exponents then Y exponents) -> coefficient.
using IntPoly = std::map<std::vector<std::uint32_t>, mpz_class>;

/// Universal Witt addition and multiplication polynomials S_m, P_m (m < n)
/// obtained from the ghost-component recursion over Z.
class WittPolynomialTable {
 public:
  struct ReducedTerm {
    std::vector<std::uint32_t> exponents;
    std::uint32_t coeff;  // in 1 .. p-1
  };

  /// Builds the table; throws Unsupported for n > 4 and std::logic_error if a
  /// ghost division is not exact.
  WittPolynomialTable(std::uint32_t p, std::uint32_t n);

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  const IntPoly& add_poly(std::uint32_t m) const { return add_.at(m); }
  const IntPoly& mul_poly(std::uint32_t m) const { return mul_.at(m); }
  /// Coefficients reduced mod p, zero terms dropped.
  const std::vector<ReducedTerm>& add_reduced(std::uint32_t m) const { return add_red_.at(m); }
  const std::vector<ReducedTerm>& mul_reduced(std::uint32_t m) const { return mul_red_.at(m); }

  /// Re-expands w_m(S) = w_m(X) + w_m(Y) and w_m(P) = w_m(X) w_m(Y) for all m.
  bool verify_ghost() const;

 private:
  std::uint32_t p_;
  std::uint32_t n_;
  std::vector<IntPoly> add_;
  std::vector<IntPoly> mul_;
  std::vector<std::vector<ReducedTerm>> add_red_;
  std::vector<std::vector<ReducedTerm>> mul_red_;
};

using WittTablePtr = std::shared_ptr<const WittPolynomialTable>;

/// Memoized table; safe under concurrent first access.
WittTablePtr witt_table(std::uint32_t p, std::uint32_t n);

/// `X_1 + Y_1 - X_0*Y_0` style rendering (variables X_j, Y_j).
std::string format_poly(const IntPoly& poly, std::uint32_t n);

}  // namespace kisram
