#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kisram {

/// The finite field F_{p^m} = F_p[g]/(f(g)), where f is the smallest monic
/// irreducible polynomial of degree m in the order of its coefficient code
/// c_0 + c_1 p + ... + c_{m-1} p^{m-1}.
///
/// Elements are the integers 0 .. p^m - 1; the base-p digits of an element are
/// the coefficients of its polynomial representative in g. Instances are
/// obtained through finite_field() and are unique per (p, m), so fields may be
/// compared by pointer.
class FiniteField {
 public:
  using Element = std::uint64_t;

  FiniteField(std::uint32_t p, std::uint32_t degree);
  FiniteField(const FiniteField&) = delete;
  FiniteField& operator=(const FiniteField&) = delete;

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return m_; }
  std::uint64_t order() const { return q_; }
  /// Coefficients c_0 .. c_m of the defining polynomial (c_m = 1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Element zero() const { return 0; }
  Element one() const { return 1; }
  /// The class of g; only meaningful for m > 1.
  Element generator() const { return m_ > 1 ? p_ : 1; }
  Element from_integer(long long v) const;

  Element add(Element a, Element b) const;
  Element sub(Element a, Element b) const;
  Element neg(Element a) const;
  Element mul(Element a, Element b) const;
  Element inv(Element a) const;
  Element pow(Element a, std::uint64_t k) const;
  Element frobenius(Element a) const { return pow(a, p_); }
  /// Unique p-th root (the field is perfect): a^{p^{m-1}}.
  Element pth_root(Element a) const;

  bool in_prime_field(Element a) const { return a < p_; }
  std::vector<std::uint32_t> digits(Element a) const;
  Element from_digits(std::span<const std::uint32_t> digits) const;

  /// Solutions of c^p - a*c = b, computed as an F_p-linear system.
  struct LinearizedSolution {
    std::optional<Element> particular;  // nullopt when there is no solution
    std::vector<Element> kernel;        // F_p-basis of {c : c^p = a*c}
  };
  LinearizedSolution solve_linearized(Element a, Element b) const;

  /// F_p-basis of the fixed points of c -> c^{p^k}, i.e. the subfield F_{p^k}.
  std::vector<Element> fixed_field_basis(std::uint32_t k) const;

  /// Text form: an integer for prime-field elements, otherwise `g`, `2*g^3`
  /// or `(1 + g^2)`.
  std::string format(Element a) const;

 private:
  Element mul_slow(Element a, Element b) const;
  void build_tables();

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint64_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<Element> exp_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

/// Memoized, thread-safe access to F_{p^m}. Throws SemanticError for non-prime p.
FieldPtr finite_field(std::uint32_t p, std::uint32_t degree);

bool is_prime(std::uint64_t n);

/// Image of x under the embedding F_{p^m} -> F_{p^M} (m | M). Embeddings form a
/// compatible system: embedding through an intermediate field gives the same result.
FiniteField::Element embed(const FieldPtr& from, FiniteField::Element x, const FieldPtr& to);

/// The larger of two fields when one contains the other; IncompatibleFields otherwise.
FieldPtr common_field(const FieldPtr& a, const FieldPtr& b);

}  // namespace kisram
