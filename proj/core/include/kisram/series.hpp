#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kisram/finite_field.hpp"
#include "kisram/rational.hpp"

namespace kisram {

/// One term c * u^q of a Puiseux series.
struct Term {
  Rational exponent;
  FiniteField::Element coeff;

  friend bool operator==(const Term&, const Term&) = default;
};

/// A Puiseux series sum c_q u^q over F_{p^m} known modulo terms of exponent
/// >= precision. Exponents are in v_R units. An infinite precision marks an
/// exact value. The field may be null only for the zero series, which then
/// adapts to whatever it is combined with.
class PuiseuxSeries {
 public:
  using Element = FiniteField::Element;

  /// Exact zero without a field.
  PuiseuxSeries() = default;
  explicit PuiseuxSeries(FieldPtr field, ExtRational precision = ExtRational::infinity());

  /// Normalizes: merges equal exponents, drops zero coefficients and terms at or beyond precision.
  static PuiseuxSeries from_terms(FieldPtr field, std::vector<Term> terms,
                                  ExtRational precision = ExtRational::infinity());
  static PuiseuxSeries monomial(FieldPtr field, Element coeff, Rational exponent,
                                ExtRational precision = ExtRational::infinity());
  static PuiseuxSeries constant(FieldPtr field, Element coeff);
  static PuiseuxSeries zero(FieldPtr field = nullptr, ExtRational precision = ExtRational::infinity());

  const FieldPtr& field() const { return field_; }
  const std::vector<Term>& terms() const { return terms_; }
  const ExtRational& precision() const { return precision_; }
  bool is_exact() const { return precision_.is_infinite(); }
  /// Certified zero: no terms and exact.
  bool is_zero() const { return terms_.empty() && is_exact(); }
  /// No known nonzero term below the precision.
  bool is_zero_to_precision() const { return terms_.empty(); }

  /// Certified valuation; +inf for the exact zero. Throws PrecisionExhausted when
  /// no term is known below a finite precision.
  ExtRational valuation() const;
  /// min(leading exponent, precision): a certified lower bound of the valuation.
  ExtRational valuation_bound() const;
  /// Coefficient of the leading term; throws PrecisionExhausted like valuation().
  Element leading_coefficient() const;
  /// Coefficient of u^q; throws PrecisionExhausted when q >= precision.
  Element coefficient(const Rational& q) const;

  PuiseuxSeries operator-() const;
  friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
  PuiseuxSeries& operator+=(const PuiseuxSeries& o) { return *this = *this + o; }
  PuiseuxSeries& operator-=(const PuiseuxSeries& o) { return *this = *this - o; }
  PuiseuxSeries& operator*=(const PuiseuxSeries& o) { return *this = *this * o; }

  /// Product whose terms at or beyond cap are discarded (precision <= cap).
  static PuiseuxSeries mul_truncated(const PuiseuxSeries& a, const PuiseuxSeries& b, const ExtRational& cap);

  /// x -> x^p: exponents and precision scale by p, coefficients raised to the p-th power.
  PuiseuxSeries frobenius() const;
  /// Inverse of frobenius().
  PuiseuxSeries pth_root() const;
  /// Multiplicative inverse of a unit (valuation 0). For inputs whose inverse is
  /// not a finite sum, the result is truncated at cap (default: own precision).
  PuiseuxSeries inverse(const ExtRational& cap = ExtRational::infinity()) const;
  PuiseuxSeries pow(std::uint64_t k) const;
  /// Multiplication by u^delta.
  PuiseuxSeries shifted(const Rational& delta) const;
  PuiseuxSeries scaled(Element c) const;
  PuiseuxSeries truncated(const ExtRational& cap) const;
  /// Coefficients mapped into a field containing the current one.
  PuiseuxSeries embedded(const FieldPtr& target) const;

  /// True when the two series agree below min(upto, both precisions).
  bool agrees_with(const PuiseuxSeries& o, const ExtRational& upto) const;

  /// Literal form, e.g. `1 + 2*u^1/2 + g*u^3 + O(u^4)`.
  std::string str() const;

  friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b);

 private:
  FieldPtr field_;
  std::vector<Term> terms_;
  ExtRational precision_;
};

/// Field of a + b, embedding both when one field contains the other.
FieldPtr common_field(const PuiseuxSeries& a, const PuiseuxSeries& b);

}  // namespace kisram
