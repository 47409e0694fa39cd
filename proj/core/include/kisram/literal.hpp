#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "kisram/kisin.hpp"
#include "kisram/series.hpp"
#include "kisram/witt.hpp"

namespace kisram {

/// Where a literal starts inside a file, for error positions.
struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Series literal: terms `c*u^q` joined by + or -, where c is an integer (mod p), `g`, `g^k`,
/// or a parenthesized sum of those; `u` alone means u^1, a bare coefficient means c*u^0, and
/// `O(u^q)` sets the precision. Exponents are multiplied by exponent_scale.
PuiseuxSeries parse_series(std::string_view text, const FieldPtr& field,
                           const Rational& exponent_scale = Rational(1), SourcePos pos = {});

/// `[s_0, s_1, ...]` with one series literal per Witt component.
WittVector parse_witt(std::string_view text, const WittTablePtr& table, const FieldPtr& field, SourcePos pos = {});

/// Polynomial literal with integer exponents and integer coefficients reduced mod `modulus`.
ZPoly parse_zpoly(std::string_view text, const mpz_class& modulus, SourcePos pos = {});

/// Series literal with exponents multiplied by `scale` (e.g. e, to write v_R series in Kisin u-exponents).
std::string format_series_scaled(const PuiseuxSeries& s, const Rational& scale);

}  // namespace kisram
