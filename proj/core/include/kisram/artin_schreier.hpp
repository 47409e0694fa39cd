#pragma once

#include <cstddef>
#include <vector>

#include "kisram/newton_polygon.hpp"
#include "kisram/series.hpp"

namespace kisram {

struct ASRootsOptions {
  /// Largest residue-field degree the solver may extend to.
  unsigned extension_cap = 12;
  /// Hard limit on Newton-Puiseux steps per chain.
  std::size_t max_steps = 4096;
  /// Lenient mode: when the target lies beyond what any finite root can reach,
  /// return roots certified as far as this many additional steps allow instead
  /// of raising PrecisionExhausted.
  bool lenient = false;
  std::size_t frontier_steps = 12;
};

/// Roots of X^p - a X - b.
struct ASRoots {
  FieldPtr field;
  /// particular + lambda * homogeneous for lambda = 0 .. p-1, or the single
  /// p-th root of b when a = 0.
  std::vector<PuiseuxSeries> roots;
  PuiseuxSeries particular;
  /// Nonzero root of X^p - a X (zero in the inseparable case).
  PuiseuxSeries homogeneous;
  unsigned multiplicity = 1;
  /// Certified lower bound of v(r^p - a r - b) over all returned roots.
  ExtRational residual_valuation;

  bool inseparable() const { return multiplicity > 1; }
};

/// Solves X^p = a X + b by Newton-Puiseux iteration, extending the residue
/// field when a leading coefficient equation c^p - alpha c = beta has no
/// solution. Every root r satisfies v(r^p - a r - b) >= target.
///
/// When b has a term below p v(a)/(p-1), no finite series reaches a residual
/// of valuation p v(a)/(p-1); such targets raise PrecisionExhausted unless
/// options.lenient is set.
ASRoots as_roots(const PuiseuxSeries& a, const PuiseuxSeries& b, const ExtRational& target,
                 const ASRootsOptions& options = {});

/// x^p - a x - b.
PuiseuxSeries as_residual(const PuiseuxSeries& x, const PuiseuxSeries& a, const PuiseuxSeries& b);

/// Newton polygon of X^p - a X - b from the certified valuations of a and b
/// (points (0, v(b)), (1, v(a)), (p, 0), omitting zero coefficients).
NewtonPolygon as_newton_polygon(const PuiseuxSeries& a, const PuiseuxSeries& b);

}  // namespace kisram
