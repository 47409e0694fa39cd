#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kisram/kisin.hpp"

namespace kisram {

/// A Frobenius-compatible homomorphism M -> W_n(R), given by the images of the basis vectors.
struct Point {
  std::vector<WittVector> coords;
  /// Coefficients of the point in terms of the generators of its PointSet (each in [0, p^n)).
  std::vector<mpz_class> label;
  /// min over coordinates of the Witt lower index; +inf for the zero point.
  ExtRational lower_idx;
  /// Smallest precision among the coordinate components (slot 0).
  ExtRational precision;

  bool is_zero() const;
  FieldPtr field() const;
  /// `([c_0], [c_1], ...)` with Witt-vector literals.
  std::string str() const;
};

/// All points of a module: the Z/p^n-span of generators in echelon form.
struct PointSet {
  std::uint32_t p = 0;
  std::uint32_t n = 1;
  std::uint32_t h = 0;
  std::vector<Point> generators;
  /// Every point, ordered lexicographically by label.
  std::vector<Point> points;
  /// How the triangular form was reached: "triangular" or "canonical basis change".
  std::string method;

  std::size_t size() const { return points.size(); }
  FieldPtr field() const;
  /// Point with the given label.
  const Point& at(const std::vector<mpz_class>& label) const;
};

struct EnumerationOptions {
  unsigned extension_cap = 12;
};

/// Enumerates Hom_phi(M, W_n(R)). The matrix must become upper triangular under a
/// basis permutation, or (n = 1) after the canonical basis change of its prepared form.
/// Throws NotTriangularizable, ExtensionCapExceeded, PrecisionExhausted.
PointSet enumerate_points(const KisinModule& m, const EnumerationOptions& options = {});
/// n = 1 entry point.
PointSet enumerate_points_n1(const KisinModule& m, const EnumerationOptions& options = {});
/// Rank-one modules at level n >= 1 (f = 1), solved Witt slot by Witt slot.
PointSet enumerate_points_rank1_wn(const KisinModule& m, const EnumerationOptions& options = {});

struct HomCheck {
  bool ok = false;
  /// Smallest precision (in slot-0 units) at which the equations were compared.
  ExtRational precision;
  std::string failure;
};

/// Checks witt_frobenius(x_l) = sum_j x_j * sn_evaluate(A_{j,l}) for every column l,
/// to the certified precision of both sides.
HomCheck verify_hom_detail(const KisinModule& m, const std::vector<WittVector>& coords);
bool verify_hom(const KisinModule& m, const std::vector<WittVector>& coords);

/// For every point P and generator g_k: P + g_k is the point labelled label(P) + e_k.
bool verify_closure(const PointSet& points);

/// min over coordinates of lower_index.
ExtRational point_lower_index(const std::vector<WittVector>& coords);

struct Jump {
  Rational i;
  std::uint64_t order;
};

struct ConsistencyReport {
  bool applicable = false;
  std::string reason;
  std::uint32_t n = 1;
  Rational w;
  Rational i_n;
  Rational i_n_prime;
  std::uint64_t expected_order = 0;
  /// Points satisfying the submodule criterion (level 1 only).
  std::optional<std::uint64_t> criterion_order;
  std::uint64_t threshold_order = 0;
  std::uint64_t threshold_prime_order = 0;
  bool sets_agree = false;
  bool order_ok = false;
  std::string note;

  bool agree() const { return applicable && sets_agree && order_ok; }
};

struct RamificationReport {
  /// (i, |G_i|) at each distinct positive lower index, increasing in i.
  std::vector<Jump> jumps;
  std::uint64_t order = 0;
  Rational degree;
  Rational degree_bound;
  /// No nonzero point has lower index above min(deg/(p-1), 1/(p-1)).
  bool bound_ok = false;
  std::optional<ConsistencyReport> canonical;
};

/// |{x : lower_idx(x) >= i}|, the zero point included.
std::uint64_t subgroup_order(const PointSet& points, const Rational& i);

RamificationReport filtration(const KisinModule& m, const PointSet& points);
RamificationReport filtration(const KisinModule& m, const EnumerationOptions& options = {});

/// Level-one criterion: with (x, y) the coordinates split after h - d entries, every entry of
/// x + u^{1-w} y B has valuation > w/(p-1). `prepared` must be the module cd was computed from,
/// and `pt` must be expressed in its basis.
bool canonical_membership(const Point& pt, const CanonicalData& cd, const KisinModule& prepared);

/// Compares {criterion members}, {lower_idx >= i_n} and {lower_idx >= i'_n} and checks the
/// order p^{nd}. Problems are reported in the flags, not thrown.
ConsistencyReport canonical_consistency(const KisinModule& m, const PointSet& points);
ConsistencyReport canonical_consistency(const KisinModule& m);

}  // namespace kisram
