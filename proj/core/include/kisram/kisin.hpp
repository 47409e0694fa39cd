#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kisram/matrix.hpp"
#include "kisram/witt.hpp"

namespace kisram {

/// Polynomial in u with coefficients in Z/p^n: integer u-exponent -> residue in [0, p^n).
using ZPoly = std::map<long, mpz_class>;

/// A Kisin module of E-height <= 1 given by its Frobenius matrix A in a basis
/// e_1..e_h, with the convention phi(e_1, ..., e_h) = (e_1, ..., e_h) A.
///
/// Level n = 1: `matrix` holds A over F_{p^f}[[u]] with exponents in v_R units
/// (the Kisin variable u has exponent 1/e). Level n >= 2 (f = 1): `integral`
/// holds A with Z/p^n coefficients and integer u-exponents, and `matrix` holds
/// its reduction mod p.
struct KisinModule {
  std::uint32_t p = 0;
  std::uint32_t f = 1;
  std::uint32_t e = 1;
  std::uint32_t n = 1;
  std::uint32_t h = 0;
  std::uint32_t d = 0;
  /// Working precision (v_R units) for derived series such as inverses and B.
  Rational precision_vr{20};
  /// Asserts the block basis: rows h-d+1..h divisible by u^e and the stripped matrix invertible.
  bool prepared = false;
  SeriesMatrix matrix;
  Matrix<ZPoly> integral;

  FieldPtr field() const { return finite_field(p, f); }
  WittTablePtr table() const { return witt_table(p, n); }
  /// v_R(u) = 1/e.
  Rational u_exponent() const { return Rational(1, static_cast<long>(e)); }

  /// Level-1 module from a series matrix.
  static KisinModule level1(std::uint32_t p, std::uint32_t f, std::uint32_t e, std::uint32_t d, SeriesMatrix a,
                            bool prepared = false, Rational precision_vr = Rational(20));
  /// Level-n module (n >= 2, f = 1) from Z/p^n polynomials; residues are normalized.
  static KisinModule leveln(std::uint32_t p, std::uint32_t e, std::uint32_t n, std::uint32_t d, Matrix<ZPoly> a,
                            bool prepared = false, Rational precision_vr = Rational(20));

  /// Structural checks: p prime, f, e, n >= 1, n <= 4, f = 1 when n >= 2, d <= h,
  /// square h x h matrix, nonnegative exponents. Throws SemanticError / Unsupported.
  void check_structure() const;
};

struct ValidationReport {
  /// A' with A A' = u^e I (over the reduction mod p when n >= 2).
  SeriesMatrix complement;
  Rational degree;
};

/// E-height check: A' = u^e A^{-1} must be integral. Also checks the block
/// condition when the module claims to be prepared.
/// Throws SingularMatrix, NotEHeightOne, NotPrepared.
ValidationReport validate(const KisinModule& m);

/// n = 1: v_R(det A). n >= 2: n * v_R(det of A mod p), the degree of a module
/// free over Z/p^n[[u]] (length times the degree of its reduction).
Rational degree(const KisinModule& m);

/// Cartier-dual module: Frobenius matrix transpose(A'), dimension h - d. n = 1 only.
KisinModule dual(const KisinModule& m);

/// Block-diagonal sum. When both summands are prepared the basis is reordered as
/// (etale part of m1, etale part of m2, rest of m1, rest of m2) and the result is prepared.
KisinModule direct_sum(const KisinModule& m1, const KisinModule& m2);

/// Basis permutation applied to a module: new e'_k = e_{perm[k]}.
KisinModule permuted(const KisinModule& m, const std::vector<std::size_t>& perm);

/// Does the (reduced) matrix have the prepared block form for dimension d?
bool has_prepared_form(const KisinModule& m);

/// Searches basis permutations for the prepared block form; throws NotPrepared.
KisinModule prepare(const KisinModule& m);

struct Blocks {
  SeriesMatrix P1, P2, P3, P4;
};

/// P_1..P_4 of a prepared module (lower rows with u^e stripped). Uses the reduction mod p.
Blocks blocks(const KisinModule& m);

/// w = v_R(det P_1). Requires a prepared module.
Rational hodge_height(const KisinModule& m);

struct CanonicalData {
  Rational w;
  Blocks blocks;
  SeriesMatrix P1hat;
  SeriesMatrix B;
  SeriesMatrix D;
  SeriesMatrix P4prime;
  /// Frobenius matrices of the submodule spanned by the first h - d new basis
  /// vectors and of the quotient.
  SeriesMatrix sub_matrix;
  SeriesMatrix quotient_matrix;
  /// [[I, 0], [u^{1-w} B, I]]: new basis = old basis * change.
  SeriesMatrix change;
  /// change^{-1} A phi(change) = [[D, P_2], [0, u^{1-w} P'_4]].
  SeriesMatrix transformed;
  Rational working_precision;
  std::size_t iterations = 0;
};

/// Right-hand side of the B recursion evaluated at B, truncated at cap.
SeriesMatrix b_recursion(const CanonicalData& cd, const SeriesMatrix& B, std::uint32_t p, const ExtRational& cap);

/// Level-one canonical data of a prepared module with 0 < d < h and w < p/(p+1).
/// Throws NotPrepared, NonContractive, PrecisionExhausted.
CanonicalData canonical_level1(const KisinModule& m);

/// Image of an entry of A under u -> [u^{1/e}] in W_n(R): sum_k c_k [u^{k/e}].
WittVector sn_evaluate(const ZPoly& entry, const KisinModule& m);
/// Image of the (i, j) entry of A (any level).
WittVector sn_evaluate(const KisinModule& m, std::size_t i, std::size_t j);

/// `u^4 + 3` style literal with integer u-exponents.
std::string format_zpoly(const ZPoly& poly);

}  // namespace kisram
