#include "kisram/kisin.hpp"

#include <algorithm>
#include <numeric>

#include "kisram/errors.hpp"

namespace kisram {

namespace {

mpz_class p_power(std::uint32_t p, std::uint32_t n) {
  mpz_class r = 1;
  for (std::uint32_t k = 0; k < n; ++k) r *= p;
  return r;
}

SeriesMatrix reduce_mod_p(const Matrix<ZPoly>& a, std::uint32_t p, std::uint32_t e, const FieldPtr& field) {
  SeriesMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      std::vector<Term> terms;
      for (const auto& [k, c] : a(i, j)) {
        mpz_class r = c % p;
        if (r != 0) terms.push_back({Rational(k, static_cast<long>(e)), r.get_ui()});
      }
      out(i, j) = PuiseuxSeries::from_terms(field, std::move(terms));
    }
  return out;
}

// det = c u^k (1 + y); returns (k, (c (1 + y))^{-1}) truncated at cap.
std::pair<Rational, PuiseuxSeries> split_determinant(const PuiseuxSeries& det, const ExtRational& cap) {
  if (det.is_zero()) throw SingularMatrix("determinant is zero");
  const Rational k = det.valuation().value();
  return {k, det.shifted(-k).inverse(cap)};
}

bool all_exponents_at_least(const PuiseuxSeries& s, const Rational& bound) {
  if (s.terms().empty()) return s.is_zero() || !(s.precision() < ExtRational(bound));
  return !(s.terms().front().exponent < bound);
}

}  // namespace

KisinModule KisinModule::level1(std::uint32_t p, std::uint32_t f, std::uint32_t e, std::uint32_t d, SeriesMatrix a,
                                bool prepared, Rational precision_vr) {
  KisinModule m;
  m.p = p;
  m.f = f;
  m.e = e;
  m.n = 1;
  m.h = static_cast<std::uint32_t>(a.rows());
  m.d = d;
  m.prepared = prepared;
  m.precision_vr = std::move(precision_vr);
  if (!is_prime(p)) throw SemanticError("p must be prime (got " + std::to_string(p) + ")");
  if (f == 0) throw SemanticError("f must be positive");
  m.matrix = embedded(a, m.field());
  m.check_structure();
  return m;
}

KisinModule KisinModule::leveln(std::uint32_t p, std::uint32_t e, std::uint32_t n, std::uint32_t d, Matrix<ZPoly> a,
                                bool prepared, Rational precision_vr) {
  KisinModule m;
  m.p = p;
  m.f = 1;
  m.e = e;
  m.n = n;
  m.h = static_cast<std::uint32_t>(a.rows());
  m.d = d;
  m.prepared = prepared;
  m.precision_vr = std::move(precision_vr);
  if (!is_prime(p)) throw SemanticError("p must be prime (got " + std::to_string(p) + ")");
  const mpz_class modulus = p_power(p, n);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      ZPoly normalized;
      for (const auto& [k, c] : a(i, j)) {
        mpz_class r = c % modulus;
        if (r < 0) r += modulus;
        if (r != 0) normalized[k] = r;
      }
      a(i, j) = std::move(normalized);
    }
  m.integral = std::move(a);
  m.matrix = reduce_mod_p(m.integral, p, e, m.field());
  m.check_structure();
  return m;
}

void KisinModule::check_structure() const {
  if (!is_prime(p)) throw SemanticError("p must be prime (got " + std::to_string(p) + ")");
  if (f == 0) throw SemanticError("f must be positive");
  if (e == 0) throw SemanticError("e must be positive");
  if (n == 0) throw SemanticError("n must be positive");
  if (n > 4) throw Unsupported("level n = " + std::to_string(n) + " exceeds the Witt length cap of 4");
  if (n >= 2 && f != 1) throw Unsupported("level n >= 2 requires f = 1");
  if (d > h) throw SemanticError("d = " + std::to_string(d) + " exceeds h = " + std::to_string(h));
  if (!(Rational(0) < precision_vr)) throw SemanticError("precision_vr must be positive");
  const std::size_t rows = n >= 2 ? integral.rows() : matrix.rows();
  const std::size_t cols = n >= 2 ? integral.cols() : matrix.cols();
  if (rows != h || cols != h) throw SemanticError("matrix must be " + std::to_string(h) + "x" + std::to_string(h));
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      const auto& t = matrix(i, j).terms();
      if (!t.empty() && t.front().exponent < Rational(0)) throw SemanticError("matrix entries must be integral in u");
    }
  if (n >= 2) {
    for (std::size_t i = 0; i < integral.rows(); ++i)
      for (std::size_t j = 0; j < integral.cols(); ++j)
        for (const auto& [k, c] : integral(i, j))
          if (k < 0) throw SemanticError("matrix entries must be integral in u");
  }
}

ValidationReport validate(const KisinModule& m) {
  m.check_structure();
  const SeriesMatrix& A = m.matrix;
  const PuiseuxSeries det = determinant(A);
  auto [k, unit_inv] = split_determinant(det, m.precision_vr);
  // A' = u (in v_R units, i.e. u^e) * adj(A) / det(A).
  const PuiseuxSeries scale = unit_inv.shifted(Rational(1) - k);
  SeriesMatrix comp = adjugate(A).map([&](const PuiseuxSeries& x) {
    return PuiseuxSeries::mul_truncated(x, scale, ExtRational(m.precision_vr));
  });
  for (std::size_t i = 0; i < comp.rows(); ++i)
    for (std::size_t j = 0; j < comp.cols(); ++j) {
      if (!all_exponents_at_least(comp(i, j), Rational(0))) {
        throw NotEHeightOne("u^e A^{-1} is not integral (entry " + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + " = " + comp(i, j).str() + ")");
      }
    }
  if (k < Rational(0) || Rational(static_cast<long>(m.h)) < k) {
    throw NotEHeightOne("degree " + k.str() + " outside [0, h]");
  }
  if (m.prepared && !has_prepared_form(m)) {
    throw NotPrepared("matrix is flagged prepared but does not have the block form for d = " + std::to_string(m.d));
  }
  return {std::move(comp), k};
}

Rational degree(const KisinModule& m) {
  const PuiseuxSeries det = determinant(m.matrix);
  if (det.is_zero()) throw SingularMatrix("determinant is zero");
  const Rational v = det.valuation().value();
  return m.n == 1 ? v : v * Rational(static_cast<long>(m.n));
}

KisinModule dual(const KisinModule& m) {
  if (m.n != 1) throw Unsupported("dual is implemented for level n = 1");
  const ValidationReport report = validate(m);
  KisinModule out = m;
  out.matrix = report.complement.transpose();
  out.d = m.h - m.d;
  out.prepared = false;
  return out;
}

KisinModule permuted(const KisinModule& m, const std::vector<std::size_t>& perm) {
  KisinModule out = m;
  out.prepared = false;
  for (std::size_t k = 0; k < m.h; ++k)
    for (std::size_t l = 0; l < m.h; ++l) out.matrix(k, l) = m.matrix(perm[k], perm[l]);
  if (m.n >= 2) {
    for (std::size_t k = 0; k < m.h; ++k)
      for (std::size_t l = 0; l < m.h; ++l) out.integral(k, l) = m.integral(perm[k], perm[l]);
  }
  return out;
}

KisinModule direct_sum(const KisinModule& m1, const KisinModule& m2) {
  if (m1.p != m2.p || m1.f != m2.f || m1.e != m2.e || m1.n != m2.n) {
    throw SemanticError("direct sum needs matching (p, f, e, n)");
  }
  if (m2.h == 0) return m1;
  if (m1.h == 0) return m2;
  KisinModule out = m1;
  out.h = m1.h + m2.h;
  out.d = m1.d + m2.d;
  out.precision_vr = min(m1.precision_vr, m2.precision_vr);
  out.matrix = SeriesMatrix(out.h, out.h, PuiseuxSeries::zero(m1.field()));
  out.matrix.set_block(0, 0, m1.matrix);
  out.matrix.set_block(m1.h, m1.h, m2.matrix);
  if (out.n >= 2) {
    out.integral = Matrix<ZPoly>(out.h, out.h);
    out.integral.set_block(0, 0, m1.integral);
    out.integral.set_block(m1.h, m1.h, m2.integral);
  }
  out.prepared = false;
  if (m1.prepared && m2.prepared) {
    std::vector<std::size_t> perm;
    const std::size_t et1 = m1.h - m1.d, et2 = m2.h - m2.d;
    for (std::size_t k = 0; k < et1; ++k) perm.push_back(k);
    for (std::size_t k = 0; k < et2; ++k) perm.push_back(m1.h + k);
    for (std::size_t k = et1; k < m1.h; ++k) perm.push_back(k);
    for (std::size_t k = et2; k < m2.h; ++k) perm.push_back(m1.h + k);
    out = permuted(out, perm);
    out.prepared = true;
  }
  return out;
}

bool has_prepared_form(const KisinModule& m) {
  const std::size_t top = m.h - m.d;
  SeriesMatrix stripped = m.matrix;
  for (std::size_t i = top; i < m.h; ++i)
    for (std::size_t j = 0; j < m.h; ++j) {
      if (!all_exponents_at_least(m.matrix(i, j), Rational(1))) return false;
      stripped(i, j) = m.matrix(i, j).shifted(Rational(-1));
    }
  const PuiseuxSeries det = determinant(stripped);
  return !det.terms().empty() && det.terms().front().exponent == Rational(0);
}

KisinModule prepare(const KisinModule& m) {
  if (has_prepared_form(m)) {
    KisinModule out = m;
    out.prepared = true;
    return out;
  }
  std::vector<std::size_t> perm(m.h);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    KisinModule candidate = permuted(m, perm);
    if (has_prepared_form(candidate)) {
      candidate.prepared = true;
      return candidate;
    }
  }
  throw NotPrepared("no basis permutation puts the matrix in prepared block form for d = " + std::to_string(m.d));
}

Blocks blocks(const KisinModule& m) {
  if (!m.prepared || !has_prepared_form(m)) throw NotPrepared("module is not in prepared block form");
  const std::size_t top = m.h - m.d;
  Blocks b;
  b.P1 = m.matrix.block(0, 0, top, top);
  b.P2 = m.matrix.block(0, top, top, m.d);
  b.P3 = shifted(m.matrix.block(top, 0, m.d, top), Rational(-1));
  b.P4 = shifted(m.matrix.block(top, top, m.d, m.d), Rational(-1));
  return b;
}

Rational hodge_height(const KisinModule& m) {
  const Blocks b = blocks(m);
  if (b.P1.rows() == 0) return Rational(0);
  const PuiseuxSeries det = determinant(b.P1);
  if (det.is_zero()) throw SingularMatrix("det P_1 is zero");
  return det.valuation().value();
}

SeriesMatrix b_recursion(const CanonicalData& cd, const SeriesMatrix& B, std::uint32_t p, const ExtRational& cap) {
  const Rational P(static_cast<long>(p));
  const Rational g2 = P * (Rational(1) - cd.w);
  const Rational g1 = g2 - cd.w;
  const SeriesMatrix phiB = frobenius(B);
  const SeriesMatrix first = mul_truncated(cd.blocks.P3, cd.P1hat, cap);
  const SeriesMatrix second =
      shifted(mul_truncated(mul_truncated(mul_truncated(B, cd.blocks.P2, cap), phiB, cap), cd.P1hat, cap), g1);
  const SeriesMatrix third = shifted(mul_truncated(mul_truncated(cd.blocks.P4, phiB, cap), cd.P1hat, cap), g2);
  return truncated(first - second + third, cap);
}

CanonicalData canonical_level1(const KisinModule& m) {
  if (m.d == 0 || m.d >= m.h) throw SemanticError("canonical data needs 0 < d < h");
  CanonicalData cd;
  cd.blocks = blocks(m);
  cd.w = hodge_height(m);
  const Rational P(static_cast<long>(m.p));
  if (!(cd.w < P / (P + Rational(1)))) {
    throw NonContractive("Hodge height " + cd.w.str() + " is not below p/(p+1) = " + (P / (P + Rational(1))).str());
  }
  const ExtRational W(m.precision_vr);
  cd.working_precision = m.precision_vr;
  const FieldPtr F = m.field();
  const std::size_t top = m.h - m.d;

  auto [k, unit_inv] = split_determinant(determinant(cd.blocks.P1), W);
  cd.P1hat = adjugate(cd.blocks.P1).map(
      [&](const PuiseuxSeries& x) { return PuiseuxSeries::mul_truncated(x, unit_inv, W); });

  const Rational gain = P - (P + Rational(1)) * cd.w;
  const std::size_t max_iter = static_cast<std::size_t>((m.precision_vr / gain).ceil().get_ui()) + 4;
  SeriesMatrix B = truncated(mul_truncated(cd.blocks.P3, cd.P1hat, W), W);
  bool stable = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    SeriesMatrix next = b_recursion(cd, B, m.p, W);
    ++cd.iterations;
    if (next == B) {
      stable = true;
      break;
    }
    B = std::move(next);
  }
  if (!stable) throw PrecisionExhausted("B recursion did not stabilize at the working precision");
  cd.B = B;

  const Rational g2 = P * (Rational(1) - cd.w);
  const Rational one_minus_w = Rational(1) - cd.w;
  cd.D = truncated(cd.blocks.P1 + shifted(mul_truncated(cd.blocks.P2, frobenius(B), W), g2), W);
  cd.P4prime = truncated(shifted(cd.blocks.P4, cd.w) - mul_truncated(B, cd.blocks.P2, W), W);
  cd.sub_matrix = cd.D;
  cd.quotient_matrix = shifted(cd.P4prime, one_minus_w);

  cd.change = identity_matrix(m.h, F);
  cd.change.set_block(top, 0, shifted(B, one_minus_w));

  cd.transformed = SeriesMatrix(m.h, m.h, PuiseuxSeries::zero(F));
  cd.transformed.set_block(0, 0, cd.D);
  cd.transformed.set_block(0, top, cd.blocks.P2);
  cd.transformed.set_block(top, top, cd.quotient_matrix);
  return cd;
}

WittVector sn_evaluate(const ZPoly& entry, const KisinModule& m) {
  const WittTablePtr table = m.table();
  const FieldPtr F = m.field();
  WittVector acc = WittVector::zero(table, F);
  for (const auto& [k, c] : entry) {
    const WittVector coeff = WittVector::from_integer(table, F, c);
    const PuiseuxSeries x = PuiseuxSeries::monomial(F, 1, Rational(k, static_cast<long>(m.e)));
    // c [x] = (c_0 x, c_1 x^p, c_2 x^{p^2}, ...).
    std::vector<PuiseuxSeries> comps;
    PuiseuxSeries xp = x;
    for (std::size_t j = 0; j < m.n; ++j) {
      comps.push_back(coeff[j] * xp);
      xp = xp.frobenius();
    }
    acc = witt_add(acc, WittVector(table, std::move(comps)));
  }
  return acc;
}

WittVector sn_evaluate(const KisinModule& m, std::size_t i, std::size_t j) {
  if (m.n == 1) return WittVector(m.table(), {m.matrix(i, j)});
  return sn_evaluate(m.integral(i, j), m);
}

std::string format_zpoly(const ZPoly& poly) {
  std::string out;
  for (const auto& [k, c] : poly) {
    if (c == 0) continue;
    if (!out.empty()) out += " + ";
    if (k == 0) {
      out += c.get_str();
      continue;
    }
    if (c != 1) out += c.get_str() + "*";
    out += "u";
    if (k != 1) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

}  // namespace kisram
