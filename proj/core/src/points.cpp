#include "kisram/points.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <set>

#include "kisram/artin_schreier.hpp"
#include "kisram/errors.hpp"

namespace kisram {

namespace {

using Coords = std::vector<WittVector>;

constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << 20;

std::uint64_t power(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 0; k < exp; ++k) r *= base;
  return r;
}

Rational rational_power(std::uint32_t p, std::uint32_t k) {
  return Rational(static_cast<long>(power(p, k)));
}

std::optional<std::vector<std::size_t>> find_permutation(std::size_t h,
                                                         const std::function<bool(const std::vector<std::size_t>&)>& ok) {
  std::vector<std::size_t> perm(h);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (ok(perm)) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::optional<std::vector<std::size_t>> triangular_permutation(std::size_t h,
                                                               const std::function<bool(std::size_t, std::size_t)>& zero) {
  return find_permutation(h, [&](const std::vector<std::size_t>& perm) {
    for (std::size_t k = 0; k < h; ++k)
      for (std::size_t l = 0; l < k; ++l)
        if (!zero(perm[k], perm[l])) return false;
    return true;
  });
}

WittVector add_or_take(const WittVector& acc, const WittVector& term) {
  return acc.is_zero() ? term : (term.is_zero() ? acc : witt_add(acc, term));
}

// Generators of the solutions of phi(x_l) = sum_{j <= l} x_j A_{j,l} for upper triangular A:
// generator k vanishes in coordinates < k and has the nonzero root of X^p = A_{kk,0} X in slot 0
// of coordinate k; all other unknowns take the particular Artin-Schreier root.
std::vector<Coords> solve_echelon(const Matrix<WittVector>& A, const WittTablePtr& table, const FieldPtr& field,
                                  const Rational& working_precision, const ASRootsOptions& as_options) {
  const std::size_t h = A.rows();
  const std::uint32_t p = table->p();
  const std::size_t n = table->n();
  std::vector<Coords> generators;
  for (std::size_t k = 0; k < h; ++k) {
    Coords x(h, WittVector::zero(table, field));
    for (std::size_t l = k; l < h; ++l) {
      WittVector rhs = WittVector::zero(table, field);
      for (std::size_t j = k; j < l; ++j) {
        if (x[j].is_zero() || A(j, l).is_zero()) continue;
        rhs = add_or_take(rhs, witt_mul(x[j], A(j, l)));
      }
      const PuiseuxSeries& diag = A(l, l)[0];
      if (diag.is_zero_to_precision()) {
        throw SingularMatrix("diagonal entry " + std::to_string(l + 1) + " of the triangular form vanishes mod p");
      }
      std::vector<PuiseuxSeries> comps(n, PuiseuxSeries::zero(field));
      PuiseuxSeries a = diag;
      Rational target = working_precision;
      for (std::size_t m = 0; m < n; ++m) {
        const WittVector partial(table, comps);
        const WittVector y = add_or_take(witt_mul(partial, A(l, l)), rhs);
        const ASRoots roots = as_roots(a, y[m], ExtRational(target), as_options);
        if (l == k && m == 0) {
          if (roots.homogeneous.is_zero_to_precision()) {
            throw SingularMatrix("X^p = a X has no nonzero root for coordinate " + std::to_string(l + 1));
          }
          comps[0] = roots.homogeneous;
        } else {
          comps[m] = roots.particular;
        }
        a = a.frobenius();
        target *= Rational(static_cast<long>(p));
      }
      x[l] = WittVector(table, std::move(comps));
    }
    generators.push_back(std::move(x));
  }
  return generators;
}

Coords unpermute(const Coords& y, const std::vector<std::size_t>& perm) {
  Coords x(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) x[perm[k]] = y[k];
  return x;
}

// x_old = x_new * inverse(change) for change = [[I, 0], [C, I]] (inverse [[I, 0], [-C, I]]).
Coords undo_change(const Coords& x_new, const SeriesMatrix& change, const WittTablePtr& table) {
  const std::size_t h = x_new.size();
  Coords out(h);
  for (std::size_t i = 0; i < h; ++i) {
    PuiseuxSeries acc = x_new[i][0];
    for (std::size_t k = 0; k < h; ++k) {
      if (k == i || change(k, i).is_zero() || x_new[k][0].is_zero()) continue;
      acc -= x_new[k][0] * change(k, i);
    }
    out[i] = WittVector(table, {acc});
  }
  return out;
}

FieldPtr field_of(const Coords& coords) {
  FieldPtr f;
  for (const auto& c : coords) f = common_field(f, c.field());
  return f;
}

ExtRational coords_precision(const Coords& coords) {
  ExtRational prec = ExtRational::infinity();
  for (const auto& c : coords) prec = min(prec, c[0].precision());
  return prec;
}

PointSet assemble(const KisinModule& m, const std::vector<Coords>& generators, std::string method) {
  PointSet ps;
  ps.p = m.p;
  ps.n = m.n;
  ps.h = m.h;
  ps.method = std::move(method);
  const std::uint64_t q = power(m.p, m.n);
  const std::uint64_t total = power(q, m.h);
  if (m.h * m.n > 63 || total > kMaxPoints) {
    throw Unsupported("point set of size p^(n h) exceeds " + std::to_string(kMaxPoints));
  }
  const WittTablePtr table = m.table();
  FieldPtr field = m.field();
  for (const auto& g : generators) field = common_field(field, field_of(g));

  // multiples[k][c] = c * g_k, built from the p-adic digits of c so that p * g_k = witt_times_p(g_k)
  // keeps the precision of its components instead of cancelling p copies of a truncated series.
  std::vector<std::vector<Coords>> multiples(m.h);
  for (std::size_t k = 0; k < m.h; ++k) {
    std::vector<Coords> shifted_gen{generators[k]};
    for (std::uint32_t i = 1; i < m.n; ++i) {
      Coords next(m.h);
      for (std::size_t c = 0; c < m.h; ++c) next[c] = witt_times_p(shifted_gen.back()[c]);
      shifted_gen.push_back(std::move(next));
    }
    for (std::uint64_t c = 0; c < q; ++c) {
      Coords acc(m.h, WittVector::zero(table, field));
      std::uint64_t rest = c;
      for (std::uint32_t i = 0; i < m.n; ++i, rest /= m.p) {
        for (std::uint64_t copies = 0; copies < rest % m.p; ++copies)
          for (std::size_t c2 = 0; c2 < m.h; ++c2) acc[c2] = add_or_take(acc[c2], shifted_gen[i][c2]);
      }
      multiples[k].push_back(std::move(acc));
    }
  }

  auto make_point = [&](const Coords& coords, std::vector<mpz_class> label) {
    Point pt;
    pt.coords = coords;
    pt.label = std::move(label);
    pt.lower_idx = point_lower_index(coords);
    pt.precision = coords_precision(coords);
    return pt;
  };
  for (std::size_t k = 0; k < m.h; ++k) {
    std::vector<mpz_class> label(m.h, 0);
    label[k] = 1;
    ps.generators.push_back(make_point(generators[k], std::move(label)));
  }
  ps.points.reserve(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<mpz_class> label(m.h);
    std::uint64_t rest = idx;
    for (std::size_t k = m.h; k-- > 0;) {
      label[k] = static_cast<unsigned long>(rest % q);
      rest /= q;
    }
    Coords coords(m.h, WittVector::zero(table, field));
    for (std::size_t k = 0; k < m.h; ++k) {
      const Coords& mult = multiples[k][label[k].get_ui()];
      for (std::size_t i = 0; i < m.h; ++i) coords[i] = add_or_take(coords[i], mult[i]);
    }
    ps.points.push_back(make_point(coords, std::move(label)));
  }
  return ps;
}

bool entry_is_zero(const KisinModule& m, std::size_t i, std::size_t j) {
  return m.n >= 2 ? m.integral(i, j).empty() : m.matrix(i, j).is_zero();
}

std::uint64_t count_at_least(const PointSet& ps, const Rational& i, std::set<std::uint64_t>* members) {
  std::uint64_t count = 0;
  for (std::uint64_t k = 0; k < ps.points.size(); ++k) {
    if (ExtRational(i) <= ps.points[k].lower_idx) {
      ++count;
      if (members) members->insert(k);
    }
  }
  return count;
}

}  // namespace

bool Point::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const WittVector& c) { return c.is_zero(); });
}

FieldPtr Point::field() const { return field_of(coords); }

std::string Point::str() const {
  std::string out = "(";
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (k) out += ", ";
    out += coords[k].str();
  }
  return out + ")";
}

FieldPtr PointSet::field() const {
  FieldPtr f;
  for (const auto& g : generators) f = common_field(f, g.field());
  return f;
}

const Point& PointSet::at(const std::vector<mpz_class>& label) const {
  const std::uint64_t q = power(p, n);
  if (label.size() != h) throw std::invalid_argument("label has the wrong length");
  std::uint64_t idx = 0;
  for (const auto& c : label) {
    mpz_class r = c % static_cast<unsigned long>(q);
    if (r < 0) r += static_cast<unsigned long>(q);
    idx = idx * q + r.get_ui();
  }
  return points.at(idx);
}

ExtRational point_lower_index(const std::vector<WittVector>& coords) {
  ExtRational v = ExtRational::infinity();
  for (const auto& c : coords) v = min(v, lower_index(c));
  return v;
}

PointSet enumerate_points(const KisinModule& m, const EnumerationOptions& options) {
  m.check_structure();
  ASRootsOptions as_options;
  as_options.extension_cap = options.extension_cap;
  as_options.lenient = true;
  const WittTablePtr table = m.table();
  const FieldPtr field = m.field();

  if (auto perm = triangular_permutation(m.h, [&](std::size_t i, std::size_t j) { return entry_is_zero(m, i, j); })) {
    const KisinModule mp = permuted(m, *perm);
    Matrix<WittVector> A(m.h, m.h);
    for (std::size_t i = 0; i < m.h; ++i)
      for (std::size_t j = 0; j < m.h; ++j) A(i, j) = sn_evaluate(mp, i, j);
    std::vector<Coords> gens = solve_echelon(A, table, field, m.precision_vr, as_options);
    for (auto& g : gens) g = unpermute(g, *perm);
    return assemble(m, gens, "triangular");
  }
  if (m.n >= 2) {
    throw NotTriangularizable("no basis permutation makes the matrix upper triangular");
  }
  const auto prep = find_permutation(m.h, [&](const std::vector<std::size_t>& perm) {
    return has_prepared_form(permuted(m, perm));
  });
  if (!prep || m.d == 0 || m.d >= m.h) {
    throw NotTriangularizable("matrix is not triangular under a permutation and has no canonical basis change");
  }
  KisinModule mp = permuted(m, *prep);
  mp.prepared = true;
  const CanonicalData cd = canonical_level1(mp);
  const SeriesMatrix& T = cd.transformed;
  auto perm2 = triangular_permutation(m.h, [&](std::size_t i, std::size_t j) { return T(i, j).is_zero(); });
  if (!perm2) throw NotTriangularizable("canonical basis change leaves a non-triangular diagonal block");
  Matrix<WittVector> A(m.h, m.h);
  for (std::size_t i = 0; i < m.h; ++i)
    for (std::size_t j = 0; j < m.h; ++j) A(i, j) = WittVector(table, {T((*perm2)[i], (*perm2)[j])});
  std::vector<Coords> gens = solve_echelon(A, table, field, m.precision_vr, as_options);
  for (auto& g : gens) g = unpermute(undo_change(unpermute(g, *perm2), cd.change, table), *prep);
  return assemble(m, gens, "canonical basis change");
}

PointSet enumerate_points_n1(const KisinModule& m, const EnumerationOptions& options) {
  if (m.n != 1) throw SemanticError("enumerate_points_n1 needs a level-1 module");
  return enumerate_points(m, options);
}

PointSet enumerate_points_rank1_wn(const KisinModule& m, const EnumerationOptions& options) {
  if (m.h != 1) throw SemanticError("enumerate_points_rank1_wn needs a rank-one module");
  return enumerate_points(m, options);
}

HomCheck verify_hom_detail(const KisinModule& m, const std::vector<WittVector>& coords) {
  HomCheck out;
  out.precision = ExtRational::infinity();
  if (coords.size() != m.h) {
    out.failure = "expected " + std::to_string(m.h) + " coordinates";
    return out;
  }
  for (std::size_t l = 0; l < m.h; ++l) {
    const WittVector lhs = witt_frobenius(coords[l]);
    WittVector rhs = WittVector::zero(m.table(), m.field());
    for (std::size_t j = 0; j < m.h; ++j) {
      if (coords[j].is_zero()) continue;
      const WittVector a = sn_evaluate(m, j, l);
      if (a.is_zero()) continue;
      rhs = add_or_take(rhs, witt_mul(coords[j], a));
    }
    for (std::size_t s = 0; s < lhs.length(); ++s) {
      const ExtRational bound = min(lhs[s].precision(), rhs[s].precision());
      out.precision = min(out.precision, bound.is_infinite() ? bound : ExtRational(bound.value() / rational_power(m.p, static_cast<std::uint32_t>(s))));
      if (!lhs[s].agrees_with(rhs[s], ExtRational::infinity())) {
        out.failure = "column " + std::to_string(l + 1) + ", Witt slot " + std::to_string(s) + ": " + lhs[s].str() +
                      " != " + rhs[s].str();
        return out;
      }
    }
  }
  out.ok = true;
  return out;
}

bool verify_hom(const KisinModule& m, const std::vector<WittVector>& coords) { return verify_hom_detail(m, coords).ok; }

bool verify_closure(const PointSet& ps) {
  const std::uint64_t q = power(ps.p, ps.n);
  for (const auto& pt : ps.points) {
    for (std::size_t k = 0; k < ps.generators.size(); ++k) {
      std::vector<mpz_class> label = pt.label;
      label[k] = (label[k] + 1) % static_cast<unsigned long>(q);
      const Point& target = ps.at(label);
      for (std::size_t i = 0; i < ps.h; ++i) {
        const WittVector sum = witt_add(pt.coords[i], ps.generators[k].coords[i]);
        if (!witt_agrees(sum, target.coords[i], ExtRational::infinity())) return false;
      }
    }
  }
  return true;
}

std::uint64_t subgroup_order(const PointSet& points, const Rational& i) { return count_at_least(points, i, nullptr); }

RamificationReport filtration(const KisinModule& m, const PointSet& points) {
  RamificationReport r;
  r.order = points.size();
  r.degree = degree(m);
  const Rational pm1(static_cast<long>(m.p) - 1);
  r.degree_bound = r.degree / pm1;
  const Rational bound = min(r.degree_bound, Rational(1) / pm1);
  std::set<Rational> indices;
  r.bound_ok = true;
  for (const auto& pt : points.points) {
    if (pt.is_zero() || pt.lower_idx.is_infinite()) continue;
    const Rational& v = pt.lower_idx.value();
    if (bound < v) r.bound_ok = false;
    if (Rational(0) < v) indices.insert(v);
  }
  for (const auto& i : indices) r.jumps.push_back({i, subgroup_order(points, i)});
  if (m.d > 0 && m.d < m.h) r.canonical = canonical_consistency(m, points);
  return r;
}

RamificationReport filtration(const KisinModule& m, const EnumerationOptions& options) {
  return filtration(m, enumerate_points(m, options));
}

bool canonical_membership(const Point& pt, const CanonicalData& cd, const KisinModule& prepared) {
  const std::size_t top = prepared.h - prepared.d;
  const Rational one_minus_w = Rational(1) - cd.w;
  const Rational threshold = cd.w / Rational(static_cast<long>(prepared.p) - 1);
  for (std::size_t i = 0; i < top; ++i) {
    PuiseuxSeries z = pt.coords[i][0];
    for (std::size_t k = 0; k < prepared.d; ++k) {
      const PuiseuxSeries& y = pt.coords[top + k][0];
      if (y.is_zero() || cd.B(k, i).is_zero()) continue;
      z += (y * cd.B(k, i)).shifted(one_minus_w);
    }
    if (ExtRational(threshold) < z.valuation_bound()) continue;
    if (!z.terms().empty() && !(threshold < z.terms().front().exponent)) return false;
    throw PrecisionExhausted("criterion entry O(u^" + z.precision().str() + ") cannot be compared with " +
                             threshold.str());
  }
  return true;
}

ConsistencyReport canonical_consistency(const KisinModule& m, const PointSet& points) {
  ConsistencyReport r;
  r.n = m.n;
  if (m.d == 0 || m.d >= m.h) {
    r.reason = "canonical subgroup needs 0 < d < h";
    return r;
  }
  const auto prep = find_permutation(m.h, [&](const std::vector<std::size_t>& perm) {
    return has_prepared_form(permuted(m, perm));
  });
  if (!prep) {
    r.reason = "no basis permutation gives the prepared block form";
    return r;
  }
  KisinModule mp = permuted(m, *prep);
  mp.prepared = true;
  r.w = hodge_height(mp);
  const Rational P(static_cast<long>(m.p));
  const Rational pm1 = P - Rational(1);
  const Rational pn = rational_power(m.p, m.n);
  if (!(r.w < pm1 / pn)) {
    r.reason = "Hodge height " + r.w.str() + " is not below (p-1)/p^n = " + (pm1 / pn).str();
    return r;
  }
  r.i_n = Rational(1) / (rational_power(m.p, m.n - 1) * pm1) - r.w / pm1;
  r.i_n_prime = Rational(1) / (pn * pm1);
  r.expected_order = power(m.p, static_cast<std::uint64_t>(m.n) * m.d);

  std::set<std::uint64_t> s_i, s_ip;
  r.threshold_order = count_at_least(points, r.i_n, &s_i);
  r.threshold_prime_order = count_at_least(points, r.i_n_prime, &s_ip);
  r.sets_agree = s_i == s_ip;
  if (m.n == 1) {
    CanonicalData cd;
    try {
      cd = canonical_level1(mp);
    } catch (const Error& ex) {
      r.reason = std::string("canonical data: ") + ex.what();
      return r;
    }
    std::set<std::uint64_t> s_crit;
    for (std::uint64_t k = 0; k < points.points.size(); ++k) {
      Point local = points.points[k];
      for (std::size_t i = 0; i < m.h; ++i) local.coords[i] = points.points[k].coords[(*prep)[i]];
      if (canonical_membership(local, cd, mp)) s_crit.insert(k);
    }
    r.criterion_order = s_crit.size();
    r.sets_agree = r.sets_agree && s_crit == s_i;
    r.note = "assuming BT hypotheses";
  } else {
    r.note = "assuming BT hypotheses; level n >= 2 compared by valuation thresholds only (corpus-limited)";
  }
  r.order_ok = r.threshold_order == r.expected_order;
  r.applicable = true;
  return r;
}

ConsistencyReport canonical_consistency(const KisinModule& m) { return canonical_consistency(m, enumerate_points(m)); }

}  // namespace kisram
