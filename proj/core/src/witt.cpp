#include "kisram/witt.hpp"

#include <map>
#include <stdexcept>

#include "kisram/errors.hpp"

namespace kisram {

namespace {

FieldPtr field_of(const std::vector<PuiseuxSeries>& comps) {
  FieldPtr f;
  for (const auto& c : comps) f = common_field(f, c.field());
  return f;
}

// Evaluates a reduced universal polynomial at (x, y), variables X_j = x[j], Y_j = y[j].
PuiseuxSeries evaluate(const std::vector<WittPolynomialTable::ReducedTerm>& poly, const std::vector<PuiseuxSeries>& x,
                       const std::vector<PuiseuxSeries>& y, const FieldPtr& field) {
  const std::size_t n = x.size();
  std::map<std::pair<std::size_t, std::uint32_t>, PuiseuxSeries> powers;
  auto var = [&](std::size_t k) -> const PuiseuxSeries& { return k < n ? x[k] : y[k - n]; };
  PuiseuxSeries acc = PuiseuxSeries::zero(field);
  for (const auto& term : poly) {
    bool vanishes = false;
    for (std::size_t k = 0; k < term.exponents.size(); ++k) {
      if (term.exponents[k] && var(k).is_zero()) {
        vanishes = true;
        break;
      }
    }
    if (vanishes) continue;
    PuiseuxSeries mono = PuiseuxSeries::constant(field, field->from_integer(term.coeff));
    for (std::size_t k = 0; k < term.exponents.size(); ++k) {
      const std::uint32_t e = term.exponents[k];
      if (!e) continue;
      auto it = powers.find({k, e});
      if (it == powers.end()) it = powers.emplace(std::make_pair(k, e), var(k).embedded(field).pow(e)).first;
      mono = mono * it->second;
    }
    acc += mono;
  }
  return acc;
}

void check_compatible(const WittVector& x, const WittVector& y) {
  if (x.table() != y.table()) throw std::invalid_argument("Witt vectors of different (p, n)");
}

std::vector<PuiseuxSeries> embedded_components(const WittVector& x, const FieldPtr& f) {
  std::vector<PuiseuxSeries> out;
  out.reserve(x.length());
  for (const auto& c : x.components()) out.push_back(c.embedded(f));
  return out;
}

Rational p_power(std::uint32_t p, std::size_t j) {
  Rational r(1);
  for (std::size_t k = 0; k < j; ++k) r *= Rational(static_cast<long>(p));
  return r;
}

// Is v(c) >= threshold? Throws PrecisionExhausted when undecidable.
bool valuation_at_least(const PuiseuxSeries& c, const Rational& threshold) {
  if (c.is_zero()) return true;
  if (!c.terms().empty()) return !(c.terms().front().exponent < threshold);
  if (!(c.precision() < ExtRational(threshold))) return true;
  throw PrecisionExhausted("component O(u^" + c.precision().str() + ") cannot be compared with " + threshold.str());
}

}  // namespace

WittVector::WittVector(WittTablePtr table, std::vector<PuiseuxSeries> components)
    : table_(std::move(table)), components_(std::move(components)) {
  if (!table_) throw std::invalid_argument("Witt vector without table");
  if (components_.size() != table_->n()) {
    throw std::invalid_argument("Witt vector has " + std::to_string(components_.size()) + " components, expected " +
                                std::to_string(table_->n()));
  }
}

WittVector WittVector::zero(WittTablePtr table, FieldPtr field) {
  const std::size_t n = table->n();
  return WittVector(std::move(table), std::vector<PuiseuxSeries>(n, PuiseuxSeries::zero(field)));
}

WittVector WittVector::one(WittTablePtr table, FieldPtr field) {
  return teichmuller(std::move(table), PuiseuxSeries::constant(std::move(field), 1));
}

WittVector WittVector::teichmuller(WittTablePtr table, const PuiseuxSeries& a) {
  const std::size_t n = table->n();
  std::vector<PuiseuxSeries> comps(n, PuiseuxSeries::zero(a.field()));
  comps[0] = a;
  return WittVector(std::move(table), std::move(comps));
}

WittVector WittVector::from_integer(WittTablePtr table, FieldPtr field, const mpz_class& k) {
  mpz_class modulus = 1;
  for (std::uint32_t j = 0; j < table->n(); ++j) modulus *= table->p();
  mpz_class r = k % modulus;
  if (r < 0) r += modulus;
  return witt_scale(one(table, field), r);
}

FieldPtr WittVector::field() const { return field_of(components_); }

bool WittVector::is_zero() const {
  for (const auto& c : components_)
    if (!c.is_zero()) return false;
  return true;
}

std::string WittVector::str() const {
  std::string out = "[";
  for (std::size_t j = 0; j < components_.size(); ++j) {
    if (j) out += ", ";
    out += components_[j].str();
  }
  return out + "]";
}

WittVector witt_add(const WittVector& x, const WittVector& y) {
  check_compatible(x, y);
  const FieldPtr f = common_field(x.field(), y.field());
  if (!f) return x;
  const auto xs = embedded_components(x, f);
  const auto ys = embedded_components(y, f);
  std::vector<PuiseuxSeries> out;
  for (std::uint32_t m = 0; m < x.length(); ++m) out.push_back(evaluate(x.table()->add_reduced(m), xs, ys, f));
  return WittVector(x.table(), std::move(out));
}

WittVector witt_mul(const WittVector& x, const WittVector& y) {
  check_compatible(x, y);
  const FieldPtr f = common_field(x.field(), y.field());
  if (!f) return x;
  const auto xs = embedded_components(x, f);
  const auto ys = embedded_components(y, f);
  std::vector<PuiseuxSeries> out;
  for (std::uint32_t m = 0; m < x.length(); ++m) out.push_back(evaluate(x.table()->mul_reduced(m), xs, ys, f));
  return WittVector(x.table(), std::move(out));
}

WittVector witt_neg(const WittVector& x) {
  const FieldPtr f = x.field();
  if (!f) return x;
  const auto xs = embedded_components(x, f);
  // S_m = X_m + Y_m + (terms in lower variables): solve slot by slot.
  std::vector<PuiseuxSeries> ys(x.length(), PuiseuxSeries::zero(f));
  for (std::uint32_t m = 0; m < x.length(); ++m) {
    ys[m] = -evaluate(x.table()->add_reduced(m), xs, ys, f);
  }
  return WittVector(x.table(), std::move(ys));
}

WittVector witt_sub(const WittVector& x, const WittVector& y) { return witt_add(x, witt_neg(y)); }

WittVector witt_frobenius(const WittVector& x) {
  std::vector<PuiseuxSeries> out;
  for (const auto& c : x.components()) out.push_back(c.frobenius());
  return WittVector(x.table(), std::move(out));
}

WittVector witt_times_p(const WittVector& x) {
  std::vector<PuiseuxSeries> out(x.length(), PuiseuxSeries::zero(x.field()));
  for (std::size_t j = 1; j < x.length(); ++j) out[j] = x[j - 1].frobenius();
  return WittVector(x.table(), std::move(out));
}

WittVector witt_scale(const WittVector& x, const mpz_class& k) {
  if (k < 0) return witt_neg(witt_scale(x, -k));
  WittVector result = WittVector::zero(x.table(), x.field());
  WittVector base = x;
  mpz_class rest = k;
  while (rest > 0) {
    if (mpz_odd_p(rest.get_mpz_t())) result = witt_add(result, base);
    rest >>= 1;
    if (rest > 0) base = witt_add(base, base);
  }
  return result;
}

bool witt_agrees(const WittVector& x, const WittVector& y, const ExtRational& upto) {
  if (x.length() != y.length()) return false;
  for (std::size_t j = 0; j < x.length(); ++j) {
    if (!x[j].agrees_with(y[j], upto * p_power(x.p(), j))) return false;
  }
  return true;
}

std::uint64_t legendre_np(std::uint64_t s, std::uint32_t p) {
  std::uint64_t total = 0;
  std::uint64_t m = s * p;
  while (m) {
    m /= p;
    total += m;
  }
  return total;
}

bool teich_divides(const Rational& q, const WittVector& x, std::size_t m) {
  if (m >= x.length()) throw std::invalid_argument("teich_divides index out of range");
  for (std::size_t j = 0; j <= m; ++j) {
    if (!valuation_at_least(x[j], q * p_power(x.p(), j))) return false;
  }
  return true;
}

IdealParameters::IdealParameters(Rational i_, std::uint32_t n_) : i(std::move(i_)), n(n_) {
  if (!(Rational(0) < i) || Rational(1) < i) throw SemanticError("i must lie in (0, 1], got " + i.str());
  if (n == 0) throw SemanticError("ideal level n must be positive");
}

std::vector<std::pair<std::uint64_t, std::size_t>> ideal_constraints(std::uint32_t p, std::uint32_t n) {
  std::vector<std::pair<std::uint64_t, std::size_t>> out;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t room = n - 1 - j;
    std::uint64_t s = 1;
    while (legendre_np(s, p) <= room) ++s;
    out.emplace_back(s, j);
  }
  return out;
}

bool ideal_membership(const WittVector& x, const IdealParameters& params) {
  if (params.n != x.length()) throw std::invalid_argument("ideal level does not match the Witt length");
  for (const auto& [s, j] : ideal_constraints(x.p(), params.n)) {
    const Rational threshold = Rational(static_cast<long>(s)) * params.i * p_power(x.p(), j);
    if (!valuation_at_least(x[j], threshold)) return false;
  }
  return true;
}

ExtRational lower_index_unclamped(const WittVector& x) {
  ExtRational certified = ExtRational::infinity();
  std::vector<Rational> bounds;
  for (const auto& [s, j] : ideal_constraints(x.p(), static_cast<std::uint32_t>(x.length()))) {
    const PuiseuxSeries& c = x[j];
    if (c.is_zero()) continue;
    const Rational scale = Rational(static_cast<long>(s)) * p_power(x.p(), j);
    if (!c.terms().empty()) {
      certified = min(certified, ExtRational(c.terms().front().exponent / scale));
    } else {
      bounds.push_back(c.precision().value() / scale);
    }
  }
  for (const auto& b : bounds) {
    if (ExtRational(b) < certified) {
      throw PrecisionExhausted("lower index not certified: a component is only known to be O(u^" +
                               (b).str() + ") after scaling");
    }
  }
  return certified;
}

ExtRational lower_index(const WittVector& x) {
  ExtRational v = lower_index_unclamped(x);
  if (v.is_finite() && Rational(1) < v.value()) return Rational(1);
  return v;
}

}  // namespace kisram
