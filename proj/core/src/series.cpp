#include "kisram/series.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "kisram/errors.hpp"

namespace kisram {

namespace {

bool below(const Rational& q, const ExtRational& precision) {
  return precision.is_infinite() || q < precision.value();
}

}  // namespace

PuiseuxSeries::PuiseuxSeries(FieldPtr field, ExtRational precision)
    : field_(std::move(field)), precision_(std::move(precision)) {}

PuiseuxSeries PuiseuxSeries::from_terms(FieldPtr field, std::vector<Term> terms, ExtRational precision) {
  PuiseuxSeries out(std::move(field), std::move(precision));
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  for (auto& t : terms) {
    if (!below(t.exponent, out.precision_)) break;
    if (!out.terms_.empty() && out.terms_.back().exponent == t.exponent) {
      out.terms_.back().coeff = out.field_->add(out.terms_.back().coeff, t.coeff);
      if (out.terms_.back().coeff == 0) out.terms_.pop_back();
      continue;
    }
    if (t.coeff == 0) continue;
    if (!out.field_) throw std::logic_error("series terms without a field");
    out.terms_.push_back(std::move(t));
  }
  return out;
}

PuiseuxSeries PuiseuxSeries::monomial(FieldPtr field, Element coeff, Rational exponent, ExtRational precision) {
  std::vector<Term> t;
  t.push_back({std::move(exponent), coeff});
  return from_terms(std::move(field), std::move(t), std::move(precision));
}

PuiseuxSeries PuiseuxSeries::constant(FieldPtr field, Element coeff) {
  return monomial(std::move(field), coeff, Rational(0));
}

PuiseuxSeries PuiseuxSeries::zero(FieldPtr field, ExtRational precision) {
  return PuiseuxSeries(std::move(field), std::move(precision));
}

ExtRational PuiseuxSeries::valuation() const {
  if (!terms_.empty()) return terms_.front().exponent;
  if (is_exact()) return ExtRational::infinity();
  throw PrecisionExhausted("valuation not certified: series is O(u^" + precision_.str() + ")");
}

ExtRational PuiseuxSeries::valuation_bound() const {
  if (!terms_.empty()) return min(ExtRational(terms_.front().exponent), precision_);
  return precision_;
}

PuiseuxSeries::Element PuiseuxSeries::leading_coefficient() const {
  if (!terms_.empty()) return terms_.front().coeff;
  if (is_exact()) return 0;
  throw PrecisionExhausted("leading coefficient not certified: series is O(u^" + precision_.str() + ")");
}

PuiseuxSeries::Element PuiseuxSeries::coefficient(const Rational& q) const {
  if (!below(q, precision_)) {
    throw PrecisionExhausted("coefficient of u^" + q.str() + " beyond precision " + precision_.str());
  }
  auto it = std::lower_bound(terms_.begin(), terms_.end(), q,
                             [](const Term& t, const Rational& e) { return t.exponent < e; });
  return (it != terms_.end() && it->exponent == q) ? it->coeff : 0;
}

FieldPtr common_field(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  return common_field(a.field(), b.field());
}

PuiseuxSeries PuiseuxSeries::embedded(const FieldPtr& target) const {
  if (field_ == target) return *this;
  PuiseuxSeries out(target, precision_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.exponent, field_ ? embed(field_, t.coeff, target) : t.coeff});
  return out;
}

PuiseuxSeries PuiseuxSeries::operator-() const {
  PuiseuxSeries out = *this;
  for (auto& t : out.terms_) t.coeff = field_->neg(t.coeff);
  return out;
}

PuiseuxSeries operator+(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
  const FieldPtr F = common_field(a0, b0);
  const PuiseuxSeries a = a0.embedded(F);
  const PuiseuxSeries b = b0.embedded(F);
  PuiseuxSeries out(F, min(a.precision_, b.precision_));
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  auto push = [&](const Rational& e, PuiseuxSeries::Element c) {
    if (c != 0 && below(e, out.precision_)) out.terms_.push_back({e, c});
  };
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->exponent < ib->exponent)) {
      push(ia->exponent, ia->coeff);
      ++ia;
    } else if (ia == a.terms_.end() || ib->exponent < ia->exponent) {
      push(ib->exponent, ib->coeff);
      ++ib;
    } else {
      push(ia->exponent, F->add(ia->coeff, ib->coeff));
      ++ia;
      ++ib;
    }
  }
  return out;
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  return PuiseuxSeries::mul_truncated(a, b, ExtRational::infinity());
}

PuiseuxSeries PuiseuxSeries::mul_truncated(const PuiseuxSeries& a0, const PuiseuxSeries& b0,
                                           const ExtRational& cap) {
  const FieldPtr F = common_field(a0, b0);
  if (a0.is_zero() || b0.is_zero()) return zero(F);
  const PuiseuxSeries a = a0.embedded(F);
  const PuiseuxSeries b = b0.embedded(F);
  ExtRational precision = min(a.precision_ + b.valuation_bound(), b.precision_ + a.valuation_bound());
  precision = min(precision, cap);
  std::map<Rational, Element> acc;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Rational e = ta.exponent + tb.exponent;
      if (!below(e, precision)) break;
      auto [it, inserted] = acc.try_emplace(std::move(e), 0);
      it->second = F->add(it->second, F->mul(ta.coeff, tb.coeff));
    }
  }
  PuiseuxSeries out(F, precision);
  out.terms_.reserve(acc.size());
  for (auto& [e, c] : acc) {
    if (c != 0) out.terms_.push_back({e, c});
  }
  return out;
}

PuiseuxSeries PuiseuxSeries::frobenius() const {
  if (!field_) return *this;
  const Rational p(static_cast<long>(field_->characteristic()));
  PuiseuxSeries out(field_, precision_ * p);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.exponent * p, field_->frobenius(t.coeff)});
  return out;
}

PuiseuxSeries PuiseuxSeries::pth_root() const {
  if (!field_) return *this;
  const Rational p(static_cast<long>(field_->characteristic()));
  PuiseuxSeries out(field_, precision_ / p);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.exponent / p, field_->pth_root(t.coeff)});
  return out;
}

PuiseuxSeries PuiseuxSeries::inverse(const ExtRational& cap) const {
  if (terms_.empty()) {
    if (is_exact()) throw NonUnit("inverse of zero");
    throw PrecisionExhausted("cannot invert O(u^" + precision_.str() + ")");
  }
  if (terms_.front().exponent != Rational(0)) {
    throw NonUnit("series of valuation " + terms_.front().exponent.str() + " is not a unit");
  }
  const Element c0_inv = field_->inv(terms_.front().coeff);
  // x = c0 (1 + y) with v(y) > 0.
  PuiseuxSeries y = scaled(c0_inv) - constant(field_, 1);
  const ExtRational target = min(precision_, cap);
  if (y.is_zero()) return constant(field_, c0_inv);
  if (target.is_infinite()) {
    throw PrecisionExhausted("inverse of an exact non-monomial series needs a finite cap");
  }
  const PuiseuxSeries one = constant(field_, 1);
  PuiseuxSeries r = one.truncated(target);
  const ExtRational vy = y.valuation_bound();
  std::size_t max_iter = 2;
  if (vy.is_finite()) {
    const Rational ratio = target.value() / vy.value();
    max_iter += static_cast<std::size_t>(ratio.ceil().get_ui());
  }
  for (std::size_t k = 0; k < max_iter; ++k) {
    PuiseuxSeries next = one - mul_truncated(y, r, target);
    next = next.truncated(target);
    if (next.terms_ == r.terms_) break;
    r = std::move(next);
  }
  return r.scaled(c0_inv);
}

PuiseuxSeries PuiseuxSeries::pow(std::uint64_t k) const {
  if (!field_) {
    if (k == 0) throw std::logic_error("zero^0 without a field");
    return *this;
  }
  const std::uint32_t p = field_->characteristic();
  PuiseuxSeries result = constant(field_, 1);
  PuiseuxSeries base = *this;
  while (k) {
    const std::uint64_t d = k % p;
    for (std::uint64_t i = 0; i < d; ++i) result = result * base;
    k /= p;
    if (k) base = base.frobenius();
  }
  return result;
}

PuiseuxSeries PuiseuxSeries::shifted(const Rational& delta) const {
  PuiseuxSeries out(field_, precision_.is_infinite() ? precision_ : ExtRational(precision_.value() + delta));
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.exponent += delta;
  return out;
}

PuiseuxSeries PuiseuxSeries::scaled(Element c) const {
  if (c == 0) return zero(field_);
  PuiseuxSeries out = *this;
  for (auto& t : out.terms_) t.coeff = field_->mul(t.coeff, c);
  return out;
}

PuiseuxSeries PuiseuxSeries::truncated(const ExtRational& cap) const {
  PuiseuxSeries out(field_, min(precision_, cap));
  for (const auto& t : terms_) {
    if (!below(t.exponent, out.precision_)) break;
    out.terms_.push_back(t);
  }
  return out;
}

bool PuiseuxSeries::agrees_with(const PuiseuxSeries& o, const ExtRational& upto) const {
  const ExtRational bound = min(upto, min(precision_, o.precision_));
  const PuiseuxSeries diff = (*this - o).truncated(bound);
  return diff.terms_.empty();
}

std::string PuiseuxSeries::str() const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    const bool constant_term = t.exponent.is_zero();
    if (constant_term) {
      out += field_->format(t.coeff);
      continue;
    }
    if (t.coeff != 1) out += field_->format(t.coeff) + "*";
    out += "u";
    if (t.exponent != Rational(1)) out += "^" + t.exponent.str();
  }
  if (precision_.is_finite()) {
    if (!out.empty()) out += " + ";
    out += "O(u^" + precision_.value().str() + ")";
  }
  return out.empty() ? "0" : out;
}

bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  if (a.terms_ != b.terms_ || a.precision_ != b.precision_) return false;
  if (a.terms_.empty()) return true;
  return a.field_ == b.field_;
}

}  // namespace kisram
