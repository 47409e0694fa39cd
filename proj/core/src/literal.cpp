#include "kisram/literal.hpp"

#include <cctype>
#include <functional>

#include "kisram/errors.hpp"

namespace kisram {

namespace {

class Cursor {
 public:
  Cursor(std::string_view text, SourcePos pos) : s_(text), pos_(pos) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, pos_.line, pos_.column + i_);
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'" + (at_end() ? " at end of input" : ""));
  }
  mpz_class integer() {
    skip_ws();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected a number");
    return mpz_class(std::string(s_.substr(start, i_ - start)));
  }
  Rational rational() {
    const bool paren = accept('(');
    const bool negative = accept('-');
    mpz_class num = integer();
    mpz_class den = 1;
    if (accept('/')) {
      den = integer();
      if (den == 0) fail("zero denominator");
    }
    if (paren) expect(')');
    if (negative) num = -num;
    return Rational(num, den);
  }
  std::size_t offset() const { return i_; }
  void rewind(std::size_t offset) { i_ = offset; }
  SourcePos pos_at(std::size_t offset) const { return {pos_.line, pos_.column + offset}; }
  std::string_view text() const { return s_; }

 private:
  std::string_view s_;
  SourcePos pos_;
  std::size_t i_ = 0;
};

FiniteField::Element integer_in(const FieldPtr& field, const mpz_class& v) {
  mpz_class r = v % field->characteristic();
  if (r < 0) r += field->characteristic();
  return field->from_integer(r.get_si());
}

// g or g^k.
FiniteField::Element generator_power(Cursor& c, const FieldPtr& field) {
  c.expect('g');
  if (field->degree() == 1) c.fail("'g' needs an extension field (f > 1)");
  std::uint64_t k = 1;
  if (c.accept('^')) k = c.integer().get_ui();
  return field->pow(field->generator(), k);
}

FiniteField::Element field_atom(Cursor& c, const FieldPtr& field) {
  if (c.peek() == 'g') return generator_power(c, field);
  const FiniteField::Element v = integer_in(field, c.integer());
  const std::size_t mark = c.offset();
  if (c.accept('*')) {
    if (c.peek() == 'g') return field->mul(v, generator_power(c, field));
    c.rewind(mark);
  }
  return v;
}

FiniteField::Element field_coefficient(Cursor& c, const FieldPtr& field) {
  if (!c.accept('(')) return field_atom(c, field);
  FiniteField::Element acc = 0;
  bool first = true;
  for (;;) {
    bool negative = false;
    if (c.accept('-')) {
      negative = true;
    } else if (!first && !c.accept('+')) {
      break;
    }
    const FiniteField::Element v = field_atom(c, field);
    acc = field->add(acc, negative ? field->neg(v) : v);
    first = false;
  }
  c.expect(')');
  return acc;
}

// Parses `[coef*]u[^q]` or `coef`; returns the exponent (0 when u is absent).
template <class Coef>
Rational monomial(Cursor& c, Coef& coef, const std::function<Coef()>& read_coef, const Coef& unit) {
  if (c.peek() == 'u') {
    coef = unit;
  } else {
    coef = read_coef();
    if (!c.accept('*')) return Rational(0);
    if (c.peek() != 'u') c.fail("expected 'u' after '*'");
  }
  c.expect('u');
  return c.accept('^') ? c.rational() : Rational(1);
}

}  // namespace

PuiseuxSeries parse_series(std::string_view text, const FieldPtr& field, const Rational& exponent_scale,
                           SourcePos pos) {
  Cursor c(text, pos);
  std::vector<Term> terms;
  ExtRational precision = ExtRational::infinity();
  bool first = true;
  if (c.at_end()) c.fail("empty series literal");
  while (!c.at_end()) {
    bool negative = false;
    if (c.accept('-')) {
      negative = true;
    } else if (!first) {
      c.expect('+');
    }
    first = false;
    if (c.peek() == 'O') {
      c.expect('O');
      c.expect('(');
      c.expect('u');
      const Rational q = c.accept('^') ? c.rational() : Rational(1);
      c.expect(')');
      precision = min(precision, ExtRational(q * exponent_scale));
      continue;
    }
    FiniteField::Element coef = 0;
    const Rational q = monomial<FiniteField::Element>(
        c, coef, [&] { return field_coefficient(c, field); }, FiniteField::Element{1});
    if (q < Rational(0)) c.fail("negative exponent");
    terms.push_back({q * exponent_scale, negative ? field->neg(coef) : coef});
  }
  return PuiseuxSeries::from_terms(field, std::move(terms), precision);
}

WittVector parse_witt(std::string_view text, const WittTablePtr& table, const FieldPtr& field, SourcePos pos) {
  Cursor c(text, pos);
  c.expect('[');
  std::vector<PuiseuxSeries> comps;
  const std::string_view s = c.text();
  std::size_t start = c.offset();
  int depth = 0;
  std::size_t close = std::string_view::npos;
  for (std::size_t k = start; k < s.size(); ++k) {
    const char ch = s[k];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == ',' || ch == ']')) {
      comps.push_back(parse_series(s.substr(start, k - start), field, Rational(1), c.pos_at(start)));
      start = k + 1;
      if (ch == ']') {
        close = k;
        break;
      }
    }
  }
  if (close == std::string_view::npos) c.fail("unterminated Witt vector literal");
  for (std::size_t k = close + 1; k < s.size(); ++k) {
    if (!std::isspace(static_cast<unsigned char>(s[k]))) {
      throw ParseError("unexpected text after ']'", pos.line, pos.column + k);
    }
  }
  if (comps.size() != table->n()) {
    throw ParseError("Witt vector has " + std::to_string(comps.size()) + " components, expected " +
                         std::to_string(table->n()),
                     pos.line, pos.column);
  }
  return WittVector(table, std::move(comps));
}

ZPoly parse_zpoly(std::string_view text, const mpz_class& modulus, SourcePos pos) {
  Cursor c(text, pos);
  ZPoly out;
  bool first = true;
  if (c.at_end()) c.fail("empty polynomial literal");
  while (!c.at_end()) {
    bool negative = false;
    if (c.accept('-')) {
      negative = true;
    } else if (!first) {
      c.expect('+');
    }
    first = false;
    mpz_class coef;
    const Rational q = monomial<mpz_class>(c, coef, [&] { return c.integer(); }, mpz_class(1));
    if (!q.is_integer() || q < Rational(0)) c.fail("exponents must be nonnegative integers");
    mpz_class& slot = out[q.floor().get_si()];
    slot += negative ? mpz_class(-coef) : coef;
  }
  ZPoly normalized;
  for (auto& [k, v] : out) {
    mpz_class r = v % modulus;
    if (r < 0) r += modulus;
    if (r != 0) normalized[k] = r;
  }
  return normalized;
}

std::string format_series_scaled(const PuiseuxSeries& s, const Rational& scale) {
  std::vector<Term> terms;
  for (const auto& t : s.terms()) terms.push_back({t.exponent * scale, t.coeff});
  const ExtRational prec = s.precision().is_infinite() ? s.precision() : ExtRational(s.precision().value() * scale);
  if (!s.field()) return PuiseuxSeries::zero(nullptr, prec).str();
  return PuiseuxSeries::from_terms(s.field(), std::move(terms), prec).str();
}

}  // namespace kisram
