#include "kisram/matrix.hpp"

#include <map>

namespace kisram {

SeriesMatrix identity_matrix(std::size_t n, const FieldPtr& field) {
  SeriesMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = PuiseuxSeries::constant(field, 1);
  return out;
}

SeriesMatrix mul_truncated(const SeriesMatrix& a, const SeriesMatrix& b, const ExtRational& cap) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shapes do not compose");
  SeriesMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      PuiseuxSeries acc;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += PuiseuxSeries::mul_truncated(a(i, k), b(k, j), cap);
      out(i, j) = acc.truncated(cap);
    }
  return out;
}

namespace {

// Determinant of the minor on rows [row, n) and the columns in `mask`.
PuiseuxSeries minor_det(const SeriesMatrix& m, std::size_t row, unsigned mask,
                        std::map<std::pair<std::size_t, unsigned>, PuiseuxSeries>& memo) {
  const std::size_t n = m.rows();
  if (row == n) return PuiseuxSeries::constant(common_field(m), 1);
  auto key = std::make_pair(row, mask);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  PuiseuxSeries acc;
  bool negate = false;
  for (std::size_t c = 0; c < n; ++c) {
    if (!(mask & (1u << c))) continue;
    const PuiseuxSeries& entry = m(row, c);
    if (!entry.is_zero()) {
      PuiseuxSeries term = entry * minor_det(m, row + 1, mask & ~(1u << c), memo);
      acc = negate ? acc - term : acc + term;
    }
    negate = !negate;
  }
  memo.emplace(key, acc);
  return acc;
}

}  // namespace

PuiseuxSeries determinant(const SeriesMatrix& m) {
  if (!m.is_square() || m.rows() == 0) throw std::invalid_argument("determinant needs a nonempty square matrix");
  if (m.rows() > 16) throw std::invalid_argument("determinant size limit exceeded");
  std::map<std::pair<std::size_t, unsigned>, PuiseuxSeries> memo;
  PuiseuxSeries d = minor_det(m, 0, (1u << m.rows()) - 1, memo);
  if (d.is_zero()) return PuiseuxSeries::zero(common_field(m));
  return d;
}

SeriesMatrix adjugate(const SeriesMatrix& m) {
  const std::size_t n = m.rows();
  if (!m.is_square() || n == 0) throw std::invalid_argument("adjugate needs a nonempty square matrix");
  SeriesMatrix out(n, n);
  if (n == 1) {
    out(0, 0) = PuiseuxSeries::constant(common_field(m), 1);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SeriesMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      PuiseuxSeries d = determinant(minor);
      out(i, j) = ((i + j) % 2) ? -d : d;
    }
  return out;
}

SeriesMatrix frobenius(const SeriesMatrix& m) {
  return m.map([](const PuiseuxSeries& x) { return x.frobenius(); });
}

SeriesMatrix shifted(const SeriesMatrix& m, const Rational& delta) {
  return m.map([&](const PuiseuxSeries& x) { return x.shifted(delta); });
}

SeriesMatrix truncated(const SeriesMatrix& m, const ExtRational& cap) {
  return m.map([&](const PuiseuxSeries& x) { return x.truncated(cap); });
}

SeriesMatrix embedded(const SeriesMatrix& m, const FieldPtr& field) {
  return m.map([&](const PuiseuxSeries& x) { return x.embedded(field); });
}

ExtRational valuation_bound(const SeriesMatrix& m) {
  ExtRational v = ExtRational::infinity();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v = min(v, m(i, j).valuation_bound());
  return v;
}

ExtRational precision(const SeriesMatrix& m) {
  ExtRational v = ExtRational::infinity();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v = min(v, m(i, j).precision());
  return v;
}

bool agrees_with(const SeriesMatrix& a, const SeriesMatrix& b, const ExtRational& upto) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).agrees_with(b(i, j), upto)) return false;
  return true;
}

FieldPtr common_field(const SeriesMatrix& m) {
  FieldPtr f;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) f = common_field(f, m(i, j).field());
  return f;
}

std::string format(const SeriesMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += m(i, j).str();
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace kisram
