#include "kisram/newton_polygon.hpp"

#include <algorithm>
#include <stdexcept>

namespace kisram {

NewtonPolygon::NewtonPolygon(std::vector<NewtonVertex> points) {
  if (points.size() < 2) throw std::invalid_argument("Newton polygon needs at least two points");
  std::sort(points.begin(), points.end(),
            [](const NewtonVertex& a, const NewtonVertex& b) { return a.exponent < b.exponent; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].exponent == points[i - 1].exponent) {
      throw std::invalid_argument("Newton polygon exponents must be distinct");
    }
  }
  // Monotone chain, lower hull only.
  auto cross = [](const NewtonVertex& o, const NewtonVertex& a, const NewtonVertex& b) {
    return Rational(static_cast<long>(a.exponent - o.exponent)) * (b.valuation - o.valuation) -
           (a.valuation - o.valuation) * Rational(static_cast<long>(b.exponent - o.exponent));
  };
  for (const auto& pt : points) {
    while (vertices_.size() >= 2 && cross(vertices_[vertices_.size() - 2], vertices_.back(), pt) <= Rational(0)) {
      vertices_.pop_back();
    }
    vertices_.push_back(pt);
  }
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const long long len = vertices_[i].exponent - vertices_[i - 1].exponent;
    segments_.push_back({(vertices_[i].valuation - vertices_[i - 1].valuation) / Rational(static_cast<long>(len)), len});
  }
}

std::vector<std::pair<Rational, long long>> NewtonPolygon::root_valuations() const {
  std::vector<std::pair<Rational, long long>> out;
  for (const auto& s : segments_) out.emplace_back(-s.slope, s.length);
  return out;
}

}  // namespace kisram
