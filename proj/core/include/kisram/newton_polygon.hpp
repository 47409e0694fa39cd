#pragma once

#include <utility>
#include <vector>

#include "kisram/rational.hpp"

namespace kisram {

struct NewtonVertex {
  long long exponent;
  Rational valuation;

  friend bool operator==(const NewtonVertex&, const NewtonVertex&) = default;
};

struct NewtonSegment {
  Rational slope;
  long long length;

  friend bool operator==(const NewtonSegment&, const NewtonSegment&) = default;
};

/// Lower convex hull of points (exponent, valuation), e.g. the valuations of the
/// coefficients of a polynomial in one variable.
class NewtonPolygon {
 public:
  /// Requires at least two points with distinct exponents.
  explicit NewtonPolygon(std::vector<NewtonVertex> points);

  const std::vector<NewtonVertex>& vertices() const { return vertices_; }
  const std::vector<NewtonSegment>& segments() const { return segments_; }
  /// (valuation, multiplicity) of the roots: (-slope, length) per segment.
  std::vector<std::pair<Rational, long long>> root_valuations() const;

 private:
  std::vector<NewtonVertex> vertices_;
  std::vector<NewtonSegment> segments_;
};

}  // namespace kisram
