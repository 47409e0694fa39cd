#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "kisram/series.hpp"
#include "kisram/witt_table.hpp"

namespace kisram {

/// Element (r_0, ..., r_{n-1}) of W_n(R) with R modeled by Puiseux series.
class WittVector {
 public:
  WittVector() = default;
  WittVector(WittTablePtr table, std::vector<PuiseuxSeries> components);

  static WittVector zero(WittTablePtr table, FieldPtr field = nullptr);
  static WittVector one(WittTablePtr table, FieldPtr field);
  /// [a] = (a, 0, ..., 0).
  static WittVector teichmuller(WittTablePtr table, const PuiseuxSeries& a);
  /// The image of an integer k (k >= 0 or negative) under Z -> W_n(F_p) -> W_n(R).
  static WittVector from_integer(WittTablePtr table, FieldPtr field, const mpz_class& k);

  const WittTablePtr& table() const { return table_; }
  std::uint32_t p() const { return table_->p(); }
  std::size_t length() const { return components_.size(); }
  const PuiseuxSeries& operator[](std::size_t j) const { return components_[j]; }
  const std::vector<PuiseuxSeries>& components() const { return components_; }
  FieldPtr field() const;
  /// Every component is the exact zero.
  bool is_zero() const;

  /// `[c_0, c_1, ...]` with series literals.
  std::string str() const;

  friend bool operator==(const WittVector& a, const WittVector& b) { return a.components_ == b.components_; }

 private:
  WittTablePtr table_;
  std::vector<PuiseuxSeries> components_;
};

WittVector witt_add(const WittVector& x, const WittVector& y);
WittVector witt_mul(const WittVector& x, const WittVector& y);
WittVector witt_neg(const WittVector& x);
WittVector witt_sub(const WittVector& x, const WittVector& y);
/// Componentwise p-th power (Frobenius of W_n over a perfect ring).
WittVector witt_frobenius(const WittVector& x);
/// p x = (0, r_0^p, ..., r_{n-2}^p).
WittVector witt_times_p(const WittVector& x);
/// k x for an integer k, by doubling and adding.
WittVector witt_scale(const WittVector& x, const mpz_class& k);
/// Components agree below min(upto * p^j, component precisions) in slot j.
bool witt_agrees(const WittVector& x, const WittVector& y, const ExtRational& upto);

/// v_p((p s)!) by Legendre's formula.
std::uint64_t legendre_np(std::uint64_t s, std::uint32_t p);

/// Does [u^q] divide (r_0, ..., r_m, 0, ...)? Componentwise: v(r_j) >= q p^j for j <= m.
bool teich_divides(const Rational& q, const WittVector& x, std::size_t m);

struct IdealParameters {
  Rational i;
  std::uint32_t n;

  /// Throws SemanticError unless 0 < i <= 1 and n >= 1.
  IdealParameters(Rational i_, std::uint32_t n_);
};

/// Pairs (s, j) constrained by the membership criterion: s >= 1 with n(s-1) < n
/// and 0 <= j <= n-1-n(s-1). For each j only the largest such s matters.
std::vector<std::pair<std::uint64_t, std::size_t>> ideal_constraints(std::uint32_t p, std::uint32_t n);

/// Membership in I_{n,i}: v(r_j) >= s i p^j for every constrained (s, j).
bool ideal_membership(const WittVector& x, const IdealParameters& params);

/// sup{i : x in I_{n,i}} = min over constrained (s, j) of v(r_j) / (s p^j),
/// clamped to at most 1; +inf for the zero vector.
ExtRational lower_index(const WittVector& x);

/// Lower index without the clamp.
ExtRational lower_index_unclamped(const WittVector& x);

}  // namespace kisram
