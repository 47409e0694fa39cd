#include "kisram/witt_table.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "kisram/errors.hpp"
#include "kisram/finite_field.hpp"

namespace kisram {

namespace {

void add_into(IntPoly& acc, const IntPoly& b, const mpz_class& scale = 1) {
  for (const auto& [e, c] : b) {
    auto [it, inserted] = acc.try_emplace(e, 0);
    it->second += scale * c;
    if (it->second == 0) acc.erase(it);
  }
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  IntPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<std::uint32_t> e(ea.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      auto [it, inserted] = out.try_emplace(std::move(e), 0);
      it->second += ca * cb;
      if (it->second == 0) out.erase(it);
    }
  return out;
}

IntPoly pow(IntPoly base, std::uint64_t k, std::size_t nvars) {
  IntPoly result{{std::vector<std::uint32_t>(nvars, 0), 1}};
  while (k) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

IntPoly variable(std::size_t index, std::size_t nvars) {
  std::vector<std::uint32_t> e(nvars, 0);
  e[index] = 1;
  return IntPoly{{e, 1}};
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t k) {
  std::uint64_t r = 1;
  while (k--) r *= b;
  return r;
}

// w_m of the variables starting at `offset`.
IntPoly ghost(std::uint32_t p, std::uint32_t m, std::size_t offset, std::size_t nvars) {
  IntPoly out;
  for (std::uint32_t j = 0; j <= m; ++j) {
    add_into(out, pow(variable(offset + j, nvars), ipow(p, m - j), nvars), mpz_class(ipow(p, j)));
  }
  return out;
}

// Ghost sum of the first m+1 polynomials of `polys`: sum_j p^j polys_j^{p^{m-j}}.
IntPoly ghost_of(const std::vector<IntPoly>& polys, std::uint32_t p, std::uint32_t m, std::size_t nvars) {
  IntPoly out;
  for (std::uint32_t j = 0; j <= m; ++j) add_into(out, pow(polys[j], ipow(p, m - j), nvars), mpz_class(ipow(p, j)));
  return out;
}

std::vector<WittPolynomialTable::ReducedTerm> reduce(const IntPoly& poly, std::uint32_t p) {
  std::vector<WittPolynomialTable::ReducedTerm> out;
  for (const auto& [e, c] : poly) {
    mpz_class r = c % p;
    if (r < 0) r += p;
    if (r != 0) out.push_back({e, static_cast<std::uint32_t>(r.get_ui())});
  }
  return out;
}

}  // namespace

WittPolynomialTable::WittPolynomialTable(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
  if (!is_prime(p)) throw SemanticError("p must be prime (got " + std::to_string(p) + ")");
  if (n == 0) throw SemanticError("Witt length must be positive");
  if (n > 4) throw Unsupported("Witt length " + std::to_string(n) + " exceeds the cap of 4");
  const std::size_t nvars = 2 * n;
  for (std::uint32_t m = 0; m < n; ++m) {
    const mpz_class pm(ipow(p, m));
    IntPoly gx = ghost(p, m, 0, nvars);
    IntPoly gy = ghost(p, m, n, nvars);
    IntPoly sum = gx;
    add_into(sum, gy);
    IntPoly prod = mul(gx, gy);
    for (std::uint32_t j = 0; j < m; ++j) {
      add_into(sum, pow(add_[j], ipow(p, m - j), nvars), -mpz_class(ipow(p, j)));
      add_into(prod, pow(mul_[j], ipow(p, m - j), nvars), -mpz_class(ipow(p, j)));
    }
    for (auto* poly : {&sum, &prod}) {
      for (auto& [e, c] : *poly) {
        if (!mpz_divisible_p(c.get_mpz_t(), pm.get_mpz_t())) {
          throw std::logic_error("ghost recursion division is not exact");
        }
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pm.get_mpz_t());
      }
    }
    add_.push_back(std::move(sum));
    mul_.push_back(std::move(prod));
    add_red_.push_back(reduce(add_.back(), p));
    mul_red_.push_back(reduce(mul_.back(), p));
  }
}

bool WittPolynomialTable::verify_ghost() const {
  const std::size_t nvars = 2 * n_;
  for (std::uint32_t m = 0; m < n_; ++m) {
    IntPoly gx = ghost(p_, m, 0, nvars);
    IntPoly gy = ghost(p_, m, n_, nvars);
    IntPoly expected_sum = gx;
    add_into(expected_sum, gy);
    if (ghost_of(add_, p_, m, nvars) != expected_sum) return false;
    if (ghost_of(mul_, p_, m, nvars) != mul(gx, gy)) return false;
  }
  return true;
}

WittTablePtr witt_table(std::uint32_t p, std::uint32_t n) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, WittTablePtr> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find({p, n}); it != cache.end()) return it->second;
  auto table = std::make_shared<const WittPolynomialTable>(p, n);
  cache.emplace(std::make_pair(p, n), table);
  return table;
}

std::string format_poly(const IntPoly& poly, std::uint32_t n) {
  if (poly.empty()) return "0";
  std::string out;
  // Lower total degree first.
  std::vector<std::pair<std::vector<std::uint32_t>, mpz_class>> terms(poly.begin(), poly.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    std::uint64_t da = 0, db = 0;
    for (auto x : a.first) da += x;
    for (auto x : b.first) db += x;
    return da < db;
  });
  for (const auto& [e, c] : terms) {
    std::string mono;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (!e[k]) continue;
      if (!mono.empty()) mono += "*";
      mono += (k < n ? "X_" + std::to_string(k) : "Y_" + std::to_string(k - n));
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    mpz_class mag = abs(c);
    std::string term = mono.empty() ? mag.get_str() : (mag == 1 ? mono : mag.get_str() + "*" + mono);
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + term;
    } else {
      out += (c < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

}  // namespace kisram
