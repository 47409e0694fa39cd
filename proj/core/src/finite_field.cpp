#include "kisram/finite_field.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "kisram/errors.hpp"

namespace kisram {

namespace {

constexpr std::uint64_t kTableThreshold = 1u << 17;

// Dense polynomials over F_p, coefficients low to high, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint32_t lead_inv = inv_mod(f.back(), p);
  while (a.size() > df) {
    const std::uint64_t c = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * f[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    }
  }
  return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Ben-Or: f of degree m is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= m/2.
bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t m = f.size() - 1;
  if (m == 1) return true;
  Poly xpi{0, 1};
  for (std::size_t i = 1; i <= m / 2; ++i) {
    xpi = poly_powmod(xpi, p, f, p);
    Poly diff = xpi;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    const Poly g = poly_gcd(f, diff, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::uint64_t checked_power(std::uint32_t p, std::uint32_t m) {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (q > std::numeric_limits<std::uint64_t>::max() / 4 / p) {
      throw Unsupported("field F_" + std::to_string(p) + "^" + std::to_string(m) + " is too large");
    }
    q *= p;
  }
  return q;
}

// Gaussian elimination over F_p for the linear system M c = rhs (M is dim x dim, column-major
// images of the basis vectors). Returns particular solution (free variables zero) and kernel basis.
struct LinearResult {
  std::optional<std::vector<std::uint32_t>> particular;
  std::vector<std::vector<std::uint32_t>> kernel;
};

LinearResult solve_mod_p(std::vector<std::vector<std::uint32_t>> rows, std::vector<std::uint32_t> rhs,
                         std::uint32_t p) {
  const std::size_t n = rows.size();
  std::vector<int> pivot_col_of_row;
  std::vector<int> pivot_row_of_col(n, -1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t sel = r;
    while (sel < n && rows[sel][c] == 0) ++sel;
    if (sel == n) continue;
    std::swap(rows[sel], rows[r]);
    std::swap(rhs[sel], rhs[r]);
    const std::uint64_t iv = inv_mod(rows[r][c], p);
    for (std::size_t k = 0; k < n; ++k) rows[r][k] = static_cast<std::uint32_t>(rows[r][k] * iv % p);
    rhs[r] = static_cast<std::uint32_t>(rhs[r] * iv % p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const std::uint64_t factor = rows[i][c];
      for (std::size_t k = 0; k < n; ++k) {
        rows[i][k] = static_cast<std::uint32_t>((rows[i][k] + p - factor * rows[r][k] % p) % p);
      }
      rhs[i] = static_cast<std::uint32_t>((rhs[i] + p - factor * rhs[r] % p) % p);
    }
    pivot_row_of_col[c] = static_cast<int>(r);
    ++r;
  }
  LinearResult out;
  bool consistent = true;
  for (std::size_t i = r; i < n; ++i) {
    if (rhs[i] != 0) consistent = false;
  }
  if (consistent) {
    std::vector<std::uint32_t> x(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
      if (pivot_row_of_col[c] >= 0) x[c] = rhs[static_cast<std::size_t>(pivot_row_of_col[c])];
    }
    out.particular = std::move(x);
  }
  for (std::size_t free = 0; free < n; ++free) {
    if (pivot_row_of_col[free] >= 0) continue;
    std::vector<std::uint32_t> x(n, 0);
    x[free] = 1;
    for (std::size_t c = 0; c < n; ++c) {
      const int row = pivot_row_of_col[c];
      if (row < 0) continue;
      x[c] = (p - rows[static_cast<std::size_t>(row)][free]) % p;
    }
    out.kernel.push_back(std::move(x));
  }
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FiniteField::FiniteField(std::uint32_t p, std::uint32_t degree) : p_(p), m_(degree) {
  if (!is_prime(p)) throw SemanticError("p must be prime (got " + std::to_string(p) + ")");
  if (degree == 0) throw SemanticError("field degree must be positive");
  q_ = checked_power(p, degree);
  // Smallest monic irreducible by coefficient code.
  for (std::uint64_t code = 0; code < q_; ++code) {
    Poly f(m_ + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < m_; ++i) {
      f[i] = static_cast<std::uint32_t>(c % p_);
      c /= p_;
    }
    f[m_] = 1;
    if (is_irreducible(f, p_)) {
      modulus_ = std::move(f);
      break;
    }
  }
  if (modulus_.empty() || !is_irreducible(modulus_, p_)) {
    throw std::logic_error("no irreducible polynomial found");
  }
  if (m_ > 1 && q_ <= kTableThreshold) build_tables();
}

void FiniteField::build_tables() {
  // Find a primitive element: order q-1.
  std::vector<std::uint64_t> primes;
  std::uint64_t n = q_ - 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      primes.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) primes.push_back(n);
  auto slow_pow = [&](Element a, std::uint64_t k) {
    Element r = 1;
    while (k) {
      if (k & 1) r = mul_slow(r, a);
      a = mul_slow(a, a);
      k >>= 1;
    }
    return r;
  };
  Element primitive = 0;
  for (Element cand = 2; cand < q_; ++cand) {
    bool ok = true;
    for (auto r : primes) {
      if (slow_pow(cand, (q_ - 1) / r) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      primitive = cand;
      break;
    }
  }
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  Element x = 1;
  for (std::uint64_t k = 0; k + 1 < q_; ++k) {
    exp_[k] = x;
    log_[x] = static_cast<std::uint32_t>(k);
    x = mul_slow(x, primitive);
  }
}

FiniteField::Element FiniteField::from_integer(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return static_cast<Element>(r);
}

std::vector<std::uint32_t> FiniteField::digits(Element a) const {
  std::vector<std::uint32_t> d(m_, 0);
  for (std::uint32_t i = 0; i < m_; ++i) {
    d[i] = static_cast<std::uint32_t>(a % p_);
    a /= p_;
  }
  return d;
}

FiniteField::Element FiniteField::from_digits(std::span<const std::uint32_t> digits) const {
  Element r = 0;
  for (std::size_t i = digits.size(); i-- > 0;) r = r * p_ + (digits[i] % p_);
  return r;
}

FiniteField::Element FiniteField::add(Element a, Element b) const {
  if (m_ == 1) return (a + b) % p_;
  if (p_ == 2) return a ^ b;
  Element r = 0, place = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return r;
}

FiniteField::Element FiniteField::neg(Element a) const {
  if (m_ == 1) return (p_ - a) % p_;
  if (p_ == 2) return a;
  Element r = 0, place = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    r += ((p_ - a % p_) % p_) * place;
    a /= p_;
    place *= p_;
  }
  return r;
}

FiniteField::Element FiniteField::sub(Element a, Element b) const { return add(a, neg(b)); }

FiniteField::Element FiniteField::mul_slow(Element a, Element b) const {
  if (a == 0 || b == 0) return 0;
  const auto da = digits(a);
  const auto db = digits(b);
  Poly r(2 * m_ - 1, 0);
  for (std::uint32_t i = 0; i < m_; ++i) {
    if (!da[i]) continue;
    for (std::uint32_t j = 0; j < m_; ++j) {
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
    }
  }
  r = poly_mod(std::move(r), modulus_, p_);
  return from_digits(r);
}

FiniteField::Element FiniteField::mul(Element a, Element b) const {
  if (a == 0 || b == 0) return 0;
  if (m_ == 1) return a * b % p_;
  if (!exp_.empty()) {
    const std::uint64_t k = (static_cast<std::uint64_t>(log_[a]) + log_[b]) % (q_ - 1);
    return exp_[k];
  }
  return mul_slow(a, b);
}

FiniteField::Element FiniteField::pow(Element a, std::uint64_t k) const {
  if (k == 0) return 1;
  if (a == 0) return 0;
  if (!exp_.empty()) {
    const std::uint64_t e = static_cast<std::uint64_t>(log_[a]) * (k % (q_ - 1));
    return exp_[e % (q_ - 1)];
  }
  Element r = 1;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

FiniteField::Element FiniteField::inv(Element a) const {
  if (a == 0) throw std::domain_error("inverse of zero in finite field");
  if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow(a, q_ - 2);
}

FiniteField::Element FiniteField::pth_root(Element a) const {
  if (m_ == 1) return a;
  return pow(a, q_ / p_);
}

FiniteField::LinearizedSolution FiniteField::solve_linearized(Element a, Element b) const {
  // Column k of the system is the image of g^k under c -> c^p - a c.
  std::vector<std::vector<std::uint32_t>> rows(m_, std::vector<std::uint32_t>(m_, 0));
  Element basis = 1;
  for (std::uint32_t k = 0; k < m_; ++k) {
    const auto img = digits(sub(frobenius(basis), mul(a, basis)));
    for (std::uint32_t i = 0; i < m_; ++i) rows[i][k] = img[i];
    basis = mul(basis, generator());
  }
  auto lin = solve_mod_p(std::move(rows), digits(b), p_);
  LinearizedSolution out;
  if (lin.particular) out.particular = from_digits(*lin.particular);
  for (const auto& v : lin.kernel) out.kernel.push_back(from_digits(v));
  return out;
}

std::vector<FiniteField::Element> FiniteField::fixed_field_basis(std::uint32_t k) const {
  std::vector<std::vector<std::uint32_t>> rows(m_, std::vector<std::uint32_t>(m_, 0));
  std::uint64_t pk = 1;
  for (std::uint32_t i = 0; i < k; ++i) pk *= p_;
  Element basis = 1;
  for (std::uint32_t c = 0; c < m_; ++c) {
    const auto img = digits(sub(pow(basis, pk), basis));
    for (std::uint32_t i = 0; i < m_; ++i) rows[i][c] = img[i];
    basis = mul(basis, generator());
  }
  auto lin = solve_mod_p(std::move(rows), std::vector<std::uint32_t>(m_, 0), p_);
  std::vector<Element> out;
  for (const auto& v : lin.kernel) out.push_back(from_digits(v));
  return out;
}

std::string FiniteField::format(Element a) const {
  if (in_prime_field(a)) return std::to_string(a);
  const auto d = digits(a);
  std::vector<std::string> parts;
  for (std::uint32_t k = 0; k < m_; ++k) {
    if (!d[k]) continue;
    std::string t;
    if (k == 0) {
      t = std::to_string(d[k]);
    } else {
      if (d[k] != 1) t = std::to_string(d[k]) + "*";
      t += (k == 1) ? "g" : "g^" + std::to_string(k);
    }
    parts.push_back(std::move(t));
  }
  if (parts.size() == 1) return parts.front();
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " + ";
    out += parts[i];
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Registry and compatible embeddings.

namespace {

struct Registry {
  std::recursive_mutex mutex;
  std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> fields;
  // (p, m, M) -> image of the generator of F_{p^m} in F_{p^M}.
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, FiniteField::Element> images;
};

Registry& registry() {
  static Registry r;
  return r;
}

FiniteField::Element evaluate_digits(const FiniteField& F, const std::vector<std::uint32_t>& digits,
                                     FiniteField::Element x) {
  FiniteField::Element r = 0;
  for (std::size_t i = digits.size(); i-- > 0;) r = F.add(F.mul(r, x), F.from_integer(digits[i]));
  return r;
}

std::vector<FiniteField::Element> subfield_roots(const FiniteField& big, const FiniteField& small) {
  const auto basis = big.fixed_field_basis(small.degree());
  const std::uint32_t p = big.characteristic();
  std::vector<FiniteField::Element> roots;
  std::vector<std::uint32_t> coeffs(basis.size(), 0);
  const auto& f = small.modulus();
  while (true) {
    FiniteField::Element x = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (coeffs[i]) x = big.add(x, big.mul(big.from_integer(coeffs[i]), basis[i]));
    }
    if (evaluate_digits(big, f, x) == 0) roots.push_back(x);
    std::size_t i = 0;
    while (i < coeffs.size() && ++coeffs[i] == p) coeffs[i++] = 0;
    if (i == coeffs.size()) break;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<std::uint32_t> maximal_divisors(std::uint32_t M) {
  std::vector<std::uint32_t> out;
  std::uint32_t n = M;
  for (std::uint32_t r = 2; r <= n; ++r) {
    if (n % r == 0) {
      out.push_back(M / r);
      while (n % r == 0) n /= r;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FiniteField::Element generator_image(std::uint32_t p, std::uint32_t m, std::uint32_t M);

FiniteField::Element embed_impl(std::uint32_t p, std::uint32_t m, FiniteField::Element x, std::uint32_t M) {
  if (m == M || m == 1) return x;
  const auto small = finite_field(p, m);
  const auto big = finite_field(p, M);
  const auto gamma = generator_image(p, m, M);
  return evaluate_digits(*big, small->digits(x), gamma);
}

void choose_maximal_images(std::uint32_t p, std::uint32_t M) {
  auto& reg = registry();
  const auto big = finite_field(p, M);
  const auto divs = maximal_divisors(M);
  std::vector<std::uint32_t> nontrivial;
  for (auto D : divs) {
    if (D > 1) nontrivial.push_back(D);
  }
  std::vector<std::vector<FiniteField::Element>> candidates;
  for (auto D : nontrivial) candidates.push_back(subfield_roots(*big, *finite_field(p, D)));

  std::vector<FiniteField::Element> chosen(nontrivial.size(), 0);
  // Image of g_d in F_{p^M} through the maximal subfield D with root choice `root`.
  auto through = [&](std::uint32_t d, std::uint32_t D, FiniteField::Element root) {
    const auto fd = finite_field(p, D);
    const auto inner = generator_image(p, d, D);
    return evaluate_digits(*big, fd->digits(inner), root);
  };
  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == nontrivial.size()) return true;
    for (auto root : candidates[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const std::uint32_t d = std::gcd(nontrivial[i], nontrivial[j]);
        if (d <= 1) continue;
        ok = through(d, nontrivial[i], root) == through(d, nontrivial[j], chosen[j]);
      }
      if (!ok) continue;
      chosen[i] = root;
      if (search(i + 1)) return true;
    }
    return false;
  };
  if (!search(0)) throw std::logic_error("no compatible embedding system found");
  for (std::size_t i = 0; i < nontrivial.size(); ++i) reg.images[{p, nontrivial[i], M}] = chosen[i];
}

FiniteField::Element generator_image(std::uint32_t p, std::uint32_t m, std::uint32_t M) {
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  if (auto it = reg.images.find({p, m, M}); it != reg.images.end()) return it->second;
  const auto divs = maximal_divisors(M);
  if (std::find(divs.begin(), divs.end(), m) != divs.end()) {
    choose_maximal_images(p, M);
    return reg.images.at({p, m, M});
  }
  std::uint32_t through = 0;
  for (auto D : divs) {
    if (D % m == 0) {
      through = D;
      break;
    }
  }
  const auto inner = generator_image(p, m, through);
  const auto value = embed_impl(p, through, inner, M);
  reg.images[{p, m, M}] = value;
  return value;
}

}  // namespace

FieldPtr finite_field(std::uint32_t p, std::uint32_t degree) {
  if (!is_prime(p)) throw SemanticError("p must be prime (got " + std::to_string(p) + ")");
  auto& reg = registry();
  {
    std::lock_guard lock(reg.mutex);
    if (auto it = reg.fields.find({p, degree}); it != reg.fields.end()) return it->second;
  }
  auto field = std::make_shared<const FiniteField>(p, degree);
  std::lock_guard lock(reg.mutex);
  auto [it, inserted] = reg.fields.emplace(std::make_pair(p, degree), field);
  return it->second;
}

FiniteField::Element embed(const FieldPtr& from, FiniteField::Element x, const FieldPtr& to) {
  if (from == to) return x;
  if (from->characteristic() != to->characteristic() || to->degree() % from->degree() != 0) {
    throw IncompatibleFields("cannot embed F_" + std::to_string(from->characteristic()) + "^" +
                             std::to_string(from->degree()) + " into F_" +
                             std::to_string(to->characteristic()) + "^" + std::to_string(to->degree()));
  }
  return embed_impl(from->characteristic(), from->degree(), x, to->degree());
}

FieldPtr common_field(const FieldPtr& a, const FieldPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (a->characteristic() == b->characteristic()) {
    if (b->degree() % a->degree() == 0) return b;
    if (a->degree() % b->degree() == 0) return a;
  }
  throw IncompatibleFields("series live in fields with no containment relation");
}

}  // namespace kisram
