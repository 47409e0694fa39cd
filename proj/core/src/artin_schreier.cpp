#include "kisram/artin_schreier.hpp"

#include "kisram/errors.hpp"

namespace kisram {

namespace {

struct LeadSolution {
  FieldPtr field;
  FiniteField::Element c;
};

// Smallest extension F_{p^{mk}} of `field` in which c^p - alpha c = beta has a
// solution (a nonzero one when beta = 0).
LeadSolution solve_lead(const FieldPtr& field, FiniteField::Element alpha, FiniteField::Element beta,
                        unsigned cap) {
  const std::uint32_t p = field->characteristic();
  const std::uint32_t m = field->degree();
  for (std::uint32_t k = 1;; ++k) {
    if (m * k > cap && k > 1) {
      throw ExtensionCapExceeded("solving c^" + std::to_string(p) + " - a c = b needs a residue field beyond F_" +
                                 std::to_string(p) + "^" + std::to_string(cap));
    }
    if (m * k > cap) continue;
    const FieldPtr G = finite_field(p, m * k);
    const auto sol = G->solve_linearized(embed(field, alpha, G), embed(field, beta, G));
    if (beta == 0) {
      if (!sol.kernel.empty()) return {G, sol.kernel.front()};
    } else if (sol.particular) {
      return {G, *sol.particular};
    }
  }
}

struct ChainResult {
  PuiseuxSeries root;
  PuiseuxSeries remainder;  // b minus what the root accounts for; residual = -remainder
};

ExtRational root_precision(const ExtRational& V, const Rational& va, std::uint32_t p) {
  if (V.is_infinite()) return V;
  return max(ExtRational(V.value() - va), ExtRational(V.value() / Rational(static_cast<long>(p))));
}

// Newton-Puiseux chain for the particular root of X^p - aX = b (a nonzero).
ChainResult run_chain(FieldPtr& F, PuiseuxSeries a, PuiseuxSeries b, const ExtRational& target,
                      const ASRootsOptions& options) {
  const std::uint32_t p = F->characteristic();
  const Rational P(static_cast<long>(p));
  const Rational va = a.valuation().value();
  const Rational theta = P * va / (P - Rational(1));
  PuiseuxSeries s = PuiseuxSeries::zero(F);
  std::size_t steps = 0;
  std::size_t frontier_steps = 0;
  const bool unreachable_frontier = target.is_infinite() || !(target.value() < theta);
  while (!b.terms().empty()) {
    const Rational beta = b.terms().front().exponent;
    if (target.is_finite() && !(beta < target.value())) break;
    if (++steps > options.max_steps) {
      if (options.lenient) break;
      throw PrecisionExhausted("Artin-Schreier chain did not reach the target within the step limit");
    }
    const auto beta0 = b.terms().front().coeff;
    PuiseuxSeries tau;
    if (beta < theta) {
      if (unreachable_frontier && ++frontier_steps > options.frontier_steps) {
        if (options.lenient) break;
        throw PrecisionExhausted("residual target " + target.str() + " lies beyond the accumulation frontier " +
                                 theta.str() + " of X^p - aX - b");
      }
      tau = PuiseuxSeries::monomial(F, F->pth_root(beta0), beta / P);
    } else if (beta > theta) {
      const auto alpha = a.leading_coefficient();
      tau = PuiseuxSeries::monomial(F, F->neg(F->mul(beta0, F->inv(alpha))), beta - va);
    } else {
      const auto lead = solve_lead(F, a.leading_coefficient(), beta0, options.extension_cap);
      if (lead.field != F) {
        F = lead.field;
        a = a.embedded(F);
        b = b.embedded(F);
        s = s.embedded(F);
      }
      tau = PuiseuxSeries::monomial(F, lead.c, beta / P);
    }
    s += tau;
    b = b - tau.frobenius() + a * tau;
  }
  if (b.terms().empty() && b.precision() < target && !options.lenient) {
    throw PrecisionExhausted("residual only certified to O(u^" + b.precision().str() + "), target " + target.str());
  }
  return {s, b};
}

}  // namespace

PuiseuxSeries as_residual(const PuiseuxSeries& x, const PuiseuxSeries& a, const PuiseuxSeries& b) {
  return x.frobenius() - a * x - b;
}

NewtonPolygon as_newton_polygon(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  const FieldPtr F = common_field(a, b);
  if (!F) throw std::invalid_argument("Newton polygon of X^p needs a field");
  std::vector<NewtonVertex> pts;
  if (!b.is_zero()) pts.push_back({0, b.valuation().value()});
  if (!a.is_zero()) pts.push_back({1, a.valuation().value()});
  pts.push_back({static_cast<long long>(F->characteristic()), Rational(0)});
  if (pts.size() < 2) pts.insert(pts.begin(), {1, Rational(0)});
  return NewtonPolygon(std::move(pts));
}

ASRoots as_roots(const PuiseuxSeries& a0, const PuiseuxSeries& b0, const ExtRational& target,
                 const ASRootsOptions& options) {
  FieldPtr F = common_field(a0, b0);
  if (!F) throw std::invalid_argument("as_roots needs a field (both inputs are fieldless zeros)");
  const std::uint32_t p = F->characteristic();
  PuiseuxSeries a = a0.embedded(F);
  PuiseuxSeries b = b0.embedded(F);
  ASRoots out;

  if (a.terms().empty()) {
    if (!a.is_exact()) throw PrecisionExhausted("coefficient a is O(u^" + a.precision().str() + ")");
    // X^p = b has the single root b^{1/p} of multiplicity p.
    const PuiseuxSeries root = b.pth_root();
    out.field = F;
    out.multiplicity = p;
    out.particular = root;
    out.homogeneous = PuiseuxSeries::zero(F);
    out.roots = {root};
    out.residual_valuation = b.precision();
    if (!options.lenient && out.residual_valuation < target) {
      throw PrecisionExhausted("b is only known to O(u^" + b.precision().str() + ")");
    }
    return out;
  }

  const Rational va = a.valuation().value();
  const Rational P(static_cast<long>(p));

  // Homogeneous root t = c u^{v(a)/(p-1)} + corrections with c^{p-1} = lead(a).
  const auto lead = solve_lead(F, a.leading_coefficient(), 0, options.extension_cap);
  if (lead.field != F) {
    F = lead.field;
    a = a.embedded(F);
    b = b.embedded(F);
  }
  const PuiseuxSeries t0 = PuiseuxSeries::monomial(F, lead.c, va / (P - Rational(1)));
  ChainResult hom = run_chain(F, a, a * t0 - t0.frobenius(), target, options);
  ChainResult part = run_chain(F, a.embedded(F), b.embedded(F), target, options);
  // The particular chain may have extended F further.
  PuiseuxSeries t = (t0.embedded(F) + hom.root.embedded(F));
  const ExtRational Vt = hom.remainder.valuation_bound();
  const ExtRational Vs = part.remainder.valuation_bound();
  const ExtRational V = min(Vt, Vs);

  out.field = F;
  out.residual_valuation = V;
  out.homogeneous = t.truncated(root_precision(Vt, va, p));
  out.particular = part.root.embedded(F).truncated(root_precision(Vs, va, p));
  for (std::uint32_t lambda = 0; lambda < p; ++lambda) {
    out.roots.push_back(out.particular + out.homogeneous.scaled(F->from_integer(lambda)));
  }
  return out;
}

}  // namespace kisram
