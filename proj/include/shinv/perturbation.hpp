#pragma once

// Controlled violations of the identities, used as negative controls.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "shinv/errors.hpp"
#include "shinv/superpotential.hpp"

namespace shinv {

enum class PerturbationKind {
  /// W1minus += size * x. Breaks the translation relation and the
  /// compatibility condition.
  w1minus_linear,
  /// W1plus += size * m * x and W1minus += size * (m-1) * x. The translation
  /// relation survives; the compatibility condition does not.
  consistent_linear,
  /// As consistent_linear with x^2 in place of x. Both partner
  /// superpotentials move by size * x^2, which the remainder cannot absorb.
  consistent_quadratic,
  /// W1plus += q + size, W1minus += q with
  ///   q'(x,m) = -size (U(x,m) + W0(x,m)) - size^2 / 2.
  /// The compatibility left side is unchanged exactly while the translation
  /// relation fails by a non-constant amount.
  translation_only,
  /// k1 += size * x. Breaks the Infeld-Hull relations.
  k1_linear,
};

inline std::string_view to_string(PerturbationKind k) {
  switch (k) {
  case PerturbationKind::w1minus_linear:
    return "w1minus-linear";
  case PerturbationKind::consistent_linear:
    return "consistent-linear";
  case PerturbationKind::consistent_quadratic:
    return "consistent-quadratic";
  case PerturbationKind::translation_only:
    return "translation-only";
  case PerturbationKind::k1_linear:
    return "k1-linear";
  }
  return "unknown";
}

inline PerturbationKind parse_perturbation_kind(std::string_view s) {
  for (auto k : {PerturbationKind::w1minus_linear,
                 PerturbationKind::consistent_linear,
                 PerturbationKind::consistent_quadratic,
                 PerturbationKind::translation_only,
                 PerturbationKind::k1_linear})
    if (to_string(k) == s)
      return k;
  throw SchemaError("unknown perturbation kind '" + std::string(s) + "'");
}

struct Perturbation {
  PerturbationKind kind = PerturbationKind::w1minus_linear;
  double size = 1e-2;
};

namespace detail {

// Antiderivative of q' from a reference point on the same side of any
// puncture as x.
inline cplx integrate_from_reference(const SuperpotentialFamily &base,
                                     double size, double x, double m) {
  const auto dom = base.domain();
  double ref;
  if (dom.finite())
    ref = 0.5 * (dom.lo + dom.hi);
  else if (std::isfinite(dom.lo))
    ref = dom.lo + base.length_scale();
  else if (std::isfinite(dom.hi))
    ref = dom.hi - base.length_scale();
  else
    ref = x < 0 ? -base.length_scale() : base.length_scale();

  auto dq = [&](double t) {
    return -size * (base.u(t, m).value + base.w0(t, m).value) - 0.5 * size * size;
  };
  auto integrate = [&](auto part) {
    using boost::math::quadrature::gauss_kronrod;
    const double lo = std::min(ref, x), hi = std::max(ref, x);
    const double v = gauss_kronrod<double, 15>::integrate(part, lo, hi, 12, 1e-12);
    return x < ref ? -v : v;
  };
  const double re = integrate([&](double t) { return dq(t).real(); });
  const double im = base.real_valued()
                        ? 0.0
                        : integrate([&](double t) { return dq(t).imag(); });
  return {re, im};
}

} // namespace detail

/// A copy of `base` with the requested violation injected.
inline SuperpotentialFamily perturb(const SuperpotentialFamily &base,
                                    const Perturbation &p) {
  FamilyDefinition def = base.definition();
  def.name = base.name() + "+" + std::string(to_string(p.kind));
  const double s = p.size;
  auto plus = def.w1plus;
  auto minus = def.w1minus;
  switch (p.kind) {
  case PerturbationKind::w1minus_linear:
    def.w1minus = [=](double x, double m) {
      auto v = minus(x, m);
      return ValueDeriv{v.value + s * x, v.deriv + s};
    };
    break;
  case PerturbationKind::consistent_linear:
    def.w1plus = [=](double x, double m) {
      auto v = plus(x, m);
      return ValueDeriv{v.value + s * m * x, v.deriv + s * m};
    };
    def.w1minus = [=](double x, double m) {
      auto v = minus(x, m);
      return ValueDeriv{v.value + s * (m - 1) * x, v.deriv + s * (m - 1)};
    };
    break;
  case PerturbationKind::consistent_quadratic:
    def.w1plus = [=](double x, double m) {
      auto v = plus(x, m);
      return ValueDeriv{v.value + s * m * x * x, v.deriv + 2 * s * m * x};
    };
    def.w1minus = [=](double x, double m) {
      auto v = minus(x, m);
      return ValueDeriv{v.value + s * (m - 1) * x * x, v.deriv + 2 * s * (m - 1) * x};
    };
    break;
  case PerturbationKind::translation_only: {
    auto shared = std::make_shared<const SuperpotentialFamily>(base);
    auto q = [=](double x, double m) {
      const cplx dq = -s * (shared->u(x, m).value + shared->w0(x, m).value) -
                      0.5 * s * s;
      return ValueDeriv{detail::integrate_from_reference(*shared, s, x, m), dq};
    };
    def.w1plus = [=](double x, double m) {
      auto v = plus(x, m);
      auto d = q(x, m);
      return ValueDeriv{v.value + d.value + s, v.deriv + d.deriv};
    };
    def.w1minus = [=](double x, double m) {
      auto v = minus(x, m);
      auto d = q(x, m);
      return ValueDeriv{v.value + d.value, v.deriv + d.deriv};
    };
    break;
  }
  case PerturbationKind::k1_linear: {
    auto k1 = def.k1;
    def.k1 = [=](double x) {
      auto v = k1(x);
      return ValueDeriv{v.value + s * x, v.deriv + s};
    };
    break;
  }
  }
  return SuperpotentialFamily(std::move(def));
}

} // namespace shinv
