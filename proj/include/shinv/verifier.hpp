#pragma once

// Grid checks of the shape-invariance identities:
//   translation     W1minus(x,m) = W1plus(x,m-1)
//   compatibility   A^2 + A' + B^2 + B' - 2 W0 B + 2 W0 A - 2 A B = eps(x),
//                   A = W1plus, B = W1minus, tested as independence of m
//   Infeld-Hull     F' + F^2 = a,  G' + F G = b  with F = k1, G = -k0
//   algebra closure the U-condition of the potential algebra in its form
//                   shifted by 1/2, U = W1plus - W1minus
//   equivalence     the reduction chain from the algebra condition to
//                   -2 W1plus'(x,m-1) + 2 W1minus'(x,m), evaluated step by step.
// Residuals are max-abs over the grid (complex modulus).

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "shinv/errors.hpp"
#include "shinv/superpotential.hpp"

namespace shinv {

struct EpsilonSample {
  double x;
  cplx value;
};

struct CompatibilityCheck {
  double residual = 0.0;
  std::vector<EpsilonSample> epsilon; // LHS at the first m of the list
};

struct AlgebraConstants {
  double a = 0.0;
  double b = 0.0;
};

struct InfeldHullCheck {
  AlgebraConstants constants; // real parts of the grid means
  cplx a_mean;
  cplx b_mean;
  double residual = 0.0; // max deviation of either expression from its mean
};

struct ChainResiduals {
  double r12_vs_14 = 0.0;
  double r14_vs_15 = 0.0;
  double r15_vs_0 = 0.0;

  double max() const { return std::max({r12_vs_14, r14_vs_15, r15_vs_0}); }
};

namespace detail {

inline ValueDeriv finite_or_pole(const SuperpotentialFamily &family, double m,
                                 double x, ValueDeriv v) {
  if (!finite(v))
    throw_pole(family, m, x);
  return v;
}

struct ExtensionTerms {
  ValueDeriv plus;  // W1plus(x, m)
  ValueDeriv minus; // W1minus(x, m)
};

inline ExtensionTerms extension_terms(const SuperpotentialFamily &family,
                                      double m, double x) {
  return {finite_or_pole(family, m, x, family.w1plus(x, m)),
          finite_or_pole(family, m, x, family.w1minus(x, m))};
}

} // namespace detail

/// max over the grid of |W1minus(x,m) - W1plus(x,m-1)|.
inline double check_translation(const SuperpotentialFamily &family, double m,
                                std::span<const double> grid) {
  double worst = 0.0;
  for (double x : grid) {
    const auto minus = detail::finite_or_pole(family, m, x, family.w1minus(x, m));
    const auto shifted =
        detail::finite_or_pole(family, m - 1, x, family.w1plus(x, m - 1));
    worst = std::max(worst, std::abs(minus.value - shifted.value));
  }
  return worst;
}

/// Left side of the compatibility condition at (x, m); equals eps(x) when the
/// condition holds.
inline cplx compatibility_lhs(const SuperpotentialFamily &family, double m,
                              double x) {
  const auto [a, b] = detail::extension_terms(family, m, x);
  const cplx w0 = family.w0(x, m).value;
  const cplx A = a.value, B = b.value;
  return A * A + a.deriv + B * B + b.deriv - 2.0 * w0 * B + 2.0 * w0 * A -
         2.0 * B * A;
}

/// max over the grid and over all pairs of m values of the spread of the
/// compatibility left side.
inline CompatibilityCheck
check_compatibility(const SuperpotentialFamily &family,
                    std::span<const double> m_list,
                    std::span<const double> grid) {
  if (m_list.size() < 2)
    throw UsageError("compatibility check needs at least two m values");
  CompatibilityCheck out;
  out.epsilon.reserve(grid.size());
  std::vector<cplx> row(m_list.size());
  for (double x : grid) {
    for (std::size_t i = 0; i < m_list.size(); ++i)
      row[i] = compatibility_lhs(family, m_list[i], x);
    out.epsilon.push_back({x, row[0]});
    for (std::size_t i = 0; i < row.size(); ++i)
      for (std::size_t j = i + 1; j < row.size(); ++j)
        out.residual = std::max(out.residual, std::abs(row[i] - row[j]));
  }
  return out;
}

/// Infer (a, b) from F' + F^2 and G' + F G on the grid.
inline InfeldHullCheck check_infeld_hull(const SuperpotentialFamily &family,
                                         std::span<const double> grid) {
  if (grid.empty())
    throw UsageError("empty grid");
  std::vector<cplx> as, bs;
  as.reserve(grid.size());
  bs.reserve(grid.size());
  for (double x : grid) {
    const auto F = family.k1(x);
    const auto k0 = family.k0(x);
    const cplx G = -k0.value, dG = -k0.deriv;
    const cplx a = F.deriv + F.value * F.value;
    const cplx b = dG + F.value * G;
    if (!detail::finite(a) || !detail::finite(b))
      throw PoleError(x, "k0/k1");
    as.push_back(a);
    bs.push_back(b);
  }
  auto mean = [](const std::vector<cplx> &v) {
    cplx s = 0.0;
    for (auto z : v)
      s += z;
    return s / static_cast<double>(v.size());
  };
  InfeldHullCheck out;
  out.a_mean = mean(as);
  out.b_mean = mean(bs);
  out.constants = {out.a_mean.real(), out.b_mean.real()};
  for (std::size_t i = 0; i < as.size(); ++i)
    out.residual = std::max({out.residual, std::abs(as[i] - out.a_mean),
                             std::abs(bs[i] - out.b_mean)});
  return out;
}

namespace detail {

struct ChainValues {
  cplx e12; // algebra condition with F = k1, G = -k0, U = W1plus - W1minus
  cplx e14; // the same after substituting the identifications term by term
  cplx e15; // -2 W1plus'(x, m-1) + 2 W1minus'(x, m)
};

inline ChainValues chain_values(const SuperpotentialFamily &family, double m,
                                double x) {
  const auto now = extension_terms(family, m, x);
  const auto prev = extension_terms(family, m - 1, x);
  const auto k0 = family.k0(x);
  const auto k1 = family.k1(x);

  const cplx F = k1.value, G = -k0.value;
  const cplx U0 = now.plus.value - now.minus.value;
  const cplx U1 = prev.plus.value - prev.minus.value;
  const cplx dU0 = now.plus.deriv - now.minus.deriv;
  const cplx dU1 = prev.plus.deriv - prev.minus.deriv;

  ChainValues v;
  v.e12 = U1 * U1 - 2.0 * G * (U1 - U0) - U0 * U0 +
          2.0 * F * ((m - 1) * U1 - m * U0) - dU1 - dU0;

  const cplx A0 = now.plus.value, B0 = now.minus.value;
  const cplx A1 = prev.plus.value, B1 = prev.minus.value;
  const cplx d1 = B1 - A1, d0 = B0 - A0;
  v.e14 = -2.0 * (k0.value + (m - 1) * k1.value) * d1 + d1 * d1 +
          2.0 * (k0.value + m * k1.value) * d0 - d0 * d0 + prev.minus.deriv +
          now.minus.deriv - prev.plus.deriv - now.plus.deriv;

  v.e15 = -2.0 * prev.plus.deriv + 2.0 * now.minus.deriv;
  if (!finite(v.e12) || !finite(v.e14) || !finite(v.e15))
    throw PoleError(x, "k0/k1");
  return v;
}

} // namespace detail

/// max over the grid of |algebra closure condition| (shifted form).
inline double check_algebra_condition(const SuperpotentialFamily &family,
                                      double m, std::span<const double> grid) {
  double worst = 0.0;
  for (double x : grid)
    worst = std::max(worst, std::abs(detail::chain_values(family, m, x).e12));
  return worst;
}

/// Replays the reduction from the algebra condition to zero: pairwise
/// differences of the successive expressions and the size of the last one.
inline ChainResiduals check_equivalence_chain(const SuperpotentialFamily &family,
                                              double m,
                                              std::span<const double> grid) {
  ChainResiduals r;
  for (double x : grid) {
    const auto v = detail::chain_values(family, m, x);
    r.r12_vs_14 = std::max(r.r12_vs_14, std::abs(v.e12 - v.e14));
    r.r14_vs_15 = std::max(r.r14_vs_15, std::abs(v.e14 - v.e15));
    r.r15_vs_0 = std::max(r.r15_vs_0, std::abs(v.e15));
  }
  return r;
}

} // namespace shinv
