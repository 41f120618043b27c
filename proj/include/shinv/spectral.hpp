#pragma once

// Partner potentials V-/+ = W^2 -/+ W', the shape-invariance remainder
// R(m) = V+(x,m) - V-(x,m-1), and a finite-difference eigensolver used to
// confirm that the two partner spectra differ by R level by level.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <lapacke.h>

#include "shinv/errors.hpp"
#include "shinv/superpotential.hpp"

namespace shinv {

enum class PartnerSide { minus, plus };

struct PotentialGrid {
  std::vector<double> abscissae;
  std::vector<double> values;
  PartnerSide which = PartnerSide::minus;
  double m = 0.0;
  /// Exact potential, when known; lets the solver re-solve at half spacing.
  std::function<double(double)> evaluator;
};

struct SpectrumResult {
  std::vector<double> eigenvalues; // ascending
  int grid_size = 0;
  double spacing = 0.0;
  std::vector<double> error_estimate; // per level, from the grid-doubling pair
};

struct RemainderResult {
  double R = 0.0;
  double flatness_residual = 0.0;
};

namespace detail {

inline void require_real(const SuperpotentialFamily &family) {
  if (!family.real_valued())
    throw UnsupportedError("complex family unsupported for spectra: " +
                           family.name());
}

inline double partner_value(const SuperpotentialFamily &family, double m,
                            double x, PartnerSide side) {
  const auto w = eval_W_full(family, m, x);
  const double W = w.value.real(), dW = w.deriv.real();
  return side == PartnerSide::minus ? W * W - dW : W * W + dW;
}

// V+(x,m) - V-(x,m-1) in factored form. k0 cancels from W(m) - W(m-1), so
// this avoids subtracting two large squares near singular endpoints.
inline double remainder_sample(const SuperpotentialFamily &family, double m,
                               double x) {
  const auto k0 = family.k0(x);
  const auto k1 = family.k1(x);
  const auto u0 = family.u(x, m);
  const auto u1 = family.u(x, m - 1);
  const cplx diff = k1.value + u0.value - u1.value;
  const cplx sum = 2.0 * k0.value + (2 * m - 1) * k1.value + u0.value + u1.value;
  const cplx dsum = 2.0 * k0.deriv + (2 * m - 1) * k1.deriv + u0.deriv + u1.deriv;
  const double r = (diff * sum + dsum).real();
  if (!std::isfinite(r))
    throw_pole(family, m, x);
  return r;
}

} // namespace detail

/// V-(x) = W^2 - W' and V+(x) = W^2 + W' sampled on `grid`.
inline std::pair<PotentialGrid, PotentialGrid>
partner_potentials(const SuperpotentialFamily &family, double m,
                   std::span<const double> grid) {
  detail::require_real(family);
  PotentialGrid minus, plus;
  minus.which = PartnerSide::minus;
  plus.which = PartnerSide::plus;
  minus.m = plus.m = m;
  minus.abscissae.assign(grid.begin(), grid.end());
  plus.abscissae = minus.abscissae;
  for (double x : grid) {
    minus.values.push_back(detail::partner_value(family, m, x, PartnerSide::minus));
    plus.values.push_back(detail::partner_value(family, m, x, PartnerSide::plus));
  }
  minus.evaluator = [family, m](double x) {
    return detail::partner_value(family, m, x, PartnerSide::minus);
  };
  plus.evaluator = [family, m](double x) {
    return detail::partner_value(family, m, x, PartnerSide::plus);
  };
  return {std::move(minus), std::move(plus)};
}

/// R = grid mean of V+(x,m) - V-(x,m-1); flatness = max deviation from R.
inline RemainderResult remainder(const SuperpotentialFamily &family, double m,
                                 std::span<const double> grid) {
  detail::require_real(family);
  if (grid.empty())
    throw UsageError("empty grid");
  std::vector<double> r;
  r.reserve(grid.size());
  for (double x : grid)
    r.push_back(detail::remainder_sample(family, m, x));
  RemainderResult out;
  double sum = 0.0;
  for (double v : r)
    sum += v;
  out.R = sum / static_cast<double>(r.size());
  for (double v : r)
    out.flatness_residual = std::max(out.flatness_residual, std::abs(v - out.R));
  return out;
}

namespace detail {

// Lowest k eigenvalues of -d^2/dx^2 + V with Dirichlet ends one spacing
// outside the first and last sample.
inline std::vector<double> lowest_levels(std::span<const double> v, double h,
                                         int k) {
  const auto n = static_cast<lapack_int>(v.size());
  const double inv_h2 = 1.0 / (h * h);
  std::vector<double> diag(v.size()), off(v.size() > 0 ? v.size() - 1 : 0, -inv_h2);
  for (std::size_t i = 0; i < v.size(); ++i)
    diag[i] = 2.0 * inv_h2 + v[i];
  lapack_int found = 0, nsplit = 0;
  std::vector<double> w(v.size());
  std::vector<lapack_int> iblock(v.size()), isplit(v.size());
  const lapack_int info = LAPACKE_dstebz(
      'I', 'E', n, 0.0, 0.0, 1, k, 2 * DBL_MIN, diag.data(), off.data(), &found,
      &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0 || found < k)
    throw Error("tridiagonal eigenvalue bisection failed");
  return {w.begin(), w.begin() + k};
}

inline double uniform_spacing(std::span<const double> x) {
  if (x.size() < 3)
    throw UsageError("spectrum grid needs at least 3 points");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-8 * h)
      throw UsageError("solve_spectrum needs a uniform grid");
  if (!(h > 0))
    throw UsageError("grid must be strictly increasing");
  return h;
}

} // namespace detail

/// k lowest eigenvalues of the central-difference Hamiltonian on a uniform
/// grid. The error estimate compares with a solve at half spacing (when the
/// potential evaluator is present) or at double spacing otherwise.
inline SpectrumResult solve_spectrum(const PotentialGrid &potential, int k) {
  const auto &x = potential.abscissae;
  if (k < 1)
    throw UsageError("k must be >= 1");
  if (x.size() != potential.values.size())
    throw UsageError("abscissae and values differ in length");
  const double h = detail::uniform_spacing(x);
  const int n = static_cast<int>(x.size());
  if (k > n / 8)
    throw UsageError("k must be much smaller than the grid size");
  for (double v : potential.values)
    if (!std::isfinite(v))
      throw DomainError("potential has non-finite samples");

  SpectrumResult out;
  out.grid_size = n;
  out.spacing = h;
  out.eigenvalues = detail::lowest_levels(potential.values, h, k);

  std::vector<double> other;
  double scale; // ratio of the error at spacing h to |lambda_h - lambda_other|
  if (potential.evaluator) {
    const double h2 = 0.5 * h;
    std::vector<double> fine;
    fine.reserve(2 * x.size() + 1);
    for (int i = 0; i < 2 * n + 1; ++i)
      fine.push_back(potential.evaluator(x.front() - h2 + h2 * i));
    other = detail::lowest_levels(fine, h2, k);
    scale = 4.0 / 3.0;
  } else {
    std::vector<double> coarse;
    for (int i = 1; i < n; i += 2)
      coarse.push_back(potential.values[static_cast<std::size_t>(i)]);
    other = detail::lowest_levels(coarse, 2 * h, k);
    scale = 1.0 / 3.0;
  }
  for (int i = 0; i < k; ++i)
    out.error_estimate.push_back(scale * std::abs(out.eigenvalues[i] - other[i]));
  return out;
}

/// Uniform grid of n interior points strictly between lo and hi.
inline std::vector<double> uniform_interior(double lo, double hi, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n + 1);
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] = lo + h * (i + 1);
  return x;
}

struct SpectralOptions {
  int n_points = 4000;
  int probe_points = 4096; // grid used to locate the well
  double edge_gap = 25.0;  // V at the Dirichlet ends exceeds E_k by this
};

struct IsospectralityResult {
  SpectrumResult plus;          // spectrum of V+(., m)
  SpectrumResult minus_shifted; // spectrum of V-(., m-1)
  double R = 0.0;
  double flatness_residual = 0.0;
  double mismatch = 0.0; // max_i |l+_i - (l-_i + R)| / max(|l+_i|, 1)
  double x_lo = 0.0;     // Dirichlet ends
  double x_hi = 0.0;
  double edge_potential = 0.0;
};

/// Compare spectrum(V+(., m)) with spectrum(V-(., m-1)) + R on a common
/// uniform grid. The window is grown until the potential at both Dirichlet
/// ends exceeds the k-th level by `edge_gap`, or the probe grid is exhausted
/// (potentials that saturate at infinity).
inline IsospectralityResult
check_isospectrality(const SuperpotentialFamily &family, double m, int k,
                     const SpectralOptions &opt = {}) {
  detail::require_real(family);
  if (k < 1)
    throw UsageError("k must be >= 1");
  GridSpec probe_spec;
  probe_spec.n_points = opt.probe_points;
  const double ms[] = {m, m - 1};
  const auto probe = make_grid(family, std::span<const double>(ms), probe_spec);

  std::vector<double> vprobe;
  vprobe.reserve(probe.size());
  for (double x : probe)
    vprobe.push_back(detail::partner_value(family, m, x, PartnerSide::plus));
  const auto imin = static_cast<std::size_t>(
      std::min_element(vprobe.begin(), vprobe.end()) - vprobe.begin());

  auto v_plus = [&](double x) {
    return detail::partner_value(family, m, x, PartnerSide::plus);
  };
  auto v_minus = [&](double x) {
    return detail::partner_value(family, m - 1, x, PartnerSide::minus);
  };

  IsospectralityResult out;
  double v_edge = vprobe[imin] + 2.0 * opt.edge_gap;
  for (int iter = 0; iter < 8; ++iter) {
    std::size_t lo = imin, hi = imin;
    while (lo > 0 && vprobe[lo] < v_edge)
      --lo;
    while (hi + 1 < probe.size() && vprobe[hi] < v_edge)
      ++hi;
    out.x_lo = probe[lo];
    out.x_hi = probe[hi];
    out.edge_potential = v_edge;

    PotentialGrid gp, gm;
    gp.abscissae = uniform_interior(out.x_lo, out.x_hi, opt.n_points);
    gm.abscissae = gp.abscissae;
    gp.which = PartnerSide::plus;
    gm.which = PartnerSide::minus;
    gp.m = m;
    gm.m = m - 1;
    for (double x : gp.abscissae) {
      gp.values.push_back(v_plus(x));
      gm.values.push_back(v_minus(x));
    }
    gp.evaluator = v_plus;
    gm.evaluator = v_minus;
    out.plus = solve_spectrum(gp, k);
    out.minus_shifted = solve_spectrum(gm, k);

    const bool exhausted = lo == 0 && hi + 1 == probe.size();
    if (out.plus.eigenvalues.back() + opt.edge_gap <= v_edge || exhausted)
      break;
    v_edge = out.plus.eigenvalues.back() + 2.0 * opt.edge_gap;
  }

  const auto rem = remainder(family, m, uniform_interior(out.x_lo, out.x_hi, opt.n_points));
  out.R = rem.R;
  out.flatness_residual = rem.flatness_residual;
  for (int i = 0; i < k; ++i) {
    const double lp = out.plus.eigenvalues[static_cast<std::size_t>(i)];
    const double lm = out.minus_shifted.eigenvalues[static_cast<std::size_t>(i)];
    out.mismatch = std::max(out.mismatch,
                            std::abs(lp - (lm + out.R)) / std::max(std::abs(lp), 1.0));
  }
  return out;
}

} // namespace shinv
