#pragma once

// Jacobi and Laguerre polynomials for arbitrary real parameters, evaluated by
// their explicit finite series. The three-term recurrence is avoided on
// purpose: the rational extensions use parameters such as -B-m-3/2 that sit
// far outside the classical range alpha, beta > -1.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "shinv/errors.hpp"

namespace shinv {

using cplx = std::complex<double>;

inline constexpr int max_poly_degree = 64;

enum class PolyKind { jacobi, laguerre };

struct PolySpec {
  PolyKind kind = PolyKind::jacobi;
  int degree = 0;
  double alpha = 0.0;
  double beta = 0.0; // ignored for Laguerre

  static PolySpec jacobi(int n, double alpha, double beta) {
    return {PolyKind::jacobi, n, alpha, beta};
  }
  static PolySpec laguerre(int n, double alpha) {
    return {PolyKind::laguerre, n, alpha, 0.0};
  }
};

inline void validate(const PolySpec &spec) {
  if (spec.degree < 0)
    throw DomainError("polynomial degree must be nonnegative");
  if (spec.degree > max_poly_degree)
    throw UnsupportedError("polynomial degree " + std::to_string(spec.degree) +
                           " exceeds cap " + std::to_string(max_poly_degree));
  if (!std::isfinite(spec.alpha) ||
      (spec.kind == PolyKind::jacobi && !std::isfinite(spec.beta)))
    throw DomainError("polynomial parameters must be finite");
}

namespace detail {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

using Coefficients = std::array<double, max_poly_degree + 1>;

// Series coefficients in the natural variable: t = (z-1)/2 for Jacobi,
//   P_n^(a,b)(z) = sum_k (n+a+b+1)_k (a+k+1)_{n-k} / (k! (n-k)!) t^k,
// and t = z for Laguerre,
//   L_n^(a)(z) = sum_k (-1)^k (a+k+1)_{n-k} / (k! (n-k)!) z^k.
// Each coefficient is built as a running product of ratios so that no
// factorial is formed explicitly.
inline Coefficients series_coefficients(const PolySpec &spec) {
  Coefficients c{};
  const int n = spec.degree;
  const double a = spec.alpha;
  const double apb1 = spec.alpha + spec.beta + n + 1.0;
  for (int k = 0; k <= n; ++k) {
    double v = 1.0;
    if (spec.kind == PolyKind::jacobi)
      for (int j = 0; j < k; ++j)
        v *= (apb1 + j) / (j + 1);
    else if (k % 2 == 1)
      v = -1.0;
    if (spec.kind == PolyKind::laguerre)
      for (int j = 0; j < k; ++j)
        v /= (j + 1);
    for (int j = 0; j < n - k; ++j)
      v *= (a + k + 1 + j) / (j + 1);
    c[k] = v;
  }
  return c;
}

template <class T> T series_variable(const PolySpec &spec, T z) {
  if (spec.kind == PolyKind::jacobi)
    return (z - 1.0) / 2.0;
  return z;
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(cplx v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T> T sum_series(const Coefficients &c, int n, T t) {
  CompensatedSum re;
  CompensatedSum im;
  T power = T(1.0);
  for (int k = 0; k <= n; ++k) {
    const T term = c[k] * power;
    if constexpr (std::is_same_v<T, cplx>) {
      re.add(term.real());
      im.add(term.imag());
    } else {
      re.add(term);
    }
    power *= t;
  }
  if constexpr (std::is_same_v<T, cplx>)
    return {re.value(), im.value()};
  else
    return re.value();
}

} // namespace detail

/// P_n^(alpha,beta)(z) or L_n^(alpha)(z). Works for real or complex z.
template <class T> T poly_eval(const PolySpec &spec, T z) {
  static_assert(std::is_same_v<T, double> || std::is_same_v<T, cplx>);
  validate(spec);
  if (!detail::finite(z))
    throw DomainError("polynomial argument must be finite");
  const auto c = detail::series_coefficients(spec);
  return detail::sum_series(c, spec.degree, detail::series_variable(spec, z));
}

/// d/dz via the parameter-shift identities:
///   d/dz P_n^(a,b) = (n+a+b+1)/2 P_{n-1}^(a+1,b+1),
///   d/dz L_n^(a)   = -L_{n-1}^(a+1).
template <class T> T poly_deriv(const PolySpec &spec, T z) {
  validate(spec);
  if (!detail::finite(z))
    throw DomainError("polynomial argument must be finite");
  if (spec.degree == 0)
    return T(0.0);
  if (spec.kind == PolyKind::jacobi) {
    const double scale = (spec.degree + spec.alpha + spec.beta + 1.0) / 2.0;
    return scale * poly_eval(PolySpec::jacobi(spec.degree - 1, spec.alpha + 1.0,
                                              spec.beta + 1.0),
                             z);
  }
  return -poly_eval(PolySpec::laguerre(spec.degree - 1, spec.alpha + 1.0), z);
}

struct RootScanOptions {
  double subintervals_per_unit = 4096.0;
  long min_subintervals = 256;
  long max_subintervals = 1L << 18;
  double abs_tolerance = 1e-12;
};

namespace detail {

template <class F>
std::vector<double> scan_once(F &f, double lo, double hi, long count,
                              double tol) {
  std::vector<double> roots;
  const double step = (hi - lo) / static_cast<double>(count);
  double x_prev = lo;
  double f_prev = f(lo);
  for (long i = 1; i <= count; ++i) {
    const double x = (i == count) ? hi : lo + step * static_cast<double>(i);
    const double fx = f(x);
    // An exact zero on an interior node is a root; on the end nodes it lies
    // on the boundary of the open interval and is skipped.
    if (fx == 0.0) {
      if (i != count)
        roots.push_back(x);
    } else if (f_prev != 0.0 && std::signbit(f_prev) != std::signbit(fx)) {
      double a = x_prev, b = x, fa = f_prev;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b)
          break;
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(fa)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

} // namespace detail

/// Real roots of a real-valued function on the finite open interval (lo, hi),
/// bracketed by sign changes on a uniform scan and bisected. The scan is
/// refined by doubling until the root count is unchanged over two
/// consecutive doublings. Roots of even multiplicity are not detected.
template <class F>
std::vector<double> find_real_roots(F &&f, double lo, double hi,
                                    const RootScanOptions &opt = {}) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw UsageError("find_real_roots needs a finite interval");
  if (!(hi > lo))
    return {};
  const double wanted = std::ceil(opt.subintervals_per_unit * (hi - lo));
  long count = static_cast<long>(
      std::clamp(wanted, static_cast<double>(opt.min_subintervals),
                 static_cast<double>(std::max(opt.min_subintervals,
                                              opt.max_subintervals / 4))));
  auto roots = detail::scan_once(f, lo, hi, count, opt.abs_tolerance);
  int stable = 0;
  while (stable < 2 && count * 2 <= opt.max_subintervals) {
    count *= 2;
    auto finer = detail::scan_once(f, lo, hi, count, opt.abs_tolerance);
    stable = (finer.size() == roots.size()) ? stable + 1 : 0;
    roots = std::move(finer);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Bound on |z| for every root: derived from the Cauchy bound in the series
/// variable. Throws if the polynomial vanishes identically.
inline std::pair<double, double> root_enclosure(const PolySpec &spec) {
  validate(spec);
  const auto c = detail::series_coefficients(spec);
  int top = spec.degree;
  while (top >= 0 && c[top] == 0.0)
    --top;
  if (top < 0)
    throw DomainError("polynomial vanishes identically for these parameters");
  double ratio = 0.0;
  for (int k = 0; k < top; ++k)
    ratio = std::max(ratio, std::abs(c[k] / c[top]));
  const double radius = (1.0 + ratio) * 1.01;
  if (spec.kind == PolyKind::jacobi)
    return {1.0 - 2.0 * radius, 1.0 + 2.0 * radius};
  return {-radius, radius};
}

/// All real roots inside the open interval (lo, hi); either end may be
/// infinite. Sorted ascending.
inline std::vector<double> real_roots_in(const PolySpec &spec, double lo,
                                         double hi,
                                         const RootScanOptions &opt = {}) {
  validate(spec);
  if (std::isnan(lo) || std::isnan(hi))
    throw DomainError("root interval must not contain NaN");
  if (spec.degree == 0)
    return {};
  const auto [zmin, zmax] = root_enclosure(spec);
  const double a = std::max(lo, zmin);
  const double b = std::min(hi, zmax);
  if (!(b > a))
    return {};
  const auto c = detail::series_coefficients(spec);
  auto f = [&](double z) {
    return detail::sum_series(c, spec.degree, detail::series_variable(spec, z));
  };
  auto roots = find_real_roots(f, a, b, opt);
  // The clipped ends are interior points of the original interval whenever
  // they came from the enclosure; a node-exact zero there is still a root.
  if (a > lo && f(a) == 0.0)
    roots.insert(roots.begin(), a);
  if (b < hi && f(b) == 0.0)
    roots.push_back(b);
  return roots;
}

} // namespace shinv
