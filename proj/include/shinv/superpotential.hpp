#pragma once

// Superpotentials of the form
//   W(x,m) = W0(x,m) + W1plus(x,m) - W1minus(x,m),  W0 = k0(x) + m k1(x),
// where m is translated by m -> m-1. Every component is complex valued so the
// PT-symmetric family shares the code path with the real ones.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shinv/errors.hpp"
#include "shinv/polykernel.hpp"

namespace shinv {

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct ValueDeriv {
  cplx value;
  cplx deriv;
};

/// Open interval; either end may be infinite.
struct Interval {
  double lo = -inf;
  double hi = inf;

  bool contains(double x) const { return x > lo && x < hi; }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// A zero of a declared denominator inside the x-domain.
struct Pole {
  double x;
  std::string denominator;
};

/// Numeric values of the family constants plus the translated parameter m.
/// Constants are keyed by name: c, beta, d, omega, B, and l (the integer
/// extension degree).
struct ParamPoint {
  std::map<std::string, double> constants;
  double m = 0.0;

  bool has(const std::string &name) const { return constants.count(name) != 0; }

  double get(const std::string &name) const {
    auto it = constants.find(name);
    if (it == constants.end())
      throw SchemaError("missing parameter '" + name + "'");
    if (!std::isfinite(it->second))
      throw SchemaError("parameter '" + name + "' is not finite");
    return it->second;
  }

  int get_int(const std::string &name) const {
    const double v = get(name);
    if (v != std::floor(v) || std::abs(v) > 1e6)
      throw SchemaError("parameter '" + name + "' must be an integer");
    return static_cast<int>(v);
  }

  ParamPoint with_m(double new_m) const {
    ParamPoint p = *this;
    p.m = new_m;
    return p;
  }
};

/// Everything needed to build a SuperpotentialFamily. Unset optional pieces
/// get neutral defaults (zero extension terms, always-valid predicate, no
/// poles).
struct FamilyDefinition {
  std::string name;
  Interval domain;
  bool real_valued = true;
  double length_scale = 1.0; // offset unit for grids near a finite end
  double window_cap = 40.0;  // outer extent of grids on infinite sides

  std::function<ValueDeriv(double)> k0;
  std::function<ValueDeriv(double)> k1;
  std::function<ValueDeriv(double, double)> w1plus;
  std::function<ValueDeriv(double, double)> w1minus;

  /// Name of the violated non-singularity inequality, nullopt when valid.
  /// `margin` tightens every strict inequality by that amount in m.
  std::function<std::optional<std::string>(double m, double margin)> validity;
  /// Zeros of the W1plus(., m) and W1minus(., m) denominators in the domain.
  std::function<std::vector<Pole>(double m)> poles;
  /// Points that grids must avoid regardless of m.
  std::vector<double> punctures;
  /// D(x,m) such that W1plus(x,m) = d/dx log D(x,m).
  std::function<cplx(double, double)> gauge_denominator;
};

class SuperpotentialFamily {
public:
  explicit SuperpotentialFamily(FamilyDefinition def) : def_(std::move(def)) {
    if (!def_.k0 || !def_.k1)
      throw SchemaError("family '" + def_.name + "' needs k0 and k1");
    if (!def_.w1plus)
      def_.w1plus = [](double, double) { return ValueDeriv{}; };
    if (!def_.w1minus)
      def_.w1minus = [](double, double) { return ValueDeriv{}; };
    if (!def_.validity)
      def_.validity = [](double, double) { return std::optional<std::string>{}; };
    if (!def_.poles)
      def_.poles = [](double) { return std::vector<Pole>{}; };
  }

  const std::string &name() const { return def_.name; }
  const Interval &domain() const { return def_.domain; }
  bool real_valued() const { return def_.real_valued; }
  double length_scale() const { return def_.length_scale; }
  double window_cap() const { return def_.window_cap; }
  const std::vector<double> &punctures() const { return def_.punctures; }
  const FamilyDefinition &definition() const { return def_; }

  ValueDeriv k0(double x) const { return def_.k0(x); }
  ValueDeriv k1(double x) const { return def_.k1(x); }
  ValueDeriv w1plus(double x, double m) const { return def_.w1plus(x, m); }
  ValueDeriv w1minus(double x, double m) const { return def_.w1minus(x, m); }

  /// W0 = k0 + m k1 with its x-derivative.
  ValueDeriv w0(double x, double m) const {
    const auto a = k0(x);
    const auto b = k1(x);
    return {a.value + m * b.value, a.deriv + m * b.deriv};
  }

  /// U = W1plus - W1minus, the extension part of W.
  ValueDeriv u(double x, double m) const {
    const auto p = w1plus(x, m);
    const auto q = w1minus(x, m);
    return {p.value - q.value, p.deriv - q.deriv};
  }

  std::optional<std::string> violated_inequality(double m,
                                                 double margin = 0.0) const {
    return def_.validity(m, margin);
  }
  bool valid(double m, double margin = 0.0) const {
    return !violated_inequality(m, margin).has_value();
  }

  std::vector<Pole> poles(double m) const { return def_.poles(m); }

  bool has_gauge_denominator() const {
    return static_cast<bool>(def_.gauge_denominator);
  }
  cplx gauge_denominator(double x, double m) const {
    if (!def_.gauge_denominator)
      throw UnsupportedError("family '" + def_.name +
                             "' declares no gauge denominator");
    return def_.gauge_denominator(x, m);
  }

private:
  FamilyDefinition def_;
};

/// Family with no rational extension: W1plus = W1minus = 0.
inline SuperpotentialFamily
classical_family(std::string name, Interval domain,
                 std::function<ValueDeriv(double)> k0,
                 std::function<ValueDeriv(double)> k1,
                 double length_scale = 1.0) {
  FamilyDefinition def;
  def.name = std::move(name);
  def.domain = domain;
  def.k0 = std::move(k0);
  def.k1 = std::move(k1);
  def.length_scale = length_scale;
  return SuperpotentialFamily(std::move(def));
}

namespace detail {

inline bool finite(const ValueDeriv &v) {
  return finite(v.value) && finite(v.deriv);
}

[[noreturn]] inline void throw_pole(const SuperpotentialFamily &family,
                                    double m, double x) {
  const auto poles = family.poles(m);
  if (poles.empty())
    throw PoleError(x, family.name() + " (non-finite evaluation)");
  const auto nearest = std::min_element(
      poles.begin(), poles.end(), [x](const Pole &a, const Pole &b) {
        return std::abs(a.x - x) < std::abs(b.x - x);
      });
  throw PoleError(nearest->x, nearest->denominator);
}

} // namespace detail

/// W(x,m) = k0 + m k1 + W1plus - W1minus, value and x-derivative.
inline ValueDeriv eval_W_full(const SuperpotentialFamily &family, double m,
                              double x) {
  const auto w0 = family.w0(x, m);
  const auto u = family.u(x, m);
  ValueDeriv w{w0.value + u.value, w0.deriv + u.deriv};
  if (!detail::finite(w))
    detail::throw_pole(family, m, x);
  return w;
}

inline cplx eval_W(const SuperpotentialFamily &family, double m, double x) {
  return eval_W_full(family, m, x).value;
}

inline cplx eval_W_deriv(const SuperpotentialFamily &family, double m,
                         double x) {
  return eval_W_full(family, m, x).deriv;
}

/// eval_W with an explicit pole-proximity guard.
inline cplx eval_W_checked(const SuperpotentialFamily &family, double m,
                           double x, double exclusion_radius) {
  for (const auto &p : family.poles(m))
    if (std::abs(p.x - x) < exclusion_radius)
      throw PoleError(p.x, p.denominator);
  return eval_W(family, m, x);
}

enum class GridMapping { linear, tanh_compressed };

struct GridSpec {
  int n_points = 512;
  double boundary_margin = 0.02;
  double pole_exclusion_radius = 1e-3;
  GridMapping mapping = GridMapping::tanh_compressed;

  void validate() const {
    if (n_points < 16)
      throw UsageError("grid needs at least 16 points");
    if (!(boundary_margin > 0.0 && boundary_margin < 0.5))
      throw UsageError("boundary_margin must lie in (0, 0.5)");
    if (!(pole_exclusion_radius > 0.0))
      throw UsageError("pole_exclusion_radius must be positive");
  }
};

/// |W0| at the outer edge of an infinite-side window stays below this.
inline constexpr double window_w0_limit = 1e6;

namespace detail {

// Coordinate map x = x0 + L atanh(u) (or linear for finite domains) with the
// u-range covering the grid window.
struct WindowMap {
  bool linear = false;
  double x0 = 0.0;
  double scale = 1.0;
  double u_lo = 0.0;
  double u_hi = 1.0;

  double to_x(double u) const {
    return linear ? x0 + scale * u : x0 + scale * std::atanh(u);
  }
  double to_u(double x) const {
    return linear ? (x - x0) / scale : std::tanh((x - x0) / scale);
  }
};

inline double max_abs_w0(const SuperpotentialFamily &family,
                         std::span<const double> ms, double x) {
  double v = 0.0;
  for (double m : ms) {
    const double a = std::abs(family.w0(x, m).value);
    if (!std::isfinite(a))
      return inf;
    v = std::max(v, a);
  }
  return v;
}

// Pull an outer edge inward until |W0| is representable at the window limit.
inline double outer_edge(const SuperpotentialFamily &family,
                         std::span<const double> ms, double start, double edge) {
  for (int i = 0; i < 200; ++i) {
    if (max_abs_w0(family, ms, edge) <= window_w0_limit)
      return edge;
    edge = start + 0.5 * (edge - start);
  }
  return edge;
}

inline WindowMap window_map(const SuperpotentialFamily &family,
                            std::span<const double> ms, const GridSpec &spec) {
  const auto dom = family.domain();
  const double margin = spec.boundary_margin;
  WindowMap w;
  if (dom.finite()) {
    w.linear = true;
    w.x0 = dom.lo;
    w.scale = dom.hi - dom.lo;
    w.u_lo = margin;
    w.u_hi = 1.0 - margin;
    return w;
  }
  // The outermost point sits at u = 1 - margin, so the scale follows from the
  // edge of the window.
  const double stretch = std::atanh(1.0 - margin);
  const double L = family.length_scale();
  if (std::isfinite(dom.lo)) {
    w.x0 = dom.lo + margin * L;
    const double edge =
        outer_edge(family, ms, w.x0, dom.lo + family.window_cap());
    w.scale = (edge - w.x0) / stretch;
    w.u_lo = 0.0;
    w.u_hi = 1.0 - margin;
  } else if (std::isfinite(dom.hi)) {
    w.x0 = dom.hi - margin * L;
    const double edge =
        outer_edge(family, ms, w.x0, dom.hi - family.window_cap());
    w.scale = (w.x0 - edge) / stretch;
    w.u_lo = -(1.0 - margin);
    w.u_hi = 0.0;
  } else {
    w.x0 = 0.0;
    const double right = outer_edge(family, ms, 0.0, family.window_cap());
    const double left = outer_edge(family, ms, 0.0, -family.window_cap());
    w.scale = std::max(right, -left) / stretch;
    w.u_lo = std::tanh(left / w.scale);
    w.u_hi = std::tanh(right / w.scale);
  }
  return w;
}

} // namespace detail

/// Grid abscissae strictly inside the family's domain that avoid every
/// denominator zero (for every m in `ms`) and every puncture by at least
/// the exclusion radius. Throws InvalidParameters if any m is outside the
/// non-singularity region.
inline std::vector<double> make_grid(const SuperpotentialFamily &family,
                                     std::span<const double> ms,
                                     const GridSpec &spec = {}) {
  spec.validate();
  if (ms.empty())
    throw UsageError("make_grid needs at least one m value");
  for (double m : ms)
    if (auto bad = family.violated_inequality(m))
      throw InvalidParameters(family.name(),
                              *bad + " (m = " + std::to_string(m) + ")");

  const auto map = detail::window_map(family, ms, spec);

  std::vector<std::pair<double, double>> excluded;
  auto exclude = [&](double x) {
    const double r = spec.pole_exclusion_radius;
    double a = map.to_u(std::max(x - r, family.domain().lo));
    double b = map.to_u(std::min(x + r, family.domain().hi));
    if (a > b)
      std::swap(a, b);
    excluded.emplace_back(a, b);
  };
  for (double m : ms)
    for (const auto &p : family.poles(m))
      exclude(p.x);
  for (double p : family.punctures())
    exclude(p);
  std::sort(excluded.begin(), excluded.end());

  // Allowed u-set: [u_lo, u_hi] minus the union of excluded intervals.
  std::vector<std::pair<double, double>> allowed;
  double cursor = map.u_lo;
  for (const auto &[a, b] : excluded) {
    if (b <= cursor)
      continue;
    if (a >= map.u_hi)
      break;
    if (a > cursor)
      allowed.emplace_back(cursor, a);
    cursor = std::max(cursor, b);
  }
  if (cursor < map.u_hi)
    allowed.emplace_back(cursor, map.u_hi);

  double total = 0.0;
  for (const auto &[a, b] : allowed)
    total += b - a;
  if (!(total > 0.0))
    throw InvalidParameters(family.name(), "grid window fully excluded");

  std::vector<double> xs;
  xs.reserve(spec.n_points);
  for (int i = 0; i < spec.n_points; ++i) {
    double s = total * static_cast<double>(i) / (spec.n_points - 1);
    double u = allowed.back().second;
    for (const auto &[a, b] : allowed) {
      if (s <= b - a) {
        u = a + s;
        break;
      }
      s -= b - a;
    }
    double x = map.to_x(u);
    // Keep the ends strictly inside the open domain.
    x = std::clamp(x, std::nextafter(family.domain().lo, inf),
                   std::nextafter(family.domain().hi, -inf));
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

inline std::vector<double> make_grid(const SuperpotentialFamily &family,
                                     double m, const GridSpec &spec = {}) {
  const double ms[] = {m};
  return make_grid(family, std::span<const double>(ms), spec);
}

} // namespace shinv
