#pragma once

// The six rationally extended shape-invariant families: three X1 extensions
// (hyperbolic, radial oscillator, trigonometric) and three X_l extensions
// built from Jacobi and Laguerre ratios with m-dependent parameters.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shinv/errors.hpp"
#include "shinv/polykernel.hpp"
#include "shinv/superpotential.hpp"

namespace shinv {

enum class FamilyTag {
  x1_hyperbolic,
  x1_radial_oscillator,
  x1_trigonometric,
  xl_poschl_teller,
  xl_pt_scarf,
  xl_radial_oscillator,
};

inline constexpr std::array<FamilyTag, 6> all_family_tags = {
    FamilyTag::x1_hyperbolic,    FamilyTag::x1_radial_oscillator,
    FamilyTag::x1_trigonometric, FamilyTag::xl_poschl_teller,
    FamilyTag::xl_pt_scarf,      FamilyTag::xl_radial_oscillator,
};

inline std::string_view to_string(FamilyTag tag) {
  switch (tag) {
  case FamilyTag::x1_hyperbolic:
    return "X1-hyperbolic";
  case FamilyTag::x1_radial_oscillator:
    return "X1-radial-oscillator";
  case FamilyTag::x1_trigonometric:
    return "X1-trigonometric";
  case FamilyTag::xl_poschl_teller:
    return "Xl-Poschl-Teller";
  case FamilyTag::xl_pt_scarf:
    return "Xl-PT-Scarf";
  case FamilyTag::xl_radial_oscillator:
    return "Xl-radial-oscillator";
  }
  return "unknown";
}

inline FamilyTag parse_family_tag(std::string_view s) {
  for (auto tag : all_family_tags)
    if (to_string(tag) == s)
      return tag;
  throw SchemaError("unknown family tag '" + std::string(s) + "'");
}

/// Names of the constants each family reads from a ParamPoint.
inline std::vector<std::string> required_constants(FamilyTag tag) {
  switch (tag) {
  case FamilyTag::x1_hyperbolic:
  case FamilyTag::x1_trigonometric:
    return {"c", "beta", "d"};
  case FamilyTag::x1_radial_oscillator:
    return {"omega", "d"};
  case FamilyTag::xl_poschl_teller:
  case FamilyTag::xl_pt_scarf:
    return {"B", "l"};
  case FamilyTag::xl_radial_oscillator:
    return {"omega", "l"};
  }
  return {};
}

inline bool is_real_family(FamilyTag tag) { return tag != FamilyTag::xl_pt_scarf; }

struct CatalogEntry {
  FamilyTag tag;
  ParamPoint params;
  SuperpotentialFamily family;
  double expected_a;
  double expected_b;
};

/// One edge of a family's non-singularity region in m, with the side on
/// which the region lies (-1: valid below, +1: valid above).
struct RegionBoundary {
  double m;
  int valid_side;
  std::string inequality;
};

namespace detail {

inline std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Real roots of a0 + a1 z on (lo, hi), by the same bracketing scan used for
// the polynomial denominators.
inline std::vector<double> affine_roots_in(double a0, double a1, double lo,
                                           double hi) {
  if (a1 == 0.0)
    return {};
  const double radius = 1.01 * (1.0 + std::abs(a0 / a1));
  const double a = std::max(lo, -radius);
  const double b = std::min(hi, radius);
  return find_real_roots([&](double z) { return a0 + a1 * z; }, a, b);
}

// Zeros of a complex function along the real axis: points where the real
// and imaginary parts vanish together.
template <class F>
std::vector<double> common_zeros_on_line(F &&f, double lo, double hi,
                                         double match = 1e-8) {
  auto re = find_real_roots([&](double x) { return f(x).real(); }, lo, hi);
  auto im = find_real_roots([&](double x) { return f(x).imag(); }, lo, hi);
  std::vector<double> out;
  for (double a : re)
    for (double b : im)
      if (std::abs(a - b) < match) {
        out.push_back(0.5 * (a + b));
        break;
      }
  return out;
}

// K s(x) N(z(x)) / D(z(x)) with N, D Jacobi polynomials; covers the
// X_l Poschl-Teller (z = cosh x) and PT-Scarf (z = i sinh x) extension terms.
struct JacobiRatio {
  cplx prefactor;
  PolySpec numerator;
  PolySpec denominator;

  ValueDeriv eval(cplx s, cplx ds, cplx z, cplx dz) const {
    const cplx n = poly_eval(numerator, z);
    const cplx dn = poly_deriv(numerator, z);
    const cplx d = poly_eval(denominator, z);
    const cplx dd = poly_deriv(denominator, z);
    const cplx ratio = n / d;
    return {prefactor * s * ratio,
            prefactor * (ds * ratio + s * dz * (dn * d - n * dd) / (d * d))};
  }
};

// Parameters of the X_l Jacobi ratios. For W1plus the numerator carries
// (-B+m+1/2, -B-m-1/2) at degree l-1 and the denominator (-B+m-1/2, -B-m-3/2)
// at degree l; W1minus lowers the first parameter and raises the second by
// one in both.
inline JacobiRatio xl_jacobi_plus(cplx prefactor, double B, int l, double m) {
  return {prefactor, PolySpec::jacobi(l - 1, -B + m + 0.5, -B - m - 0.5),
          PolySpec::jacobi(l, -B + m - 0.5, -B - m - 1.5)};
}
inline JacobiRatio xl_jacobi_minus(cplx prefactor, double B, int l, double m) {
  return {prefactor, PolySpec::jacobi(l - 1, -B + m - 0.5, -B - m + 0.5),
          PolySpec::jacobi(l, -B + m - 1.5, -B - m - 0.5)};
}

inline void require_positive(const std::string &name, double v) {
  if (!(v > 0.0))
    throw SchemaError("parameter '" + name + "' must be positive");
}

inline int read_extension_degree(const ParamPoint &p) {
  const int l = p.get_int("l");
  if (l < 1)
    throw UnsupportedError("extension degree l must be >= 1 (l = 0 is the "
                           "unextended potential)");
  if (l > max_poly_degree)
    throw UnsupportedError("extension degree exceeds polynomial cap");
  return l;
}

inline SuperpotentialFamily make_x1_hyperbolic(const ParamPoint &p) {
  const double c = p.get("c"), beta = p.get("beta"), d = p.get("d");
  require_positive("c", c);
  FamilyDefinition def;
  def.name = "X1-hyperbolic";
  def.domain = {0.0, inf};
  def.length_scale = 1.0 / c;
  def.window_cap = 40.0 / c;
  def.k0 = [=](double x) {
    const double s = std::sinh(c * x), ch = std::cosh(c * x);
    return ValueDeriv{-beta / c * ch / s + d / s,
                      beta / (s * s) - d * c * ch / (s * s)};
  };
  def.k1 = [=](double x) {
    const double s = std::sinh(c * x);
    return ValueDeriv{c * std::cosh(c * x) / s, -c * c / (s * s)};
  };
  // 2c^2 d sinh(cx) / (-2 beta + c^2 (2m +/- 1) + 2cd cosh(cx))
  def.w1plus = [=](double x, double m) {
    const double s = std::sinh(c * x), ch = std::cosh(c * x);
    const double num = 2 * c * c * d * s, dnum = 2 * c * c * c * d * ch;
    const double den = -2 * beta + c * c * (2 * m + 1) + 2 * c * d * ch;
    const double dden = 2 * c * c * d * s;
    return ValueDeriv{num / den, (dnum * den - num * dden) / (den * den)};
  };
  def.w1minus = [=](double x, double m) {
    const double s = std::sinh(c * x), ch = std::cosh(c * x);
    const double num = 2 * c * c * d * s, dnum = 2 * c * c * c * d * ch;
    const double den = -2 * beta + c * c * (2 * m - 1) + 2 * c * d * ch;
    const double dden = 2 * c * c * d * s;
    return ValueDeriv{num / den, (dnum * den - num * dden) / (den * den)};
  };
  def.validity = [=](double m, double margin) -> std::optional<std::string> {
    if (d < 0) {
      const double bound = (2 * beta - c * c - 2 * c * d) / (2 * c * c);
      if (m < bound - margin)
        return std::nullopt;
      return "m < (2*beta - c^2 - 2*c*d)/(2*c^2) = " + fmt_num(bound) +
             " [d < 0]";
    }
    if (d > 0) {
      const double bound = (2 * beta + c * c - 2 * c * d) / (2 * c * c);
      if (m > bound + margin)
        return std::nullopt;
      return "m > (2*beta + c^2 - 2*c*d)/(2*c^2) = " + fmt_num(bound) +
             " [d > 0]";
    }
    return std::string("d != 0");
  };
  def.poles = [=](double m) {
    std::vector<Pole> out;
    for (int sign : {+1, -1}) {
      const double a0 = -2 * beta + c * c * (2 * m + sign);
      for (double z : affine_roots_in(a0, 2 * c * d, 1.0, inf))
        out.push_back({std::acosh(z) / c, sign > 0 ? "W1plus denominator"
                                                   : "W1minus denominator"});
    }
    return out;
  };
  def.gauge_denominator = [=](double x, double m) {
    return cplx(-2 * beta + c * c * (2 * m + 1) + 2 * c * d * std::cosh(c * x));
  };
  return SuperpotentialFamily(std::move(def));
}

inline SuperpotentialFamily make_x1_radial_oscillator(const ParamPoint &p) {
  const double omega = p.get("omega"), d = p.get("d");
  FamilyDefinition def;
  def.name = "X1-radial-oscillator";
  def.domain = {0.0, inf};
  const double scale = omega > 0 ? 1.0 / std::sqrt(omega) : 1.0;
  def.length_scale = scale;
  def.window_cap = 10.0 * scale;
  def.k0 = [=](double x) {
    return ValueDeriv{omega * x / 2 + d / x, omega / 2 - d / (x * x)};
  };
  def.k1 = [](double x) { return ValueDeriv{1.0 / x, -1.0 / (x * x)}; };
  // -2 omega x / (+/-1 + 2d + 2m - omega x^2)
  def.w1plus = [=](double x, double m) {
    const double num = -2 * omega * x;
    const double den = 1 + 2 * d + 2 * m - omega * x * x;
    return ValueDeriv{num / den,
                      (-2 * omega * den - num * (-2 * omega * x)) / (den * den)};
  };
  def.w1minus = [=](double x, double m) {
    const double num = -2 * omega * x;
    const double den = -1 + 2 * d + 2 * m - omega * x * x;
    return ValueDeriv{num / den,
                      (-2 * omega * den - num * (-2 * omega * x)) / (den * den)};
  };
  def.validity = [=](double m, double margin) -> std::optional<std::string> {
    if (!(omega > 0))
      return std::string("omega > 0");
    if (!(d > 0))
      return std::string("d > 0");
    const double bound = -(1 + 2 * d) / 2;
    if (m < bound - margin)
      return std::nullopt;
    return "m < -(1 + 2*d)/2 = " + fmt_num(bound);
  };
  def.poles = [=](double m) {
    std::vector<Pole> out;
    for (int sign : {+1, -1})
      for (double y : affine_roots_in(sign + 2 * d + 2 * m, -omega, 0.0, inf))
        out.push_back({std::sqrt(y), sign > 0 ? "W1plus denominator"
                                              : "W1minus denominator"});
    return out;
  };
  def.gauge_denominator = [=](double x, double m) {
    return cplx(1 + 2 * d + 2 * m - omega * x * x);
  };
  return SuperpotentialFamily(std::move(def));
}

inline SuperpotentialFamily make_x1_trigonometric(const ParamPoint &p) {
  const double c = p.get("c"), beta = p.get("beta"), d = p.get("d");
  require_positive("c", c);
  FamilyDefinition def;
  def.name = "X1-trigonometric";
  const double half = std::numbers::pi / (2 * c);
  def.domain = {-half, half};
  def.length_scale = 1.0 / c;
  def.k0 = [=](double x) {
    const double t = std::tan(c * x), co = std::cos(c * x);
    const double sec2 = 1.0 / (co * co);
    return ValueDeriv{-beta / c * t + d / co,
                      -beta * sec2 + d * c * std::sin(c * x) * sec2};
  };
  def.k1 = [=](double x) {
    const double co = std::cos(c * x);
    return ValueDeriv{-c * std::tan(c * x), -c * c / (co * co)};
  };
  // W1plus = -2c^2 d cos(cx) / (2 beta + c^2 (1+2m) - 2cd sin(cx))
  def.w1plus = [=](double x, double m) {
    const double co = std::cos(c * x), si = std::sin(c * x);
    const double num = -2 * c * c * d * co, dnum = 2 * c * c * c * d * si;
    const double den = 2 * beta + c * c * (1 + 2 * m) - 2 * c * d * si;
    const double dden = -2 * c * c * d * co;
    return ValueDeriv{num / den, (dnum * den - num * dden) / (den * den)};
  };
  // W1minus = 2c^2 d cos(cx) / (-2 beta + c^2 (1-2m) + 2cd sin(cx))
  def.w1minus = [=](double x, double m) {
    const double co = std::cos(c * x), si = std::sin(c * x);
    const double num = 2 * c * c * d * co, dnum = -2 * c * c * c * d * si;
    const double den = -2 * beta + c * c * (1 - 2 * m) + 2 * c * d * si;
    const double dden = 2 * c * c * d * co;
    return ValueDeriv{num / den, (dnum * den - num * dden) / (den * den)};
  };
  // Both denominators are affine in sin(cx) in (-1, 1); they stay away from
  // zero exactly when m is below `lower` or above `upper`. These two bounds
  // cover all four sign cases of d at once.
  def.validity = [=](double m, double margin) -> std::optional<std::string> {
    if (d == 0)
      return std::string("d != 0");
    const double lower = (-2 * beta - c * c - 2 * c * std::abs(d)) / (2 * c * c);
    const double upper = (-2 * beta + c * c + 2 * c * std::abs(d)) / (2 * c * c);
    if (m < lower - margin || m > upper + margin)
      return std::nullopt;
    return "m < (-2*beta - c^2 - 2*c*|d|)/(2*c^2) = " + fmt_num(lower) +
           " or m > (-2*beta + c^2 + 2*c*|d|)/(2*c^2) = " + fmt_num(upper);
  };
  def.poles = [=](double m) {
    std::vector<Pole> out;
    for (double z : affine_roots_in(2 * beta + c * c * (1 + 2 * m),
                                    -2 * c * d, -1.0, 1.0))
      out.push_back({std::asin(z) / c, "W1plus denominator"});
    for (double z : affine_roots_in(-2 * beta + c * c * (1 - 2 * m), 2 * c * d,
                                    -1.0, 1.0))
      out.push_back({std::asin(z) / c, "W1minus denominator"});
    return out;
  };
  def.gauge_denominator = [=](double x, double m) {
    return cplx(2 * beta + c * c * (1 + 2 * m) - 2 * c * d * std::sin(c * x));
  };
  return SuperpotentialFamily(std::move(def));
}

inline void check_prefactor(double B, int l) {
  if (std::abs(l - 2 * B - 1) < 1e-9)
    throw UnsupportedError("degenerate extension: l - 2B - 1 = 0");
}

inline SuperpotentialFamily make_xl_poschl_teller(const ParamPoint &p) {
  const double B = p.get("B");
  const int l = read_extension_degree(p);
  check_prefactor(B, l);
  const cplx K = 0.5 * (l - 2 * B - 1);
  FamilyDefinition def;
  def.name = "Xl-Poschl-Teller";
  def.domain = {0.0, inf};
  def.window_cap = 40.0;
  def.k0 = [=](double x) {
    const double s = std::sinh(x);
    return ValueDeriv{-B / s, B * std::cosh(x) / (s * s)};
  };
  def.k1 = [](double x) {
    const double s = std::sinh(x);
    return ValueDeriv{std::cosh(x) / s, -1.0 / (s * s)};
  };
  def.w1plus = [=](double x, double m) {
    const double s = std::sinh(x), ch = std::cosh(x);
    return xl_jacobi_plus(K, B, l, m).eval(s, ch, ch, s);
  };
  def.w1minus = [=](double x, double m) {
    const double s = std::sinh(x), ch = std::cosh(x);
    return xl_jacobi_minus(K, B, l, m).eval(s, ch, ch, s);
  };
  def.validity = [=](double m, double margin) -> std::optional<std::string> {
    if (!(B < -0.5 - margin))
      return std::string("B < -1/2");
    const double lo = 0.5 * (1 + 2 * B), hi = -0.5 * (1 + 2 * B);
    if (m > lo + margin && m < hi - margin)
      return std::nullopt;
    return "(1 + 2*B)/2 < m < -(1 + 2*B)/2 = (" + fmt_num(lo) + ", " +
           fmt_num(hi) + ")";
  };
  def.poles = [=](double m) {
    std::vector<Pole> out;
    for (double z : real_roots_in(xl_jacobi_plus(K, B, l, m).denominator, 1.0, inf))
      out.push_back({std::acosh(z), "W1plus denominator"});
    for (double z : real_roots_in(xl_jacobi_minus(K, B, l, m).denominator, 1.0, inf))
      out.push_back({std::acosh(z), "W1minus denominator"});
    return out;
  };
  def.gauge_denominator = [=](double x, double m) {
    return poly_eval(xl_jacobi_plus(K, B, l, m).denominator, cplx(std::cosh(x)));
  };
  return SuperpotentialFamily(std::move(def));
}

inline SuperpotentialFamily make_xl_pt_scarf(const ParamPoint &p) {
  const double B = p.get("B");
  const int l = read_extension_degree(p);
  check_prefactor(B, l);
  const cplx i(0.0, 1.0);
  const cplx K = 0.5 * i * (l - 2 * B - 1);
  FamilyDefinition def;
  def.name = "Xl-PT-Scarf";
  def.domain = {-inf, inf};
  def.real_valued = false;
  def.window_cap = 30.0;
  def.punctures = {0.0};
  def.k0 = [=](double x) {
    const double ch = std::cosh(x);
    return ValueDeriv{i * B / ch, -i * B * std::sinh(x) / (ch * ch)};
  };
  def.k1 = [](double x) {
    const double ch = std::cosh(x);
    return ValueDeriv{std::tanh(x), 1.0 / (ch * ch)};
  };
  def.w1plus = [=](double x, double m) {
    const double s = std::sinh(x), ch = std::cosh(x);
    return xl_jacobi_plus(K, B, l, m).eval(ch, s, i * s, i * ch);
  };
  def.w1minus = [=](double x, double m) {
    const double s = std::sinh(x), ch = std::cosh(x);
    return xl_jacobi_minus(K, B, l, m).eval(ch, s, i * s, i * ch);
  };
  // Non-singular for every real B and m away from x = 0, which grids always
  // puncture.
  def.validity = [](double, double) { return std::optional<std::string>{}; };
  def.poles = [=](double m) {
    std::vector<Pole> out;
    for (const auto &[spec, label] :
         {std::pair{xl_jacobi_plus(K, B, l, m).denominator, "W1plus denominator"},
          std::pair{xl_jacobi_minus(K, B, l, m).denominator,
                    "W1minus denominator"}}) {
      const auto [zmin, zmax] = root_enclosure(spec);
      const double reach =
          std::asinh(std::max(std::abs(zmin), std::abs(zmax)));
      const auto coeffs = detail::series_coefficients(spec);
      auto f = [&](double x) {
        return detail::sum_series(
            coeffs, spec.degree,
            detail::series_variable(spec, cplx(0.0, std::sinh(x))));
      };
      for (double x : common_zeros_on_line(f, -reach, reach))
        out.push_back({x, label});
    }
    return out;
  };
  def.gauge_denominator = [=](double x, double m) {
    return poly_eval(xl_jacobi_plus(K, B, l, m).denominator,
                     cplx(0.0, std::sinh(x)));
  };
  return SuperpotentialFamily(std::move(def));
}

inline SuperpotentialFamily make_xl_radial_oscillator(const ParamPoint &p) {
  const double omega = p.get("omega");
  const int l = read_extension_degree(p);
  require_positive("omega", omega);
  FamilyDefinition def;
  def.name = "Xl-radial-oscillator";
  def.domain = {0.0, inf};
  const double scale = 1.0 / std::sqrt(omega);
  def.length_scale = scale;
  def.window_cap = 10.0 * scale;
  def.k0 = [=](double x) { return ValueDeriv{omega * x / 2, omega / 2}; };
  def.k1 = [](double x) { return ValueDeriv{1.0 / x, -1.0 / (x * x)}; };
  // omega x L_{l-1}^(a+1)(y) / L_l^(a)(y) with y = -omega x^2 / 2 and
  // a = -m-3/2 for W1plus, a = -m-1/2 for W1minus.
  auto ratio = [=](double x, double a) {
    const PolySpec num = PolySpec::laguerre(l - 1, a + 1);
    const PolySpec den = PolySpec::laguerre(l, a);
    const double y = -omega * x * x / 2, dy = -omega * x;
    const double n = poly_eval(num, y), dn = poly_deriv(num, y);
    const double dd = poly_deriv(den, y), dv = poly_eval(den, y);
    const double r = n / dv;
    return ValueDeriv{omega * x * r,
                      omega * r + omega * x * dy * (dn * dv - n * dd) / (dv * dv)};
  };
  def.w1plus = [=](double x, double m) { return ratio(x, -m - 1.5); };
  def.w1minus = [=](double x, double m) { return ratio(x, -m - 0.5); };
  def.validity = [=](double m, double margin) -> std::optional<std::string> {
    if (m < -0.5 - margin)
      return std::nullopt;
    return std::string("m < -1/2");
  };
  def.poles = [=](double m) {
    std::vector<Pole> out;
    for (double y : real_roots_in(PolySpec::laguerre(l, -m - 1.5), -inf, 0.0))
      out.push_back({std::sqrt(-2 * y / omega), "W1plus denominator"});
    for (double y : real_roots_in(PolySpec::laguerre(l, -m - 0.5), -inf, 0.0))
      out.push_back({std::sqrt(-2 * y / omega), "W1minus denominator"});
    return out;
  };
  def.gauge_denominator = [=](double x, double m) {
    return cplx(poly_eval(PolySpec::laguerre(l, -m - 1.5), -omega * x * x / 2));
  };
  return SuperpotentialFamily(std::move(def));
}

} // namespace detail

/// Build a catalog family bound to the constants in `params` (m stays free).
inline CatalogEntry get_family(FamilyTag tag, const ParamPoint &params) {
  for (const auto &name : required_constants(tag))
    params.get(name);
  switch (tag) {
  case FamilyTag::x1_hyperbolic: {
    const double c = params.get("c");
    return {tag, params, detail::make_x1_hyperbolic(params), c * c,
            params.get("beta")};
  }
  case FamilyTag::x1_radial_oscillator:
    return {tag, params, detail::make_x1_radial_oscillator(params), 0.0,
            -params.get("omega")};
  case FamilyTag::x1_trigonometric: {
    const double c = params.get("c");
    return {tag, params, detail::make_x1_trigonometric(params), -c * c,
            params.get("beta")};
  }
  case FamilyTag::xl_poschl_teller:
    return {tag, params, detail::make_xl_poschl_teller(params), 1.0, 0.0};
  case FamilyTag::xl_pt_scarf:
    return {tag, params, detail::make_xl_pt_scarf(params), 1.0, 0.0};
  case FamilyTag::xl_radial_oscillator:
    return {tag, params, detail::make_xl_radial_oscillator(params), 0.0,
            -params.get("omega")};
  }
  throw SchemaError("unknown family tag");
}

/// Analytic non-singularity verdict plus an independent numeric scan of the
/// denominators for zeros inside the domain.
struct ValidityWitness {
  std::optional<std::string> violated; // analytic predicate
  std::vector<Pole> poles;             // numeric scan, punctures removed
  bool analytic_valid() const { return !violated.has_value(); }
  bool scan_valid() const { return poles.empty(); }
  bool agree() const { return analytic_valid() == scan_valid(); }
};

inline ValidityWitness validity_witness(const CatalogEntry &entry,
                                        double puncture_radius = 1e-3) {
  ValidityWitness w;
  const double m = entry.params.m;
  w.violated = entry.family.violated_inequality(m);
  for (const auto &p : entry.family.poles(m)) {
    bool punctured = false;
    for (double q : entry.family.punctures())
      punctured = punctured || std::abs(p.x - q) < puncture_radius;
    if (!punctured)
      w.poles.push_back(p);
  }
  return w;
}

inline ValidityWitness validity_witness(FamilyTag tag, const ParamPoint &params) {
  return validity_witness(get_family(tag, params));
}

/// Edges of the non-singularity region in m for the given constants. The
/// PT-symmetric family has none.
inline std::vector<RegionBoundary> region_boundaries(FamilyTag tag,
                                                     const ParamPoint &p) {
  switch (tag) {
  case FamilyTag::x1_hyperbolic: {
    const double c = p.get("c"), beta = p.get("beta"), d = p.get("d");
    if (d < 0)
      return {{(2 * beta - c * c - 2 * c * d) / (2 * c * c), -1, "d<0 upper"}};
    return {{(2 * beta + c * c - 2 * c * d) / (2 * c * c), +1, "d>0 lower"}};
  }
  case FamilyTag::x1_radial_oscillator:
    return {{-(1 + 2 * p.get("d")) / 2, -1, "m < -(1+2d)/2"}};
  case FamilyTag::x1_trigonometric: {
    const double c = p.get("c"), beta = p.get("beta"), ad = std::abs(p.get("d"));
    return {{(-2 * beta - c * c - 2 * c * ad) / (2 * c * c), -1, "lower branch"},
            {(-2 * beta + c * c + 2 * c * ad) / (2 * c * c), +1, "upper branch"}};
  }
  case FamilyTag::xl_poschl_teller: {
    const double B = p.get("B");
    return {{0.5 * (1 + 2 * B), +1, "m > (1+2B)/2"},
            {-0.5 * (1 + 2 * B), -1, "m < -(1+2B)/2"}};
  }
  case FamilyTag::xl_pt_scarf:
    return {};
  case FamilyTag::xl_radial_oscillator:
    return {{-0.5, -1, "m < -1/2"}};
  }
  return {};
}

/// Parameter boxes for sampling. m is drawn from [m_lo, m_hi] and kept only if
/// the region (tightened by the margin) contains m, m-1, ..., m-shifts.
struct SamplingBox {
  std::vector<std::pair<std::string, std::pair<double, double>>> ranges;
  bool signed_d = false; // d drawn from [-3,-0.1] or [0.1,3]
  std::vector<int> ells;
  double m_lo;
  double m_hi;
};

inline SamplingBox sampling_box(FamilyTag tag) {
  switch (tag) {
  case FamilyTag::x1_hyperbolic:
  case FamilyTag::x1_trigonometric:
    return {{{"c", {0.5, 2.0}}, {"beta", {-3.0, 3.0}}}, true, {}, -10.0, 10.0};
  case FamilyTag::x1_radial_oscillator:
    return {{{"omega", {0.5, 3.0}}, {"d", {0.1, 3.0}}}, false, {}, -10.0, 0.0};
  case FamilyTag::xl_poschl_teller:
    return {{{"B", {-4.0, -0.6}}}, false, {1, 2, 3}, -4.0, 4.0};
  case FamilyTag::xl_pt_scarf:
    return {{{"B", {-3.0, 3.0}}}, false, {1, 2, 3}, -3.0, 3.0};
  case FamilyTag::xl_radial_oscillator:
    return {{{"omega", {0.5, 3.0}}}, false, {1, 2, 3}, -6.0, -0.5};
  }
  throw SchemaError("unknown family tag");
}

/// Deterministic draws of valid parameter points: each point is valid with
/// margin 0.1 at m, m-1, ..., m-shifts and its denominator scan finds no
/// zeros in the domain.
inline std::vector<ParamPoint> sample_valid_params(FamilyTag tag, int count,
                                                   std::uint64_t seed,
                                                   int shifts = 2,
                                                   double margin = 0.1) {
  if (count < 1)
    throw UsageError("sample count must be >= 1");
  const auto box = sampling_box(tag);
  std::mt19937_64 rng(seed);
  auto uniform = [&](double a, double b) {
    return a + (b - a) * std::generate_canonical<double, 53>(rng);
  };
  std::vector<ParamPoint> out;
  int rejections = 0;
  while (static_cast<int>(out.size()) < count) {
    ParamPoint p;
    for (const auto &[name, range] : box.ranges)
      p.constants[name] = uniform(range.first, range.second);
    if (box.signed_d) {
      const double mag = uniform(0.1, 3.0);
      p.constants["d"] = uniform(0.0, 1.0) < 0.5 ? -mag : mag;
    }
    if (!box.ells.empty())
      p.constants["l"] =
          box.ells[static_cast<std::size_t>(uniform(0.0, 1.0) * box.ells.size()) %
                   box.ells.size()];
    p.m = uniform(box.m_lo, box.m_hi);

    bool ok = true;
    try {
      const auto entry = get_family(tag, p);
      if (tag == FamilyTag::xl_pt_scarf &&
          std::abs(p.get("l") - 2 * p.get("B") - 1) < margin)
        ok = false;
      for (int j = 0; ok && j <= shifts; ++j) {
        if (!entry.family.valid(p.m - j, margin))
          ok = false;
        else if (!validity_witness(get_family(tag, p.with_m(p.m - j))).scan_valid())
          ok = false;
      }
    } catch (const UnsupportedError &) {
      ok = false;
    }
    if (ok) {
      out.push_back(p);
      rejections = 0;
    } else if (++rejections >= 10000) {
      throw SamplingError("no valid parameter point for " +
                          std::string(to_string(tag)) +
                          " after 10000 rejections");
    }
  }
  return out;
}

} // namespace shinv
