#pragma once

// 50-digit reference evaluations, written from the family formulas directly
// and sharing no code with the library. Polynomials use the two-sided
// binomial expansion; derivatives are central differences at h = 1e-15.

#include <complex>
#include <functional>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "shinv/catalog.hpp"

namespace hp {

using real = boost::multiprecision::cpp_bin_float_50;
using complex = boost::multiprecision::cpp_complex_50;

inline real binom(const real &a, int k) {
  real r = 1;
  for (int j = 0; j < k; ++j)
    r = r * (a - j) / (j + 1);
  return r;
}

inline complex jacobi(int n, const real &a, const real &b, const complex &z) {
  if (n < 0)
    return complex(0);
  complex sum(0);
  const complex lo = (z - real(1)) / real(2);
  const complex hi = (z + real(1)) / real(2);
  for (int s = 0; s <= n; ++s)
    sum += binom(n + a, n - s) * binom(n + b, s) * pow(lo, s) * pow(hi, n - s);
  return sum;
}

inline complex laguerre(int n, const real &a, const complex &z) {
  if (n < 0)
    return complex(0);
  complex sum(0);
  real fact = 1;
  for (int k = 0; k <= n; ++k) {
    if (k > 0)
      fact *= k;
    sum += binom(n + a, n - k) * pow(-z, k) / fact;
  }
  return sum;
}

struct Family {
  std::function<complex(const real &)> k0, k1;
  std::function<complex(const real &, const real &)> wp, wm;
};

inline Family family(shinv::FamilyTag tag, const shinv::ParamPoint &p) {
  using shinv::FamilyTag;
  const complex I(real(0), real(1));
  auto get = [&](const char *k) { return real(p.get(k)); };
  Family f;
  switch (tag) {
  case FamilyTag::x1_hyperbolic: {
    const real c = get("c"), be = get("beta"), d = get("d");
    f.k0 = [=](const real &x) { return complex(-be / c / tanh(c * x) + d / sinh(c * x)); };
    f.k1 = [=](const real &x) { return complex(c / tanh(c * x)); };
    f.wp = [=](const real &x, const real &m) {
      return complex(2 * c * c * d * sinh(c * x) /
                     (-2 * be + c * c * (2 * m + 1) + 2 * c * d * cosh(c * x)));
    };
    f.wm = [=](const real &x, const real &m) {
      return complex(2 * c * c * d * sinh(c * x) /
                     (-2 * be + c * c * (2 * m - 1) + 2 * c * d * cosh(c * x)));
    };
    break;
  }
  case FamilyTag::x1_radial_oscillator: {
    const real w = get("omega"), d = get("d");
    f.k0 = [=](const real &x) { return complex(w * x / 2 + d / x); };
    f.k1 = [=](const real &x) { return complex(1 / x); };
    f.wp = [=](const real &x, const real &m) {
      return complex(-2 * w * x / (1 + 2 * d + 2 * m - w * x * x));
    };
    f.wm = [=](const real &x, const real &m) {
      return complex(-2 * w * x / (-1 + 2 * d + 2 * m - w * x * x));
    };
    break;
  }
  case FamilyTag::x1_trigonometric: {
    const real c = get("c"), be = get("beta"), d = get("d");
    f.k0 = [=](const real &x) { return complex(-be / c * tan(c * x) + d / cos(c * x)); };
    f.k1 = [=](const real &x) { return complex(-c * tan(c * x)); };
    f.wp = [=](const real &x, const real &m) {
      return complex(-2 * c * c * d * cos(c * x) /
                     (2 * be + c * c * (1 + 2 * m) - 2 * c * d * sin(c * x)));
    };
    f.wm = [=](const real &x, const real &m) {
      return complex(2 * c * c * d * cos(c * x) /
                     (-2 * be + c * c * (1 - 2 * m) + 2 * c * d * sin(c * x)));
    };
    break;
  }
  case FamilyTag::xl_poschl_teller:
  case FamilyTag::xl_pt_scarf: {
    const real B = get("B");
    const int l = p.get_int("l");
    const bool scarf = tag == FamilyTag::xl_pt_scarf;
    const real half = real(1) / 2;
    if (scarf) {
      f.k0 = [=](const real &x) { return I * B / cosh(x); };
      f.k1 = [=](const real &x) { return complex(tanh(x)); };
    } else {
      f.k0 = [=](const real &x) { return complex(-B / sinh(x)); };
      f.k1 = [=](const real &x) { return complex(1 / tanh(x)); };
    }
    auto pre = [=](const real &x) {
      return scarf ? I * (l - 2 * B - 1) / 2 * cosh(x) : complex((l - 2 * B - 1) / 2 * sinh(x));
    };
    auto arg = [=](const real &x) { return scarf ? I * sinh(x) : complex(cosh(x)); };
    f.wp = [=](const real &x, const real &m) {
      return pre(x) * jacobi(l - 1, -B + m + half, -B - m - half, arg(x)) /
             jacobi(l, -B + m - half, -B - m - 3 * half, arg(x));
    };
    f.wm = [=](const real &x, const real &m) {
      return pre(x) * jacobi(l - 1, -B + m - half, -B - m + half, arg(x)) /
             jacobi(l, -B + m - 3 * half, -B - m - half, arg(x));
    };
    break;
  }
  case FamilyTag::xl_radial_oscillator: {
    const real w = get("omega");
    const int l = p.get_int("l");
    const real half = real(1) / 2;
    f.k0 = [=](const real &x) { return complex(w * x / 2); };
    f.k1 = [=](const real &x) { return complex(1 / x); };
    f.wp = [=](const real &x, const real &m) {
      const complex y(-w * x * x / 2);
      return w * x * laguerre(l - 1, -m - half, y) / laguerre(l, -m - 3 * half, y);
    };
    f.wm = [=](const real &x, const real &m) {
      const complex y(-w * x * x / 2);
      return w * x * laguerre(l - 1, -m + half, y) / laguerre(l, -m - half, y);
    };
    break;
  }
  }
  return f;
}

inline const real &step() {
  static const real h("1e-15");
  return h;
}

template <class F> complex derivative(F &&f, const real &x) {
  return (f(x + step()) - f(x - step())) / (2 * step());
}

inline complex W(const Family &f, const real &m, const real &x) {
  return f.k0(x) + m * f.k1(x) + f.wp(x, m) - f.wm(x, m);
}

inline complex W_deriv(const Family &f, const real &m, const real &x) {
  return derivative([&](const real &t) { return W(f, m, t); }, x);
}

inline complex compatibility_lhs(const Family &f, const real &m, const real &x) {
  const complex A = f.wp(x, m), B = f.wm(x, m);
  const complex dA = derivative([&](const real &t) { return f.wp(t, m); }, x);
  const complex dB = derivative([&](const real &t) { return f.wm(t, m); }, x);
  const complex w0 = f.k0(x) + m * f.k1(x);
  return A * A + dA + B * B + dB - 2 * w0 * B + 2 * w0 * A - 2 * B * A;
}

// Sum of the magnitudes of the seven terms above; the natural scale for the
// left side, which cancels to zero on the catalog.
inline real compatibility_scale(const Family &f, const real &m, const real &x) {
  const complex A = f.wp(x, m), B = f.wm(x, m);
  const complex dA = derivative([&](const real &t) { return f.wp(t, m); }, x);
  const complex dB = derivative([&](const real &t) { return f.wm(t, m); }, x);
  const complex w0 = f.k0(x) + m * f.k1(x);
  return abs(A * A) + abs(dA) + abs(B * B) + abs(dB) + abs(2 * w0 * B) +
         abs(2 * w0 * A) + abs(2 * B * A);
}

inline std::complex<double> to_double(const complex &z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

} // namespace hp
