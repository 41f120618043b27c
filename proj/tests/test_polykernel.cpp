#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle/hp_oracle.hpp"
#include "shinv/polykernel.hpp"

using namespace shinv;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trapezoid rule on a circle around z; exact for polynomials of degree below n.
struct ContourDerivative {
  cplx value;
  double scale;
};

ContourDerivative contour_derivative(const PolySpec &spec, cplx z) {
  const int n = 64;
  const double r = 0.5 * std::max(1.0, std::abs(z));
  cplx sum = 0.0;
  double fmax = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx u = std::polar(1.0, 2 * std::numbers::pi * j / n);
    const cplx f = poly_eval(spec, z + r * u);
    sum += f / u;
    fmax = std::max(fmax, std::abs(f));
  }
  return {sum / (n * r), fmax / r};
}

} // namespace

TEST(PolyEval, DegreeZeroIsOne) {
  EXPECT_EQ(poly_eval(PolySpec::jacobi(0, -2.3, 7.1), 0.4), 1.0);
  EXPECT_EQ(poly_eval(PolySpec::laguerre(0, 3.5), cplx(2.0, -1.0)), cplx(1.0));
}

TEST(PolyEval, DegreeOneClosedForms) {
  for (double a : {-2.7, -0.5, 0.0, 1.3})
    for (double b : {-3.1, 0.0, 4.2})
      for (double z : {-1.5, -0.2, 0.7, 3.0}) {
        const double want = (a + 1) + (a + b + 2) * (z - 1) / 2;
        EXPECT_NEAR(poly_eval(PolySpec::jacobi(1, a, b), z), want, 1e-14);
        EXPECT_NEAR(poly_eval(PolySpec::laguerre(1, a), z), 1 + a - z, 1e-14);
      }
}

TEST(PolyEval, JacobiDegreeFourComplexMatchesOracle) {
  const auto spec = PolySpec::jacobi(4, -1.7, -3.2);
  const cplx z(0.35, 0.9);
  const auto want = hp::to_double(hp::jacobi(4, hp::real("-1.7"), hp::real("-3.2"),
                                             hp::complex(hp::real("0.35"), hp::real("0.9"))));
  const cplx got = poly_eval(spec, z);
  EXPECT_LT(std::abs(got - want), 1e-14 * std::abs(want));
}

TEST(PolyEval, RandomAgainstOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> par(-8.0, 8.0), arg(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const int n = static_cast<int>(rng() % 9);
    const double a = par(rng), b = par(rng);
    const cplx z(arg(rng), arg(rng));
    const hp::complex hz{hp::real(z.real()), hp::real(z.imag())};
    const auto jw = hp::to_double(hp::jacobi(n, a, b, hz));
    const auto lw = hp::to_double(hp::laguerre(n, a, hz));
    const cplx jg = poly_eval(PolySpec::jacobi(n, a, b), z);
    const cplx lg = poly_eval(PolySpec::laguerre(n, a), z);
    EXPECT_LT(std::abs(jg - jw), 1e-11 * std::max(1.0, std::abs(jw))) << i;
    EXPECT_LT(std::abs(lg - lw), 1e-11 * std::max(1.0, std::abs(lw))) << i;
  }
}

TEST(PolyEval, RealInputsGiveExactlyRealOutput) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    const int n = static_cast<int>(rng() % 11);
    const double a = u(rng), b = u(rng), x = u(rng);
    EXPECT_EQ(poly_eval(PolySpec::jacobi(n, a, b), cplx(x, 0.0)).imag(), 0.0);
    EXPECT_EQ(poly_eval(PolySpec::laguerre(n, a), cplx(x, 0.0)).imag(), 0.0);
    EXPECT_EQ(poly_deriv(PolySpec::jacobi(n, a, b), cplx(x, 0.0)).imag(), 0.0);
  }
}

TEST(PolyEval, FiniteDifferencesOfOrderNPlusOneVanish) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng() % 9);
    const auto spec = trial % 2 ? PolySpec::jacobi(n, u(rng), u(rng))
                                : PolySpec::laguerre(n, u(rng));
    const double z0 = u(rng), h = 0.25;
    double diff = 0.0, scale = 0.0, binom = 1.0;
    for (int j = 0; j <= n + 1; ++j) {
      const double term = binom * poly_eval(spec, z0 + j * h);
      diff += ((n + 1 - j) % 2 ? -1.0 : 1.0) * term;
      scale += std::abs(term);
      binom = binom * (n + 1 - j) / (j + 1);
    }
    EXPECT_LE(std::abs(diff), 1e-9 * scale) << "trial " << trial;
  }
}

TEST(PolyEval, ErrorsOnBadInput) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(poly_eval(PolySpec::jacobi(2, 0.0, 0.0), nan), DomainError);
  EXPECT_THROW(poly_eval(PolySpec::jacobi(2, 0.0, 0.0), cplx(1.0, INFINITY)),
               DomainError);
  EXPECT_THROW(poly_eval(PolySpec::jacobi(2, nan, 0.0), 0.3), DomainError);
  EXPECT_THROW(poly_eval(PolySpec::laguerre(65, 0.0), 0.3), UnsupportedError);
  EXPECT_NO_THROW(poly_eval(PolySpec::laguerre(64, 0.0), 0.3));
  EXPECT_THROW(poly_eval(PolySpec::laguerre(-1, 0.0), 0.3), DomainError);
}

TEST(PolyDeriv, ClosedForms) {
  EXPECT_EQ(poly_deriv(PolySpec::jacobi(0, 1.1, -0.4), cplx(0.3, 2.0)), cplx(0.0));
  EXPECT_EQ(poly_deriv(PolySpec::laguerre(0, 1.1), 7.0), 0.0);
  EXPECT_NEAR(poly_deriv(PolySpec::jacobi(1, -2.5, 0.75), 0.2), (-2.5 + 0.75 + 2) / 2,
              1e-15);
  EXPECT_NEAR(poly_deriv(PolySpec::laguerre(1, 3.0), 0.2), -1.0, 1e-15);
}

TEST(PolyDeriv, LaguerreMatchesFiniteDifference) {
  const auto spec = PolySpec::laguerre(3, -2.5);
  const double h = 1e-5;
  const double fd = (poly_eval(spec, 1.3 + h) - poly_eval(spec, 1.3 - h)) / (2 * h);
  EXPECT_NEAR(poly_deriv(spec, 1.3), fd, 1e-8);
}

TEST(PolyDeriv, ContourIntegralOverRandomDraws) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> par(-20.0, 20.0), rad(0.0, 10.0),
      ang(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 1000; ++i) {
    const int n = static_cast<int>(rng() % 11);
    const auto spec = rng() % 2 ? PolySpec::jacobi(n, par(rng), par(rng))
                                : PolySpec::laguerre(n, par(rng));
    const cplx z = std::polar(rad(rng), ang(rng));
    const cplx got = poly_deriv(spec, z);
    const auto want = contour_derivative(spec, z);
    EXPECT_LE(std::abs(got - want.value), 1e-8 * std::abs(want.value) + 1e-13 * want.scale)
        << "draw " << i;
  }
}

TEST(RealRoots, TrivialCases) {
  auto r = real_roots_in(PolySpec::laguerre(1, 0.0), 0.0, kInf);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 1.0, 1e-12);
  r = real_roots_in(PolySpec::jacobi(1, 0.0, 0.0), -1.0, 1.0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 0.0, 1e-12);
  EXPECT_TRUE(real_roots_in(PolySpec::jacobi(0, 2.0, 1.0), -1.0, 1.0).empty());
  EXPECT_TRUE(real_roots_in(PolySpec::laguerre(1, 0.0), 2.0, 3.0).empty());
}

TEST(RealRoots, QuadraticMatchesOracle) {
  // B = -2, m = -1: alpha = -B+m-1/2, beta = -B-m-3/2.
  const double a = 0.5, b = 1.5;
  const auto got = real_roots_in(PolySpec::jacobi(2, a, b), -1.0, 1.0);
  // Coefficients of the expanded quadratic in z, at 50 digits.
  const hp::complex c0 = hp::jacobi(2, a, b, hp::complex(0));
  const hp::complex c1p = hp::jacobi(2, a, b, hp::complex(1));
  const hp::complex c1m = hp::jacobi(2, a, b, hp::complex(-1));
  const hp::real A = ((c1p + c1m) / 2 - c0).real(), Bc = ((c1p - c1m) / 2).real(),
                 C = c0.real();
  const hp::real disc = sqrt(Bc * Bc - 4 * A * C);
  std::vector<double> want{static_cast<double>((-Bc - disc) / (2 * A)),
                           static_cast<double>((-Bc + disc) / (2 * A))};
  std::sort(want.begin(), want.end());
  ASSERT_EQ(got.size(), 2u);
  for (int i = 0; i < 2; ++i)
    EXPECT_NEAR(got[i], want[i], 1e-12);
}

TEST(RealRoots, ClassicalJacobiHasAllRootsInside) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> par(-0.95, 6.0);
  for (int i = 0; i < 60; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto r = real_roots_in(PolySpec::jacobi(n, par(rng), par(rng)), -1.0, 1.0);
    EXPECT_EQ(static_cast<int>(r.size()), n) << "draw " << i;
    EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
  }
}

TEST(RealRoots, LaguerreRootsOnHalfLine) {
  // L_3^{(0)} has three positive roots and none on the negative axis.
  const auto spec = PolySpec::laguerre(3, 0.0);
  EXPECT_EQ(real_roots_in(spec, 0.0, kInf).size(), 3u);
  EXPECT_TRUE(real_roots_in(spec, -kInf, 0.0).empty());
  for (double z : real_roots_in(spec, 0.0, kInf))
    EXPECT_NEAR(poly_eval(spec, z), 0.0, 1e-10);
}
