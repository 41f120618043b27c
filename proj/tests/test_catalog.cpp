#include <cmath>

#include <gtest/gtest.h>

#include "oracle/hp_oracle.hpp"
#include "shinv/catalog.hpp"
#include "shinv/verifier.hpp"

using namespace shinv;

TEST(Catalog, TagsRoundTrip) {
  for (auto tag : all_family_tags)
    EXPECT_EQ(parse_family_tag(to_string(tag)), tag);
  EXPECT_THROW(parse_family_tag("X2-nothing"), SchemaError);
}

TEST(Catalog, RadialOscillatorX1PlusValue) {
  ParamPoint p{{{"omega", 2.0}, {"d", 1.0}}, -3.0};
  const auto e = get_family(FamilyTag::x1_radial_oscillator, p);
  EXPECT_NEAR(e.family.w1plus(1.0, -3.0).value.real(), 0.8, 1e-15);
  const auto o = hp::family(FamilyTag::x1_radial_oscillator, p);
  EXPECT_NEAR(static_cast<double>(o.wp(hp::real(1), hp::real(-3)).real()), 0.8, 1e-40);
}

TEST(Catalog, XlRadialOscillatorAtDegreeOne) {
  ParamPoint p{{{"omega", 1.0}, {"l", 1}}, -3.0};
  const auto e = get_family(FamilyTag::xl_radial_oscillator, p);
  // Same as the X1 oscillator formula with d = 0.
  ParamPoint q{{{"omega", 1.0}, {"d", 0.0}}, -3.0};
  const auto x1 = hp::family(FamilyTag::x1_radial_oscillator, q);
  for (double x : {0.1, 0.9, 2.0, 5.5}) {
    const double got = e.family.w1plus(x, -3.0).value.real();
    EXPECT_NEAR(got, x / (2.5 + x * x / 2), 1e-15);
    EXPECT_NEAR(got, static_cast<double>(x1.wp(hp::real(x), hp::real(-3)).real()), 1e-15);
  }
}

TEST(Catalog, PoschlTellerDegreeOneClosedForm) {
  ParamPoint p{{{"B", -1.0}, {"l", 1}}, 0.0};
  const auto e = get_family(FamilyTag::xl_poschl_teller, p);
  for (double x : {0.2, 1.0, 3.0})
    EXPECT_NEAR(e.family.w1plus(x, 0.0).value.real(),
                std::sinh(x) / (std::cosh(x) + 0.5), 1e-15);
}

TEST(Catalog, XlEntriesAtDegreeOneMatchExpandedForms) {
  for (const auto &p : sample_valid_params(FamilyTag::xl_poschl_teller, 5, 31)) {
    const double B = p.get("B");
    ParamPoint q = p;
    q.constants["l"] = 1;
    const auto e = get_family(FamilyTag::xl_poschl_teller, q);
    auto p1 = [&](double a, double z) { return (a + 1) + (-2 * B) * (z - 1) / 2; };
    for (double x : make_grid(e.family, p.m, GridSpec{64})) {
      const double m = p.m, K = -B;
      const double wp = K * std::sinh(x) / p1(-B + m - 0.5, std::cosh(x));
      const double wm = K * std::sinh(x) / p1(-B + m - 1.5, std::cosh(x));
      EXPECT_NEAR(e.family.w1plus(x, m).value.real(), wp, 1e-12 * std::max(1.0, std::abs(wp)));
      EXPECT_NEAR(e.family.w1minus(x, m).value.real(), wm, 1e-12 * std::max(1.0, std::abs(wm)));
    }
  }
  for (const auto &p : sample_valid_params(FamilyTag::xl_pt_scarf, 5, 32)) {
    const double B = p.get("B");
    ParamPoint q = p;
    q.constants["l"] = 1;
    if (std::abs(1 - 2 * B - 1) < 1e-6)
      continue;
    const auto e = get_family(FamilyTag::xl_pt_scarf, q);
    const cplx i(0, 1);
    auto p1 = [&](double a, cplx z) { return (a + 1) + (-2 * B) * (z - 1.0) / 2.0; };
    for (double x : make_grid(e.family, p.m, GridSpec{64})) {
      const double m = p.m;
      const cplx K = -i * B, z = i * std::sinh(x);
      const cplx wp = K * std::cosh(x) / p1(-B + m - 0.5, z);
      const cplx wm = K * std::cosh(x) / p1(-B + m - 1.5, z);
      EXPECT_LE(std::abs(e.family.w1plus(x, m).value - wp), 1e-12 * std::max(1.0, std::abs(wp)));
      EXPECT_LE(std::abs(e.family.w1minus(x, m).value - wm), 1e-12 * std::max(1.0, std::abs(wm)));
    }
  }
  for (const auto &p : sample_valid_params(FamilyTag::xl_radial_oscillator, 5, 33)) {
    const double w = p.get("omega");
    ParamPoint q = p;
    q.constants["l"] = 1;
    const auto e = get_family(FamilyTag::xl_radial_oscillator, q);
    for (double x : make_grid(e.family, p.m, GridSpec{64})) {
      const double m = p.m, y = -w * x * x / 2;
      const double wp = w * x / (1 + (-m - 1.5) - y);
      const double wm = w * x / (1 + (-m - 0.5) - y);
      EXPECT_NEAR(e.family.w1plus(x, m).value.real(), wp, 1e-12 * std::max(1.0, std::abs(wp)));
      EXPECT_NEAR(e.family.w1minus(x, m).value.real(), wm, 1e-12 * std::max(1.0, std::abs(wm)));
    }
  }
}

TEST(Catalog, ExpectedAlgebraConstants) {
  ParamPoint p1{{{"c", 1.5}, {"beta", 0.7}, {"d", -1.0}}, 0.0};
  auto e = get_family(FamilyTag::x1_hyperbolic, p1);
  EXPECT_DOUBLE_EQ(e.expected_a, 2.25);
  EXPECT_DOUBLE_EQ(e.expected_b, 0.7);
  e = get_family(FamilyTag::x1_radial_oscillator, {{{"omega", 2.0}, {"d", 1.0}}, -3.0});
  EXPECT_EQ(e.expected_a, 0.0);
  EXPECT_EQ(e.expected_b, -2.0);
  e = get_family(FamilyTag::x1_trigonometric, {{{"c", 1.5}, {"beta", 0.7}, {"d", 1.0}}, -5.0});
  EXPECT_DOUBLE_EQ(e.expected_a, -2.25);
  EXPECT_DOUBLE_EQ(e.expected_b, 0.7);
  e = get_family(FamilyTag::xl_poschl_teller, {{{"B", -1.0}, {"l", 2}}, 0.0});
  EXPECT_EQ(e.expected_a, 1.0);
  EXPECT_EQ(e.expected_b, 0.0);
  e = get_family(FamilyTag::xl_pt_scarf, {{{"B", 0.4}, {"l", 2}}, 0.0});
  EXPECT_EQ(e.expected_a, 1.0);
  EXPECT_EQ(e.expected_b, 0.0);
  e = get_family(FamilyTag::xl_radial_oscillator, {{{"omega", 1.5}, {"l", 2}}, -2.0});
  EXPECT_EQ(e.expected_a, 0.0);
  EXPECT_EQ(e.expected_b, -1.5);
}

TEST(Catalog, SchemaAndUnsupportedErrors) {
  EXPECT_THROW(get_family(FamilyTag::x1_hyperbolic, {{{"c", 1.0}, {"d", 1.0}}, 0.0}),
               SchemaError);
  EXPECT_THROW(get_family(FamilyTag::xl_poschl_teller, {{{"B", -1.0}, {"l", 0}}, 0.0}),
               UnsupportedError);
  EXPECT_THROW(get_family(FamilyTag::xl_pt_scarf, {{{"B", 0.0}, {"l", 1}}, 0.0}),
               UnsupportedError);
  EXPECT_THROW(get_family(FamilyTag::xl_radial_oscillator, {{{"omega", 1.0}, {"l", 1.5}}, -2.0}),
               SchemaError);
}

TEST(Validity, PaperExamples) {
  auto w = validity_witness(FamilyTag::x1_radial_oscillator, {{{"omega", 1.0}, {"d", 1.0}}, -2.0});
  EXPECT_TRUE(w.analytic_valid());
  EXPECT_TRUE(w.agree());
  w = validity_witness(FamilyTag::x1_radial_oscillator, {{{"omega", 1.0}, {"d", 1.0}}, -1.0});
  EXPECT_FALSE(w.analytic_valid());
  EXPECT_TRUE(w.agree());
  w = validity_witness(FamilyTag::xl_poschl_teller, {{{"B", -1.0}, {"l", 1}}, 0.0});
  EXPECT_TRUE(w.analytic_valid());
  EXPECT_TRUE(w.agree());
}

TEST(Validity, BoundaryPointsAreInvalid) {
  // Oscillator boundary m = -(1+2d)/2 exactly.
  EXPECT_FALSE(validity_witness(FamilyTag::x1_radial_oscillator,
                                {{{"omega", 1.0}, {"d", 1.0}}, -1.5})
                   .analytic_valid());
  EXPECT_FALSE(validity_witness(FamilyTag::xl_poschl_teller, {{{"B", -1.0}, {"l", 1}}, 0.5})
                   .analytic_valid());
  EXPECT_FALSE(validity_witness(FamilyTag::xl_radial_oscillator,
                                {{{"omega", 1.0}, {"l", 2}}, -0.5})
                   .analytic_valid());
}

TEST(Validity, ScarfAlwaysValidWithPuncture) {
  for (double m : {-2.5, 0.0, 1.7}) {
    const auto e = get_family(FamilyTag::xl_pt_scarf, {{{"B", 0.3}, {"l", 2}}, m});
    EXPECT_TRUE(validity_witness(e).analytic_valid());
    ASSERT_EQ(e.family.punctures().size(), 1u);
    EXPECT_EQ(e.family.punctures()[0], 0.0);
  }
}

TEST(Validity, SampledPointsAgreeWithScan) {
  for (auto tag : all_family_tags)
    for (const auto &p : sample_valid_params(tag, 10, 404)) {
      const auto w = validity_witness(tag, p);
      EXPECT_TRUE(w.analytic_valid()) << to_string(tag);
      EXPECT_TRUE(w.scan_valid()) << to_string(tag);
    }
}

TEST(Validity, TrigonometricRegionsFollowAbsoluteD) {
  // c = 1, beta = 0.5, d = -1: regions m < -2 or m > 1
  const ParamPoint base{{{"c", 1.0}, {"beta", 0.5}, {"d", -1.0}}, 0.0};
  for (double m : {-2.1, -1.9, 0.0, 0.9, 1.1}) {
    const auto w = validity_witness(FamilyTag::x1_trigonometric, base.with_m(m));
    EXPECT_TRUE(w.agree()) << "m=" << m;
    EXPECT_EQ(w.analytic_valid(), m < -2.0 || m > 1.0) << "m=" << m;
  }
}

TEST(Sampler, OscillatorPointsRespectMargin) {
  const auto pts = sample_valid_params(FamilyTag::x1_radial_oscillator, 3, 7);
  ASSERT_EQ(pts.size(), 3u);
  for (const auto &p : pts)
    EXPECT_LT(p.m, -(1 + 2 * p.get("d")) / 2 - 0.1);
}

TEST(Sampler, PoschlTellerInsideSymmetricInterval) {
  const auto p = sample_valid_params(FamilyTag::xl_poschl_teller, 1, 1)[0];
  const double B = p.get("B");
  EXPECT_LT(B, -0.6);
  EXPECT_GT(p.m, (1 + 2 * B) / 2);
  EXPECT_LT(p.m, -(1 + 2 * B) / 2);
}

TEST(Sampler, Deterministic) {
  for (auto tag : all_family_tags) {
    const auto a = sample_valid_params(tag, 4, 99);
    const auto b = sample_valid_params(tag, 4, 99);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].m, b[i].m);
      EXPECT_EQ(a[i].constants, b[i].constants);
    }
  }
}

TEST(Sampler, ErrorsOnBadCountAndEmptyRegion) {
  EXPECT_THROW(sample_valid_params(FamilyTag::x1_hyperbolic, 0, 1), UsageError);
  // a margin wider than the whole m box leaves nothing to draw
  EXPECT_THROW(sample_valid_params(FamilyTag::xl_radial_oscillator, 1, 1, 2, 50.0),
               SamplingError);
}

TEST(Catalog, TranslationHoldsAlgebraically) {
  for (auto tag : all_family_tags)
    for (const auto &p : sample_valid_params(tag, 5, 2024)) {
      const auto e = get_family(tag, p);
      const double ms[] = {p.m, p.m - 1};
      const auto g = make_grid(e.family, std::span<const double>(ms));
      EXPECT_LT(check_translation(e.family, p.m, g), 1e-12) << to_string(tag);
    }
}

TEST(Catalog, RegionBoundaries) {
  const auto b = region_boundaries(FamilyTag::xl_poschl_teller, {{{"B", -2.0}, {"l", 1}}, 0.0});
  ASSERT_EQ(b.size(), 2u);
  EXPECT_DOUBLE_EQ(b[0].m, -1.5);
  EXPECT_DOUBLE_EQ(b[1].m, 1.5);
  EXPECT_TRUE(region_boundaries(FamilyTag::xl_pt_scarf, {{{"B", 0.3}, {"l", 1}}, 0.0}).empty());
}
