// Walk through the library on the X1 radial oscillator: build the family,
// check the identities on a grid, then compare partner spectra.

#include <cstdio>

#include "shinv/shinv.hpp"

using namespace shinv;

int main() {
  const ParamPoint p{{{"omega", 1.0}, {"d", 1.0}}, -3.0};
  const auto entry = get_family(FamilyTag::x1_radial_oscillator, p);
  const auto &f = entry.family;

  const double ms[] = {-3.0, -4.0, -5.0};
  const auto grid = make_grid(f, std::span<const double>(ms));
  std::printf("%s, %zu grid points on (%.4g, %.4g)\n", f.name().c_str(), grid.size(),
              grid.front(), grid.back());

  const double x = grid[grid.size() / 2];
  std::printf("W(%.4f) = %.15g\n", x, eval_W(f, p.m, x).real());

  std::printf("translation   %.3e\n", check_translation(f, p.m, grid));
  std::printf("compatibility %.3e\n", check_compatibility(f, ms, grid).residual);
  std::printf("algebra       %.3e\n", check_algebra_condition(f, p.m, grid));
  const auto ch = check_equivalence_chain(f, p.m, grid);
  std::printf("chain         %.3e %.3e %.3e\n", ch.r12_vs_14, ch.r14_vs_15, ch.r15_vs_0);

  const auto ih = check_infeld_hull(f, grid);
  std::printf("a = %.12g (expected %g), b = %.12g (expected %g)\n", ih.constants.a,
              entry.expected_a, ih.constants.b, entry.expected_b);

  const auto iso = check_isospectrality(f, p.m, 5);
  std::printf("R = %.12g, mismatch %.3e\n", iso.R, iso.mismatch);
  for (std::size_t i = 0; i < iso.plus.eigenvalues.size(); ++i)
    std::printf("  %zu  %.10f  %.10f\n", i, iso.plus.eigenvalues[i],
                iso.minus_shifted.eigenvalues[i] + iso.R);

  // a broken copy for comparison
  const auto bad = perturb(f, {PerturbationKind::w1minus_linear, 1e-2});
  std::printf("perturbed: translation %.3e, algebra %.3e\n", check_translation(bad, p.m, grid),
              check_algebra_condition(bad, p.m, grid));
}
