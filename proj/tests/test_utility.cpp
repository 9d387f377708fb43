#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uentropy/uentropy.hpp"

using namespace uentropy;
using Catch::Approx;

TEST_CASE("builtin values") {
  const auto lg = log_utility();
  CHECK(lg.eval(1.0) == 0.0);
  CHECK(lg.u_at_zero.is_neg_inf());
  CHECK(lg.u_at_infinity.is_pos_inf());

  const auto iso_m1 = isoelastic_utility(-1.0);
  CHECK(iso_m1.u_at_infinity.value() == Approx(1.0));
  CHECK(iso_m1.u_at_zero.is_neg_inf());

  const auto iso_h = isoelastic_utility(0.5);
  CHECK(iso_h.inverse_marginal(4.0) == Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(iso_h.u_at_zero.value() == Approx(-2.0));
  CHECK(iso_h.u_at_infinity.is_pos_inf());

  // Cross-check I against a numerical inversion of u'(x) = x^{-1/2}.
  const double x_num = detail::invert_monotone(iso_h.marginal, 4.0, false);
  CHECK(iso_h.inverse_marginal(4.0) == Approx(x_num).epsilon(1e-9));

  CHECK(make_builtin(UtilityFamily::Log).label == "log");
  CHECK_THROWS_AS(isoelastic_utility(0.0), InvalidGamma);
  CHECK_THROWS_AS(isoelastic_utility(1.0), InvalidGamma);
  CHECK_THROWS_AS(isoelastic_utility(1.5), InvalidGamma);
  CHECK_THROWS_AS(make_builtin(UtilityFamily::Isoelastic), InvalidGamma);
}

TEST_CASE("transforms") {
  const auto lg = log_utility();
  CHECK(affine_transform(lg, 2.0, 3.0).eval(1.0) == Approx(3.0));
  CHECK(rescale(lg, 5.0).eval(1.0) == Approx(std::log(5.0)));
  CHECK_THROWS_AS(affine_transform(lg, 0.0, 1.0), InvalidScale);
  CHECK_THROWS_AS(affine_transform(lg, -2.0, 1.0), InvalidScale);
  CHECK_THROWS_AS(rescale(lg, 0.0), InvalidScale);

  // Identity transform leaves h_u untouched.
  const ProbVector p({0.8, 0.2});
  const auto base = isoelastic_utility(0.5);
  const auto same = affine_transform(base, 1.0, 0.0);
  CHECK(h_u(same, p).entropy.value() == Approx(h_u(base, p).entropy.value()).margin(1e-12));

  // Transform arithmetic is exactly the composed expression.
  const auto aff = affine_transform(lg, 2.5, -0.75);
  for (double x : {0.1, 1.0, 7.5}) CHECK(aff.eval(x) == 2.5 * lg.eval(x) + -0.75);

  // Rescale limits keep u(0), u(inf).
  const auto rs = rescale(isoelastic_utility(-1.0), 3.0);
  CHECK(rs.u_at_infinity.value() == Approx(1.0));
}

TEST_CASE("convex dual values and boundaries") {
  const auto lg = log_utility();
  CHECK(convex_dual(lg, ExtReal(1.0)).value() == Approx(-1.0).margin(1e-12));
  CHECK(convex_dual(lg, ExtReal(0.0)).is_pos_inf());
  CHECK(convex_dual(isoelastic_utility(-1.0), ExtReal::pos_inf()).is_neg_inf());
  CHECK(convex_dual(isoelastic_utility(0.5), ExtReal(0.0)).is_pos_inf());
  CHECK_THROWS_AS(convex_dual(lg, ExtReal(-0.5)), NegativeArgument);
}

TEST_CASE("Fenchel-Young inequality with equality at I(y)") {
  for (const auto& u : {log_utility(), isoelastic_utility(-1.0), isoelastic_utility(0.5)}) {
    for (double y : {0.1, 0.5, 1.0, 3.0, 20.0}) {
      const double ustar = convex_dual(u, ExtReal(y)).value();
      for (double x : {0.01, 0.1, 1.0, 2.0, 50.0})
        CHECK(u.eval(x) - y * x <= ustar + 1e-12 * (1.0 + std::abs(ustar)));
      const double xstar = u.inverse_marginal(y);
      CHECK(u.eval(xstar) - y * xstar ==
            Approx(ustar).epsilon(1e-9).margin(1e-12));
    }
  }
}

TEST_CASE("inverse round-trips on a wide grid") {
  const auto specs = {log_utility(), isoelastic_utility(-2.0), isoelastic_utility(-0.5),
                      isoelastic_utility(0.25), isoelastic_utility(0.75),
                      affine_transform(log_utility(), 2.0, 3.0),
                      rescale(isoelastic_utility(0.5), 4.0)};
  for (const auto& u : specs) {
    for (int j = -6; j <= 6; ++j) {
      const double x = std::pow(10.0, j);
      // Inverting u at y = fl(u(x)) amplifies the rounding of y by
      // |y| / (x u'(x)); near the bound of a bounded utility (gamma << 0,
      // large x) that factor swamps any fixed tolerance, so the bound is
      // conditioning-aware there and 1e-10 everywhere else.
      const double cond = std::max(1.0, std::abs(u.eval(x)) / (x * u.marginal(x)));
      const double tol = std::max(1e-10, 8e-16 * cond);
      CHECK(std::abs(u.inverse(u.eval(x)) - x) / x <= tol);
      // The marginal is a pure power for every builtin: no cancellation, so
      // the strict bound holds across the whole grid.
      CHECK(std::abs(u.inverse_marginal(u.marginal(x)) - x) / x <= 1e-10);
    }
  }
}

TEST_CASE("asymptotic elasticity") {
  CHECK(asymptotic_elasticity(isoelastic_utility(0.5)).value == Approx(0.5));
  CHECK(asymptotic_elasticity(isoelastic_utility(0.5)).is_exact);
  CHECK(asymptotic_elasticity(log_utility()).value == Approx(0.0));
  CHECK(asymptotic_elasticity(isoelastic_utility(-1.0)).value == Approx(0.0));

  // Numerical estimate for a custom spec mirroring gamma = -1: the ratio
  // x u'/u dies off along the grid.
  const auto custom = make_custom([](double x) { return 1.0 - 1.0 / x; },
                                  [](double x) { return 1.0 / (x * x); }, ExtReal::neg_inf(),
                                  ExtReal(1.0), "custom-recip");
  const auto est = asymptotic_elasticity(custom);
  CHECK_FALSE(est.is_exact);
  CHECK(est.value < 1e-6);

  // Sign change on the grid flags the estimate.
  const auto shifted = make_custom([](double x) { return std::log(x) - 5.0; },
                                   [](double x) { return 1.0 / x; }, ExtReal::neg_inf(),
                                   ExtReal::pos_inf(), "custom-shifted-log");
  CHECK(asymptotic_elasticity(shifted).low_confidence);
}

TEST_CASE("custom spec synthesizes usable inverses") {
  const auto u = make_custom(
      [](double x) { return std::log(x) + std::sqrt(x); },
      [](double x) { return 1.0 / x + 0.5 / std::sqrt(x); }, ExtReal::neg_inf(),
      ExtReal::pos_inf(), "log-plus-sqrt");
  for (double x : {0.01, 0.3, 1.0, 4.0, 250.0}) {
    CHECK(u.inverse(u.eval(x)) == Approx(x).epsilon(1e-9));
    CHECK(u.inverse_marginal(u.marginal(x)) == Approx(x).epsilon(1e-9));
  }
  CHECK(check_inada(u, {0.01, 0.1, 1.0, 10.0, 100.0}).pass());
}

TEST_CASE("check_inada diagnostics") {
  const std::vector<double> grid{0.01, 0.1, 1.0, 10.0, 100.0};
  CHECK(check_inada(log_utility(), grid).pass());
  CHECK(check_inada(isoelastic_utility(0.9), grid).pass());

  // An affine non-utility: strictly increasing but not strictly concave.
  const auto linear = make_custom([](double x) { return x; }, [](double) { return 1.0; },
                                  ExtReal(0.0), ExtReal::pos_inf(), "linear");
  const auto rep = check_inada(linear, grid);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.concavity.empty());

  CHECK_THROWS_AS(check_inada(log_utility(), {1.0, 2.0}), BadGrid);
  CHECK_THROWS_AS(check_inada(log_utility(), {1.0, 0.5, 2.0}), BadGrid);
  CHECK_THROWS_AS(check_inada(log_utility(), {-1.0, 0.5, 2.0}), BadGrid);
}

TEST_CASE("ExtReal arithmetic conventions") {
  CHECK((0.0 * ExtReal::pos_inf()).value() == 0.0);
  CHECK((0.0 * ExtReal::neg_inf()).value() == 0.0);
  CHECK((0.5 * ExtReal::pos_inf()).is_pos_inf());
  CHECK((-2.0 * ExtReal::pos_inf()).is_neg_inf());
  CHECK((ExtReal(1.0) + ExtReal::pos_inf()).is_pos_inf());
  CHECK_THROWS_AS(ExtReal::pos_inf() + ExtReal::neg_inf(), std::domain_error);
  CHECK(ExtReal::neg_inf() < ExtReal(-1e300));
  CHECK(ExtReal(1e300) < ExtReal::pos_inf());
  CHECK(ExtReal::pos_inf().str() == "inf");
  CHECK(ExtReal::neg_inf().str() == "-inf");
  CHECK_THROWS_AS(ExtReal(std::nan("")), std::domain_error);
}
