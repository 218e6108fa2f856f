#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pellpad/pipeline.hpp"

using namespace pellpad;

namespace {

mpz_class dec(const char* s) { return mpz_class(parse_decimal(s)); }

double ratio(const BigReal& x, const char* printed) {
  return x.lower_q().get_d() / std::stod(printed);
}

// Largest w with 1.33^w <= Y, via doubles in log space.
long cutoff_1_33(double log_y) { return (long)std::floor(log_y / std::log(1.33)); }

}  // namespace

TEST_CASE("convention names") {
  CHECK(std::string(to_string(Convention::published)) == "published");
  CHECK(parse_convention("certified") == Convention::certified);
  CHECK_THROWS(parse_convention("loose"));
}

TEST_CASE("printed figures are wired to the right family") {
  CHECK(setup(Family::unit).printed.cycle[0].lambda == 2714);
  CHECK(setup(Family::unit).printed.cycle[1].lambda == 752);
  CHECK(setup(Family::quad).printed.cycle[0].lambda == 2661);
  CHECK(setup(Family::quad).printed.cycle[1].lambda == 738);
  CHECK(setup(Family::unit).printed.n2_final == 408);
  CHECK(setup(Family::quad).printed.n2_final == 414);
  CHECK(setup(Family::unit).c == QAlpha::binet_a() * QAlpha(2));
  CHECK(setup(Family::quad).c == QAlpha::binet_a());
}

TEST_CASE("absolute bounds") {
  for (Family f : {Family::unit, Family::quad}) {
    const auto& P = setup(f).printed;
    AbsoluteBounds ab = absolute_bounds(f);
    // Matveev coefficients within a factor 1.5 of the printed ones.
    for (auto [v, p] : {std::pair{ab.good1, P.good1}, std::pair{ab.good2, P.good2}}) {
      double r = ratio(v, p.c_str());
      CHECK(r > 1 / 1.5);
      CHECK(r < 1.5);
    }
    // Our absolute n2 and n1 are at most the printed ones.
    CHECK(ab.n2 <= dec(P.n2_abs.c_str()));
    CHECK(ab.n1 <= dec(P.n1_abs.c_str()));
    CHECK(ab.n2 > 0);
    // H consistent with the r = 10 resolution.
    BigReal g = gl_resolve(10, ab.H);
    CHECK(floor_upper(g) + 1 >= ab.n2);
  }
}

TEST_CASE("lambda cutoff reproduces the printed values") {
  LegendreResult leg;
  CHECK(lambda_cutoff(Family::unit, dec("4.87e165"), Convention::published, &leg) == 2714);
  CHECK(leg.aM == 2107);
  CHECK(lambda_cutoff(Family::unit, dec("3.36e44"), Convention::published, &leg) == 752);
  CHECK(leg.aM == 373);
  CHECK(lambda_cutoff(Family::quad, dec("3.07e162"), Convention::published, &leg) == 2661);
  CHECK(leg.aM == 1028);
}

TEST_CASE("lambda cutoff against a double oracle") {
  // UNIT: 1.33^lambda <= 36 (aM + 2) M^2.
  double y = std::log(36.0 * (2107 + 2)) + 2 * std::log(4.87e165);
  CHECK(lambda_cutoff(Family::unit, dec("4.87e165"), Convention::published) == cutoff_1_33(y));
  // The certified convention divides by log alpha and is never smaller.
  CHECK(lambda_cutoff(Family::unit, dec("4.87e165"), Convention::certified) >= 2714);
}

TEST_CASE("k2 cutoff") {
  CHECK(k2_cutoff(Family::unit, 408, Convention::published) == 133);
  CHECK(k2_cutoff(Family::quad, 414, Convention::published) <= 248);
  // delta^k <= 2 alpha^(n+1) with delta >= 1 + sqrt 2.
  double want = std::floor((std::log(2.0) + 409 * std::log(1.324717957244746)) / std::log(1 + std::sqrt(2.0)));
  CHECK(k2_cutoff(Family::unit, 408, Convention::certified) >= (long)want);
}

TEST_CASE("reduce_unit on 2 + sqrt 3") {
  UnitValue u{2, Family::unit, 1};
  UnitReduction r = reduce_unit(Family::unit, u, dec("5e42"));
  REQUIRE(r.stage1.success);
  CHECK(r.stage1.bound == 374);
  CHECK(r.stage1.q > 6 * dec("5e42"));
  CHECK(r.stage2_max <= 408);
}

TEST_CASE("nu cutoff is monotone in the lower bound") {
  BigReal small = BigReal::from_decimal("1e-671", 256), big = BigReal::from_decimal("1e-600", 256);
  mpz_class a = nu_from_bound(Family::unit, dec("4.87e165"), small, Convention::published);
  mpz_class b = nu_from_bound(Family::unit, dec("4.87e165"), big, Convention::published);
  CHECK(a > b);
}
