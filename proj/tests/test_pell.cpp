#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pellpad/contfrac.hpp"
#include "pellpad/pell.hpp"

using namespace pellpad;

namespace {

// Smallest positive (x, y) with x^2 - d y^2 = N, searching y upward.
std::optional<std::pair<long, long>> brute(long d, long N, long y_max) {
  for (long y = 1; y <= y_max; ++y) {
    long v = d * y * y + N;
    if (v <= 0) continue;
    long x = (long)std::llround(std::sqrt((double)v));
    for (long c = x - 1; c <= x + 1; ++c)
      if (c > 0 && c * c == v) return std::make_pair(c, y);
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("fundamental solutions from the tables") {
  auto f = fundamental(3, Family::unit);
  CHECK(f.x1 == 2);
  CHECK(f.y1 == 1);
  CHECK(f.eps == 1);
  f = fundamental(2, Family::unit);
  CHECK(f.x1 == 1);
  CHECK(f.eps == -1);
  f = fundamental(13, Family::unit);
  CHECK(f.x1 == 18);
  CHECK(f.y1 == 5);
  CHECK(f.eps == -1);
  f = fundamental(5, Family::quad);
  CHECK(f.x1 == 1);
  CHECK(f.y1 == 1);
  CHECK(f.eps == -1);
  f = fundamental(138, Family::unit);
  CHECK(f.x1 == 47);
  CHECK(f.y1 == 4);
  CHECK_THROWS_AS(fundamental(4, Family::unit), DomainError);
  CHECK_THROWS_AS(fundamental(49, Family::quad), DomainError);
}

TEST_CASE("fundamental solutions against brute force") {
  for (long d = 2; d <= 400; ++d) {
    long r = (long)std::sqrt((double)d);
    if (r * r == d) continue;
    for (Family fam : {Family::unit, Family::quad}) {
      long N = fam == Family::unit ? 1 : 4;
      auto f = fundamental(d, fam);
      auto neg = brute(d, -N, 20000);
      auto pos = brute(d, N, 20000);
      // The least unit is the negative one when it exists.
      if (neg) {
        CHECK(f.eps == -1);
        CHECK(f.x1 == neg->first);
        CHECK(f.y1 == neg->second);
      } else if (pos && f.eps == 1) {
        CHECK(f.x1 == pos->first);
        CHECK(f.y1 == pos->second);
      }
      CHECK(f.x1 * f.x1 - d * f.y1 * f.y1 == N * f.eps);
    }
  }
}

TEST_CASE("norm of powers") {
  for (long d = 2; d <= 500; ++d) {
    long r = (long)std::sqrt((double)d);
    if (r * r == d) continue;
    for (Family fam : {Family::unit, Family::quad}) {
      auto f = fundamental(d, fam);
      long N = fam == Family::unit ? 1 : 4;
      for (long k = 1; k <= 10; ++k) {
        mpz_class x = solution_x(f, k), y = solution_y(f, k);
        int e = (f.eps < 0 && k % 2) ? -1 : 1;
        CHECK(x * x - d * y * y == N * e);
      }
    }
  }
}

TEST_CASE("solution_x examples") {
  auto f = fundamental(2, Family::unit);
  CHECK(solution_x(f, 3) == 7);
  CHECK(solution_x(f, 1) == f.x1);
  CHECK(solution_x(fundamental(3, Family::unit), 3) == 26);
}

TEST_CASE("estimate delta^k / alpha^4 <= x_k <= delta^k") {
  auto K = constants(256);
  for (long d = 2; d <= 100; ++d) {
    long r = (long)std::sqrt((double)d);
    if (r * r == d) continue;
    auto f = fundamental(d, Family::unit);
    UnitValue u{f.x1, Family::unit, f.eps};
    auto g = fundamental(d, Family::quad);
    UnitValue v{g.x1, Family::quad, g.eps};
    for (long k = 1; k <= 50; ++k) {
      BigReal dk = pow(u.delta(512), k), x = BigReal::from_mpz(solution_x(f, k), 512);
      CHECK(certified_compare(dk / pow(constants(512).alpha, 4), x) == Ordering::less);
      CHECK(certified_compare(x, dk) != Ordering::greater);
      BigReal rk = pow(v.delta(512), k), X = BigReal::from_mpz(solution_x(g, k), 512);
      CHECK(certified_compare(rk / pow(constants(512).alpha, 2), X) == Ordering::less);
      CHECK(certified_compare(X, rk * 2) == Ordering::less);
    }
  }
  (void)K;
}

TEST_CASE("stated equation solutions") {
  auto f = fundamental(2, Family::unit);
  auto s = stated_equation_solutions(f, -1, 5);
  REQUIRE(s.size() == 3);
  CHECK(s[0].x == 1);
  CHECK(s[1].x == 7);
  CHECK(s[2].x == 41);
  CHECK(s[2].ordinal == 3);
  CHECK(s[2].k == 5);
  auto p = stated_equation_solutions(f, 1, 4);
  REQUIRE(p.size() == 2);
  CHECK(p[0].x == 3);
  CHECK(p[1].x == 17);
  CHECK_THROWS_AS(stated_equation_solutions(fundamental(3, Family::unit), -1, 5), SignUnsolvable);
  auto g = stated_equation_solutions(fundamental(17, Family::unit), -1, 3);
  REQUIRE(g.size() == 2);
  CHECK(g[0].x == 4);
  CHECK(g[1].x == 268);
}

TEST_CASE("closed forms and their inversion") {
  CHECK(q_closed_form(2, Family::unit, 1, 2) == 7);
  CHECK(q_closed_form(1, Family::unit, -1, 2) == 3);
  CHECK(q_closed_form(1, Family::quad, -1, 2) == 3);
  CHECK_THROWS_AS(q_closed_form(2, Family::quad, 1, 2), DomainError);
  CHECK(invert_q(7, Family::unit, 1, 2) == mpz_class(2));
  CHECK(invert_q(3, Family::unit, -1, 2) == mpz_class(1));
  CHECK_FALSE(invert_q(5, Family::unit, 1, 2).has_value());
  for (long x = 1; x <= 3000; x += 7)
    for (long k = 2; k <= 20; ++k)
      for (Family fam : {Family::unit, Family::quad})
        for (int s : {1, -1}) {
          if (x < q_domain_min(fam, s)) continue;
          mpz_class t = q_closed_form(x, fam, s, k);
          auto back = invert_q(t, fam, s, k);
          CHECK((back && *back == x));
        }
}

TEST_CASE("closed form agrees with an independent Lucas sequence") {
  // Q^s_k(x) = V_k(2x, s)/2 for the unit family.
  for (long x = 1; x <= 40; ++x)
    for (int s : {1, -1})
      for (long k = 2; k <= 12; ++k) {
        if (x < q_domain_min(Family::unit, s)) continue;
        mpz_class v0 = 2, v1 = 2 * x;
        for (long i = 1; i < k; ++i) {
          mpz_class v2 = 2 * x * v1 - s * v0;
          v0 = v1;
          v1 = v2;
        }
        CHECK(q_closed_form(x, Family::unit, s, k) == v1 / 2);
      }
}

TEST_CASE("recover_d") {
  auto has = [](const std::vector<DPair>& v, long d, long y) {
    return std::find(v.begin(), v.end(), DPair{d, y}) != v.end();
  };
  auto r = recover_d(47, Family::unit, 1);
  CHECK(has(r, 138, 4));
  r = recover_d(3, Family::unit, 1);
  CHECK(has(r, 2, 2));
  CHECK(has(r, 8, 1));
  r = recover_d(2, Family::unit, -1);
  CHECK(r.size() == 1);
  CHECK(has(r, 5, 1));
}

TEST_CASE("power dedup identity 3 + 2 sqrt 2 = (1 + sqrt 2)^2") {
  UnitValue a{3, Family::unit, 1}, b{1, Family::unit, -1};
  BigReal diff = a.delta(256) - pow(b.delta(256), 2);
  CHECK(diff.contains_zero());
  CHECK((a.delta(256) * (BigReal::from_int(3, 256) * 2 - a.delta(256)) - 1).contains_zero());
}

TEST_CASE("period parity decides the norm sign") {
  for (long d = 2; d <= 300; ++d) {
    long r = (long)std::sqrt((double)d);
    if (r * r == d) continue;
    auto cf = sqrt_cf(d);
    CHECK((cf.period % 2 == 1) == (fundamental(d, Family::unit).eps == -1));
  }
}

TEST_CASE("equation kinds") {
  CHECK(EqKind::parse("quad-minus") == EqKind{Family::quad, -1});
  CHECK(EqKind{Family::unit, 1}.name() == "unit-plus");
  CHECK(EqKind{Family::quad, -1}.rhs() == -4);
  CHECK_THROWS(EqKind::parse("plus"));
}
