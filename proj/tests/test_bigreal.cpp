#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pellpad/bigreal.hpp"

using namespace pellpad;

namespace {

// Interval of `lo` contains that of `hi` (hi computed at higher precision).
bool encloses(const BigReal& lo, const BigReal& hi) {
  return lo.lower_q() <= hi.lower_q() && hi.upper_q() <= lo.upper_q();
}

mpq_class rand_q(std::mt19937_64& g, bool positive) {
  std::uniform_int_distribution<long> num(positive ? 1 : -100000, 100000), den(1, 9999);
  mpq_class q(num(g), den(g));
  q.canonicalize();
  if (q == 0) q = 1;
  return q;
}

}  // namespace

TEST_CASE("exact inputs round-trip") {
  BigReal x = BigReal::from_int(7, 128);
  CHECK(x.contains(7));
  CHECK_FALSE(x.contains(mpq_class(71, 10)));
  BigReal t = BigReal::from_mpq(mpq_class(1, 3), 128);
  CHECK(t.contains(mpq_class(1, 3)));
  CHECK(BigReal::from_decimal("4.87e165", 600).contains(parse_decimal("4.87e165")));
}

TEST_CASE("containment against 4x precision on random inputs") {
  std::mt19937_64 g(20190501);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    mpq_class a = rand_q(g, false), b = rand_q(g, false), c = rand_q(g, true);
    auto run = [&](long p) {
      BigReal A = BigReal::from_mpq(a, p), B = BigReal::from_mpq(b, p), Cp = BigReal::from_mpq(c, p);
      return std::vector<BigReal>{A + B, A - B, A * B, A / Cp, sqrt(Cp), cbrt(Cp), log(Cp),
                                  exp(A / 10000), pow(A, 7), abs(A)};
    };
    auto lo = run(96), hi = run(384);
    for (size_t k = 0; k < lo.size(); ++k)
      if (!encloses(lo[k], hi[k])) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("certified_compare") {
  CHECK(certified_compare(BigReal::from_int(1, 64), BigReal::from_int(2, 64)) == Ordering::less);
  CHECK(certified_compare(BigReal::from_int(2, 64), BigReal::from_int(1, 64)) == Ordering::greater);
  // 1 +- 0.5 against 1.2 +- 0.5
  mpfr_t m, r;
  mpfr_inits2(64, m, r, (mpfr_ptr)0);
  mpfr_set_d(m, 1.0, MPFR_RNDN);
  mpfr_set_d(r, 0.5, MPFR_RNDN);
  BigReal x = BigReal::from_mid_rad(m, r, 64);
  mpfr_set_d(m, 1.2, MPFR_RNDN);
  BigReal y = BigReal::from_mid_rad(m, r, 64);
  mpfr_clears(m, r, (mpfr_ptr)0);
  CHECK(certified_compare(x, y) == Ordering::unknown);
  CHECK(certified_compare(constants(256).alpha, BigReal::from_decimal("1.33", 256)) == Ordering::less);
}

TEST_CASE("certified_floor") {
  mpfr_t m, r;
  mpfr_inits2(64, m, r, (mpfr_ptr)0);
  mpfr_set_d(m, 2.75, MPFR_RNDN);
  mpfr_set_d(r, 0.1, MPFR_RNDU);
  CHECK(certified_floor(BigReal::from_mid_rad(m, r, 64)) == 2);
  mpfr_set_d(m, 3.0, MPFR_RNDN);
  mpfr_set_d(r, 0.2, MPFR_RNDU);
  CHECK_THROWS_AS(certified_floor(BigReal::from_mid_rad(m, r, 64)), AmbiguousAtPrecision);
  mpfr_clears(m, r, (mpfr_ptr)0);
  CHECK(certified_floor(BigReal::from_int(-5, 64) / 2) == -3);
}

TEST_CASE("plastic number constants") {
  auto K = constants(256);
  CHECK(certified_compare(K.alpha, BigReal::from_decimal("1.32", 256)) == Ordering::greater);
  CHECK(certified_compare(K.alpha, BigReal::from_decimal("1.33", 256)) == Ordering::less);
  CHECK(certified_compare(K.abs_beta, BigReal::from_decimal("0.86", 256)) == Ordering::greater);
  CHECK(certified_compare(K.abs_beta, BigReal::from_decimal("0.87", 256)) == Ordering::less);
  CHECK(certified_compare(K.a, BigReal::from_decimal("0.72", 256)) == Ordering::greater);
  CHECK(certified_compare(K.a, BigReal::from_decimal("0.73", 256)) == Ordering::less);
  CHECK(certified_compare(K.abs_b, BigReal::from_decimal("0.24", 256)) == Ordering::greater);
  CHECK(certified_compare(K.abs_b, BigReal::from_decimal("0.25", 256)) == Ordering::less);

  BigReal psi = pow(K.alpha, 3) - K.alpha - 1;
  CHECK(psi.contains_zero());
  // |beta| = alpha^(-1/2): the complex pair has product 1/alpha.
  BigReal inv_sqrt = BigReal::from_int(1, 256) / sqrt(K.alpha);
  CHECK((K.abs_beta - inv_sqrt).contains_zero());
  // a = alpha(alpha + 1)/(3 alpha^2 - 1)
  BigReal a2 = K.alpha * (K.alpha + 1) / (pow(K.alpha, 2) * 3 - 1);
  CHECK((K.a - a2).contains_zero());
  CHECK((K.log_2a - log(K.a * 2)).contains_zero());
  // alpha = (r1 + r2)/6
  CHECK((K.alpha - (K.r1 + K.r2) / 6).contains_zero());
}

TEST_CASE("independent alpha oracle by bisection on x^3 - x - 1") {
  mpq_class lo(132, 100), hi(133, 100);
  for (int i = 0; i < 200; ++i) {
    mpq_class mid = (lo + hi) / 2;
    if (mid * mid * mid - mid - 1 < 0)
      lo = mid;
    else
      hi = mid;
  }
  auto K = constants(256);
  CHECK(K.alpha.lower_q() <= hi);
  CHECK(lo <= K.alpha.upper_q());
}

TEST_CASE("refinement never enlarges a constant") {
  double prev = 1e9;
  for (long p : {128L, 256L, 512L, 1024L, 2048L}) {
    auto K = constants(p);
    double acc = K.alpha.rel_accuracy_bits();
    CHECK(acc <= prev);
    CHECK(encloses(constants(p / 2 < 64 ? 64 : p / 2).log_alpha, K.log_alpha));
    prev = acc;
  }
}

TEST_CASE("with_precision escalates and then gives up") {
  PrecisionPolicy pol{64, 1024, 2};
  long seen = 0;
  long got = with_precision(pol, [&](long p) -> long {
    seen = p;
    if (p < 512) throw AmbiguousAtPrecision("more");
    return p;
  });
  CHECK(got == 512);
  CHECK(seen == 512);
  CHECK_THROWS_AS(with_precision(pol, [](long) -> long { throw PrecisionExhausted("never"); }), PrecisionExhausted);
}

TEST_CASE("decimal parsing") {
  CHECK(parse_decimal("2.4e43") == mpq_class(mpz_class("24000000000000000000000000000000000000000000")));
  CHECK(parse_decimal("0.3100") == mpq_class(31, 100));
  CHECK(parse_decimal("-1.5") == mpq_class(-3, 2));
}
