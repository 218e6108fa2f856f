#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <mpfr.h>

#include "pellpad/contfrac.hpp"

using namespace pellpad;

namespace {

// Plain MPFR oracle: alpha by Newton on x^3 - x - 1, then the quotients of
// f(alpha) at two precisions, kept only where they agree.
std::vector<long> mpfr_quotients(bool prime, long prec, size_t n) {
  auto run = [&](long p) {
    mpfr_t x, f, fp, t, a, la, v;
    mpfr_inits2(p, x, f, fp, t, a, la, v, (mpfr_ptr)0);
    mpfr_set_d(x, 1.3247, MPFR_RNDN);
    for (int i = 0; i < 40; ++i) {
      mpfr_pow_ui(f, x, 3, MPFR_RNDN);
      mpfr_sub(f, f, x, MPFR_RNDN);
      mpfr_sub_ui(f, f, 1, MPFR_RNDN);
      mpfr_sqr(fp, x, MPFR_RNDN);
      mpfr_mul_ui(fp, fp, 3, MPFR_RNDN);
      mpfr_sub_ui(fp, fp, 1, MPFR_RNDN);
      mpfr_div(t, f, fp, MPFR_RNDN);
      mpfr_sub(x, x, t, MPFR_RNDN);
    }
    // a = alpha (alpha + 1) / (3 alpha^2 - 1)
    mpfr_add_ui(a, x, 1, MPFR_RNDN);
    mpfr_mul(a, a, x, MPFR_RNDN);
    mpfr_div(a, a, fp, MPFR_RNDN);
    mpfr_log(la, x, MPFR_RNDN);
    if (prime) {
      mpfr_log(v, a, MPFR_RNDN);
      mpfr_abs(v, v, MPFR_RNDN);
    } else {
      mpfr_mul_ui(v, a, 2, MPFR_RNDN);
      mpfr_log(v, v, MPFR_RNDN);
    }
    mpfr_div(v, v, la, MPFR_RNDN);
    std::vector<long> q;
    for (size_t i = 0; i < n; ++i) {
      mpfr_floor(t, v);
      q.push_back(mpfr_get_si(t, MPFR_RNDN));
      mpfr_sub(v, v, t, MPFR_RNDN);
      mpfr_ui_div(v, 1, v, MPFR_RNDN);
    }
    mpfr_clears(x, f, fp, t, a, la, v, (mpfr_ptr)0);
    return q;
  };
  auto lo = run(prec), hi = run(2 * prec);
  size_t k = 0;
  while (k < lo.size() && lo[k] == hi[k]) ++k;
  return std::vector<long>(lo.begin(), lo.begin() + (k > 2 ? k - 2 : 0));
}

RealFn tau_fn(bool prime) {
  return [prime](long p) {
    auto K = constants(p);
    return prime ? abs(K.log_a) / K.log_alpha : K.log_2a / K.log_alpha;
  };
}

}  // namespace

TEST_CASE("sqrt(d) expansions") {
  auto c2 = sqrt_cf(2);
  CHECK(c2.quotients[0] == 1);
  CHECK(c2.period == 1);
  CHECK(c2.quotients[1] == 2);
  auto c13 = sqrt_cf(13);
  CHECK(c13.period == 5);
  std::vector<mpz_class> want{3, 1, 1, 1, 1, 6};
  CHECK(c13.quotients == want);
  auto c3 = sqrt_cf(3);
  CHECK(c3.period == 2);
  CHECK(c3.quotients[1] == 1);
  CHECK(c3.quotients[2] == 2);
  CHECK_THROWS_AS(sqrt_cf(16), SquareArgument);
}

TEST_CASE("sqrt(d) period ends with 2 a0 and is a palindrome") {
  for (long d = 2; d <= 1000; ++d) {
    long r = (long)std::sqrt((double)d);
    if (r * r == d) continue;
    auto cf = sqrt_cf(d);
    REQUIRE(cf.period >= 1);
    CHECK(cf.quotients[0] == r);
    CHECK(cf.quotients[cf.period] == 2 * r);
    for (long i = 1; i < cf.period; ++i) CHECK(cf.quotients[i] == cf.quotients[cf.period - i]);
  }
}

TEST_CASE("tau quotients against the MPFR oracle") {
  auto want = mpfr_quotients(false, 2000, 120);
  REQUIRE(want.size() >= 100);
  auto cf = expand(tau_fn(false), 100, "tau");
  for (size_t i = 0; i < 100; ++i) CHECK(cf.quotients[i] == want[i]);
  std::vector<long> head{1, 3, 3, 1, 11, 1, 2, 1, 1, 1, 3, 1, 1, 1, 2, 5, 1, 15, 2, 19, 1, 1, 2, 2};
  for (size_t i = 0; i < head.size(); ++i) CHECK(cf.quotients[i] == head[i]);
}

TEST_CASE("tau' quotients against the MPFR oracle") {
  auto want = mpfr_quotients(true, 2000, 120);
  REQUIRE(want.size() >= 100);
  auto cf = expand(tau_fn(true), 100, "tau'");
  for (size_t i = 0; i < 100; ++i) CHECK(cf.quotients[i] == want[i]);
  std::vector<long> head{1, 6, 2, 1, 18, 166};
  for (size_t i = 0; i < head.size(); ++i) CHECK(cf.quotients[i] == head[i]);
}

TEST_CASE("convergent determinant identity") {
  auto cf = expand(tau_fn(false), 300, "tau");
  for (size_t i = 1; i < cf.size(); ++i) {
    mpz_class det = cf.p[i] * cf.q[i - 1] - cf.p[i - 1] * cf.q[i];
    CHECK(det == ((i % 2) ? 1 : -1));  // (-1)^(i-1)
  }
  CHECK(cf.certified_upto >= 299);
}

TEST_CASE("expand_rational and common_quotients") {
  auto r = expand_rational(mpq_class(355, 113));
  std::vector<mpz_class> want{3, 7, 16};
  CHECK(r.quotients == want);
  CHECK(r.p.back() == 355);
  CHECK(r.q.back() == 113);
  // pi = [3; 7, 15, 1, 292, ...]
  auto c = common_quotients(mpq_class(3141592653, 1000000000), mpq_class(3141592654, 1000000000), 10);
  REQUIRE(c.size() >= 3);
  CHECK(c[0] == 3);
  CHECK(c[1] == 7);
  CHECK(c[2] == 15);
}

TEST_CASE("Legendre bound values") {
  auto cf = expand_until_q(tau_fn(false), mpz_class(parse_decimal("4.87e165")), "tau");
  auto lr = legendre_bound(cf, mpz_class(parse_decimal("4.87e165")));
  CHECK(lr.aM == 2107);
  CHECK(lr.argmax == 282);
  // The second family uses tau'.
  auto cf2 = expand_until_q(tau_fn(true), mpz_class(parse_decimal("3.07e162")), "tau'");
  auto lr2 = legendre_bound(cf2, mpz_class(parse_decimal("3.07e162")));
  CHECK(lr2.aM == 1028);
  CHECK(lr2.argmax == 189);
  CHECK(lr2.qN > mpz_class(parse_decimal("3.07e162")));
  CHECK(cf2.q[lr2.N - 1] <= mpz_class(parse_decimal("3.07e162")));
}

TEST_CASE("Legendre inequality against brute force") {
  // |x tau - y| >= 1 / ((aM + 2) y) for 0 < y <= M.
  auto cf = expand(tau_fn(false), 40, "tau");
  for (long M : {10L, 100L, 1000L, 5000L}) {
    auto lr = legendre_bound(cf, M);
    mpq_class lo = tau_fn(false)(256).lower_q(), hi = tau_fn(false)(256).upper_q();
    for (long y = 1; y <= M; ++y) {
      // x is the nearest integer to y tau; check the weaker form for all x, y.
      mpz_class x;
      mpq_class yt = lo * y;
      mpz_fdiv_q(x.get_mpz_t(), yt.get_num_mpz_t(), yt.get_den_mpz_t());
      for (mpz_class c = x - 1; c <= x + 2; ++c) {
        mpq_class dlo = abs(mpq_class(y) * lo - c), dhi = abs(mpq_class(y) * hi - c);
        mpq_class d = dlo < dhi ? dlo : dhi;
        if (sgn(mpq_class(y) * lo - c) != sgn(mpq_class(y) * hi - c)) d = 0;
        CHECK(d * (lr.aM + 2) * y >= 1);
      }
    }
  }
}
