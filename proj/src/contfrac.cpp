#include "pellpad/contfrac.hpp"

#include <algorithm>

namespace pellpad {

namespace {

mpz_class floor_q(const mpq_class& x) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

}  // namespace

void CFExpansion::rebuild_convergents() {
  p.clear();
  q.clear();
  mpz_class p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (const auto& a : quotients) {
    mpz_class pn = a * p1 + p2, qn = a * q1 + q2;
    p.push_back(pn);
    q.push_back(qn);
    p2 = p1;
    p1 = pn;
    q2 = q1;
    q1 = qn;
  }
}

std::vector<mpz_class> common_quotients(mpq_class lo, mpq_class hi, size_t max_terms) {
  std::vector<mpz_class> out;
  if (lo > hi) std::swap(lo, hi);
  while (out.size() < max_terms) {
    mpz_class a = floor_q(lo);
    if (a != floor_q(hi)) break;
    out.push_back(a);
    mpq_class fl = lo - a, fh = hi - a;
    if (fl == 0) break;
    // x -> 1/(x - a) reverses the order.
    lo = 1 / fh;
    hi = 1 / fl;
  }
  return out;
}

CFExpansion expand(const RealFn& x, size_t n_terms, const std::string& source,
                   const PrecisionPolicy& pol) {
  return with_precision(pol, [&](long prec) {
    BigReal v = x(prec);
    CFExpansion cf;
    cf.source = source;
    cf.quotients = common_quotients(v.lower_q(), v.upper_q(), n_terms);
    if (cf.quotients.size() < n_terms)
      throw AmbiguousAtPrecision("only " + std::to_string(cf.quotients.size()) + " quotients at " +
                                 std::to_string(prec) + " bits");
    cf.certified_upto = (long)n_terms - 1;
    cf.precision_bits = prec;
    cf.rebuild_convergents();
    return cf;
  });
}

CFExpansion expand_until_q(const RealFn& x, const mpz_class& M, const std::string& source,
                           size_t extra, const PrecisionPolicy& pol) {
  PrecisionPolicy p = pol;
  long need = 2 * (long)mpz_sizeinbase(M.get_mpz_t(), 2) + 128;
  p.start_bits = std::max(p.start_bits, need);
  if (p.max_bits < p.start_bits) p.max_bits = p.start_bits * 8;
  return with_precision(p, [&](long prec) {
    BigReal v = x(prec);
    CFExpansion cf;
    cf.source = source;
    cf.quotients = common_quotients(v.lower_q(), v.upper_q(), 1u << 20);
    cf.rebuild_convergents();
    size_t N = 0;
    while (N < cf.q.size() && cf.q[N] <= M) ++N;
    if (N >= cf.q.size() || cf.quotients.size() < N + 1 + extra)
      throw AmbiguousAtPrecision("expansion too short for M");
    cf.quotients.resize(N + 1 + extra);
    cf.rebuild_convergents();
    cf.certified_upto = (long)cf.quotients.size() - 1;
    cf.precision_bits = prec;
    return cf;
  });
}

CFExpansion expand_rational(const mpq_class& r) {
  CFExpansion cf;
  cf.source = r.get_str();
  mpz_class a = r.get_num(), b = r.get_den();
  while (b != 0) {
    mpz_class qt, rm;
    mpz_fdiv_qr(qt.get_mpz_t(), rm.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    cf.quotients.push_back(qt);
    a = b;
    b = rm;
  }
  cf.certified_upto = (long)cf.quotients.size() - 1;
  cf.rebuild_convergents();
  return cf;
}

LegendreResult legendre_bound(const CFExpansion& cf, const mpz_class& M) {
  LegendreResult r;
  for (size_t i = 0; i < cf.q.size() && (long)i <= cf.certified_upto; ++i) {
    if (r.argmax < 0 || cf.quotients[i] > r.aM) {
      r.aM = cf.quotients[i];
      r.argmax = (long)i;
    }
    if (cf.q[i] > M) {
      r.N = (long)i;
      r.qN = cf.q[i];
      return r;
    }
  }
  throw InsufficientExpansion("no certified convergent denominator exceeds M in " + cf.source);
}

CFExpansion sqrt_cf(const mpz_class& d) {
  if (d < 2) throw DomainError("sqrt_cf needs d >= 2");
  if (mpz_perfect_square_p(d.get_mpz_t())) throw SquareArgument("d is a perfect square: " + d.get_str());
  CFExpansion cf;
  cf.source = "sqrt(" + d.get_str() + ")";
  mpz_class a0;
  mpz_sqrt(a0.get_mpz_t(), d.get_mpz_t());
  mpz_class P = 0, Q = 1, a = a0;
  cf.quotients.push_back(a0);
  do {
    P = a * Q - P;
    Q = (d - P * P) / Q;
    a = (a0 + P) / Q;
    cf.quotients.push_back(a);
  } while (a != 2 * a0);
  cf.period = (long)cf.quotients.size() - 1;
  cf.certified_upto = (long)cf.quotients.size() - 1;
  cf.rebuild_convergents();
  return cf;
}

}  // namespace pellpad
