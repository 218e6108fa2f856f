#include "pellpad/pell.hpp"

#include <algorithm>

#include "pellpad/contfrac.hpp"

namespace pellpad {

EqKind EqKind::parse(const std::string& s) {
  if (s == "unit-plus") return {Family::unit, 1};
  if (s == "unit-minus") return {Family::unit, -1};
  if (s == "quad-plus") return {Family::quad, 1};
  if (s == "quad-minus") return {Family::quad, -1};
  throw DomainError("unknown equation kind '" + s + "'");
}

std::string EqKind::name() const {
  return std::string(family == Family::unit ? "unit" : "quad") + (sign > 0 ? "-plus" : "-minus");
}

const char* to_string(Family f) { return f == Family::unit ? "unit" : "quad"; }

BigReal UnitValue::delta(long prec) const {
  mpz_class disc = x1 * x1 - (family == Family::unit ? eps : 4 * eps);
  BigReal r = BigReal::from_mpz(x1, prec) + sqrt(BigReal::from_mpz(disc, prec));
  return family == Family::unit ? r : r / 2;
}

BigReal UnitValue::log_delta(long prec) const { return log(delta(prec)); }

std::string UnitValue::describe() const {
  mpz_class disc = x1 * x1 - (family == Family::unit ? eps : 4 * eps);
  std::string s = x1.get_str() + "+sqrt(" + disc.get_str() + ")";
  return family == Family::unit ? s : "(" + s + ")/2";
}

PellFundamental fundamental(const mpz_class& d, Family family) {
  if (d < 2) throw DomainError("d must be >= 2");
  if (mpz_perfect_square_p(d.get_mpz_t())) throw SquareArgument("d is a perfect square: " + d.get_str());
  PellFundamental f;
  f.d = d;
  f.family = family;
  if (family == Family::unit) {
    CFExpansion cf = sqrt_cf(d);
    long l = cf.period;
    f.x1 = cf.p[l - 1];
    f.y1 = cf.q[l - 1];
    f.eps = (l % 2 == 0) ? 1 : -1;
    return f;
  }
  // X^2 - d Y^2 = +-4.
  if (mpz_divisible_ui_p(d.get_mpz_t(), 4)) {
    PellFundamental g = fundamental(d / 4, Family::unit);
    f.x1 = 2 * g.x1;
    f.y1 = g.y1;
    f.eps = g.eps;
    return f;
  }
  PellFundamental g = fundamental(d, Family::unit);
  f.x1 = 2 * g.x1;
  f.y1 = 2 * g.y1;
  f.eps = g.eps;
  if (mpz_fdiv_ui(d.get_mpz_t(), 8) == 5) {
    // An odd solution rho, if any, has rho^3 = delta: X^3 - 3 eps X = 2 x1.
    mpz_class target = 2 * g.x1, X;
    mpz_root(X.get_mpz_t(), target.get_mpz_t(), 3);
    for (mpz_class c = X - 1; c <= X + 1; ++c) {
      if (c < 1 || c * c * c - 3 * g.eps * c != target) continue;
      mpz_class r = c * c - 4 * g.eps;
      if (r <= 0 || !mpz_divisible_p(r.get_mpz_t(), d.get_mpz_t())) continue;
      mpz_class y2 = r / d;
      if (!mpz_perfect_square_p(y2.get_mpz_t())) continue;
      mpz_sqrt(f.y1.get_mpz_t(), y2.get_mpz_t());
      f.x1 = c;
      break;
    }
  }
  return f;
}

namespace {

// Sequence u_{k+1} = c u_k - eps u_{k-1}.
mpz_class walk(const mpz_class& u0, const mpz_class& u1, const mpz_class& c, int eps, long k) {
  if (k == 0) return u0;
  mpz_class a = u0, b = u1;
  for (long i = 1; i < k; ++i) {
    mpz_class n = c * b - eps * a;
    a = std::move(b);
    b = std::move(n);
  }
  return b;
}

}  // namespace

mpz_class solution_x(const PellFundamental& f, long k) {
  if (k < 0) throw DomainError("k must be >= 0");
  if (f.family == Family::unit) return walk(1, f.x1, 2 * f.x1, f.eps, k);
  return walk(2, f.x1, f.x1, f.eps, k);
}

mpz_class solution_y(const PellFundamental& f, long k) {
  if (k < 0) throw DomainError("k must be >= 0");
  mpz_class c = f.family == Family::unit ? mpz_class(2 * f.x1) : f.x1;
  return walk(0, f.y1, c, f.eps, k);
}

std::vector<StatedSolution> stated_equation_solutions(const PellFundamental& f, int sign, long k_max) {
  if (sign < 0 && f.eps > 0)
    throw SignUnsolvable("negative equation unsolvable for d=" + f.d.get_str());
  std::vector<StatedSolution> out;
  mpz_class c = f.family == Family::unit ? mpz_class(2 * f.x1) : f.x1;
  mpz_class a = f.family == Family::unit ? 1 : 2, b = f.x1;
  long ord = 0;
  for (long k = 1; k <= k_max; ++k) {
    int norm = (f.eps < 0 && k % 2 == 1) ? -1 : 1;
    if (norm == sign) out.push_back({++ord, k, b});
    mpz_class n = c * b - f.eps * a;
    a = std::move(b);
    b = std::move(n);
  }
  return out;
}

mpz_class lucas_v(const mpz_class& P, int Q, long k) {
  if (k < 0) throw DomainError("negative Lucas index");
  if (k == 0) return 2;
  // Ladder on (V_j, V_{j+1}); Q^j is +-1.
  mpz_class v0 = 2, v1 = P;
  int qj = 1;
  int top = 63 - __builtin_clzll((unsigned long long)k);
  for (int bit = top; bit >= 0; --bit) {
    if ((k >> bit) & 1) {
      // (V_{2j+1}, V_{2j+2})
      v0 = v0 * v1 - P * qj;
      v1 = v1 * v1 - 2 * qj * Q;
      qj = qj * qj * Q;
    } else {
      // (V_{2j}, V_{2j+1})
      v1 = v0 * v1 - P * qj;
      v0 = v0 * v0 - 2 * qj;
      qj = qj * qj;
    }
  }
  return v0;
}

uint64_t lucas_v_mod(uint64_t P, int Q, long k, uint64_t mod) {
  using u128 = unsigned __int128;
  P %= mod;
  auto mul = [mod](uint64_t a, uint64_t b) { return (uint64_t)((u128)a * b % mod); };
  auto sub = [mod](uint64_t a, uint64_t b) { return a >= b ? a - b : a + mod - b; };
  uint64_t two = 2 % mod;
  if (k == 0) return two;
  uint64_t v0 = two, v1 = P;
  int qj = 1;
  auto signed_mod = [mod](int s, uint64_t x) { return s > 0 ? x % mod : (mod - x % mod) % mod; };
  int top = 63 - __builtin_clzll((unsigned long long)k);
  for (int bit = top; bit >= 0; --bit) {
    if ((k >> bit) & 1) {
      v0 = sub(mul(v0, v1), signed_mod(qj, P));
      v1 = sub(mul(v1, v1), signed_mod(qj * Q, two));
      qj = Q;
    } else {
      v1 = sub(mul(v0, v1), signed_mod(qj, P));
      v0 = sub(mul(v0, v0), signed_mod(qj, two));
      qj = 1;
    }
  }
  return v0;
}

long q_domain_min(Family family, int sign) {
  if (family == Family::unit) return sign > 0 ? 2 : 1;
  return sign > 0 ? 3 : 1;
}

mpz_class q_closed_form(const mpz_class& x1, Family family, int sign, long k) {
  if (x1 < q_domain_min(family, sign))
    throw DomainError("unit <= 1 for x1=" + x1.get_str());
  if (family == Family::unit) return lucas_v(2 * x1, sign, k) / 2;
  return lucas_v(x1, sign, k);
}

std::optional<mpz_class> invert_q(const mpz_class& target, Family family, int sign, long k) {
  if (k < 1 || target < 1) return std::nullopt;
  mpz_class lo = q_domain_min(family, sign), hi;
  if (family == Family::unit) {
    mpz_class t = 2 * target + 1;
    mpz_root(hi.get_mpz_t(), t.get_mpz_t(), k);
    hi += 1;
  } else {
    mpz_class t = target + 1;
    mpz_root(hi.get_mpz_t(), t.get_mpz_t(), k);
    hi = 2 * hi + 2;
  }
  while (lo <= hi) {
    mpz_class mid = (lo + hi) / 2;
    int c = cmp(q_closed_form(mid, family, sign, k), target);
    if (c == 0) return mid;
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return std::nullopt;
}

namespace {

bool pollard_brent(const mpz_class& n, mpz_class& out, unsigned long c, long max_iter) {
  mpz_class y = 2, x, g = 1, q = 1, ys;
  long r = 1, m = 128, iters = 0;
  auto f = [&](mpz_class& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  do {
    x = y;
    for (long i = 0; i < r; ++i) f(y);
    long k = 0;
    do {
      ys = y;
      for (long i = 0; i < std::min(m, r - k); ++i) {
        f(y);
        mpz_class diff = abs(x - y);
        q = q * diff % n;
      }
      g = gcd(q, n);
      k += m;
      iters += m;
    } while (k < r && g == 1);
    r *= 2;
  } while (g == 1 && iters < max_iter);
  if (g == n) {
    do {
      f(ys);
      g = gcd(mpz_class(abs(x - ys)), n);
    } while (g == 1);
  }
  if (g == 1 || g == n) return false;
  out = g;
  return true;
}

void split(const mpz_class& n, std::vector<mpz_class>& primes, int depth) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
    primes.push_back(n);
    return;
  }
  if (depth > 64) throw FactoringTimeout("factor recursion too deep at " + mpz_sci(n, 6));
  for (unsigned long c = 1; c <= 8; ++c) {
    mpz_class g;
    if (pollard_brent(n, g, c, 1L << 22)) {
      split(g, primes, depth + 1);
      split(n / g, primes, depth + 1);
      return;
    }
  }
  throw FactoringTimeout("could not split composite cofactor with " +
                         std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) + " digits");
}

}  // namespace

std::vector<std::pair<mpz_class, unsigned>> factor(const mpz_class& n0) {
  if (n0 < 1) throw DomainError("factor needs n >= 1");
  std::vector<mpz_class> primes;
  mpz_class n = n0;
  for (unsigned long p = 2; p < (1u << 20); p += (p == 2 ? 1 : 2)) {
    if ((mpz_class)p * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      primes.emplace_back(p);
      n /= p;
    }
  }
  split(n, primes, 0);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<mpz_class, unsigned>> out;
  for (auto& p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

std::vector<DPair> recover_d(const mpz_class& x1, Family family, int sign) {
  mpz_class N = x1 * x1 - (family == Family::unit ? sign : 4 * sign);
  std::vector<DPair> out;
  if (N <= 0) return out;
  auto fac = factor(N);
  std::vector<mpz_class> ys{1};
  for (auto& [p, e] : fac) {
    size_t base = ys.size();
    mpz_class pk = 1;
    for (unsigned j = 1; j <= e / 2; ++j) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) ys.push_back(ys[i] * pk);
    }
  }
  std::sort(ys.begin(), ys.end());
  for (auto& y : ys) {
    mpz_class d = N / (y * y);
    if (d < 2 || mpz_perfect_square_p(d.get_mpz_t())) continue;
    out.push_back({d, y});
  }
  return out;
}

}  // namespace pellpad
