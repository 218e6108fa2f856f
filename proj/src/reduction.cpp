#include "pellpad/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace pellpad {

namespace {

BigReal center(const BigReal& x) {
  mpfr_t zero;
  mpfr_init2(zero, 64);
  mpfr_set_zero(zero, 1);
  BigReal r = BigReal::from_mid_rad(x.mid(), zero, x.prec());
  mpfr_clear(zero);
  return r;
}

long bits_of(const mpz_class& z) { return (long)mpz_sizeinbase(z.get_mpz_t(), 2); }

// Complex ball as a pair of real balls.
struct CBall {
  BigReal re, im;
};

CBall operator-(const CBall& a, const CBall& b) { return {a.re - b.re, a.im - b.im}; }
CBall operator*(const CBall& a, const CBall& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
BigReal norm2(const CBall& a) { return a.re * a.re + a.im * a.im; }
CBall operator/(const CBall& a, const CBall& b) {
  BigReal n = norm2(b);
  if (!n.certainly_positive()) throw AmbiguousAtPrecision("complex division by a ball containing 0");
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
BigReal cabs(const CBall& a) { return sqrt(abs(norm2(a))); }
// Upper bound for |a| that tolerates balls around 0.
mpq_class cabs_upper(const CBall& a) { return abs(a.re).upper_q() + abs(a.im).upper_q(); }

CBall horner(const std::vector<mpz_class>& c, const CBall& z, long prec) {
  CBall acc{BigReal::from_mpz(c[0], prec), BigReal::from_int(0, prec)};
  for (size_t i = 1; i < c.size(); ++i) {
    acc = acc * z;
    acc.re = acc.re + BigReal::from_mpz(c[i], prec);
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------- heights

BigReal height_rational(const mpz_class& p, const mpz_class& q, long prec) {
  if (q <= 0) throw DomainError("height_rational needs q > 0");
  if (gcd(p, q) != 1 && p != 0) throw DomainError("height_rational needs gcd(p, q) = 1");
  mpz_class m = std::max(mpz_class(abs(p)), q);
  return log(BigReal::from_mpz(m, prec));
}

BigReal height_algebraic(const std::vector<mpz_class>& c, const PrecisionPolicy& pol) {
  if (c.size() < 2) throw DomainError("minimal polynomial must have degree >= 1");
  if (c[0] <= 0) throw DomainError("leading coefficient must be positive");
  const int D = (int)c.size() - 1;
  if (D == 1) {
    mpz_class g = gcd(c[0], c[1]);
    return height_rational(-c[1] / g, c[0] / g, pol.start_bits);
  }
  PrecisionPolicy p = pol;
  p.max_bits = std::min<long>(p.max_bits, 1L << 14);
  try {
    return with_precision(p, [&](long prec) {
      std::vector<CBall> z;
      CBall seed{BigReal::from_decimal("0.4", prec), BigReal::from_decimal("0.9", prec)};
      CBall w{BigReal::from_int(1, prec), BigReal::from_int(0, prec)};
      for (int i = 0; i < D; ++i) {
        z.push_back(w);
        w = w * seed;
        w = {center(w.re), center(w.im)};
      }
      const BigReal a0 = BigReal::from_mpz(c[0], prec);
      const double tol = std::ldexp(1.0, -(int)(prec - 16));
      bool converged = false;
      for (int it = 0; it < 50 * prec && !converged; ++it) {
        double worst = 0;
        for (int i = 0; i < D; ++i) {
          CBall den{a0, BigReal::from_int(0, prec)};
          for (int j = 0; j < D; ++j)
            if (j != i) den = den * (z[i] - z[j]);
          CBall corr = horner(c, z[i], prec) / den;
          z[i] = z[i] - corr;
          z[i] = {center(z[i].re), center(z[i].im)};
          double m = cabs_upper(corr).get_d() / std::max(1.0, cabs_upper(z[i]).get_d());
          worst = std::max(worst, m);
        }
        converged = worst < tol;
      }
      if (!converged) throw AmbiguousAtPrecision("Durand-Kerner did not settle");
      // Each root lies in the disc |x - z_i| <= D |W_i|; disjoint discs hold one root each.
      std::vector<BigReal> R;
      for (int i = 0; i < D; ++i) {
        CBall den{a0, BigReal::from_int(0, prec)};
        for (int j = 0; j < D; ++j)
          if (j != i) den = den * (z[i] - z[j]);
        CBall W = horner(c, z[i], prec) / den;
        R.push_back(BigReal::from_mpq(cabs_upper(W) * D, prec));
      }
      for (int i = 0; i < D; ++i)
        for (int j = i + 1; j < D; ++j)
          if (certified_compare(R[i] + R[j], cabs(z[i] - z[j])) != Ordering::less)
            throw AmbiguousAtPrecision("root discs overlap");
      BigReal sum = log(a0);
      for (int i = 0; i < D; ++i) {
        BigReal m = cabs(z[i]);
        mpq_class lo = (m - R[i]).lower_q(), hi = (m + R[i]).upper_q();
        if (lo < 1) lo = 1;
        if (hi < 1) hi = 1;
        BigReal lmax = BigReal::hull(BigReal::from_mpq(lo, prec), BigReal::from_mpq(hi, prec));
        sum = sum + log(lmax);
      }
      return sum / (long)D;
    });
  } catch (const PrecisionExhausted& e) {
    throw RootIsolationFailure(std::string("conjugates not isolated: ") + e.what());
  }
}

HeightedNumber heighted(const QAlpha& x, const std::string& description, const PrecisionPolicy& pol) {
  HeightedNumber h;
  h.description = description;
  h.minimal_polynomial = minimal_polynomial(x);
  h.degree = (int)h.minimal_polynomial.size() - 1;
  h.height = height_algebraic(h.minimal_polynomial, pol);
  return h;
}

// ---------------------------------------------------------------- Matveev

BigReal matveev_constant(int t, long D, const std::vector<BigReal>& A, long prec) {
  if (t < 1 || (int)A.size() != t) throw DomainError("matveev: need t values A_i");
  BigReal c = BigReal::from_mpq(mpq_class(7, 5), prec);
  mpz_class p30;
  mpz_ui_pow_ui(p30.get_mpz_t(), 30, t + 3);
  c = c * p30;
  c = c * (long)(t * t * t * t) * sqrt(BigReal::from_int(t, prec));
  c = c * (D * D);
  c = c * (log(BigReal::from_int(D, prec)) + 1);
  for (const auto& a : A) {
    if (certified_compare(a, BigReal::from_decimal("0.16", prec)) == Ordering::less)
      throw DomainError("matveev: A_i below 0.16");
    c = c * a;
  }
  return c;
}

BigReal matveev_bound(const LinearFormData& data) {
  long prec = data.B.prec();
  return matveev_constant(data.t, data.D, data.A, prec) * (log(data.B) + 1);
}

const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::legendre: return "legendre";
    case ReductionKind::bd: return "bd";
    case ReductionKind::lll: return "lll";
    case ReductionKind::matveev: return "matveev";
    case ReductionKind::gl: return "gl";
  }
  return "?";
}

// ---------------------------------------------------------------- Baker-Davenport

namespace {

// ||x||, failing when the nearest integer is not determined.
BigReal dist_to_int(const BigReal& x) {
  mpz_class n = certified_round(x);
  BigReal r = x - BigReal::from_mpz(n, x.prec());
  return abs(r);
}

}  // namespace

ReductionOutcome BDOutcome::outcome(const BDInstance& inst) const {
  ReductionOutcome o;
  o.kind = ReductionKind::bd;
  o.label = inst.label;
  o.inputs = {{"M", inst.M.get_str()},
              {"A", inst.A(128).sci(6)},
              {"B", inst.B(128).sci(6)},
              {"tau", inst.tau(128).sci(12)},
              {"mu", inst.mu(128).sci(12)}};
  o.success = success;
  if (success) {
    o.bound = bound;
    o.real_bound = eps;
    o.note = "s=" + std::to_string(index) + " q=" + mpz_sci(q, 6) + " eps=" + eps.sci(4);
  } else {
    o.note = failure;
  }
  return o;
}

BDOutcome bd_reduce(const BDInstance& inst, const CFExpansion& cf, int max_tries,
                    const PrecisionPolicy& pol) {
  BDOutcome out;
  mpz_class six_m = 6 * inst.M;
  long s = 0;
  while (s < (long)cf.q.size() && cf.q[s] <= six_m) ++s;
  for (; out.attempts < max_tries; ++s) {
    if (s >= (long)cf.q.size() || s > cf.certified_upto)
      throw InsufficientExpansion("bd_reduce: expansion of " + cf.source + " ends before q > 6M");
    ++out.attempts;
    const mpz_class& q = cf.q[s];
    long start = std::max(pol.start_bits, 2 * bits_of(q) + bits_of(inst.M) + 128);
    bool positive = false;
    BigReal eps;
    for (long prec = start; prec <= 16 * start; prec *= 2) {
      try {
        BigReal tq = inst.tau(prec) * q, mq = inst.mu(prec) * q;
        eps = dist_to_int(mq) - dist_to_int(tq) * inst.M;
      } catch (const AmbiguousAtPrecision&) {
        continue;
      }
      if (eps.certainly_positive()) {
        positive = true;
        BigReal w = log(inst.A(prec) * q / eps) / log(inst.B(prec));
        out.bound = floor_upper(w);
        break;
      }
      if (eps.certainly_negative()) break;
    }
    if (positive) {
      out.success = true;
      out.index = s;
      out.q = q;
      out.eps = eps;
      return out;
    }
  }
  out.failure = "epsilon not positive at " + std::to_string(max_tries) + " convergents";
  return out;
}

// ---------------------------------------------------------------- LLL

std::vector<mpq_class> LLLReduced::gs_norms() const {
  std::vector<mpq_class> out;
  for (size_t i = 1; i < d.size(); ++i) {
    mpq_class v(d[i], d[i - 1]);
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

namespace {

mpz_class dot(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  mpz_class s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

mpz_class divexact(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

// Integral LLL (Cohen, Algorithm 2.6.7); all quantities are exact integers.
LLLReduced lll_reduce(IntMatrix rows, const mpq_class& delta) {
  const int n = (int)rows.size();
  LLLReduced out;
  if (n == 0) {
    out.d = {1};
    return out;
  }
  const mpz_class dp = delta.get_num(), dq = delta.get_den();
  // 1-based indices to follow the textbook recurrences.
  std::vector<std::vector<mpz_class>> b(n + 1);
  for (int i = 1; i <= n; ++i) b[i] = std::move(rows[i - 1]);
  std::vector<mpz_class> d(n + 1);
  std::vector<std::vector<mpz_class>> lam(n + 1, std::vector<mpz_class>(n + 1));
  d[0] = 1;
  d[1] = dot(b[1], b[1]);
  if (d[1] == 0) throw DomainError("lll: zero row");

  auto red = [&](int k, int l) {
    mpz_class twice = 2 * lam[k][l];
    if (cmp(abs(twice), d[l]) <= 0) return;
    mpz_class q;
    mpz_class num = twice + d[l], den = 2 * d[l];
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    for (size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[l][c];
    lam[k][l] -= q * d[l];
    for (int i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };

  int k = 2, kmax = 1;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (int j = 1; j <= k; ++j) {
        mpz_class u = dot(b[k], b[j]);
        for (int i = 1; i < j; ++i) u = divexact(d[i] * u - lam[k][i] * lam[j][i], d[i - 1]);
        if (j < k)
          lam[k][j] = u;
        else {
          if (u == 0) throw DomainError("lll: rows are linearly dependent");
          d[k] = u;
        }
      }
    }
    red(k, k - 1);
    mpz_class& l = lam[k][k - 1];
    if (dq * (d[k] * d[k - 2] + l * l) < dp * d[k - 1] * d[k - 1]) {
      std::swap(b[k], b[k - 1]);
      for (int j = 1; j <= k - 2; ++j) std::swap(lam[k][j], lam[k - 1][j]);
      mpz_class lm = lam[k][k - 1];
      mpz_class B = divexact(d[k - 2] * d[k] + lm * lm, d[k - 1]);
      for (int i = k + 1; i <= kmax; ++i) {
        mpz_class t = lam[i][k];
        lam[i][k] = divexact(d[k] * lam[i][k - 1] - lm * t, d[k - 1]);
        lam[i][k - 1] = divexact(B * t + lm * lam[i][k], d[k]);
      }
      d[k - 1] = B;
      k = std::max(2, k - 1);
    } else {
      for (int j = k - 2; j >= 1; --j) red(k, j);
      ++k;
    }
  }
  for (int i = 1; i <= n; ++i) out.basis.push_back(std::move(b[i]));
  out.d = std::move(d);
  return out;
}

IntMatrix lll_reduce_basis(const IntMatrix& rows) { return lll_reduce(rows).basis; }

ReductionOutcome LLLOutcome::outcome(const LLLInstance& inst) const {
  ReductionOutcome o;
  o.kind = ReductionKind::lll;
  o.label = inst.label;
  o.inputs.emplace_back("t", std::to_string(inst.tau.size()));
  o.inputs.emplace_back("C", mpz_sci(inst.C, 6));
  for (size_t i = 0; i < inst.X.size(); ++i)
    o.inputs.emplace_back("X" + std::to_string(i + 1), mpz_sci(inst.X[i], 6));
  o.real_bound = bound;
  o.success = bound.certainly_positive();
  return o;
}

LLLOutcome lll_lower_bound(const LLLInstance& inst, const PrecisionPolicy& pol) {
  const size_t t = inst.tau.size();
  if (t == 0 || inst.X.size() != t) throw DomainError("lll: need t values tau_i and X_i");
  mpz_class xmax = *std::max_element(inst.X.begin(), inst.X.end());
  mpz_class tx;
  mpz_class base = xmax * (long)t;
  mpz_pow_ui(tx.get_mpz_t(), base.get_mpz_t(), t);
  if (inst.C <= tx) throw DomainError("lll: C must exceed (tX)^t");

  PrecisionPolicy p = pol;
  p.start_bits = std::max(p.start_bits, bits_of(inst.C) + 128);
  if (p.max_bits < p.start_bits) p.max_bits = 8 * p.start_bits;
  std::vector<mpz_class> rounded = with_precision(p, [&](long prec) {
    std::vector<mpz_class> r;
    for (const auto& f : inst.tau) r.push_back(certified_round(f(prec) * inst.C));
    return r;
  });
  IntMatrix rows(t, std::vector<mpz_class>(t));
  for (size_t j = 0; j + 1 < t; ++j) rows[j][j] = 1;
  for (size_t j = 0; j < t; ++j) rows[j][t - 1] = rounded[j];
  if (rounded[t - 1] == 0) throw ThetaTooSmall("lll: round(C tau_t) = 0; enlarge C");

  LLLReduced red = lll_reduce(rows);
  auto norms = red.gs_norms();
  LLLOutcome out;
  out.theta2 = *std::min_element(norms.begin(), norms.end());
  out.Q = 0;
  mpz_class sx = 1;
  for (size_t i = 0; i < t; ++i) {
    if (i + 1 < t) out.Q += inst.X[i] * inst.X[i];
    sx += inst.X[i];
  }
  out.R = mpq_class(sx, 2);
  out.R.canonicalize();
  if (out.theta2 < out.Q + out.R * out.R)
    throw ThetaTooSmall("lll: theta^2 < Q + R^2 for " + inst.label);
  long prec = 2 * bits_of(inst.C) + 128;
  out.bound = (sqrt(BigReal::from_mpq(out.theta2 - out.Q, prec)) - BigReal::from_mpq(out.R, prec)) /
              BigReal::from_mpz(inst.C, prec);
  return out;
}

// ---------------------------------------------------------------- forms over Q(alpha)

BigReal log_of(const QAlpha& eta, long prec) {
  const auto k = constants(prec);
  BigReal v = BigReal::from_mpq(eta[0], prec) + BigReal::from_mpq(eta[1], prec) * k.alpha +
              BigReal::from_mpq(eta[2], prec) * k.alpha * k.alpha;
  if (!v.certainly_positive()) throw AmbiguousAtPrecision("log_of: value not certainly positive");
  return log(v);
}

ReducedForm reduce_form(std::vector<LogTerm> terms, int base) {
  ReducedForm rf;
  rf.terms = std::move(terms);
  rf.base = base;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = (int)rf.terms.size() - 1; i >= 0 && !changed; --i) {
      if (i == rf.base) continue;
      std::vector<int> others;
      for (int j = 0; j < (int)rf.terms.size(); ++j)
        if (j != i && j != rf.base) others.push_back(j);
      int combos = 1;
      for (size_t j = 0; j < others.size(); ++j) combos *= 3;
      for (int code = 0; code < combos && !changed; ++code) {
        std::vector<int> s(others.size());
        QAlpha prod = rf.terms[i].eta;
        for (size_t j = 0, c = code; j < others.size(); ++j, c /= 3) {
          s[j] = (int)(c % 3) - 1;
          if (s[j] != 0) prod = prod * pow(rf.terms[others[j]].eta, -s[j]);
        }
        auto e = alpha_exponent(prod);
        if (!e || (*e != 0 && rf.base < 0)) continue;
        // x_i log eta_i = x_i e log alpha + sum_j x_i s_j log eta_j
        std::string rel = rf.terms[i].label + " = alpha^" + std::to_string(*e);
        for (size_t j = 0; j < others.size(); ++j) {
          if (s[j] == 0) continue;
          rf.terms[others[j]].X += rf.terms[i].X;
          rel += " * " + rf.terms[others[j]].label + (s[j] > 0 ? "" : "^-1");
        }
        if (*e != 0) rf.terms[rf.base].X += std::abs(*e) * rf.terms[i].X;
        rf.relations.push_back(rel);
        rf.terms.erase(rf.terms.begin() + i);
        if (rf.base > i) --rf.base;
        changed = true;
      }
    }
  }
  return rf;
}

FormBound form_lower_bound(const std::vector<LogTerm>& terms, int base,
                           const std::function<mpz_class(int, const mpz_class&)>& c_for_t,
                           const PrecisionPolicy& pol) {
  FormBound fb;
  fb.form = reduce_form(terms, base);
  const auto& T = fb.form.terms;
  const int t = (int)T.size();
  if (t == 0) throw DomainError("form vanishes identically");
  auto value = [&](int i) {
    if (T[i].value) return T[i].value;
    return RealFn([eta = T[i].eta](long prec) { return log_of(eta, prec); });
  };
  long prec = pol.start_bits;
  if (t == 1) {
    fb.method = "trivial";
    fb.bound = abs(value(0)(prec));
    return fb;
  }
  if (t == 2) {
    // x0 log eta0 + x1 log eta1 = log eta1 * (x0 tau + x1), tau = log eta0 / log eta1.
    int i1 = fb.form.base >= 0 ? fb.form.base : 1;
    int i0 = 1 - i1;
    RealFn f0 = value(i0), f1 = value(i1);
    RealFn tau = [f0, f1](long p) { return f0(p) / f1(p); };
    mpz_class M = T[i0].X + 1;
    CFExpansion cf = expand_until_q(tau, M, T[i0].label + "/" + T[i1].label, 0, pol);
    LegendreResult lr = legendre_bound(cf, M);
    BigReal l1 = abs(f1(prec));
    BigReal leg = l1 / BigReal::from_mpz((lr.aM + 2) * T[i0].X, prec);
    fb.method = "legendre";
    fb.bound = certified_compare(leg, l1) == Ordering::less ? leg : l1;
    return fb;
  }
  LLLInstance inst;
  mpz_class xmax = 0;
  for (const auto& term : T) {
    inst.tau.push_back(value(&term - T.data()));
    inst.X.push_back(term.X);
    xmax = std::max(xmax, term.X);
  }
  inst.C = c_for_t(t, xmax);
  fb.method = "lll";
  fb.bound = lll_lower_bound(inst, pol).bound;
  return fb;
}

// ---------------------------------------------------------------- resolvers

BigReal gl_resolve(int r, const BigReal& H) {
  if (r < 1) throw HypothesisViolated("gl: r must be >= 1");
  long prec = std::max(H.prec(), 128L);
  BigReal floor_h = pow(BigReal::from_int(4L * r * r, prec), r);
  if (certified_compare(H, floor_h) != Ordering::greater)
    throw HypothesisViolated("gl: H must exceed (4r^2)^r");
  mpz_class two_r;
  mpz_ui_pow_ui(two_r.get_mpz_t(), 2, r);
  return H * two_r * pow(log(H), r);
}

FixedPoint resolve_log_quadratic(const BigReal& a0, const BigReal& a1, const BigReal& a2,
                                 const mpz_class& start) {
  long prec = std::max({a0.prec(), a1.prec(), a2.prec(), 2 * bits_of(start) + 64});
  auto F = [&](const mpz_class& x) {
    BigReal l = log(BigReal::from_mpz(x, prec)) + 1;
    return a0 + a1 * l + a2 * l * l;
  };
  FixedPoint fp;
  fp.x = start;
  for (; fp.iterations < 500; ++fp.iterations) {
    mpz_class nx = floor_upper(F(fp.x)) + 1;
    if (nx >= fp.x) break;
    fp.x = nx;
  }
  BigReal X = BigReal::from_mpz(fp.x, prec);
  if (certified_compare(F(fp.x), X) != Ordering::less)
    throw HypothesisViolated("fixed point: F(x) <= x not certified at x = " + mpz_sci(fp.x, 6));
  BigReal dF = (a1 + a2 * (log(X) + 1) * 2) / X;
  if (certified_compare(dF, BigReal::from_int(1, prec)) != Ordering::less)
    throw HypothesisViolated("fixed point: F'(x) < 1 not certified");
  return fp;
}

}  // namespace pellpad
