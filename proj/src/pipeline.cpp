#include "pellpad/pipeline.hpp"

#include <algorithm>
#include <set>

#include "pellpad/contfrac.hpp"

namespace pellpad {

const char* to_string(Convention c) { return c == Convention::published ? "published" : "certified"; }

Convention parse_convention(const std::string& s) {
  if (s == "published") return Convention::published;
  if (s == "certified") return Convention::certified;
  throw DomainError("unknown convention '" + s + "'");
}

namespace {

constexpr long kPrec = 320;
constexpr long kN0 = 36;  // n2 >= kN0 absorbs additive constants into log n2

BigReal num(long v, long p = kPrec) { return BigReal::from_int(v, p); }
BigReal num(const mpq_class& v, long p = kPrec) { return BigReal::from_mpq(v, p); }
BigReal num(const mpz_class& v, long p = kPrec) { return BigReal::from_mpz(v, p); }
mpz_class dec(const std::string& s) {
  mpq_class q = parse_decimal(s);
  return mpz_class(q.get_num() / q.get_den());
}

BigReal log_base(Convention c, long p) {
  return c == Convention::published ? log(num(mpq_class(133, 100), p)) : constants(p).log_alpha;
}

// Largest w with base^w < Y, from log Y.
mpz_class cutoff(const BigReal& logY, Convention c) { return floor_upper(logY / log_base(c, logY.prec())); }

FamilySetup make_setup(Family f) {
  FamilySetup s;
  s.family = f;
  if (f == Family::unit) {
    s.c = QAlpha(2) * QAlpha::binet_a();
    s.c_name = "2a";
    s.lam1 = mpq_class(3, 2);
    s.lam2 = mpq_class(5, 2);
    s.gam1 = 3;
    s.gam2 = 5;
    s.g3 = 10, s.g4 = 8, s.g5 = 6, s.bmul = 11;
    s.leg3 = 36, s.leg5 = 21;
    s.log_add = 6, s.k_shift = 3;
    s.smallest = {1, Family::unit, -1};  // 1 + sqrt 2
    s.printed = {"8.30e17", "9.84e14", "4.87e165", "1.76e63", "5.4e166",
                 {{2714, 6760, 12172, "3.36e44"}, {752, 1846, 3318, "5e42"}},
                 3125, 408, 133};
  } else {
    s.c = QAlpha::binet_a();
    s.c_name = "a";
    s.lam1 = mpq_class(5, 2);
    s.lam2 = 3;
    s.gam1 = 10;
    s.gam2 = 6;
    s.g3 = 12, s.g4 = 16, s.g5 = 20, s.bmul = 13;
    s.leg3 = 42, s.leg5 = 70;
    s.log_add = 5, s.k_shift = 1;
    s.smallest = {1, Family::quad, -1};  // (1 + sqrt 5)/2
    s.printed = {"7.40e17", "9.52e14", "3.07e162", "4.76e61", "3.99e163",
                 {{2661, 6643, 11948, "2.76e44"}, {738, 1838, 3304, "4e42"}},
                 3108, 414, 248};
  }
  return s;
}

// Matveev A_i = max(D h(eta), |log eta|, 0.16).
BigReal matveev_A(const QAlpha& eta, long D, const PrecisionPolicy& pol) {
  BigReal h = heighted(eta, "", pol).height * D;
  BigReal l = abs(log_of(eta, kPrec));
  BigReal m = max(h, l);
  return max(m, BigReal::from_decimal("0.16", kPrec));
}

std::string sci(const BigReal& x, int d = 6) { return x.sci(d); }

ReductionOutcome matveev_outcome(const std::string& label, int t, long D, const BigReal& coeff,
                                 const std::string& note) {
  ReductionOutcome o;
  o.kind = ReductionKind::matveev;
  o.label = label;
  o.inputs = {{"t", std::to_string(t)}, {"D", std::to_string(D)}};
  o.real_bound = coeff;
  o.success = true;
  o.note = note;
  return o;
}

ReductionOutcome gl_outcome(const std::string& label, int r, const BigReal& H, const mpz_class& b) {
  ReductionOutcome o;
  o.kind = ReductionKind::gl;
  o.label = label;
  o.inputs = {{"r", std::to_string(r)}, {"H", sci(H)}};
  o.bound = b;
  o.success = true;
  return o;
}

RealFn log_c_fn(Family f) {
  return [f](long p) {
    auto k = constants(p);
    return f == Family::unit ? k.log_2a : k.log_a;
  };
}

RealFn log_alpha_fn() {
  return [](long p) { return constants(p).log_alpha; };
}

// log(1 + alpha^-lambda)
RealFn log1p_alpha_fn(long lambda) {
  return [lambda](long p) {
    long q = p + (long)(0.41 * (double)lambda) + 64;
    auto k = constants(q);
    BigReal v = log(exp(-(k.log_alpha * lambda)) + 1);
    return v;
  };
}

QAlpha one_plus_alpha_pow(long lambda) { return QAlpha(1) + QAlpha::power_of_alpha(-lambda); }

}  // namespace

const FamilySetup& setup(Family f) {
  static const FamilySetup u = make_setup(Family::unit), q = make_setup(Family::quad);
  return f == Family::unit ? u : q;
}

// ---------------------------------------------------------------- absolute bounds

AbsoluteBounds absolute_bounds(Family f, const PrecisionPolicy& pol) {
  const FamilySetup& S = setup(f);
  const long p = kPrec;
  const auto K = constants(p);
  const BigReal la = K.log_alpha, log2 = log(num(2)), logN0 = log(num(kN0));
  const BigReal ld_min = S.smallest.log_delta(p);

  AbsoluteBounds ab;
  ab.cert.eq = {f, 1};
  ab.cert.stage = "absolute";
  ab.cert.convention = Convention::certified;

  // Degree-6 field Q(alpha, sqrt d): delta, c, alpha and 1 + alpha^-(n-m).
  BigReal A_c6 = matveev_A(S.c, 6, pol), A_a6 = matveev_A(QAlpha::alpha(), 6, pol);
  BigReal A4 = la * 2 + log2 * 6;  // per unit of (n - m)
  BigReal m4 = matveev_constant(4, 6, {num(3), A_c6, A_a6, A4}, p);
  BigReal m3 = matveev_constant(3, 6, {num(3), A_c6, A_a6}, p);
  // (1 + log n) <= 2 log n for n >= 3
  ab.matveev1 = m4 * 2;
  ab.matveev2 = m3 * 2;
  BigReal pi_min = log(num(4)) * ld_min;
  ab.good1 = (ab.matveev1 + log(num(S.lam1)) / pi_min) / la;
  ab.good2 = (ab.matveev2 + log(num(S.lam2)) / pi_min) / la;
  ab.g12 = ab.good1 * ab.good2;
  ab.cert.provenance.push_back(matveev_outcome("good1", 4, 6, ab.good1, "n < good1 (n-m) log n log delta"));
  ab.cert.provenance.push_back(matveev_outcome("good2", 3, 6, ab.good2, "n-m < good2 log n log delta"));

  // Degree-3 forms between two solutions.
  BigReal A1 = matveev_A(S.c, 3, pol);
  BigReal kappa = (log(num(S.bmul)) + 1) / logN0 + 1;  // 1 + log(bmul n2) <= kappa log n2
  BigReal mat2 = matveev_constant(2, 3, {A1, la}, p);
  ab.c3 = (mat2 * kappa + 1 + log(num(2 * S.g3)) / logN0) / la;
  BigReal u3 = ab.c3 * la + log2 * 3 / logN0;  // lambda log alpha + 3 log 2 <= u3 log n2

  BigReal mat3 = matveev_constant(3, 3, {A1, la, num(1)}, p);
  ab.c4 = (mat3 * kappa * u3 + (log(num(2 * S.g4)) / logN0 + 1) / logN0) / la;
  BigReal u4 = ab.c4 * la + log2 * 3 / (logN0 * logN0);

  BigReal mat4 = matveev_constant(4, 3, {A1, la, num(1), num(1)}, p);
  BigReal logN0_3 = logN0 * logN0 * logN0;
  ab.c5 = (mat4 * kappa * u3 * u4 + (log(num(2 * S.g5)) / logN0 + 1) / logN0_3) / la;
  ab.L4 = ab.c5 * la + log(num(S.log_add)) / (logN0_3 * logN0);
  ab.H = ab.g12 * ab.L4 * ab.L4;
  ab.cert.provenance.push_back(matveev_outcome("gamma3", 2, 3, ab.c3, "lambda < c3 log n2"));
  ab.cert.provenance.push_back(matveev_outcome("gamma4", 3, 3, ab.c4, "nu < c4 (log n2)^2"));
  ab.cert.provenance.push_back(matveev_outcome("gamma5", 4, 3, ab.c5, "n1 < c5 (log n2)^4"));

  ab.n2 = floor_upper(gl_resolve(10, ab.H));
  BigReal ln2 = log(num(ab.n2));
  ab.n1 = floor_upper(ab.c5 * ln2 * ln2 * ln2 * ln2);
  ab.k1 = floor_upper((log2 + num(mpz_class(ab.n1 + S.k_shift)) * la) / ld_min);
  ab.cert.provenance.push_back(gl_outcome("n2 absolute", 10, ab.H, ab.n2));

  ab.cert.symbols = {{"n2", ab.n2}, {"n1", ab.n1}, {"k1", ab.k1}};
  ab.cert.constants_used = {{"log_alpha", la.to_string(30)},
                            {"A_c(D=6)", A_c6.to_string(20)},
                            {"A_c(D=3)", A1.to_string(20)},
                            {"good1", sci(ab.good1)},
                            {"good2", sci(ab.good2)},
                            {"c3", sci(ab.c3)},
                            {"c4", sci(ab.c4)},
                            {"c5", sci(ab.c5)},
                            {"H", sci(ab.H)},
                            {"N0", std::to_string(kN0)}};
  ab.cert.notes.push_back("n2 >= 36 assumed in the degree-3 chain; smaller n2 lies inside every later box");
  return ab;
}

// ---------------------------------------------------------------- first reduction

mpz_class lambda_cutoff(Family f, const mpz_class& M, Convention conv, LegendreResult* leg,
                        const PrecisionPolicy& pol) {
  const FamilySetup& S = setup(f);
  RealFn lc = log_c_fn(f);
  RealFn tau = [lc](long p) { return abs(lc(p)) / constants(p).log_alpha; };
  CFExpansion cf = expand_until_q(tau, M, "tau", 0, pol);
  LegendreResult lr = legendre_bound(cf, M);
  if (leg) *leg = lr;
  long p = std::max(kPrec, 2 * (long)mpz_sizeinbase(M.get_mpz_t(), 2) + 64);
  BigReal factor = conv == Convention::published ? num(S.leg3, p) : num(S.g3, p) / constants(p).log_alpha;
  BigReal Y = factor * num(mpz_class(lr.aM + 2), p) * num(M, p) * num(M, p);
  return cutoff(log(Y), conv);
}

namespace {

// C = C_base^5 for three terms, C_base^9 for four; `extra` raises the
// exponent when a tiny log makes theta too small.
std::function<mpz_class(int, const mpz_class&)> c_for(const mpz_class& C_base, int extra = 0) {
  return [C_base, extra](int t, const mpz_class&) {
    mpz_class C;
    mpz_pow_ui(C.get_mpz_t(), C_base.get_mpz_t(), (t <= 3 ? 5 : 9) + extra);
    return C;
  };
}

FormBound bound_with_retry(const std::vector<LogTerm>& terms, const mpz_class& C_base,
                           const PrecisionPolicy& pol) {
  for (int extra = 0;; extra += 2) {
    try {
      return form_lower_bound(terms, 1, c_for(C_base, extra), pol);
    } catch (const ThetaTooSmall&) {
      if (extra >= 8) throw;
    }
  }
}

std::vector<LogTerm> base_terms(Family f, const std::vector<mpz_class>& X) {
  const FamilySetup& S = setup(f);
  return {{S.c_name, S.c, X[0], log_c_fn(f)}, {"alpha", QAlpha::alpha(), X[1], log_alpha_fn()}};
}

std::vector<long> sample_set(const std::vector<long>& wanted, long lo, long hi) {
  std::set<long> s;
  for (long v : wanted)
    if (v >= lo && v <= hi) s.insert(v);
  if (hi >= lo) s.insert(hi);
  return {s.begin(), s.end()};
}

}  // namespace

FormRecord gamma4_bound(Family f, long lambda, const std::vector<mpz_class>& X, const mpz_class& C_base,
                        const PrecisionPolicy& pol) {
  auto terms = base_terms(f, X);
  terms.push_back({"1+alpha^-" + std::to_string(lambda), one_plus_alpha_pow(lambda), X[2], log1p_alpha_fn(lambda)});
  FormBound fb = bound_with_retry(terms, C_base, pol);
  return {lambda, 0, fb.method, fb.bound};
}

FormRecord gamma5_bound(Family f, long lambda, long chi, const std::vector<mpz_class>& X,
                        const mpz_class& C_base, const PrecisionPolicy& pol) {
  auto terms = base_terms(f, X);
  terms.push_back({"1+alpha^-" + std::to_string(lambda), one_plus_alpha_pow(lambda), X[2], log1p_alpha_fn(lambda)});
  terms.push_back({"1+alpha^-" + std::to_string(chi), one_plus_alpha_pow(chi), X[3], log1p_alpha_fn(chi)});
  FormBound fb = bound_with_retry(terms, C_base, pol);
  return {lambda, chi, fb.method, fb.bound};
}

mpz_class nu_from_bound(Family f, const mpz_class& M, const BigReal& bound, Convention conv) {
  long p = std::max(kPrec, bound.prec());
  BigReal Y = num(setup(f).g4, p) * num(M, p) / bound;
  mpz_class nu = cutoff(log(Y), conv);
  // |Gamma_4| >= 1/2 leaves alpha^nu < 2 g4 n2.
  mpz_class small = cutoff(log(num(2 * setup(f).g4, p) * num(M, p)), conv);
  return std::max(nu, small);
}

CycleReport reduction_cycle(Family f, int cycle, const mpz_class& M, const AbsoluteBounds& ab,
                            const CycleOptions& opt, const PrecisionPolicy& pol) {
  const FamilySetup& S = setup(f);
  const auto& printed = S.printed.cycle[cycle - 1];
  const bool pub = opt.convention == Convention::published;
  CycleReport R;
  R.cycle = cycle;
  R.M = M;
  R.sampled = !opt.sweep.full;
  R.cert.eq = {f, 1};
  R.cert.stage = "cycle" + std::to_string(cycle);
  R.cert.convention = opt.convention;
  R.cert.sampled = R.sampled;

  // (a) Legendre on tau.
  R.lambda = lambda_cutoff(f, M, opt.convention, &R.legendre, pol);
  {
    ReductionOutcome o;
    o.kind = ReductionKind::legendre;
    o.label = "tau";
    o.inputs = {{"M", mpz_sci(M, 6)},
                {"N", std::to_string(R.legendre.N)},
                {"argmax", std::to_string(R.legendre.argmax)}};
    o.bound = R.lambda;
    o.real_bound = num(R.legendre.aM);
    o.success = true;
    o.note = "a(M)=" + R.legendre.aM.get_str();
    R.cert.provenance.push_back(o);
  }
  const long lam_max = R.lambda.get_si();

  // LLL boxes.
  mpz_class C_base;
  if (pub && cycle == 1) {
    mpz_class X = dec(S.printed.lll_X);
    R.X = {X, X, X, X};
    C_base = 20 * X;
  } else if (pub) {
    R.X = {M, M, M, M};
    C_base = 10 * M;
  } else {
    R.X = {M, S.bmul * M, M, M};
    C_base = 20 * S.bmul * M;
  }

  // (b) Gamma_4 over lambda.
  std::vector<long> lams;
  if (opt.sweep.full)
    for (long l = 1; l <= lam_max; ++l) lams.push_back(l);
  else
    lams = sample_set(opt.sweep.lambdas, 1, lam_max);
  bool have_min = false;
  for (long l : lams) {
    FormRecord r = gamma4_bound(f, l, {R.X[0], R.X[1], R.X[2]}, C_base, pol);
    R.gamma4.push_back(r);
    if (!have_min || certified_compare(r.bound, R.gamma4_min.bound) == Ordering::less) R.gamma4_min = r;
    have_min = true;
  }
  R.nu = nu_from_bound(f, M, R.gamma4_min.bound, opt.convention);
  {
    ReductionOutcome o;
    o.kind = ReductionKind::lll;
    o.label = "gamma4 min over lambda";
    o.inputs = {{"instances", std::to_string(R.gamma4.size())},
                {"argmin lambda", std::to_string(R.gamma4_min.lambda)},
                {"X", mpz_sci(R.X[1], 6)},
                {"C base", mpz_sci(C_base, 6)}};
    o.real_bound = R.gamma4_min.bound;
    o.bound = R.nu;
    o.success = true;
    o.note = R.sampled ? "sampled lambda values" : "all lambda values";
    R.cert.provenance.push_back(o);
  }
  const long nu = R.nu.get_si();

  // (c) Gamma_5, lambda < chi.
  have_min = false;
  for (long l : lams) {
    if (l >= nu) continue;
    std::vector<long> chis;
    if (opt.sweep.full) {
      for (long c = l + 1; c <= nu; ++c) chis.push_back(c);
    } else {
      std::vector<long> want;
      for (long d : opt.sweep.chis_after) want.push_back(l + d);
      chis = sample_set(want, l + 1, nu);
    }
    for (long c : chis) {
      FormRecord r = gamma5_bound(f, l, c, R.X, C_base, pol);
      ++R.gamma5_count;
      if (!have_min || certified_compare(r.bound, R.gamma5_min.bound) == Ordering::less) R.gamma5_min = r;
      have_min = true;
    }
  }
  long p5 = std::max(kPrec, R.gamma5_min.bound.prec());
  R.n1_lll = cutoff(log(num(S.g5, p5) * num(M, p5) / R.gamma5_min.bound), opt.convention);
  {
    ReductionOutcome o;
    o.kind = ReductionKind::lll;
    o.label = "gamma5 min over lambda < chi";
    o.inputs = {{"instances", std::to_string(R.gamma5_count)},
                {"argmin", std::to_string(R.gamma5_min.lambda) + "," + std::to_string(R.gamma5_min.chi)}};
    o.real_bound = R.gamma5_min.bound;
    o.bound = R.n1_lll;
    o.success = true;
    o.note = R.sampled ? "sampled (lambda, chi) pairs" : "all (lambda, chi) pairs";
    R.cert.provenance.push_back(o);
  }

  // (c') lambda = chi: Legendre on tau_lambda.
  std::vector<long> leg_lams;
  if (opt.sweep.full) {
    leg_lams = lams;
  } else {
    std::vector<long> want = opt.sweep.lambdas;
    for (long l = 1; l <= 20; ++l) want.push_back(l);
    leg_lams = sample_set(want, 1, lam_max);
  }
  R.aM_equal = 0;
  mpz_class n1_rational = 0;
  long p = std::max(kPrec, 2 * (long)mpz_sizeinbase(M.get_mpz_t(), 2) + 64);
  for (long l : leg_lams) {
    QAlpha prod = S.c * one_plus_alpha_pow(l);
    if (alpha_exponent(prod, l + 64)) {
      // Gamma_5 is a nonzero integer multiple of log alpha.
      R.rational_lambdas.push_back(l);
      mpz_class b = cutoff(log(num(S.g5, p) * num(M, p) / constants(p).log_alpha), opt.convention);
      n1_rational = std::max(n1_rational, b);
      continue;
    }
    RealFn lc = log_c_fn(f), l1 = log1p_alpha_fn(l);
    RealFn tau = [lc, l1](long q) { return abs(lc(q) + l1(q)) / constants(q).log_alpha; };
    CFExpansion cf = expand_until_q(tau, M, "tau_" + std::to_string(l), 0, pol);
    LegendreResult lr = legendre_bound(cf, M);
    if (lr.aM > R.aM_equal) {
      R.aM_equal = lr.aM;
      R.aM_equal_lambda = l;
    }
  }
  BigReal f5 = pub ? num(S.leg5, p) : num(S.g5, p) / constants(p).log_alpha;
  R.n1_equal = cutoff(log(f5 * num(mpz_class(R.aM_equal + 2), p) * num(M, p) * num(M, p)), opt.convention);
  R.n1_equal = std::max(R.n1_equal, n1_rational);
  {
    ReductionOutcome o;
    o.kind = ReductionKind::legendre;
    o.label = "tau_lambda family";
    o.inputs = {{"instances", std::to_string(leg_lams.size())},
                {"argmax lambda", std::to_string(R.aM_equal_lambda)}};
    o.real_bound = num(R.aM_equal);
    o.bound = R.n1_equal;
    o.success = true;
    o.note = "a(M)=" + R.aM_equal.get_str();
    if (!R.rational_lambdas.empty()) o.note += "; rational tau at lambda=" + std::to_string(R.rational_lambdas[0]);
    R.cert.provenance.push_back(o);
  }

  // (d) n1, then n2.
  R.n1 = std::max({R.nu, R.n1_lll, R.n1_equal});
  R.n1_used = R.n1;
  if (pub && R.n1 <= printed.n1) R.n1_used = printed.n1;
  const auto K = constants(kPrec);
  const BigReal la = K.log_alpha;
  R.log_delta = num(R.n1_used) * la + log(num(S.log_add));
  BigReal H2 = ab.g12 * R.log_delta * R.log_delta;
  R.n2_gl = floor_upper(gl_resolve(2, H2));
  {
    // Un-absorbed form of the two degree-6 inequalities.
    const BigReal log2 = log(num(2));
    BigReal A_c6 = matveev_A(S.c, 6, pol), A_a6 = matveev_A(QAlpha::alpha(), 6, pol);
    BigReal M4 = matveev_constant(4, 6, {num(3), A_c6, A_a6, num(1)}, kPrec);
    BigReal M3 = matveev_constant(3, 6, {num(3), A_c6, A_a6}, kPrec);
    const BigReal& L = R.log_delta;
    BigReal a0 = log(num(S.lam1)) / la;
    BigReal a1 = M4 * L * (log(num(S.lam2)) * 2 + log2 * 6) / la;
    BigReal a2 = M3 * M4 * L * L * 2 / la;
    R.n2_fixed = resolve_log_quadratic(a0, a1, a2, R.n2_gl).x;
  }
  R.n2 = std::min(R.n2_gl, R.n2_fixed);
  R.n2_used = R.n2;
  mpz_class printed_n2 = dec(printed.n2);
  if (pub && R.n2 <= printed_n2) R.n2_used = printed_n2;
  R.cert.provenance.push_back(gl_outcome("n2 via gl r=2", 2, H2, R.n2_gl));
  {
    ReductionOutcome o;
    o.kind = ReductionKind::gl;
    o.label = "n2 via fixed point";
    o.bound = R.n2_fixed;
    o.success = true;
    R.cert.provenance.push_back(o);
  }
  R.k1 = floor_upper((log(num(2)) + num(mpz_class(R.n1_used + S.k_shift)) * la) / S.smallest.log_delta(kPrec));

  R.cert.symbols = {{"lambda", R.lambda}, {"nu", R.nu}, {"chi", R.nu}, {"n1", R.n1_used},
                    {"n2", R.n2_used}, {"k1", R.k1}};
  R.cert.constants_used = {{"M", M.get_str()},
                           {"a(M)", R.legendre.aM.get_str()},
                           {"gamma4 min", sci(R.gamma4_min.bound, 4)},
                           {"gamma5 min", sci(R.gamma5_min.bound, 4)},
                           {"a(M) lambda=chi", R.aM_equal.get_str()},
                           {"log delta bound", sci(R.log_delta, 8)},
                           {"n1 derived", R.n1.get_str()},
                           {"n2 derived", R.n2.get_str()}};
  if (R.n1_used != R.n1) R.cert.notes.push_back("n1 " + R.n1.get_str() + " <= printed " + std::to_string(printed.n1) + "; printed value carried forward");
  if (R.n2_used != R.n2) R.cert.notes.push_back("n2 " + mpz_sci(R.n2, 4) + " <= printed " + printed.n2 + "; printed value carried forward");
  if (R.sampled) R.cert.notes.push_back("LLL and tau_lambda stages sampled; the n1 figure is not a certified bound");
  return R;
}

FirstReduction first_reduction(Family f, const AbsoluteBounds& ab, const CycleOptions& opt,
                               const PrecisionPolicy& pol) {
  const FamilySetup& S = setup(f);
  FirstReduction fr;
  mpz_class M = ab.n2;
  mpz_class printed = dec(S.printed.n2_abs);
  if (opt.convention == Convention::published && M <= printed) M = printed;
  for (int c = 1; c <= 2; ++c) {
    fr.cycles[c - 1] = reduction_cycle(f, c, M, ab, opt, pol);
    M = fr.cycles[c - 1].n2_used;
  }
  const CycleReport& last = fr.cycles[1];
  fr.cert = last.cert;
  fr.cert.stage = "first_reduction";
  fr.cert.provenance.clear();
  for (const auto& c : fr.cycles)
    for (const auto& o : c.cert.provenance) {
      ReductionOutcome q = o;
      q.label = "cycle" + std::to_string(c.cycle) + ": " + q.label;
      fr.cert.provenance.push_back(q);
    }
  mpz_class k1 = last.k1;
  if (opt.convention == Convention::published && k1 <= S.printed.k1) k1 = S.printed.k1;
  fr.cert.symbols["k1"] = k1;
  return fr;
}

// ---------------------------------------------------------------- final reduction

namespace {

// c (1 + alpha^-j) = alpha^e turns the stage-2 inequality into
// |k tau - p| < A alpha^-n, where BD has eps <= 0. For 0 < k < q_{i+1}
// best approximation gives |k tau - p| >= |q_i tau - p_i|, and
// delta^k <= 2 alpha^(n + shift) caps k in terms of n; iterate the two.
long degenerate_bound(Family f, const UnitValue& u, const CFExpansion& cf, const mpz_class& M, const RealFn& A) {
  const FamilySetup& S = setup(f);
  long p = kPrec + 2 * (long)mpz_sizeinbase(cf.q.back().get_mpz_t(), 2);
  const auto K = constants(p);
  BigReal tau = u.log_delta(p) / K.log_alpha;
  BigReal ld = u.log_delta(p);
  mpz_class kmax = M;
  long n = -1;
  for (int it = 0; it < 64; ++it) {
    size_t i = 0;
    while (i + 1 < cf.q.size() && cf.q[i + 1] <= kmax) ++i;
    if ((long)i + 1 > cf.certified_upto) throw InsufficientExpansion("degenerate stage 2: expansion too short");
    BigReal gap = abs(tau * cf.q[i] - BigReal::from_mpz(cf.p[i], p));
    long w = floor_upper(log(A(p) / gap) / K.log_alpha).get_si();
    if (n >= 0 && w >= n) break;
    n = w;
    kmax = floor_upper((log(BigReal::from_int(2, p)) + BigReal::from_int(n + S.k_shift, p) * K.log_alpha) / ld);
    if (kmax < 1) break;
  }
  return n;
}

}  // namespace

UnitReduction reduce_unit(Family f, const UnitValue& u, const mpz_class& M, const PrecisionPolicy& pol) {
  const FamilySetup& S = setup(f);
  UnitReduction ur;
  ur.unit = u;
  RealFn tau = [u](long p) { return u.log_delta(p) / constants(p).log_alpha; };
  CFExpansion cf = expand_until_q(tau, 6 * M, "log delta/log alpha", 60, pol);
  RealFn lc = log_c_fn(f);
  RealFn A2 = [g = S.gam2](long p) { return BigReal::from_mpq(g, p) / constants(p).log_alpha; };
  RealFn A1 = [g = S.gam1](long p) { return BigReal::from_mpq(g, p) / constants(p).log_alpha; };
  RealFn B = [](long p) { return constants(p).alpha; };

  BDInstance s1{"stage1 " + u.describe(), tau, [lc](long p) { return -(lc(p) / constants(p).log_alpha); },
                A2, B, M};
  ur.stage1 = bd_reduce(s1, cf, 50, pol);
  ur.stage1_record = ur.stage1.outcome(s1);
  if (!ur.stage1.success) throw HypothesisViolated("stage 1 failed for " + u.describe() + ": " + ur.stage1.failure);

  const long bt = ur.stage1.bound.get_si();
  for (long j = 1; j <= bt; ++j) {
    long w;
    if (alpha_exponent(S.c * one_plus_alpha_pow(j), j + 64)) {
      w = degenerate_bound(f, u, cf, M, A1);
      ur.legendre_j.push_back(j);
    } else {
      RealFn lj = log1p_alpha_fn(j);
      BDInstance s2{"stage2 j=" + std::to_string(j), tau,
                    [lc, lj](long p) { return -((lc(p) + lj(p)) / constants(p).log_alpha); }, A1, B, M};
      BDOutcome o = bd_reduce(s2, cf, 50, pol);
      if (!o.success)
        throw HypothesisViolated("stage 2 failed for " + u.describe() + " j=" + std::to_string(j));
      w = o.bound.get_si();
    }
    if (w > ur.stage2_max) {
      ur.stage2_max = w;
      ur.stage2_argmax = j;
    }
  }
  return ur;
}

long k2_cutoff(Family f, long n_max, Convention conv) {
  const FamilySetup& S = setup(f);
  BigReal y = log(num(2)) + num(n_max + S.k_shift) * log_base(conv, kPrec);
  return floor_upper(y / S.smallest.log_delta(kPrec)).get_si();
}

FinalReduction final_reduction(Family f, const FinalOptions& opt, const PrecisionPolicy& pol) {
  FinalReduction fr;
  TableSearchConfig tc;
  tc.family = f;
  tc.n_max = opt.n1;
  tc.k_max = opt.k1;
  fr.table = table_search(tc);
  fr.cert.eq = {f, 1};
  fr.cert.stage = "final_reduction";
  fr.cert.convention = opt.convention;
  long n_max = 0;
  for (const auto& u : fr.table.primitive) {
    UnitReduction ur = reduce_unit(f, u, opt.M, pol);
    fr.cert.provenance.push_back(ur.stage1_record);
    ReductionOutcome o;
    o.kind = ReductionKind::bd;
    o.label = "stage2 " + u.describe();
    o.bound = ur.stage2_max;
    o.success = true;
    o.note = "j=1.." + ur.stage1.bound.get_str() + ", max at j=" + std::to_string(ur.stage2_argmax);
    if (!ur.legendre_j.empty()) o.note += "; Legendre at j=" + std::to_string(ur.legendre_j[0]);
    fr.cert.provenance.push_back(o);
    n_max = std::max(n_max, ur.stage2_max);
    fr.units.push_back(std::move(ur));
  }
  fr.box.n_max = n_max;
  fr.box.k_max = k2_cutoff(f, n_max, opt.convention);
  fr.cert.symbols = {{"n2", n_max}, {"k2", fr.box.k_max}};
  fr.cert.constants_used = {{"M", opt.M.get_str()},
                            {"table n range", std::to_string(opt.n1)},
                            {"table k range", std::to_string(opt.k1)},
                            {"rows", std::to_string(fr.table.rows.size())},
                            {"primitive units", std::to_string(fr.table.primitive.size())}};
  return fr;
}

// ---------------------------------------------------------------- certify

bool Certification::chain_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CertifyCheck& c) { return c.ok; });
}

Certification certify(const EqKind& eq, const CertifyOptions& opt, const PrecisionPolicy& pol) {
  const Family f = eq.family;
  Certification C;
  C.eq = eq;
  C.options = opt;
  C.absolute = absolute_bounds(f, pol);

  CycleOptions co;
  co.convention = opt.convention;
  co.sweep = opt.sweep;
  co.sweep.full = !opt.sample;
  C.first = first_reduction(f, C.absolute, co, pol);

  const CycleReport& last = C.first.cycles[1];
  FinalOptions fo;
  fo.convention = opt.convention;
  fo.n1 = last.n1_used.get_si();
  fo.k1 = C.first.cert.symbols.at("k1").get_si();
  fo.M = last.n2_used;
  C.final = final_reduction(f, fo, pol);
  return certify(eq, C);
}

Certification certify(const EqKind& eq, const Certification& base) {
  if (base.eq.family != eq.family) throw DomainError("certify: base run is for the other family");
  const Family f = eq.family;
  Certification C;
  C.eq = eq;
  C.options = base.options;
  C.absolute = base.absolute;
  C.first = base.first;
  C.final = base.final;

  // n1 < n2 + 4 puts the first solution up to three indices above the box;
  // one more because the linear forms index P_n by a alpha^n while with
  // P_0 = 0 the dominant term is a alpha^(n-1).
  C.box = {C.final.box.k_max, C.final.box.n_max + 4};
  C.solutions = scan_final(eq, C.box, C.final.table.primitive);
  if (f == Family::quad) {
    // d = 2, 3 fall outside the rho >= (1 + sqrt 5)/2 argument; enumerate directly.
    for (auto& [d, recs] : small_d_sweep(eq, 3, C.box.k_max, C.box.n_max)) C.solutions[d] = recs;
  }
  C.theorem = verify_theorem(theorem_list(eq), C.solutions);

  auto check = [&](std::string name, bool ok, std::string detail) {
    C.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  mpz_class prev = C.absolute.n2;
  bool mono = true;
  std::string trail = mpz_sci(prev, 3);
  for (const auto& c : C.first.cycles) {
    mono = mono && c.n2_used <= prev;
    prev = c.n2_used;
    trail += " -> " + mpz_sci(prev, 3);
  }
  mono = mono && C.final.box.n_max <= prev;
  trail += " -> " + std::to_string(C.final.box.n_max);
  check("n2 monotone", mono, trail);

  mpz_class n1prev = C.absolute.n1;
  bool mono1 = true;
  for (const auto& c : C.first.cycles) {
    mono1 = mono1 && c.n1_used <= n1prev;
    n1prev = c.n1_used;
  }
  check("n1 monotone", mono1,
        mpz_sci(C.absolute.n1, 3) + " -> " + C.first.cycles[0].n1_used.get_str() + " -> " +
            C.first.cycles[1].n1_used.get_str());

  long pairs = 0;
  std::string bad;
  for (const auto& [d, recs] : C.solutions)
    for (size_t i = 0; i < recs.size(); ++i)
      for (size_t j = i + 1; j < recs.size(); ++j) {
        ++pairs;
        long n1 = recs[i].reps.front().first, n2 = recs[j].reps.front().first;
        if (!(n1 < n2 + 4)) bad += " d=" + d.get_str();
      }
  check("n1 < n2 + 4", bad.empty(), std::to_string(pairs) + " solution pairs" + (bad.empty() ? "" : ";" + bad));

  bool in_box = true;
  for (const auto& [d, recs] : C.solutions)
    for (const auto& r : recs) {
      for (const auto& [n, m] : r.reps)
        if (padovan(n) + padovan(m) != r.x) in_box = false;
      mpz_class x2 = r.x * r.x - eq.rhs();
      mpz_class y2 = x2 / d;
      if (x2 % d != 0 || !mpz_perfect_square_p(y2.get_mpz_t())) in_box = false;
    }
  check("solutions re-verified", in_box, std::to_string(C.solutions.size()) + " values of d");
  return C;
}

}  // namespace pellpad
