#include "pellpad/bigreal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace pellpad {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

// Scoped mpfr temporary.
struct Tmp {
  mpfr_t v;
  explicit Tmp(mpfr_prec_t p = kRadPrec) { mpfr_init2(v, p); }
  ~Tmp() { mpfr_clear(v); }
  Tmp(const Tmp&) = delete;
  Tmp& operator=(const Tmp&) = delete;
  operator mpfr_ptr() { return v; }
};

long max_prec(const BigReal& a, const BigReal& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

PrecisionPolicy PrecisionPolicy::from_env() {
  PrecisionPolicy p;
  if (const char* s = std::getenv("PELLPAD_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && v >= 64) {
      p.start_bits = v;
      if (p.max_bits < v) p.max_bits = v;
    }
  }
  return p;
}

BigReal::BigReal(long prec) : prec_(prec) {
  mpfr_init2(mid_, prec);
  mpfr_set_zero(mid_, 1);
  mpfr_init2(rad_, kRadPrec);
  mpfr_set_zero(rad_, 1);
}

BigReal::BigReal(const BigReal& o) : prec_(o.prec_) {
  mpfr_init2(mid_, prec_);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_init2(rad_, kRadPrec);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

BigReal::BigReal(BigReal&& o) noexcept : BigReal(o.prec_) {
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
}

BigReal& BigReal::operator=(const BigReal& o) {
  if (this == &o) return *this;
  prec_ = o.prec_;
  mpfr_set_prec(mid_, prec_);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
  return *this;
}

BigReal& BigReal::operator=(BigReal&& o) noexcept {
  std::swap(prec_, o.prec_);
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
  return *this;
}

BigReal::~BigReal() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

void BigReal::add_rounding_error(int ternary) {
  if (ternary == 0 || mpfr_zero_p(mid_)) return;
  Tmp e;
  mpfr_set_ui_2exp(e, 1, mpfr_get_exp(mid_) - prec_, MPFR_RNDU);
  mpfr_add(rad_, rad_, e, MPFR_RNDU);
}

BigReal BigReal::from_int(long v, long prec) {
  BigReal r(prec);
  r.add_rounding_error(mpfr_set_si(r.mid_, v, MPFR_RNDN));
  return r;
}

BigReal BigReal::from_mpz(const mpz_class& v, long prec) {
  BigReal r(prec);
  r.add_rounding_error(mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN));
  return r;
}

BigReal BigReal::from_mpq(const mpq_class& v, long prec) {
  BigReal r(prec);
  r.add_rounding_error(mpfr_set_q(r.mid_, v.get_mpq_t(), MPFR_RNDN));
  return r;
}

BigReal BigReal::from_decimal(const std::string& s, long prec) {
  return from_mpq(parse_decimal(s), prec);
}

BigReal BigReal::from_mid_rad(mpfr_srcptr mid, mpfr_srcptr rad, long prec) {
  BigReal r(prec);
  r.add_rounding_error(mpfr_set(r.mid_, mid, MPFR_RNDN));
  mpfr_add(r.rad_, r.rad_, rad, MPFR_RNDU);
  return r;
}

void BigReal::lower(mpfr_ptr out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
void BigReal::upper(mpfr_ptr out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

mpq_class BigReal::lower_q() const {
  Tmp t(prec_ + kRadPrec + 8);
  lower(t);
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), t);
  return q;
}

mpq_class BigReal::upper_q() const {
  Tmp t(prec_ + kRadPrec + 8);
  upper(t);
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), t);
  return q;
}

double BigReal::approx() const { return mpfr_get_d(mid_, MPFR_RNDN); }

double BigReal::log10_approx() const {
  Tmp t(64);
  mpfr_abs(t, mid_, MPFR_RNDN);
  mpfr_log10(t, t, MPFR_RNDN);
  return mpfr_get_d(t, MPFR_RNDN);
}

std::string BigReal::to_string(int digits) const {
  std::ostringstream os;
  char buf[64];
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, mid_, MPFR_RNDN);
  std::string m(s);
  mpfr_free_str(s);
  bool neg = !m.empty() && m[0] == '-';
  if (neg) m.erase(0, 1);
  os << (neg ? "-" : "") << m[0] << '.' << m.substr(1) << 'e' << (long)e - 1;
  std::snprintf(buf, sizeof buf, " +/- %.3e", mpfr_get_d(rad_, MPFR_RNDU));
  os << buf;
  return os.str();
}

std::string BigReal::sci(int digits) const {
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, mid_, MPFR_RNDN);
  std::string m(s);
  mpfr_free_str(s);
  bool neg = !m.empty() && m[0] == '-';
  if (neg) m.erase(0, 1);
  std::string out = (neg ? "-" : "") + m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  return out + "e" + std::to_string((long)e - 1);
}

bool BigReal::contains(const mpq_class& q) const { return lower_q() <= q && q <= upper_q(); }

bool BigReal::contains_zero() const { return !certainly_positive() && !certainly_negative(); }

bool BigReal::certainly_positive() const {
  Tmp t(prec_ + 8);
  lower(t);
  return mpfr_sgn(t.v) > 0;
}

bool BigReal::certainly_negative() const {
  Tmp t(prec_ + 8);
  upper(t);
  return mpfr_sgn(t.v) < 0;
}

double BigReal::rel_accuracy_bits() const {
  if (mpfr_zero_p(rad_)) return -1e9;
  if (mpfr_zero_p(mid_)) return 1e9;
  return (double)(mpfr_get_exp(rad_) - mpfr_get_exp(mid_));
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
  return r;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b));
  int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b));
  int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(max_prec(a, b));
  int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  Tmp am, bm, x;
  mpfr_abs(am, a.mid_, MPFR_RNDU);
  mpfr_abs(bm, b.mid_, MPFR_RNDU);
  mpfr_mul(r.rad_, am, b.rad_, MPFR_RNDU);
  mpfr_mul(x, bm, a.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, x, MPFR_RNDU);
  mpfr_mul(x, a.rad_, b.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, x, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  Tmp den;
  mpfr_abs(den, b.mid_, MPFR_RNDD);
  mpfr_sub(den, den, b.rad_, MPFR_RNDD);
  if (mpfr_sgn(den.v) <= 0) throw AmbiguousAtPrecision("division by a ball containing zero");
  BigReal r(max_prec(a, b));
  int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  Tmp q, num;
  mpfr_abs(q, a.mid_, MPFR_RNDU);
  Tmp bm;
  mpfr_abs(bm, b.mid_, MPFR_RNDD);
  mpfr_div(q, q, bm, MPFR_RNDU);
  mpfr_mul(num, q, b.rad_, MPFR_RNDU);
  mpfr_add(num, num, a.rad_, MPFR_RNDU);
  mpfr_div(r.rad_, num, den, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

BigReal operator*(const BigReal& a, long b) { return a * BigReal::from_int(b, a.prec()); }
BigReal operator*(const BigReal& a, const mpz_class& b) {
  return a * BigReal::from_mpz(b, std::max<long>(a.prec(), (long)mpz_sizeinbase(b.get_mpz_t(), 2) + 8));
}
BigReal operator+(const BigReal& a, long b) { return a + BigReal::from_int(b, a.prec()); }
BigReal operator-(const BigReal& a, long b) { return a - BigReal::from_int(b, a.prec()); }
BigReal operator/(const BigReal& a, long b) { return a / BigReal::from_int(b, a.prec()); }

BigReal BigReal::hull(const BigReal& a, const BigReal& b) {
  long p = max_prec(a, b);
  Tmp lo(p + kRadPrec), hi(p + kRadPrec), t(p + kRadPrec);
  a.lower(lo);
  b.lower(t);
  mpfr_min(lo, lo, t, MPFR_RNDD);
  a.upper(hi);
  b.upper(t);
  mpfr_max(hi, hi, t, MPFR_RNDU);
  BigReal r(p);
  int tern = mpfr_add(r.mid_, lo, hi, MPFR_RNDN);
  mpfr_div_2ui(r.mid_, r.mid_, 1, MPFR_RNDN);
  r.add_rounding_error(tern);
  Tmp w(p + kRadPrec);
  mpfr_sub(w, hi, lo, MPFR_RNDU);
  mpfr_div_2ui(w, w, 1, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, w, MPFR_RNDU);
  return r;
}

BigReal abs(const BigReal& x) {
  if (x.certainly_negative()) return -x;
  if (x.certainly_positive()) return x;
  // Straddles zero: [0, |mid| + rad].
  Tmp hi(x.prec() + kRadPrec);
  mpfr_abs(hi, x.mid(), MPFR_RNDU);
  mpfr_add(hi, hi, x.rad(), MPFR_RNDU);
  Tmp half(x.prec() + kRadPrec);
  mpfr_div_2ui(half, hi, 1, MPFR_RNDU);
  return BigReal::from_mid_rad(half, half, x.prec());
}

BigReal max(const BigReal& a, const BigReal& b) {
  switch (certified_compare(a, b)) {
    case Ordering::less:
      return b;
    case Ordering::greater:
      return a;
    default:
      return BigReal::hull(a, b);
  }
}

// Mean-value enclosure around a correctly rounded kernel value:
// |f(x) - f(m)| <= r * sup|f'| on [m - r, m + r].
namespace {

BigReal enclose(mpfr_srcptr value, int ternary, mpfr_srcptr lipschitz_rad, long prec) {
  Tmp rad;
  mpfr_set(rad, lipschitz_rad, MPFR_RNDU);
  if (ternary != 0 && !mpfr_zero_p(value)) {
    Tmp e;
    mpfr_set_ui_2exp(e, 1, mpfr_get_exp(value) - prec, MPFR_RNDU);
    mpfr_add(rad, rad, e, MPFR_RNDU);
  }
  BigReal r = BigReal::from_mid_rad(value, rad, prec);
  return r;
}

}  // namespace

BigReal sqrt(const BigReal& x) {
  Tmp lo(x.prec() + 8);
  x.lower(lo);
  if (mpfr_sgn(lo.v) <= 0) {
    if (mpfr_zero_p(x.mid()) && mpfr_zero_p(x.rad())) return BigReal(x.prec());
    throw AmbiguousAtPrecision("sqrt of a ball touching zero");
  }
  Tmp m(x.prec());
  int t = mpfr_sqrt(m, x.mid(), MPFR_RNDN);
  Tmp slo, rad;
  mpfr_sqrt(slo, lo, MPFR_RNDD);
  mpfr_div(rad, x.rad(), slo, MPFR_RNDU);
  return enclose(m, t, rad, x.prec());
}

BigReal cbrt(const BigReal& x) {
  if (x.certainly_negative()) return -cbrt(-x);
  Tmp lo(x.prec() + 8);
  x.lower(lo);
  if (mpfr_sgn(lo.v) <= 0) throw AmbiguousAtPrecision("cbrt of a ball touching zero");
  Tmp m(x.prec());
  int t = mpfr_cbrt(m, x.mid(), MPFR_RNDN);
  // d/dx x^(1/3) = 1/(3 x^(2/3)) is largest at the lower endpoint.
  Tmp c, rad;
  mpfr_cbrt(c, lo, MPFR_RNDD);
  mpfr_sqr(c, c, MPFR_RNDD);
  mpfr_mul_ui(c, c, 3, MPFR_RNDD);
  mpfr_div(rad, x.rad(), c, MPFR_RNDU);
  return enclose(m, t, rad, x.prec());
}

BigReal log(const BigReal& x) {
  Tmp lo(x.prec() + 8);
  x.lower(lo);
  if (mpfr_sgn(lo.v) <= 0) throw AmbiguousAtPrecision("log of a ball touching zero");
  Tmp m(x.prec());
  int t = mpfr_log(m, x.mid(), MPFR_RNDN);
  Tmp l, rad;
  mpfr_set(l, lo.v, MPFR_RNDD);
  mpfr_div(rad, x.rad(), l, MPFR_RNDU);
  return enclose(m, t, rad, x.prec());
}

BigReal exp(const BigReal& x) {
  Tmp m(x.prec());
  int t = mpfr_exp(m, x.mid(), MPFR_RNDN);
  Tmp em, er, rad;
  mpfr_exp(em, x.mid(), MPFR_RNDU);
  mpfr_expm1(er, x.rad(), MPFR_RNDU);
  mpfr_mul(rad, em, er, MPFR_RNDU);
  return enclose(m, t, rad, x.prec());
}

BigReal pow(const BigReal& x, long n) {
  if (n < 0) return BigReal::from_int(1, x.prec()) / pow(x, -n);
  BigReal result = BigReal::from_int(1, x.prec());
  BigReal base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Ordering certified_compare(const BigReal& x, const BigReal& y) {
  BigReal d = x - y;
  if (d.certainly_positive()) return Ordering::greater;
  if (d.certainly_negative()) return Ordering::less;
  return Ordering::unknown;
}

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::less:
      return "less";
    case Ordering::greater:
      return "greater";
    default:
      return "unknown";
  }
}

namespace {

mpz_class floor_of(mpfr_srcptr v) {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v, MPFR_RNDD);
  return z;
}

long endpoint_prec(const BigReal& x) {
  long e = mpfr_zero_p(x.mid()) ? 0 : std::labs((long)mpfr_get_exp(x.mid()));
  return std::max<long>(x.prec(), e) + kRadPrec + 8;
}

}  // namespace

mpz_class certified_floor(const BigReal& x) {
  Tmp lo(endpoint_prec(x)), hi(endpoint_prec(x));
  x.lower(lo);
  x.upper(hi);
  mpz_class a = floor_of(lo), b = floor_of(hi);
  if (a != b) throw AmbiguousAtPrecision("floor straddles an integer: " + x.to_string(12));
  return a;
}

mpz_class certified_round(const BigReal& x) {
  mpq_class half(1, 2);
  return certified_floor(x + BigReal::from_mpq(half, x.prec()));
}

mpz_class floor_upper(const BigReal& x) {
  Tmp hi(endpoint_prec(x));
  x.upper(hi);
  return floor_of(hi);
}

mpq_class parse_decimal(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != '_' && c != ' ') s += c;
  if (s.empty()) throw std::invalid_argument("empty decimal literal");
  size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits += c;
      any = true;
      if (seen_dot) --exp10;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("bad decimal literal: " + raw);
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("bad decimal literal: " + raw);
    ++i;
    size_t used = 0;
    long e = std::stol(s.substr(i), &used);
    if (i + used != s.size()) throw std::invalid_argument("bad decimal literal: " + raw);
    exp10 += e;
  }
  mpz_class num(digits, 10);
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, (unsigned long)std::labs(exp10));
  mpq_class q = exp10 >= 0 ? mpq_class(num * p10) : mpq_class(num, p10);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

std::string mpz_sci(const mpz_class& z, int digits) {
  std::string s = mpz_class(abs(z)).get_str();
  std::string sign = z < 0 ? "-" : "";
  if ((int)s.size() <= digits) return sign + s;
  std::string out = sign + s.substr(0, 1);
  std::string frac = s.substr(1, digits - 1);
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  return out + "e" + std::to_string(s.size() - 1);
}

namespace {

AlgebraicConstants compute_constants(long prec) {
  const long p = prec + 32;
  auto I = [&](long v) { return BigReal::from_int(v, p); };
  AlgebraicConstants k;
  k.prec = prec;
  BigReal s69 = sqrt(I(69));
  k.r1 = cbrt(I(108) + s69 * 12);
  k.r2 = cbrt(I(108) - s69 * 12);
  k.alpha = (k.r1 + k.r2) / 6;
  // beta * gamma = alpha^2 - 1 and |beta| = |gamma|.
  k.abs_beta = sqrt(k.alpha * k.alpha - 1);
  k.a = k.alpha * (k.alpha + 1) / (k.alpha * k.alpha * 3 - 1);
  // a * b * c = 1/23 and b, c are conjugate.
  k.abs_b = BigReal::from_int(1, p) / sqrt(k.a * 23);
  k.log_alpha = log(k.alpha);
  k.log_a = log(k.a);
  k.log_2a = log(k.a * 2);

  auto in = [&](const BigReal& x, const char* lo, const char* hi) {
    return certified_compare(x, BigReal::from_decimal(lo, p)) == Ordering::greater &&
           certified_compare(x, BigReal::from_decimal(hi, p)) == Ordering::less;
  };
  auto psi = [&](const BigReal& x) { return x * x * x - x - 1; };
  bool ok = in(k.alpha, "1.32", "1.33") && in(k.abs_beta, "0.86", "0.87") &&
            in(k.a, "0.72", "0.73") && in(k.abs_b, "0.24", "0.25") && psi(k.alpha).contains_zero();
  if (ok) {
    // Sign change of psi across alpha +/- 2 rad isolates the root.
    Tmp lo(p + 80), hi(p + 80), r2(p + 80);
    mpfr_mul_2ui(r2, k.alpha.rad(), 1, MPFR_RNDU);
    mpfr_sub(lo, k.alpha.mid(), r2, MPFR_RNDD);
    mpfr_add(hi, k.alpha.mid(), r2, MPFR_RNDU);
    Tmp zero;
    mpfr_set_zero(zero, 1);
    BigReal blo = BigReal::from_mid_rad(lo, zero, p + 80), bhi = BigReal::from_mid_rad(hi, zero, p + 80);
    ok = psi(blo).certainly_negative() && psi(bhi).certainly_positive();
  }
  if (!ok) throw PrecisionExhausted("constants not certified at " + std::to_string(prec) + " bits");
  return k;
}

}  // namespace

AlgebraicConstants constants(long prec) {
  if (prec < 64) throw DomainError("constants need at least 64 bits");
  static std::mutex mu;
  static std::map<long, std::shared_ptr<const AlgebraicConstants>> cache;
  {
    std::lock_guard<std::mutex> g(mu);
    auto it = cache.find(prec);
    if (it != cache.end()) return *it->second;
  }
  auto k = std::make_shared<const AlgebraicConstants>(compute_constants(prec));
  std::lock_guard<std::mutex> g(mu);
  cache.emplace(prec, k);
  return *k;
}

AlgebraicConstants constants(const PrecisionPolicy& pol) {
  return with_precision(pol, [](long p) { return constants(p); });
}

}  // namespace pellpad
