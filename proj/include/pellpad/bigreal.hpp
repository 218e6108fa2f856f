#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <stdexcept>
#include <string>

namespace pellpad {

class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AmbiguousAtPrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrecisionPolicy {
  long start_bits = 256;
  long max_bits = 1L << 20;
  long growth = 2;

  // PELLPAD_PRECISION_BITS overrides start_bits when set.
  static PrecisionPolicy from_env();
};

// Midpoint-radius ball. The exact value lies in [mid - rad, mid + rad].
class BigReal {
 public:
  explicit BigReal(long prec = 256);
  BigReal(const BigReal& o);
  BigReal(BigReal&& o) noexcept;
  BigReal& operator=(const BigReal& o);
  BigReal& operator=(BigReal&& o) noexcept;
  ~BigReal();

  static BigReal from_int(long v, long prec);
  static BigReal from_mpz(const mpz_class& v, long prec);
  static BigReal from_mpq(const mpq_class& v, long prec);
  // Exact decimal literal such as "4.87e165" or "0.3100".
  static BigReal from_decimal(const std::string& s, long prec);
  static BigReal from_mid_rad(mpfr_srcptr mid, mpfr_srcptr rad, long prec);

  long prec() const { return prec_; }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }

  // Directed endpoints, exactly representable at `bits` after outward rounding.
  void lower(mpfr_ptr out) const;
  void upper(mpfr_ptr out) const;
  mpq_class lower_q() const;
  mpq_class upper_q() const;
  double approx() const;
  double log10_approx() const;
  std::string to_string(int digits = 20) const;
  // Short scientific form like "8.93366e43" for tables.
  std::string sci(int digits) const;

  bool contains(const mpq_class& q) const;
  bool contains_zero() const;
  bool certainly_positive() const;
  bool certainly_negative() const;
  // Radius relative to |mid|, as a log2 figure; large negative is good.
  double rel_accuracy_bits() const;

  BigReal operator-() const;
  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator*(const BigReal& a, const mpz_class& b);
  friend BigReal operator+(const BigReal& a, long b);
  friend BigReal operator-(const BigReal& a, long b);
  friend BigReal operator/(const BigReal& a, long b);

  // Hull of two balls.
  static BigReal hull(const BigReal& a, const BigReal& b);

 private:
  void add_rounding_error(int ternary);
  long prec_;
  mpfr_t mid_;
  mpfr_t rad_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal cbrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal pow(const BigReal& x, long n);
BigReal max(const BigReal& a, const BigReal& b);

enum class Ordering { less, greater, unknown };
Ordering certified_compare(const BigReal& x, const BigReal& y);
const char* to_string(Ordering o);

mpz_class certified_floor(const BigReal& x);
mpz_class certified_round(const BigReal& x);
// Floor of the upper endpoint: a safe integer upper bound, never ambiguous.
mpz_class floor_upper(const BigReal& x);

mpq_class parse_decimal(const std::string& s);
std::string mpz_sci(const mpz_class& z, int digits);

// Evaluate `f` at growing precision until it stops throwing
// AmbiguousAtPrecision / PrecisionExhausted, or the policy runs out.
template <class F>
auto with_precision(const PrecisionPolicy& pol, F&& f) -> decltype(f(0L)) {
  for (long p = pol.start_bits; p <= pol.max_bits; p *= pol.growth) {
    try {
      return f(p);
    } catch (const AmbiguousAtPrecision&) {
    } catch (const PrecisionExhausted&) {
    }
  }
  throw PrecisionExhausted("precision policy exhausted at " + std::to_string(pol.max_bits) +
                           " bits");
}

struct AlgebraicConstants {
  long prec = 0;
  BigReal alpha, abs_beta, a, abs_b, r1, r2;
  BigReal log_alpha, log_a, log_2a;
};

// Certified constants of x^3 - x - 1; throws PrecisionExhausted if the
// invariants cannot be certified at `prec`.
AlgebraicConstants constants(long prec);
AlgebraicConstants constants(const PrecisionPolicy& pol);

}  // namespace pellpad
