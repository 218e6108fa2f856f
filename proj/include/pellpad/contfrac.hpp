#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

#include "pellpad/bigreal.hpp"

namespace pellpad {

class InsufficientExpansion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SquareArgument : public DomainError {
 public:
  using DomainError::DomainError;
};

struct CFExpansion {
  std::string source;
  std::vector<mpz_class> quotients;
  std::vector<mpz_class> p, q;  // convergents p_i / q_i
  long certified_upto = -1;     // last index certified
  long precision_bits = 0;      // working precision that certified it
  // sqrt(d) only: quotients = a0 followed by one full period.
  long period = 0;

  size_t size() const { return quotients.size(); }
  void rebuild_convergents();
};

// Real number given as a ball at any requested precision.
using RealFn = std::function<BigReal(long prec)>;

// Partial quotients of an exact rational interval [lo, hi]: the terms on which
// every point of the interval agrees.
std::vector<mpz_class> common_quotients(mpq_class lo, mpq_class hi, size_t max_terms);

CFExpansion expand(const RealFn& x, size_t n_terms, const std::string& source = "",
                   const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// Expand until some q_N exceeds M (plus `extra` terms beyond it).
CFExpansion expand_until_q(const RealFn& x, const mpz_class& M, const std::string& source = "",
                           size_t extra = 0, const PrecisionPolicy& pol = PrecisionPolicy::from_env());

// Exact expansion of a rational p/q (finite).
CFExpansion expand_rational(const mpq_class& r);

struct LegendreResult {
  long N = -1;         // smallest index with q_N > M
  mpz_class aM;        // max a_i, 0 <= i <= N
  long argmax = -1;
  mpz_class qN;
};

LegendreResult legendre_bound(const CFExpansion& cf, const mpz_class& M);

// Periodic expansion of sqrt(d) by the exact PQa recurrence.
CFExpansion sqrt_cf(const mpz_class& d);

}  // namespace pellpad
